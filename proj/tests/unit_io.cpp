#include "doctest.h"

#include <sstream>

#include "fnd/errors.hpp"
#include "fnd/io.hpp"

using namespace fnd;

namespace {

const char* kPair = R"(# worked pair complex
field Q
value_basis 2 1 sqrt2
gamma0_rank 2
omega 1 0
omega 0 1
gen u grading 1 action 3 0
gen v grading 0 action 1 0
bnd u v : 1@0 0
)";

bool specs_equal(const ComplexSpec& a, const ComplexSpec& b) {
    if (a.orbits.size() != b.orbits.size() || a.entries.size() != b.entries.size()) return false;
    for (size_t i = 0; i < a.orbits.size(); ++i) {
        if (a.orbits[i].id != b.orbits[i].id) return false;
        if (a.orbits[i].grading != b.orbits[i].grading) return false;
        if (!(a.orbits[i].action == b.orbits[i].action)) return false;
    }
    for (const auto& [key, s] : a.entries) {
        auto it = b.entries.find(key);
        if (it == b.entries.end()) return false;
        if (s.terms().size() != it->second.terms().size()) return false;
        for (size_t t = 0; t < s.terms().size(); ++t) {
            if (!(s.terms()[t].g == it->second.terms()[t].g)) return false;
            if (!(s.terms()[t].c == it->second.terms()[t].c)) return false;
        }
    }
    if (a.window_override.has_value() != b.window_override.has_value()) return false;
    if (a.window_override && !(*a.window_override == *b.window_override)) return false;
    return a.cfg->same_as(*b.cfg);
}

} // namespace

TEST_CASE("parse the worked pair complex") {
    std::istringstream in(kPair);
    ComplexSpec s = parse_fnc(in);
    CHECK(s.orbits.size() == 2);
    CHECK(s.cfg->dense());
    CHECK(s.orbits[0].action == ExactValue::rational(3));
    CHECK(s.entries.at({0, 1}).terms().size() == 1);
    CHECK(validate(s).ok());
}

TEST_CASE("round trip is bit-exact") {
    std::istringstream in(kPair);
    ComplexSpec s = parse_fnc(in);
    s.window_override = ExactValue(mpq_class(7, 2), mpq_class(1, 3));
    std::ostringstream out;
    write_fnc(out, s);
    std::istringstream back(out.str());
    ComplexSpec s2 = parse_fnc(back);
    CHECK(specs_equal(s, s2));
}

TEST_CASE("round trip over GF(5), discrete profile, scaled basis") {
    std::istringstream in(R"(
field GF 5
value_basis 1 2/3*1
gamma0_rank 1
omega 1
gen a grading 0 action 6
gen b grading 1 action 9
bnd b a : 3@1 ; 1@2
)");
    ComplexSpec s = parse_fnc(in);
    CHECK(s.cfg->field().p == 5);
    CHECK(!s.cfg->dense());
    CHECK(s.orbits[0].action == ExactValue::rational(4)); // 6 * 2/3
    std::ostringstream out;
    write_fnc(out, s);
    std::istringstream back(out.str());
    CHECK(specs_equal(s, parse_fnc(back)));
}

TEST_CASE("parse errors carry line numbers") {
    auto expect_line = [](const char* text, int line) {
        std::istringstream in(text);
        try {
            parse_fnc(in);
            FAIL_CHECK("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line == line);
        }
    };
    expect_line("field X\n", 1);
    expect_line("field Q\nvalue_basis 1 1\ngamma0_rank 1\nomega bogus\n", 4);
    expect_line(
        "field Q\nvalue_basis 1 1\ngamma0_rank 1\nomega 1\ngen a grading 0 action 1\nbnd a a : 1@0\n",
        6); // unknown/invalid structure: a -> a is a grading violation at line 6
    expect_line("gen a grading 0 action 1\n", 1); // config must come first
}

TEST_CASE("invariant violations are rejected unless asked not to") {
    const char* bad = R"(
field Q
value_basis 1 1
gamma0_rank 1
omega 1
gen u grading 1 action 3
gen v grading 0 action 4
bnd u v : 1@0
)";
    {
        std::istringstream in(bad);
        CHECK_THROWS_AS(parse_fnc(in), ParseError);
    }
    {
        std::istringstream in(bad);
        ComplexSpec s = parse_fnc(in, false);
        CHECK(!validate(s).ok());
    }
}

TEST_CASE("chain round trip") {
    std::istringstream in(kPair);
    ComplexSpec s = parse_fnc(in);
    std::istringstream cin_(
        "chain 1 : 1@0 0 * u ; 2@1 0 * u ; -1/3@0 1 * u\n");
    Chain c = parse_chain(cin_, s);
    CHECK(c.degree == 1);
    CHECK(c.coeffs[0].terms().size() == 3);
    std::ostringstream out;
    write_chain(out, s, c);
    std::istringstream back(out.str());
    Chain c2 = parse_chain(back, s);
    REQUIRE(c2.coeffs.size() == c.coeffs.size());
    for (size_t i = 0; i < c.coeffs.size(); ++i)
        CHECK((c.coeffs[i] - c2.coeffs[i]).is_zero());
    std::istringstream badchain("chain 0 : 1@0 0 * u\n");
    CHECK_THROWS_AS(parse_chain(badchain, s), ParseError);
}
