#include "doctest.h"

#include "fnd/complex.hpp"
#include "fnd/errors.hpp"

using namespace fnd;

namespace {

Gamma0Elem g2(long a, long b) { return Gamma0Elem{{a, b}}; }

NovikovScalar mono(const ConfigPtr& cfg, long a, long b, long c = 1) {
    return NovikovScalar::monomial(cfg, g2(a, b), Fq(mpq_class(c), cfg->field()));
}

// u (degree 1, action 3) -> v (degree 0, action 1) with du = v.
ComplexSpec pair_complex(ConfigPtr cfg) {
    ComplexSpec s;
    s.cfg = cfg;
    s.orbits = {{"u", 1, ExactValue::rational(3)}, {"v", 0, ExactValue::rational(1)}};
    s.entries.emplace(std::make_pair(0, 1), NovikovScalar::one(cfg));
    s.reindex();
    return s;
}

// w -> u1, u2 -> v square with d^2 = 0.
ComplexSpec square_complex(ConfigPtr cfg) {
    ComplexSpec s;
    s.cfg = cfg;
    s.orbits = {{"w", 2, ExactValue::rational(5)},
                {"u1", 1, ExactValue::rational(3)},
                {"u2", 1, ExactValue(2, 1)},
                {"v", 0, ExactValue::rational(1)}};
    s.entries.emplace(std::make_pair(0, 1), NovikovScalar::one(cfg));
    s.entries.emplace(std::make_pair(0, 2), -NovikovScalar::one(cfg));
    s.entries.emplace(std::make_pair(1, 3), NovikovScalar::one(cfg));
    s.entries.emplace(std::make_pair(2, 3), NovikovScalar::one(cfg));
    s.reindex();
    return s;
}

} // namespace

TEST_CASE("validate accepts well-formed complexes") {
    ConfigPtr cfg = ValuationConfig::dense_default();
    CHECK(validate(pair_complex(cfg)).ok());
    CHECK(validate(square_complex(cfg)).ok());
}

TEST_CASE("validate reports violations with locations") {
    ConfigPtr cfg = ValuationConfig::dense_default();
    SUBCASE("grading axiom") {
        ComplexSpec s = pair_complex(cfg);
        s.orbits[1].grading = 1;
        s.reindex();
        auto rep = validate(s);
        REQUIRE(!rep.ok());
        CHECK(rep.str().find("grading") != std::string::npos);
    }
    SUBCASE("filtration axiom") {
        ComplexSpec s = pair_complex(cfg);
        // nu(coeff) = -3 <= t_v - t_u = -2: the boundary rises in level.
        s.entries[{0, 1}] = mono(cfg, -3, 0);
        auto rep = validate(s);
        REQUIRE(!rep.ok());
        CHECK(rep.str().find("filtration") != std::string::npos);
    }
    SUBCASE("boundary squared") {
        ComplexSpec s = square_complex(cfg);
        s.entries[{0, 2}] = NovikovScalar::one(cfg); // drop the sign
        auto rep = validate(s);
        REQUIRE(!rep.ok());
        CHECK(rep.str().find("boundary^2") != std::string::npos);
    }
    SUBCASE("truncated entry") {
        ComplexSpec s = pair_complex(cfg);
        s.entries[{0, 1}] = NovikovScalar::one(cfg).truncated(ExactValue::rational(5));
        CHECK(!validate(s).ok());
    }
}

TEST_CASE("filtration level and boundary") {
    ConfigPtr cfg = ValuationConfig::dense_default();
    ComplexSpec s = square_complex(cfg);
    Chain c = zero_chain(s, 1);
    CHECK(ell(s, c).is_neg_inf());
    c.coeffs[0] = mono(cfg, 1, 0);      // g*u1: level 3 - 1 = 2
    c.coeffs[1] = mono(cfg, 0, -1);     // level (2 + sqrt2) + sqrt2
    CHECK(ell(s, c) == Level(ExactValue(2, 2)));
    Chain dc = boundary_apply(s, c);
    CHECK(dc.degree == 0);
    CHECK(ell(s, dc) < ell(s, c));
    // d(w) has level max(3, 2 + sqrt2) = 2 + sqrt2 < 5.
    Chain w = zero_chain(s, 2);
    w.coeffs[0] = NovikovScalar::one(cfg);
    Chain dw = boundary_apply(s, w);
    CHECK(ell(s, dw) == Level(ExactValue(2, 1)));
    CHECK(chain_is_zero(boundary_apply(s, dw)));
}

TEST_CASE("level with truncated coefficients") {
    ConfigPtr cfg = ValuationConfig::dense_default();
    ComplexSpec s = square_complex(cfg);
    Chain c = zero_chain(s, 1);
    c.coeffs[0] = NovikovScalar::one(cfg); // level 3
    c.coeffs[1] = NovikovScalar::zero(cfg).truncated(ExactValue::rational(10));
    // Bound from the truncated slot: (2 + sqrt2) - 10 < 3: conclusive.
    CHECK(ell(s, c) == Level(ExactValue::rational(3)));
    // Cutoff 1/4: the unknown tail could reach level (2 + sqrt2) - 1/4 > 3.
    c.coeffs[1] = NovikovScalar::zero(cfg).truncated(ExactValue::rational(mpq_class(1, 4)));
    CHECK_THROWS_AS(ell(s, c), PrecisionExhausted);
}

TEST_CASE("opposite complex") {
    ConfigPtr cfg = ValuationConfig::dense_default();
    ComplexSpec s = square_complex(cfg);
    ComplexSpec op = opposite(s);
    CHECK(validate(op).ok());
    CHECK(op.orbits[0].grading == -2);
    CHECK(op.orbits[0].action == ExactValue::rational(-5));
    CHECK(op.entries.count({3, 1}) == 1); // v -> u1 after transposition
    ComplexSpec opop = opposite(op);
    CHECK(opop.orbits[0].action == s.orbits[0].action);
    CHECK(opop.entries.size() == s.entries.size());
    for (const auto& [key, sc] : s.entries)
        CHECK((opop.entries.at(key) - sc).is_zero());
}

TEST_CASE("chain conversion to the opposite complex") {
    ConfigPtr cfg = ValuationConfig::dense_default();
    ComplexSpec s = square_complex(cfg);
    ComplexSpec op = opposite(s);
    Chain c = zero_chain(s, 1);
    c.coeffs[0] = mono(cfg, 1, 0) + mono(cfg, 2, 0); // support levels 2 and 1 on u1
    c.coeffs[1] = mono(cfg, 0, 1);                   // level 2 on u2
    Chain oc = chain_to_opposite(s, c);
    CHECK(oc.degree == -1);
    // Opposite level = -(min action in the original P-support) = -1.
    CHECK(ell(op, oc) == Level(ExactValue::rational(-1)));
}

TEST_CASE("membership and reduction mod the filtration") {
    ConfigPtr cfg = ValuationConfig::dense_default();
    ComplexSpec s = square_complex(cfg);
    Chain c = zero_chain(s, 1);
    c.coeffs[0] = NovikovScalar::one(cfg) + mono(cfg, 2, 0); // levels 3 and 1
    CHECK(filtered_member(s, c, ExactValue::rational(3), false));
    CHECK(!filtered_member(s, c, ExactValue::rational(3), true));
    CHECK(filtered_member(s, c, ExactValue::rational(4), true));
    Chain r = reduce_mod_filtration(s, c, ExactValue::rational(2));
    REQUIRE(r.coeffs[0].terms().size() == 1);
    CHECK(r.coeffs[0].terms()[0].g == g2(0, 0));
    // At alpha = 1 the level-1 part is itself dropped (levels <= alpha vanish).
    Chain r1 = reduce_mod_filtration(s, c, ExactValue::rational(1));
    CHECK(r1.coeffs[0].terms().size() == 1);
    Chain r2 = reduce_mod_filtration(s, c, ExactValue::rational(mpq_class(1, 2)));
    CHECK(r2.coeffs[0].terms().size() == 2);
    Chain diff = chain_sub(c, r);
    CHECK(filtered_member(s, diff, ExactValue::rational(2), false));
}

TEST_CASE("rebase moves degree actions into a window") {
    ConfigPtr cfg = ValuationConfig::dense_default();
    ComplexSpec s = square_complex(cfg);
    ExactValue alpha = ExactValue::rational(mpq_class(1, 2));
    ExactValue eps = ExactValue::rational(mpq_class(1, 8));
    RebaseResult rb = rebase(s, 1, alpha, eps);
    CHECK(validate(rb.spec).ok());
    for (int gi : rb.spec.degree_orbits(1)) {
        CHECK(!(rb.spec.orbits[gi].action < alpha));
        CHECK(rb.spec.orbits[gi].action < alpha + eps);
    }
    // Transported chains have the same boundary image and level.
    Chain c = zero_chain(s, 1);
    c.coeffs[0] = mono(cfg, 1, 0);
    c.coeffs[1] = mono(cfg, 0, 1, 2);
    Chain cr = rebase_chain(rb.spec, rb, c);
    CHECK(ell(s, c) == Level(ell(rb.spec, cr).value()));
    Chain d1 = boundary_apply(s, c);
    Chain d2 = boundary_apply(rb.spec, cr);
    for (size_t i = 0; i < d1.coeffs.size(); ++i)
        CHECK((d1.coeffs[i] - d2.coeffs[i]).is_zero());
    // Degree-2 boundaries into the rebased degree change coefficients but not values.
    Chain w = zero_chain(s, 2);
    w.coeffs[0] = NovikovScalar::one(cfg);
    Chain dw = boundary_apply(rb.spec, w);
    CHECK(ell(rb.spec, dw) == ell(s, boundary_apply(s, w)));
}

TEST_CASE("discrete rebase fails below the lattice spacing") {
    ConfigPtr cfg = ValuationConfig::discrete_default();
    ComplexSpec s;
    s.cfg = cfg;
    s.orbits = {{"u", 1, ExactValue::rational(3)}, {"v", 0, ExactValue::rational(1)}};
    s.entries.emplace(std::make_pair(0, 1), NovikovScalar::one(cfg));
    s.reindex();
    CHECK_THROWS_AS(rebase(s, 1, ExactValue::rational(0), ExactValue::rational(mpq_class(1, 2))),
                    WindowInfeasible);
    RebaseResult rb = rebase(s, 1, ExactValue::rational(0), ExactValue::rational(2));
    CHECK(validate(rb.spec).ok());
}

TEST_CASE("default window dominates entry values and action spread") {
    ConfigPtr cfg = ValuationConfig::dense_default();
    ComplexSpec s = square_complex(cfg);
    // spread = 5 - 1 = 4, max entry valuation 0: window = 5.
    CHECK(s.window() == ExactValue::rational(5));
    s.window_override = ExactValue::rational(20);
    CHECK(s.window() == ExactValue::rational(20));
}
