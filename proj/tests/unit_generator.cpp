#include <doctest.h>

#include <random>

#include "fnd/errors.hpp"
#include "fnd/verify.hpp"

using namespace fnd;

namespace {

NormalFormPlan pair_plan(bool dense = false) {
    NormalFormPlan plan;
    plan.dense = dense;
    plan.finite.push_back({1, ExactValue::rational(3), ExactValue::rational(1)});
    return plan;
}

Chain unit(const ComplexSpec& spec, int degree, int pos) {
    Chain c = zero_chain(spec, degree);
    c.coeffs[pos] = NovikovScalar::one(spec.cfg);
    return c;
}

} // namespace

TEST_CASE("normal form worked examples") {
    GeneratedInstance pair = gen_normal_form(pair_plan());
    CHECK(pair.spec.orbits.size() == 2);
    CHECK(validate(pair.spec).ok());
    CHECK(pair.oracle.beta.at(0) == ExactValue::rational(2));
    CHECK(pair.oracle.beta.at(1) == ExactValue());
    CHECK(summarize_invariants(pair.spec) == oracle_summary(pair.oracle));

    NormalFormPlan single;
    single.dense = true;
    single.infinite.push_back({0, ExactValue::rational(2)});
    GeneratedInstance inst = gen_normal_form(single);
    CHECK(inst.oracle.rho.at(0) == std::vector<ExactValue>{ExactValue::rational(2)});
    CHECK(summarize_invariants(inst.spec) == oracle_summary(inst.oracle));

    NormalFormPlan empty;
    GeneratedInstance none = gen_normal_form(empty);
    CHECK(none.spec.orbits.empty());
    CHECK(summarize_invariants(none.spec) == oracle_summary(none.oracle));

    NormalFormPlan bad;
    bad.finite.push_back({1, ExactValue::rational(1), ExactValue::rational(1)});
    CHECK_THROWS_AS(gen_normal_form(bad), ContractViolation);
}

TEST_CASE("scramble moves and invariance") {
    NormalFormPlan plan;
    plan.dense = false;
    plan.finite.push_back({1, ExactValue::rational(3), ExactValue::rational(1)});
    plan.finite.push_back({1, ExactValue::rational(4), ExactValue(mpq_class(3, 2), 0)});
    GeneratedInstance inst = gen_normal_form(plan);
    const ComplexSpec& spec = inst.spec;

    ScramblePlan identity;
    ComplexSpec same = gen_scramble(spec, identity);
    CHECK(check_opposite_involution(same).ok);
    CHECK(summarize_invariants(same) == oracle_summary(inst.oracle));

    ScramblePlan one;
    // u1 (t=3) gains mu * u2 (t=4): needs omega(mu) > 1
    one.moves.push_back({1, 0, 1, Gamma0Elem{{3}}, Fq::one(spec.cfg->field())}); // omega = 3/2
    ComplexSpec moved = gen_scramble(spec, one);
    CHECK(validate(moved).ok());
    CHECK(summarize_invariants(moved) == oracle_summary(inst.oracle));

    ScramblePlan bad1;
    bad1.moves.push_back({1, 0, 0, Gamma0Elem{{3}}, Fq::one(spec.cfg->field())});
    CHECK_THROWS_AS(gen_scramble(spec, bad1), ContractViolation);
    ScramblePlan bad2; // omega = 1 is not > t_source - t_target = 1
    bad2.moves.push_back({1, 0, 1, Gamma0Elem{{2}}, Fq::one(spec.cfg->field())});
    CHECK_THROWS_AS(gen_scramble(spec, bad2), ContractViolation);

    // Transport commutes with the boundary: moving first and then applying
    // the scrambled boundary agrees with transporting the boundary image.
    ScramblePlan moves = random_scramble(spec, 99, 12);
    ComplexSpec scr = gen_scramble(spec, moves);
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        Chain c = zero_chain(spec, 1);
        for (auto& s : c.coeffs) {
            long e = static_cast<long>(rng() % 7) - 3;
            s = NovikovScalar::monomial(spec.cfg, Gamma0Elem{{e}},
                                        Fq(mpq_class(static_cast<long>(rng() % 5) - 2), spec.cfg->field()));
        }
        Chain lhs = scramble_chain(spec, moves, boundary_apply(spec, c));
        Chain rhs = boundary_apply(scr, scramble_chain(spec, moves, c));
        for (size_t i = 0; i < lhs.coeffs.size(); ++i)
            CHECK(lhs.coeffs[i].agrees_below_cutoffs(rhs.coeffs[i]));
    }
}

TEST_CASE("random plans respect the fuzz scale") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        NormalFormPlan plan = random_plan(seed, seed % 2 == 0, FieldSpec{});
        GeneratedInstance inst = gen_normal_form(plan);
        CHECK(inst.spec.orbits.size() <= 20);
        CHECK(!inst.spec.orbits.empty());
        for (int d : inst.spec.degrees_present()) CHECK(inst.spec.degree_dim(d) <= 6);
        std::vector<ExactValue> grid = action_grid(plan.dense);
        for (const auto& o : inst.spec.orbits)
            CHECK(std::count(grid.begin(), grid.end(), o.action) == 1);
        CHECK(validate(inst.spec).ok());
    }
}

TEST_CASE("fuzz determinism") {
    FuzzCase a = make_fuzz_case(42, true, FieldSpec{}, 10);
    FuzzCase b = make_fuzz_case(42, true, FieldSpec{}, 10);
    CHECK(a.scramble.moves.size() == b.scramble.moves.size());
    CHECK(summarize_invariants(a.scrambled) == summarize_invariants(b.scrambled));
    CHECK(check_against_oracle(a.scrambled, b.normal.oracle).ok);
}

TEST_CASE("exhaustive minimum agrees on tiny instances") {
    NormalFormPlan plan;
    plan.dense = false;
    plan.field = FieldSpec{2};
    plan.finite.push_back({1, ExactValue::rational(3), ExactValue::rational(1)});
    plan.infinite.push_back({0, ExactValue::rational(2)});
    GeneratedInstance inst = gen_normal_form(plan);
    const ComplexSpec& spec = inst.spec;
    // Orbits: p0 = w (deg 0, t=2), p1 = u (deg 1, t=3), p2 = v (deg 0, t=1).
    int vpos = -1, wpos = -1;
    const auto& d0 = spec.degree_orbits(0);
    for (size_t i = 0; i < d0.size(); ++i) {
        if (spec.orbits[d0[i]].id == "p2") vpos = static_cast<int>(i);
        if (spec.orbits[d0[i]].id == "p0") wpos = static_cast<int>(i);
    }
    REQUIRE(vpos >= 0);
    REQUIRE(wpos >= 0);

    Chain v = unit(spec, 0, vpos);
    CHECK(enumerate_min_level(spec, v, -4, 4).is_neg_inf());
    Chain vw = chain_add(v, unit(spec, 0, wpos));
    Level lw = enumerate_min_level(spec, vw, -4, 4);
    REQUIRE(lw.finite());
    CHECK(lw.value() == ExactValue::rational(2));
    OptimalRep opt = project_optimal(spec, vw);
    CHECK(ell(spec, opt.c) == lw);
    Chain u = unit(spec, 1, 0);
    Level lu = enumerate_min_level(spec, u, -4, 4);
    REQUIRE(lu.finite());
    CHECK(lu.value() == ExactValue::rational(3));
}

TEST_CASE("full verification pipeline on seeded cases") {
    struct Setup {
        bool dense;
        FieldSpec field;
    };
    const Setup setups[] = {{true, FieldSpec{}}, {true, FieldSpec{2}},
                            {false, FieldSpec{}}, {false, FieldSpec{2}}};
    std::uint64_t seed = 100;
    for (const auto& su : setups) {
        for (int i = 0; i < 2; ++i) {
            FuzzCase fc = make_fuzz_case(seed++, su.dense, su.field, 12);
            CheckResult res = verify_case(fc, 6);
            for (const auto& msg : res.failures)
                MESSAGE("seed ", fc.seed, ": ", msg);
            CHECK(res.ok);
        }
    }
}
