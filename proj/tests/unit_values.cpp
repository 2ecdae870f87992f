#include "doctest.h"

#include <random>

#include "fnd/config.hpp"
#include "fnd/errors.hpp"

using namespace fnd;

TEST_CASE("exact value comparison") {
    ExactValue three = ExactValue::rational(3);
    ExactValue two_rt2 = ExactValue::sqrt2(2);
    CHECK(three > two_rt2);
    CHECK(ExactValue() == ExactValue());
    CHECK(ExactValue(1, -1) < ExactValue());
    CHECK(ExactValue(-3, 2) < ExactValue()); // 2*sqrt2 < 3
    CHECK(ExactValue(1, 1).sign() == 1);
    CHECK(ExactValue(-1, -1).sign() == -1);
    CHECK(ExactValue(mpq_class(0), mpq_class(0)).sign() == 0);
}

TEST_CASE("comparison agrees with float approximation") {
    std::mt19937_64 rng(2026);
    std::uniform_int_distribution<int> num(-50, 50), den(1, 20);
    for (int i = 0; i < 1000; ++i) {
        ExactValue x(mpq_class(num(rng), den(rng)), mpq_class(num(rng), den(rng)));
        ExactValue y(mpq_class(num(rng), den(rng)), mpq_class(num(rng), den(rng)));
        double dx = x.approx(), dy = y.approx();
        // Only check when the float gap is comfortably above rounding noise.
        if (std::abs(dx - dy) > 1e-9) {
            CHECK((x < y) == (dx < dy));
        }
    }
}

TEST_CASE("floor of exact values") {
    CHECK(floor_of(ExactValue::rational(mpq_class(7, 2))) == 3);
    CHECK(floor_of(ExactValue::rational(mpq_class(-7, 2))) == -4);
    CHECK(floor_of(ExactValue::sqrt2(1)) == 1);     // 1.414..
    CHECK(floor_of(ExactValue::sqrt2(-1)) == -2);   // -1.414..
    CHECK(floor_of(ExactValue(3, 2)) == 5);         // 3 + 2.828..
    CHECK(floor_div(ExactValue::rational(10), ExactValue::sqrt2(1)) == 7); // 10/1.414 = 7.07
    CHECK(floor_div(ExactValue::sqrt2(3), ExactValue::rational(2)) == 2);  // 4.24/2
}

TEST_CASE("omega homomorphism on the dense default") {
    ConfigPtr cfg = ValuationConfig::dense_default();
    CHECK(cfg->dense());
    CHECK(cfg->omega_of(Gamma0Elem{{1, 0}}) == ExactValue::rational(1));
    CHECK(cfg->omega_of(Gamma0Elem{{0, 0}}) == ExactValue());
    CHECK(cfg->omega_of(Gamma0Elem{{2, -1}}) == ExactValue(2, -1));
    Gamma0Elem g{{3, -2}}, h{{-1, 5}};
    CHECK(cfg->omega_of(g + h) == cfg->omega_of(g) + cfg->omega_of(h));
}

TEST_CASE("injectivity is enforced") {
    CHECK_THROWS_AS(ValuationConfig::make({BasisReal{1, false}}, 1, {ExactValue()}, FieldSpec{}),
                    ConfigError);
    // Two rationally dependent rows.
    CHECK_THROWS_AS(ValuationConfig::make({BasisReal{1, false}}, 2,
                                          {ExactValue::rational(1),
                                           ExactValue::rational(mpq_class(1, 3))},
                                          FieldSpec{}),
                    ConfigError);
    // Rank 3 cannot embed in Q + Q*sqrt2.
    CHECK_THROWS_AS(ValuationConfig::make({BasisReal{1, false}}, 3,
                                          {ExactValue::rational(1), ExactValue::sqrt2(1),
                                           ExactValue(1, 1)},
                                          FieldSpec{}),
                    ConfigError);
}

TEST_CASE("small positive lattice elements, dense profile") {
    ConfigPtr cfg = ValuationConfig::dense_default();
    for (int k = 1; k <= 6; ++k) {
        ExactValue eps = ExactValue::rational(mpq_class(1, 1 << k));
        Gamma0Elem s = cfg->small_positive_element(eps);
        ExactValue w = cfg->omega_of(s);
        CHECK(w.sign() > 0);
        CHECK(w <= eps);
    }
}

TEST_CASE("element with omega in a half-open window") {
    ConfigPtr dense = ValuationConfig::dense_default();
    SUBCASE("dense, narrow window") {
        ExactValue lo(mpq_class(17, 5), mpq_class(-1, 3));
        ExactValue hi = lo + ExactValue::rational(mpq_class(1, 100));
        Gamma0Elem g = dense->element_with_omega_in(lo, hi);
        ExactValue w = dense->omega_of(g);
        CHECK(lo < w);
        CHECK(w <= hi);
    }
    SUBCASE("discrete, feasible and infeasible") {
        ConfigPtr disc = ValuationConfig::discrete_default();
        Gamma0Elem g = disc->element_with_omega_in(ExactValue::rational(2),
                                                   ExactValue::rational(3));
        CHECK(disc->omega_of(g) == ExactValue::rational(3));
        CHECK_THROWS_AS(disc->element_with_omega_in(ExactValue::rational(mpq_class(1, 4)),
                                                    ExactValue::rational(mpq_class(3, 4))),
                        WindowInfeasible);
    }
}
