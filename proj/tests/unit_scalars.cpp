#include "doctest.h"

#include <random>

#include "fnd/errors.hpp"
#include "fnd/novikov.hpp"

using namespace fnd;

namespace {

Gamma0Elem g2(long a, long b) { return Gamma0Elem{{a, b}}; }

NovikovScalar random_scalar(const ConfigPtr& cfg, std::mt19937_64& rng, bool allow_zero = true) {
    std::uniform_int_distribution<int> nterms(allow_zero ? 0 : 1, 4);
    std::uniform_int_distribution<long> exp(-4, 4);
    std::uniform_int_distribution<long> coef(1, 12);
    NovikovScalar s = NovikovScalar::zero(cfg);
    int n = nterms(rng);
    for (int i = 0; i < n; ++i) {
        Gamma0Elem g = Gamma0Elem::identity(cfg->rank());
        for (long& e : g.exps) e = exp(rng);
        mpq_class c = coef(rng);
        if (coef(rng) % 2) c = -c;
        s = s + NovikovScalar::monomial(cfg, g, Fq(c, cfg->field()));
    }
    if (!allow_zero && s.trivially_empty())
        s = NovikovScalar::one(cfg);
    return s;
}

} // namespace

TEST_CASE("valuation of basic scalars") {
    ConfigPtr cfg = ValuationConfig::dense_default();
    Fq one = Fq::one(cfg->field());
    NovikovScalar x = NovikovScalar::monomial(cfg, g2(0, 0), one) +
                      NovikovScalar::monomial(cfg, g2(1, 0), one);
    CHECK(x.nu() == Valn(ExactValue()));
    CHECK(NovikovScalar::zero(cfg).nu().is_pos_inf());
    CHECK(NovikovScalar::monomial(cfg, g2(0, 1), one).nu() == Valn(ExactValue::sqrt2(1)));
    NovikovScalar empty_truncated = NovikovScalar::zero(cfg).truncated(ExactValue::rational(5));
    CHECK_THROWS_AS(empty_truncated.nu(), PrecisionExhausted);
    CHECK_THROWS_AS(empty_truncated.is_zero(), PrecisionExhausted);
}

TEST_CASE("monomial product and cancellation") {
    ConfigPtr cfg = ValuationConfig::dense_default();
    Fq one = Fq::one(cfg->field());
    NovikovScalar p = NovikovScalar::monomial(cfg, g2(1, 0), one) *
                      NovikovScalar::monomial(cfg, g2(0, 1), one);
    REQUIRE(p.terms().size() == 1);
    CHECK(p.terms()[0].g == g2(1, 1));
    CHECK(p.nu() == Valn(ExactValue(1, 1)));

    std::mt19937_64 rng(7);
    NovikovScalar x = random_scalar(cfg, rng);
    CHECK((x + (-x)).is_zero());
}

TEST_CASE("squaring over GF(2) kills cross terms") {
    ConfigPtr cfg = ValuationConfig::dense_default(FieldSpec{2});
    Fq one = Fq::one(cfg->field());
    NovikovScalar x = NovikovScalar::constant(cfg, one) +
                      NovikovScalar::monomial(cfg, g2(1, 0), one);
    NovikovScalar sq = x * x;
    REQUIRE(sq.terms().size() == 2);
    CHECK(sq.terms()[0].g == g2(0, 0));
    CHECK(sq.terms()[1].g == g2(2, 0));
    CHECK(sq.exact());
}

TEST_CASE("inverses: monomial exact, unipotent series") {
    ConfigPtr cfg = ValuationConfig::dense_default();
    Fq one = Fq::one(cfg->field());
    SUBCASE("monomial") {
        NovikovScalar m = NovikovScalar::monomial(cfg, g2(1, 0), one);
        NovikovScalar mi = m.inverse(ExactValue::rational(10));
        CHECK(mi.exact());
        REQUIRE(mi.terms().size() == 1);
        CHECK(mi.terms()[0].g == g2(-1, 0));
        CHECK((m * mi).is_zero() == false);
        CHECK((m * mi - NovikovScalar::one(cfg)).is_zero());
    }
    SUBCASE("constant") {
        NovikovScalar c = NovikovScalar::constant(cfg, Fq(mpq_class(3, 7), cfg->field()));
        NovikovScalar ci = c.inverse(ExactValue::rational(10));
        CHECK(ci.exact());
        CHECK((c * ci - NovikovScalar::one(cfg)).is_zero());
    }
    SUBCASE("1 - g below window 3") {
        NovikovScalar x = NovikovScalar::one(cfg) -
                          NovikovScalar::monomial(cfg, g2(1, 0), one);
        NovikovScalar xi = x.inverse(ExactValue::rational(3));
        REQUIRE(xi.terms().size() == 3);
        CHECK(xi.terms()[0].g == g2(0, 0));
        CHECK(xi.terms()[1].g == g2(1, 0));
        CHECK(xi.terms()[2].g == g2(2, 0));
        for (const auto& t : xi.terms()) CHECK(t.c == one);
        NovikovScalar prod = x * xi;
        CHECK(prod.agrees_below_cutoffs(NovikovScalar::one(cfg)));
        REQUIRE(prod.cutoff());
        CHECK(ExactValue::rational(3) <= *prod.cutoff());
    }
}

TEST_CASE("conj is a ring involution") {
    ConfigPtr cfg = ValuationConfig::dense_default();
    Fq one = Fq::one(cfg->field());
    CHECK(NovikovScalar::monomial(cfg, g2(1, 0), one).conj().terms()[0].g == g2(-1, 0));
    CHECK((NovikovScalar::one(cfg).conj() - NovikovScalar::one(cfg)).is_zero());
    NovikovScalar x = NovikovScalar::one(cfg) +
                      NovikovScalar::monomial(cfg, g2(1, 1), Fq(2, cfg->field()));
    NovikovScalar cx = x.conj();
    REQUIRE(cx.terms().size() == 2);
    CHECK(cx.terms()[0].g == g2(-1, -1));
    CHECK(cx.terms()[1].g == g2(0, 0));
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        NovikovScalar a = random_scalar(cfg, rng), b = random_scalar(cfg, rng);
        CHECK((a.conj().conj() - a).is_zero());
        CHECK(((a * b).conj() - a.conj() * b.conj()).is_zero());
        CHECK(((a + b).conj() - (a.conj() + b.conj())).is_zero());
    }
    CHECK_THROWS_AS(NovikovScalar::one(cfg).truncated(ExactValue::rational(1)).conj(),
                    PrecisionExhausted);
}

TEST_CASE("ultrametric and multiplicativity over random scalars") {
    for (FieldSpec f : {FieldSpec{}, FieldSpec{2}, FieldSpec{5}}) {
        ConfigPtr cfg = ValuationConfig::dense_default(f);
        std::mt19937_64 rng(42 + f.p);
        for (int i = 0; i < 200; ++i) {
            NovikovScalar x = random_scalar(cfg, rng, false);
            NovikovScalar y = random_scalar(cfg, rng, false);
            CHECK((x * y).nu() == Valn(x.nu().value() + y.nu().value()));
            NovikovScalar s = x + y;
            Valn lower = x.nu() < y.nu() ? x.nu() : y.nu();
            CHECK(!(s.nu() < lower));
            if (!(x.nu() == y.nu())) CHECK(s.nu() == lower);
        }
    }
}

TEST_CASE("inverse correctness on random scalars") {
    ConfigPtr cfg = ValuationConfig::dense_default();
    std::mt19937_64 rng(99);
    ExactValue W = ExactValue::rational(6);
    for (int i = 0; i < 200; ++i) {
        NovikovScalar x = random_scalar(cfg, rng, false);
        NovikovScalar xi = x.inverse(W);
        CHECK(xi.nu().value() == -x.nu().value());
        NovikovScalar prod = x * xi;
        CHECK(prod.agrees_below_cutoffs(NovikovScalar::one(cfg)));
        if (prod.cutoff()) CHECK(W <= *prod.cutoff());
    }
}

TEST_CASE("precision monotonicity: doubling the window extends the series") {
    ConfigPtr cfg = ValuationConfig::dense_default();
    std::mt19937_64 rng(123);
    for (int i = 0; i < 50; ++i) {
        NovikovScalar x = random_scalar(cfg, rng, false);
        NovikovScalar narrow = x.inverse(ExactValue::rational(4));
        NovikovScalar wide = x.inverse(ExactValue::rational(8));
        CHECK(narrow.agrees_below_cutoffs(wide.truncated(
            narrow.cutoff() ? *narrow.cutoff() : ExactValue::rational(4))));
    }
}

TEST_CASE("cutoff propagation rules") {
    ConfigPtr cfg = ValuationConfig::dense_default();
    Fq one = Fq::one(cfg->field());
    NovikovScalar a = (NovikovScalar::one(cfg) +
                       NovikovScalar::monomial(cfg, g2(1, 0), one))
                          .truncated(ExactValue::rational(2));
    NovikovScalar b = NovikovScalar::monomial(cfg, g2(1, 0), one); // nu = 1, exact
    NovikovScalar sum = a + b;
    REQUIRE(sum.cutoff());
    CHECK(*sum.cutoff() == ExactValue::rational(2));
    NovikovScalar prod = a * b;
    REQUIRE(prod.cutoff());
    CHECK(*prod.cutoff() == ExactValue::rational(3)); // cutoff_a + nu(b)
    CHECK_THROWS_AS(prod.coefficient_at(g2(3, 0)), PrecisionExhausted);
    CHECK(prod.coefficient_at(g2(1, 0)) == one);
}
