// Acceptance gate: one pass/fail line per criterion, exit 0 iff all pass.
//
// The corpus mixes both valuation profiles (cyclic and dense) and both
// coefficient fields (rationals and GF(2)); every check is exact.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fnd/errors.hpp"
#include "fnd/verify.hpp"

using namespace fnd;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

FieldSpec field_for(int i) { return (i / 2) % 2 ? FieldSpec{2} : FieldSpec{0}; }

// Retry once at twice the window when a check runs out of precision.
template <class F>
auto with_retry(const ComplexSpec& spec, F&& f) {
    try {
        return f(spec);
    } catch (const PrecisionExhausted&) {
        ComplexSpec wide = spec;
        ExactValue w = spec.window();
        wide.window_override = w + w;
        return f(wide);
    }
}

struct Criterion {
    bool ok = true;
    std::string detail;

    void fail(const std::string& msg) {
        if (ok) detail = msg; // keep the first failure
        ok = false;
    }
    void note(const std::string& msg) {
        if (ok) detail = msg;
    }
};

NovikovScalar random_scalar(const ConfigPtr& cfg, std::mt19937_64& rng, bool nonzero,
                            long lo = -2, long hi = 2) {
    std::uniform_int_distribution<int> nterms(nonzero ? 1 : 0, 3);
    std::uniform_int_distribution<long> exp(lo, hi);
    std::uniform_int_distribution<long> coef(1, 6);
    NovikovScalar s = NovikovScalar::zero(cfg);
    int n = nterms(rng);
    for (int i = 0; i < n; ++i) {
        Gamma0Elem g = Gamma0Elem::identity(cfg->rank());
        for (long& e : g.exps) e = exp(rng);
        mpq_class c = coef(rng);
        if (coef(rng) % 2) c = -c;
        s = s + NovikovScalar::monomial(cfg, g, Fq(c, cfg->field()));
    }
    if (nonzero && s.trivially_empty()) s = NovikovScalar::one(cfg);
    return s;
}

VecL random_vec(const WeightedSpace& s, std::mt19937_64& rng, long lo = -2, long hi = 2) {
    VecL v = vec_zero(s);
    for (auto& e : v) e = random_scalar(s.cfg, rng, false, lo, hi);
    return v;
}

bool vec_nonzero(const VecL& v) {
    for (const auto& e : v)
        if (!e.trivially_empty()) return true;
    return false;
}

// lhs <= base + eps with -inf conventions (lhs = -inf always passes).
bool level_shift_ok(const Level& lhs, const Level& base, const Level& eps) {
    if (lhs.is_neg_inf()) return true;
    if (base.is_neg_inf() || eps.is_neg_inf()) return false;
    return lhs.value() <= base.value() + eps.value();
}

// ---------------------------------------------------------------------------
// Criterion 1: 1000 fuzz instances all pass validate, under 10 ms each.
Criterion criterion1() {
    Criterion c;
    double worst = 0;
    for (int i = 0; i < 1000 && c.ok; ++i) {
        FuzzCase fc = make_fuzz_case(20000 + i, i % 2, field_for(i));
        for (const ComplexSpec* s : {&fc.normal.spec, &fc.scrambled}) {
            Clock::time_point t0 = Clock::now();
            ValidationReport rep = validate(*s);
            double ms = ms_since(t0);
            if (ms > worst) worst = ms;
            if (!rep.ok()) {
                c.fail("seed " + std::to_string(fc.seed) + ": " + rep.str());
                break;
            }
            if (ms >= 10.0) {
                c.fail("seed " + std::to_string(fc.seed) + ": validate took " +
                       std::to_string(ms) + " ms");
                break;
            }
        }
    }
    if (c.ok) {
        std::ostringstream os;
        os << "1000 instances valid, worst validate " << worst << " ms";
        c.note(os.str());
    }
    return c;
}

// ---------------------------------------------------------------------------
// Criterion 2: every orthonormalize output satisfies the exact minimum rule
// nu_bar(sum lambda_i u_i) = min nu(lambda_i) on 100 random tuples.
Criterion criterion2(const std::vector<FuzzCase>& corpus) {
    Criterion c;
    std::mt19937_64 rng(2002);
    long tuples = 0, families = 0;
    for (const FuzzCase& fc : corpus) {
        if (!c.ok) break;
        const ComplexSpec& spec = fc.scrambled;
        for (int k : spec.degrees_present()) {
            if (!c.ok) break;
            if (spec.degree_dim(k - 1) == 0) continue;
            WeightedSpace ws = chain_space(spec, k - 1);
            std::vector<VecL> in;
            for (const VecL& col : spec.boundary_matrix(k))
                if (vec_nonzero(col)) in.push_back(col);
            if (in.empty()) continue;
            std::vector<VecL> u = orthonormalize(in, ws);
            ++families;
            for (const VecL& ui : u) {
                if (!(nu_bar_t(ws, ui) == Valn(ExactValue()))) {
                    c.fail("seed " + std::to_string(fc.seed) + " degree " + std::to_string(k) +
                           ": basis vector not normalized to valuation 0");
                    break;
                }
            }
            for (int t = 0; t < 100 && c.ok; ++t) {
                std::vector<NovikovScalar> lam;
                for (size_t i = 0; i < u.size(); ++i)
                    lam.push_back(random_scalar(spec.cfg, rng, false));
                bool any = false;
                for (const auto& l : lam) any = any || !l.trivially_empty();
                if (!any) lam[0] = NovikovScalar::one(spec.cfg);
                VecL comb = vec_zero(ws);
                Valn expect; // +inf
                for (size_t i = 0; i < u.size(); ++i) {
                    if (lam[i].trivially_empty()) continue;
                    if (lam[i].nu() < expect) expect = lam[i].nu();
                    for (size_t j = 0; j < comb.size(); ++j)
                        comb[j] = comb[j] + u[i][j] * lam[i];
                }
                ++tuples;
                if (!(nu_bar_t(ws, comb) == expect)) {
                    c.fail("seed " + std::to_string(fc.seed) + " degree " + std::to_string(k) +
                           ": combination valuation differs from min coefficient valuation");
                }
            }
        }
    }
    if (c.ok)
        c.note(std::to_string(families) + " orthonormal families, " + std::to_string(tuples) +
               " tuples exact");
    return c;
}

// ---------------------------------------------------------------------------
// Criterion 3: projector contract on 500 random (U, w) pairs, N <= 8:
// kernel contains U exactly, levels never decrease, idempotent.
Criterion criterion3() {
    Criterion c;
    std::mt19937_64 rng(3003);
    for (int t = 0; t < 500 && c.ok; ++t) {
        bool dense = t % 2;
        ConfigPtr cfg = profile_config(dense, field_for(t));
        std::vector<ExactValue> grid = action_grid(dense);
        int n = 1 + static_cast<int>(rng() % 8);
        std::vector<ExactValue> weights;
        for (int i = 0; i < n; ++i) weights.push_back(grid[rng() % grid.size()]);
        WeightedSpace ws{cfg, weights, ExactValue::rational(8), ExactValue::rational(16)};
        int m = 1 + static_cast<int>(rng() % 3);
        std::vector<VecL> U;
        for (int i = 0; i < m; ++i) {
            VecL v = random_vec(ws, rng);
            if (!vec_nonzero(v)) v[rng() % n] = NovikovScalar::one(cfg);
            U.push_back(std::move(v));
        }
        MatL P = projector_onto_complement(U, ws);
        std::string tag = "pair " + std::to_string(t);
        for (const VecL& u : U)
            if (!negligible(ws, projector_apply(P, u))) c.fail(tag + ": kernel misses U");
        VecL w = random_vec(ws, rng);
        VecL pw = projector_apply(P, w);
        // A negligible projection sits at depth >= cap, above any valuation a
        // nonzero w can have here, so only the non-negligible case needs the
        // exact comparison.
        if (!negligible(ws, pw) && !(nu_bar_t(ws, w) <= nu_bar_t(ws, pw)))
            c.fail(tag + ": projection lowered the valuation");
        VecL ppw = projector_apply(P, pw);
        VecL diff = vec_zero(ws);
        for (int i = 0; i < n; ++i) diff[i] = ppw[i] - pw[i];
        if (!negligible(ws, diff)) c.fail(tag + ": projector not idempotent");
        // When the projection kills w, w must actually lie in span(U).
        if (c.ok && negligible(ws, pw) && !solve_in_subspace(w, U, ws).member)
            c.fail(tag + ": vector killed without membership certificate");
    }
    if (c.ok) c.note("500 pairs, all three contract checks exact");
    return c;
}

// ---------------------------------------------------------------------------
// Criterion 4: level of the optimal representative equals the exhaustive
// enumeration minimum on 100 tiny GF(2) cyclic instances.
Criterion criterion4() {
    Criterion c;
    std::mt19937_64 rng(4004);
    std::vector<ExactValue> grid = action_grid(false);
    for (int t = 0; t < 100 && c.ok; ++t) {
        NormalFormPlan plan;
        plan.dense = false;
        plan.field = FieldSpec{2};
        int death = 4 + static_cast<int>(rng() % 3);   // actions confined to a
        int len = 1 + static_cast<int>(rng() % 4);     // narrow band so the
        plan.finite.push_back({1, grid[death + len], grid[death]});
        if (rng() % 2) plan.infinite.push_back({0, grid[4 + rng() % 5]});
        GeneratedInstance inst = gen_normal_form(plan);
        ComplexSpec spec = gen_scramble(inst.spec, random_scramble(inst.spec, 4100 + t, 4));
        Chain c0 = zero_chain(spec, 0);
        for (auto& e : c0.coeffs) e = random_scalar(spec.cfg, rng, false, -1, 1);
        if (!vec_nonzero(c0.coeffs)) c0.coeffs[0] = NovikovScalar::one(spec.cfg);
        Level opt = with_retry(spec, [&](const ComplexSpec& s) {
            return ell(s, project_optimal(s, c0).c);
        });
        Level brute = enumerate_min_level(spec, c0, -8, 8);
        if (!(opt == brute))
            c.fail("instance " + std::to_string(t) +
                   ": optimal level differs from exhaustive minimum");
    }
    if (c.ok) c.note("100 instances, optimal level = exhaustive minimum");
    return c;
}

// ---------------------------------------------------------------------------
// Criterion 5: adjoint identity Delta(A* d, c) = Delta(d, A c) on 1000 random
// triples, and the filtration-shift bound for A and A*.
Criterion criterion5(const std::vector<FuzzCase>& corpus) {
    Criterion c;
    std::mt19937_64 rng(5005);
    int made = 0;
    for (size_t ci = 0; made < 1000; ci = (ci + 1) % corpus.size()) {
        const ComplexSpec& spec = corpus[ci].scrambled;
        ComplexSpec op = opposite(spec);
        std::vector<int> degs;
        for (int k : spec.degrees_present())
            if (spec.degree_dim(k) >= 1) degs.push_back(k);
        if (degs.empty()) continue;
        for (int rep = 0; rep < 8 && made < 1000; ++rep, ++made) {
            int k = degs[rng() % degs.size()];
            int n = spec.degree_dim(k);
            MatL A(n, vec_zero(chain_space(spec, k)));
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i)
                    if (rng() % 2) A[j][i] = random_scalar(spec.cfg, rng, false);
            Chain cc{k, {}}, d{-k, {}};
            for (int i = 0; i < n; ++i) {
                cc.coeffs.push_back(random_scalar(spec.cfg, rng, false));
                d.coeffs.push_back(random_scalar(spec.cfg, rng, false));
            }
            Chain ad{-k, adjoint_apply(A, d.coeffs)};
            Chain ac{k, matrix_apply(A, cc.coeffs)};
            if (!(pairing_Delta(spec, ad, cc) == pairing_Delta(spec, d, ac))) {
                c.fail("triple " + std::to_string(made) + ": adjoint identity broken");
                break;
            }
            Level eps = filtration_shift(spec, k, A);
            if (!level_shift_ok(ell(spec, ac), ell(spec, cc), eps) ||
                !level_shift_ok(ell(op, ad), ell(op, d), eps)) {
                c.fail("triple " + std::to_string(made) + ": filtration-shift bound broken");
                break;
            }
        }
        if (!c.ok) break;
    }
    if (c.ok) c.note("1000 triples, adjoint identity and shift bound exact");
    return c;
}

// ---------------------------------------------------------------------------
// Shared runner for the CheckResult-based criteria.
Criterion over_corpus(const std::vector<FuzzCase>& corpus, bool dense_only, double budget_ms,
                      CheckResult (*check)(const ComplexSpec&, int), const char* what) {
    Criterion c;
    int ran = 0;
    double worst = 0;
    for (const FuzzCase& fc : corpus) {
        if (!c.ok) break;
        if (dense_only && !fc.plan.dense) continue;
        Clock::time_point t0 = Clock::now();
        CheckResult r = with_retry(fc.scrambled,
                                   [&](const ComplexSpec& s) { return check(s, 16); });
        double ms = ms_since(t0);
        if (ms > worst) worst = ms;
        ++ran;
        if (!r.ok)
            c.fail("seed " + std::to_string(fc.seed) + ": " + r.failures.front());
        else if (budget_ms > 0 && ms >= budget_ms)
            c.fail("seed " + std::to_string(fc.seed) + ": took " + std::to_string(ms) + " ms");
    }
    if (c.ok) {
        std::ostringstream os;
        os << ran << " instances, " << what << ", worst " << worst << " ms";
        c.note(os.str());
    }
    return c;
}

// Criterion 8 additionally demands exact equality against the oracle.
Criterion criterion8(const std::vector<FuzzCase>& corpus) {
    Criterion c = over_corpus(corpus, false, 0, check_spectral_duality,
                              "two-sided duality exact");
    for (const FuzzCase& fc : corpus) {
        if (!c.ok) break;
        CheckResult r = with_retry(fc.scrambled, [&](const ComplexSpec& s) {
            return check_against_oracle(s, fc.normal.oracle);
        });
        if (!r.ok) c.fail("seed " + std::to_string(fc.seed) + ": " + r.failures.front());
    }
    return c;
}

// ---------------------------------------------------------------------------
// Criterion 11: all invariants identical under 50-move scrambles.
Criterion criterion11() {
    Criterion c;
    for (int i = 0; i < 200 && c.ok; ++i) {
        FuzzCase fc = make_fuzz_case(50000 + i, i % 2, field_for(i));
        InvariantSummary before = with_retry(
            fc.normal.spec, [](const ComplexSpec& s) { return summarize_invariants(s); });
        InvariantSummary after = with_retry(
            fc.scrambled, [](const ComplexSpec& s) { return summarize_invariants(s); });
        if (!(before == after))
            c.fail("seed " + std::to_string(fc.seed) + ": invariants changed under scramble");
        else if (!(before == oracle_summary(fc.normal.oracle)))
            c.fail("seed " + std::to_string(fc.seed) + ": invariants differ from ground truth");
    }
    if (c.ok) c.note("200 instances, bars/rho/beta identical after 50 moves");
    return c;
}

// Criterion 12: window doubling changes nothing.
Criterion criterion12() {
    Criterion c;
    for (int i = 0; i < 200 && c.ok; ++i) {
        FuzzCase fc = make_fuzz_case(60000 + i, i % 2, field_for(i));
        try {
            CheckResult r = check_window_doubling(fc.scrambled);
            if (!r.ok) c.fail("seed " + std::to_string(fc.seed) + ": " + r.failures.front());
        } catch (const PrecisionExhausted& e) {
            c.fail("seed " + std::to_string(fc.seed) + ": precision exhausted at 2x window: " +
                   e.what());
        }
    }
    if (c.ok) c.note("200 instances stable under window doubling");
    return c;
}

} // namespace

int main() {
    std::vector<FuzzCase> corpus;
    for (int i = 0; i < 40; ++i) corpus.push_back(make_fuzz_case(3000 + i, i % 2, field_for(i)));

    struct Entry {
        int id;
        Criterion result;
    };
    std::vector<Entry> out;
    out.push_back({1, criterion1()});
    out.push_back({2, criterion2(corpus)});
    out.push_back({3, criterion3()});
    out.push_back({4, criterion4()});
    out.push_back({5, criterion5(corpus)});
    out.push_back({6, over_corpus(corpus, true, 1000.0, check_right_witnesses,
                                  "right witnesses re-validated")});
    out.push_back({7, over_corpus(corpus, false, 0, check_left_witnesses,
                                  "left witnesses re-validated")});
    out.push_back({8, criterion8(corpus)});
    out.push_back({9, over_corpus(corpus, false, 0,
                                  [](const ComplexSpec& s, int) {
                                      return check_boundary_depth_triple(s);
                                  },
                                  "boundary-depth triple equal")});
    out.push_back({10, over_corpus(corpus, false, 0,
                                   [](const ComplexSpec& s, int) { return check_remark_bound(s); },
                                   "depth bound vs level drops")});
    out.push_back({11, criterion11()});
    out.push_back({12, criterion12()});

    bool all = true;
    for (const Entry& e : out) {
        all = all && e.result.ok;
        std::printf("criterion %d: %s%s%s\n", e.id, e.result.ok ? "pass" : "FAIL",
                    e.result.detail.empty() ? "" : " - ", e.result.detail.c_str());
    }
    return all ? 0 : 1;
}
