#include "fnd/verify.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <optional>
#include <set>
#include <sstream>

#include "fnd/errors.hpp"

namespace fnd {

namespace {

bool chain_empty(const Chain& c) {
    for (const auto& s : c.coeffs)
        if (!s.trivially_empty()) return false;
    return true;
}

bool scalar_identical(const NovikovScalar& a, const NovikovScalar& b) {
    if (a.cutoff() != b.cutoff()) return false;
    if (a.terms().size() != b.terms().size()) return false;
    for (size_t i = 0; i < a.terms().size(); ++i) {
        if (!(a.terms()[i].g == b.terms()[i].g)) return false;
        if (!(a.terms()[i].c == b.terms()[i].c)) return false;
    }
    return true;
}

} // namespace

InvariantSummary summarize_invariants(const ComplexSpec& spec) {
    InvariantSummary s;
    Barcode bc = barcode_reduce(spec);
    for (const auto& fb : bc.finite) s.finite_bars.emplace_back(fb.degree, fb.birth, fb.death);
    for (const auto& ib : bc.infinite) s.infinite_bars.emplace_back(ib.degree, ib.level);
    auto val_less = [](const ExactValue& x, const ExactValue& y) { return x < y; };
    std::sort(s.finite_bars.begin(), s.finite_bars.end(),
              [&](const auto& x, const auto& y) {
                  if (std::get<0>(x) != std::get<0>(y)) return std::get<0>(x) < std::get<0>(y);
                  if (!(std::get<1>(x) == std::get<1>(y))) return val_less(std::get<1>(x), std::get<1>(y));
                  return val_less(std::get<2>(x), std::get<2>(y));
              });
    std::sort(s.infinite_bars.begin(), s.infinite_bars.end(),
              [&](const auto& x, const auto& y) {
                  if (x.first != y.first) return x.first < y.first;
                  return val_less(x.second, y.second);
              });
    for (int k : spec.degrees_present()) {
        s.beta[k] = boundary_depth(bc, k);
        std::vector<Chain> gens = homology_generators(spec, k);
        if (gens.empty()) continue;
        OptimalProjector opt(spec, k);
        std::vector<ExactValue> levels;
        for (const Chain& c : gens) {
            Level l = opt.spectral(c);
            if (!l.finite())
                throw ContractViolation("summarize_invariants: homology generator with level -inf");
            levels.push_back(l.value());
        }
        if (!levels.empty()) {
            std::sort(levels.begin(), levels.end(), [](const ExactValue& x, const ExactValue& y) { return y < x; });
            s.rho[k] = std::move(levels);
        }
    }
    return s;
}

InvariantSummary oracle_summary(const Oracle& oracle) {
    InvariantSummary s;
    for (const auto& fb : oracle.barcode.finite) s.finite_bars.emplace_back(fb.degree, fb.birth, fb.death);
    for (const auto& ib : oracle.barcode.infinite) s.infinite_bars.emplace_back(ib.degree, ib.level);
    auto val_less = [](const ExactValue& x, const ExactValue& y) { return x < y; };
    std::sort(s.finite_bars.begin(), s.finite_bars.end(),
              [&](const auto& x, const auto& y) {
                  if (std::get<0>(x) != std::get<0>(y)) return std::get<0>(x) < std::get<0>(y);
                  if (!(std::get<1>(x) == std::get<1>(y))) return val_less(std::get<1>(x), std::get<1>(y));
                  return val_less(std::get<2>(x), std::get<2>(y));
              });
    std::sort(s.infinite_bars.begin(), s.infinite_bars.end(),
              [&](const auto& x, const auto& y) {
                  if (x.first != y.first) return x.first < y.first;
                  return val_less(x.second, y.second);
              });
    s.beta = oracle.beta;
    for (const auto& [k, levels] : oracle.rho)
        if (!levels.empty()) s.rho[k] = levels;
    return s;
}

std::string summary_str(const InvariantSummary& s) {
    std::ostringstream os;
    os << "finite bars:";
    for (const auto& [d, b, dd] : s.finite_bars)
        os << " (" << d << ", " << b.str() << ", " << dd.str() << ")";
    os << "\ninfinite bars:";
    for (const auto& [d, l] : s.infinite_bars) os << " (" << d << ", " << l.str() << ")";
    os << "\nbeta:";
    for (const auto& [k, v] : s.beta) os << " [" << k << "] " << v.str();
    os << "\nrho:";
    for (const auto& [k, v] : s.rho) {
        os << " [" << k << "]";
        for (const auto& l : v) os << " " << l.str();
    }
    os << "\n";
    return os.str();
}

CheckResult check_axioms(const ComplexSpec& spec) {
    CheckResult r;
    ValidationReport rep = validate(spec);
    if (!rep.ok()) r.fail("validate: " + rep.str());
    return r;
}

CheckResult check_against_oracle(const ComplexSpec& spec, const Oracle& oracle) {
    CheckResult r;
    InvariantSummary got = summarize_invariants(spec);
    InvariantSummary want = oracle_summary(oracle);
    if (!(got == want))
        r.fail("invariants differ from ground truth\n--- computed ---\n" + summary_str(got) +
               "--- expected ---\n" + summary_str(want));
    return r;
}

CheckResult check_opposite_involution(const ComplexSpec& spec) {
    CheckResult r;
    ComplexSpec dd = opposite(opposite(spec));
    if (dd.orbits.size() != spec.orbits.size()) {
        r.fail("double opposite changed the orbit count");
        return r;
    }
    for (size_t i = 0; i < spec.orbits.size(); ++i) {
        const auto& a = spec.orbits[i];
        const auto& b = dd.orbits[i];
        if (a.id != b.id || a.grading != b.grading || !(a.action == b.action))
            r.fail("double opposite changed orbit " + a.id);
    }
    if (dd.entries.size() != spec.entries.size()) {
        r.fail("double opposite changed the entry count");
        return r;
    }
    for (const auto& [key, sc] : spec.entries) {
        auto it = dd.entries.find(key);
        if (it == dd.entries.end() || !scalar_identical(sc, it->second)) {
            r.fail("double opposite changed a boundary entry");
            break;
        }
    }
    return r;
}

CheckResult check_boundary_depth_triple(const ComplexSpec& spec) {
    CheckResult r;
    ComplexSpec op = opposite(spec);
    Barcode bc = barcode_reduce(spec);
    Barcode bco = barcode_reduce(op);
    std::set<int> ks;
    for (int d : spec.degrees_present()) {
        ks.insert(d);
        ks.insert(d + 1);
    }
    for (int k : ks) {
        ExactValue b1 = boundary_depth(bc, k - 1);
        ExactValue b2 = boundary_depth(bco, -k);
        ExactValue b3 = boundary_depth_via_linking(spec, k);
        if (!(b1 == b2) || !(b1 == b3))
            r.fail("boundary depth triple mismatch at k=" + std::to_string(k) + ": " + b1.str() +
                   " / " + b2.str() + " / " + b3.str());
    }
    return r;
}

CheckResult check_remark_bound(const ComplexSpec& spec) {
    CheckResult r;
    Barcode bc = barcode_reduce(spec);
    for (int d : spec.degrees_present()) {
        int k = d - 1; // the boundary out of degree d governs beta_{d-1}
        ExactValue beta = boundary_depth(bc, k);
        const auto& idx = spec.degree_orbits(d);
        bool any = false;
        ExactValue min_drop;
        for (size_t i = 0; i < idx.size(); ++i) {
            Chain e = zero_chain(spec, d);
            e.coeffs[i] = NovikovScalar::one(spec.cfg);
            Chain de = boundary_apply(spec, e);
            if (chain_empty(de)) continue;
            Level l = ell(spec, de);
            ExactValue drop = spec.orbits[idx[i]].action - l.value();
            if (!any || drop < min_drop) min_drop = drop;
            any = true;
        }
        if (!any) {
            if (!(beta == ExactValue()))
                r.fail("beta_" + std::to_string(k) + " = " + beta.str() + " with a zero boundary map");
        } else {
            if (!(ExactValue() < beta))
                r.fail("beta_" + std::to_string(k) + " = 0 with a nonzero boundary map");
            if (beta < min_drop)
                r.fail("beta_" + std::to_string(k) + " = " + beta.str() +
                       " below the minimal generator-level drop " + min_drop.str());
        }
    }
    return r;
}

CheckResult check_spectral_duality(const ComplexSpec& spec, int grid_points) {
    CheckResult r;
    for (int k : spec.degrees_present()) {
        std::vector<Chain> gens = homology_generators(spec, k);
        if (gens.empty()) continue;
        RightWitnessContext rctx = make_right_context(spec, k);
        OptimalProjector op_opt(rctx.op, -k);
        std::vector<Chain> partners;
        for (const VecL& v : kernel_basis(rctx.op, -k)) partners.push_back(Chain{-k, v});
        for (const Chain& c : gens) {
            SpectralDualityReport rep =
                verify_spectral_duality(spec, c, grid_points, &partners, &rctx, &op_opt);
            if (!rep.ok)
                r.fail("spectral duality failed in degree " + std::to_string(k) +
                       " (rho = " + rep.rho.str() + ", lower bound " +
                       (rep.lower_bound_ok ? "ok" : "violated") + ")");
            else if (!rep.attained)
                r.fail("spectral duality not attained exactly in degree " + std::to_string(k) +
                       " (rho = " + rep.rho.str() + ")");
        }
    }
    return r;
}

CheckResult check_right_witnesses(const ComplexSpec& spec, int grid_points) {
    CheckResult r;
    ExactValue span = spec.default_window();
    const RightWitnessContext* ctx = nullptr;
    auto sweep = [&](const Chain& c, const ExactValue& lo, const ExactValue& hi) {
        // grid of grid_points values in [lo, hi), stepped down from just
        // below hi and ending at lo
        for (int m = 1; m <= grid_points; ++m) {
            mpq_class step(m, grid_points);
            step.canonicalize();
            ExactValue alpha = hi - (hi - lo).scaled(step);
            WitnessReport w = dual_witness_right(spec, alpha, c, ctx);
            if (!w.ok) {
                std::string detail;
                for (const auto& line : w.checks) detail += "\n    " + line;
                r.fail("right witness failed in degree " + std::to_string(c.degree) +
                       " at alpha = " + alpha.str() + detail);
            }
        }
    };
    for (int k : spec.degrees_present()) {
        std::vector<Chain> gens = homology_generators(spec, k);
        ImageBasis ib = image_basis(spec, k - 1);
        if (gens.empty() && ib.primitives.empty()) continue;
        RightWitnessContext rctx = make_right_context(spec, k);
        ctx = &rctx;
        OptimalProjector opt(spec, k);
        for (const Chain& c : gens) {
            Level rho = opt.spectral(c);
            if (!rho.finite()) {
                r.fail("homology generator with rho = -inf in degree " + std::to_string(k));
                continue;
            }
            sweep(c, rho.value() - span, rho.value());
        }
        for (size_t j = 0; j < ib.primitives.size(); ++j) {
            Chain u{k, ib.primitives[j]};
            OptimalRep rep = opt.project(u);
            if (negligible(chain_space(spec, k), rep.c.coeffs)) continue;
            Level top = ell(spec, rep.c);
            Chain v{k - 1, ib.vectors[j]};
            Level death = ell(spec, v);
            if (!death.finite() || !top.finite() || !(death < top)) continue;
            sweep(u, death.value(), top.value());
        }
        ctx = nullptr;
    }
    return r;
}

CheckResult check_left_witnesses(const ComplexSpec& spec, int grid_points) {
    CheckResult r;
    ComplexSpec op = opposite(spec);
    ExactValue span = spec.default_window();
    for (int dk : op.degrees_present()) {
        std::vector<VecL> kb = kernel_basis(op, dk);
        if (kb.empty()) continue;
        LeftWitnessContext lctx = make_left_context(spec, -dk);
        for (const VecL& v : kb) {
            Chain d{dk, v};
            Level ld = ell(op, d);
            if (!ld.finite()) continue;
            int successes = 0;
            std::string first_failure;
            std::optional<WitnessReport> built;
            // Geometric grid just below -ell^op(d): alpha = -ell - span / 2^m.
            // Points below the class's vanishing threshold raise
            // ContractViolation and non-generic points UnsupportedAlpha;
            // both are legitimate to skip, but some point must succeed.  The
            // finest step must undercut the shortest bar, so keep at least
            // 20 halvings regardless of the requested grid size.  The witness
            // construction does not depend on alpha, so once one grid point
            // succeeds the remaining (higher) points re-validate the same
            // certificates.
            int halvings = std::max(grid_points, 20);
            for (int m = 1; m <= halvings; ++m) {
                mpq_class h(mpz_class(1), mpz_class(1) << m); // 2^-m
                ExactValue alpha = -ld.value() - span.scaled(h);
                auto report_failure = [&](const WitnessReport& w) {
                    std::string detail;
                    for (const auto& line : w.checks) detail += "\n    " + line;
                    r.fail("left witness failed in opposite degree " + std::to_string(dk) +
                           " at alpha = " + alpha.str() + detail);
                };
                if (built) {
                    WitnessReport w = *built;
                    w.alpha = alpha;
                    if (revalidate_witness(spec, lctx.op, w))
                        ++successes;
                    else
                        report_failure(w);
                    continue;
                }
                try {
                    WitnessReport w = dual_witness_left(spec, alpha, d, &lctx);
                    if (w.ok) {
                        ++successes;
                        built = std::move(w);
                    } else {
                        report_failure(w);
                    }
                } catch (const UnsupportedAlpha&) {
                } catch (const ContractViolation& e) {
                    if (first_failure.empty()) first_failure = e.what();
                }
            }
            if (successes == 0)
                r.fail("no grid point produced a left witness in opposite degree " +
                       std::to_string(dk) + (first_failure.empty() ? "" : " (" + first_failure + ")"));
        }
    }
    return r;
}

CheckResult check_window_doubling(const ComplexSpec& spec) {
    CheckResult r;
    ComplexSpec wide = spec;
    wide.window_override = spec.default_window().scaled(2);
    bool base_failed = false;
    InvariantSummary base;
    try {
        base = summarize_invariants(spec);
    } catch (const PrecisionExhausted&) {
        base_failed = true;
    }
    InvariantSummary widened;
    try {
        widened = summarize_invariants(wide);
    } catch (const PrecisionExhausted& e) {
        r.fail(std::string("PrecisionExhausted persists at twice the window: ") + e.what());
        return r;
    }
    if (!base_failed && !(base == widened))
        r.fail("doubling the window changed invariants\n--- default ---\n" + summary_str(base) +
               "--- doubled ---\n" + summary_str(widened));
    return r;
}

Level enumerate_min_level(const ComplexSpec& spec, const Chain& c0, long e_lo, long e_hi) {
    const ValuationConfig& cfg = *spec.cfg;
    if (cfg.rank() != 1)
        throw ConfigError("enumerate_min_level: cyclic profile required");
    if (cfg.field().p != 2)
        throw ConfigError("enumerate_min_level: GF(2) required");
    if (e_hi < e_lo) throw ContractViolation("enumerate_min_level: empty exponent window");
    int k = c0.degree;
    const auto& upper = spec.degree_orbits(k + 1);
    const auto& lower = spec.degree_orbits(k);
    size_t range = static_cast<size_t>(e_hi - e_lo + 1);
    size_t ncand = upper.size() * range;
    if (ncand > 20) throw ContractViolation("enumerate_min_level: candidate window too large");

    using Key = std::pair<int, long>; // (position in degree k, exponent)
    auto column_keys = [&](int pos, long e) {
        std::vector<Key> keys;
        for (size_t j = 0; j < lower.size(); ++j) {
            auto it = spec.entries.find({upper[pos], lower[j]});
            if (it == spec.entries.end()) continue;
            if (!it->second.exact())
                throw ContractViolation("enumerate_min_level: truncated boundary entry");
            for (const auto& t : it->second.terms())
                if (!t.c.is_zero()) keys.emplace_back(static_cast<int>(j), e + t.g.exps[0]);
        }
        return keys;
    };

    std::vector<std::vector<Key>> cols;
    for (size_t i = 0; i < upper.size(); ++i)
        for (long e = e_lo; e <= e_hi; ++e) cols.push_back(column_keys(static_cast<int>(i), e));
    std::vector<Key> target;
    for (size_t j = 0; j < c0.coeffs.size(); ++j) {
        if (!c0.coeffs[j].exact())
            throw ContractViolation("enumerate_min_level: truncated input chain");
        for (const auto& t : c0.coeffs[j].terms())
            if (!t.c.is_zero()) target.emplace_back(static_cast<int>(j), t.g.exps[0]);
    }

    // Index the support, sorted by level descending so "first set bit" is the
    // filtration level.
    std::set<Key> support(target.begin(), target.end());
    for (const auto& c : cols) support.insert(c.begin(), c.end());
    const ExactValue& w0 = cfg.omega_rows()[0];
    auto level_of_key = [&](const Key& key) {
        return spec.orbits[lower[key.first]].action - w0.scaled(mpq_class(key.second));
    };
    std::vector<Key> order(support.begin(), support.end());
    std::sort(order.begin(), order.end(), [&](const Key& x, const Key& y) {
        ExactValue lx = level_of_key(x), ly = level_of_key(y);
        if (!(lx == ly)) return ly < lx;
        return x < y;
    });
    std::map<Key, int> index;
    std::vector<ExactValue> levels;
    for (size_t i = 0; i < order.size(); ++i) {
        index[order[i]] = static_cast<int>(i);
        levels.push_back(level_of_key(order[i]));
    }
    size_t words = (order.size() + 63) / 64;
    auto encode = [&](const std::vector<Key>& keys) {
        std::vector<std::uint64_t> bits(words, 0);
        for (const auto& key : keys) {
            int b = index.at(key);
            bits[b / 64] ^= (1ull << (b % 64)); // GF(2): duplicate keys cancel
        }
        return bits;
    };
    std::vector<std::vector<std::uint64_t>> colbits;
    for (const auto& c : cols) colbits.push_back(encode(c));
    std::vector<std::uint64_t> cur = encode(target);

    auto level_of_state = [&]() -> Level {
        for (size_t w = 0; w < words; ++w)
            if (cur[w]) return Level(levels[w * 64 + std::countr_zero(cur[w])]);
        return Level::neg_inf();
    };
    Level best = level_of_state();
    std::uint64_t total = 1ull << ncand;
    for (std::uint64_t s = 1; s < total; ++s) {
        size_t flip = static_cast<size_t>(std::countr_zero(s)); // Gray-code walk
        for (size_t w = 0; w < words; ++w) cur[w] ^= colbits[flip][w];
        Level l = level_of_state();
        if (l < best) best = l;
    }
    return best;
}

FuzzCase make_fuzz_case(std::uint64_t seed, bool dense, FieldSpec field, int moves,
                        int max_orbits, int max_per_degree) {
    FuzzCase fc;
    fc.seed = seed;
    fc.plan = random_plan(seed, dense, field, max_orbits, max_per_degree);
    fc.normal = gen_normal_form(fc.plan);
    fc.scramble = random_scramble(fc.normal.spec, seed ^ 0x9e3779b97f4a7c15ull, moves);
    fc.scrambled = gen_scramble(fc.normal.spec, fc.scramble);
    return fc;
}

CheckResult verify_case(const FuzzCase& fc, int grid_points) {
    CheckResult r;
    auto with_retry = [&](const ComplexSpec& spec, const std::string& name,
                          const std::function<CheckResult(const ComplexSpec&)>& f) {
        try {
            r.merge(f(spec));
            return;
        } catch (const PrecisionExhausted&) {
        }
        ComplexSpec wide = spec;
        wide.window_override = spec.default_window().scaled(2);
        try {
            r.merge(f(wide));
        } catch (const PrecisionExhausted& e) {
            r.fail(name + ": PrecisionExhausted at twice the window: " + e.what());
        }
    };
    r.merge(check_axioms(fc.normal.spec));
    r.merge(check_axioms(fc.scrambled));
    with_retry(fc.normal.spec, "oracle (normal form)",
               [&](const ComplexSpec& s) { return check_against_oracle(s, fc.normal.oracle); });
    with_retry(fc.scrambled, "oracle (scrambled)",
               [&](const ComplexSpec& s) { return check_against_oracle(s, fc.normal.oracle); });
    r.merge(check_opposite_involution(fc.scrambled));
    with_retry(fc.scrambled, "boundary depth", check_boundary_depth_triple);
    with_retry(fc.scrambled, "remark bound", check_remark_bound);
    with_retry(fc.scrambled, "spectral duality",
               [&](const ComplexSpec& s) { return check_spectral_duality(s, grid_points); });
    with_retry(fc.scrambled, "right witnesses",
               [&](const ComplexSpec& s) { return check_right_witnesses(s, grid_points); });
    with_retry(fc.scrambled, "left witnesses",
               [&](const ComplexSpec& s) { return check_left_witnesses(s, grid_points); });
    r.merge(check_window_doubling(fc.scrambled));
    return r;
}

} // namespace fnd
