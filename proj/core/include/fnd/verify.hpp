#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "fnd/duality.hpp"
#include "fnd/generator.hpp"

namespace fnd {

struct CheckResult {
    bool ok = true;
    std::vector<std::string> failures;

    void fail(std::string msg) {
        ok = false;
        failures.push_back(std::move(msg));
    }
    void merge(const CheckResult& o) {
        ok = ok && o.ok;
        failures.insert(failures.end(), o.failures.begin(), o.failures.end());
    }
};

// Every reported invariant of a complex in one comparable value: the bar
// multisets, the boundary depths, and the spectral numbers per degree.
struct InvariantSummary {
    std::vector<std::tuple<int, ExactValue, ExactValue>> finite_bars; // (degree, birth, death), sorted
    std::vector<std::pair<int, ExactValue>> infinite_bars;            // (degree, level), sorted
    std::map<int, ExactValue> beta;                                   // per degree present
    std::map<int, std::vector<ExactValue>> rho;                       // sorted descending, nonempty only
    bool operator==(const InvariantSummary&) const = default;
};

InvariantSummary summarize_invariants(const ComplexSpec& spec);
InvariantSummary oracle_summary(const Oracle& oracle);
std::string summary_str(const InvariantSummary& s);

// Individual theorem/corollary checks.  Each returns per-failure messages;
// PrecisionExhausted propagates to the caller (see verify_case for the
// window-doubling retry policy).
CheckResult check_axioms(const ComplexSpec& spec);
CheckResult check_against_oracle(const ComplexSpec& spec, const Oracle& oracle);
CheckResult check_opposite_involution(const ComplexSpec& spec);
CheckResult check_boundary_depth_triple(const ComplexSpec& spec);
CheckResult check_remark_bound(const ComplexSpec& spec);
// Two-sided spectral duality over every homology class, with the opposite
// kernel basis supplied as extra lower-bound partners.
CheckResult check_spectral_duality(const ComplexSpec& spec, int grid_points = 16);
// dual_witness_right over homology classes and birth-side relative classes,
// alpha swept over per-class grids.
CheckResult check_right_witnesses(const ComplexSpec& spec, int grid_points = 16);
// dual_witness_left over opposite-side kernel classes at generic alpha.
CheckResult check_left_witnesses(const ComplexSpec& spec, int grid_points = 16);
// Recompute everything at twice the truncation window: nothing may change,
// and any PrecisionExhausted at the default window must disappear.
CheckResult check_window_doubling(const ComplexSpec& spec);

// Exhaustive minimum of ell(c0 - boundary b) over all b supported on
// monomials g * e_i with exponent in [e_lo, e_hi] (per degree-(k+1)
// generator).  Requires the cyclic profile and GF(2); the candidate count
// n * (e_hi - e_lo + 1) is capped at 20 so the 2^n subset sweep stays fast.
Level enumerate_min_level(const ComplexSpec& spec, const Chain& c0, long e_lo, long e_hi);

// One seeded fuzz case: a random normal form with ground truth plus its
// scrambled image.
struct FuzzCase {
    std::uint64_t seed = 0;
    NormalFormPlan plan;
    ScramblePlan scramble;
    GeneratedInstance normal;
    ComplexSpec scrambled;
};

FuzzCase make_fuzz_case(std::uint64_t seed, bool dense, FieldSpec field, int moves = 50,
                        int max_orbits = 20, int max_per_degree = 6);

// The full verification pipeline on one fuzz case: axioms on both specs,
// oracle equality before and after scrambling, the opposite involution, the
// boundary-depth triple equality, the remark bound, spectral duality, both
// witness families, and window doubling.  Checks that hit PrecisionExhausted
// at the default window are retried once at twice the window.
CheckResult verify_case(const FuzzCase& fc, int grid_points = 16);

} // namespace fnd
