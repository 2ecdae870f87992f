#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "fnd/complex.hpp"
#include "fnd/ortho.hpp"

namespace fnd {

// Blueprint for a complex in barcode normal form: per-bar action data plus
// the valuation/field profile.  The generated spec is block-diagonal
// (singletons and matched pairs), so every invariant is known in advance.
struct NormalFormPlan {
    std::uint64_t seed = 0;
    bool dense = true; // dense value group (rank 2) vs cyclic (rank 1)
    FieldSpec field;

    struct InfiniteBar {
        int degree = 0;
        ExactValue level; // action of the homology generator
    };
    struct FiniteBar {
        int degree = 0;          // degree of the primitive u; the bar lives in
                                 // (degree, degree - 1)
        ExactValue birth, death; // ell(u) and ell(boundary u); death < birth
    };
    std::vector<InfiniteBar> infinite;
    std::vector<FiniteBar> finite;
};

// Ground truth recorded by the generator.
struct Oracle {
    Barcode barcode;
    // Per degree: spectral numbers of the canonical homology classes (the
    // infinite-bar levels), sorted descending.
    std::map<int, std::vector<ExactValue>> rho;
    // Per degree k: the boundary depth beta_k (max finite-bar length over
    // bars with primitive degree k + 1; 0 when there are none).
    std::map<int, ExactValue> beta;
};

struct GeneratedInstance {
    ComplexSpec spec;
    Oracle oracle;
};

// Build the normal-form spec and its oracle.  Throws ContractViolation on an
// infeasible plan (a finite bar needs death < birth strictly).
GeneratedInstance gen_normal_form(const NormalFormPlan& plan);

// A sequence of filtered elementary automorphisms p_i -> p_i + mu * p_j
// (same degree, i != j) with mu a monomial satisfying the strict level
// decrease nu(mu) > t_j - t_i, so every move preserves all filtration
// invariants.
struct ScramblePlan {
    std::uint64_t seed = 0;
    struct Move {
        int degree = 0;
        int target = 0; // position i within the degree's orbit list
        int source = 0; // position j, != target
        Gamma0Elem g;   // mu = c * g with omega(g) > t_source - t_target
        Fq c;           // nonzero
    };
    std::vector<Move> moves;
};

// Apply the moves in order, conjugating the boundary matrices.  Validation
// status, bars, spectral numbers and boundary depths are all unchanged.
// Throws ContractViolation naming the first invalid move.
ComplexSpec gen_scramble(const ComplexSpec& spec, const ScramblePlan& plan);

// Transport a chain written in the pre-scramble basis into the scrambled
// coordinates (p_i = p'_i - mu * p'_j under the move above).
Chain scramble_chain(const ComplexSpec& spec, const ScramblePlan& plan, const Chain& c);

// The 32-point action grid for a profile: dense uses (a + b*sqrt2)/4 with
// a in 0..7, b in 0..3; cyclic uses a/2 with a in 0..31.  Grid points lie in
// the profile's value group.
std::vector<ExactValue> action_grid(bool dense);

// Configuration matching the grids: dense = rank 2 with omega rows
// (1/4, sqrt2/4); cyclic = rank 1 with omega row 1/2.
ConfigPtr profile_config(bool dense, FieldSpec field);

// Seed-deterministic random plans at the default fuzz scale: at most
// max_orbits generators in total and max_per_degree in any degree, with all
// actions drawn from the 32-point grid.
NormalFormPlan random_plan(std::uint64_t seed, bool dense, FieldSpec field,
                           int max_orbits = 20, int max_per_degree = 6);

ScramblePlan random_scramble(const ComplexSpec& spec, std::uint64_t seed, int moves = 50);

} // namespace fnd
