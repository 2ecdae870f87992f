#pragma once

#include <optional>
#include <vector>

#include "fnd/complex.hpp"
#include "fnd/novikov.hpp"

namespace fnd {

using VecL = std::vector<NovikovScalar>;

// Lambda^N with a weight per coordinate (the action of the generator it
// represents) and a depth cap: coordinate i is tracked exactly for omega-values
// below weights[i] + cap, and vectors whose weighted valuation reaches cap are
// treated as zero.
struct WeightedSpace {
    ConfigPtr cfg;
    std::vector<ExactValue> weights;
    ExactValue cap;
    // Extra storage depth beyond cap.  Reduction coefficients can have
    // negative valuation (down to -headroom), so entries must be tracked
    // deeper than the decision depth to keep conclusions exact at cap.
    ExactValue headroom;

    int dim() const { return static_cast<int>(weights.size()); }
    ExactValue entry_cutoff(int i) const { return cap + headroom + weights[i]; }
};

// The coordinate space of degree-k chains: weights = orbit actions, cap = the
// spec's truncation window.
WeightedSpace chain_space(const ComplexSpec& spec, int degree);

VecL vec_zero(const WeightedSpace& s);
VecL vec_basis(const WeightedSpace& s, int i);

// Weighted valuation: min_i (nu(v_i) - t_i); +inf iff v = 0.  For chain
// coordinates, ell(c) = -nu_bar_t(coords(c)).
Valn nu_bar_t(const WeightedSpace& s, const VecL& v);

// True when every entry of v is empty above the decision depth: stored terms
// at weighted depth >= cap are reduction junk and do not witness mass.
// Throws PrecisionExhausted if a truncated entry leaves the question open.
bool negligible(const WeightedSpace& s, const VecL& v);

// Incremental orthogonal reduction over Lambda with weighted pivots.
//
// Invariants maintained: basis vectors have pairwise distinct pivot indices
// (pivot = argmin nu(v_i) - t_i, ties to the lowest index), each is scaled so
// the pivot entry's leading term is 1 at the group identity, and every vector
// inserted later is empty (below the per-entry cutoffs) at all earlier pivots.
// With back_reduce, earlier vectors are also cleared at later pivots.
//
// These invariants make the basis orthogonal: nu_bar_t(sum lambda_j u_j) =
// min_j (nu(lambda_j) + nu_bar_t(u_j)) exactly, because at the pivot of the
// minimizing j the other vectors cannot cancel the leading residue.
class WeightedReducer {
public:
    explicit WeightedReducer(WeightedSpace space, bool track_combos = true,
                             bool back_reduce = true);

    struct Outcome {
        int index = -1;                    // basis slot, or -1 if reduced away
        std::vector<NovikovScalar> coeffs; // reduction coefficients per basis slot
    };
    // Reduce v against the basis; absorb the residual as a new basis vector
    // unless it is negligible (empty below the cutoffs).
    Outcome insert(const VecL& v);

    struct Reduction {
        VecL residual;
        std::vector<NovikovScalar> coeffs; // v ~ sum coeffs[j] * basis(j) + residual
        bool negligible = false;
    };
    // Reduce without inserting.  The residual is empty at every basis pivot,
    // which makes it the level-optimal representative of v modulo the span.
    Reduction reduce(VecL v) const;

    int size() const { return static_cast<int>(basis_.size()); }
    const VecL& basis(int j) const { return basis_[j]; }
    int pivot(int j) const { return pivots_[j]; }
    // Combination over inserted vectors: basis(j) ~ sum combo(j)[m] * inserted_m.
    const std::vector<NovikovScalar>& combo(int j) const;
    int inserted_count() const { return inserted_; }
    const WeightedSpace& space() const { return space_; }

private:
    int pick_pivot(const VecL& v) const;
    // Clears v at pivot j; returns the coefficient mu that was subtracted.
    NovikovScalar cancel_at(VecL& v, int j) const;
    NovikovScalar clip(NovikovScalar s, int i) const;
    const NovikovScalar& pivot_inverse(int j, const ExactValue& window) const;

    WeightedSpace space_;
    bool track_;
    bool back_;
    int inserted_ = 0;
    std::vector<VecL> basis_;
    std::vector<int> pivots_;
    // Cached inverse of basis_[j][pivots_[j]] with the window it was built for.
    mutable std::vector<std::pair<NovikovScalar, ExactValue>> inv_cache_;
    std::vector<std::vector<NovikovScalar>> combos_;
};

struct OrthoCheck {
    bool ok = false;
    std::string reason;
    // When not orthonormal and the defect is a residue dependency, a tuple of
    // field coefficients lambda with nu_bar_t(sum lambda_i u_i) > min nu(lambda_i).
    std::optional<std::vector<Fq>> counterexample;
};

// Exact decision via the residue criterion: each vector must have
// nu_bar_t = 0, and the leading residues must be K-linearly independent.
OrthoCheck is_orthonormal(const std::vector<VecL>& vectors, const WeightedSpace& s);

// Orthonormal basis of span(vectors); requires the resulting weighted
// valuations to be omega-values so monomial scaling can normalize them to 0.
std::vector<VecL> orthonormalize(const std::vector<VecL>& vectors, const WeightedSpace& s);

// Extend an orthonormal family to an orthonormal basis of the whole space.
// The input vectors appear verbatim in the output.
std::vector<VecL> extend_orthonormal(const std::vector<VecL>& basis, const WeightedSpace& s);

// Matrix of the valuation-non-increasing projector with kernel span(U):
// column j is the reduction residual of e_j.  Apply with projector_apply.
std::vector<VecL> projector_onto_complement(const std::vector<VecL>& U, const WeightedSpace& s);

VecL projector_apply(const std::vector<VecL>& columns, const VecL& v);

struct SolveResult {
    bool member = false;
    std::vector<NovikovScalar> coeffs; // over the original spanning vectors
    VecL residual;                     // nonzero certificate when not a member
};
SolveResult solve_in_subspace(const VecL& v, const std::vector<VecL>& U, const WeightedSpace& s);

struct OptimalRep {
    Chain c;  // c0 - boundary(b0), level-minimal over all choices of b
    Chain b0;
};
// Level-minimal representative of c0 modulo the image of the boundary map out
// of degree k+1, together with the primitive b0 realizing it.
OptimalRep project_optimal(const ComplexSpec& spec, const Chain& c0);

// Reusable form of project_optimal: builds the image reduction once for a
// fixed degree and serves optimal representatives and spectral numbers for
// many chains.  The referenced complex must outlive the projector.
class OptimalProjector {
public:
    OptimalProjector(const ComplexSpec& spec, int degree);

    OptimalRep project(const Chain& c0) const;
    // rho of the cycle c: the level of the optimal representative, -inf iff
    // c is a boundary.  Throws if c is not a cycle.
    Level spectral(const Chain& c) const;
    int degree() const { return degree_; }

private:
    const ComplexSpec* spec_;
    int degree_;
    WeightedReducer red_;
};

struct Barcode {
    struct FiniteBar {
        int degree = 0; // degree of the primitive; the bar lives in (degree, degree-1)
        ExactValue birth, death; // death < birth in the level convention
    };
    struct InfiniteBar {
        int degree = 0;
        ExactValue level;
    };
    std::vector<FiniteBar> finite;
    std::vector<InfiniteBar> infinite;

    std::vector<FiniteBar> finite_in_degree(int k) const;
    std::vector<InfiniteBar> infinite_in_degree(int k) const;
};

Barcode barcode_reduce(const ComplexSpec& spec);

// Coordinates of the kernel of the degree-k boundary map, spanned below the
// window; each vector is a degree-k coordinate tuple.
std::vector<VecL> kernel_basis(const ComplexSpec& spec, int k);

// Orthogonal basis of the image of the degree-(k+1) boundary inside degree k,
// together with one primitive (combo over degree-(k+1) generators) per vector.
struct ImageBasis {
    std::vector<VecL> vectors;    // in degree-k coordinates
    std::vector<VecL> primitives; // in degree-(k+1) coordinates
};
ImageBasis image_basis(const ComplexSpec& spec, int k);

} // namespace fnd
