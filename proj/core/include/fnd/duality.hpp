#pragma once

#include <string>
#include <vector>

#include "fnd/ortho.hpp"

namespace fnd {

// A matrix over Lambda stored as columns: cols[j] is the image of the j-th
// generator, so apply(v) = sum_j v_j * cols[j].
using MatL = std::vector<VecL>;

VecL matrix_apply(const MatL& cols, const VecL& v);

// The pairing L on D_{-k} x C_k.  Chains of the opposite complex are stored
// against the opposite module action, which makes L the plain coordinate-wise
// product: L(d, c) = sum_i d_i * c_i.  It is Lambda-bilinear with
// L(g .op d, c) = g^{-1} L(d, c) (= g .op L) and L(d, g c) = g L(d, c).
NovikovScalar pairing_L(const ComplexSpec& spec, const Chain& d, const Chain& c);

// tau: coefficient of the identity group element.
Fq tau(const NovikovScalar& x);

// Delta = tau o L.
Fq pairing_Delta(const ComplexSpec& spec, const Chain& d, const Chain& c);

// Adjoint of a Lambda-linear map in the own-action storage convention: the
// plain transpose.  Delta(A* d, c) = Delta(d, A c) for all d, c.
MatL adjoint_matrix(const MatL& cols);

// Apply the adjoint without forming it: adjoint_apply(cols, v)_i =
// sum_j cols[i][j] * v_j.
VecL adjoint_apply(const MatL& cols, const VecL& v);

// Minimal eps with ell(A v) <= ell(v) + eps for all v, read off the entries:
// max over nonzero entries (row j of column i) of t_j - nu(entry) - t_i.
// -inf for the zero matrix.  The adjoint has the same shift in ell^op.
Level filtration_shift(const ComplexSpec& spec, int degree, const MatL& cols);

// rho: minimal filtration level over the homology class of the cycle c;
// -inf iff c is a boundary.  The minimum is attained by project_optimal.
Level spectral_number(const ComplexSpec& spec, const Chain& c);

// Cycles whose classes form a basis of the degree-k homology over Lambda
// (one per infinite bar).
std::vector<Chain> homology_generators(const ComplexSpec& spec, int k);

// beta_k: maximal finite-bar length between degrees k+1 and k; 0 if the
// degree-(k+1) boundary map vanishes.
ExactValue boundary_depth(const ComplexSpec& spec, int k);

// beta_k read off an already-computed barcode, for callers that query many
// degrees of the same complex.
ExactValue boundary_depth(const Barcode& bc, int k);

// The linking form lambda(x, y) = Delta(x, c) for any c with boundary(c) = y,
// where x lies in the image of the opposite boundary delta: D_{-k+1} -> D_{-k}
// and y in the image of boundary: C_k -> C_{k-1}.  Membership of y is
// certified by solving; failure is a contract violation.
Fq linking_form(const ComplexSpec& spec, const Chain& x, const Chain& y);

// beta_{k-1} computed through the linking form:
//   -inf({0} U {ell(y) + ell^op(x) : lambda(x, y) != 0})
// with x, y ranging over orthogonal bases of the two images; the sweep over
// monomial rescalings of x is carried out exactly through the leading
// valuation of L(x, c).  Must agree with boundary_depth(spec, k-1) and
// boundary_depth(opposite(spec), -k).
ExactValue boundary_depth_via_linking(const ComplexSpec& spec, int k);

// True iff the class of the relative cycle c in C / C^(-inf, alpha] is
// nonzero, i.e. min_b ell(c - boundary(b)) > alpha.
bool class_is_nonzero_in_quotient(const ComplexSpec& spec, const Chain& c,
                                  const ExactValue& alpha);

// The constructive nondegeneracy certificates.  Every report re-validates
// from scratch via revalidate_witness.
struct WitnessReport {
    enum class Side { Right, Left };

    Side side = Side::Right;
    ExactValue alpha;
    int degree = 0; // degree k of the class on the C side

    // Right: the produced delta-cycle d0 (opposite storage, degree -k).
    // Left: the input cycle d (opposite storage, degree -k).
    Chain dual;
    // Right: the level-optimal representative c' (degree k).
    // Left: the produced relative cycle c (degree k).
    Chain rep;

    Fq pairing;          // Delta(dual, rep), nonzero when ok
    Level dual_level;    // ell^op(dual); < -alpha when ok
    Level rep_level;     // ell(rep)
    bool ok = false;
    std::vector<std::string> checks;
};

// Alpha-independent machinery behind dual_witness_right in a fixed degree:
// the projector along the boundary image and the opposite complex used to
// re-validate.  Build once per (complex, degree) and share across alpha
// sweeps and across classes.
struct RightWitnessContext {
    int degree = 0;
    WeightedSpace space;
    MatL proj;
    ComplexSpec op;
};
RightWitnessContext make_right_context(const ComplexSpec& spec, int degree);

// Alpha-independent machinery behind dual_witness_left for classes of the
// opposite complex in degree -degree.
struct LeftWitnessContext {
    int degree = 0;          // k: inputs live in opposite degree -k
    ComplexSpec op;
    WeightedSpace s_mk;      // coordinates of D_{-k}
    WeightedSpace s_mk1;     // coordinates of D_{-k+1}
    MatL dcols;              // delta: D_{-k+1} -> D_{-k}, as columns
    std::vector<VecL> ker;   // kernel basis of delta on D_{-k+1}
    MatL improj;             // projector along Im(delta) inside D_{-k}
};
LeftWitnessContext make_left_context(const ComplexSpec& spec, int degree);

// Given a relative cycle c0 whose class in C / C^(-inf, alpha] is nonzero,
// produce d0 with delta(d0) = 0, ell^op(d0) < -alpha and Delta(d0, c') != 0
// for the reported representative c' of the class.
WitnessReport dual_witness_right(const ComplexSpec& spec, const ExactValue& alpha,
                                 const Chain& c0, const RightWitnessContext* ctx = nullptr);

// Given a delta-cycle d with ell^op(d) < -alpha whose class in
// H(D^(-inf,-alpha)) is nonzero, produce a relative cycle c with
// boundary(c) in C^(-inf, alpha] and Delta(d, c) != 0.  When d is a global
// boundary, requires the generic-alpha condition (optimal primitive level
// != -alpha); otherwise throws UnsupportedAlpha.
WitnessReport dual_witness_left(const ComplexSpec& spec, const ExactValue& alpha,
                                const Chain& d, const LeftWitnessContext* ctx = nullptr);

// Re-run the witness certificate checks (cycle / relative-cycle condition,
// filtration levels, nonzero pairing) from the report contents alone; the
// check lines, levels and pairing value are refreshed in place.
bool revalidate_witness(const ComplexSpec& spec, WitnessReport& w);

// Same, with the opposite complex supplied by the caller instead of rebuilt.
bool revalidate_witness(const ComplexSpec& spec, const ComplexSpec& op, WitnessReport& w);

// Two-sided check of rho(a) = -inf{ rho^op(b) : Delta-bar(b, a) != 0 }.
struct SpectralDualityReport {
    struct GridPoint {
        ExactValue alpha;
        Level rho_op;  // rho^op of the witness class at this alpha
        bool ok = false;
    };

    Level rho;
    std::vector<GridPoint> grid;
    bool attained = false;       // some witness has rho^op == -rho exactly
    bool lower_bound_ok = false; // all pairing partners satisfy rho^op >= -rho
    bool ok = false;
};

// partners: optional extra opposite-complex cycles b to test the lower bound
// against (the witness produced for the grid is always included).  rctx and
// op_opt, when supplied, must be built for degree c.degree (rctx on spec,
// op_opt on the opposite complex in degree -c.degree); they let callers share
// the reductions across many classes of the same degree.
SpectralDualityReport verify_spectral_duality(const ComplexSpec& spec, const Chain& c,
                                              int grid_points = 16,
                                              const std::vector<Chain>* partners = nullptr,
                                              const RightWitnessContext* rctx = nullptr,
                                              const OptimalProjector* op_opt = nullptr);

} // namespace fnd
