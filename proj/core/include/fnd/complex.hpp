#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fnd/novikov.hpp"

namespace fnd {

// A graded filtered chain complex over the Novikov field: orbit generators
// with gradings and action values, and boundary matrices with exact entries.
struct ComplexSpec {
    struct Orbit {
        std::string id;
        int grading = 0;
        ExactValue action;
    };

    ConfigPtr cfg;
    std::vector<Orbit> orbits;
    // Boundary coefficients keyed by (source orbit, target orbit) global
    // indices; the source sits one degree above the target.
    std::map<std::pair<int, int>, NovikovScalar> entries;
    std::optional<ExactValue> window_override;

    // Rebuild the per-degree index after mutating orbits/entries.
    void reindex();

    const std::vector<int>& degree_orbits(int k) const;
    int degree_dim(int k) const { return static_cast<int>(degree_orbits(k).size()); }
    std::vector<int> degrees_present() const;
    int find_orbit(const std::string& id) const; // -1 if absent

    // Boundary matrix from degree k to degree k-1: columns indexed by the
    // degree-k orbits, rows by the degree-(k-1) orbits.
    std::vector<std::vector<NovikovScalar>> boundary_matrix(int k) const;

    // Truncation window: the override if set, else the default bound
    // (largest entry valuation plus twice the action spread plus one).
    ExactValue window() const;
    ExactValue default_window() const;

private:
    std::map<int, std::vector<int>> by_degree_;
};

// A degree-homogeneous element: one Lambda-coefficient per degree-k orbit.
struct Chain {
    int degree = 0;
    std::vector<NovikovScalar> coeffs;
};

Chain zero_chain(const ComplexSpec& spec, int degree);
Chain chain_add(const Chain& a, const Chain& b);
Chain chain_sub(const Chain& a, const Chain& b);
Chain chain_scaled(const Chain& a, const NovikovScalar& s);
// Is every coefficient empty?  (Exact-zero test throws if inconclusive.)
bool chain_is_zero(const Chain& c);

struct ValidationReport {
    struct Violation {
        std::string message;
    };
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    std::string str() const;
};

// Check all ComplexSpec invariants: grading axiom, filtration axiom
// (nu(entry) > t_dst - t_src), exact entries, and boundary^2 = 0.
ValidationReport validate(const ComplexSpec& spec);

// Filtration level: max action over the P-support; -inf for the zero chain.
Level ell(const ComplexSpec& spec, const Chain& c);

Chain boundary_apply(const ComplexSpec& spec, const Chain& c);

// The opposite complex: negated actions and gradings, transposed boundary.
// Scalars are stored against each complex's own module action, so the
// transpose carries the coefficients verbatim.
ComplexSpec opposite(const ComplexSpec& spec);

// Reinterpret a chain through the identification of P with the opposite
// complex's generators: coefficients are conjugated, degree is negated.
Chain chain_to_opposite(const ComplexSpec& spec, const Chain& c);

bool filtered_member(const ComplexSpec& spec, const Chain& c, const ExactValue& alpha, bool strict);

// Canonical representative in C / C^(-inf, alpha]: drop P-support with
// action <= alpha.  Requires exact coefficients.
Chain reduce_mod_filtration(const ComplexSpec& spec, const Chain& c, const ExactValue& alpha);

struct RebaseResult {
    ComplexSpec spec;
    std::vector<Gamma0Elem> reps; // per degree-k orbit: p_i replaced by g_i * p_i
};

// Replace the degree-k orbit representatives so all their actions lie in
// [alpha, alpha + eps); boundary rows/columns are re-scaled accordingly.
RebaseResult rebase(const ComplexSpec& spec, int k, const ExactValue& alpha, const ExactValue& eps);

// Transport a degree-k chain through a rebase (coefficients pick up g^{-1}).
Chain rebase_chain(const ComplexSpec& rebased, const RebaseResult& rb, const Chain& c);

} // namespace fnd
