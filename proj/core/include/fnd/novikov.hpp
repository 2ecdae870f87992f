#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fnd/config.hpp"

namespace fnd {

// An element of the Novikov field Lambda: a finite list of (group element,
// coefficient) terms sorted strictly increasing by omega-value, plus a
// truncation cutoff.  Coefficients at omega-value >= cutoff are unknown; a
// cutoff of +infinity means the scalar is exact.
class NovikovScalar {
public:
    struct Term {
        Gamma0Elem g;
        ExactValue w; // omega(g), cached
        Fq c;
    };

    NovikovScalar() = default;
    explicit NovikovScalar(ConfigPtr cfg) : cfg_(std::move(cfg)) {}

    static NovikovScalar zero(ConfigPtr cfg) { return NovikovScalar(std::move(cfg)); }
    static NovikovScalar one(ConfigPtr cfg);
    static NovikovScalar monomial(ConfigPtr cfg, const Gamma0Elem& g, Fq c);
    static NovikovScalar constant(ConfigPtr cfg, Fq c);

    const ConfigPtr& config() const { return cfg_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool exact() const { return !cutoff_.has_value(); }
    const std::optional<ExactValue>& cutoff() const { return cutoff_; }

    // True iff the scalar is exactly zero; throws PrecisionExhausted when the
    // stored term list is empty but the cutoff is finite.
    bool is_zero() const;
    // True iff no terms are stored (zero below the cutoff).
    bool trivially_empty() const { return terms_.empty(); }

    // The valuation nu: omega-value of the leading term; +inf for exact zero.
    Valn nu() const;
    // Leading term; requires a known leading term.
    const Term& leading() const;

    // Coefficient of the identity group element (the functional tau).
    Fq identity_coefficient() const;
    // Coefficient at a given group element; requires omega(g) < cutoff.
    Fq coefficient_at(const Gamma0Elem& g) const;

    NovikovScalar operator+(const NovikovScalar& o) const;
    NovikovScalar operator-(const NovikovScalar& o) const;
    NovikovScalar operator-() const;
    NovikovScalar operator*(const NovikovScalar& o) const;
    NovikovScalar scaled(const Fq& c) const;
    // Monomial shift: multiply by c * g.
    NovikovScalar shifted(const Gamma0Elem& g, const Fq& c) const;

    // Multiplicative inverse, correct on all terms with omega-value < window
    // in the product x * inv(x).
    NovikovScalar inverse(const ExactValue& window) const;

    // The ring involution g -> g^{-1}; requires an exact scalar.
    NovikovScalar conj() const;

    // Drop terms with omega-value >= at, and tighten the cutoff to at.
    NovikovScalar truncated(const ExactValue& at) const;
    // Keep only terms with omega-value <= 0 (identity-window truncation used
    // by the left-witness construction); result is exact.
    NovikovScalar nonpositive_part() const;

    // Exact equality below the common cutoff.
    bool agrees_below_cutoffs(const NovikovScalar& o) const;

    std::string str() const;

    // Construction helper: append a term with strictly increasing omega-value.
    void push_term(const Gamma0Elem& g, Fq c);
    void set_cutoff(std::optional<ExactValue> cut) { cutoff_ = std::move(cut); }

private:
    friend NovikovScalar merge_add(const NovikovScalar&, const NovikovScalar&, bool negate_rhs);

    ConfigPtr cfg_;
    std::vector<Term> terms_;
    std::optional<ExactValue> cutoff_; // nullopt = +infinity (exact)
};

} // namespace fnd
