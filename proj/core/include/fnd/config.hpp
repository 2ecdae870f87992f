#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "fnd/exact_value.hpp"
#include "fnd/field.hpp"

namespace fnd {

// An element of Gamma0 = Z^r, written additively as an exponent vector.
struct Gamma0Elem {
    std::vector<long> exps;

    static Gamma0Elem identity(int rank) { return Gamma0Elem{std::vector<long>(rank, 0)}; }
    bool is_identity() const {
        for (long e : exps) if (e != 0) return false;
        return true;
    }
    Gamma0Elem operator+(const Gamma0Elem& o) const {
        Gamma0Elem r = *this;
        for (size_t i = 0; i < exps.size(); ++i) r.exps[i] += o.exps[i];
        return r;
    }
    Gamma0Elem operator-() const {
        Gamma0Elem r = *this;
        for (long& e : r.exps) e = -e;
        return r;
    }
    bool operator==(const Gamma0Elem&) const = default;
    std::string str() const;
};

// One descriptor of the exact-real basis: value = scale * 1 or scale * sqrt2.
struct BasisReal {
    mpq_class scale = 1;
    bool sqrt2 = false;

    ExactValue value() const {
        return sqrt2 ? ExactValue::sqrt2(scale) : ExactValue::rational(scale);
    }
};

// Configuration of the value group omega(Gamma0) and the coefficient field.
// omega_rows[j] is omega of the j-th standard generator of Gamma0 = Z^r.
class ValuationConfig {
public:
    ValuationConfig(std::vector<BasisReal> basis, int rank,
                    std::vector<ExactValue> omega_rows, FieldSpec field);

    static std::shared_ptr<const ValuationConfig> make(
        std::vector<BasisReal> basis, int rank,
        std::vector<ExactValue> omega_rows, FieldSpec field);

    // Discrete profile {1}, rationals by default.
    static std::shared_ptr<const ValuationConfig> discrete_default(FieldSpec field = {});
    // Dense profile with omega rows (1, sqrt2).
    static std::shared_ptr<const ValuationConfig> dense_default(FieldSpec field = {});

    int rank() const { return rank_; }
    const std::vector<BasisReal>& basis() const { return basis_; }
    const std::vector<ExactValue>& omega_rows() const { return omega_rows_; }
    FieldSpec field() const { return field_; }

    // omega(Gamma0) is cyclic iff rank 1 (given injectivity); dense otherwise.
    bool dense() const { return rank_ > 1; }

    ExactValue omega_of(const Gamma0Elem& g) const;

    // Build an ExactValue from coordinates against the configured basis.
    ExactValue from_coords(const std::vector<mpq_class>& coords) const;

    // A group element s with 0 < omega(s) <= eps.  Subtractive Euclid on the
    // generators; requires eps > 0 and, in the discrete profile, eps at least
    // the positive generator of omega(Gamma0).
    Gamma0Elem small_positive_element(const ExactValue& eps) const;

    // A group element g with omega(g) in (lo, hi].  Requires hi - lo wide
    // enough for the profile; throws WindowInfeasible otherwise.
    Gamma0Elem element_with_omega_in(const ExactValue& lo, const ExactValue& hi) const;

    // The unique g with omega(g) = v, if v lies in omega(Gamma0).
    std::optional<Gamma0Elem> element_with_omega_exact(const ExactValue& v) const;

    bool same_as(const ValuationConfig& o) const;

private:
    std::vector<BasisReal> basis_;
    int rank_;
    std::vector<ExactValue> omega_rows_;
    FieldSpec field_;
};

using ConfigPtr = std::shared_ptr<const ValuationConfig>;

} // namespace fnd
