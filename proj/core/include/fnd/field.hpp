#pragma once

#include <gmpxx.h>
#include <string>

#include "fnd/errors.hpp"

namespace fnd {

// Coefficient field: the rationals (p == 0) or the prime field GF(p).
struct FieldSpec {
    unsigned long p = 0;

    bool is_rational() const { return p == 0; }
    bool operator==(const FieldSpec&) const = default;
};

// An element of the coefficient field K.  Rationals are kept as exact
// mpq values; GF(p) elements as canonical residues 0..p-1.
class Fq {
public:
    Fq() = default;
    Fq(mpq_class value, FieldSpec spec) : v_(std::move(value)), spec_(spec) { reduce(); }
    static Fq zero(FieldSpec spec) { return Fq(0, spec); }
    static Fq one(FieldSpec spec) { return Fq(1, spec); }

    const mpq_class& value() const { return v_; }
    FieldSpec spec() const { return spec_; }
    bool is_zero() const { return v_ == 0; }

    Fq operator+(const Fq& o) const { check(o); return Fq(v_ + o.v_, spec_); }
    Fq operator-(const Fq& o) const { check(o); return Fq(v_ - o.v_, spec_); }
    Fq operator*(const Fq& o) const { check(o); return Fq(v_ * o.v_, spec_); }
    Fq operator-() const { return Fq(-v_, spec_); }
    Fq inverse() const;
    Fq operator/(const Fq& o) const { return *this * o.inverse(); }
    bool operator==(const Fq& o) const { return spec_ == o.spec_ && v_ == o.v_; }

    std::string str() const;

private:
    void reduce();
    void check(const Fq& o) const {
        if (spec_ != o.spec_) throw ConfigError("field mismatch in Fq arithmetic");
    }

    mpq_class v_ = 0;
    FieldSpec spec_;
};

} // namespace fnd
