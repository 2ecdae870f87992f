#pragma once

#include <gmpxx.h>
#include <compare>
#include <optional>
#include <string>

namespace fnd {

// An element of the real value group extension Q + Q*sqrt(2), stored as the
// canonical pair (a, b) representing a + b*sqrt(2).  Sign, and hence total
// order, is exactly decidable by rational comparisons.
class ExactValue {
public:
    ExactValue() = default;
    ExactValue(mpq_class a, mpq_class b) : a_(std::move(a)), b_(std::move(b)) {}
    static ExactValue rational(mpq_class a) { return ExactValue(std::move(a), 0); }
    static ExactValue sqrt2(mpq_class b) { return ExactValue(0, std::move(b)); }

    const mpq_class& rat_part() const { return a_; }
    const mpq_class& sqrt2_part() const { return b_; }
    bool is_zero() const { return a_ == 0 && b_ == 0; }
    bool is_rational() const { return b_ == 0; }

    // Exact sign: -1, 0, +1.
    int sign() const;

    ExactValue operator+(const ExactValue& o) const { return {a_ + o.a_, b_ + o.b_}; }
    ExactValue operator-(const ExactValue& o) const { return {a_ - o.a_, b_ - o.b_}; }
    ExactValue operator-() const { return {-a_, -b_}; }
    ExactValue& operator+=(const ExactValue& o) { a_ += o.a_; b_ += o.b_; return *this; }
    ExactValue& operator-=(const ExactValue& o) { a_ -= o.a_; b_ -= o.b_; return *this; }
    ExactValue scaled(const mpq_class& q) const { return {a_ * q, b_ * q}; }

    std::strong_ordering operator<=>(const ExactValue& o) const {
        int s = (*this - o).sign();
        if (s < 0) return std::strong_ordering::less;
        if (s > 0) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }
    bool operator==(const ExactValue& o) const { return a_ == o.a_ && b_ == o.b_; }

    double approx() const;
    std::string str() const;

private:
    mpq_class a_ = 0; // rational part
    mpq_class b_ = 0; // coefficient of sqrt(2)
};

// Largest integer n with n <= x, computed exactly.
mpz_class floor_of(const ExactValue& x);

// Largest integer n with n*y <= x, for y > 0.
mpz_class floor_div(const ExactValue& x, const ExactValue& y);

// A filtration level: a real value or -infinity (the level of the zero chain).
class Level {
public:
    Level() : v_(std::nullopt) {}
    Level(ExactValue v) : v_(std::move(v)) {}
    static Level neg_inf() { return Level(); }

    bool is_neg_inf() const { return !v_.has_value(); }
    bool finite() const { return v_.has_value(); }
    const ExactValue& value() const { return *v_; }

    bool operator<(const Level& o) const {
        if (is_neg_inf()) return o.finite();
        if (o.is_neg_inf()) return false;
        return *v_ < *o.v_;
    }
    bool operator<=(const Level& o) const { return *this < o || *this == o; }
    bool operator==(const Level& o) const { return v_ == o.v_; }
    std::string str() const { return finite() ? v_->str() : "-inf"; }

private:
    std::optional<ExactValue> v_;
};

// A valuation: a real value or +infinity (the valuation of the zero scalar).
class Valn {
public:
    Valn() : v_(std::nullopt) {}
    Valn(ExactValue v) : v_(std::move(v)) {}
    static Valn pos_inf() { return Valn(); }

    bool is_pos_inf() const { return !v_.has_value(); }
    bool finite() const { return v_.has_value(); }
    const ExactValue& value() const { return *v_; }

    bool operator<(const Valn& o) const {
        if (is_pos_inf()) return false;
        if (o.is_pos_inf()) return true;
        return *v_ < *o.v_;
    }
    bool operator<=(const Valn& o) const { return *this < o || *this == o; }
    bool operator==(const Valn& o) const { return v_ == o.v_; }
    std::string str() const { return finite() ? v_->str() : "+inf"; }

private:
    std::optional<ExactValue> v_;
};

} // namespace fnd
