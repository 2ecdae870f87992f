#include "fnd/exact_value.hpp"

#include <cmath>

namespace fnd {

int ExactValue::sign() const {
    int sa = sgn(a_);
    int sb = sgn(b_);
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // Mixed signs: sign of a + b*sqrt(2) decided by a^2 vs 2 b^2.
    mpq_class a2 = a_ * a_;
    mpq_class b2 = 2 * b_ * b_;
    if (a2 == b2) return 0; // impossible for nonzero rational a, b; kept for safety
    return (a2 > b2) ? sa : sb;
}

double ExactValue::approx() const {
    return a_.get_d() + b_.get_d() * std::sqrt(2.0);
}

std::string ExactValue::str() const {
    if (b_ == 0) return a_.get_str();
    std::string s;
    if (a_ != 0) s = a_.get_str() + (b_ > 0 ? "+" : "");
    s += b_.get_str() + "*sqrt2";
    return s;
}

mpz_class floor_of(const ExactValue& x) {
    // Start from the double estimate, then correct with exact comparisons.
    mpz_class n(std::floor(x.approx()));
    while (ExactValue::rational(mpq_class(n)) > x) n -= 1;
    while (ExactValue::rational(mpq_class(n + 1)) <= x) n += 1;
    return n;
}

mpz_class floor_div(const ExactValue& x, const ExactValue& y) {
    // x/y with y = a + b*sqrt2 > 0: rationalize by the conjugate.
    mpq_class denom = y.rat_part() * y.rat_part() - 2 * y.sqrt2_part() * y.sqrt2_part();
    ExactValue q;
    if (denom == 0) {
        // y is a pure rational multiple of itself only if a=b=0; guarded by caller.
        q = ExactValue(0, 0);
    } else {
        // (x * conj(y)) / (a^2 - 2 b^2)
        mpq_class xa = x.rat_part(), xb = x.sqrt2_part();
        mpq_class ya = y.rat_part(), yb = y.sqrt2_part();
        mpq_class ra = (xa * ya - 2 * xb * yb) / denom;
        mpq_class rb = (xb * ya - xa * yb) / denom;
        q = ExactValue(ra, rb);
    }
    mpz_class n = floor_of(q);
    return n;
}

} // namespace fnd
