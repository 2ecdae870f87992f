#include "fnd/field.hpp"

namespace fnd {

void Fq::reduce() {
    if (spec_.p == 0) {
        v_.canonicalize();
        return;
    }
    // Residue of num/den mod p; den must be a unit.
    mpz_class p(static_cast<unsigned long>(spec_.p));
    mpz_class num = v_.get_num() % p;
    if (num < 0) num += p;
    mpz_class den = v_.get_den() % p;
    if (den < 0) den += p;
    if (den == 0) throw ConfigError("denominator not a unit mod p");
    mpz_class deninv;
    if (mpz_invert(deninv.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t()) == 0)
        throw ConfigError("denominator not invertible mod p");
    v_ = mpq_class((num * deninv) % p);
}

Fq Fq::inverse() const {
    if (is_zero()) throw ContractViolation("inverse of zero field element");
    if (spec_.p == 0) return Fq(1 / v_, spec_);
    mpz_class p(static_cast<unsigned long>(spec_.p));
    mpz_class inv;
    if (mpz_invert(inv.get_mpz_t(), mpz_class(v_.get_num()).get_mpz_t(), p.get_mpz_t()) == 0)
        throw ContractViolation("element not invertible mod p");
    return Fq(mpq_class(inv), spec_);
}

std::string Fq::str() const { return v_.get_str(); }

} // namespace fnd
