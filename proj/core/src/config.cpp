#include "fnd/config.hpp"

#include <sstream>

#include "fnd/errors.hpp"

namespace fnd {

std::string Gamma0Elem::str() const {
    std::ostringstream os;
    for (size_t i = 0; i < exps.size(); ++i) {
        if (i) os << ' ';
        os << exps[i];
    }
    return os.str();
}

ValuationConfig::ValuationConfig(std::vector<BasisReal> basis, int rank,
                                 std::vector<ExactValue> omega_rows, FieldSpec field)
    : basis_(std::move(basis)), rank_(rank), omega_rows_(std::move(omega_rows)), field_(field) {
    if (rank_ <= 0) throw ConfigError("gamma0_rank must be positive");
    if (static_cast<int>(omega_rows_.size()) != rank_)
        throw ConfigError("expected one omega row per Gamma0 generator");
    // Injectivity of omega on Z^r: the rows must be Q-linearly independent.
    // Rows live in Q^2 (coordinates against {1, sqrt2}), so rank <= 2 and the
    // check is an exact 2x2 rank computation.
    if (rank_ > 2)
        throw ConfigError("omega cannot be injective: rank > 2 over basis {1, sqrt2}");
    if (rank_ == 1) {
        if (omega_rows_[0].is_zero()) throw ConfigError("omega row is zero: omega not injective");
    } else {
        const ExactValue& u = omega_rows_[0];
        const ExactValue& v = omega_rows_[1];
        mpq_class det = u.rat_part() * v.sqrt2_part() - u.sqrt2_part() * v.rat_part();
        if (det == 0) throw ConfigError("omega rows Q-linearly dependent: omega not injective");
    }
}

std::shared_ptr<const ValuationConfig> ValuationConfig::make(
    std::vector<BasisReal> basis, int rank,
    std::vector<ExactValue> omega_rows, FieldSpec field) {
    return std::make_shared<const ValuationConfig>(std::move(basis), rank,
                                                   std::move(omega_rows), field);
}

std::shared_ptr<const ValuationConfig> ValuationConfig::discrete_default(FieldSpec field) {
    return make({BasisReal{1, false}}, 1, {ExactValue::rational(1)}, field);
}

std::shared_ptr<const ValuationConfig> ValuationConfig::dense_default(FieldSpec field) {
    return make({BasisReal{1, false}, BasisReal{1, true}}, 2,
                {ExactValue::rational(1), ExactValue::sqrt2(1)}, field);
}

ExactValue ValuationConfig::omega_of(const Gamma0Elem& g) const {
    if (static_cast<int>(g.exps.size()) != rank_)
        throw ConfigError("group element length does not match gamma0_rank");
    ExactValue v;
    for (int j = 0; j < rank_; ++j)
        v += omega_rows_[j].scaled(mpq_class(g.exps[j]));
    return v;
}

ExactValue ValuationConfig::from_coords(const std::vector<mpq_class>& coords) const {
    if (coords.size() != basis_.size())
        throw ConfigError("coordinate length does not match value_basis");
    ExactValue v;
    for (size_t i = 0; i < coords.size(); ++i)
        v += basis_[i].value().scaled(coords[i]);
    return v;
}

namespace {
long to_long(const mpz_class& z) {
    if (!z.fits_slong_p()) throw ConfigError("group exponent overflow in lattice search");
    return z.get_si();
}
} // namespace

Gamma0Elem ValuationConfig::small_positive_element(const ExactValue& eps) const {
    if (eps.sign() <= 0) throw ContractViolation("eps must be positive");
    // Generators with positive omega.
    Gamma0Elem u = Gamma0Elem::identity(rank_);
    u.exps[0] = omega_rows_[0].sign() >= 0 ? 1 : -1;
    ExactValue wu = omega_of(u);
    if (rank_ == 1) {
        if (wu > eps) throw WindowInfeasible("discrete value group coarser than requested window");
        return u;
    }
    Gamma0Elem v = Gamma0Elem::identity(rank_);
    v.exps[1] = omega_rows_[1].sign() >= 0 ? 1 : -1;
    ExactValue wv = omega_of(v);
    // Subtractive Euclid: replace the larger by its remainder mod the smaller.
    // The ratio is irrational, so this never terminates at zero; stop once the
    // smaller value is <= eps.
    while (true) {
        if (wu > wv) { std::swap(u, v); std::swap(wu, wv); }
        if (wu <= eps) return u;
        mpz_class q = floor_div(wv, wu);
        Gamma0Elem r = v;
        for (int j = 0; j < rank_; ++j) r.exps[j] -= to_long(q) * u.exps[j];
        ExactValue wr = omega_of(r);
        if (wr.sign() == 0) throw ConfigError("omega not injective (euclid hit zero)");
        if (wr.sign() < 0) { r = -r; wr = -wr; }
        v = r; wv = wr;
    }
}

Gamma0Elem ValuationConfig::element_with_omega_in(const ExactValue& lo, const ExactValue& hi) const {
    ExactValue width = hi - lo;
    if (width.sign() <= 0) throw ContractViolation("empty window");
    Gamma0Elem s = small_positive_element(width); // throws WindowInfeasible if too coarse
    ExactValue ws = omega_of(s);
    // n*ws in (lo, hi] for n = floor(hi / ws) works since ws <= hi - lo.
    mpz_class n = floor_div(hi, ws);
    Gamma0Elem g = Gamma0Elem::identity(rank_);
    for (int j = 0; j < rank_; ++j) g.exps[j] = to_long(n) * s.exps[j];
    ExactValue wg = omega_of(g);
    if (!(lo < wg) || hi < wg) throw ConfigError("lattice search failed to land in window");
    return g;
}

std::optional<Gamma0Elem> ValuationConfig::element_with_omega_exact(const ExactValue& v) const {
    // Solve x_1 row_1 + .. + x_r row_r = v over Q, then demand integrality.
    std::vector<mpq_class> x;
    if (rank_ == 1) {
        const ExactValue& r0 = omega_rows_[0];
        mpq_class c;
        if (r0.sqrt2_part() == 0) {
            if (v.sqrt2_part() != 0) return std::nullopt;
            c = v.rat_part() / r0.rat_part();
        } else if (r0.rat_part() == 0) {
            if (v.rat_part() != 0) return std::nullopt;
            c = v.sqrt2_part() / r0.sqrt2_part();
        } else {
            c = v.rat_part() / r0.rat_part();
            if (!(r0.scaled(c) == v)) return std::nullopt;
        }
        x = {c};
    } else {
        const ExactValue& u = omega_rows_[0];
        const ExactValue& w = omega_rows_[1];
        mpq_class det = u.rat_part() * w.sqrt2_part() - u.sqrt2_part() * w.rat_part();
        mpq_class c0 = (v.rat_part() * w.sqrt2_part() - v.sqrt2_part() * w.rat_part()) / det;
        mpq_class c1 = (u.rat_part() * v.sqrt2_part() - u.sqrt2_part() * v.rat_part()) / det;
        x = {c0, c1};
    }
    Gamma0Elem g = Gamma0Elem::identity(rank_);
    for (int j = 0; j < rank_; ++j) {
        if (x[j].get_den() != 1) return std::nullopt;
        if (!x[j].get_num().fits_slong_p()) return std::nullopt;
        g.exps[j] = x[j].get_num().get_si();
    }
    return g;
}

bool ValuationConfig::same_as(const ValuationConfig& o) const {
    if (rank_ != o.rank_ || !(field_ == o.field_)) return false;
    for (int j = 0; j < rank_; ++j)
        if (!(omega_rows_[j] == o.omega_rows_[j])) return false;
    return true;
}

} // namespace fnd
