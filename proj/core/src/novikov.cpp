#include "fnd/novikov.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "fnd/errors.hpp"

namespace fnd {

NovikovScalar NovikovScalar::one(ConfigPtr cfg) {
    Fq c = Fq::one(cfg->field());
    return constant(std::move(cfg), std::move(c));
}

NovikovScalar NovikovScalar::monomial(ConfigPtr cfg, const Gamma0Elem& g, Fq c) {
    NovikovScalar s(cfg);
    if (!c.is_zero()) {
        Fq cc(c.value(), cfg->field());
        if (!cc.is_zero()) s.terms_.push_back({g, cfg->omega_of(g), cc});
    }
    return s;
}

NovikovScalar NovikovScalar::constant(ConfigPtr cfg, Fq c) {
    Gamma0Elem id = Gamma0Elem::identity(cfg->rank());
    return monomial(std::move(cfg), id, std::move(c));
}

bool NovikovScalar::is_zero() const {
    if (!terms_.empty()) return false;
    if (cutoff_.has_value())
        throw PrecisionExhausted("scalar empty below finite cutoff " + cutoff_->str() +
                                 "; zero test inconclusive");
    return true;
}

Valn NovikovScalar::nu() const {
    if (terms_.empty()) {
        if (cutoff_.has_value())
            throw PrecisionExhausted("valuation unknown: no terms below cutoff " + cutoff_->str());
        return Valn::pos_inf();
    }
    return Valn(terms_.front().w);
}

const NovikovScalar::Term& NovikovScalar::leading() const {
    if (terms_.empty()) throw PrecisionExhausted("leading term of (possibly) zero scalar");
    return terms_.front();
}

Fq NovikovScalar::identity_coefficient() const {
    Gamma0Elem id = Gamma0Elem::identity(cfg_->rank());
    return coefficient_at(id);
}

Fq NovikovScalar::coefficient_at(const Gamma0Elem& g) const {
    ExactValue w = cfg_->omega_of(g);
    if (cutoff_.has_value() && !(w < *cutoff_))
        throw PrecisionExhausted("coefficient at omega-value " + w.str() +
                                 " beyond cutoff " + cutoff_->str());
    for (const Term& t : terms_)
        if (t.g == g) return t.c;
    return Fq::zero(cfg_->field());
}

namespace {
std::optional<ExactValue> min_cutoff(const std::optional<ExactValue>& a,
                                     const std::optional<ExactValue>& b) {
    if (!a) return b;
    if (!b) return a;
    return *a < *b ? a : b;
}
} // namespace

NovikovScalar merge_add(const NovikovScalar& x, const NovikovScalar& y, bool negate_rhs) {
    if (!x.cfg_->same_as(*y.cfg_)) throw ConfigError("scalar config mismatch");
    NovikovScalar r(x.cfg_);
    r.cutoff_ = min_cutoff(x.cutoff_, y.cutoff_);
    size_t i = 0, j = 0;
    auto keep = [&](const ExactValue& w) { return !r.cutoff_ || w < *r.cutoff_; };
    while (i < x.terms_.size() || j < y.terms_.size()) {
        bool take_x;
        if (i == x.terms_.size()) take_x = false;
        else if (j == y.terms_.size()) take_x = true;
        else {
            const ExactValue& wx = x.terms_[i].w;
            const ExactValue& wy = y.terms_[j].w;
            if (wx == wy) {
                Fq c = negate_rhs ? x.terms_[i].c - y.terms_[j].c : x.terms_[i].c + y.terms_[j].c;
                if (!c.is_zero() && keep(wx)) r.terms_.push_back({x.terms_[i].g, wx, c});
                ++i; ++j;
                continue;
            }
            take_x = wx < wy;
        }
        if (take_x) {
            if (keep(x.terms_[i].w)) r.terms_.push_back(x.terms_[i]);
            ++i;
        } else {
            const NovikovScalar::Term& t = y.terms_[j];
            if (keep(t.w)) r.terms_.push_back({t.g, t.w, negate_rhs ? -t.c : t.c});
            ++j;
        }
    }
    return r;
}

NovikovScalar NovikovScalar::operator+(const NovikovScalar& o) const {
    return merge_add(*this, o, false);
}

NovikovScalar NovikovScalar::operator-(const NovikovScalar& o) const {
    return merge_add(*this, o, true);
}

NovikovScalar NovikovScalar::operator-() const {
    NovikovScalar r = *this;
    for (Term& t : r.terms_) t.c = -t.c;
    return r;
}

NovikovScalar NovikovScalar::operator*(const NovikovScalar& o) const {
    if (!cfg_->same_as(*o.cfg_)) throw ConfigError("scalar config mismatch");
    NovikovScalar r(cfg_);
    // Zero handling: 0 * y = 0 exactly when the zero side is exact.
    if (terms_.empty() && !cutoff_) return r;
    if (o.terms_.empty() && !o.cutoff_) return r;
    // cutoff(xy) = min(cutoff_x + nu(y), cutoff_y + nu(x)); for a factor with
    // no stored terms its own cutoff is a sound lower bound on nu.
    auto nu_lb = [](const NovikovScalar& s) {
        return s.terms_.empty() ? *s.cutoff_ : s.terms_.front().w;
    };
    std::optional<ExactValue> cut;
    if (cutoff_) cut = min_cutoff(cut, *cutoff_ + nu_lb(o));
    if (o.cutoff_) cut = min_cutoff(cut, *o.cutoff_ + nu_lb(*this));
    struct Acc {
        Fq c;
        ExactValue w;
    };
    std::map<std::vector<long>, Acc> acc;
    for (const Term& a : terms_) {
        if (o.terms_.empty()) break;
        std::optional<ExactValue> lim; // keep b iff b.w < cut - a.w
        if (cut) {
            lim = *cut - a.w;
            // Terms are sorted, so once even the smallest b.w fails, later a fail too.
            if (!(o.terms_.front().w < *lim)) break;
        }
        for (const Term& b : o.terms_) {
            if (lim && !(b.w < *lim)) break;
            Gamma0Elem g = a.g + b.g;
            auto it = acc.find(g.exps);
            if (it == acc.end())
                acc.emplace(std::move(g.exps), Acc{a.c * b.c, a.w + b.w});
            else
                it->second.c = it->second.c + a.c * b.c;
        }
    }
    for (auto& [exps, e] : acc) {
        if (e.c.is_zero()) continue;
        r.terms_.push_back({Gamma0Elem{exps}, std::move(e.w), std::move(e.c)});
    }
    std::sort(r.terms_.begin(), r.terms_.end(),
              [](const Term& a, const Term& b) { return a.w < b.w; });
    r.cutoff_ = cut;
    return r;
}

NovikovScalar NovikovScalar::scaled(const Fq& c) const {
    if (c.is_zero()) {
        NovikovScalar r(cfg_);
        r.cutoff_ = cutoff_;
        return r;
    }
    NovikovScalar r = *this;
    for (Term& t : r.terms_) t.c = t.c * c;
    return r;
}

NovikovScalar NovikovScalar::shifted(const Gamma0Elem& g, const Fq& c) const {
    return *this * monomial(cfg_, g, c);
}

NovikovScalar NovikovScalar::inverse(const ExactValue& window) const {
    if (terms_.empty()) {
        if (cutoff_) throw PrecisionExhausted("inverse: leading term unknown");
        throw ContractViolation("inverse of zero scalar");
    }
    const Term& lead = terms_.front();
    // x = c*g * (1 - r) with nu(r) > 0; inv = (c*g)^{-1} * sum r^j.
    NovikovScalar lead_inv = monomial(cfg_, -lead.g, lead.c.inverse());
    NovikovScalar reduced = (*this * lead_inv); // 1 - r
    NovikovScalar rem = NovikovScalar::constant(cfg_, Fq::one(cfg_->field())) - reduced;
    if (rem.trivially_empty() && rem.exact()) return lead_inv; // monomial: exact inverse
    // Newton iteration y <- y(1 + e), e = 1 - (x/lead)y; the error valuation
    // doubles per step, so the loop is logarithmic in the window depth.
    NovikovScalar one = NovikovScalar::constant(cfg_, Fq::one(cfg_->field()));
    NovikovScalar y = one.truncated(window);
    while (true) {
        NovikovScalar e = (one - reduced * y).truncated(window);
        if (e.trivially_empty()) break;
        y = (y * (one + e)).truncated(window);
    }
    return lead_inv * y;
}

NovikovScalar NovikovScalar::conj() const {
    if (cutoff_)
        throw PrecisionExhausted("conj of truncated scalar: tail would become leading terms");
    NovikovScalar r(cfg_);
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it)
        r.terms_.push_back({-it->g, -it->w, it->c});
    return r;
}

NovikovScalar NovikovScalar::truncated(const ExactValue& at) const {
    NovikovScalar r(cfg_);
    for (const Term& t : terms_) {
        if (!(t.w < at)) break;
        r.terms_.push_back(t);
    }
    r.cutoff_ = cutoff_ && *cutoff_ < at ? cutoff_ : std::optional<ExactValue>(at);
    return r;
}

NovikovScalar NovikovScalar::nonpositive_part() const {
    if (cutoff_ && !(ExactValue() < *cutoff_))
        throw PrecisionExhausted("nonpositive part: cutoff below zero");
    NovikovScalar r(cfg_);
    for (const Term& t : terms_) {
        if (t.w.sign() > 0) break;
        r.terms_.push_back(t);
    }
    return r;
}

bool NovikovScalar::agrees_below_cutoffs(const NovikovScalar& o) const {
    std::optional<ExactValue> cut = min_cutoff(cutoff_, o.cutoff_);
    auto below = [&](const Term& t) { return !cut || t.w < *cut; };
    size_t i = 0, j = 0;
    while (true) {
        while (i < terms_.size() && !below(terms_[i])) ++i;
        while (j < o.terms_.size() && !below(o.terms_[j])) ++j;
        if (i == terms_.size() || j == o.terms_.size()) break;
        if (!(terms_[i].g == o.terms_[j].g) || !(terms_[i].c == o.terms_[j].c)) return false;
        ++i; ++j;
    }
    for (; i < terms_.size(); ++i) if (below(terms_[i])) return false;
    for (; j < o.terms_.size(); ++j) if (below(o.terms_[j])) return false;
    return true;
}

std::string NovikovScalar::str() const {
    std::ostringstream os;
    if (terms_.empty()) os << "0";
    for (size_t i = 0; i < terms_.size(); ++i) {
        if (i) os << " + ";
        os << terms_[i].c.str() << "@[" << terms_[i].g.str() << "]";
    }
    if (cutoff_) os << " (O(" << cutoff_->str() << "))";
    return os.str();
}

void NovikovScalar::push_term(const Gamma0Elem& g, Fq c) {
    if (c.is_zero()) return;
    ExactValue w = cfg_->omega_of(g);
    if (!terms_.empty() && !(terms_.back().w < w))
        throw ConfigError("push_term: omega-values must strictly increase");
    terms_.push_back({g, w, std::move(c)});
}

} // namespace fnd
