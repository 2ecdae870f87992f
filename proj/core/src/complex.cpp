#include "fnd/complex.hpp"

#include <algorithm>
#include <sstream>

#include "fnd/errors.hpp"

namespace fnd {

void ComplexSpec::reindex() {
    by_degree_.clear();
    for (size_t i = 0; i < orbits.size(); ++i)
        by_degree_[orbits[i].grading].push_back(static_cast<int>(i));
}

const std::vector<int>& ComplexSpec::degree_orbits(int k) const {
    static const std::vector<int> empty;
    auto it = by_degree_.find(k);
    return it == by_degree_.end() ? empty : it->second;
}

std::vector<int> ComplexSpec::degrees_present() const {
    std::vector<int> ds;
    for (const auto& [k, v] : by_degree_)
        if (!v.empty()) ds.push_back(k);
    return ds;
}

int ComplexSpec::find_orbit(const std::string& id) const {
    for (size_t i = 0; i < orbits.size(); ++i)
        if (orbits[i].id == id) return static_cast<int>(i);
    return -1;
}

std::vector<std::vector<NovikovScalar>> ComplexSpec::boundary_matrix(int k) const {
    const std::vector<int>& cols = degree_orbits(k);
    const std::vector<int>& rows = degree_orbits(k - 1);
    std::vector<std::vector<NovikovScalar>> m(
        cols.size(), std::vector<NovikovScalar>(rows.size(), NovikovScalar::zero(cfg)));
    for (size_t j = 0; j < cols.size(); ++j)
        for (size_t i = 0; i < rows.size(); ++i) {
            auto it = entries.find({cols[j], rows[i]});
            if (it != entries.end()) m[j][i] = it->second;
        }
    return m;
}

ExactValue ComplexSpec::default_window() const {
    ExactValue max_val; // >= 0; leading valuations only, tails are irrelevant
    for (const auto& [key, s] : entries)
        if (!s.terms().empty() && max_val < s.terms().front().w) max_val = s.terms().front().w;
    ExactValue spread;
    if (!orbits.empty()) {
        ExactValue lo = orbits[0].action, hi = orbits[0].action;
        for (const Orbit& o : orbits) {
            if (o.action < lo) lo = o.action;
            if (hi < o.action) hi = o.action;
        }
        spread = hi - lo;
    }
    return max_val + spread + ExactValue::rational(1);
}

ExactValue ComplexSpec::window() const {
    return window_override ? *window_override : default_window();
}

Chain zero_chain(const ComplexSpec& spec, int degree) {
    Chain c;
    c.degree = degree;
    c.coeffs.assign(spec.degree_dim(degree), NovikovScalar::zero(spec.cfg));
    return c;
}

Chain chain_add(const Chain& a, const Chain& b) {
    if (a.degree != b.degree || a.coeffs.size() != b.coeffs.size())
        throw ContractViolation("chain_add: degree/dimension mismatch");
    Chain r = a;
    for (size_t i = 0; i < r.coeffs.size(); ++i) r.coeffs[i] = r.coeffs[i] + b.coeffs[i];
    return r;
}

Chain chain_sub(const Chain& a, const Chain& b) {
    if (a.degree != b.degree || a.coeffs.size() != b.coeffs.size())
        throw ContractViolation("chain_sub: degree/dimension mismatch");
    Chain r = a;
    for (size_t i = 0; i < r.coeffs.size(); ++i) r.coeffs[i] = r.coeffs[i] - b.coeffs[i];
    return r;
}

Chain chain_scaled(const Chain& a, const NovikovScalar& s) {
    Chain r = a;
    for (auto& c : r.coeffs) c = c * s;
    return r;
}

bool chain_is_zero(const Chain& c) {
    bool all = true;
    for (const auto& s : c.coeffs) all = all && s.is_zero();
    return all;
}

std::string ValidationReport::str() const {
    if (ok()) return "ok";
    std::ostringstream os;
    for (const Violation& v : violations) os << v.message << '\n';
    return os.str();
}

ValidationReport validate(const ComplexSpec& spec) {
    ValidationReport rep;
    auto flag = [&](const std::string& m) { rep.violations.push_back({m}); };
    for (const auto& [key, s] : spec.entries) {
        const auto& src = spec.orbits[key.first];
        const auto& dst = spec.orbits[key.second];
        std::string where = "entry (" + src.id + " -> " + dst.id + ")";
        if (dst.grading != src.grading - 1)
            flag(where + ": grading " + std::to_string(src.grading) + " -> " +
                 std::to_string(dst.grading) + " is not a degree drop of 1");
        if (!s.exact())
            flag(where + ": boundary coefficient is truncated, not exact");
        if (s.trivially_empty()) continue;
        // ell(d(p_src)) < action(p_src): t_dst - nu <= ... requires
        // nu(coeff) > t_dst - t_src.
        ExactValue bound = dst.action - src.action;
        if (!(bound < s.nu().value()))
            flag(where + ": valuation " + s.nu().str() + " does not exceed " + bound.str() +
                 " (filtration axiom fails: level of the boundary is not below the level of " +
                 src.id + ")");
    }
    // d composed with d must vanish identically.
    for (int k : spec.degrees_present()) {
        if (spec.degree_dim(k - 1) == 0 || spec.degree_dim(k - 2) == 0) continue;
        auto dk = spec.boundary_matrix(k);
        auto dk1 = spec.boundary_matrix(k - 1);
        const auto& mid = spec.degree_orbits(k - 1);
        for (size_t j = 0; j < dk.size(); ++j) {
            for (size_t i = 0; i < dk1[0].size(); ++i) {
                NovikovScalar acc = NovikovScalar::zero(spec.cfg);
                for (size_t m = 0; m < mid.size(); ++m)
                    acc = acc + dk1[m][i] * dk[j][m];
                if (!acc.is_zero())
                    flag("boundary^2 != 0: component (" +
                         spec.orbits[spec.degree_orbits(k)[j]].id + " -> " +
                         spec.orbits[spec.degree_orbits(k - 2)[i]].id + ") equals " + acc.str());
            }
        }
    }
    return rep;
}

Level ell(const ComplexSpec& spec, const Chain& c) {
    const auto& idx = spec.degree_orbits(c.degree);
    if (c.coeffs.size() != idx.size()) throw ContractViolation("chain dimension mismatch");
    Level known = Level::neg_inf();
    Level bound = Level::neg_inf();
    for (size_t i = 0; i < idx.size(); ++i) {
        const NovikovScalar& s = c.coeffs[i];
        const ExactValue& t = spec.orbits[idx[i]].action;
        if (!s.trivially_empty()) {
            Level l(t - s.nu().value());
            if (known < l) known = l;
        } else if (!s.exact()) {
            // Empty below cutoff: the true level is < t - cutoff + anything,
            // i.e. at most t - cutoff (strictly below, but use the bound).
            Level l(t - *s.cutoff());
            if (bound < l) bound = l;
        }
    }
    if (known < bound)
        throw PrecisionExhausted("filtration level inconclusive: truncated coefficient could "
                                 "contribute up to level " + bound.str());
    return known;
}

Chain boundary_apply(const ComplexSpec& spec, const Chain& c) {
    const auto& src = spec.degree_orbits(c.degree);
    if (c.coeffs.size() != src.size()) throw ContractViolation("chain dimension mismatch");
    Chain r = zero_chain(spec, c.degree - 1);
    const auto& dst = spec.degree_orbits(c.degree - 1);
    for (size_t j = 0; j < src.size(); ++j) {
        if (c.coeffs[j].trivially_empty() && c.coeffs[j].exact()) continue;
        for (size_t i = 0; i < dst.size(); ++i) {
            auto it = spec.entries.find({src[j], dst[i]});
            if (it != spec.entries.end())
                r.coeffs[i] = r.coeffs[i] + it->second * c.coeffs[j];
        }
    }
    return r;
}

ComplexSpec opposite(const ComplexSpec& spec) {
    ComplexSpec op;
    op.cfg = spec.cfg;
    op.window_override = spec.window_override;
    op.orbits = spec.orbits;
    for (auto& o : op.orbits) {
        o.grading = -o.grading;
        o.action = -o.action;
    }
    for (const auto& [key, s] : spec.entries)
        op.entries.emplace(std::make_pair(key.second, key.first), s);
    op.reindex();
    return op;
}

Chain chain_to_opposite(const ComplexSpec& spec, const Chain& c) {
    Chain r;
    r.degree = -c.degree;
    r.coeffs.reserve(c.coeffs.size());
    for (const auto& s : c.coeffs) r.coeffs.push_back(s.conj());
    return r;
}

bool filtered_member(const ComplexSpec& spec, const Chain& c, const ExactValue& alpha,
                     bool strict) {
    Level l = ell(spec, c);
    if (l.is_neg_inf()) return true;
    return strict ? l.value() < alpha : !(alpha < l.value());
}

Chain reduce_mod_filtration(const ComplexSpec& spec, const Chain& c, const ExactValue& alpha) {
    const auto& idx = spec.degree_orbits(c.degree);
    if (c.coeffs.size() != idx.size()) throw ContractViolation("chain dimension mismatch");
    Chain r = c;
    for (size_t i = 0; i < idx.size(); ++i) {
        const ExactValue& t = spec.orbits[idx[i]].action;
        NovikovScalar& s = r.coeffs[i];
        // Keep only the part of the coefficient with t - omega > alpha.
        NovikovScalar kept(spec.cfg);
        for (const auto& term : s.terms()) {
            if (!(term.w < t - alpha)) break;
            kept.push_term(term.g, term.c);
        }
        if (!s.exact()) {
            if (*s.cutoff() < t - alpha)
                throw PrecisionExhausted("reduce_mod_filtration: cutoff " + s.cutoff()->str() +
                                         " below required depth " + (t - alpha).str());
        }
        s = kept;
    }
    return r;
}

RebaseResult rebase(const ComplexSpec& spec, int k, const ExactValue& alpha,
                    const ExactValue& eps) {
    if (eps.sign() <= 0) throw ContractViolation("rebase: eps must be positive");
    RebaseResult out;
    out.spec = spec;
    const auto& idx = spec.degree_orbits(k);
    out.reps.reserve(idx.size());
    Fq one = Fq::one(spec.cfg->field());
    for (int gi : idx) {
        const ExactValue& t = spec.orbits[gi].action;
        // Want action(g * p) = t - omega(g) in [alpha, alpha + eps):
        // omega(g) in (t - alpha - eps, t - alpha].
        Gamma0Elem g = spec.cfg->element_with_omega_in(t - alpha - eps, t - alpha);
        out.reps.push_back(g);
        out.spec.orbits[gi].action = t - spec.cfg->omega_of(g);
        // d(g p) = g d(p): outgoing entries scale by g; incoming by g^{-1}
        // since q = g^{-1} (g q) for coefficients written against g p.
        for (auto& [key, s] : out.spec.entries) {
            if (key.first == gi) s = s.shifted(g, one);
            else if (key.second == gi) s = s.shifted(-g, one);
        }
    }
    out.spec.reindex();
    return out;
}

Chain rebase_chain(const ComplexSpec& rebased, const RebaseResult& rb, const Chain& c) {
    const auto& idx = rebased.degree_orbits(c.degree);
    if (c.coeffs.size() != rb.reps.size() || idx.size() != rb.reps.size())
        throw ContractViolation("rebase_chain: chain is not in the rebased degree");
    Chain r = c;
    Fq one = Fq::one(rebased.cfg->field());
    for (size_t i = 0; i < r.coeffs.size(); ++i)
        r.coeffs[i] = r.coeffs[i].shifted(-rb.reps[i], one);
    return r;
}

} // namespace fnd
