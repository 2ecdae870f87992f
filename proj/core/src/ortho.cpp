#include "fnd/ortho.hpp"

#include <algorithm>

#include "fnd/errors.hpp"

namespace fnd {

WeightedSpace chain_space(const ComplexSpec& spec, int degree) {
    WeightedSpace s;
    s.cfg = spec.cfg;
    for (int gi : spec.degree_orbits(degree)) s.weights.push_back(spec.orbits[gi].action);
    // Anchor the negligibility threshold to absolute filtration levels: a
    // vector is treated as zero when its level drops more than one window
    // below the lowest generator level.  With nu_bar_t measured relative to
    // the weights this makes cap = window - min action (and keeps cap =
    // window for nonnegative actions).  The headroom absorbs the cutoff
    // degradation from reduction coefficients of negative valuation; it must
    // scale with the window so that enlarging the window is always a valid
    // remedy for precision exhaustion.
    ExactValue lo; // min(0, .) over all orbit actions
    for (const auto& o : spec.orbits)
        if (o.action < lo) lo = o.action;
    s.cap = spec.window() - lo;
    s.headroom = s.cap;
    return s;
}

VecL vec_zero(const WeightedSpace& s) {
    return VecL(s.weights.size(), NovikovScalar::zero(s.cfg));
}

VecL vec_basis(const WeightedSpace& s, int i) {
    VecL v = vec_zero(s);
    v[i] = NovikovScalar::one(s.cfg);
    return v;
}

Valn nu_bar_t(const WeightedSpace& s, const VecL& v) {
    if (static_cast<int>(v.size()) != s.dim()) throw ContractViolation("vector dimension mismatch");
    std::optional<ExactValue> best;
    for (int i = 0; i < s.dim(); ++i) {
        if (v[i].trivially_empty()) continue;
        ExactValue val = v[i].nu().value() - s.weights[i];
        if (!best || val < *best) best = val;
    }
    for (int i = 0; i < s.dim(); ++i) {
        if (!v[i].trivially_empty() || v[i].exact()) continue;
        ExactValue bound = *v[i].cutoff() - s.weights[i];
        if (!best) {
            throw PrecisionExhausted("nu_bar_t: vector empty below cutoffs; value >= " +
                                     bound.str() + " unknown");
        }
        if (!(*best < bound))
            throw PrecisionExhausted("nu_bar_t: truncated entry could undercut " + best->str());
    }
    return best ? Valn(*best) : Valn::pos_inf();
}

bool negligible(const WeightedSpace& s, const VecL& v) {
    if (static_cast<int>(v.size()) != s.dim()) throw ContractViolation("vector dimension mismatch");
    for (int i = 0; i < s.dim(); ++i)
        if (!v[i].trivially_empty() && v[i].nu().value() - s.weights[i] < s.cap) return false;
    for (int i = 0; i < s.dim(); ++i) {
        if (v[i].exact()) continue;
        if (*v[i].cutoff() - s.weights[i] < s.cap)
            throw PrecisionExhausted("negligibility test: entry " + std::to_string(i) +
                                     " truncated above depth " +
                                     (*v[i].cutoff() - s.weights[i]).str());
    }
    return true;
}

namespace {

void combo_pad(std::vector<NovikovScalar>& v, size_t n, const ConfigPtr& cfg) {
    while (v.size() < n) v.push_back(NovikovScalar::zero(cfg));
}

// a -= mu * b, padding as needed.
void combo_sub(std::vector<NovikovScalar>& a, const std::vector<NovikovScalar>& b,
               const NovikovScalar& mu, const ConfigPtr& cfg) {
    combo_pad(a, b.size(), cfg);
    for (size_t i = 0; i < b.size(); ++i) a[i] = a[i] - mu * b[i];
}

} // namespace

WeightedReducer::WeightedReducer(WeightedSpace space, bool track_combos, bool back_reduce)
    : space_(std::move(space)), track_(track_combos), back_(back_reduce) {}

NovikovScalar WeightedReducer::clip(NovikovScalar s, int i) const {
    ExactValue cut = space_.entry_cutoff(i);
    if (s.exact() && (s.trivially_empty() || s.terms().back().w < cut)) return s;
    return s.truncated(cut);
}

int WeightedReducer::pick_pivot(const VecL& v) const {
    int best = -1;
    ExactValue bv;
    for (int i = 0; i < space_.dim(); ++i) {
        if (v[i].trivially_empty()) continue;
        ExactValue val = v[i].nu().value() - space_.weights[i];
        // Entries at or beyond the decision depth are negligible junk; they
        // must not become pivots, nor block on cutoffs that sit at the same
        // depth scale.
        if (!(val < space_.cap)) continue;
        if (best == -1 || val < bv) {
            best = i;
            bv = val;
        }
    }
    for (int i = 0; i < space_.dim(); ++i) {
        if (!v[i].trivially_empty() || v[i].exact()) continue;
        ExactValue bound = *v[i].cutoff() - space_.weights[i];
        if (best == -1) {
            if (bound < space_.cap)
                throw PrecisionExhausted("pivot selection: entry " + std::to_string(i) +
                                         " truncated above depth " + bound.str());
        } else if (!(bv < bound)) {
            throw PrecisionExhausted("pivot selection: entry " + std::to_string(i) +
                                     " truncated at depth " + bound.str() +
                                     " could undercut pivot depth " + bv.str());
        }
    }
    return best;
}

const NovikovScalar& WeightedReducer::pivot_inverse(int j, const ExactValue& window) const {
    auto& [inv, win] = inv_cache_[j];
    if (inv.config() == nullptr || (!inv.exact() && win < window)) {
        inv = basis_[j][pivots_[j]].inverse(window);
        win = window;
    }
    return inv;
}

NovikovScalar WeightedReducer::cancel_at(VecL& v, int j) const {
    int p = pivots_[j];
    if (v[p].trivially_empty()) return NovikovScalar::zero(space_.cfg);
    // The inverse must be accurate deep enough that the pivot entry of the
    // result is empty below its cutoff.
    ExactValue win = space_.entry_cutoff(p) - v[p].nu().value();
    NovikovScalar mu = v[p] * pivot_inverse(j, win);
    for (int i = 0; i < space_.dim(); ++i) v[i] = clip(v[i] - mu * basis_[j][i], i);
    return mu;
}

WeightedReducer::Outcome WeightedReducer::insert(const VecL& v_in) {
    if (static_cast<int>(v_in.size()) != space_.dim())
        throw ContractViolation("insert: vector dimension mismatch");
    VecL v(v_in);
    for (int i = 0; i < space_.dim(); ++i) v[i] = clip(std::move(v[i]), i);
    std::vector<NovikovScalar> combo;
    if (track_) {
        combo.assign(inserted_ + 1, NovikovScalar::zero(space_.cfg));
        combo[inserted_] = NovikovScalar::one(space_.cfg);
    }
    Outcome out;
    out.coeffs.assign(basis_.size(), NovikovScalar::zero(space_.cfg));
    while (true) {
        int p = pick_pivot(v);
        if (p == -1) {
            // Residual negligible below the cutoffs; callers reconstruct
            // membership witnesses from coeffs and the basis combos.
            ++inserted_;
            return out;
        }
        int j = -1;
        for (size_t m = 0; m < pivots_.size(); ++m)
            if (pivots_[m] == p) j = static_cast<int>(m);
        if (j == -1) {
            // Before adopting, clear stored mass at every existing pivot
            // regardless of depth.  Junk-deep mass there is still real, and
            // the monomial normalization below shifts all depths uniformly,
            // so mass that is negligible now can become significant once the
            // vector is rescaled; the echelon invariant (empty at other
            // pivots) must hold for the stored terms themselves.
            bool cleared_any = false;
            for (size_t m = 0; m < pivots_.size(); ++m) {
                if (v[pivots_[m]].trivially_empty()) continue;
                NovikovScalar mu = cancel_at(v, static_cast<int>(m));
                out.coeffs[m] = out.coeffs[m] + mu;
                if (track_ && !mu.trivially_empty()) combo_sub(combo, combos_[m], mu, space_.cfg);
                cleared_any = true;
            }
            if (cleared_any) continue; // re-pick: the leading entry may have moved
            // Fresh pivot: normalize so the pivot entry leads with 1 at the
            // identity, then adopt as a basis vector.
            const auto& lead = v[p].leading();
            NovikovScalar factor =
                NovikovScalar::monomial(space_.cfg, -lead.g, lead.c.inverse());
            for (int i = 0; i < space_.dim(); ++i) v[i] = clip(v[i] * factor, i);
            if (track_) {
                for (auto& c : combo) c = c * factor;
                combos_.push_back(std::move(combo));
            }
            basis_.push_back(std::move(v));
            pivots_.push_back(p);
            inv_cache_.emplace_back(NovikovScalar(), ExactValue());
            out.index = static_cast<int>(basis_.size()) - 1;
            ++inserted_;
            if (back_) {
                int jn = out.index;
                for (size_t m = 0; m + 1 < basis_.size(); ++m) {
                    NovikovScalar mu = cancel_at(basis_[m], jn);
                    if (track_ && !mu.trivially_empty())
                        combo_sub(combos_[m], combos_[jn], mu, space_.cfg);
                }
            }
            return out;
        }
        NovikovScalar mu = cancel_at(v, j);
        out.coeffs[j] = out.coeffs[j] + mu;
        if (track_) combo_sub(combo, combos_[j], mu, space_.cfg);
    }
}

WeightedReducer::Reduction WeightedReducer::reduce(VecL v) const {
    if (static_cast<int>(v.size()) != space_.dim())
        throw ContractViolation("reduce: vector dimension mismatch");
    for (int i = 0; i < space_.dim(); ++i) v[i] = clip(std::move(v[i]), i);
    Reduction r;
    r.coeffs.assign(basis_.size(), NovikovScalar::zero(space_.cfg));
    while (true) {
        int p = pick_pivot(v);
        if (p == -1) {
            r.negligible = true;
            break;
        }
        int j = -1;
        for (size_t m = 0; m < pivots_.size(); ++m)
            if (pivots_[m] == p) j = static_cast<int>(m);
        if (j == -1) break;
        r.coeffs[j] = r.coeffs[j] + cancel_at(v, j);
    }
    // Finish clearing remaining basis pivots so the residual is empty at all
    // of them (needed for optimality; the loop above stops at a fresh pivot).
    for (size_t j = 0; j < basis_.size(); ++j)
        r.coeffs[j] = r.coeffs[j] + cancel_at(v, static_cast<int>(j));
    r.residual = std::move(v);
    return r;
}

const std::vector<NovikovScalar>& WeightedReducer::combo(int j) const {
    if (!track_) throw ContractViolation("combo tracking disabled");
    return combos_[j];
}

namespace {

// Row-reduce an m x n matrix over K, returning pivot columns and, for rows
// that vanish, a dependency over the original rows.
struct ResidueElim {
    std::vector<int> pivot_cols;
    std::optional<std::vector<Fq>> dependency;
};

ResidueElim eliminate_residues(std::vector<std::vector<Fq>> rows, FieldSpec field) {
    ResidueElim out;
    size_t m = rows.size();
    size_t n = m ? rows[0].size() : 0;
    // Extended columns track the combination of original rows.
    std::vector<std::vector<Fq>> trace(m, std::vector<Fq>(m, Fq::zero(field)));
    for (size_t i = 0; i < m; ++i) trace[i][i] = Fq::one(field);
    size_t rank = 0;
    for (size_t col = 0; col < n && rank < m; ++col) {
        size_t sel = m;
        for (size_t r = rank; r < m; ++r)
            if (!rows[r][col].is_zero()) {
                sel = r;
                break;
            }
        if (sel == m) continue;
        std::swap(rows[rank], rows[sel]);
        std::swap(trace[rank], trace[sel]);
        Fq inv = rows[rank][col].inverse();
        for (size_t c = 0; c < n; ++c) rows[rank][c] = rows[rank][c] * inv;
        for (size_t c = 0; c < m; ++c) trace[rank][c] = trace[rank][c] * inv;
        for (size_t r = 0; r < m; ++r) {
            if (r == rank || rows[r][col].is_zero()) continue;
            Fq f = rows[r][col];
            for (size_t c = 0; c < n; ++c) rows[r][c] = rows[r][c] - f * rows[rank][c];
            for (size_t c = 0; c < m; ++c) trace[r][c] = trace[r][c] - f * trace[rank][c];
        }
        out.pivot_cols.push_back(static_cast<int>(col));
        ++rank;
    }
    if (rank < m) out.dependency = trace[rank];
    return out;
}

// Residue row of u at weighted valuation 0: entry j is the coefficient at
// omega-value t_j.
std::vector<Fq> residue_row(const WeightedSpace& s, const VecL& u) {
    std::vector<Fq> row(s.dim(), Fq::zero(s.cfg->field()));
    for (int j = 0; j < s.dim(); ++j) {
        const ExactValue& tj = s.weights[j];
        if (!u[j].exact() && !(tj < *u[j].cutoff()))
            throw PrecisionExhausted("residue read beyond cutoff");
        for (const auto& t : u[j].terms()) {
            if (t.w == tj) row[j] = t.c;
            if (!(t.w < tj) ) break;
        }
    }
    return row;
}

} // namespace

OrthoCheck is_orthonormal(const std::vector<VecL>& vectors, const WeightedSpace& s) {
    OrthoCheck chk;
    std::vector<std::vector<Fq>> rows;
    for (size_t i = 0; i < vectors.size(); ++i) {
        Valn nb = nu_bar_t(s, vectors[i]);
        if (nb.is_pos_inf()) {
            chk.reason = "vector " + std::to_string(i) + " is zero";
            return chk;
        }
        if (!(nb == Valn(ExactValue()))) {
            chk.reason = "vector " + std::to_string(i) + " has weighted valuation " +
                         nb.str() + ", not 0";
            return chk;
        }
        rows.push_back(residue_row(s, vectors[i]));
    }
    ResidueElim elim = eliminate_residues(rows, s.cfg->field());
    if (elim.dependency) {
        chk.reason = "leading residues are K-linearly dependent";
        chk.counterexample = elim.dependency;
        return chk;
    }
    chk.ok = true;
    return chk;
}

std::vector<VecL> orthonormalize(const std::vector<VecL>& vectors, const WeightedSpace& s) {
    WeightedReducer red(s, false, true);
    for (const VecL& v : vectors) red.insert(v);
    std::vector<VecL> out;
    for (int j = 0; j < red.size(); ++j) {
        ExactValue tp = s.weights[red.pivot(j)];
        auto g = s.cfg->element_with_omega_exact(tp);
        if (!g)
            throw ContractViolation("weight " + tp.str() +
                                    " is not an omega-value; rebase before orthonormalizing");
        NovikovScalar mono = NovikovScalar::monomial(s.cfg, *g, Fq::one(s.cfg->field()));
        VecL u = red.basis(j);
        for (auto& e : u) e = e * mono;
        out.push_back(std::move(u));
    }
    return out;
}

std::vector<VecL> extend_orthonormal(const std::vector<VecL>& basis, const WeightedSpace& s) {
    OrthoCheck chk = is_orthonormal(basis, s);
    if (!chk.ok) throw ContractViolation("extend_orthonormal: input not orthonormal: " + chk.reason);
    std::vector<std::vector<Fq>> rows;
    for (const VecL& u : basis) rows.push_back(residue_row(s, u));
    ResidueElim elim = eliminate_residues(rows, s.cfg->field());
    std::vector<bool> covered(s.dim(), false);
    for (int c : elim.pivot_cols) covered[c] = true;
    std::vector<VecL> out = basis;
    for (int j = 0; j < s.dim(); ++j) {
        if (covered[j]) continue;
        auto g = s.cfg->element_with_omega_exact(s.weights[j]);
        if (!g)
            throw ContractViolation("weight " + s.weights[j].str() +
                                    " is not an omega-value; cannot extend orthonormally");
        VecL e = vec_zero(s);
        e[j] = NovikovScalar::monomial(s.cfg, *g, Fq::one(s.cfg->field()));
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<VecL> projector_onto_complement(const std::vector<VecL>& U, const WeightedSpace& s) {
    WeightedReducer red(s, false, true);
    for (const VecL& u : U) red.insert(u);
    std::vector<VecL> cols;
    for (int j = 0; j < s.dim(); ++j) cols.push_back(red.reduce(vec_basis(s, j)).residual);
    return cols;
}

VecL projector_apply(const std::vector<VecL>& columns, const VecL& v) {
    if (columns.size() != v.size()) throw ContractViolation("projector dimension mismatch");
    if (columns.empty()) return {};
    VecL out(columns[0].size(), NovikovScalar::zero(v.empty() ? ConfigPtr() : v[0].config()));
    for (size_t j = 0; j < v.size(); ++j)
        for (size_t i = 0; i < out.size(); ++i) out[i] = out[i] + columns[j][i] * v[j];
    return out;
}

SolveResult solve_in_subspace(const VecL& v, const std::vector<VecL>& U, const WeightedSpace& s) {
    WeightedReducer red(s, true, true);
    for (const VecL& u : U) red.insert(u);
    WeightedReducer::Reduction r = red.reduce(v);
    SolveResult out;
    out.residual = r.residual;
    if (!r.negligible) {
        // Leftover mass at a fresh pivot certifies non-membership.
        return out;
    }
    out.member = true;
    out.coeffs.assign(U.size(), NovikovScalar::zero(s.cfg));
    for (int j = 0; j < red.size(); ++j) {
        const auto& cj = red.combo(j);
        for (size_t m = 0; m < cj.size(); ++m)
            out.coeffs[m] = out.coeffs[m] + r.coeffs[j] * cj[m];
    }
    return out;
}

ImageBasis image_basis(const ComplexSpec& spec, int k) {
    WeightedSpace s = chain_space(spec, k);
    WeightedReducer red(s, true, true);
    auto cols = spec.boundary_matrix(k + 1);
    for (const auto& col : cols) red.insert(col);
    ImageBasis ib;
    int n_src = spec.degree_dim(k + 1);
    for (int j = 0; j < red.size(); ++j) {
        ib.vectors.push_back(red.basis(j));
        std::vector<NovikovScalar> prim = red.combo(j);
        combo_pad(prim, n_src, spec.cfg);
        ib.primitives.push_back(std::move(prim));
    }
    return ib;
}

std::vector<VecL> kernel_basis(const ComplexSpec& spec, int k) {
    WeightedSpace target = chain_space(spec, k - 1);
    WeightedReducer red(target, true, true);
    auto cols = spec.boundary_matrix(k);
    std::vector<VecL> kernel;
    int n = spec.degree_dim(k);
    for (int m = 0; m < n; ++m) {
        // Snapshot combos before the insert mutates them.
        std::vector<std::vector<NovikovScalar>> snap;
        for (int j = 0; j < red.size(); ++j) snap.push_back(red.combo(j));
        WeightedReducer::Outcome o = red.insert(cols[m]);
        if (o.index != -1) continue;
        std::vector<NovikovScalar> z(n, NovikovScalar::zero(spec.cfg));
        z[m] = NovikovScalar::one(spec.cfg);
        for (size_t j = 0; j < snap.size(); ++j) {
            for (size_t q = 0; q < snap[j].size(); ++q)
                z[q] = z[q] - o.coeffs[j] * snap[j][q];
        }
        kernel.push_back(std::move(z));
    }
    return kernel;
}

OptimalProjector::OptimalProjector(const ComplexSpec& spec, int degree)
    : spec_(&spec), degree_(degree), red_(chain_space(spec, degree), true, true) {
    for (const auto& col : spec.boundary_matrix(degree + 1)) red_.insert(col);
}

OptimalRep OptimalProjector::project(const Chain& c0) const {
    if (c0.degree != degree_)
        throw ContractViolation("OptimalProjector: chain degree does not match");
    WeightedReducer::Reduction r = red_.reduce(c0.coeffs);
    OptimalRep out;
    out.c.degree = degree_;
    out.c.coeffs = r.residual;
    out.b0 = zero_chain(*spec_, degree_ + 1);
    for (int j = 0; j < red_.size(); ++j) {
        const auto& cj = red_.combo(j);
        for (size_t m = 0; m < cj.size(); ++m)
            out.b0.coeffs[m] = out.b0.coeffs[m] + r.coeffs[j] * cj[m];
    }
    return out;
}

Level OptimalProjector::spectral(const Chain& c) const {
    Chain dc = boundary_apply(*spec_, c);
    if (!negligible(chain_space(*spec_, degree_ - 1), dc.coeffs))
        throw ContractViolation("spectral number: input is not a cycle");
    OptimalRep opt = project(c);
    if (negligible(red_.space(), opt.c.coeffs))
        return Level::neg_inf(); // boundary: 0 is a representative
    return ell(*spec_, opt.c);
}

OptimalRep project_optimal(const ComplexSpec& spec, const Chain& c0) {
    return OptimalProjector(spec, c0.degree).project(c0);
}

std::vector<Barcode::FiniteBar> Barcode::finite_in_degree(int k) const {
    std::vector<FiniteBar> out;
    for (const auto& b : finite)
        if (b.degree == k) out.push_back(b);
    return out;
}

std::vector<Barcode::InfiniteBar> Barcode::infinite_in_degree(int k) const {
    std::vector<InfiniteBar> out;
    for (const auto& b : infinite)
        if (b.degree == k) out.push_back(b);
    return out;
}

Barcode barcode_reduce(const ComplexSpec& spec) {
    Barcode bc;
    auto clip_to = [](const WeightedSpace& s, VecL& v) {
        for (int i = 0; i < s.dim(); ++i) {
            ExactValue cut = s.entry_cutoff(i);
            if (!(v[i].exact() && (v[i].trivially_empty() || v[i].terms().back().w < cut)))
                v[i] = v[i].truncated(cut);
        }
    };
    // Leading slot and weighted depth of v, skipping junk at depth >= cap.
    auto lead_of = [](const WeightedSpace& s,
                      const VecL& v) -> std::optional<std::pair<int, ExactValue>> {
        int best = -1;
        ExactValue bv;
        for (int i = 0; i < s.dim(); ++i) {
            if (v[i].trivially_empty()) continue;
            ExactValue val = v[i].nu().value() - s.weights[i];
            if (!(val < s.cap)) continue;
            if (best == -1 || val < bv) {
                best = i;
                bv = val;
            }
        }
        for (int i = 0; i < s.dim(); ++i) {
            if (!v[i].trivially_empty() || v[i].exact()) continue;
            ExactValue bound = *v[i].cutoff() - s.weights[i];
            if (best == -1) {
                if (bound < s.cap)
                    throw PrecisionExhausted("diagonalization: entry truncated above depth " +
                                             bound.str());
            } else if (!(bv < bound)) {
                throw PrecisionExhausted("diagonalization: truncated entry could undercut depth " +
                                         bv.str());
            }
        }
        if (best == -1) return std::nullopt;
        return std::make_pair(best, bv);
    };
    for (int k : spec.degrees_present()) {
        WeightedSpace sk = chain_space(spec, k);
        WeightedSpace target = chain_space(spec, k - 1);
        int n = spec.degree_dim(k);
        // Finite bars with primitives in degree k, by filtered diagonalization
        // of the boundary map.  Each round pivots on the column attaining the
        // maximal level shift ell(y) - ell(x); at that choice every
        // elimination coefficient mu satisfies nu(mu) >= ell(y_pivot) -
        // ell(y_other), which makes the column operations level-non-increasing
        // on the domain side as well, so the finished pairs stay orthogonal on
        // both sides and read off the bar endpoints exactly.  (An arbitrary
        // pivot order can mispair: a scrambled column's deepest entry need not
        // belong to its bar.)
        struct Col {
            VecL x, y;
            bool alive = true;
        };
        std::vector<Col> work(n);
        auto cols = spec.boundary_matrix(k);
        for (int m = 0; m < n; ++m) {
            work[m].x = vec_basis(sk, m);
            work[m].y = std::move(cols[m]);
            clip_to(target, work[m].y);
        }
        struct Fin {
            VecL x;
            ExactValue offset, death;
        };
        std::vector<Fin> fins;
        while (true) {
            int best = -1, bp = -1;
            ExactValue bs;
            for (int m = 0; m < n; ++m) {
                if (!work[m].alive) continue;
                auto py = lead_of(target, work[m].y);
                if (!py) continue; // kernel candidate; settled after the loop
                auto px = lead_of(sk, work[m].x);
                if (!px)
                    throw PrecisionExhausted(
                        "diagonalization: primitive level lost below cutoffs");
                ExactValue shift = px->second - py->second; // ell(y) - ell(x)
                if (best == -1 || bs < shift) {
                    best = m;
                    bs = shift;
                    bp = py->first;
                }
            }
            if (best == -1) break;
            Col& c = work[best];
            // Normalize so the pivot entry leads with 1 at the identity; the
            // monomial shifts both levels by the same offset, recorded so the
            // endpoints can be restored.
            const auto& lead = c.y[bp].leading();
            ExactValue offset = lead.w;
            NovikovScalar factor = NovikovScalar::monomial(spec.cfg, -lead.g, lead.c.inverse());
            for (auto& e : c.y) e = e * factor;
            for (auto& e : c.x) e = e * factor;
            clip_to(target, c.y);
            clip_to(sk, c.x);
            NovikovScalar inv;
            ExactValue invwin;
            for (int m = 0; m < n; ++m) {
                if (m == best || !work[m].alive) continue;
                const NovikovScalar& e = work[m].y[bp];
                if (e.trivially_empty()) continue;
                if (!(e.nu().value() - target.weights[bp] < target.cap)) continue;
                ExactValue win = target.entry_cutoff(bp) - e.nu().value();
                if (inv.config() == nullptr || (!inv.exact() && invwin < win)) {
                    inv = c.y[bp].inverse(win);
                    invwin = win;
                }
                NovikovScalar mu = e * inv;
                for (int i = 0; i < target.dim(); ++i) work[m].y[i] = work[m].y[i] - mu * c.y[i];
                for (int i = 0; i < sk.dim(); ++i) work[m].x[i] = work[m].x[i] - mu * c.x[i];
                clip_to(target, work[m].y);
                clip_to(sk, work[m].x);
            }
            fins.push_back({std::move(c.x), offset, target.weights[bp] - offset});
            c.alive = false;
        }
        if (!fins.empty()) {
            WeightedReducer ker_red(sk, false, true);
            for (const auto& c : work)
                if (c.alive) ker_red.insert(c.x);
            for (const auto& f : fins) {
                auto rr = ker_red.reduce(f.x);
                Valn nb = nu_bar_t(sk, rr.residual);
                if (nb.is_pos_inf())
                    throw PrecisionExhausted("finite-bar primitive vanished modulo the kernel");
                bc.finite.push_back({k, -nb.value() - f.offset, f.death});
            }
        }
        // Infinite bars in degree k: kernel modulo the incoming image.
        WeightedReducer hom(sk, false, true);
        for (const auto& col : spec.boundary_matrix(k + 1)) hom.insert(col);
        for (const auto& c : work) {
            if (!c.alive) continue;
            WeightedReducer::Outcome o = hom.insert(c.x);
            if (o.index == -1) continue;
            bc.infinite.push_back({k, sk.weights[hom.pivot(o.index)]});
        }
    }
    auto vlt = [](const ExactValue& a, const ExactValue& b) { return a < b; };
    std::sort(bc.finite.begin(), bc.finite.end(), [&](const auto& a, const auto& b) {
        if (a.degree != b.degree) return a.degree < b.degree;
        if (!(a.birth == b.birth)) return vlt(a.birth, b.birth);
        return vlt(a.death, b.death);
    });
    std::sort(bc.infinite.begin(), bc.infinite.end(), [&](const auto& a, const auto& b) {
        if (a.degree != b.degree) return a.degree < b.degree;
        return vlt(a.level, b.level);
    });
    return bc;
}

} // namespace fnd
