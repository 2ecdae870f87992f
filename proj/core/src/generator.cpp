#include "fnd/generator.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "fnd/errors.hpp"

namespace fnd {

ConfigPtr profile_config(bool dense, FieldSpec field) {
    if (dense) {
        std::vector<BasisReal> basis{BasisReal{1, false}, BasisReal{1, true}};
        std::vector<ExactValue> rows{ExactValue::rational(mpq_class(1, 4)),
                                     ExactValue::sqrt2(mpq_class(1, 4))};
        return ValuationConfig::make(std::move(basis), 2, std::move(rows), field);
    }
    std::vector<BasisReal> basis{BasisReal{1, false}};
    std::vector<ExactValue> rows{ExactValue::rational(mpq_class(1, 2))};
    return ValuationConfig::make(std::move(basis), 1, std::move(rows), field);
}

std::vector<ExactValue> action_grid(bool dense) {
    auto frac = [](int n, int d) {
        mpq_class q(n, d);
        q.canonicalize();
        return q;
    };
    std::vector<ExactValue> grid;
    if (dense) {
        for (int a = 0; a < 8; ++a)
            for (int b = 0; b < 4; ++b) grid.push_back(ExactValue(frac(a, 4), frac(b, 4)));
    } else {
        for (int a = 0; a < 32; ++a) grid.push_back(ExactValue::rational(frac(a, 2)));
    }
    return grid;
}

GeneratedInstance gen_normal_form(const NormalFormPlan& plan) {
    GeneratedInstance out;
    ComplexSpec& spec = out.spec;
    spec.cfg = profile_config(plan.dense, plan.field);
    int counter = 0;
    auto add_orbit = [&](int deg, const ExactValue& t) {
        spec.orbits.push_back({"p" + std::to_string(counter++), deg, t});
        return static_cast<int>(spec.orbits.size()) - 1;
    };
    for (const auto& ib : plan.infinite) {
        add_orbit(ib.degree, ib.level);
        out.oracle.barcode.infinite.push_back({ib.degree, ib.level});
        out.oracle.rho[ib.degree].push_back(ib.level);
    }
    for (const auto& fb : plan.finite) {
        if (!(fb.death < fb.birth))
            throw ContractViolation("gen_normal_form: finite bar needs death < birth");
        int u = add_orbit(fb.degree, fb.birth);
        int v = add_orbit(fb.degree - 1, fb.death);
        spec.entries[{u, v}] = NovikovScalar::one(spec.cfg);
        out.oracle.barcode.finite.push_back({fb.degree, fb.birth, fb.death});
        ExactValue len = fb.birth - fb.death;
        auto& beta = out.oracle.beta[fb.degree - 1];
        if (beta < len) beta = len;
    }
    spec.reindex();
    for (int k : spec.degrees_present()) out.oracle.beta.try_emplace(k);
    for (auto& [k, levels] : out.oracle.rho)
        std::sort(levels.begin(), levels.end(), [](const ExactValue& x, const ExactValue& y) { return y < x; });
    return out;
}

ComplexSpec gen_scramble(const ComplexSpec& spec, const ScramblePlan& plan) {
    ComplexSpec out = spec;
    for (size_t m = 0; m < plan.moves.size(); ++m) {
        const auto& mv = plan.moves[m];
        auto bad = [&](const std::string& why) {
            throw ContractViolation("gen_scramble: move " + std::to_string(m) + ": " + why);
        };
        const auto& idx = out.degree_orbits(mv.degree);
        int n = static_cast<int>(idx.size());
        if (mv.target < 0 || mv.target >= n || mv.source < 0 || mv.source >= n)
            bad("generator index out of range");
        if (mv.target == mv.source) bad("target equals source");
        if (mv.c.is_zero()) bad("zero coefficient");
        int gi = idx[mv.target];
        int gj = idx[mv.source];
        ExactValue w = out.cfg->omega_of(mv.g);
        if (!(out.orbits[gj].action - out.orbits[gi].action < w))
            bad("coefficient is not strictly level-decreasing");
        NovikovScalar mu = NovikovScalar::monomial(out.cfg, mv.g, mv.c);

        auto accumulate = [&](std::pair<int, int> key, const NovikovScalar& add) {
            auto cur = out.entries.find(key);
            if (cur == out.entries.end()) {
                out.entries.emplace(key, add);
                return;
            }
            NovikovScalar s = cur->second + add;
            if (s.exact() && s.trivially_empty())
                out.entries.erase(cur);
            else
                cur->second = std::move(s);
        };
        // p_i -> p_i + mu p_j adds mu times column j to column i of the
        // outgoing boundary...
        for (int t : out.degree_orbits(mv.degree - 1)) {
            auto it = out.entries.find({gj, t});
            if (it != out.entries.end()) accumulate({gi, t}, mu * it->second);
        }
        // ...and subtracts mu times row i from row j of the incoming one.
        for (int u : out.degree_orbits(mv.degree + 1)) {
            auto it = out.entries.find({u, gi});
            if (it != out.entries.end()) accumulate({u, gj}, -(mu * it->second));
        }
    }
    return out;
}

Chain scramble_chain(const ComplexSpec& spec, const ScramblePlan& plan, const Chain& c) {
    Chain out = c;
    for (const auto& mv : plan.moves) {
        if (mv.degree != c.degree) continue;
        NovikovScalar mu = NovikovScalar::monomial(spec.cfg, mv.g, mv.c);
        out.coeffs[mv.source] = out.coeffs[mv.source] - mu * out.coeffs[mv.target];
    }
    return out;
}

namespace {

Fq random_unit(std::mt19937_64& rng, FieldSpec field) {
    if (field.is_rational()) {
        static const int pool[] = {1, -1, 2, -2, 3};
        return Fq(pool[rng() % 5], field);
    }
    return Fq(mpq_class(static_cast<unsigned long>(1 + rng() % (field.p - 1))), field);
}

} // namespace

NormalFormPlan random_plan(std::uint64_t seed, bool dense, FieldSpec field,
                           int max_orbits, int max_per_degree) {
    NormalFormPlan plan;
    plan.seed = seed;
    plan.dense = dense;
    plan.field = field;
    std::mt19937_64 rng(seed);
    std::vector<ExactValue> grid = action_grid(dense);
    auto pick = [&]() { return grid[rng() % grid.size()]; };

    int lo = static_cast<int>(rng() % 3) - 1;          // lowest degree in -1..1
    int span = 2 + static_cast<int>(rng() % 3);        // 2..4 consecutive degrees
    int total = 0;
    std::map<int, int> per_degree;
    auto can_place = [&](int deg, int count) {
        return total + count <= max_orbits && per_degree[deg] + count <= max_per_degree;
    };

    for (int d = lo; d < lo + span; ++d) {
        int want = static_cast<int>(rng() % 3); // 0..2 infinite bars
        for (int i = 0; i < want && can_place(d, 1); ++i) {
            plan.infinite.push_back({d, pick()});
            ++per_degree[d];
            ++total;
        }
        if (d == lo) continue;
        want = static_cast<int>(rng() % 3); // 0..2 finite bars into degree d-1
        for (int i = 0; i < want; ++i) {
            if (!(total + 2 <= max_orbits && per_degree[d] < max_per_degree &&
                  per_degree[d - 1] < max_per_degree))
                break;
            ExactValue x = pick(), y = pick();
            while (x == y) y = pick();
            plan.finite.push_back({d, std::max(x, y), std::min(x, y)});
            ++per_degree[d];
            ++per_degree[d - 1];
            total += 2;
        }
    }
    if (total == 0) plan.infinite.push_back({lo, pick()});
    return plan;
}

ScramblePlan random_scramble(const ComplexSpec& spec, std::uint64_t seed, int moves) {
    ScramblePlan plan;
    plan.seed = seed;
    std::mt19937_64 rng(seed);
    std::vector<int> degrees;
    for (int d : spec.degrees_present())
        if (spec.degree_dim(d) >= 2) degrees.push_back(d);
    if (degrees.empty()) return plan;
    for (int m = 0; m < moves; ++m) {
        int d = degrees[rng() % degrees.size()];
        const auto& idx = spec.degree_orbits(d);
        int n = static_cast<int>(idx.size());
        int i = static_cast<int>(rng() % n);
        int j = static_cast<int>(rng() % (n - 1));
        if (j >= i) ++j;
        ExactValue gap = spec.orbits[idx[j]].action - spec.orbits[idx[i]].action;
        Gamma0Elem g = spec.cfg->element_with_omega_in(gap, gap + ExactValue::rational(1));
        plan.moves.push_back({d, i, j, std::move(g), random_unit(rng, spec.cfg->field())});
    }
    return plan;
}

} // namespace fnd
