#include "fnd/io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "fnd/errors.hpp"

namespace fnd {

namespace {

mpq_class parse_rat(const std::string& tok, int line) {
    mpq_class q;
    if (mpq_set_str(q.get_mpq_t(), tok.c_str(), 10) != 0)
        throw ParseError(line, "malformed rational '" + tok + "'");
    if (q.get_den() == 0) throw ParseError(line, "zero denominator in '" + tok + "'");
    q.canonicalize();
    return q;
}

long parse_long(const std::string& tok, int line) {
    try {
        size_t pos = 0;
        long v = std::stol(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError(line, "malformed integer '" + tok + "'");
    }
}

std::vector<std::string> tokens_of(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream is(line);
    std::string t;
    while (is >> t) {
        if (t[0] == '#') break;
        toks.push_back(t);
    }
    return toks;
}

struct PendingConfig {
    std::optional<FieldSpec> field;
    std::vector<BasisReal> basis;
    int rank = 0;
    std::vector<ExactValue> omega_rows;
    ConfigPtr built;

    ConfigPtr require(int line) {
        if (built) return built;
        if (!field) throw ParseError(line, "field declaration must precede this line");
        if (basis.empty()) throw ParseError(line, "value_basis must precede this line");
        if (rank == 0 || static_cast<int>(omega_rows.size()) != rank)
            throw ParseError(line, "gamma0_rank and its omega rows must precede this line");
        try {
            built = ValuationConfig::make(basis, rank, omega_rows, *field);
        } catch (const ConfigError& e) {
            throw ParseError(line, e.what());
        }
        return built;
    }
};

ExactValue value_from_coords(const PendingConfig& pc, const std::vector<std::string>& toks,
                             size_t from, int line) {
    if (toks.size() - from != pc.basis.size())
        throw ParseError(line, "expected " + std::to_string(pc.basis.size()) +
                                   " coordinates against value_basis");
    ExactValue v;
    for (size_t i = from; i < toks.size(); ++i)
        v += pc.basis[i - from].value().scaled(parse_rat(toks[i], line));
    return v;
}

// Terms look like `<coeff>@<e1> <e2> .. <er>`: the coefficient and first
// exponent share a token.
NovikovScalar parse_terms(const std::vector<std::string>& toks, size_t from, size_t to,
                          const ConfigPtr& cfg, int line) {
    NovikovScalar s = NovikovScalar::zero(cfg);
    size_t i = from;
    while (i < to) {
        auto at = toks[i].find('@');
        if (at == std::string::npos)
            throw ParseError(line, "expected <coeff>@<exponents>, got '" + toks[i] + "'");
        mpq_class c = parse_rat(toks[i].substr(0, at), line);
        Gamma0Elem g = Gamma0Elem::identity(cfg->rank());
        // The term occupies rank tokens: "c@e1" plus rank-1 bare exponents.
        if (i + static_cast<size_t>(cfg->rank()) > to)
            throw ParseError(line, "term needs " + std::to_string(cfg->rank()) + " exponents");
        g.exps[0] = parse_long(toks[i].substr(at + 1), line);
        for (int j = 1; j < cfg->rank(); ++j)
            g.exps[j] = parse_long(toks[i + j], line);
        i += cfg->rank();
        s = s + NovikovScalar::monomial(cfg, g, Fq(c, cfg->field()));
    }
    return s;
}

std::string rat_str(const mpq_class& q) { return q.get_str(); }

} // namespace

std::vector<mpq_class> coords_of(const ValuationConfig& cfg, const ExactValue& v) {
    const auto& basis = cfg.basis();
    size_t n = basis.size();
    if (n == 1) {
        ExactValue b = basis[0].value();
        mpq_class c;
        if (b.sqrt2_part() == 0) {
            if (v.sqrt2_part() != 0 || b.rat_part() == 0)
                throw ConfigError("value outside the span of value_basis");
            c = v.rat_part() / b.rat_part();
        } else if (b.rat_part() == 0) {
            if (v.rat_part() != 0) throw ConfigError("value outside the span of value_basis");
            c = v.sqrt2_part() / b.sqrt2_part();
        } else {
            c = v.rat_part() / b.rat_part();
            if (!(b.scaled(c) == v))
                throw ConfigError("value outside the span of value_basis");
        }
        return {c};
    }
    if (n == 2) {
        ExactValue b0 = basis[0].value(), b1 = basis[1].value();
        mpq_class det = b0.rat_part() * b1.sqrt2_part() - b0.sqrt2_part() * b1.rat_part();
        if (det == 0) throw ConfigError("value_basis is degenerate; cannot write coordinates");
        mpq_class c0 = (v.rat_part() * b1.sqrt2_part() - v.sqrt2_part() * b1.rat_part()) / det;
        mpq_class c1 = (b0.rat_part() * v.sqrt2_part() - b0.sqrt2_part() * v.rat_part()) / det;
        return {c0, c1};
    }
    throw ConfigError("coordinate output supports at most two basis elements");
}

ComplexSpec parse_fnc(std::istream& in, bool check_invariants) {
    ComplexSpec spec;
    PendingConfig pc;
    std::string line;
    int ln = 0;
    std::map<std::pair<int, int>, int> entry_lines; // for diagnostics
    while (std::getline(in, line)) {
        ++ln;
        std::vector<std::string> toks = tokens_of(line);
        if (toks.empty()) continue;
        const std::string& kw = toks[0];
        if (kw == "field") {
            if (toks.size() == 2 && toks[1] == "Q") pc.field = FieldSpec{};
            else if (toks.size() == 3 && toks[1] == "GF") {
                long p = parse_long(toks[2], ln);
                if (p < 2) throw ParseError(ln, "field characteristic must be at least 2");
                pc.field = FieldSpec{static_cast<unsigned long>(p)};
            } else throw ParseError(ln, "expected 'field Q' or 'field GF <p>'");
        } else if (kw == "value_basis") {
            if (toks.size() < 2) throw ParseError(ln, "expected 'value_basis <n> <descriptors>'");
            long n = parse_long(toks[1], ln);
            if (n < 1 || toks.size() != static_cast<size_t>(n) + 2)
                throw ParseError(ln, "expected " + std::to_string(n) + " basis descriptors");
            pc.basis.clear();
            for (long i = 0; i < n; ++i) {
                std::string d = toks[2 + i];
                BasisReal br;
                auto star = d.find('*');
                if (star != std::string::npos) {
                    br.scale = parse_rat(d.substr(0, star), ln);
                    d = d.substr(star + 1);
                }
                if (d == "1") br.sqrt2 = false;
                else if (d == "sqrt2") br.sqrt2 = true;
                else throw ParseError(ln, "basis descriptor must be '1' or 'sqrt2'");
                if (br.scale == 0) throw ParseError(ln, "basis scale must be nonzero");
                pc.basis.push_back(br);
            }
        } else if (kw == "gamma0_rank") {
            if (toks.size() != 2) throw ParseError(ln, "expected 'gamma0_rank <r>'");
            pc.rank = static_cast<int>(parse_long(toks[1], ln));
            if (pc.rank < 1) throw ParseError(ln, "gamma0_rank must be positive");
            pc.omega_rows.clear();
        } else if (kw == "omega") {
            if (pc.basis.empty()) throw ParseError(ln, "value_basis must precede omega rows");
            if (pc.rank == 0) throw ParseError(ln, "gamma0_rank must precede omega rows");
            if (static_cast<int>(pc.omega_rows.size()) >= pc.rank)
                throw ParseError(ln, "more omega rows than gamma0_rank");
            pc.omega_rows.push_back(value_from_coords(pc, toks, 1, ln));
        } else if (kw == "gen") {
            if (toks.size() < 5 || toks[2] != "grading" || toks[4] != "action")
                throw ParseError(ln, "expected 'gen <id> grading <k> action <coords>'");
            ConfigPtr cfg = pc.require(ln);
            spec.cfg = cfg;
            if (spec.find_orbit(toks[1]) >= 0)
                throw ParseError(ln, "duplicate generator id '" + toks[1] + "'");
            ComplexSpec::Orbit o;
            o.id = toks[1];
            o.grading = static_cast<int>(parse_long(toks[3], ln));
            o.action = value_from_coords(pc, toks, 5, ln);
            spec.orbits.push_back(o);
        } else if (kw == "bnd") {
            ConfigPtr cfg = pc.require(ln);
            if (toks.size() < 4 || toks[3] != ":")
                throw ParseError(ln, "expected 'bnd <src> <dst> : <terms>'");
            int src = spec.find_orbit(toks[1]);
            int dst = spec.find_orbit(toks[2]);
            if (src < 0) throw ParseError(ln, "unknown generator '" + toks[1] + "'");
            if (dst < 0) throw ParseError(ln, "unknown generator '" + toks[2] + "'");
            // Split term groups on ';' tokens.
            NovikovScalar s = NovikovScalar::zero(cfg);
            size_t i = 4;
            while (i < toks.size()) {
                size_t j = i;
                while (j < toks.size() && toks[j] != ";") ++j;
                s = s + parse_terms(toks, i, j, cfg, ln);
                i = j + 1;
            }
            if (spec.entries.count({src, dst}))
                throw ParseError(ln, "duplicate boundary entry " + toks[1] + " -> " + toks[2]);
            if (!s.trivially_empty()) {
                spec.entries.emplace(std::make_pair(src, dst), s);
                entry_lines[{src, dst}] = ln;
            }
        } else if (kw == "window") {
            spec.window_override = value_from_coords(pc, toks, 1, ln);
        } else {
            throw ParseError(ln, "unknown directive '" + kw + "'");
        }
    }
    if (!spec.cfg) spec.cfg = pc.require(ln == 0 ? 1 : ln);
    spec.reindex();
    if (check_invariants) {
        ValidationReport rep = validate(spec);
        if (!rep.ok()) {
            // Attribute the first violation to the nearest boundary line.
            int at = entry_lines.empty() ? ln : entry_lines.begin()->second;
            throw ParseError(at, "spec violates complex axioms: " + rep.violations[0].message);
        }
    }
    return spec;
}

ComplexSpec parse_fnc_file(const std::string& path, bool check_invariants) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    return parse_fnc(in, check_invariants);
}

namespace {
void write_coords(std::ostream& out, const ValuationConfig& cfg, const ExactValue& v) {
    for (const mpq_class& c : coords_of(cfg, v)) out << ' ' << rat_str(c);
}

void write_terms(std::ostream& out, const NovikovScalar& s) {
    bool first = true;
    for (const auto& t : s.terms()) {
        if (!first) out << " ;";
        first = false;
        out << ' ' << t.c.value().get_str() << '@';
        for (size_t j = 0; j < t.g.exps.size(); ++j) {
            if (j) out << ' ';
            out << t.g.exps[j];
        }
    }
}
} // namespace

void write_fnc(std::ostream& out, const ComplexSpec& spec) {
    const ValuationConfig& cfg = *spec.cfg;
    if (cfg.field().is_rational()) out << "field Q\n";
    else out << "field GF " << cfg.field().p << '\n';
    out << "value_basis " << cfg.basis().size();
    for (const BasisReal& b : cfg.basis()) {
        out << ' ';
        if (b.scale != 1) out << rat_str(b.scale) << '*';
        out << (b.sqrt2 ? "sqrt2" : "1");
    }
    out << '\n';
    out << "gamma0_rank " << cfg.rank() << '\n';
    for (const ExactValue& row : cfg.omega_rows()) {
        out << "omega";
        write_coords(out, cfg, row);
        out << '\n';
    }
    for (const auto& o : spec.orbits) {
        out << "gen " << o.id << " grading " << o.grading << " action";
        write_coords(out, cfg, o.action);
        out << '\n';
    }
    for (const auto& [key, s] : spec.entries) {
        if (s.trivially_empty()) continue;
        out << "bnd " << spec.orbits[key.first].id << ' ' << spec.orbits[key.second].id << " :";
        write_terms(out, s);
        out << '\n';
    }
    if (spec.window_override) {
        out << "window";
        write_coords(out, cfg, *spec.window_override);
        out << '\n';
    }
}

void write_fnc_file(const std::string& path, const ComplexSpec& spec) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    write_fnc(out, spec);
}

Chain parse_chain(std::istream& in, const ComplexSpec& spec) {
    std::string line;
    int ln = 0;
    std::optional<Chain> chain;
    while (std::getline(in, line)) {
        ++ln;
        std::vector<std::string> toks = tokens_of(line);
        if (toks.empty()) continue;
        if (toks[0] != "chain" || toks.size() < 3 || toks[2] != ":")
            throw ParseError(ln, "expected 'chain <degree> : <terms>'");
        if (chain) throw ParseError(ln, "multiple chain lines in one file");
        int degree = static_cast<int>(parse_long(toks[1], ln));
        Chain c = zero_chain(spec, degree);
        const auto& idx = spec.degree_orbits(degree);
        size_t i = 3;
        while (i < toks.size()) {
            size_t j = i;
            while (j < toks.size() && toks[j] != ";") ++j;
            // group: <coeff>@<exps..> * <gen-id>
            if (j - i < 2 || toks[j - 2] != "*")
                throw ParseError(ln, "expected '<coeff>@<exponents> * <gen-id>'");
            NovikovScalar s = parse_terms(toks, i, j - 2, spec.cfg, ln);
            int orbit = spec.find_orbit(toks[j - 1]);
            if (orbit < 0) throw ParseError(ln, "unknown generator '" + toks[j - 1] + "'");
            size_t slot = idx.size();
            for (size_t k = 0; k < idx.size(); ++k)
                if (idx[k] == orbit) slot = k;
            if (slot == idx.size())
                throw ParseError(ln, "generator '" + toks[j - 1] + "' is not in degree " +
                                         std::to_string(degree));
            c.coeffs[slot] = c.coeffs[slot] + s;
            i = j + 1;
        }
        chain = std::move(c);
    }
    if (!chain) throw ParseError(ln == 0 ? 1 : ln, "no chain line found");
    return *chain;
}

Chain parse_chain_file(const std::string& path, const ComplexSpec& spec) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    return parse_chain(in, spec);
}

void write_chain(std::ostream& out, const ComplexSpec& spec, const Chain& c) {
    out << "chain " << c.degree << " :";
    const auto& idx = spec.degree_orbits(c.degree);
    bool first = true;
    for (size_t i = 0; i < c.coeffs.size(); ++i) {
        for (const auto& t : c.coeffs[i].terms()) {
            if (!first) out << " ;";
            first = false;
            out << ' ' << t.c.value().get_str() << '@';
            for (size_t j = 0; j < t.g.exps.size(); ++j) {
                if (j) out << ' ';
                out << t.g.exps[j];
            }
            out << " * " << spec.orbits[idx[i]].id;
        }
    }
    out << '\n';
}

} // namespace fnd
