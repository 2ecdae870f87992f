// fnd: command-line driver for the filtered Floer-Novikov complex library.
//
// Exit codes: 0 success, 1 verification failure, 2 input error,
// 3 precision exhausted (rerun with an enlarged window directive).

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fnd/duality.hpp"
#include "fnd/errors.hpp"
#include "fnd/io.hpp"
#include "fnd/verify.hpp"

using namespace fnd;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;
constexpr int kExitPrecision = 3;

mpq_class parse_rat_arg(const std::string& tok) {
    mpq_class q;
    if (mpq_set_str(q.get_mpq_t(), tok.c_str(), 10) != 0 || q.get_den() == 0)
        throw Error("malformed rational '" + tok + "'");
    q.canonicalize();
    return q;
}

// Values on the command line are written `a` or `a,b`, meaning a + b*sqrt2.
ExactValue parse_value_arg(const std::string& tok) {
    auto comma = tok.find(',');
    if (comma == std::string::npos) return ExactValue::rational(parse_rat_arg(tok));
    return ExactValue(parse_rat_arg(tok.substr(0, comma)),
                      parse_rat_arg(tok.substr(comma + 1)));
}

FieldSpec parse_field_arg(const std::string& tok) {
    if (tok == "q" || tok == "Q") return FieldSpec{};
    if (tok == "gf2" || tok == "GF2") return FieldSpec{2};
    if (tok.rfind("gf", 0) == 0) {
        long p = std::stol(tok.substr(2));
        if (p >= 2) return FieldSpec{static_cast<unsigned long>(p)};
    }
    throw Error("unknown field '" + tok + "' (expected q or gf2)");
}

std::string field_str(FieldSpec f) {
    return f.is_rational() ? "q" : "gf" + std::to_string(f.p);
}

// Wrap a computation so that a precision failure reports the doubled window
// the caller should retry with (via a `window` directive in the input file).
template <typename F>
auto with_window_hint(const ComplexSpec& spec, F&& f) {
    try {
        return f();
    } catch (const PrecisionExhausted& e) {
        throw PrecisionExhausted(std::string(e.what()) + " (suggested retry: window directive " +
                                 spec.window().scaled(2).str() + ")");
    }
}

// ---------------------------------------------------------------- validate

int cmd_validate(const std::string& path) {
    ComplexSpec spec = parse_fnc_file(path, false);
    ValidationReport rep = validate(spec);
    if (rep.ok()) {
        std::cout << "ok: " << spec.orbits.size() << " generators, " << spec.entries.size()
                  << " boundary entries\n";
        return kExitPass;
    }
    std::cout << rep.str();
    return kExitFail;
}

// -------------------------------------------------------------- invariants

void print_summary_text(std::ostream& os, const InvariantSummary& s,
                        const std::optional<int>& degree) {
    for (const auto& [d, b, dd] : s.finite_bars)
        if (!degree || d == *degree)
            os << "finite bar: degree " << d << " birth " << b.str() << " death " << dd.str()
               << '\n';
    for (const auto& [d, l] : s.infinite_bars)
        if (!degree || d == *degree)
            os << "infinite bar: degree " << d << " level " << l.str() << '\n';
    for (const auto& [k, v] : s.beta)
        if (!degree || k == *degree) os << "beta[" << k << "] = " << v.str() << '\n';
    for (const auto& [k, v] : s.rho) {
        if (degree && k != *degree) continue;
        os << "rho[" << k << "]:";
        for (const auto& l : v) os << ' ' << l.str();
        os << '\n';
    }
}

// CSV schema (fixed order): header `record,degree,value1,value2`, then all
// finite_bar rows (value1 = birth, value2 = death), then infinite_bar rows
// (value1 = level), then beta rows (value1 = beta_k), then rho rows (one per
// spectral number, value1 = rho), each group in the summary's sorted order.
void print_summary_csv(std::ostream& os, const InvariantSummary& s,
                       const std::optional<int>& degree) {
    os << "record,degree,value1,value2\n";
    for (const auto& [d, b, dd] : s.finite_bars)
        if (!degree || d == *degree)
            os << "finite_bar," << d << ',' << b.str() << ',' << dd.str() << '\n';
    for (const auto& [d, l] : s.infinite_bars)
        if (!degree || d == *degree) os << "infinite_bar," << d << ',' << l.str() << ",\n";
    for (const auto& [k, v] : s.beta)
        if (!degree || k == *degree) os << "beta," << k << ',' << v.str() << ",\n";
    for (const auto& [k, v] : s.rho) {
        if (degree && k != *degree) continue;
        for (const auto& l : v) os << "rho," << k << ',' << l.str() << ",\n";
    }
}

int cmd_invariants(const std::string& path, const std::optional<int>& degree, bool csv) {
    ComplexSpec spec = parse_fnc_file(path);
    InvariantSummary s =
        with_window_hint(spec, [&] { return summarize_invariants(spec); });
    if (csv)
        print_summary_csv(std::cout, s, degree);
    else
        print_summary_text(std::cout, s, degree);
    return kExitPass;
}

// ---------------------------------------------------------------- opposite

int cmd_opposite(const std::string& in, const std::string& out) {
    write_fnc_file(out, opposite(parse_fnc_file(in)));
    std::cout << "wrote " << out << '\n';
    return kExitPass;
}

// ----------------------------------------------------------------- barcode

int cmd_barcode(const std::string& path) {
    ComplexSpec spec = parse_fnc_file(path);
    Barcode bc = with_window_hint(spec, [&] { return barcode_reduce(spec); });
    for (const auto& b : bc.infinite)
        std::cout << "infinite bar: degree " << b.degree << " level " << b.level.str() << '\n';
    for (const auto& b : bc.finite)
        std::cout << "finite bar: degree " << b.degree << " birth " << b.birth.str() << " death "
                  << b.death.str() << '\n';
    if (bc.infinite.empty() && bc.finite.empty()) std::cout << "no bars\n";
    return kExitPass;
}

// ----------------------------------------------------------------- witness

int cmd_witness(const std::string& path, const std::string& side, const std::string& alpha_str,
                const std::string& chain_path) {
    ComplexSpec spec = parse_fnc_file(path);
    ExactValue alpha = parse_value_arg(alpha_str);
    bool right = side == "right";
    // Right witnesses take the chain in the complex itself; left witnesses
    // take a chain of the opposite complex.
    ComplexSpec op = opposite(spec);
    Chain c = parse_chain_file(chain_path, right ? spec : op);
    WitnessReport w = with_window_hint(spec, [&] {
        return right ? dual_witness_right(spec, alpha, c) : dual_witness_left(spec, alpha, c);
    });
    std::cout << "side: " << side << "\nalpha: " << alpha.str() << "\ndegree: " << w.degree
              << '\n';
    std::cout << "dual (opposite complex): ";
    write_chain(std::cout, op, w.dual);
    std::cout << "rep: ";
    write_chain(std::cout, spec, w.rep);
    std::cout << "ell^op(dual) = " << w.dual_level.str() << '\n';
    std::cout << "ell(rep) = " << w.rep_level.str() << '\n';
    std::cout << "pairing = " << w.pairing.str() << '\n';
    for (const auto& line : w.checks) std::cout << line << '\n';
    std::cout << "result: " << (w.ok ? "PASS" : "FAIL") << '\n';
    return w.ok ? kExitPass : kExitFail;
}

// ------------------------------------------------------------------ verify

int cmd_verify(const std::string& path, bool all, bool spectral, bool bdepth, bool nondeg,
               int grid) {
    ComplexSpec spec = parse_fnc_file(path);
    if (!(all || spectral || bdepth || nondeg)) all = true;
    bool any_fail = false;
    auto run = [&](const std::string& name, const std::function<CheckResult()>& f) {
        CheckResult r = with_window_hint(spec, f);
        std::cout << name << ": " << (r.ok ? "pass" : "FAIL") << '\n';
        for (const auto& m : r.failures) std::cout << "  " << m << '\n';
        any_fail = any_fail || !r.ok;
    };
    if (all) {
        run("axioms", [&] { return check_axioms(spec); });
        run("opposite involution", [&] { return check_opposite_involution(spec); });
    }
    if (all || spectral)
        run("spectral duality", [&] { return check_spectral_duality(spec, grid); });
    if (all || bdepth) {
        run("boundary depth triple", [&] { return check_boundary_depth_triple(spec); });
        run("boundary depth lower bound", [&] { return check_remark_bound(spec); });
    }
    if (all || nondeg) {
        run("nondegeneracy (right witnesses)", [&] { return check_right_witnesses(spec, grid); });
        run("nondegeneracy (left witnesses)", [&] { return check_left_witnesses(spec, grid); });
    }
    if (all) run("window doubling", [&] { return check_window_doubling(spec); });
    return any_fail ? kExitFail : kExitPass;
}

// -------------------------------------------------------------------- fuzz

struct FuzzParams {
    std::uint64_t seed = 0;
    bool dense = true;
    FieldSpec field;
    int max_orbits = 20;
    int max_per_degree = 6;
    int moves = 50;
    int grid = 16;
};

void write_bundle(const std::filesystem::path& dir, const FuzzParams& p, const FuzzCase& fc,
                  const CheckResult& res) {
    std::filesystem::create_directories(dir);
    write_fnc_file((dir / "normal.fnc").string(), fc.normal.spec);
    write_fnc_file((dir / "scrambled.fnc").string(), fc.scrambled);
    {
        std::ofstream out(dir / "plan.txt");
        out << "# failure bundle; replay with: fnd fuzz --replay " << dir.string() << '\n';
        out << "seed " << p.seed << '\n';
        out << "profile " << (p.dense ? "dense" : "discrete") << '\n';
        out << "field " << field_str(p.field) << '\n';
        out << "max_orbits " << p.max_orbits << '\n';
        out << "max_per_degree " << p.max_per_degree << '\n';
        out << "moves " << p.moves << '\n';
        out << "grid " << p.grid << '\n';
        out << "# normal-form plan\n";
        for (const auto& ib : fc.plan.infinite)
            out << "# infinite degree " << ib.degree << " level " << ib.level.str() << '\n';
        for (const auto& fb : fc.plan.finite)
            out << "# finite degree " << fb.degree << " birth " << fb.birth.str() << " death "
                << fb.death.str() << '\n';
        out << "# scramble moves\n";
        for (const auto& mv : fc.scramble.moves) {
            out << "# move degree " << mv.degree << " target " << mv.target << " source "
                << mv.source << " coeff " << mv.c.str() << " exps";
            for (long e : mv.g.exps) out << ' ' << e;
            out << '\n';
        }
    }
    {
        std::ofstream out(dir / "report.txt");
        for (const auto& m : res.failures) out << m << '\n';
    }
}

int run_one_case(const FuzzParams& p, const std::filesystem::path* fail_dir) {
    auto t0 = std::chrono::steady_clock::now();
    FuzzCase fc = make_fuzz_case(p.seed, p.dense, p.field, p.moves, p.max_orbits,
                                 p.max_per_degree);
    CheckResult res = verify_case(fc, p.grid);
    auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream line;
    line << "seed " << p.seed << ' ' << (p.dense ? "dense" : "discrete") << ' '
         << field_str(p.field) << " [" << fc.normal.spec.orbits.size() << " orbits]: "
         << (res.ok ? "ok" : "FAIL") << " (" << std::fixed << dt << "s)";
    std::cout << line.str() << '\n';
    if (!res.ok) {
        for (const auto& m : res.failures) std::cout << "  " << m << '\n';
        if (fail_dir) {
            std::filesystem::path dir = *fail_dir / ("case-" + std::to_string(p.seed));
            write_bundle(dir, p, fc, res);
            std::cout << "  bundle written to " << dir.string() << '\n';
        }
    }
    return res.ok ? kExitPass : kExitFail;
}

int cmd_fuzz(std::uint64_t seed, int count, const std::string& profile,
             const std::string& field, int max_orbits, int moves, int grid,
             const std::string& fail_dir_str) {
    FuzzParams p;
    p.dense = profile == "dense";
    if (!p.dense && profile != "discrete")
        throw Error("unknown profile '" + profile + "' (expected dense or discrete)");
    p.field = parse_field_arg(field);
    p.max_orbits = max_orbits;
    p.moves = moves;
    p.grid = grid;
    std::filesystem::path fail_dir(fail_dir_str);
    auto t0 = std::chrono::steady_clock::now();
    int failures = 0;
    for (int i = 0; i < count; ++i) {
        p.seed = seed + static_cast<std::uint64_t>(i);
        if (run_one_case(p, &fail_dir) != kExitPass) ++failures;
    }
    auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (count - failures) << '/' << count << " passed in " << std::fixed << dt
              << "s\n";
    return failures == 0 ? kExitPass : kExitFail;
}

int cmd_replay(const std::string& bundle_dir) {
    std::ifstream in(std::filesystem::path(bundle_dir) / "plan.txt");
    if (!in) throw Error("cannot open " + bundle_dir + "/plan.txt");
    FuzzParams p;
    std::string line;
    int ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        std::istringstream is(line);
        std::string key;
        if (!(is >> key) || key[0] == '#') continue;
        std::string val;
        if (!(is >> val)) throw ParseError(ln, "missing value for '" + key + "'");
        if (key == "seed") p.seed = std::stoull(val);
        else if (key == "profile") p.dense = val == "dense";
        else if (key == "field") p.field = parse_field_arg(val);
        else if (key == "max_orbits") p.max_orbits = std::stoi(val);
        else if (key == "max_per_degree") p.max_per_degree = std::stoi(val);
        else if (key == "moves") p.moves = std::stoi(val);
        else if (key == "grid") p.grid = std::stoi(val);
        else throw ParseError(ln, "unknown bundle key '" + key + "'");
    }
    return run_one_case(p, nullptr);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fnd: exact invariants and duality certificates for graded filtered "
                 "Floer-Novikov complexes"};
    app.require_subcommand(1);

    std::string file, out, side, alpha, chain_file, profile = "dense", field = "q";
    std::string fail_dir = "fnd-failures", replay_dir;
    std::optional<int> degree;
    bool csv = false, all = false, spectral = false, bdepth = false, nondeg = false;
    std::uint64_t seed = 1;
    int count = 1, max_orbits = 20, moves = 50, grid = 16;

    auto* validate_cmd = app.add_subcommand("validate", "Check the complex axioms of a .fnc file");
    validate_cmd->add_option("file", file, ".fnc input")->required();

    auto* inv_cmd = app.add_subcommand(
        "invariants",
        "Print spectral numbers, boundary depths and the barcode.  CSV columns (fixed): "
        "record,degree,value1,value2 with record in finite_bar (birth,death), infinite_bar "
        "(level), beta, rho");
    inv_cmd->add_option("file", file, ".fnc input")->required();
    inv_cmd->add_option("--degree", degree, "restrict the report to one degree");
    inv_cmd->add_flag("--csv", csv, "CSV output");

    auto* opp_cmd = app.add_subcommand("opposite", "Write the opposite complex");
    opp_cmd->add_option("file", file, ".fnc input")->required();
    opp_cmd->add_option("-o,--output", out, ".fnc output")->required();

    auto* bar_cmd = app.add_subcommand("barcode", "Print the barcode");
    bar_cmd->add_option("file", file, ".fnc input")->required();

    auto* wit_cmd = app.add_subcommand(
        "witness", "Run a nondegeneracy witness and print its certificates");
    wit_cmd->add_option("file", file, ".fnc input")->required();
    wit_cmd->add_option("--side", side, "right or left")
        ->required()
        ->check(CLI::IsMember({"right", "left"}));
    wit_cmd->add_option("--alpha", alpha, "filtration parameter, 'a' or 'a,b' for a + b*sqrt2")
        ->required();
    wit_cmd->add_option("--chain", chain_file,
                        "chain file (right: in the complex; left: in the opposite complex)")
        ->required();

    auto* ver_cmd = app.add_subcommand("verify", "Run theorem/corollary verification checks");
    ver_cmd->add_option("file", file, ".fnc input")->required();
    ver_cmd->add_flag("--all", all, "all checks (default)");
    ver_cmd->add_flag("--spectral-duality", spectral, "two-sided spectral duality");
    ver_cmd->add_flag("--boundary-depth", bdepth, "boundary depth triple equality and bound");
    ver_cmd->add_flag("--nondeg", nondeg, "nondegeneracy witnesses, both sides");
    ver_cmd->add_option("--grid", grid, "alpha grid points per class (default 16)");

    auto* fuzz_cmd = app.add_subcommand(
        "fuzz", "Generate seeded instances with ground truth, scramble, verify everything");
    fuzz_cmd->add_option("--seed", seed, "base seed (instance i uses seed + i)");
    fuzz_cmd->add_option("--count", count, "number of instances");
    fuzz_cmd->add_option("--profile", profile, "dense or discrete");
    fuzz_cmd->add_option("--field", field, "q or gf2");
    fuzz_cmd->add_option("--max-orbits", max_orbits, "orbit cap per instance (default 20)");
    fuzz_cmd->add_option("--moves", moves, "scramble moves per instance (default 50)");
    fuzz_cmd->add_option("--grid", grid, "alpha grid points per class (default 16)");
    fuzz_cmd->add_option("--fail-dir", fail_dir, "directory for failure bundles");
    fuzz_cmd->add_option("--replay", replay_dir, "replay a persisted failure bundle");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    try {
        if (app.got_subcommand(validate_cmd)) return cmd_validate(file);
        if (app.got_subcommand(inv_cmd)) return cmd_invariants(file, degree, csv);
        if (app.got_subcommand(opp_cmd)) return cmd_opposite(file, out);
        if (app.got_subcommand(bar_cmd)) return cmd_barcode(file);
        if (app.got_subcommand(wit_cmd)) return cmd_witness(file, side, alpha, chain_file);
        if (app.got_subcommand(ver_cmd))
            return cmd_verify(file, all, spectral, bdepth, nondeg, grid);
        if (app.got_subcommand(fuzz_cmd)) {
            if (!replay_dir.empty()) return cmd_replay(replay_dir);
            return cmd_fuzz(seed, count, profile, field, max_orbits, moves, grid, fail_dir);
        }
    } catch (const PrecisionExhausted& e) {
        std::cerr << "precision exhausted: " << e.what() << '\n';
        return kExitPrecision;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitInput;
}
