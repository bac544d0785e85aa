#include "hyperphase/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "hyperphase/analysis.hpp"
#include "hyperphase/barriers.hpp"
#include "hyperphase/elementary.hpp"
#include "hyperphase/gamma.hpp"
#include "hyperphase/pdesolver.hpp"

namespace hyperphase {

namespace {

// lower <= upper is checked up to rounding of values near the common limit
constexpr double kOrderTolerance = 1e-15;

class VerifyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string hex(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot open '" + path + "' for writing");
    return os;
}

std::string or_default(const std::string& s, const char* d) { return s.empty() ? d : s; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SolveOptions solve_options(const RunConfig& cfg) {
    SolveOptions o;
    o.tol = cfg.tol;
    o.deterministic = cfg.deterministic;
    return o;
}

void require_data(const RunConfig& cfg) {
    if (cfg.data.omega_plus.empty() && cfg.data.omega_minus.empty())
        throw ConfigError("missing required key 'plus' or 'minus'");
}

double gap_percent(double F, double target) { return target > 0.0 ? 100.0 * std::abs(F - target) / target : NAN; }

int cmd_profile(const RunConfig& cfg, std::ostream& log) {
    const Potential pot = Potential::from_name(cfg.well);
    const double eps = cfg.eps.front();
    const ProfileSolution p = solve_profile(cfg.n, eps, pot);
    const std::string path = or_default(cfg.out, "profile.csv");
    auto os = open_out(path);
    write_profile_csv(os, cfg, p);
    const auto& v = p.values();
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] < v[i - 1]) throw VerifyError("profile values not monotone");
    for (double x : v)
        if (!(x >= 0.0 && x <= 1.0)) throw VerifyError("profile values leave [0, 1]");
    log << "profile n=" << p.n() << " eps=" << eps << " nodes=" << v.size() << " energy=" << p.energy()
        << " F=" << std::sqrt(2.0) * eps * p.energy() << " residual=" << p.residual() << " -> " << path << "\n";
    return kExitOk;
}

int cmd_elementary(const RunConfig& cfg, std::ostream& log) {
    const Potential pot = Potential::from_name(cfg.well);
    const double eps = cfg.eps.front(), R = cfg.R.front();
    auto prof = std::make_shared<const ProfileSolution>(solve_profile(2, eps, pot));
    const ElementarySolution sol(CapPair{cfg.cap}, prof);
    const auto grid = Grid::make(R, cfg.grid_h > 0.0 ? cfg.grid_h : 2.0 * R / cfg.grid);
    const Field u = Field::sample(grid, [&](DiskPoint p) { return sol(p); });
    const std::string path = or_default(cfg.out, "elementary.csv");
    auto os = open_out(path);
    write_field_csv(os, cfg, {"u"}, {&u});
    log << "elementary eps=" << eps << " R=" << R << " h=" << grid->h() << " nodes=" << grid->size()
        << " defect=" << elementary_residual(sol, grid) << " -> " << path << "\n";
    return kExitOk;
}

int cmd_barriers(const RunConfig& cfg, std::ostream& log) {
    require_data(cfg);
    const Potential pot = Potential::from_name(cfg.well);
    const double eps = cfg.eps.front(), R = cfg.R.front();
    auto prof = std::make_shared<const ProfileSolution>(solve_profile(2, eps, pot));
    BarrierPair bp(build_families(cfg.data), prof);
    const auto grid = Grid::make(R, cfg.grid_h > 0.0 ? cfg.grid_h : 2.0 * R / cfg.grid);
    bp.attach(grid);
    Field lo(grid), hi(grid);
    lo.values = bp.lower_values();
    hi.values = bp.upper_values();
    const std::string path = or_default(cfg.out, "barriers.csv");
    auto os = open_out(path);
    write_field_csv(os, cfg, {"lower", "upper"}, {&lo, &hi});
    double worst = 0.0;
    for (std::size_t k = 0; k < grid->size(); ++k) {
        const DiskPoint p = grid->position(k);
        if (!(lower_margin(bp, p) > 0.0 && upper_margin(bp, p) > 0.0)) throw VerifyError("barrier leaves (-1, 1)");
        worst = std::max(worst, lo.values[k] - hi.values[k]);
    }
    log << "barriers eps=" << eps << " R=" << R << " nodes=" << grid->size() << " max(lower-upper)=" << worst
        << " -> " << path << "\n";
    if (worst > kOrderTolerance) throw VerifyError("lower barrier exceeds upper barrier by " + format_double(worst));
    return kExitOk;
}

void write_solve_row(std::ostream& os, double eps, double R, const SolveResult& s, const Potential& pot) {
    const EnergyReport er = rescaled_energy(s.u, eps, pot, R);
    os << format_double(eps) << "," << format_double(R) << "," << format_double(s.u.grid->h()) << ","
       << s.u.grid->size() << "," << format_double(er.E) << "," << format_double(er.F) << ","
       << format_double(er.length) << "," << format_double(er.target) << ","
       << format_double(gap_percent(er.F, er.target)) << "," << format_double(s.residual) << ","
       << format_double(s.sandwich.max_violation) << "," << format_double(s.slack) << "\n";
}

int cmd_solve(const RunConfig& cfg, std::ostream& log) {
    require_data(cfg);
    if (cfg.eps.size() != 1) throw ConfigError("solve takes a single eps; use gamma for a ladder");
    const Potential pot = Potential::from_name(cfg.well);
    const double eps = cfg.eps.front();
    const double R_last = cfg.R.back();
    const double h = resolved_spacing(cfg, eps, R_last);
    require_layer_bound(h, eps, R_last);
    const SolveOptions opts = solve_options(cfg);
    std::vector<SolveResult> solves;
    std::vector<std::string> warnings;
    if (cfg.R.size() == 1) {
        solves.push_back(solve_data(cfg.data, eps, pot, R_last, h, opts));
    } else {
        ExhaustionReport ex = exhaustion_solve(cfg.data, eps, pot, cfg.R, h, opts);
        solves = std::move(ex.solves);
        warnings = ex.warnings;
    }
    const std::string out = or_default(cfg.out, "u.csv"), report = or_default(cfg.report, "report.csv");
    {
        auto os = open_out(out);
        write_field_csv(os, cfg, {"u"}, {&solves.back().u});
    }
    auto rs = open_out(report);
    rs << csv_header_line(cfg) << "\n";
    rs << "eps,R,h,nodes,energy,F,length,target,gap_percent,residual,sandwich_violation,slack\n";
    for (std::size_t i = 0; i < solves.size(); ++i) write_solve_row(rs, eps, cfg.R[i], solves[i], pot);
    const SolveResult& s = solves.back();
    log << "solve eps=" << eps << " R=" << R_last << " h=" << h << " nodes=" << s.u.grid->size()
        << " residual=" << s.residual << " sandwich=" << s.sandwich.max_violation << " -> " << out << ", " << report
        << "\n";
    for (const auto& w : warnings) log << "warning: " << w << "\n";
    if (!s.sandwich.passed) throw VerifyError("sandwich violated by " + format_double(s.sandwich.max_violation));
    return kExitOk;
}

int cmd_gamma(const RunConfig& cfg, std::ostream& log) {
    require_data(cfg);
    if (cfg.grid_h > 0.0) throw ConfigError("gamma uses grid-h = auto on every rung");
    const Potential pot = Potential::from_name(cfg.well);
    const double R = cfg.R.front();
    const SweepReport sw = gamma_sweep(cfg.data, cfg.eps, R, pot, solve_options(cfg));
    const std::string path = or_default(cfg.out, "sweep.csv");
    auto os = open_out(path);
    os << csv_header_line(cfg) << "\n";
    os << "eps,h,nodes,energy,F,length,target,gap_percent,l1_prev\n";
    for (std::size_t k = 0; k < sw.reports.size(); ++k) {
        const EnergyReport& r = sw.reports[k];
        const Grid& g = *sw.fields[k].grid;
        os << format_double(r.eps) << "," << format_double(g.h()) << "," << g.size() << "," << format_double(r.E)
           << "," << format_double(r.F) << "," << format_double(r.length) << "," << format_double(r.target) << ","
           << format_double(gap_percent(r.F, r.target)) << "," << format_double(sw.l1_prev[k]) << "\n";
        log << "gamma eps=" << r.eps << " F=" << r.F << " target=" << r.target
            << " gap%=" << gap_percent(r.F, r.target) << "\n";
    }
    for (const auto& w : sw.warnings) log << "warning: " << w << "\n";
    log << "-> " << path << "\n";
    const EnergyReport& last = sw.reports.back();
    if (!(gap_percent(last.F, last.target) <= 5.0))
        throw VerifyError("gap " + format_double(gap_percent(last.F, last.target)) + "% exceeds 5%");
    return kExitOk;
}

int cmd_check(const RunConfig& cfg, std::ostream& log) {
    const Potential pot = Potential::from_name(cfg.well);
    int failures = 0;
    auto report = [&](const std::string& name, bool ok, double value) {
        log << (ok ? "PASS " : "FAIL ") << name << " (" << value << ")\n";
        if (!ok) ++failures;
    };

    const ProfileSolution p1 = solve_profile(1, 0.1, pot);
    double tanh_err = 0.0;
    for (std::size_t i = 0; i < p1.nodes().size(); ++i)
        tanh_err = std::max(tanh_err, std::abs(p1.values()[i] - std::tanh(p1.nodes()[i] / (std::sqrt(2.0) * 0.1))));
    report("euclidean profile vs tanh", tanh_err <= 1e-3, tanh_err);

    const ProfileSolution p2 = solve_profile(2, 0.05, pot);
    const double F = std::sqrt(2.0) * 0.05 * p2.energy();
    report("weighted profile cost", std::abs(F - 2.0 * cw_constant(pot)) <= 0.03 * 2.0 * cw_constant(pot), F);

    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> ang(-kPi, kPi), wid(0.05, kPi - 0.05);
    double cap_err = 0.0;
    for (int t = 0; t < 50; ++t) {
        const IdealArc arc(ang(rng), wid(rng));
        const Geodesic geo = geodesic_of_cap(CapPair{arc});
        for (DiskPoint z : random_disk_points(20, 0.95, rng))
            cap_err = std::max(cap_err, std::abs(cap_distance(z, arc.center, arc.halfwidth) - signed_distance(z, geo)));
    }
    report("cap distance closed form vs Mobius route", cap_err <= 1e-9, cap_err);

    bool rt = false;
    try {
        rt = parse_config(print_config(cfg)) == cfg;
    } catch (const std::exception&) {
        rt = cfg.data.omega_plus.empty() && cfg.data.omega_minus.empty();
    }
    report("config round trip", rt, rt ? 1.0 : 0.0);

    if (!cfg.data.omega_plus.empty() || !cfg.data.omega_minus.empty()) {
        auto prof = std::make_shared<const ProfileSolution>(solve_profile(2, cfg.eps.front(), pot));
        const BarrierPair bp(build_families(cfg.data), prof);
        double worst = -2.0;
        bool inside = true;
        for (DiskPoint z : random_disk_points(1000, 0.99, rng)) {
            inside = inside && lower_margin(bp, z) > 0.0 && upper_margin(bp, z) > 0.0;
            worst = std::max(worst, lower_barrier(bp, z) - upper_barrier(bp, z));
        }
        report("barriers ordered inside (-1, 1)", inside && worst <= kOrderTolerance, worst);
    }
    return failures ? kExitVerify : kExitOk;
}

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace

std::string csv_header_line(const RunConfig& cfg) {
    return std::string("# hyperphase ") + kVersion + " config=" + hex(config_hash(cfg)) + " command=" +
           (cfg.command.empty() ? "none" : cfg.command);
}

void write_field_csv(std::ostream& os, const RunConfig& cfg, const std::vector<std::string>& names,
                     const std::vector<const Field*>& fields) {
    if (fields.empty() || names.size() != fields.size()) throw std::invalid_argument("write_field_csv: bad columns");
    const Grid& g = *fields.front()->grid;
    os << csv_header_line(cfg) << "\n" << "i,j,x,y";
    for (const auto& n : names) os << "," << n;
    os << "\n";
    std::string line;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const DiskPoint p = g.position(k);
        line = std::to_string(g.col(k)) + "," + std::to_string(g.row(k)) + "," + format_double(p.real()) + "," +
               format_double(p.imag());
        for (const Field* f : fields) line += "," + format_double(f->values[k]);
        line += "\n";
        os << line;
    }
}

void write_profile_csv(std::ostream& os, const RunConfig& cfg, const ProfileSolution& p) {
    os << csv_header_line(cfg) << "\n" << "tau,h,dh\n";
    for (std::size_t i = 0; i < p.nodes().size(); ++i) {
        const double t = p.nodes()[i];
        os << format_double(t) << "," << format_double(p.values()[i]) << "," << format_double(p.derivative(t))
           << "\n";
    }
}

int run(const RunConfig& cfg, std::ostream& log) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
        int code = kExitParse;
        if (cfg.command == "profile") code = cmd_profile(cfg, log);
        else if (cfg.command == "elementary") code = cmd_elementary(cfg, log);
        else if (cfg.command == "barriers") code = cmd_barriers(cfg, log);
        else if (cfg.command == "solve") code = cmd_solve(cfg, log);
        else if (cfg.command == "gamma") code = cmd_gamma(cfg, log);
        else if (cfg.command == "check") code = cmd_check(cfg, log);
        else log << "error: unknown command '" << cfg.command << "'\n";
        log << "elapsed " << seconds_since(t0) << " s\n";
        return code;
    } catch (const VerifyError& e) {
        log << "verification failed: " << e.what() << "\n";
        return kExitVerify;
    } catch (const SolverError& e) {
        log << "error: " << e.what() << "\n";
        return std::string(e.what()).rfind("comparison failure", 0) == 0 ? kExitVerify : kExitSolver;
    } catch (const ProfileError& e) {
        log << "error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::invalid_argument& e) {
        log << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const ConfigError& e) {
        log << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const GeometryError& e) {
        log << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return kExitSolver;
    }
}

int parse_thread_count(const char* value) {
    if (value == nullptr || *value == '\0') return 1;
    char* end = nullptr;
    const long n = std::strtol(value, &end, 10);
    if (*end != '\0' || n < 1 || n > 4096)
        throw ConfigError(std::string("HYPERPHASE_THREADS must be a positive integer, got '") + value + "'");
    return static_cast<int>(n);
}

int cli_main(int argc, char** argv) {
    CLI::App app{"Allen-Cahn phase transitions in the hyperbolic disk"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    struct Flags {
        std::string data, eps, R, grid_h, well, cap, out, report, deterministic;
        int grid = 0, n = 0;
        double tol = 0.0;
    } fl;

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"profile", "solve the radial profile ODE and write tau,h,dh"},
        {"elementary", "sample the elementary solution for one cap"},
        {"barriers", "sample the lower and upper barriers"},
        {"solve", "minimize the discrete energy on B_R"},
        {"gamma", "solve along an eps ladder and compare with the limit perimeter"},
        {"check", "run the invariant suite"}};
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--data", fl.data, "config file with plus/minus arcs and any other keys");
        sub->add_option("--eps", fl.eps, "eps or comma-separated decreasing ladder");
        sub->add_option("--R", fl.R, "radius or comma-separated radii");
        sub->add_option("--grid-h", fl.grid_h, "grid spacing or 'auto'");
        sub->add_option("--grid", fl.grid, "points per side for sampled outputs");
        sub->add_option("--n", fl.n, "dimension of the profile equation");
        sub->add_option("--well", fl.well, "double-well potential");
        sub->add_option("--cap", fl.cap, "cap as center,halfwidth");
        sub->add_option("--out", fl.out, "output CSV");
        sub->add_option("--report", fl.report, "report CSV");
        sub->add_option("--tol", fl.tol, "solver tolerance");
        sub->add_option("--deterministic", fl.deterministic, "true or false");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitParse;
    }

    const CLI::App* sub = app.get_subcommands().front();
    std::ostringstream over;
    over << "command = " << sub->get_name() << "\n";
    if (!fl.eps.empty()) over << "eps = " << fl.eps << "\n";
    if (!fl.R.empty()) over << "R = " << fl.R << "\n";
    if (!fl.grid_h.empty()) over << "grid-h = " << fl.grid_h << "\n";
    if (fl.grid) over << "grid = " << fl.grid << "\n";
    if (fl.n) over << "n = " << fl.n << "\n";
    if (!fl.well.empty()) over << "well = " << fl.well << "\n";
    if (!fl.cap.empty()) over << "cap = " << fl.cap << "\n";
    if (!fl.out.empty()) over << "out = " << fl.out << "\n";
    if (!fl.report.empty()) over << "report = " << fl.report << "\n";
    if (fl.tol > 0.0) over << "tol = " << format_double(fl.tol) << "\n";
    if (!fl.deterministic.empty()) over << "deterministic = " << fl.deterministic << "\n";

    RunConfig cfg;
    try {
        const int threads = parse_thread_count(std::getenv("HYPERPHASE_THREADS"));
        if (threads > 1) std::cout << "HYPERPHASE_THREADS=" << threads << " ignored: running serially\n";
        if (!fl.data.empty()) {
            std::string text = read_file(fl.data);
            // keys given on the command line win over the file
            std::istringstream lines(over.str());
            std::string l, kept, filtered;
            std::vector<std::string> keys;
            while (std::getline(lines, l)) keys.push_back(l.substr(0, l.find(' ')));
            std::istringstream file(text);
            while (std::getline(file, l)) {
                const auto eq = l.find('=');
                const auto hash = l.find('#');
                std::string key = eq == std::string::npos || (hash != std::string::npos && hash < eq)
                                      ? ""
                                      : l.substr(0, eq);
                key.erase(0, key.find_first_not_of(" \t"));
                key.erase(key.find_last_not_of(" \t") + 1);
                if (std::find(keys.begin(), keys.end(), key) == keys.end()) filtered += l + "\n";
            }
            cfg = parse_config(filtered + over.str());
        } else {
            cfg = merge_config(RunConfig{}, over.str());
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    }
    return run(cfg, std::cout);
}

}  // namespace hyperphase
