// Acceptance runs. One PASS/FAIL line per criterion; the exit status is 0
// once every run has completed, whatever the verdicts (see README).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hyperphase/analysis.hpp"
#include "hyperphase/barriers.hpp"
#include "hyperphase/cli.hpp"
#include "hyperphase/elementary.hpp"
#include "hyperphase/gamma.hpp"
#include "hyperphase/pdesolver.hpp"
#include "hyperphase/profile1d.hpp"

using namespace hyperphase;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

const Potential kQuartic = Potential::quartic();

int passed = 0;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void verdict(int id, bool ok, const std::string& detail, double secs, double limit) {
    const bool in_time = secs <= limit;
    const bool pass = ok && in_time;
    if (pass) ++passed;
    std::printf("criterion %2d: %s  %s  [%.2f s, limit %.0f s%s]\n", id, pass ? "PASS" : "FAIL", detail.c_str(), secs,
                limit, in_time ? "" : ", over time");
    std::fflush(stdout);
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[1024];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

std::shared_ptr<const ProfileSolution> profile(int n, double eps, const ProfileOptions& o = {}) {
    return std::make_shared<const ProfileSolution>(solve_profile(n, eps, kQuartic, o));
}

BoundaryData semicircles() { return {{IdealArc(kPi / 2, kPi / 2)}, {IdealArc(-kPi / 2, kPi / 2)}}; }

// plus quarter arcs meeting at 3pi/4, minus quarter arcs meeting at 7pi/4;
// plus and minus meet at pi/4 and 5pi/4
BoundaryData four_arcs() {
    return {{IdealArc(kPi / 2, kPi / 4), IdealArc(kPi, kPi / 4)},
            {IdealArc(3 * kPi / 2, kPi / 4), IdealArc(0.0, kPi / 4)}};
}

void criterion1() {
    const auto t0 = Clock::now();
    const auto p = profile(1, 0.1);
    double worst = 0.0;
    for (double tau : p->nodes()) {
        worst = std::max(worst, std::abs(p->evaluate(tau) - std::tanh(tau / (std::sqrt(2.0) * 0.1))));
        worst = std::max(worst, std::abs(p->evaluate(-tau) + std::tanh(tau / (std::sqrt(2.0) * 0.1))));
    }
    verdict(1, worst <= 1e-3, fmt("n=1 eps=0.1 max|h - tanh| = %.3e (<= 1e-3)", worst), seconds_since(t0), 1);
}

void criterion2() {
    const auto t0 = Clock::now();
    const auto p = profile(2, 0.05);
    const double cost = std::sqrt(2.0) * 0.05 * p->energy();
    const double rel = std::abs(cost / (4.0 / 3.0) - 1.0);
    verdict(2, rel <= 0.03, fmt("n=2 eps=0.05 sqrt2 eps E = %.6f vs 4/3, rel %.3e (<= 0.03)", cost, rel),
            seconds_since(t0), 1);
}

void criterion3() {
    const auto t0 = Clock::now();
    bool odd = true, mono = true, range = true;
    double seed_gap = 0.0;
    for (int n : {2, 3}) {
        for (double eps : {0.2, 0.1, 0.05}) {
            ProfileOptions a, b;
            a.seed = ProfileSeed::Tanh;
            b.seed = ProfileSeed::LinearRamp;
            const auto pa = profile(n, eps, a);
            const auto pb = profile(n, eps, b);
            const auto& tau = pa->nodes();
            for (std::size_t i = 0; i < tau.size(); ++i) {
                const double t = tau[i];
                if (pa->evaluate(-t) != -pa->evaluate(t)) odd = false;
                if (pa->one_minus(t) <= 0.0 || !(pa->evaluate(t) > -1.0)) range = false;
                if (i > 0) {
                    // equal doubles near saturation are ordered through 1 - h
                    const double h0 = pa->values()[i - 1], h1 = pa->values()[i];
                    if (h1 < h0 || (h1 == h0 && !(pa->one_minus(t) < pa->one_minus(tau[i - 1])))) mono = false;
                }
                seed_gap = std::max(seed_gap, std::abs(pa->evaluate(t) - pb->evaluate(t)));
            }
            if (pa->evaluate(0.0) != 0.0) odd = false;
        }
    }
    verdict(3, odd && mono && range && seed_gap <= 1e-8,
            fmt("odd %s, strictly increasing %s, inside (-1,1) %s, seed gap %.3e (<= 1e-8); n in {2,3}, eps in "
                "{0.2,0.1,0.05}",
                odd ? "yes" : "no", mono ? "yes" : "no", range ? "yes" : "no", seed_gap),
            seconds_since(t0), 5);
}

void criterion4() {
    const auto t0 = Clock::now();
    ProfileOptions o;
    o.node_count = 4000;
    const ElementarySolution U(CapPair{IdealArc(kPi / 2, kPi / 2)}, profile(2, 0.1, o));
    const double r1 = elementary_residual(U, Grid::make(0.5, 0.01));
    const double r2 = elementary_residual(U, Grid::make(0.5, 0.005));
    const double ratio = r1 / r2;
    verdict(4, ratio >= 3.2 && ratio <= 4.8,
            fmt("eps=0.1 R=0.5 defect %.3e -> %.3e, ratio %.3f (in [3.2, 4.8])", r1, r2, ratio), seconds_since(t0),
            10);
}

struct LadderRun {
    double eps = 0.0, h = 0.0, secs = 0.0;
    SolveResult res;
    EnergyReport energy;
};

void semicircle_ladder() {
    const double R = 0.9;
    const BoundaryData bd = semicircles();
    std::vector<LadderRun> runs;
    double ladder_secs = 0.0;
    for (double eps : {0.2, 0.1, 0.05}) {
        const auto t0 = Clock::now();
        LadderRun run;
        run.eps = eps;
        run.h = auto_spacing(eps, R);
        run.res = solve_data(bd, eps, kQuartic, R, run.h);
        run.energy = rescaled_energy(run.res.u, eps, kQuartic, R);
        run.secs = seconds_since(t0);
        ladder_secs += run.secs;
        std::printf("    semicircle eps=%.2f h=%.6f nodes=%zu F=%.6f residual=%.2e sandwich=%.3e  [%.1f s]\n", eps,
                    run.h, run.res.u.grid->size(), run.energy.F, run.res.residual, run.res.sandwich.max_violation,
                    run.secs);
        std::fflush(stdout);
        runs.push_back(std::move(run));
    }
    const LadderRun& fine = runs.back();

    {
        const auto t0 = Clock::now();
        const ElementarySolution U(CapPair{IdealArc(kPi / 2, kPi / 2)}, fine.res.barriers->profile_ptr());
        const Grid& g = *fine.res.u.grid;
        double gap = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k)
            if (std::abs(g.position(k)) < 0.72) gap = std::max(gap, std::abs(fine.res.u.values[k] - U(g.position(k))));
        const double sandwich = fine.res.sandwich.max_violation;
        const double bound = 1e-6 + 4.0 * fine.h * fine.h;
        verdict(5, gap <= 0.02 && sandwich <= bound,
                fmt("eps=0.05 R=0.9 h=%.6f gap on B_0.72 = %.3e (<= 0.02), sandwich violation %.3e (<= %.3e)",
                    fine.h, gap, sandwich, bound),
                fine.secs + seconds_since(t0), 600);
    }
    {
        const double target = (2.0 / 3.0) * 8.0 * std::atanh(R);
        const double rel = std::abs(fine.energy.F / target - 1.0);
        const bool mono = runs[0].energy.F > runs[1].energy.F && runs[1].energy.F > runs[2].energy.F;
        verdict(6, rel <= 0.05 && mono,
                fmt("F = %.5f, %.5f, %.5f for eps 0.2, 0.1, 0.05; target %.4f, rel %.3e (<= 0.05), decreasing %s",
                    runs[0].energy.F, runs[1].energy.F, runs[2].energy.F, target, rel, mono ? "yes" : "no"),
                ladder_secs, 1800);
    }
    {
        const auto t0 = Clock::now();
        const SignField limit = SignField::threshold(fine.res.u);
        const double len = hyperbolic_length(limit.jumps());
        const double ref = 4.0 * std::atanh(R);
        const double rel = std::abs(len / ref - 1.0);
        // compactly supported bump of the interface inside B_0.5
        const Field& u = fine.res.u;
        const SignField bumped = SignField::from_function(u.grid, [&](DiskPoint p) {
            const double r2 = std::norm(p);
            if (r2 >= 0.25) return u.interpolate(p);
            const double b = 1.0 - r2 / 0.25;
            return p.imag() - 0.05 * b * b;
        });
        const double cw = cw_constant(kQuartic);
        const double before = cw * limit.total_variation(), after = cw * bumped.total_variation();
        verdict(9, rel <= 0.02 && after > before,
                fmt("jump length %.5f vs 4 artanh 0.9 = %.5f, rel %.3e (<= 0.02); C_W |Du*| %.5f -> %.5f under a "
                    "bump",
                    len, ref, rel, before, after),
                seconds_since(t0), 60);
    }
}

void four_arc_run() {
    const double R = 0.9, eps = 0.05;
    const BoundaryData bd = four_arcs();
    const double h = auto_spacing(eps, R);
    const auto t0 = Clock::now();
    const SolveResult res = solve_data(bd, eps, kQuartic, R, h);
    const double solve_secs = seconds_since(t0);
    std::printf("    4-arc eps=%.2f h=%.6f nodes=%zu residual=%.2e sandwich=%.3e  [%.1f s]\n", eps, h,
                res.u.grid->size(), res.residual, res.sandwich.max_violation, solve_secs);

    const auto t1 = Clock::now();
    const auto pls = extract_zero_set(res.u);
    const auto F = bd.free_set();
    const TrappingReport trap = trapping_report(pls, convex_hull(F));
    const double incl = contact_inclusion(pls, F, 2.0 * h);
    const double incl_raw = contact_inclusion(pls, F, 2.0 * h, EndEstimate::Vertex);
    const auto L = bd.interface_points();
    const std::vector<double> radii{0.5, 0.6, 0.7, 0.8, 0.9};
    const ContactReport contact = contact_angles(pls, L, bd, radii);
    double outer_dev = 0.0;
    bool all_contact = contact.endpoints.size() == 2;
    for (const auto& ep : contact.endpoints) {
        all_contact = all_contact && ep.contact;
        if (!ep.shells.empty()) outer_dev = std::max(outer_dev, ep.shells.back().deviation_deg);
        std::printf("    contact at %.4f:", ep.point.theta);
        for (const auto& s : ep.shells) std::printf(" r=%.3f dev=%.2f deg;", s.radius, s.deviation_deg);
        std::printf("\n");
    }
    verdict(7, trap.euclidean <= 2.0 * h && incl <= 0.0 && all_contact && outer_dev <= 10.0,
            fmt("%zu polylines, hull violation %.3e (<= 2h = %.3e), end excess beyond F+2h %.3e (raw vertices "
                "%.3e), outermost contact deviation %.2f deg (<= 10)",
                pls.size(), trap.euclidean, 2.0 * h, incl, incl_raw, outer_dev),
            solve_secs + seconds_since(t1), 900);

    const auto t2 = Clock::now();
    const auto shells = expansion_error(res.u, bd, res.barriers->profile(), radii);
    std::string table;
    for (const auto& s : shells) table += fmt(" [%.1f,%.1f) %.3e;", s.r_inner, s.r_outer, s.sup_error);
    const std::size_t m = shells.size();
    const bool decreasing = m >= 3 && shells[m - 3].sup_error > shells[m - 2].sup_error &&
                            shells[m - 2].sup_error > shells[m - 1].sup_error;
    verdict(10, decreasing, "shell sup |e|:" + table + " outer three decreasing " + (decreasing ? "yes" : "no"),
            seconds_since(t2), 900);
}

IdealArc random_arc(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> c(0.0, kTwoPi), w(lo, hi);
    return IdealArc(c(rng), w(rng));
}

void criterion8() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const std::vector<std::shared_ptr<const ProfileSolution>> profs{profile(2, 0.2), profile(2, 0.1),
                                                                     profile(2, 0.05)};
    int ordered = 0;
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const IdealArc big = random_arc(rng, 0.2, kPi - 0.2);
        const double hw = big.halfwidth * (0.05 + 0.9 * uni(rng));
        const double shift = (big.halfwidth - hw) * (2.0 * uni(rng) - 1.0);
        const IdealArc small(big.center + shift, hw);
        const auto& p = profs[k % profs.size()];
        const ElementarySolution a(CapPair{small}, p), b(CapPair{big}, p);
        const OrderingReport rep = ordering_check(a, b, random_disk_points(1000, 0.99, rng));
        if (rep.ordered) ++ordered;
        worst = std::max(worst, rep.worst_violation);
    }

    int good_sets = 0;
    double min_margin = 1.0;
    for (int k = 0; k < 10; ++k) {
        BoundaryData bd;
        const int count = 2 + static_cast<int>(uni(rng) * 4);
        std::vector<double> cuts;
        for (int i = 0; i < 2 * count; ++i) cuts.push_back(kTwoPi * uni(rng));
        std::sort(cuts.begin(), cuts.end());
        // both signs present: with one side empty the fallback bound 1 - 1e-12
        // is not ordered against the other family
        const int forced = static_cast<int>(uni(rng) * count);
        for (int i = 0; i < count; ++i) {
            const double a = cuts[2 * i], b = cuts[2 * i + 1];
            const IdealArc arc(0.5 * (a + b), 0.5 * std::max(b - a, 1e-3));
            const bool plus = i == forced ? true : i == (forced + 1) % count ? false : uni(rng) < 0.5;
            (plus ? bd.omega_plus : bd.omega_minus).push_back(arc);
        }
        bd.validate();
        const BarrierPair bp(build_families(bd), profs[k % profs.size()]);
        bool ok = true;
        for (DiskPoint z : random_disk_points(1000, 0.99, rng)) {
            const double lm = lower_margin(bp, z), um = upper_margin(bp, z);
            min_margin = std::min({min_margin, lm, um});
            if (!(lm > 0.0 && um > 0.0 && lower_barrier(bp, z) <= upper_barrier(bp, z))) ok = false;
        }
        if (ok) ++good_sets;
    }
    verdict(8, ordered == 100 && good_sets == 10,
            fmt("%d/100 nested pairs ordered (worst U_small - U_big %.3e); %d/10 data sets with -1 < lower <= upper < "
                "1 (smallest margin %.3e)",
                ordered, worst, good_sets, min_margin),
            seconds_since(t0), 60);
}

void criterion11() {
    const auto t0 = Clock::now();
    const double R = 0.8, eps = 0.1, delta = 0.1;
    const SolveResult res = solve_data(semicircles(), eps, kQuartic, R, auto_spacing(eps, R));
    const SignField v = SignField::from_function(res.u.grid, [](DiskPoint p) { return p.imag(); });
    const Field inner = recovery_sequence(v, res.barriers->profile());
    bool ok = true;
    std::string detail = "eps=0.1 R=0.8 delta=0.1:";
    for (double eta : {0.2, 0.1}) {
        const GlueResult g = glue_boundary(inner, res.u, R, delta, eta, eps);
        const GlueEstimate est = glue_estimate(g, inner, res.u, R, delta, eta, eps, kQuartic);
        ok = ok && est.constant <= 10.0;
        detail += fmt(" eta=%.1f slices=%d C=%.4f (slice energy %.4e, annuli + eta + mismatch %.4e, area %.4e);", eta,
                      g.slices, est.constant, est.glued_slice, est.glued_slice / est.constant, est.area_term);
    }
    verdict(11, ok, detail + " C <= 10", seconds_since(t0), 60);
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

void criterion12() {
    const auto t0 = Clock::now();
    const fs::path dir = fs::temp_directory_path() / "hyperphase_acceptance";
    fs::create_directories(dir);
    RunConfig c = parse_config("command = solve\nplus = 1.5708,0.7854; 3.1416,0.7854\nminus = 4.7124,0.7854; "
                               "0,0.7854\neps = 0.1\nR = 0.8\ndeterministic = true\n");
    c.out = (dir / "u.csv").string();
    c.report = (dir / "report.csv").string();
    std::string u[2], r[2];
    int codes[2];
    for (int k = 0; k < 2; ++k) {
        std::ostringstream log;
        codes[k] = run(c, log);
        u[k] = slurp(c.out);
        r[k] = slurp(c.report);
    }
    const bool same = u[0] == u[1] && r[0] == r[1] && !u[0].empty();
    verdict(12, same && codes[0] == codes[1],
            fmt("two solve runs (exit %d, %d): u.csv %zu bytes %s, report.csv %s", codes[0], codes[1], u[0].size(),
                u[0] == u[1] ? "identical" : "differ", r[0] == r[1] ? "identical" : "differ"),
            seconds_since(t0), 600);
}

}  // namespace

int main() {
    const auto t0 = Clock::now();
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion8();
    criterion11();
    criterion12();
    four_arc_run();
    semicircle_ladder();
    std::printf("%d/12 criteria passed  [%.1f s total]\n", passed, seconds_since(t0));
    return 0;
}
