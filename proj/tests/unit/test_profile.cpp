#include <cmath>
#include <random>

#include "doctest.h"
#include "hyperphase/profile1d.hpp"

using namespace hyperphase;

namespace {

const Potential kQuartic = Potential::quartic();

// energy of min(tau / eps, 1) for n = 2 on the whole line, Simpson on [0, eps]
double ramp_energy(double eps) {
    const int m = 2000;
    double s = 0.0;
    for (int i = 0; i <= m; ++i) {
        const double t = eps * i / m;
        const double x = t / eps;
        const double f = (0.5 / (eps * eps) + 0.25 * (1 - x * x) * (1 - x * x) / (eps * eps)) * std::cosh(t);
        s += f * (i == 0 || i == m ? 1.0 : (i % 2 ? 4.0 : 2.0));
    }
    return 2.0 * s * eps / m / 3.0;
}

}  // namespace

TEST_CASE("euclidean profile is tanh") {
    const ProfileSolution p = solve_profile(1, 0.1, kQuartic);
    double err = 0.0;
    for (std::size_t i = 0; i < p.nodes().size(); ++i)
        err = std::max(err, std::abs(p.values()[i] - std::tanh(p.nodes()[i] / (std::sqrt(2.0) * 0.1))));
    CHECK(err <= 1e-3);
    for (double t : {0.013, 0.17, 0.55})
        CHECK(std::abs(p.evaluate(t) - std::tanh(t / (std::sqrt(2.0) * 0.1))) <= 1e-3);
}

TEST_CASE("h(0) = 0 and oddness") {
    for (int n : {1, 2, 3})
        for (double eps : {0.3, 0.07}) {
            const ProfileSolution p = solve_profile(n, eps, kQuartic);
            CHECK(p.values().front() == 0.0);
            CHECK(p.evaluate(0.0) == 0.0);
            std::mt19937_64 rng(n);
            std::uniform_real_distribution<double> U(0.0, 3.0);
            for (int k = 0; k < 20; ++k) {
                const double t = U(rng);
                CHECK(p.evaluate(-t) == -p.evaluate(t));
            }
        }
}

TEST_CASE("weighted cost at eps 0.05") {
    const ProfileSolution p = solve_profile(2, 0.05, kQuartic);
    const double F = std::sqrt(2.0) * 0.05 * p.energy();
    CHECK(F >= 1.293);
    CHECK(F <= 1.373);
}

TEST_CASE("tail decays to 1") {
    const ProfileSolution p = solve_profile(2, 0.05, kQuartic);
    CHECK(std::abs(1.0 - p.evaluate(50.0)) <= 1e-12);
    CHECK(p.one_minus(10.0) > 0.0);
    CHECK(p.one_minus(0.3) == doctest::Approx(1.0 - p.evaluate(0.3)).epsilon(1e-12));
}

TEST_CASE("one_minus is continuous where it switches to the tail") {
    const ProfileSolution p = solve_profile(2, 0.1, kQuartic);
    double prev = p.one_minus(0.0);
    for (double t = 0.01; t < 3.0; t += 0.01) {
        const double v = p.one_minus(t);
        CHECK(v <= prev * (1.0 + 1e-9));
        CHECK(v > 0.0);
        prev = v;
    }
}

TEST_CASE("g_of_xi") {
    const ProfileSolution p = solve_profile(2, 0.1, kQuartic);
    CHECK(p.g_of_xi(0.0) == 0.0);
    CHECK(p.g_of_xi(-0.3) == -p.g_of_xi(0.3));
    // the xi-form and tau-form defects coincide by the chain rule
    for (double xi : {0.05, 0.1, 0.2, 0.5}) {
        const double a = xi_form_defect(p, xi, 1e-4), b = tau_form_defect(p, std::asinh(xi), 1e-4);
        CHECK(std::abs(a - b) <= 1e-3 * (1.0 + std::abs(b)) + 1e-2);
    }
}

TEST_CASE("interpolant defect is second order") {
    double prev = 0.0;
    for (int nodes : {200, 800}) {
        ProfileOptions o;
        o.node_count = nodes;
        const ProfileSolution p = solve_profile(2, 0.1, kQuartic, o);
        double d = 0.0;
        for (double t = 0.01; t < 1.0; t += 0.0137) d = std::max(d, std::abs(tau_form_defect(p, t, 1e-4)));
        if (prev > 0.0) CHECK(prev / d > 6.0);
        prev = d;
    }
}

TEST_CASE("eps E bounded against the ramp competitor") {
    for (double eps : {0.2, 0.1, 0.05}) {
        const ProfileSolution p = solve_profile(2, eps, kQuartic);
        CHECK(eps * p.energy() <= 1.2);
        CHECK(p.energy() <= ramp_energy(eps));
    }
}

TEST_CASE("postconditions") {
    ProfileOptions o;
    const ProfileSolution p = solve_profile(2, 0.1, kQuartic, o);
    CHECK(p.residual() <= o.tol);
    for (std::size_t i = 1; i < p.values().size(); ++i) CHECK(p.values()[i] >= p.values()[i - 1]);
    for (double v : p.values()) CHECK((v >= 0.0 && v <= 1.0));
    CHECK(p.lipschitz() >= p.slope0());
}

TEST_CASE("energy decreases under refinement") {
    ProfileOptions a, b;
    a.node_count = 300;
    b.node_count = 600;
    CHECK(solve_profile(2, 0.1, kQuartic, b).energy() <= solve_profile(2, 0.1, kQuartic, a).energy());
}

TEST_CASE("two seeds agree") {
    ProfileOptions a, b;
    a.seed = ProfileSeed::Tanh;
    b.seed = ProfileSeed::LinearRamp;
    const ProfileSolution p = solve_profile(2, 0.05, kQuartic, a), q = solve_profile(2, 0.05, kQuartic, b);
    REQUIRE(p.nodes().size() == q.nodes().size());
    double d = 0.0;
    for (std::size_t i = 0; i < p.values().size(); ++i) d = std::max(d, std::abs(p.values()[i] - q.values()[i]));
    CHECK(d <= 1e-8);
}

TEST_CASE("energy concentrates near the transition") {
    const ProfileSolution p = solve_profile(2, 0.05, kQuartic);
    CHECK(p.energy() - p.energy_within(10 * 0.05) < 1e-6 * p.energy());
}

TEST_CASE("truncation too small is rejected") {
    ProfileOptions o;
    o.T = 0.05;
    CHECK_THROWS_AS(solve_profile(2, 0.1, kQuartic, o), std::exception);
    CHECK_THROWS(solve_profile(0, 0.1, kQuartic));
    CHECK_THROWS(solve_profile(2, -0.1, kQuartic));
}

TEST_CASE("graded grid") {
    const auto g = graded_grid(0.1, 20.0, 100);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == doctest::Approx(20.0));
    CHECK(g.size() >= 101);
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
}

TEST_CASE("slow tails give infinite energy but a valid profile") {
    const ProfileSolution p = solve_profile(2, 2.0, kQuartic);
    CHECK(std::isinf(p.energy()));
    CHECK(p.evaluate(p.T()) > 0.99);
    CHECK(std::isfinite(p.energy_within(1.0)));
}
