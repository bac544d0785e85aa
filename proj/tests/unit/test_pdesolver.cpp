#include <cmath>
#include <memory>

#include "doctest.h"
#include "hyperphase/pdesolver.hpp"

using namespace hyperphase;

namespace {

const Potential kQuartic = Potential::quartic();

BoundaryData semicircles() { return {{IdealArc(kPi / 2, kPi / 2)}, {IdealArc(-kPi / 2, kPi / 2)}}; }

}  // namespace

TEST_CASE("energy of constants") {
    const auto grid = Grid::make(0.5, 0.005);
    CHECK(discrete_energy(Field(grid, 1.0), 0.1, kQuartic) == 0.0);
    // potential term only: 0.25 times the hyperbolic area 4 pi r^2 / (1 - r^2) of B_0.5
    const double e = discrete_energy(Field(grid, 0.0), 1.0, kQuartic);
    CHECK(e == doctest::Approx(kPi / 3).epsilon(5e-3));
}

TEST_CASE("energy on balls and annuli") {
    const auto grid = Grid::make(0.8, 0.01);
    const Field u = Field::sample(grid, [](DiskPoint p) { return std::tanh(5.0 * p.imag()); });
    const double a = discrete_energy_within(u, 0.1, kQuartic, 0.5);
    const double b = discrete_energy_within(u, 0.1, kQuartic, 0.7);
    CHECK(a < b);
    CHECK(discrete_energy_annulus(u, 0.1, kQuartic, 0.5, 0.7) == doctest::Approx(b - a).epsilon(1e-12));
    CHECK(local_energy_bound_check(u, 0.1, kQuartic, 0.7) == doctest::Approx(0.1 * b));
}

TEST_CASE("elementary energy converges at second order") {
    auto prof = std::make_shared<const ProfileSolution>(solve_profile(2, 0.2, kQuartic));
    const auto f = [&](DiskPoint p) { return prof->evaluate(std::asinh(2.0 * p.imag() / (1.0 - std::norm(p)))); };
    const double e1 = discrete_energy_within(Field::sample(Grid::make(0.5, 0.02), f), 0.2, kQuartic, 0.45);
    const double e2 = discrete_energy_within(Field::sample(Grid::make(0.5, 0.01), f), 0.2, kQuartic, 0.45);
    const double e3 = discrete_energy_within(Field::sample(Grid::make(0.5, 0.005), f), 0.2, kQuartic, 0.45);
    CHECK(std::abs(e2 - e3) < std::abs(e1 - e2));
}

TEST_CASE("residual of trivial fields") {
    const auto grid = Grid::make(0.6, 0.02);
    CHECK(residual_norm(Field(grid, 0.0), 0.1, kQuartic) == 0.0);
    CHECK(residual_norm(Field(grid, 1.0), 0.1, kQuartic) == 0.0);
}

TEST_CASE("layer bound") {
    CHECK(auto_spacing(0.05, 0.9) == doctest::Approx(0.05 * 0.19 / 6));
    CHECK_NOTHROW(require_layer_bound(0.001, 0.05, 0.9));
    CHECK_THROWS_WITH_AS(require_layer_bound(0.01, 0.05, 0.9), doctest::Contains("0.00158"), std::invalid_argument);
}

TEST_CASE("continuation ladder") {
    const auto l = continuation_ladder(0.05, {});
    REQUIRE(l.size() >= 2);
    CHECK(l.front() == doctest::Approx(0.4));
    CHECK(l.back() == 0.05);
    for (std::size_t i = 1; i < l.size(); ++i) CHECK(l[i] < l[i - 1]);
}

TEST_CASE("semicircle minimizer matches the elementary solution") {
    const double eps = 0.2, R = 0.7;
    const SolveResult s = solve_data(semicircles(), eps, kQuartic, R, 0.0);
    CHECK(s.residual <= 1e-6);
    CHECK(s.energy <= s.midpoint_energy);
    const auto& prof = s.barriers->profile();
    double gap = 0.0;
    for (std::size_t k = 0; k < s.u.grid->size(); ++k) {
        const DiskPoint p = s.u.grid->position(k);
        if (std::abs(p) > 0.8 * R) continue;
        gap = std::max(gap, std::abs(s.u.values[k] - prof.evaluate(std::asinh(2 * p.imag() / (1 - std::norm(p))))));
    }
    CHECK(gap <= 0.02);
    for (const auto& st : s.stages) CHECK(st.energy <= st.initial_energy);
}

TEST_CASE("large eps gives a small field at the origin") {
    const SolveResult s = solve_data(semicircles(), 2.0, kQuartic, 0.7, 0.0);
    CHECK(std::abs(s.u.interpolate(DiskPoint(0.0, 0.0))) < 0.5);
}

TEST_CASE("rotated data gives the rotated field") {
    const double phi = 0.6, eps = 0.2, R = 0.7;
    const SolveResult a = solve_data(semicircles(), eps, kQuartic, R, 0.0);
    const SolveResult b = solve_data(semicircles().rotated(phi), eps, kQuartic, R, 0.0);
    const double h = a.u.grid->h();
    double worst = 0.0;
    for (std::size_t k = 0; k < a.u.grid->size(); ++k) {
        const DiskPoint p = a.u.grid->position(k);
        if (std::abs(p) > R - 3 * h) continue;
        worst = std::max(worst, std::abs(a.u.values[k] - b.u.interpolate(p * std::polar(1.0, phi))));
    }
    // bilinear interpolation error with |grad u| <= 2 / eps at distance 2 cells
    CHECK(worst <= 2.0 * h * 2.0 / eps);
}

TEST_CASE("exhaustion on growing balls") {
    const ExhaustionReport ex = exhaustion_solve(semicircles(), 0.2, kQuartic, {0.7, 0.8, 0.9}, 0.0);
    REQUIRE(ex.differences.size() == 2);
    CHECK(ex.differences[1] < ex.differences[0]);
    for (double e : ex.inner_energies) CHECK(e == doctest::Approx(ex.inner_energies.back()).epsilon(0.01));
}

TEST_CASE("eps E stays comparable along the ladder") {
    double lo = 1e300, hi = 0.0;
    for (double eps : {0.2, 0.1, 0.05}) {
        const SolveResult s = solve_data(semicircles(), eps, kQuartic, 0.8, 0.0);
        const double v = eps * discrete_energy_within(s.u, eps, kQuartic, 0.8);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(hi / lo <= 1.5);
}
