#include "catch_amalgamated.hpp"

#include "concord/error.hpp"
#include "concord/numerics.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace concord;
using Catch::Approx;

namespace {

double phi_oracle(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// P(X <= x, Y <= y) = int_{-inf}^{x} phi(t) Phi((y - rho t) / sqrt(1 - rho^2)) dt,
// integrated by composite Simpson on a fine grid.
double bvn_oracle(double x, double y, double rho) {
    const double s = std::sqrt(1.0 - rho * rho);
    const double lo = -12.0;
    const int n = 20000;
    const double h = (x - lo) / n;
    auto f = [&](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi) * phi_oracle((y - rho * t) / s); };
    double sum = f(lo) + f(x);
    for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(lo + i * h);
    return sum * h / 3.0;
}

std::vector<double> equicorrelation(std::size_t d, double rho) {
    std::vector<double> m(d * d, rho);
    for (std::size_t i = 0; i < d; ++i) m[i * d + i] = 1.0;
    return m;
}

}  // namespace

TEST_CASE("integrate: polynomial and kinked integrands", "[numerics]") {
    CHECK(integrate([](double u) { return u; }, 0.0, 1.0) == Approx(0.5).margin(1e-15));
    CHECK(integrate([](double u) { return u * u; }, 0.0, 1.0) == Approx(1.0 / 3.0).margin(1e-15));
    CHECK(integrate([](double u) { return std::min(u, 1.0 - u); }, 0.0, 1.0) == Approx(0.25).margin(1e-15));
    // Degree 2 * order - 1 on a single panel is exact.
    const QuadratureSpec one{4, 1, 0.0};
    CHECK(integrate([](double u) { return std::pow(u, 7); }, 0.0, 1.0, one) == Approx(0.125).margin(1e-15));
    // An off-grid kink handled by an explicit break.
    const double breaks[] = {0.3};
    CHECK(integrate([](double u) { return std::abs(u - 0.3); }, 0.0, 1.0, kLineQuadrature, breaks) ==
          Approx(0.5 * (0.09 + 0.49)).margin(1e-15));
}

TEST_CASE("integrate: linearity", "[numerics]") {
    auto f = [](double u) { return std::sin(3.0 * u) + std::min(u, 0.5); };
    auto g = [](double u) { return std::exp(-u) * std::abs(u - 0.5); };
    const double a = 1.7;
    const double b = -0.4;
    const double lhs = integrate([&](double u) { return a * f(u) + b * g(u); }, 0.0, 1.0);
    const double rhs = a * integrate(f, 0.0, 1.0) + b * integrate(g, 0.0, 1.0);
    CHECK(std::abs(lhs - rhs) <= 1e-12);
}

TEST_CASE("integrate: non-finite integrand reports the abscissa", "[numerics]") {
    try {
        integrate([](double u) { return u > 0.5 ? std::numeric_limits<double>::infinity() : 0.0; }, 0.0, 1.0);
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        CHECK(std::string(e.what()).find("not finite at x = ") != std::string::npos);
    }
    CHECK_THROWS_AS(integrate([](double u) { return u; }, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(integrate([](double u) { return u; }, 0.0, 1.0, QuadratureSpec{1, 1, 0.0}), DomainError);
}

TEST_CASE("integrate: panel-doubling tolerance check", "[numerics]") {
    const QuadratureSpec checked{8, 4, 1e-10};
    CHECK(integrate([](double u) { return std::cos(u); }, 0.0, 1.0, checked) == Approx(std::sin(1.0)).margin(1e-12));
    const QuadratureSpec coarse{2, 1, 1e-14};
    CHECK_THROWS_AS(integrate([](double u) { return std::sqrt(u); }, 0.0, 1.0, coarse), NumericalError);
}

TEST_CASE("integrate_square: kinks on both diagonals are integrated exactly", "[numerics]") {
    // int min(u, v) = 1/3, int max(u + v - 1, 0) = 1/6 over the unit square.
    CHECK(integrate_square([](double u, double v) { return std::min(u, v); }, 0.0, 1.0) == Approx(1.0 / 3.0).margin(1e-14));
    CHECK(integrate_square([](double u, double v) { return std::max(u + v - 1.0, 0.0); }, 0.0, 1.0) ==
          Approx(1.0 / 6.0).margin(1e-14));
    CHECK(integrate_square([](double u, double v) { return u * v; }, 0.0, 1.0) == Approx(0.25).margin(1e-14));
    CHECK(integrate_square([](double, double) { return 1.0; }, -2.0, 3.0) == Approx(25.0).margin(1e-12));
}

TEST_CASE("normal: quantile inverts the cdf", "[numerics]") {
    for (double p : {1e-300, 1e-12, 0.001, 0.2, 0.5, 0.77, 0.999, 1.0 - 1e-12}) {
        CHECK(normal_cdf(normal_quantile(p)) == Approx(p).epsilon(1e-12));
    }
    CHECK(normal_quantile(0.5) == 0.0);
    CHECK(normal_quantile(0.0) == -std::numeric_limits<double>::infinity());
    CHECK(normal_quantile(1.0) == std::numeric_limits<double>::infinity());
    CHECK(normal_quantile(0.975) == Approx(1.959963984540054).epsilon(1e-14));
    CHECK_THROWS_AS(normal_quantile(1.5), DomainError);
}

TEST_CASE("bivariate_normal_cdf: reference values", "[numerics]") {
    CHECK(bivariate_normal_cdf(0, 0, 0) == Approx(0.25).margin(1e-15));
    CHECK(bivariate_normal_cdf(0, 0, 1) == Approx(0.5).margin(1e-15));
    CHECK(bivariate_normal_cdf(0, 0, 0.5) == Approx(1.0 / 3.0).margin(1e-12));
    CHECK_THROWS_AS(bivariate_normal_cdf(0, 0, 1.1), DomainError);
    CHECK_THROWS_AS(bivariate_normal_cdf(0, 0, -1.0001), DomainError);
}

TEST_CASE("bivariate_normal_cdf: orthant identity 1/4 + asin(rho)/(2 pi)", "[numerics]") {
    for (int k = -20; k <= 20; ++k) {
        const double rho = k / 20.0;
        CHECK(std::abs(bivariate_normal_cdf(0, 0, rho) - (0.25 + std::asin(rho) / (2.0 * std::numbers::pi))) <= 1e-12);
    }
}

TEST_CASE("bivariate_normal_cdf: agrees with a one-dimensional quadrature oracle", "[numerics]") {
    const double xs[] = {-3.1, -1.2, -0.3, 0.0, 0.4, 1.5, 2.7};
    const double rhos[] = {-0.95, -0.7, -0.5, -0.1, 0.0, 0.3, 0.6, 0.8, 0.95};
    double worst = 0.0;
    for (double x : xs)
        for (double y : xs)
            for (double r : rhos) worst = std::max(worst, std::abs(bivariate_normal_cdf(x, y, r) - bvn_oracle(x, y, r)));
    CHECK(worst <= 1e-10);
}

TEST_CASE("bivariate_normal_cdf: symmetry and monotonicity", "[numerics]") {
    const std::vector<double> grid = {-2.5, -1.0, -0.25, 0.0, 0.5, 1.25, 3.0};
    const std::vector<double> rhos = {-1.0, -0.9, -0.5, 0.0, 0.4, 0.9, 1.0};
    for (double x : grid)
        for (double y : grid)
            for (double r : rhos) CHECK(bivariate_normal_cdf(x, y, r) == bivariate_normal_cdf(y, x, r));
    for (std::size_t i = 1; i < grid.size(); ++i)
        for (double y : grid)
            for (double r : rhos) {
                CHECK(bivariate_normal_cdf(grid[i], y, r) >= bivariate_normal_cdf(grid[i - 1], y, r));
            }
    for (double x : grid)
        for (double y : grid)
            for (std::size_t k = 1; k < rhos.size(); ++k)
                CHECK(bivariate_normal_cdf(x, y, rhos[k]) >= bivariate_normal_cdf(x, y, rhos[k - 1]) - 1e-15);
}

TEST_CASE("bivariate_normal_cdf: degenerate correlations and infinite limits", "[numerics]") {
    CHECK(bivariate_normal_cdf(0.3, -0.2, 1.0) == Approx(normal_cdf(-0.2)).margin(1e-15));
    CHECK(bivariate_normal_cdf(0.3, 0.2, -1.0) == Approx(normal_cdf(0.3) - normal_cdf(-0.2)).margin(1e-15));
    CHECK(bivariate_normal_cdf(-0.3, -0.2, -1.0) == 0.0);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(bivariate_normal_cdf(inf, 0.7, 0.4) == Approx(normal_cdf(0.7)).margin(1e-15));
    CHECK(bivariate_normal_cdf(-inf, 0.7, 0.4) == 0.0);
}

TEST_CASE("min_eigenvalue: reference matrices", "[numerics]") {
    CHECK(min_eigenvalue(equicorrelation(3, 0.0), 3) == Approx(1.0).margin(1e-12));
    CHECK(min_eigenvalue(equicorrelation(3, -0.5), 3) == Approx(0.0).margin(1e-12));
    CHECK(min_eigenvalue(equicorrelation(3, -0.6), 3) == Approx(-0.2).margin(1e-12));
    std::vector<double> asym = equicorrelation(3, 0.2);
    asym[1] += 1e-9;
    CHECK_THROWS_AS(min_eigenvalue(asym, 3), DomainError);
    CHECK_THROWS_AS(min_eigenvalue(asym, 2), DomainError);
}

TEST_CASE("min_eigenvalue: shift property on random symmetric matrices", "[numerics]") {
    RandomSource rng(20240611);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t d = 2 + rng.below(7);
        std::vector<double> s(d * d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i; j < d; ++j) s[i * d + j] = s[j * d + i] = 2.0 * rng.uniform() - 1.0;
        const double c = 4.0 * rng.uniform() - 2.0;
        std::vector<double> shifted = s;
        for (std::size_t i = 0; i < d; ++i) shifted[i * d + i] += c;
        CHECK(std::abs(min_eigenvalue(shifted, d) - min_eigenvalue(s, d) - c) <= 1e-9);
    }
}

TEST_CASE("solve_feasibility: small problems", "[numerics]") {
    SECTION("single column equal to rhs") {
        const LpSolution s = solve_feasibility({2, 1, {0.3, -0.4}, {0.3, -0.4}});
        REQUIRE(s.feasible);
        CHECK(s.weights[0] == Approx(1.0).margin(1e-12));
    }
    SECTION("midpoint of two columns") {
        const LpSolution s = solve_feasibility({1, 2, {0.0, 1.0}, {0.5}});
        REQUIRE(s.feasible);
        CHECK(s.weights[0] == Approx(0.5).margin(1e-12));
        CHECK(s.weights[1] == Approx(0.5).margin(1e-12));
    }
    SECTION("outside the hull") {
        const LpSolution s = solve_feasibility({1, 2, {0.0, 1.0}, {2.0}});
        CHECK_FALSE(s.feasible);
        CHECK(s.residual > 0.5);
    }
    SECTION("dimension mismatch") {
        CHECK_THROWS_AS(solve_feasibility({2, 2, {0.0, 1.0, 2.0}, {0.5, 0.5}}), DomainError);
        CHECK_THROWS_AS(solve_feasibility({2, 1, {0.0, 1.0}, {0.5}}), DomainError);
        CHECK_THROWS_AS(solve_feasibility({1, 1, {0.0}, {0.0}}, 0.0), DomainError);
    }
}

TEST_CASE("solve_feasibility: random hull points re-substitute within tol", "[numerics]") {
    RandomSource rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t m = 1 + rng.below(6);
        const std::size_t k = 1 + rng.below(12);
        LpFeasibilityProblem p{m, k, std::vector<double>(m * k), std::vector<double>(m, 0.0)};
        for (double& x : p.columns) x = 2.0 * rng.uniform() - 1.0;
        std::vector<double> w(k);
        double total = 0.0;
        for (double& x : w) total += (x = rng.uniform());
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t i = 0; i < m; ++i) p.rhs[i] += w[j] / total * p.columns[j * m + i];
        const LpSolution s = solve_feasibility(p);
        REQUIRE(s.feasible);
        double sum = 0.0;
        double worst = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < k; ++j) row += p.columns[j * m + i] * s.weights[j];
            worst = std::max(worst, std::abs(row - p.rhs[i]));
        }
        for (double x : s.weights) {
            CHECK(x >= -1e-9);
            sum += x;
        }
        CHECK(std::abs(sum - 1.0) <= 1e-9);
        CHECK(worst <= 1e-9);
    }
}

TEST_CASE("RandomSource: reproducible, stream-separated, well spread", "[numerics]") {
    RandomSource a(42, 3);
    RandomSource b(42, 3);
    RandomSource c(42, 4);
    int same_stream_matches = 0;
    int other_stream_matches = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto x = a.next_u64();
        same_stream_matches += x == b.next_u64();
        other_stream_matches += x == c.next_u64();
    }
    CHECK(same_stream_matches == 1000);
    CHECK(other_stream_matches == 0);

    RandomSource r(1);
    const int n = 1000000;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        sum += u;
        sum_sq += u * u;
    }
    CHECK(std::abs(sum / n - 0.5) < 3.0 * std::sqrt(1.0 / 12.0 / n));
    CHECK(std::abs(sum_sq / n - 1.0 / 3.0) < 0.002);

    RandomSource s(9);
    const RandomSource child = s.split(1);
    CHECK(s.counter() == 0);
    CHECK(child.seed() == 9);
    CHECK(child.stream() != s.stream());
    CHECK_THROWS_AS(s.below(0), DomainError);
}
