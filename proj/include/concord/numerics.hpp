#pragma once

// Numerical kernels shared by the rest of the library: Gauss-Legendre
// quadrature (lines and squares), the univariate and bivariate normal
// distribution, the smallest eigenvalue of a small symmetric matrix, a dense
// simplex feasibility solver and a reproducible random source.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace concord {

struct QuadratureSpec {
    int order = 64;       // Gauss-Legendre nodes per panel
    int panels = 8;       // uniform panels over the integration range
    double abs_tol = 0.0; // > 0 enables a panel-doubling error check

    void validate() const;
};

// Default for line integrals over [0,1]: 8 panels put a break at 1/2.
inline constexpr QuadratureSpec kLineQuadrature{64, 8, 0.0};
// Default per-axis rule for the triangle-split square integrals.
inline constexpr QuadratureSpec kAreaQuadrature{32, 4, 0.0};

struct GaussLegendreRule {
    std::vector<double> nodes;    // on [-1, 1], ascending
    std::vector<double> weights;
};

// Cached; safe to call concurrently.
const GaussLegendreRule& gauss_legendre(int order);

using Integrand = std::function<double(double)>;
using Integrand2 = std::function<double(double, double)>;

// Composite Gauss-Legendre on [a, b]. `breaks` are extra panel boundaries
// (kinks of the integrand) inserted on top of the uniform panels; points
// outside (a, b) are ignored. Throws NumericalError naming the abscissa when
// f is non-finite there.
double integrate(const Integrand& f, double a, double b, const QuadratureSpec& spec = kLineQuadrature,
                 std::span<const double> breaks = {});

// Integral of f over the square [lo, hi]^2. The square is cut along both
// diagonals into four triangles, each integrated with a collapsed
// (Duffy) tensor rule, so integrands with kinks on x = y or on
// x + y = lo + hi are still integrated at full order.
double integrate_square(const Integrand2& f, double lo, double hi, const QuadratureSpec& spec = kAreaQuadrature);

double normal_pdf(double x);
double normal_cdf(double x);
// Phi^{-1}; returns -inf at 0 and +inf at 1.
double normal_quantile(double p);

// P(X <= x, Y <= y) for a standard bivariate normal pair with correlation rho.
// Genz's refinement of the Drezner-Wesolowsky method; accepts infinite limits.
double bivariate_normal_cdf(double x, double y, double rho);

// Smallest eigenvalue of a symmetric d x d matrix given row-major.
double min_eigenvalue(std::span<const double> row_major, std::size_t d);

// Find w >= 0 with sum(w) = 1 and columns * w = rhs.
struct LpFeasibilityProblem {
    std::size_t rows = 0;         // m
    std::size_t cols = 0;         // k
    std::vector<double> columns;  // column-major m x k
    std::vector<double> rhs;      // m

    void validate() const;
};

struct LpSolution {
    bool feasible = false;
    std::vector<double> weights;  // k entries when feasible
    double residual = 0.0;        // minimal L1 infeasibility found by phase one
    double max_violation = 0.0;   // re-substituted infinity-norm error of `weights`
};

// Two-phase dense simplex, Bland's rule. `feasible` is set only when the
// recovered weights pass re-substitution at `tol`; `residual` is always the
// phase-one optimum so callers can grade near-feasible problems.
LpSolution solve_feasibility(const LpFeasibilityProblem& problem, double tol = 1e-9);

// Counter-based generator: draw i of (seed, stream) is a pure function of
// (seed, stream, i). Streams are independent; no global state.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64();
    // Uniform on the open interval (0, 1).
    double uniform();
    // Standard normal by inversion (bit-reproducible across platforms).
    double normal();
    // Index in [0, n).
    std::size_t below(std::size_t n);
    // A fresh generator on a derived stream; does not advance *this.
    RandomSource split(std::uint64_t substream) const;

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }
    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace concord
