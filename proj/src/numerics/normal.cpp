#include "concord/error.hpp"
#include "concord/numerics.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace concord {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Upper orthant P(X > h, Y > k) following Genz (2004), "Numerical computation
// of rectangular bivariate and trivariate normal and t probabilities".
double upper_orthant(double h, double k, double r) {
    const GaussLegendreRule& rule = gauss_legendre(std::abs(r) < 0.3 ? 6 : std::abs(r) < 0.75 ? 12 : 20);
    const auto& x = rule.nodes;
    const auto& w = rule.weights;
    const std::size_t n = x.size();

    double hk = h * k;
    double bvn = 0.0;
    if (std::abs(r) < 0.925) {
        const double hs = 0.5 * (h * h + k * k);
        const double asr = 0.5 * std::asin(r);
        for (std::size_t i = 0; i < n; ++i) {
            const double sn = std::sin(asr * (1.0 + x[i]));
            bvn += w[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
        }
        // Each half of the symmetric rule covers one of Genz's two sums.
        return bvn * asr / kTwoPi + normal_cdf(-h) * normal_cdf(-k);
    }

    if (r < 0.0) {
        k = -k;
        hk = -hk;
    }
    if (std::abs(r) < 1.0) {
        const double as = (1.0 - r) * (1.0 + r);
        double a = std::sqrt(as);
        const double bs = (h - k) * (h - k);
        const double c = (4.0 - hk) / 8.0;
        const double d = (12.0 - hk) / 80.0;
        double asr = -0.5 * (bs / as + hk);
        if (asr > -100.0) bvn = a * std::exp(asr) * (1.0 - c * (bs - as) * (1.0 - d * bs) / 3.0 + c * d * as * as);
        if (hk > -100.0) {
            const double b = std::sqrt(bs);
            const double sp = std::sqrt(kTwoPi) * normal_cdf(-b / a);
            bvn -= std::exp(-0.5 * hk) * sp * b * (1.0 - c * bs * (1.0 - d * bs) / 3.0);
        }
        a *= 0.5;
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            // Nodes mapped from [-1, 1] onto (0, 2).
            const double xs = (a * (1.0 + x[i])) * (a * (1.0 + x[i]));
            asr = -0.5 * (bs / xs + hk);
            if (asr <= -100.0) continue;
            const double sp = 1.0 + c * xs * (1.0 + 5.0 * d * xs);
            const double rs = std::sqrt(1.0 - xs);
            const double ep = std::exp(-hk * xs / (2.0 * (1.0 + rs) * (1.0 + rs))) / rs;
            acc += w[i] * std::exp(asr) * (sp - ep);
        }
        bvn = (a * acc - bvn) / kTwoPi;
    }
    if (r > 0.0) return bvn + normal_cdf(-std::max(h, k));
    if (h >= k) return -bvn;
    const double L = h < 0.0 ? normal_cdf(k) - normal_cdf(h) : normal_cdf(-h) - normal_cdf(-k);
    return L - bvn;
}

}  // namespace

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(kTwoPi); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("normal_quantile: p must lie in [0, 1]");
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    // Work on the smaller tail so 1 - p stays exact.
    if (p > 0.5) return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * (1.0 - p));
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double bivariate_normal_cdf(double x, double y, double rho) {
    if (!(rho >= -1.0 && rho <= 1.0)) throw DomainError("bivariate_normal_cdf: rho must lie in [-1, 1]");
    if (std::isnan(x) || std::isnan(y)) throw DomainError("bivariate_normal_cdf: NaN argument");
    // Fixed argument order makes the result exactly symmetric in (x, y).
    if (x > y) std::swap(x, y);
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (x == -inf || y == -inf) return 0.0;
    if (x == inf) return normal_cdf(y);
    if (y == inf) return normal_cdf(x);
    if (rho == 1.0) return normal_cdf(std::min(x, y));
    if (rho == -1.0) return std::max(0.0, normal_cdf(x) - normal_cdf(-y));
    // P(X <= x, Y <= y) = P(-X > -x, -Y > -y).
    return std::clamp(upper_orthant(-x, -y, rho), 0.0, 1.0);
}

}  // namespace concord
