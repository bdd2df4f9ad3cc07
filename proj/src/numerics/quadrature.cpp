#include "concord/error.hpp"
#include "concord/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

namespace concord {

void QuadratureSpec::validate() const {
    if (order < 2) throw DomainError("QuadratureSpec: order must be >= 2");
    if (panels < 1) throw DomainError("QuadratureSpec: panels must be >= 1");
    if (!(abs_tol >= 0.0)) throw DomainError("QuadratureSpec: abs_tol must be >= 0");
}

namespace {

GaussLegendreRule build_rule(int n) {
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Newton on P_n from the usual cosine guess.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double step = p1 / dp;
            x -= step;
            if (std::abs(step) < 1e-16) break;
        }
        // Recompute the derivative at the converged root.
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = pk;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

double check_finite(double value, double x) {
    if (!std::isfinite(value)) {
        std::ostringstream os;
        os.precision(17);
        os << "integrand is not finite at x = " << x << " (value " << value << ")";
        throw NumericalError(os.str());
    }
    return value;
}

double integrate_once(const Integrand& f, std::span<const double> edges, const GaussLegendreRule& rule) {
    double total = 0.0;
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double half = 0.5 * (edges[p + 1] - edges[p]);
        const double mid = 0.5 * (edges[p + 1] + edges[p]);
        if (half <= 0.0) continue;
        double panel = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double x = mid + half * rule.nodes[i];
            panel += rule.weights[i] * check_finite(f(x), x);
        }
        total += half * panel;
    }
    return total;
}

std::vector<double> panel_edges(double a, double b, int panels, std::span<const double> breaks) {
    std::vector<double> edges;
    edges.reserve(panels + 1 + breaks.size());
    for (int i = 0; i <= panels; ++i) edges.push_back(i == panels ? b : a + (b - a) * i / panels);
    for (double x : breaks)
        if (x > a && x < b) edges.push_back(x);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int order) {
    if (order < 1) throw DomainError("gauss_legendre: order must be >= 1");
    static std::mutex mutex;
    static std::map<int, GaussLegendreRule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, build_rule(order)).first;
    return it->second;
}

double integrate(const Integrand& f, double a, double b, const QuadratureSpec& spec, std::span<const double> breaks) {
    spec.validate();
    if (!(a <= b)) throw DomainError("integrate: requires a <= b");
    if (a == b) return 0.0;
    const auto& rule = gauss_legendre(spec.order);
    const auto edges = panel_edges(a, b, spec.panels, breaks);
    const double value = integrate_once(f, edges, rule);
    if (spec.abs_tol > 0.0) {
        const auto fine = panel_edges(a, b, 2 * spec.panels, breaks);
        const double refined = integrate_once(f, fine, rule);
        if (std::abs(refined - value) > spec.abs_tol) {
            std::ostringstream os;
            os.precision(3);
            os << "integrate: panel-doubling difference " << std::abs(refined - value) << " exceeds abs_tol "
               << spec.abs_tol;
            throw NumericalError(os.str());
        }
        return refined;
    }
    return value;
}

double integrate_square(const Integrand2& f, double lo, double hi, const QuadratureSpec& spec) {
    spec.validate();
    if (!(lo <= hi)) throw DomainError("integrate_square: requires lo <= hi");
    if (lo == hi) return 0.0;
    const auto& rule = gauss_legendre(spec.order);
    const double mid = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    const std::array<std::array<double, 2>, 4> corners{{{lo, lo}, {hi, lo}, {hi, hi}, {lo, hi}}};
    const double jacobian = 2.0 * h * h;  // |det(A - c, B - A)| for every triangle

    // Collapsed map (s, t) -> c + s (A - c) + s t (B - A) on [0,1]^2.
    std::vector<double> abscissae;
    std::vector<double> weights;
    for (int p = 0; p < spec.panels; ++p) {
        const double a = static_cast<double>(p) / spec.panels;
        const double b = static_cast<double>(p + 1) / spec.panels;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            abscissae.push_back(0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[i]);
            weights.push_back(0.5 * (b - a) * rule.weights[i]);
        }
    }

    double total = 0.0;
    for (std::size_t tri = 0; tri < 4; ++tri) {
        const auto& A = corners[tri];
        const auto& B = corners[(tri + 1) % 4];
        const double ax = A[0] - mid;
        const double ay = A[1] - mid;
        const double bx = B[0] - A[0];
        const double by = B[1] - A[1];
        double tri_sum = 0.0;
        for (std::size_t i = 0; i < abscissae.size(); ++i) {
            const double s = abscissae[i];
            double inner = 0.0;
            for (std::size_t j = 0; j < abscissae.size(); ++j) {
                const double t = abscissae[j];
                const double x = mid + s * (ax + t * bx);
                const double y = mid + s * (ay + t * by);
                const double value = f(x, y);
                if (!std::isfinite(value)) {
                    std::ostringstream os;
                    os.precision(17);
                    os << "integrand is not finite at (" << x << ", " << y << ")";
                    throw NumericalError(os.str());
                }
                inner += weights[j] * value;
            }
            tri_sum += weights[i] * s * inner;
        }
        total += jacobian * tri_sum;
    }
    return total;
}

}  // namespace concord
