#include "concord/distributions.hpp"

#include "concord/csv.hpp"
#include "concord/error.hpp"
#include "concord/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace concord {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSymmetryTol = 1e-9;
constexpr double kStandardizedTol = 1e-6;

struct Moments {
    double mean;
    double variance;
};

Moments weighted_moments(std::span<const double> values, std::span<const double> weights) {
    double mean = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) mean += weights[i] * values[i];
    double var = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) var += weights[i] * (values[i] - mean) * (values[i] - mean);
    return {mean, var};
}

std::string format(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

}  // namespace

TabulatedFunction::TabulatedFunction(std::vector<double> nodes, std::vector<double> values)
    : nodes_(std::move(nodes)), values_(std::move(values)) {
    if (nodes_.empty()) throw DomainError("tabulated function: needs at least one node");
    if (nodes_.size() != values_.size()) throw DomainError("tabulated function: nodes and values differ in length");
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!(nodes_[i] > 0.0 && nodes_[i] < 1.0)) throw DomainError("tabulated function: nodes must lie in (0, 1)");
        if (i > 0 && !(nodes_[i] > nodes_[i - 1]))
            throw DomainError("tabulated function: nodes must be strictly increasing");
        if (!std::isfinite(values_[i])) throw DomainError("tabulated function: values must be finite");
    }
    bounds_.resize(nodes_.size());
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) bounds_[i] = 0.5 * (nodes_[i] + nodes_[i + 1]);
    bounds_.back() = 1.0;
}

std::vector<double> TabulatedFunction::midpoint_grid(std::size_t m) {
    if (m < 1) throw DomainError("midpoint_grid: m must be >= 1");
    std::vector<double> grid(m);
    for (std::size_t i = 0; i < m; ++i) grid[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(m);
    return grid;
}

double TabulatedFunction::operator()(double u) const {
    if (!(u >= 0.0 && u <= 1.0)) throw DomainError("tabulated function: argument must lie in [0, 1]");
    const auto it = std::lower_bound(bounds_.begin(), bounds_.end(), u);
    return values_[std::min<std::size_t>(it - bounds_.begin(), values_.size() - 1)];
}

std::vector<double> TabulatedFunction::cell_weights() const {
    std::vector<double> w(bounds_.size());
    double prev = 0.0;
    for (std::size_t i = 0; i < bounds_.size(); ++i) {
        w[i] = bounds_[i] - prev;
        prev = bounds_[i];
    }
    return w;
}

bool TabulatedFunction::nondecreasing() const { return std::is_sorted(values_.begin(), values_.end()); }

bool TabulatedFunction::nonincreasing() const {
    return std::is_sorted(values_.begin(), values_.end(), std::greater<>());
}

TabulatedFunction load_tabulated_csv(const std::filesystem::path& path) {
    const auto table = read_numeric_csv(path, HeaderMode::Optional);
    if (table.columns() != 2) throw DomainError(path.string() + ": expected two columns (probability node, value)");
    try {
        return TabulatedFunction(table.column(0), table.column(1));
    } catch (const DomainError& e) {
        throw DomainError(path.string() + ": " + e.what());
    }
}

ConcordanceInducingDistribution ConcordanceInducingDistribution::uniform() {
    return {Uniform01{}, 0.5, 1.0 / 12.0};
}

ConcordanceInducingDistribution ConcordanceInducingDistribution::standard_gaussian() {
    return {StandardGaussian{}, 0.0, 1.0};
}

ConcordanceInducingDistribution ConcordanceInducingDistribution::three_point(double p) {
    if (!(p > 0.0 && p <= 0.5)) throw DomainError("three-point distribution: p must lie in (0, 1/2]");
    return {ThreePoint{p}, 0.0, 2.0 * p};
}

ConcordanceInducingDistribution ConcordanceInducingDistribution::tabulated(TabulatedFunction q) {
    if (!q.nondecreasing()) throw DomainError("tabulated quantile: values must be nondecreasing");
    const auto w = q.cell_weights();
    const auto m = weighted_moments(q.values(), w);
    return {Tabulated{std::move(q)}, m.mean, m.variance};
}

std::string ConcordanceInducingDistribution::name() const {
    return std::visit(overloaded{
                          [](const Uniform01&) -> std::string { return "uniform"; },
                          [](const StandardGaussian&) -> std::string { return "gaussian"; },
                          [](const ThreePoint& t) { return "three-point(" + format(t.p) + ")"; },
                          [](const Tabulated& t) { return "tabulated(" + std::to_string(t.quantile.size()) + " nodes)"; },
                      },
                      variant_);
}

double quantile(const Distribution& g, double u) {
    if (!(u >= 0.0 && u <= 1.0)) throw DomainError("quantile: u must lie in [0, 1]");
    return std::visit(overloaded{
                          [&](const Uniform01&) { return u; },
                          [&](const StandardGaussian&) { return normal_quantile(u); },
                          [&](const ThreePoint& t) {
                              if (u <= t.p) return -1.0;
                              if (u <= 1.0 - t.p) return 0.0;
                              return 1.0;
                          },
                          [&](const Tabulated& t) { return t.quantile(u); },
                      },
                      g.variant());
}

std::vector<Violation> validate(const Distribution& g) {
    std::vector<Violation> out;

    if (!(g.variance() > 0.0)) {
        out.push_back({"nondegenerate", "quantile function is constant on (0,1)"});
    }
    if (!std::isfinite(g.variance()) || !std::isfinite(g.mean())) {
        out.push_back({"finite second moment", "mean or variance is not finite"});
        return out;
    }

    // Symmetry probes: a dense grid that stays off atom boundaries (and, for
    // tabulated quantiles, the nodes themselves, which sit inside their cells).
    std::vector<double> probes;
    if (const auto* t = std::get_if<Tabulated>(&g.variant())) {
        probes = t->quantile.nodes();
    } else {
        probes = TabulatedFunction::midpoint_grid(1000);
        if (const auto* tp = std::get_if<ThreePoint>(&g.variant())) {
            std::erase_if(probes, [&](double u) {
                return std::abs(u - tp->p) < 1e-12 || std::abs(u - (1.0 - tp->p)) < 1e-12;
            });
        }
    }
    double scale = 1.0;
    for (double u : probes) scale = std::max(scale, std::abs(quantile(g, u)));
    double worst = 0.0;
    double worst_u = 0.0;
    for (double u : probes) {
        const double dev = std::abs(quantile(g, u) + quantile(g, 1.0 - u) - 2.0 * g.mean());
        if (dev > worst) {
            worst = dev;
            worst_u = u;
        }
    }
    if (worst > kSymmetryTol * scale) {
        out.push_back({"symmetric", "G^-(u) + G^-(1-u) differs from 2*mean by " + format(worst) + " at u = " +
                                        format(worst_u)});
    }
    return out;
}

TransformPair::TransformPair(TabulatedFunction first, TabulatedFunction second)
    : g1(std::move(first)), g2(std::move(second)) {
    if (g1.nodes() != g2.nodes()) throw DomainError("transform pair: g1 and g2 must share one probability grid");
    if (g1.size() < 3) throw DomainError("transform pair: need at least 3 grid points");
}

std::string to_string(TransformVerdictKind kind) {
    switch (kind) {
        case TransformVerdictKind::IsMeasureOfConcordance: return "IsMeasureOfConcordance";
        case TransformVerdictKind::NotMonotone: return "NotMonotone";
        case TransformVerdictKind::DistributionsDiffer: return "DistributionsDiffer";
        case TransformVerdictKind::NotSymmetric: return "NotSymmetric";
    }
    return "?";
}

namespace {

std::vector<double> standardized(std::span<const double> values, std::span<const double> weights) {
    const auto m = weighted_moments(values, weights);
    const double sd = std::sqrt(m.variance);
    std::vector<double> z(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) z[i] = (values[i] - m.mean) / sd;
    return z;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

// Matches a standardized tabulated quantile against builtins tabulated on
// the same grid and standardized the same way.
std::optional<Distribution> recognize(const TabulatedFunction& z) {
    const auto& nodes = z.nodes();
    const auto w = z.cell_weights();
    auto matches = [&](const Distribution& g) {
        const auto tab = TabulatedFunction::from(nodes, [&](double u) { return quantile(g, u); });
        const auto m = weighted_moments(tab.values(), w);
        if (!(m.variance > 0.0)) return false;
        return max_abs_diff(standardized(tab.values(), w), z.values()) <= kStandardizedTol;
    };
    if (matches(Distribution::uniform())) return Distribution::uniform();
    if (matches(Distribution::standard_gaussian())) return Distribution::standard_gaussian();
    // Three-point candidate: p is the upper cell bound of the lowest level.
    const auto& v = z.values();
    std::size_t k = 0;
    while (k + 1 < v.size() && v[k + 1] == v[0]) ++k;
    const double p = z.cell_bounds()[k];
    if (p > 0.0 && p <= 0.5 + 1e-12) {
        const auto candidate = Distribution::three_point(std::min(p, 0.5));
        if (matches(candidate)) return candidate;
    }
    return std::nullopt;
}

}  // namespace

TransformVerdict check_transform_pair(const TransformPair& t) {
    TransformVerdict verdict{TransformVerdictKind::NotMonotone, std::nullopt, std::nullopt, {}};

    // (1) Joint monotonicity; flip both when both are nonincreasing.
    double sign = 1.0;
    if (t.g1.nondecreasing() && t.g2.nondecreasing()) {
        sign = 1.0;
    } else if (t.g1.nonincreasing() && t.g2.nonincreasing()) {
        sign = -1.0;
    } else {
        verdict.detail = "g1 and g2 are not both nondecreasing or both nonincreasing";
        return verdict;
    }
    std::vector<double> v1 = t.g1.values();
    std::vector<double> v2 = t.g2.values();
    for (auto& x : v1) x *= sign;
    for (auto& x : v2) x *= sign;

    // (2) Same law up to location and scale.
    const auto w = t.g1.cell_weights();
    const auto m1 = weighted_moments(v1, w);
    const auto m2 = weighted_moments(v2, w);
    if (!(m1.variance > 0.0) || !(m2.variance > 0.0)) {
        verdict.kind = TransformVerdictKind::DistributionsDiffer;
        verdict.detail = "a transform is constant, so it induces a degenerate distribution";
        return verdict;
    }
    const auto z1 = standardized(v1, w);
    const auto z2 = standardized(v2, w);
    const double gap = max_abs_diff(z1, z2);
    if (gap > kStandardizedTol) {
        verdict.kind = TransformVerdictKind::DistributionsDiffer;
        verdict.detail = "standardized g1 and g2 differ by up to " + format(gap);
        return verdict;
    }

    // (3) Symmetry of the common standardized quantile.
    std::vector<double> z(z1.size());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = 0.5 * (z1[i] + z2[i]);
    TabulatedFunction common(t.g1.nodes(), z);
    double asym = 0.0;
    for (double u : common.nodes()) asym = std::max(asym, std::abs(common(u) + common(1.0 - u)));
    if (asym > kStandardizedTol) {
        verdict.kind = TransformVerdictKind::NotSymmetric;
        verdict.detail = "standardized quantile violates z(u) + z(1-u) = 0 by up to " + format(asym);
        return verdict;
    }

    verdict.kind = TransformVerdictKind::IsMeasureOfConcordance;
    if (auto builtin = recognize(common)) {
        verdict.recognized = builtin->name();
        verdict.inducer = std::move(*builtin);
    } else {
        verdict.inducer = Distribution::tabulated(std::move(common));
    }
    verdict.detail = sign < 0 ? "both transforms nonincreasing; signs flipped" : "";
    return verdict;
}

}  // namespace concord
