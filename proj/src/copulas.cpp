#include "concord/copulas.hpp"

#include "concord/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace concord {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

void require_unit(double u, double v) {
    if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0)) {
        std::ostringstream os;
        os.precision(17);
        os << "copula arguments must lie in [0,1]^2, got (" << u << ", " << v << ")";
        throw DomainError(os.str());
    }
}

double gaussian_eval(double rho, double u, double v) {
    if (rho == 1.0) return std::min(u, v);
    if (rho == -1.0) return std::max(u + v - 1.0, 0.0);
    if (u == 0.0 || v == 0.0) return 0.0;
    if (u == 1.0) return v;
    if (v == 1.0) return u;
    return bivariate_normal_cdf(normal_quantile(u), normal_quantile(v), rho);
}

}  // namespace

Copula Copula::independence() { return Copula(Independence{}); }
Copula Copula::comonotone() { return Copula(Comonotone{}); }
Copula Copula::countermonotone() { return Copula(Countermonotone{}); }

Copula Copula::gaussian(double rho) {
    if (!(rho >= -1.0 && rho <= 1.0)) throw DomainError("Gaussian copula: rho must lie in [-1, 1]");
    return Copula(Gaussian{rho});
}

Copula Copula::mixture(std::vector<std::pair<double, Copula>> components) {
    if (components.empty()) throw DomainError("mixture copula: needs at least one component");
    Mixture m;
    double total = 0.0;
    for (auto& [w, c] : components) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw DomainError("mixture copula: weights must be nonnegative");
        total += w;
        m.components.push_back({w, std::make_shared<const Copula>(std::move(c))});
    }
    if (std::abs(total - 1.0) > 1e-12) throw DomainError("mixture copula: weights must sum to 1");
    return Copula(std::move(m));
}

Copula Copula::empirical(std::vector<Point> points) {
    if (points.empty()) throw DomainError("empirical copula: needs at least one point");
    for (const auto& [u, v] : points)
        if (!(u > 0.0 && u < 1.0 && v > 0.0 && v < 1.0))
            throw DomainError("empirical copula: pseudo-observations must lie strictly inside (0,1)^2");
    return Copula(Empirical{std::move(points)});
}

std::string Copula::describe() const {
    std::ostringstream os;
    os.precision(6);
    std::visit(overloaded{
                   [&](const Independence&) { os << "independence"; },
                   [&](const Comonotone&) { os << "comonotone"; },
                   [&](const Countermonotone&) { os << "countermonotone"; },
                   [&](const Gaussian& g) { os << "gaussian(" << g.rho << ")"; },
                   [&](const Mixture& m) {
                       os << "mixture(";
                       for (std::size_t i = 0; i < m.components.size(); ++i)
                           os << (i ? " + " : "") << m.components[i].weight << "*" << m.components[i].copula->describe();
                       os << ")";
                   },
                   [&](const Empirical& e) { os << "empirical(n=" << e.points.size() << ")"; },
               },
               variant_);
    return os.str();
}

double Copula::operator()(double u, double v) const { return eval(*this, u, v); }

double eval(const Copula& c, double u, double v) {
    require_unit(u, v);
    return std::visit(overloaded{
                          [&](const Independence&) { return u * v; },
                          [&](const Comonotone&) { return std::min(u, v); },
                          [&](const Countermonotone&) { return std::max(u + v - 1.0, 0.0); },
                          [&](const Gaussian& g) { return gaussian_eval(g.rho, u, v); },
                          [&](const Mixture& m) {
                              double s = 0.0;
                              for (const auto& comp : m.components) s += comp.weight * eval(*comp.copula, u, v);
                              return s;
                          },
                          [&](const Empirical& e) {
                              std::size_t count = 0;
                              for (const auto& [x, y] : e.points) count += (x <= u && y <= v);
                              return static_cast<double>(count) / e.points.size();
                          },
                      },
                      c.variant());
}

namespace {

Point draw_one(const Copula& c, RandomSource& rng) {
    return std::visit(overloaded{
                          [&](const Independence&) {
                              const double u = rng.uniform();
                              return Point{u, rng.uniform()};
                          },
                          [&](const Comonotone&) {
                              const double u = rng.uniform();
                              return Point{u, u};
                          },
                          [&](const Countermonotone&) {
                              const double u = rng.uniform();
                              return Point{u, 1.0 - u};
                          },
                          [&](const Gaussian& g) {
                              const double u = rng.uniform();
                              if (g.rho == 1.0) return Point{u, u};
                              if (g.rho == -1.0) return Point{u, 1.0 - u};
                              const double z1 = normal_quantile(u);
                              const double z2 = rng.normal();
                              const double x = g.rho * z1 + std::sqrt((1.0 - g.rho) * (1.0 + g.rho)) * z2;
                              return Point{u, normal_cdf(x)};
                          },
                          [&](const Mixture& m) {
                              double pick = rng.uniform();
                              for (const auto& comp : m.components) {
                                  if (pick < comp.weight) return draw_one(*comp.copula, rng);
                                  pick -= comp.weight;
                              }
                              // Rounding left `pick` past the last weight; take the last positive one.
                              for (auto it = m.components.rbegin(); it != m.components.rend(); ++it)
                                  if (it->weight > 0.0) return draw_one(*it->copula, rng);
                              return draw_one(*m.components.back().copula, rng);
                          },
                          [&](const Empirical& e) { return e.points[rng.below(e.points.size())]; },
                      },
                      c.variant());
}

}  // namespace

std::vector<Point> sample(const Copula& c, std::size_t n, RandomSource& rng) {
    if (n < 1) throw DomainError("sample: n must be >= 1");
    std::vector<Point> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(draw_one(c, rng));
    return out;
}

std::vector<double> average_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i + 1;
        while (j < n && values[order[j]] == values[order[i]]) ++j;
        // Positions i..j-1 share the mean of ranks i+1..j.
        const double rank = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
        i = j;
    }
    return ranks;
}

Copula pseudo_observations(std::span<const Point> data) {
    const std::size_t n = data.size();
    if (n < 2) throw DomainError("pseudo_observations: need at least 2 observations");
    std::vector<double> xs(n);
    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (std::isnan(data[i][0]) || std::isnan(data[i][1])) throw DomainError("pseudo_observations: NaN in data");
        xs[i] = data[i][0];
        ys[i] = data[i][1];
    }
    const auto rx = average_ranks(xs);
    const auto ry = average_ranks(ys);
    const double denom = static_cast<double>(n + 1);
    std::vector<Point> points(n);
    for (std::size_t i = 0; i < n; ++i) points[i] = {rx[i] / denom, ry[i] / denom};
    return Copula::empirical(std::move(points));
}

BVector::BVector(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    if (bits_.size() < 1) throw DomainError("BVector: needs at least one entry");
    for (auto b : bits_)
        if (b > 1) throw DomainError("BVector: entries must be 0 or 1");
    if (bits_[0] != 1) throw DomainError("BVector: first entry must be 1");
}

BVector BVector::canonical(std::vector<std::uint8_t> bits) {
    if (!bits.empty() && bits[0] == 0)
        for (auto& b : bits) b = static_cast<std::uint8_t>(1 - b);
    return BVector(std::move(bits));
}

std::string BVector::str() const {
    std::string s;
    for (auto b : bits_) s.push_back(b ? '1' : '0');
    return s;
}

std::vector<BVector> enumerate_bvectors(std::size_t d) {
    if (d < 1) throw DomainError("enumerate_bvectors: d must be >= 1");
    if (d > 31) throw CapacityError("enumerate_bvectors: d too large");
    const std::size_t count = std::size_t{1} << (d - 1);
    std::vector<BVector> out;
    out.reserve(count);
    for (std::size_t code = 0; code < count; ++code) {
        std::vector<std::uint8_t> bits(d, 1);
        for (std::size_t i = 1; i < d; ++i)
            if (code & (std::size_t{1} << (i - 1))) bits[i] = 0;
        out.emplace_back(std::move(bits));
    }
    return out;
}

std::vector<double> SampleMatrix::column(std::size_t j) const {
    std::vector<double> out(rows);
    for (std::size_t i = 0; i < rows; ++i) out[i] = data[i * cols + j];
    return out;
}

namespace {

void write_witness_row(const BVector& b, double u, double* row) {
    for (std::size_t j = 0; j < b.size(); ++j) row[j] = b[j] ? u : 1.0 - u;
}

}  // namespace

SampleMatrix witness_component_sample(const BVector& b, std::size_t n, RandomSource& rng) {
    if (b.size() < 2) throw DomainError("witness_component_sample: d must be >= 2");
    SampleMatrix m{n, b.size(), std::vector<double>(n * b.size())};
    for (std::size_t i = 0; i < n; ++i) write_witness_row(b, rng.uniform(), &m.data[i * m.cols]);
    return m;
}

SampleMatrix witness_mixture_sample(std::span<const WeightedBVector> mixture, std::size_t n, RandomSource& rng) {
    if (mixture.empty()) throw DomainError("witness_mixture_sample: empty mixture");
    const std::size_t d = mixture.front().b.size();
    if (d < 2) throw DomainError("witness_mixture_sample: d must be >= 2");
    double total = 0.0;
    for (const auto& wb : mixture) {
        if (wb.b.size() != d) throw DomainError("witness_mixture_sample: inconsistent dimensions");
        if (!(wb.weight >= 0.0)) throw DomainError("witness_mixture_sample: negative weight");
        total += wb.weight;
    }
    if (!(total > 0.0)) throw DomainError("witness_mixture_sample: weights sum to zero");
    std::vector<double> cumulative;
    double acc = 0.0;
    for (const auto& wb : mixture) cumulative.push_back(acc += wb.weight / total);
    cumulative.back() = 1.0;

    SampleMatrix m{n, d, std::vector<double>(n * d)};
    for (std::size_t i = 0; i < n; ++i) {
        const double pick = rng.uniform();
        const auto k = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), pick) -
                                                cumulative.begin());
        write_witness_row(mixture[std::min(k, mixture.size() - 1)].b, rng.uniform(), &m.data[i * d]);
    }
    return m;
}

}  // namespace concord
