#include "concord/concordance.hpp"
#include "concord/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

namespace concord {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

struct Scorer {
    double weight;
    Distribution g;
};

// A measure as a weighted average of G-transformed rank correlations. Atoms
// of a mixing measure below the rank resolution 1 / (n + 1) would leave every
// observation in the middle cell, so they are raised to that level.
std::vector<Scorer> scorers_for(const MeasureSpec& spec, std::size_t n) {
    const double floor_p = 1.0 / (static_cast<double>(n) + 1.0);
    auto three_point_mix = [floor_p](const std::vector<NuAtom>& atoms) {
        std::vector<Scorer> out;
        std::vector<double> ps;
        for (const auto& a : atoms) {
            if (!(a.weight > 0.0)) continue;
            const double p = std::max(a.p, floor_p);
            if (!ps.empty() && ps.back() == p) {
                out.back().weight += a.weight;
            } else {
                out.push_back({a.weight, Distribution::three_point(p)});
                ps.push_back(p);
            }
        }
        return out;
    };
    return std::visit(overloaded{
                          [](const measure::Spearman&) { return std::vector<Scorer>{{1.0, Distribution::uniform()}}; },
                          [](const measure::Blomqvist&) {
                              return std::vector<Scorer>{{1.0, Distribution::three_point(0.5)}};
                          },
                          [](const measure::BetaP& b) {
                              return std::vector<Scorer>{{1.0, Distribution::three_point(b.p)}};
                          },
                          [&](const measure::Gini&) { return three_point_mix(NuMeasure::gini().discretize()); },
                          [&](const measure::GeneralizedGini& g) { return three_point_mix(g.nu.discretize()); },
                          [](const measure::GTransformed& g) { return std::vector<Scorer>{{1.0, g.g}}; },
                      },
                      spec.variant());
}

// Rank levels u = r / (n + 1) and their mirrors (n + 1 - r) / (n + 1), the
// latter computed from n + 1 - r so reflected ranks swap the two exactly.
struct RankLevels {
    std::vector<double> u;
    std::vector<double> mirror;
};

RankLevels rank_levels(std::span<const double> ranks) {
    const double n_plus_1 = static_cast<double>(ranks.size()) + 1.0;
    RankLevels out{std::vector<double>(ranks.size()), std::vector<double>(ranks.size())};
    for (std::size_t i = 0; i < ranks.size(); ++i) {
        out.u[i] = ranks[i] / n_plus_1;
        out.mirror[i] = (n_plus_1 - ranks[i]) / n_plus_1;
    }
    return out;
}

// Scores (G^-(u) - G^-(mirror)) / 2: antisymmetric under reflection.
void score_levels(const Distribution& g, const RankLevels& levels, std::span<double> out) {
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = 0.5 * (quantile(g, levels.u[i]) - quantile(g, levels.mirror[i]));
}

// -1 for u <= p, 0 for p < u <= q, 1 above q (q = 1 - p); branch-free.
int three_point_level(double u, double p, double q) { return static_cast<int>(u > p) + static_cast<int>(u > q) - 1; }

[[noreturn]] void throw_degenerate(const char* what, bool first) {
    std::ostringstream os;
    os << what << ": transformed ranks have zero variance in the " << (first ? "first" : "second")
       << " margin (every observation falls in one cell of the transform); the measure cannot be estimated";
    throw NumericalError(os.str());
}

// Three-point scores take five values (twice the score lies in -2..2), so the
// moments are exact integers and the influence terms come from a 5 x 5 table.
double three_point_correlation(double p, const RankLevels& x, const RankLevels& y, double weight,
                               std::span<double> psi, const char* what) {
    const std::size_t n = x.u.size();
    const double q = 1.0 - p;
    std::int64_t sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const int a = three_point_level(x.u[i], p, q) - three_point_level(x.mirror[i], p, q);
        const int b = three_point_level(y.u[i], p, q) - three_point_level(y.mirror[i], p, q);
        sa += a;
        sb += b;
        saa += a * a;
        sbb += b * b;
        sab += a * b;
    }
    const auto nn = static_cast<std::int64_t>(n);
    const std::int64_t caa = saa * nn - sa * sa;
    const std::int64_t cbb = sbb * nn - sb * sb;
    const std::int64_t cab = sab * nn - sa * sb;
    if (caa <= 0 || cbb <= 0) throw_degenerate(what, caa <= 0);
    const double r = static_cast<double>(cab) / std::sqrt(static_cast<double>(caa) * static_cast<double>(cbb));

    const double dn = static_cast<double>(n);
    const double ma = static_cast<double>(sa) / dn;
    const double mb = static_cast<double>(sb) / dn;
    const double sda = std::sqrt(static_cast<double>(caa)) / dn;
    const double sdb = std::sqrt(static_cast<double>(cbb)) / dn;
    double table[5][5];
    for (int a = -2; a <= 2; ++a)
        for (int b = -2; b <= 2; ++b) {
            const double za = (a - ma) / sda;
            const double zb = (b - mb) / sdb;
            table[a + 2][b + 2] = weight * (za * zb - 0.5 * r * (za * za + zb * zb));
        }
    for (std::size_t i = 0; i < n; ++i) {
        const int a = three_point_level(x.u[i], p, q) - three_point_level(x.mirror[i], p, q);
        const int b = three_point_level(y.u[i], p, q) - three_point_level(y.mirror[i], p, q);
        psi[i] += table[a + 2][b + 2];
    }
    return r;
}

struct Correlation {
    double r;
};

// Pearson correlation of (a, b); accumulates weight * influence into psi.
Correlation pearson_with_influence(std::span<const double> a, std::span<const double> b, double weight,
                                   std::span<double> psi, const char* what) {
    const std::size_t n = a.size();
    double ma = 0.0;
    double mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double saa = 0.0;
    double sbb = 0.0;
    double sab = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        saa += da * da;
        sbb += db * db;
        sab += da * db;
    }
    if (!(saa > 0.0) || !(sbb > 0.0)) throw_degenerate(what, !(saa > 0.0));
    const double r = sab / std::sqrt(saa * sbb);
    // Influence of one observation on r: za*zb - r (za^2 + zb^2) / 2.
    const double sa = std::sqrt(saa / static_cast<double>(n));
    const double sb = std::sqrt(sbb / static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const double za = (a[i] - ma) / sa;
        const double zb = (b[i] - mb) / sb;
        psi[i] += weight * (za * zb - 0.5 * r * (za * za + zb * zb));
    }
    return {r};
}

double influence_std_error(std::span<const double> psi) {
    const double n = static_cast<double>(psi.size());
    double mean = 0.0;
    for (double x : psi) mean += x;
    mean /= n;
    double var = 0.0;
    for (double x : psi) var += (x - mean) * (x - mean);
    var /= n;
    return std::sqrt(var / n);
}

}  // namespace

Estimate estimate_from_ranks(std::span<const double> rank_x, std::span<const double> rank_y, const MeasureSpec& spec) {
    const std::size_t n = rank_x.size();
    if (rank_y.size() != n) throw DomainError("estimate: rank columns differ in length");
    if (n < 10) throw DomainError("estimate: need at least 10 observations");

    const RankLevels x = rank_levels(rank_x);
    const RankLevels y = rank_levels(rank_y);
    std::vector<double> psi(n, 0.0);
    std::vector<double> a;
    std::vector<double> b;
    double value = 0.0;
    const std::string what = "estimate " + spec.name();
    // Integer moments stay exact while saa * n fits in 64 bits.
    const bool exact_moments = n < (std::size_t{1} << 29);
    for (const auto& s : scorers_for(spec, n)) {
        const auto* t = std::get_if<ThreePoint>(&s.g.variant());
        if (t && exact_moments) {
            value += s.weight * three_point_correlation(t->p, x, y, s.weight, psi, what.c_str());
            continue;
        }
        a.resize(n);
        b.resize(n);
        score_levels(s.g, x, a);
        score_levels(s.g, y, b);
        value += s.weight * pearson_with_influence(a, b, s.weight, psi, what.c_str()).r;
    }
    return {std::clamp(value, -1.0, 1.0), influence_std_error(psi), n, EstimateMethod::PlugIn};
}

Estimate estimate(const Copula& data, const MeasureSpec& spec) {
    const auto* e = std::get_if<Empirical>(&data.variant());
    if (!e) throw DomainError("estimate: requires an empirical copula (use evaluate for parametric copulas)");
    const std::size_t n = e->points.size();
    std::vector<double> xs(n);
    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = e->points[i][0];
        ys[i] = e->points[i][1];
    }
    return estimate_from_ranks(average_ranks(xs), average_ranks(ys), spec);
}

Estimate g_transformed_rho_monte_carlo(const Copula& c, const Distribution& g, std::size_t n, RandomSource& rng) {
    if (!validate(g).empty()) throw DomainError("g_transformed_rho_monte_carlo: distribution is not concordance-inducing");
    if (n < 1000) throw DomainError("g_transformed_rho_monte_carlo: need at least 1000 draws");
    const auto draws = sample(c, n, rng);
    std::vector<double> a(n);
    std::vector<double> b(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = quantile(g, draws[i][0]);
        b[i] = quantile(g, draws[i][1]);
    }
    std::vector<double> psi(n, 0.0);
    const auto corr = pearson_with_influence(a, b, 1.0, psi, "g_transformed_rho_monte_carlo");
    return {std::clamp(corr.r, -1.0, 1.0), influence_std_error(psi), n, EstimateMethod::MonteCarlo};
}

EstimatedMatrix estimate_kappa_matrix(std::span<const std::vector<double>> columns, const MeasureSpec& spec) {
    const std::size_t d = columns.size();
    if (d < 2) throw DomainError("estimate_kappa_matrix: need at least two columns");
    std::vector<std::vector<double>> ranks;
    ranks.reserve(d);
    for (const auto& col : columns) {
        if (col.size() != columns.front().size()) throw DomainError("estimate_kappa_matrix: ragged columns");
        ranks.push_back(average_ranks(col));
    }
    EstimatedMatrix out{d, std::vector<double>(d * d, 0.0), std::vector<double>(d * d, 0.0)};
    for (std::size_t i = 0; i < d; ++i) {
        out.values[i * d + i] = 1.0;
        for (std::size_t j = i + 1; j < d; ++j) {
            const auto est = estimate_from_ranks(ranks[i], ranks[j], spec);
            out.values[i * d + j] = out.values[j * d + i] = est.value;
            out.std_errors[i * d + j] = out.std_errors[j * d + i] = est.std_error.value_or(0.0);
        }
    }
    return out;
}

EstimatedMatrix estimate_kappa_matrix(const SampleMatrix& sample, const MeasureSpec& spec) {
    std::vector<std::vector<double>> columns;
    columns.reserve(sample.cols);
    for (std::size_t j = 0; j < sample.cols; ++j) columns.push_back(sample.column(j));
    return estimate_kappa_matrix(columns, spec);
}

}  // namespace concord
