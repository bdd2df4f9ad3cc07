#include "concord/concordance.hpp"

#include "concord/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace concord {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

// Normal scores beyond this are treated as the tails of R; Phi(-9) ~ 1e-19.
constexpr double kNormalScoreRange = 9.0;

std::string format(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

void require_p(double p, const char* who) {
    if (!(p > 0.0 && p <= 0.5)) throw DomainError(std::string(who) + ": p must lie in (0, 1/2]");
}

void require_concordance_inducing(const Distribution& g) {
    const auto violations = validate(g);
    if (!violations.empty())
        throw DomainError("distribution " + g.name() + " is not concordance-inducing: " + violations.front().property +
                          " (" + violations.front().detail + ")");
}

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

// Piecewise-linear interpolation, flat beyond the end nodes.
double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs.begin());
    const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return ys[i - 1] + t * (ys[i] - ys[i - 1]);
}

// Cov(G^-(U), G^-(V)) for a step quantile, from Hoeffding's identity: the
// distribution function is flat at level c_i between consecutive values, so
// the double integral collapses to a sum over pairs of jumps.
double step_hoeffding_covariance(const Copula& c, const TabulatedFunction& q) {
    std::vector<double> jumps;
    std::vector<double> levels;
    const auto& v = q.values();
    const auto& bounds = q.cell_bounds();
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        const double jump = v[i + 1] - v[i];
        if (jump != 0.0) {
            jumps.push_back(jump);
            levels.push_back(bounds[i]);
        }
    }
    double cov = 0.0;
    for (std::size_t i = 0; i < jumps.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < jumps.size(); ++j)
            row += jumps[j] * (eval(c, levels[i], levels[j]) - levels[i] * levels[j]);
        cov += jumps[i] * row;
    }
    return cov;
}

}  // namespace

// ----------------------------------------------------------------------------
// NuMeasure

NuMeasure NuMeasure::atoms(std::vector<NuAtom> atoms) {
    if (atoms.empty()) throw DomainError("nu measure: needs at least one atom");
    double total = 0.0;
    for (const auto& a : atoms) {
        require_p(a.p, "nu measure atom");
        if (!(a.weight >= 0.0) || !std::isfinite(a.weight)) throw DomainError("nu measure: atom weights must be >= 0");
        total += a.weight;
    }
    if (std::abs(total - 1.0) > 1e-10) throw DomainError("nu measure: atom weights must sum to 1");
    return NuMeasure(Atoms{std::move(atoms)});
}

NuMeasure NuMeasure::point_mass(double p) { return atoms({{p, 1.0}}); }

NuMeasure NuMeasure::gini() { return NuMeasure(Density{"gini", [](double p) { return 8.0 * p; }, {}}); }

NuMeasure NuMeasure::density_table(std::vector<double> nodes, std::vector<double> values) {
    if (nodes.size() < 2 || nodes.size() != values.size())
        throw DomainError("nu density table: needs at least two (p, f) rows");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        require_p(nodes[i], "nu density table node");
        if (i > 0 && !(nodes[i] > nodes[i - 1])) throw DomainError("nu density table: nodes must be increasing");
        if (!(values[i] >= 0.0) || !std::isfinite(values[i]))
            throw DomainError("nu density table: density values must be finite and >= 0");
    }
    auto raw = [nodes, values](double p) { return interpolate(nodes, values, p); };
    const double mass = integrate(raw, 0.0, 0.5, {8, 1, 0.0}, nodes);
    if (!(mass > 0.0)) throw DomainError("nu density table: density has zero mass");
    std::vector<double> scaled = values;
    for (auto& v : scaled) v /= mass;
    auto f = [nodes, scaled](double p) { return interpolate(nodes, scaled, p); };
    return NuMeasure(Density{"table(" + std::to_string(nodes.size()) + " nodes)", std::move(f), nodes});
}

std::string NuMeasure::describe() const {
    return std::visit(overloaded{
                          [](const Atoms& a) {
                              std::string s = "atoms{";
                              for (std::size_t i = 0; i < a.atoms.size(); ++i)
                                  s += (i ? ", " : "") + format(a.atoms[i].p) + ":" + format(a.atoms[i].weight);
                              return s + "}";
                          },
                          [](const Density& d) { return "density(" + d.name + ")"; },
                      },
                      variant_);
}

std::vector<NuAtom> NuMeasure::discretize(std::size_t slices) const {
    if (slices < 1) throw DomainError("nu discretization: slices must be >= 1");
    if (const auto* a = std::get_if<Atoms>(&variant_)) return a->atoms;
    const auto& d = std::get<Density>(variant_);
    const QuadratureSpec spec{16, 1, 0.0};
    auto cdf = [&](double x) { return integrate(d.f, 0.0, x, spec, d.breaks); };
    const double total = cdf(0.5);

    std::vector<double> cuts{0.0};
    for (std::size_t j = 1; j < slices; ++j) {
        const double target = total * static_cast<double>(j) / static_cast<double>(slices);
        double lo = cuts.back();
        double hi = 0.5;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (cdf(mid) < target ? lo : hi) = mid;
        }
        cuts.push_back(0.5 * (lo + hi));
    }
    cuts.push_back(0.5);

    std::vector<NuAtom> out;
    out.reserve(slices);
    for (std::size_t j = 0; j < slices; ++j) {
        const double mass = integrate(d.f, cuts[j], cuts[j + 1], spec, d.breaks);
        const double first = integrate([&](double p) { return p * d.f(p); }, cuts[j], cuts[j + 1], spec, d.breaks);
        const double p = mass > 0.0 ? first / mass : 0.5 * (cuts[j] + cuts[j + 1]);
        out.push_back({std::clamp(p, std::nextafter(0.0, 1.0), 0.5), 1.0 / static_cast<double>(slices)});
    }
    return out;
}

// ----------------------------------------------------------------------------
// MeasureSpec

MeasureSpec MeasureSpec::beta(double p) {
    require_p(p, "generalized Blomqvist's beta");
    return MeasureSpec(measure::BetaP{p});
}

MeasureSpec MeasureSpec::g_transformed(Distribution g) {
    require_concordance_inducing(g);
    return MeasureSpec(measure::GTransformed{std::move(g)});
}

std::string MeasureSpec::name() const {
    return std::visit(overloaded{
                          [](const measure::Spearman&) -> std::string { return "spearman"; },
                          [](const measure::Blomqvist&) -> std::string { return "blomqvist"; },
                          [](const measure::BetaP& b) { return "beta(" + format(b.p) + ")"; },
                          [](const measure::Gini&) -> std::string { return "gini"; },
                          [](const measure::GeneralizedGini& g) { return "generalized-gini(" + g.nu.describe() + ")"; },
                          [](const measure::GTransformed& g) { return "g-transformed(" + g.g.name() + ")"; },
                      },
                      variant_);
}

std::string to_string(EstimateMethod m) {
    switch (m) {
        case EstimateMethod::ClosedForm: return "closed-form";
        case EstimateMethod::Quadrature: return "quadrature";
        case EstimateMethod::PlugIn: return "plug-in";
        case EstimateMethod::MonteCarlo: return "monte-carlo";
    }
    return "?";
}

// ----------------------------------------------------------------------------
// Population measures

double beta_p(const Copula& c, double p) {
    require_p(p, "beta_p");
    const double q = 1.0 - p;
    const double sum = eval(c, p, p) + eval(c, p, q) + eval(c, q, p) + eval(c, q, q);
    return (sum - 1.0) / (2.0 * p);
}

double spearman_rho(const Copula& c, const QuadratureSpec& spec) {
    const double mass = integrate_square([&](double u, double v) { return eval(c, u, v); }, 0.0, 1.0, spec);
    return 12.0 * mass - 3.0;
}

double gini_gamma(const Copula& c, const QuadratureSpec& spec) {
    const double kink[] = {0.5};
    const double diag = integrate([&](double u) { return eval(c, u, u); }, 0.0, 1.0, spec, kink);
    const double anti = integrate([&](double u) { return eval(c, u, 1.0 - u); }, 0.0, 1.0, spec, kink);
    return 4.0 * diag + 4.0 * anti - 2.0;
}

double generalized_gini_gamma(const Copula& c, const NuMeasure& nu, const QuadratureSpec& spec) {
    return std::visit(overloaded{
                          [&](const NuMeasure::Atoms& a) {
                              double s = 0.0;
                              for (const auto& atom : a.atoms) s += atom.weight * beta_p(c, atom.p);
                              return s;
                          },
                          [&](const NuMeasure::Density& d) {
                              return integrate([&](double p) { return beta_p(c, p) * d.f(p); }, 0.0, 0.5, spec,
                                               d.breaks);
                          },
                      },
                      nu.variant());
}

double gaussian_gini_closed_form(double rho) {
    if (!(rho >= -1.0 && rho <= 1.0)) throw DomainError("gaussian_gini_closed_form: rho must lie in [-1, 1]");
    const double arg = (std::sqrt((1.0 + rho) * (3.0 + rho)) - std::sqrt((1.0 - rho) * (3.0 - rho))) / 4.0;
    return 4.0 / std::numbers::pi * std::asin(std::clamp(arg, -1.0, 1.0));
}

Estimate g_transformed_rho(const Copula& c, const Distribution& g, const QuadratureSpec& area) {
    require_concordance_inducing(g);
    return std::visit(
        overloaded{
            [&](const Uniform01&) {
                return Estimate{clamp_unit(spearman_rho(c, area)), std::nullopt, std::nullopt,
                                EstimateMethod::Quadrature};
            },
            [&](const ThreePoint& t) {
                return Estimate{clamp_unit(beta_p(c, t.p)), std::nullopt, std::nullopt, EstimateMethod::ClosedForm};
            },
            [&](const StandardGaussian&) {
                // Cov(Z1, Z2) = int int C(Phi(x), Phi(y)) - Phi(x) Phi(y) dx dy; Var(Z) = 1.
                auto integrand = [&](double x, double y) {
                    const double u = normal_cdf(x);
                    const double v = normal_cdf(y);
                    return eval(c, u, v) - u * v;
                };
                const double cov = integrate_square(integrand, -kNormalScoreRange, kNormalScoreRange, area);
                return Estimate{clamp_unit(cov), std::nullopt, std::nullopt, EstimateMethod::Quadrature};
            },
            [&](const Tabulated& t) {
                const double cov = step_hoeffding_covariance(c, t.quantile);
                const double var = step_hoeffding_covariance(Copula::comonotone(), t.quantile);
                return Estimate{clamp_unit(cov / var), std::nullopt, std::nullopt, EstimateMethod::ClosedForm};
            },
        },
        g.variant());
}

Estimate evaluate(const Copula& c, const MeasureSpec& spec, const QuadratureSpec& line, const QuadratureSpec& area) {
    if (c.is_empirical()) return estimate(c, spec);
    auto closed = [](double v) { return Estimate{clamp_unit(v), std::nullopt, std::nullopt, EstimateMethod::ClosedForm}; };
    auto quad = [](double v) { return Estimate{clamp_unit(v), std::nullopt, std::nullopt, EstimateMethod::Quadrature}; };
    return std::visit(overloaded{
                          [&](const measure::Spearman&) { return quad(spearman_rho(c, area)); },
                          [&](const measure::Blomqvist&) { return closed(beta_p(c, 0.5)); },
                          [&](const measure::BetaP& b) { return closed(beta_p(c, b.p)); },
                          [&](const measure::Gini&) { return quad(gini_gamma(c, line)); },
                          [&](const measure::GeneralizedGini& g) {
                              const double v = generalized_gini_gamma(c, g.nu, line);
                              return std::holds_alternative<NuMeasure::Atoms>(g.nu.variant()) ? closed(v) : quad(v);
                          },
                          [&](const measure::GTransformed& g) { return g_transformed_rho(c, g.g, area); },
                      },
                      spec.variant());
}

}  // namespace concord
