#pragma once

// Measures of concordance of degree one: G-transformed rank correlations,
// generalized Blomqvist's beta, Gini's gamma and generalized Gini's gamma.
// Population values come from closed forms or quadrature on a Copula; sample
// values are plug-in estimates on ranks.

#include "concord/copulas.hpp"
#include "concord/distributions.hpp"
#include "concord/numerics.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace concord {

struct NuAtom {
    double p = 0.5;
    double weight = 1.0;
};

// Mixing measure on (0, 1/2] of the correlation mixture representation
// gamma_nu(C) = int beta_p(C) dnu(p).
class NuMeasure {
public:
    struct Atoms {
        std::vector<NuAtom> atoms;
    };
    struct Density {
        std::string name;
        std::function<double(double)> f;
        std::vector<double> breaks;  // kinks of f, passed to the quadrature
    };
    using Variant = std::variant<Atoms, Density>;

    // Each p in (0, 1/2], weights nonnegative summing to 1 within 1e-10.
    static NuMeasure atoms(std::vector<NuAtom> atoms);
    static NuMeasure point_mass(double p);
    // f(p) = 8p: the mixing density of Gini's gamma.
    static NuMeasure gini();
    // Piecewise-linear density through (p_i, f_i), constant beyond the end
    // nodes, rescaled to unit mass. Nodes in (0, 1/2], strictly increasing.
    static NuMeasure density_table(std::vector<double> nodes, std::vector<double> values);

    const Variant& variant() const { return variant_; }
    std::string describe() const;

    // 64 equal-mass slices represented by their conditional means
    // (identity for Atoms).
    std::vector<NuAtom> discretize(std::size_t slices = 64) const;

private:
    explicit NuMeasure(Variant v) : variant_(std::move(v)) {}
    Variant variant_;
};

namespace measure {
struct Spearman {};
struct Blomqvist {};
struct BetaP {
    double p = 0.5;
};
struct Gini {};
struct GeneralizedGini {
    NuMeasure nu;
};
struct GTransformed {
    Distribution g;
};
}  // namespace measure

class MeasureSpec {
public:
    using Variant = std::variant<measure::Spearman, measure::Blomqvist, measure::BetaP, measure::Gini,
                                 measure::GeneralizedGini, measure::GTransformed>;

    static MeasureSpec spearman() { return MeasureSpec(measure::Spearman{}); }
    static MeasureSpec blomqvist() { return MeasureSpec(measure::Blomqvist{}); }
    static MeasureSpec beta(double p);
    static MeasureSpec gini() { return MeasureSpec(measure::Gini{}); }
    static MeasureSpec generalized_gini(NuMeasure nu) { return MeasureSpec(measure::GeneralizedGini{std::move(nu)}); }
    // Throws DomainError when g is not concordance-inducing.
    static MeasureSpec g_transformed(Distribution g);

    const Variant& variant() const { return variant_; }
    std::string name() const;

private:
    explicit MeasureSpec(Variant v) : variant_(std::move(v)) {}
    Variant variant_;
};

enum class EstimateMethod { ClosedForm, Quadrature, PlugIn, MonteCarlo };

std::string to_string(EstimateMethod m);

struct Estimate {
    double value = 0.0;
    std::optional<double> std_error;
    std::optional<std::size_t> n;
    EstimateMethod method = EstimateMethod::ClosedForm;
};

// [C(p,p) + C(p,1-p) + C(1-p,p) + C(1-p,1-p) - 1] / (2p).
double beta_p(const Copula& c, double p);

// 12 int C dPi - 3 over the unit square.
double spearman_rho(const Copula& c, const QuadratureSpec& spec = kAreaQuadrature);

// 4 int C(u,u) du + 4 int C(u,1-u) du - 2.
double gini_gamma(const Copula& c, const QuadratureSpec& spec = kLineQuadrature);

double generalized_gini_gamma(const Copula& c, const NuMeasure& nu, const QuadratureSpec& spec = kLineQuadrature);

// (4/pi) arcsin([sqrt((1+rho)(3+rho)) - sqrt((1-rho)(3-rho))] / 4).
double gaussian_gini_closed_form(double rho);

// rho(G^-(U), G^-(V)) for (U,V) ~ C, deterministic:
//   Uniform01        -> spearman_rho (quadrature)
//   ThreePoint(p)    -> beta_p (closed form)
//   StandardGaussian -> Hoeffding's covariance integral in normal scores (quadrature)
//   Tabulated        -> Hoeffding's identity summed exactly over the quantile's jumps
// Throws DomainError when g is not concordance-inducing.
Estimate g_transformed_rho(const Copula& c, const Distribution& g, const QuadratureSpec& area = kAreaQuadrature);

// Monte Carlo route: sample n pairs from C, correlate G^-(U) with G^-(V).
// Requires n >= 1000. Throws NumericalError on a zero-variance sample.
Estimate g_transformed_rho_monte_carlo(const Copula& c, const Distribution& g, std::size_t n, RandomSource& rng);

// Population value kappa(C). Empirical copulas are routed to estimate().
Estimate evaluate(const Copula& c, const MeasureSpec& spec, const QuadratureSpec& line = kLineQuadrature,
                  const QuadratureSpec& area = kAreaQuadrature);

// Plug-in estimate on an empirical copula: the points are re-ranked (ties
// averaged), mapped to r / (n + 1) and transformed by the measure's quantile
// antisymmetrized around 1/2; the estimate is the Pearson correlation of the
// transformed pairs (a nu-weighted average of those for Gini-type measures).
// Requires n >= 10. Standard errors come from the delta method.
Estimate estimate(const Copula& data, const MeasureSpec& spec);

// Same estimator on two columns of average ranks (1-based) of length n.
Estimate estimate_from_ranks(std::span<const double> rank_x, std::span<const double> rank_y, const MeasureSpec& spec);

struct EstimatedMatrix {
    std::size_t d = 0;
    std::vector<double> values;      // row-major, unit diagonal
    std::vector<double> std_errors;  // row-major, zero diagonal
};

// Pairwise plug-in estimates over the columns of a sample.
EstimatedMatrix estimate_kappa_matrix(std::span<const std::vector<double>> columns, const MeasureSpec& spec);
EstimatedMatrix estimate_kappa_matrix(const SampleMatrix& sample, const MeasureSpec& spec);

}  // namespace concord
