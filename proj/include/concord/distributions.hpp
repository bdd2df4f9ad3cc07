#pragma once

// Concordance-inducing distributions, described by their quantile functions,
// and the decision procedure for transform pairs (g1, g2) whose transformed
// correlation rho(g1(U), g2(V)) is a measure of concordance.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace concord {

// A function on (0,1) given by values at strictly increasing probability
// nodes t_1 < ... < t_m. It is a left-continuous step function: value_i holds
// on (c_{i-1}, c_i] where c_0 = 0, c_m = 1 and the interior cell boundaries are
// the midpoints between neighbouring nodes. A node grid that is symmetric
// about 1/2 therefore yields symmetric cells.
class TabulatedFunction {
public:
    TabulatedFunction(std::vector<double> nodes, std::vector<double> values);

    // Samples f at the nodes.
    template <class F>
    static TabulatedFunction from(std::vector<double> nodes, F&& f) {
        std::vector<double> values;
        values.reserve(nodes.size());
        for (double t : nodes) values.push_back(f(t));
        return TabulatedFunction(std::move(nodes), std::move(values));
    }

    // (i - 1/2) / m for i = 1..m; symmetric and free of rational atom boundaries k/m.
    static std::vector<double> midpoint_grid(std::size_t m);

    double operator()(double u) const;
    std::size_t size() const { return nodes_.size(); }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& values() const { return values_; }
    // Upper cell boundaries c_1..c_m (c_m = 1).
    const std::vector<double>& cell_bounds() const { return bounds_; }
    // Cell probabilities c_i - c_{i-1}.
    std::vector<double> cell_weights() const;

    bool nondecreasing() const;
    bool nonincreasing() const;

private:
    std::vector<double> nodes_;
    std::vector<double> values_;
    std::vector<double> bounds_;
};

// Two-column CSV: probability node, value. A non-numeric first line is
// treated as a header. Throws DomainError with the offending line number.
TabulatedFunction load_tabulated_csv(const std::filesystem::path& path);

struct Uniform01 {};
struct StandardGaussian {};
struct ThreePoint {
    double p = 0.5;  // P(X = -1) = P(X = 1) = p, P(X = 0) = 1 - 2p
};
struct Tabulated {
    TabulatedFunction quantile;  // nondecreasing values
};

class ConcordanceInducingDistribution {
public:
    using Variant = std::variant<Uniform01, StandardGaussian, ThreePoint, Tabulated>;

    static ConcordanceInducingDistribution uniform();
    static ConcordanceInducingDistribution standard_gaussian();
    // p in (0, 1/2]; p = 1/2 is the symmetric Bernoulli on {-1, 1}.
    static ConcordanceInducingDistribution three_point(double p);
    // Values must be nondecreasing. Membership in the concordance-inducing
    // class is not enforced here; see validate().
    static ConcordanceInducingDistribution tabulated(TabulatedFunction quantile);

    const Variant& variant() const { return variant_; }
    double mean() const { return mean_; }
    double variance() const { return variance_; }
    std::string name() const;

private:
    ConcordanceInducingDistribution(Variant v, double mean, double variance)
        : variant_(std::move(v)), mean_(mean), variance_(variance) {}

    Variant variant_;
    double mean_;
    double variance_;
};

using Distribution = ConcordanceInducingDistribution;

// Generalized inverse G^-(u). Unbounded variants return -inf at 0 and +inf
// at 1; bounded ones return their extreme values there.
double quantile(const Distribution& g, double u);

struct Violation {
    std::string property;  // "nondegenerate", "symmetric", "finite second moment"
    std::string detail;
};

// Empty when g is concordance-inducing.
std::vector<Violation> validate(const Distribution& g);

// g1 and g2 tabulated on one common probability grid.
struct TransformPair {
    TabulatedFunction g1;
    TabulatedFunction g2;

    TransformPair(TabulatedFunction first, TabulatedFunction second);
};

enum class TransformVerdictKind { IsMeasureOfConcordance, NotMonotone, DistributionsDiffer, NotSymmetric };

struct TransformVerdict {
    TransformVerdictKind kind;
    // Set for IsMeasureOfConcordance: the standardized common quantile.
    std::optional<Distribution> inducer;
    // Builtin distribution the inducer matches after standardization, if any
    // ("uniform", "gaussian", "three-point(p)").
    std::optional<std::string> recognized;
    std::string detail;
};

std::string to_string(TransformVerdictKind kind);

// Checks, in order: joint monotonicity (both nondecreasing or both
// nonincreasing), equality of the two induced distributions up to
// location-scale (max standardized deviation <= 1e-6), and symmetry of the
// common standardized quantile.
TransformVerdict check_transform_pair(const TransformPair& t);

}  // namespace concord
