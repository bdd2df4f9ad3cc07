#pragma once

// Compatibility of pairwise concordance matrices: membership in the elliptope
// (correlation matrices) and in the cut polytope (convex hull of the sign
// matrices (2b - 1)(2b - 1)^T), and the resulting classification for
// generalized Gini's gamma, which is sandwiched between the two sets.

#include "concord/concordance.hpp"
#include "concord/copulas.hpp"
#include "concord/numerics.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace concord {

inline constexpr double kMembershipTol = 1e-9;
inline constexpr std::size_t kMaxCutPolytopeDim = 16;

class KappaMatrix {
public:
    // Row-major d x d. Throws DomainError naming the violated invariant:
    // symmetric and unit diagonal within 1e-12, off-diagonals in [-1, 1].
    KappaMatrix(std::size_t d, std::vector<double> row_major);

    static KappaMatrix identity(std::size_t d);
    static KappaMatrix equicorrelation(std::size_t d, double rho);
    // (2b - 1)(2b - 1)^T.
    static KappaMatrix vertex(const BVector& b);

    std::size_t dim() const { return d_; }
    double at(std::size_t i, std::size_t j) const { return data_[i * d_ + j]; }
    const std::vector<double>& data() const { return data_; }
    // Entries (i, j) with i < j, row by row.
    std::vector<double> upper_triangle() const;

private:
    std::size_t d_;
    std::vector<double> data_;
};

enum class Membership { Member, NonMember, Boundary };

std::string to_string(Membership m);

struct ElliptopeVerdict {
    Membership membership;
    double min_eigenvalue;
};

struct CutPolytopeVerdict {
    Membership membership;
    // Nonzero weights of the convex certificate; empty for NonMember.
    std::vector<WeightedBVector> certificate;
    // Phase-one L1 infeasibility of the membership LP.
    double residual = 0.0;
    // Re-substituted max |sum_b w_b P^(b) - P| of the certificate.
    double max_violation = 0.0;
};

enum class GammaClass { Compatible, Incompatible, Indeterminate };

std::string to_string(GammaClass g);

struct CompatibilityVerdict {
    ElliptopeVerdict elliptope;
    CutPolytopeVerdict cut_polytope;
    GammaClass gamma_class;
    std::string note;  // set for Indeterminate
};

// Member iff min eigenvalue >= tol, Boundary iff |min eigenvalue| < tol.
ElliptopeVerdict in_elliptope(const KappaMatrix& p, double tol = kMembershipTol);

// Feasibility LP over the 2^(d-1) vertices. Member when the certificate
// re-substitutes within tol, Boundary when the infeasibility is within
// 10 tol, NonMember otherwise. Throws CapacityError for d > 16.
CutPolytopeVerdict in_cut_polytope(const KappaMatrix& p, double tol = kMembershipTol);

// Compatible iff the cut polytope verdict is Member; Incompatible iff the
// elliptope verdict is NonMember; Indeterminate otherwise.
CompatibilityVerdict classify_gamma_matrix(const KappaMatrix& p, double tol = kMembershipTol);

// Samples the witness mixture sum_b w_b C^(b) and estimates every pairwise
// measure. Weights must be nonnegative and sum to 1 within 1e-9.
EstimatedMatrix witness_matrix_roundtrip(std::span<const WeightedBVector> weights, const MeasureSpec& spec,
                                         std::size_t n, RandomSource& rng);

// sum_b w_b P^(b).
KappaMatrix certificate_matrix(std::span<const WeightedBVector> weights);

struct EquicorrelationThresholds {
    double elliptope_min;
    std::optional<double> cut_polytope_min;  // absent when d > 16
};

// Smallest rho with P(rho) in each set: -1/(d-1) exactly, and a bisection
// over in_cut_polytope to `precision`.
EquicorrelationThresholds equicorrelation_thresholds(std::size_t d, double precision = 1e-7);

}  // namespace concord
