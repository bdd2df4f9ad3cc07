#include "concord/compatibility.hpp"
#include "concord/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace concord {

namespace {

constexpr double kInvariantTol = 1e-12;

std::string entry_name(std::size_t i, std::size_t j) {
    std::ostringstream os;
    os << '(' << i + 1 << ',' << j + 1 << ')';
    return os.str();
}

}  // namespace

KappaMatrix::KappaMatrix(std::size_t d, std::vector<double> row_major) : d_(d), data_(std::move(row_major)) {
    if (d < 2) throw DomainError("kappa matrix: dimension must be at least 2");
    if (data_.size() != d * d) throw DomainError("kappa matrix: expected a square matrix");
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            const double x = at(i, j);
            if (!std::isfinite(x)) throw DomainError("kappa matrix: entry " + entry_name(i, j) + " is not finite");
            if (i == j && std::abs(x - 1.0) > kInvariantTol)
                throw DomainError("kappa matrix: unit diagonal violated at " + entry_name(i, j));
            if (i < j && std::abs(x - at(j, i)) > kInvariantTol)
                throw DomainError("kappa matrix: symmetry violated at " + entry_name(i, j));
            if (i != j && (x < -1.0 || x > 1.0))
                throw DomainError("kappa matrix: off-diagonal entry " + entry_name(i, j) + " outside [-1, 1]");
        }
    }
}

KappaMatrix KappaMatrix::identity(std::size_t d) { return equicorrelation(d, 0.0); }

KappaMatrix KappaMatrix::equicorrelation(std::size_t d, double rho) {
    std::vector<double> m(d * d, rho);
    for (std::size_t i = 0; i < d; ++i) m[i * d + i] = 1.0;
    return KappaMatrix(d, std::move(m));
}

KappaMatrix KappaMatrix::vertex(const BVector& b) {
    const std::size_t d = b.size();
    std::vector<double> m(d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) m[i * d + j] = b.sign_product(i, j);
    return KappaMatrix(d, std::move(m));
}

std::vector<double> KappaMatrix::upper_triangle() const {
    std::vector<double> out;
    out.reserve(d_ * (d_ - 1) / 2);
    for (std::size_t i = 0; i < d_; ++i)
        for (std::size_t j = i + 1; j < d_; ++j) out.push_back(at(i, j));
    return out;
}

std::string to_string(Membership m) {
    switch (m) {
        case Membership::Member: return "Member";
        case Membership::NonMember: return "NonMember";
        case Membership::Boundary: return "Boundary";
    }
    return "?";
}

std::string to_string(GammaClass g) {
    switch (g) {
        case GammaClass::Compatible: return "Compatible";
        case GammaClass::Incompatible: return "Incompatible";
        case GammaClass::Indeterminate: return "Indeterminate";
    }
    return "?";
}

ElliptopeVerdict in_elliptope(const KappaMatrix& p, double tol) {
    if (!(tol > 0.0)) throw DomainError("in_elliptope: tol must be positive");
    const double lambda = min_eigenvalue(p.data(), p.dim());
    Membership m = Membership::NonMember;
    if (lambda >= tol)
        m = Membership::Member;
    else if (std::abs(lambda) < tol)
        m = Membership::Boundary;
    return {m, lambda};
}

CutPolytopeVerdict in_cut_polytope(const KappaMatrix& p, double tol) {
    if (!(tol > 0.0)) throw DomainError("in_cut_polytope: tol must be positive");
    const std::size_t d = p.dim();
    if (d > kMaxCutPolytopeDim) {
        std::ostringstream os;
        os << "in_cut_polytope: d = " << d << " exceeds the supported maximum " << kMaxCutPolytopeDim
           << " (2^(d-1) LP columns)";
        throw CapacityError(os.str());
    }
    const auto vertices = enumerate_bvectors(d);
    LpFeasibilityProblem lp;
    lp.rows = d * (d - 1) / 2;
    lp.cols = vertices.size();
    lp.rhs = p.upper_triangle();
    lp.columns.reserve(lp.rows * lp.cols);
    for (const auto& b : vertices)
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i + 1; j < d; ++j) lp.columns.push_back(b.sign_product(i, j));

    const LpSolution sol = solve_feasibility(lp, tol);
    CutPolytopeVerdict out;
    out.residual = sol.residual;
    if (sol.feasible) {
        out.membership = Membership::Member;
        out.max_violation = sol.max_violation;
        for (std::size_t k = 0; k < vertices.size(); ++k)
            if (sol.weights[k] > 0.0) out.certificate.push_back({vertices[k], sol.weights[k]});
        // The returned certificate must reproduce P entrywise within tol.
        const KappaMatrix back = certificate_matrix(out.certificate);
        double err = 0.0;
        for (std::size_t i = 0; i < d * d; ++i) err = std::max(err, std::abs(back.data()[i] - p.data()[i]));
        out.max_violation = std::max(out.max_violation, err);
        if (err > tol) {
            std::ostringstream os;
            os << "in_cut_polytope: certificate re-substitution error " << err << " exceeds tol " << tol;
            throw NumericalError(os.str());
        }
    } else if (sol.residual <= 10.0 * tol) {
        out.membership = Membership::Boundary;
        out.max_violation = sol.max_violation;
    } else {
        out.membership = Membership::NonMember;
    }
    return out;
}

CompatibilityVerdict classify_gamma_matrix(const KappaMatrix& p, double tol) {
    CompatibilityVerdict v{in_elliptope(p, tol), in_cut_polytope(p, tol), GammaClass::Indeterminate, {}};
    if (v.cut_polytope.membership == Membership::Member) {
        v.gamma_class = GammaClass::Compatible;
    } else if (v.elliptope.membership == Membership::NonMember) {
        v.gamma_class = GammaClass::Incompatible;
    } else {
        v.note =
            "the matrix is a correlation matrix but not certified in the cut polytope; the cut polytope and the "
            "elliptope only bound the attainable set, which in general is strictly larger than the cut polytope, "
            "so the matrix may still be attainable (this is not a verdict of incompatibility)";
    }
    return v;
}

KappaMatrix certificate_matrix(std::span<const WeightedBVector> weights) {
    if (weights.empty()) throw DomainError("certificate: no vertices");
    const std::size_t d = weights.front().b.size();
    std::vector<double> m(d * d, 0.0);
    for (const auto& w : weights) {
        if (w.b.size() != d) throw DomainError("certificate: vertices differ in dimension");
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) m[i * d + j] += w.weight * w.b.sign_product(i, j);
    }
    for (std::size_t i = 0; i < d; ++i) m[i * d + i] = 1.0;
    // Rounding in the weights can push |entries| a hair past 1.
    for (double& x : m) x = std::clamp(x, -1.0, 1.0);
    return KappaMatrix(d, std::move(m));
}

EstimatedMatrix witness_matrix_roundtrip(std::span<const WeightedBVector> weights, const MeasureSpec& spec,
                                         std::size_t n, RandomSource& rng) {
    if (weights.empty()) throw DomainError("witness_matrix_roundtrip: empty certificate");
    double total = 0.0;
    for (const auto& w : weights) {
        if (!(w.weight >= 0.0)) throw DomainError("witness_matrix_roundtrip: negative weight");
        total += w.weight;
    }
    if (std::abs(total - 1.0) > 1e-9) throw DomainError("witness_matrix_roundtrip: weights must sum to 1");
    const SampleMatrix s = witness_mixture_sample(weights, n, rng);
    return estimate_kappa_matrix(s, spec);
}

EquicorrelationThresholds equicorrelation_thresholds(std::size_t d, double precision) {
    if (d < 2) throw DomainError("equicorrelation_thresholds: d must be at least 2");
    if (!(precision > 0.0)) throw DomainError("equicorrelation_thresholds: precision must be positive");
    EquicorrelationThresholds out{-1.0 / static_cast<double>(d - 1), std::nullopt};
    if (d > kMaxCutPolytopeDim) return out;

    auto inside = [d](double rho) {
        return in_cut_polytope(KappaMatrix::equicorrelation(d, rho)).membership != Membership::NonMember;
    };
    // The cut polytope sits inside the elliptope, so its threshold is in [elliptope_min, 0].
    double lo = out.elliptope_min;
    double hi = 0.0;
    if (inside(lo)) {
        out.cut_polytope_min = lo;
        return out;
    }
    while (hi - lo > precision) {
        const double mid = 0.5 * (lo + hi);
        (inside(mid) ? hi : lo) = mid;
    }
    out.cut_polytope_min = hi;
    return out;
}

}  // namespace concord
