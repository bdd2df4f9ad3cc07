#include "concord/error.hpp"
#include "concord/numerics.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

namespace concord {

double min_eigenvalue(std::span<const double> row_major, std::size_t d) {
    if (d == 0 || row_major.size() != d * d) throw DomainError("min_eigenvalue: expected a non-empty d x d matrix");
    Eigen::MatrixXd m(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            const double a = row_major[i * d + j];
            if (!std::isfinite(a)) throw DomainError("min_eigenvalue: non-finite entry");
            if (std::abs(a - row_major[j * d + i]) > 1e-12) {
                std::ostringstream os;
                os << "min_eigenvalue: matrix is not symmetric at (" << i << ", " << j << ")";
                throw DomainError(os.str());
            }
            m(i, j) = a;
        }
    }
    // Only the lower triangle is read.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalError("min_eigenvalue: eigen decomposition failed");
    return solver.eigenvalues().minCoeff();
}

}  // namespace concord
