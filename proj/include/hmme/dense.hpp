#ifndef HMME_DENSE_HPP
#define HMME_DENSE_HPP

#include <Eigen/Dense>
#include <string>

#include "hmme/errors.hpp"
#include "hmme/model.hpp"

namespace hmme {

/// Brute-force ground truth for small problems: the full (p+n) x (p+n)
/// Henderson system with the incidence matrix Z materialized. Exists for
/// verification only; kept deliberately simple and independent of the
/// fast path.
template <typename Scalar>
struct DenseSystem {
    MatrixX<Scalar> a;  // [[X'X, X'Z], [Z'X, Z'Z + lambda*I]]
    VectorX<Scalar> c;  // [X'Y, Z'Y]
};

inline constexpr Index kDenseDimensionCap = 2000;

/// Builds A and c by explicit matrix products over the stacked design
/// [X Z]. Guarded at p + n <= 2000 so the oracle can never dominate a
/// test run.
template <typename Scalar>
DenseSystem<Scalar> dense_assemble(const GroupedDesign<Scalar>& design,
                                   VarianceRatio<Scalar> ratio = VarianceRatio<Scalar>{}) {
    const Index n = design.group_count();
    const Index p = design.covariate_count();
    if (p + n > kDenseDimensionCap) {
        throw SizeGuardError("dense system dimension " + std::to_string(p + n) +
                             " exceeds cap of " + std::to_string(kDenseDimensionCap));
    }
    const Index total = design.total_observations();

    // Stack [X Z] with Z as the block-indicator matrix.
    MatrixX<Scalar> stacked = MatrixX<Scalar>::Zero(total, p + n);
    VectorX<Scalar> y(total);
    Index row = 0;
    for (Index i = 0; i < n; ++i) {
        const auto& blk = design.group(i);
        const Index m_i = blk.covariates.rows();
        stacked.block(row, 0, m_i, p) = blk.covariates;
        stacked.col(p + i).segment(row, m_i).setOnes();
        y.segment(row, m_i) = blk.responses;
        row += m_i;
    }

    DenseSystem<Scalar> system;
    system.a = stacked.transpose() * stacked;
    system.a.bottomRightCorner(n, n).diagonal().array() += ratio.value();
    system.c = stacked.transpose() * y;
    return system;
}

/// Solves A*delta = c by textbook Gaussian elimination with partial
/// pivoting on the augmented matrix. Independent of the factorizations
/// used by the fast path.
template <typename Scalar>
VectorX<Scalar> dense_solve(const DenseSystem<Scalar>& system) {
    const Index dim = system.a.rows();
    MatrixX<Scalar> work(dim, dim + 1);
    work.leftCols(dim) = system.a;
    work.col(dim) = system.c;

    const Scalar tol =
        Scalar(1e-12) * system.a.cwiseAbs().rowwise().sum().maxCoeff();

    for (Index k = 0; k < dim; ++k) {
        Index pivot_row = k;
        Scalar pivot_mag = std::abs(work(k, k));
        for (Index r = k + 1; r < dim; ++r) {
            const Scalar mag = std::abs(work(r, k));
            if (mag > pivot_mag) {
                pivot_mag = mag;
                pivot_row = r;
            }
        }
        if (!(pivot_mag > tol)) {
            throw SingularSystemError("dense system is singular at pivot " +
                                      std::to_string(k + 1));
        }
        if (pivot_row != k) {
            work.row(k).swap(work.row(pivot_row));
        }
        for (Index r = k + 1; r < dim; ++r) {
            const Scalar factor = work(r, k) / work(k, k);
            if (factor != Scalar(0)) {
                work.row(r).tail(dim - k) -= factor * work.row(k).tail(dim - k);
            }
            work(r, k) = Scalar(0);
        }
    }

    VectorX<Scalar> delta(dim);
    for (Index k = dim - 1; k >= 0; --k) {
        Scalar acc = work(k, dim);
        for (Index j = k + 1; j < dim; ++j) {
            acc -= work(k, j) * delta(j);
        }
        delta(k) = acc / work(k, k);
    }
    return delta;
}

}  // namespace hmme

#endif  // HMME_DENSE_HPP
