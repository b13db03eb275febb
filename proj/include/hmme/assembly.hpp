#ifndef HMME_ASSEMBLY_HPP
#define HMME_ASSEMBLY_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <thread>
#include <vector>

#include "hmme/errors.hpp"
#include "hmme/model.hpp"

namespace hmme {

/// Sufficient statistics of the Henderson system for a random-intercept
/// model. Everything the solver needs; the incidence matrix Z is never
/// materialized.
///
///   xtx      = X'X                  (p x p)
///   ztx      = Z'X, row i is the within-group covariate sum  (n x p)
///   zty      = Z'Y, entry i is the within-group response sum (n)
///   xty      = X'Y                  (p)
///   ztz_diag = diagonal of Z'Z + lambda*I, entry i = m_i + lambda (n)
template <typename Scalar>
struct HendersonBlocks {
    MatrixX<Scalar> xtx;
    MatrixX<Scalar> ztx;
    VectorX<Scalar> zty;
    VectorX<Scalar> xty;
    VectorX<Scalar> ztz_diag;

    Index group_count() const { return ztx.rows(); }
    Index covariate_count() const { return ztx.cols(); }
};

namespace detail {

// Accumulates one contiguous range of groups. xtx_acc collects the upper
// triangle only; per-group rows of ztx/zty/ztz_diag are disjoint across
// ranges, so workers can write them directly.
template <typename Scalar>
void accumulate_range(const GroupedDesign<Scalar>& design, Scalar lambda, Index first, Index last,
                      MatrixX<Scalar>& xtx_acc, VectorX<Scalar>& xty_acc,
                      HendersonBlocks<Scalar>& blocks) {
    for (Index i = first; i < last; ++i) {
        const auto& blk = design.group(i);
        blocks.ztx.row(i) = blk.covariates.colwise().sum();
        blocks.zty(i) = blk.responses.sum();
        blocks.ztz_diag(i) = Scalar(blk.covariates.rows()) + lambda;
        xty_acc.noalias() += blk.covariates.transpose() * blk.responses;
        xtx_acc.template selfadjointView<Eigen::Upper>().rankUpdate(blk.covariates.transpose());
    }
}

}  // namespace detail

/// One pass over the groups computes every block in O(n m p^2); no n x n
/// or (nm) x n object is ever allocated. Group-major accumulation order is
/// fixed, so repeated sequential runs are bitwise identical.
///
/// With threads > 1 the groups are partitioned into contiguous ranges and
/// the partial X'X / X'Y sums are merged in range order; the result agrees
/// with the sequential path up to floating-point reassociation.
template <typename Scalar>
HendersonBlocks<Scalar> assemble(const GroupedDesign<Scalar>& design,
                                 VarianceRatio<Scalar> ratio = VarianceRatio<Scalar>{},
                                 int threads = 1) {
    const Index n = design.group_count();
    const Index p = design.covariate_count();
    const Scalar lambda = ratio.value();

    HendersonBlocks<Scalar> blocks;
    blocks.xtx = MatrixX<Scalar>::Zero(p, p);
    blocks.ztx = MatrixX<Scalar>::Zero(n, p);
    blocks.zty = VectorX<Scalar>::Zero(n);
    blocks.xty = VectorX<Scalar>::Zero(p);
    blocks.ztz_diag = VectorX<Scalar>::Zero(n);

    const int workers = std::max(1, std::min<int>(threads, static_cast<int>(n)));
    if (workers == 1) {
        detail::accumulate_range(design, lambda, Index(0), n, blocks.xtx, blocks.xty, blocks);
    } else {
        std::vector<MatrixX<Scalar>> xtx_parts(workers, MatrixX<Scalar>::Zero(p, p));
        std::vector<VectorX<Scalar>> xty_parts(workers, VectorX<Scalar>::Zero(p));
        std::vector<std::thread> pool;
        pool.reserve(workers);
        const Index chunk = (n + workers - 1) / workers;
        for (int t = 0; t < workers; ++t) {
            const Index first = t * chunk;
            const Index last = std::min(n, first + chunk);
            pool.emplace_back([&, t, first, last] {
                detail::accumulate_range(design, lambda, first, last, xtx_parts[t], xty_parts[t],
                                         blocks);
            });
        }
        for (auto& th : pool) th.join();
        // Deterministic merge in range order.
        for (int t = 0; t < workers; ++t) {
            blocks.xtx += xtx_parts[t];
            blocks.xty += xty_parts[t];
        }
    }

    // Mirror the accumulated upper triangle; symmetry is exact.
    blocks.xtx.template triangularView<Eigen::StrictlyLower>() =
        blocks.xtx.transpose().template triangularView<Eigen::StrictlyLower>();

    if (!blocks.xtx.allFinite() || !blocks.xty.allFinite() || !blocks.ztx.allFinite() ||
        !blocks.zty.allFinite()) {
        throw AccumulationError("sufficient statistics overflowed to a non-finite value");
    }
    return blocks;
}

}  // namespace hmme

#endif  // HMME_ASSEMBLY_HPP
