#ifndef HMME_ELIMINATION_HPP
#define HMME_ELIMINATION_HPP

#include <Eigen/Dense>
#include <chrono>
#include <string>

#include "hmme/assembly.hpp"
#include "hmme/errors.hpp"
#include "hmme/model.hpp"

namespace hmme {

/// Working state of the block row-operation elimination. Only the p x p
/// fixed-effect block and its right-hand side ever change; the group rows
/// of the system (ztx, ztz_diag, zty) are read-only throughout. After
/// `stage` groups have been absorbed,
///
///   reduced_xtx = X'X - sum_{i < stage} ztx_i' ztx_i / d_i
///   reduced_xty = X'Y - sum_{i < stage} ztx_i' zty_i / d_i
///
/// i.e. the partial Schur complement over the absorbed groups. After the
/// final stage, reduced_xtx is the full Schur complement of the
/// random-effect block and reduced_xty the matching right-hand side.
template <typename Scalar>
struct EliminationState {
    explicit EliminationState(const HendersonBlocks<Scalar>& blocks)
        : reduced_xtx(blocks.xtx),
          reduced_xty(blocks.xty),
          stage(0),
          group_count(blocks.group_count()) {}

    MatrixX<Scalar> reduced_xtx;
    VectorX<Scalar> reduced_xty;
    Index stage;        // groups absorbed so far
    Index group_count;  // total groups in the system
};

/// Absorbs group `group` (0-based) into the fixed-effect block: for each
/// fixed-effect row h the multiplier ztx(group,h)/d_group is formed, then
/// the group's row is subtracted from row h of the working block and its
/// right-hand side. This zeroes column `group` of the upper-middle block
/// without ever storing it.
///
/// Stages must run in order: requires state.stage == group.
template <typename Scalar>
void eliminate_stage(EliminationState<Scalar>& state, const HendersonBlocks<Scalar>& blocks,
                     Index group) {
    if (group != state.stage || group < 0 || group >= state.group_count) {
        throw StageOrderError("stage out of order: expected group " +
                              std::to_string(state.stage) + ", got " + std::to_string(group));
    }
    const auto row = blocks.ztx.row(group);
    const Scalar d = blocks.ztz_diag(group);
    const VectorX<Scalar> multipliers = row.transpose() / d;
    state.reduced_xtx.noalias() -= multipliers * row;
    state.reduced_xty.noalias() -= multipliers * blocks.zty(group);
    ++state.stage;
}

/// Runs all n stages in group order. O(n p^2) work, O(p^2 + n p) memory.
template <typename Scalar>
EliminationState<Scalar> eliminate_all(const HendersonBlocks<Scalar>& blocks) {
    EliminationState<Scalar> state(blocks);
    for (Index k = 0; k < state.group_count; ++k) {
        eliminate_stage(state, blocks, k);
    }
    return state;
}

namespace detail {

template <typename Scalar>
Scalar induced_inf_norm(const MatrixX<Scalar>& m) {
    return m.cwiseAbs().rowwise().sum().maxCoeff();
}

}  // namespace detail

/// Solves the reduced p x p system for the fixed effects by pivoted LU;
/// no explicit inverse is formed. A pivot of magnitude below
/// 1e-12 * ||reduced_xtx||_inf signals rank-deficient fixed effects (or
/// total confounding with the group means) and raises SingularSystemError.
template <typename Scalar>
VectorX<Scalar> solve_fixed_effects(const EliminationState<Scalar>& state) {
    if (state.stage != state.group_count) {
        throw StageOrderError("fixed-effect solve requires all " +
                              std::to_string(state.group_count) + " stages, got " +
                              std::to_string(state.stage));
    }
    Eigen::PartialPivLU<MatrixX<Scalar>> lu(state.reduced_xtx);
    const Scalar tol = Scalar(1e-12) * detail::induced_inf_norm(state.reduced_xtx);
    const auto& factors = lu.matrixLU();
    for (Index i = 0; i < factors.rows(); ++i) {
        using std::abs;
        if (!(abs(factors(i, i)) > tol)) {
            throw SingularSystemError("singular fixed-effect system: pivot " +
                                      std::to_string(i + 1) + " below threshold");
        }
    }
    return lu.solve(state.reduced_xty);
}

/// Recovers the random-effect predictions from the second block row:
/// v_i = (zty_i - ztx_i . beta) / d_i. O(n p) work.
template <typename Scalar>
VectorX<Scalar> back_substitute(const HendersonBlocks<Scalar>& blocks,
                                const VectorX<Scalar>& beta) {
    return (blocks.zty - blocks.ztx * beta).cwiseQuotient(blocks.ztz_diag);
}

/// Max-norm of A*delta - c evaluated blockwise from the sufficient
/// statistics; the full (p+n) x (p+n) matrix is never formed.
template <typename Scalar>
Scalar residual_inf_norm(const HendersonBlocks<Scalar>& blocks, const VectorX<Scalar>& beta,
                         const VectorX<Scalar>& v) {
    const VectorX<Scalar> top =
        blocks.xtx * beta + blocks.ztx.transpose() * v - blocks.xty;
    const VectorX<Scalar> bottom =
        blocks.ztx * beta + blocks.ztz_diag.cwiseProduct(v) - blocks.zty;
    return std::max(top.template lpNorm<Eigen::Infinity>(),
                    bottom.template lpNorm<Eigen::Infinity>());
}

/// End-to-end fast path: assemble, eliminate every group, solve for the
/// fixed effects, back-substitute the random effects. Wall time covers
/// those four steps; the residual diagnostic is computed afterwards.
template <typename Scalar>
MixedSolution<Scalar> solve(const GroupedDesign<Scalar>& design,
                            VarianceRatio<Scalar> ratio = VarianceRatio<Scalar>{}) {
    const auto t0 = std::chrono::steady_clock::now();
    const HendersonBlocks<Scalar> blocks = assemble(design, ratio);
    const EliminationState<Scalar> state = eliminate_all(blocks);
    MixedSolution<Scalar> solution;
    solution.beta = solve_fixed_effects(state);
    solution.v = back_substitute(blocks, solution.beta);
    const auto t1 = std::chrono::steady_clock::now();
    if (!solution.beta.allFinite() || !solution.v.allFinite()) {
        throw SingularSystemError("solution contains non-finite values");
    }
    solution.residual_inf_norm = residual_inf_norm(blocks, solution.beta, solution.v);
    solution.wall_time_seconds = std::chrono::duration<double>(t1 - t0).count();
    return solution;
}

}  // namespace hmme

#endif  // HMME_ELIMINATION_HPP
