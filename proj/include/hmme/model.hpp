#ifndef HMME_MODEL_HPP
#define HMME_MODEL_HPP

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "hmme/errors.hpp"

namespace hmme {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

/// One group of a random-intercept design: the group's covariate rows
/// and the matching responses.
template <typename Scalar>
struct GroupBlock {
    MatrixX<Scalar> covariates;  // m_i x p
    VectorX<Scalar> responses;   // m_i
};

namespace detail {

template <typename Scalar>
void check_groups(const std::vector<GroupBlock<Scalar>>& groups) {
    if (groups.empty()) {
        throw DimensionError("design has no groups", 0);
    }
    const Index p = groups.front().covariates.cols();
    if (p < 1) {
        throw DimensionError("group 1 has no covariate columns", 1);
    }
    for (std::size_t i = 0; i < groups.size(); ++i) {
        const std::int64_t ordinal = static_cast<std::int64_t>(i) + 1;
        const auto& blk = groups[i];
        if (blk.covariates.cols() != p) {
            throw DimensionError("group " + std::to_string(ordinal) + " has " +
                                     std::to_string(blk.covariates.cols()) +
                                     " covariate columns, expected " + std::to_string(p),
                                 ordinal);
        }
        if (blk.covariates.rows() < 1) {
            throw DimensionError("group " + std::to_string(ordinal) + " has no observations",
                                 ordinal);
        }
        if (blk.responses.size() != blk.covariates.rows()) {
            throw DimensionError("group " + std::to_string(ordinal) + " has " +
                                     std::to_string(blk.responses.size()) +
                                     " responses for " + std::to_string(blk.covariates.rows()) +
                                     " covariate rows",
                                 ordinal);
        }
        for (Index r = 0; r < blk.covariates.rows(); ++r) {
            for (Index c = 0; c < p; ++c) {
                if (!std::isfinite(blk.covariates(r, c))) {
                    throw NonFiniteError("non-finite covariate in group " +
                                             std::to_string(ordinal) + ", row " +
                                             std::to_string(r + 1) + ", column " +
                                             std::to_string(c + 1),
                                         ordinal, r + 1, c + 1);
                }
            }
            if (!std::isfinite(blk.responses(r))) {
                throw NonFiniteError("non-finite response in group " + std::to_string(ordinal) +
                                         ", row " + std::to_string(r + 1),
                                     ordinal, r + 1, 0);
            }
        }
    }
}

}  // namespace detail

/// Observations organized by group. Immutable once constructed; the
/// constructor rejects ragged covariate blocks and non-finite entries,
/// so every instance reachable through the public surface is valid.
///
/// The balanced case (every group of the same size m) is the primary
/// target; unbalanced group sizes are allowed and handled throughout.
template <typename Scalar>
class GroupedDesign {
  public:
    explicit GroupedDesign(std::vector<GroupBlock<Scalar>> groups) : groups_(std::move(groups)) {
        detail::check_groups(groups_);
        p_ = groups_.front().covariates.cols();
        common_m_ = groups_.front().covariates.rows();
        total_obs_ = 0;
        for (const auto& blk : groups_) {
            total_obs_ += blk.covariates.rows();
            if (blk.covariates.rows() != common_m_) common_m_ = -1;
        }
    }

    Index group_count() const { return static_cast<Index>(groups_.size()); }
    Index covariate_count() const { return p_; }
    Index total_observations() const { return total_obs_; }

    /// True when every group has the same number of observations.
    bool balanced() const { return common_m_ >= 0; }

    /// Common group size m; only meaningful when balanced().
    Index common_group_size() const { return common_m_; }

    Index group_size(Index i) const { return groups_[static_cast<std::size_t>(i)].covariates.rows(); }

    const GroupBlock<Scalar>& group(Index i) const { return groups_[static_cast<std::size_t>(i)]; }
    const std::vector<GroupBlock<Scalar>>& groups() const { return groups_; }

  private:
    std::vector<GroupBlock<Scalar>> groups_;
    Index p_ = 0;
    Index common_m_ = -1;  // -1 when group sizes differ
    Index total_obs_ = 0;
};

/// Re-checks every design invariant and returns the design unchanged.
/// Idempotent; construction already enforces the same checks.
template <typename Scalar>
const GroupedDesign<Scalar>& validate_design(const GroupedDesign<Scalar>& design) {
    detail::check_groups(design.groups());
    return design;
}

/// The scalar added to each diagonal entry of Z'Z in the Henderson
/// system. Folds the error and random-effect variance scales into one
/// effective ratio; the default of 1 is the unit-variance case.
template <typename Scalar>
class VarianceRatio {
  public:
    VarianceRatio() = default;
    explicit VarianceRatio(Scalar value) : value_(value) {
        if (!std::isfinite(value_) || value_ <= Scalar(0)) {
            throw Error("variance ratio must be a positive finite number");
        }
    }
    Scalar value() const { return value_; }

  private:
    Scalar value_ = Scalar(1);
};

/// Joint solution of the mixed model equations: fixed-effect estimates,
/// random-effect predictions, and solve diagnostics. The residual norm
/// is always recomputed from the inputs, never assumed zero.
template <typename Scalar>
struct MixedSolution {
    VectorX<Scalar> beta;           // fixed effects, length p
    VectorX<Scalar> v;              // random-effect predictions, length n
    Scalar residual_inf_norm = 0;   // max-norm of A*delta - c
    double wall_time_seconds = 0;   // assemble + eliminate + back-substitute
};

}  // namespace hmme

#endif  // HMME_MODEL_HPP
