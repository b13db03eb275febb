#ifndef HMME_SIMULATE_HPP
#define HMME_SIMULATE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hmme/errors.hpp"
#include "hmme/model.hpp"

namespace hmme {

enum class CovariateLaw {
    StandardNormal,       // every covariate entry ~ N(0,1)
    InterceptPlusNormal,  // constant first column, N(0,1) remainder
};

/// Generative model Y_ij = x_ij' beta + v_i + eps_ij with v_i ~ N(0,1)
/// and eps_ij ~ N(0,1). The seed fully determines the output.
template <typename Scalar>
struct SimConfig {
    Index group_count = 1;      // n
    Index group_size = 1;       // m
    Index covariate_count = 1;  // p
    VectorX<Scalar> beta_true;  // length p; empty means all zeros
    std::uint64_t seed = 0;
    CovariateLaw covariate_law = CovariateLaw::StandardNormal;
    bool zero_noise = false;  // test hook: forces v and eps to zero
};

template <typename Scalar>
struct SimulatedData {
    GroupedDesign<Scalar> design;
    VectorX<Scalar> true_effects;  // the drawn v, length n
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// One independent stream per group, so a group's draws do not depend on
// how many groups precede it.
inline std::uint64_t group_stream_seed(std::uint64_t seed, std::uint64_t group) {
    return splitmix64(splitmix64(seed) ^ splitmix64(group + 1));
}

}  // namespace detail

/// Draws a design from the generative model. Group draws come from
/// per-group substreams in a fixed order (group effect, then per
/// observation: covariates, then noise), so extending the group count
/// leaves earlier groups unchanged.
template <typename Scalar>
SimulatedData<Scalar> simulate(const SimConfig<Scalar>& config) {
    const Index n = config.group_count;
    const Index m = config.group_size;
    const Index p = config.covariate_count;
    if (n < 1 || m < 1 || p < 1) {
        throw Error("simulation sizes must be at least 1");
    }
    VectorX<Scalar> beta = config.beta_true;
    if (beta.size() == 0) {
        beta = VectorX<Scalar>::Zero(p);
    } else if (beta.size() != p) {
        throw DimensionError("beta_true has length " + std::to_string(beta.size()) +
                                 ", expected " + std::to_string(p),
                             0);
    }

    std::vector<GroupBlock<Scalar>> groups;
    groups.reserve(static_cast<std::size_t>(n));
    VectorX<Scalar> effects(n);

    for (Index i = 0; i < n; ++i) {
        std::mt19937_64 engine(detail::group_stream_seed(config.seed, static_cast<std::uint64_t>(i)));
        std::normal_distribution<Scalar> normal(Scalar(0), Scalar(1));

        const Scalar v_i = config.zero_noise ? Scalar(0) : normal(engine);
        effects(i) = v_i;

        GroupBlock<Scalar> blk;
        blk.covariates.resize(m, p);
        blk.responses.resize(m);
        for (Index j = 0; j < m; ++j) {
            Index c0 = 0;
            if (config.covariate_law == CovariateLaw::InterceptPlusNormal) {
                blk.covariates(j, 0) = Scalar(1);
                c0 = 1;
            }
            for (Index c = c0; c < p; ++c) {
                blk.covariates(j, c) = normal(engine);
            }
            const Scalar eps = config.zero_noise ? Scalar(0) : normal(engine);
            blk.responses(j) = blk.covariates.row(j).dot(beta) + v_i + eps;
        }
        groups.push_back(std::move(blk));
    }

    return SimulatedData<Scalar>{GroupedDesign<Scalar>(std::move(groups)), std::move(effects)};
}

}  // namespace hmme

#endif  // HMME_SIMULATE_HPP
