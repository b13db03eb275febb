#ifndef HMME_TEST_SUPPORT_HPP
#define HMME_TEST_SUPPORT_HPP

#include <random>
#include <vector>

#include "hmme/model.hpp"

namespace hmme::testing {

// n=2, m=1, p=1, all covariates and responses equal to 1. The full
// 3x3 Henderson system for this design is solvable by hand.
inline GroupedDesign<double> trivial_design() {
    std::vector<GroupBlock<double>> groups(2);
    for (auto& blk : groups) {
        blk.covariates = MatrixX<double>::Ones(1, 1);
        blk.responses = VectorX<double>::Ones(1);
    }
    return GroupedDesign<double>(std::move(groups));
}

// Random balanced design with N(0,1) covariates and responses, built
// directly from a plain engine (independent of the library's simulator).
inline GroupedDesign<double> random_design(Index n, Index m, Index p, unsigned seed) {
    std::mt19937 engine(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<GroupBlock<double>> groups;
    groups.reserve(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        GroupBlock<double> blk;
        blk.covariates.resize(m, p);
        blk.responses.resize(m);
        for (Index r = 0; r < m; ++r) {
            for (Index c = 0; c < p; ++c) blk.covariates(r, c) = normal(engine);
            blk.responses(r) = normal(engine);
        }
        groups.push_back(std::move(blk));
    }
    return GroupedDesign<double>(std::move(groups));
}

// Unbalanced variant; group i has sizes[i] observations.
inline GroupedDesign<double> random_unbalanced_design(const std::vector<Index>& sizes, Index p,
                                                      unsigned seed) {
    std::mt19937 engine(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<GroupBlock<double>> groups;
    groups.reserve(sizes.size());
    for (const Index m : sizes) {
        GroupBlock<double> blk;
        blk.covariates.resize(m, p);
        blk.responses.resize(m);
        for (Index r = 0; r < m; ++r) {
            for (Index c = 0; c < p; ++c) blk.covariates(r, c) = normal(engine);
            blk.responses(r) = normal(engine);
        }
        groups.push_back(std::move(blk));
    }
    return GroupedDesign<double>(std::move(groups));
}

}  // namespace hmme::testing

#endif  // HMME_TEST_SUPPORT_HPP
