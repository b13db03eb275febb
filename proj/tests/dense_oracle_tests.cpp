#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "hmme/assembly.hpp"
#include "hmme/dense.hpp"
#include "test_support.hpp"

using namespace hmme;

TEST_CASE("all-ones design builds the hand-multiplied 3x3 system") {
    const auto system = dense_assemble(testing::trivial_design());
    MatrixX<double> expected_a(3, 3);
    expected_a << 2, 1, 1,
                  1, 2, 0,
                  1, 0, 2;
    VectorX<double> expected_c(3);
    expected_c << 2, 1, 1;
    CHECK(system.a == expected_a);
    CHECK(system.c == expected_c);
}

TEST_CASE("unit ratio puts m_i + 1 on the random-effect diagonal") {
    const auto design = testing::random_unbalanced_design({3, 1, 2}, 2, 17);
    const auto system = dense_assemble(design);
    CHECK(system.a(2, 2) == 4.0);
    CHECK(system.a(3, 3) == 2.0);
    CHECK(system.a(4, 4) == 3.0);
}

TEST_CASE("system is symmetric and matches the assembled blocks") {
    const auto design = testing::random_design(10, 4, 3, 23);
    const auto system = dense_assemble(design, VarianceRatio<double>(2.5));
    const auto blocks = assemble(design, VarianceRatio<double>(2.5));

    CHECK((system.a - system.a.transpose()).lpNorm<Eigen::Infinity>() <= 1e-12);
    CHECK((system.a.topLeftCorner(3, 3) - blocks.xtx).lpNorm<Eigen::Infinity>() <= 1e-12);
    CHECK((system.a.bottomLeftCorner(10, 3) - blocks.ztx).lpNorm<Eigen::Infinity>() <= 1e-12);
    CHECK((system.a.topRightCorner(3, 10) - blocks.ztx.transpose()).lpNorm<Eigen::Infinity>() <=
          1e-12);
    // Off-diagonal random-effect block is exactly zero.
    MatrixX<double> bottom_right = system.a.bottomRightCorner(10, 10);
    bottom_right.diagonal().setZero();
    CHECK(bottom_right.isZero(0));
}

TEST_CASE("dense solve reproduces hand and degenerate cases") {
    SUBCASE("hand-solved 3x3 system") {
        const auto system = dense_assemble(testing::trivial_design());
        const auto delta = dense_solve(system);
        CHECK(delta(0) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::abs(delta(1)) <= 1e-14);
        CHECK(std::abs(delta(2)) <= 1e-14);
    }

    SUBCASE("zero right-hand side gives zero") {
        auto system = dense_assemble(testing::random_design(4, 2, 2, 3));
        system.c.setZero();
        CHECK(dense_solve(system).isZero(0));
    }

    SUBCASE("identity matrix returns the right-hand side") {
        DenseSystem<double> system;
        system.a = MatrixX<double>::Identity(5, 5);
        system.c = VectorX<double>::LinSpaced(5, -2.0, 2.0);
        CHECK(dense_solve(system) == system.c);
    }

    SUBCASE("vanishing pivot raises a singular-system error") {
        DenseSystem<double> system;
        system.a = MatrixX<double>::Ones(2, 2);
        system.c = VectorX<double>::Ones(2);
        CHECK_THROWS_AS(dense_solve(system), SingularSystemError);
    }
}

TEST_CASE("size guard fires above the dimension cap") {
    std::vector<GroupBlock<double>> groups(2000);
    for (auto& blk : groups) {
        blk.covariates = MatrixX<double>::Ones(1, 1);
        blk.responses = VectorX<double>::Ones(1);
    }
    const GroupedDesign<double> design(std::move(groups));  // p + n = 2001
    CHECK_THROWS_AS(dense_assemble(design), SizeGuardError);
}

TEST_CASE("oracle residual stays small on random instances") {
    std::mt19937 pick(41);
    for (int trial = 0; trial < 10; ++trial) {
        const Index n = 2 + static_cast<Index>(pick() % 15);
        const Index m = 1 + static_cast<Index>(pick() % 4);
        const Index p = std::min<Index>(n * m - 1, 1 + static_cast<Index>(pick() % 4));
        const auto design = testing::random_design(n, m, p, 600 + trial);
        const auto system = dense_assemble(design);
        const auto delta = dense_solve(system);
        const double residual = (system.a * delta - system.c).lpNorm<Eigen::Infinity>();
        CHECK(residual <= 1e-10 * (1.0 + system.c.lpNorm<Eigen::Infinity>()));
    }
}

TEST_CASE("oracle solution is invariant to within-group row shuffles") {
    const auto design = testing::random_design(6, 4, 3, 1234);
    const auto delta = dense_solve(dense_assemble(design));

    std::mt19937 shuffler(9);
    std::vector<GroupBlock<double>> shuffled;
    for (const auto& blk : design.groups()) {
        std::vector<Index> order(static_cast<std::size_t>(blk.covariates.rows()));
        std::iota(order.begin(), order.end(), Index{0});
        std::shuffle(order.begin(), order.end(), shuffler);
        GroupBlock<double> moved;
        moved.covariates.resize(blk.covariates.rows(), blk.covariates.cols());
        moved.responses.resize(blk.responses.size());
        for (std::size_t r = 0; r < order.size(); ++r) {
            moved.covariates.row(static_cast<Index>(r)) = blk.covariates.row(order[r]);
            moved.responses(static_cast<Index>(r)) = blk.responses(order[r]);
        }
        shuffled.push_back(std::move(moved));
    }
    const auto shuffled_delta =
        dense_solve(dense_assemble(GroupedDesign<double>(std::move(shuffled))));
    CHECK((shuffled_delta - delta).lpNorm<Eigen::Infinity>() <=
          1e-9 * (1.0 + delta.lpNorm<Eigen::Infinity>()));
}
