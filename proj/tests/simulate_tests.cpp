#include <doctest.h>

#include "hmme/elimination.hpp"
#include "hmme/simulate.hpp"

using namespace hmme;

namespace {

bool designs_identical(const GroupedDesign<double>& a, const GroupedDesign<double>& b) {
    if (a.group_count() != b.group_count()) return false;
    for (Index i = 0; i < a.group_count(); ++i) {
        if (a.group(i).covariates != b.group(i).covariates) return false;
        if (a.group(i).responses != b.group(i).responses) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("identical seeds give bitwise-identical output") {
    SimConfig<double> config;
    config.group_count = 7;
    config.group_size = 3;
    config.covariate_count = 4;
    config.beta_true = VectorX<double>::LinSpaced(4, -1.0, 1.0);
    config.seed = 42;

    const auto a = simulate(config);
    const auto b = simulate(config);
    CHECK(designs_identical(a.design, b.design));
    CHECK(a.true_effects == b.true_effects);
}

TEST_CASE("different seeds give different output") {
    SimConfig<double> config;
    config.group_count = 4;
    config.group_size = 2;
    config.covariate_count = 2;
    config.seed = 1;
    const auto a = simulate(config);
    config.seed = 2;
    const auto b = simulate(config);
    CHECK_FALSE(designs_identical(a.design, b.design));
}

TEST_CASE("zero noise and zero beta collapse the responses to zero") {
    SimConfig<double> config;
    config.group_count = 5;
    config.group_size = 3;
    config.covariate_count = 2;
    config.zero_noise = true;
    const auto data = simulate(config);
    CHECK(data.true_effects.isZero(0));
    for (const auto& blk : data.design.groups()) {
        CHECK(blk.responses.isZero(0));
    }
}

TEST_CASE("per-group streams: extending the group count keeps earlier groups") {
    SimConfig<double> config;
    config.group_count = 5;
    config.group_size = 2;
    config.covariate_count = 3;
    config.seed = 77;
    const auto small = simulate(config);
    config.group_count = 10;
    const auto large = simulate(config);
    for (Index i = 0; i < 5; ++i) {
        CHECK(small.design.group(i).covariates == large.design.group(i).covariates);
        CHECK(small.design.group(i).responses == large.design.group(i).responses);
        CHECK(small.true_effects(i) == large.true_effects(i));
    }
}

TEST_CASE("intercept law pins the first covariate column at one") {
    SimConfig<double> config;
    config.group_count = 3;
    config.group_size = 4;
    config.covariate_count = 3;
    config.covariate_law = CovariateLaw::InterceptPlusNormal;
    config.seed = 5;
    const auto data = simulate(config);
    for (const auto& blk : data.design.groups()) {
        CHECK(blk.covariates.col(0) == VectorX<double>::Ones(4));
        CHECK_FALSE(blk.covariates.col(1).isZero(0));
    }
}

TEST_CASE("empirical variance of the group effects sits near one") {
    SimConfig<double> config;
    config.group_count = 10000;
    config.group_size = 1;
    config.covariate_count = 1;
    config.seed = 2718;
    const auto data = simulate(config);
    const double mean = data.true_effects.mean();
    const double var =
        (data.true_effects.array() - mean).square().sum() / (data.true_effects.size() - 1);
    CHECK(var >= 0.85);
    CHECK(var <= 1.15);
}

TEST_CASE("simulation sizes and beta length are validated") {
    SimConfig<double> config;
    config.group_count = 0;
    CHECK_THROWS_AS(simulate(config), Error);

    config.group_count = 2;
    config.covariate_count = 3;
    config.beta_true = VectorX<double>::Ones(2);
    CHECK_THROWS_AS(simulate(config), DimensionError);
}

TEST_CASE("recovery smoke: the solver finds the generating coefficients") {
    SimConfig<double> config;
    config.group_count = 2000;
    config.group_size = 10;
    config.covariate_count = 5;
    config.covariate_law = CovariateLaw::InterceptPlusNormal;
    config.beta_true = VectorX<double>(5);
    config.beta_true << 1.0, -1.0, 0.5, 0.0, 2.0;
    config.seed = 1;
    const auto data = simulate(config);
    const auto solution = solve(data.design);
    CHECK((solution.beta - config.beta_true).lpNorm<Eigen::Infinity>() <= 0.2);
}
