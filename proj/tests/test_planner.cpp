#include "clroute/errors.hpp"
#include "clroute/planner.hpp"

#include "fixtures.hpp"

#include <doctest.h>

using namespace clroute;
using fixtures::one_based;

TEST_CASE("strategy names round-trip")
{
    for (auto s : {Strategy::Algorithm1, Strategy::Exact, Strategy::ForgettingOnly, Strategy::Random})
        CHECK(parse_strategy(strategy_name(s)) == s);
    CHECK_FALSE(parse_strategy("greedy"));
}

TEST_CASE("algorithm 1 on the worked instance")
{
    const auto inst = fixtures::worked_instance();
    const auto tr = trace_algorithm1(inst);
    CHECK(tr.v_prime == 0);
    CHECK(tr.tree.weight == 2.0);
    CHECK(tr.odd_vertices == std::vector<std::size_t>{2, 3});
    CHECK(tr.matching.weight == 0.0);
    CHECK(tr.circuit.vertices == std::vector<std::size_t>{3, 0, 1, 2, 3});
    CHECK(tr.route == one_based({3, 2, 1}));

    const auto plan = plan_algorithm1(inst);
    CHECK(plan.strategy == Strategy::Algorithm1);
    CHECK(plan.breakdown.total == doctest::Approx(8.0 / 3.0 + 0.8));
    CHECK(ratio(inst, Strategy::Algorithm1) == doctest::Approx(1.0));
}

TEST_CASE("exact plan on the worked instance")
{
    const auto plan = plan_exact(fixtures::worked_instance());
    CHECK(plan.route == one_based({3, 2, 1}));
    CHECK(plan.breakdown.total == doctest::Approx(8.0 / 3.0 + 0.8));
}

TEST_CASE("exact plan with zero dissimilarity is the shortest Hamiltonian path")
{
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto inst = generate_instance({7, seed, 1.0, 10.0, 80, 100, 1.0});
        inst.delta.setZero();
        const auto plan = plan_exact(inst);
        CHECK(plan.breakdown.travel_part * 7.0 ==
              doctest::Approx(fixtures::brute_force_shp(inst.costs)));
    }
}

TEST_CASE("exact plan refuses T > 16")
{
    const auto inst = generate_instance({20, 1, 1.0, 10.0, 80, 100, 1.0});
    CHECK_THROWS_AS(plan_exact(inst), SizeLimitError);
    CHECK_NOTHROW(plan_algorithm1(inst));
}

TEST_CASE("two regions: algorithm 1 is optimal in both regimes")
{
    for (std::uint64_t seed = 0; seed < 50; ++seed)
        for (long m : {80L, 120L}) {
            const auto inst = generate_instance({2, seed, 1.0, 10.0, m, 100, 1.0});
            CHECK(plan_algorithm1(inst).route == plan_exact(inst).route);
            CHECK(ratio(inst, Strategy::Algorithm1) == 1.0);
        }
}

TEST_CASE("forgetting baseline")
{
    SUBCASE("underparameterized: ascending interior, ends at T'")
    {
        const auto plan = plan_forgetting_baseline(fixtures::worked_instance());
        CHECK(plan.route == one_based({2, 3, 1}));
        CHECK(plan.strategy == Strategy::ForgettingOnly);
    }
    SUBCASE("underparameterized: random interior still ends at T'")
    {
        const auto inst = generate_instance({8, 3, 1.0, 10.0, 80, 100, 1.0});
        PlanOptions opt;
        opt.interior = BaselineInterior::Random;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            opt.seed = seed;
            const auto plan = plan_forgetting_baseline(inst, opt);
            CHECK(plan.route.last() == best_final_region(inst));
            CHECK(is_permutation_of(plan.route, 8));
        }
    }
    SUBCASE("overparameterized: descending row sums")
    {
        auto inst = fixtures::worked_instance(12, 4);
        // row sums 10, 8, 6
        inst.delta << 0, 6, 4, 6, 0, 2, 4, 2, 0;
        REQUIRE(inst.delta_row_sum(0) == 10.0);
        REQUIRE(inst.delta_row_sum(1) == 8.0);
        REQUIRE(inst.delta_row_sum(2) == 6.0);
        CHECK(plan_forgetting_baseline(inst).route == one_based({1, 2, 3}));
    }
    SUBCASE("overparameterized: equal row sums keep index order")
    {
        auto inst = fixtures::worked_instance(12, 4);
        inst.delta = Eigen::MatrixXd::Constant(3, 3, 2.0);
        inst.delta.diagonal().setZero();
        CHECK(plan_forgetting_baseline(inst).route == one_based({1, 2, 3}));
    }
    SUBCASE("breakdown includes travel")
    {
        const auto inst = fixtures::worked_instance();
        const auto plan = plan_forgetting_baseline(inst);
        CHECK(plan.breakdown.travel_part == doctest::Approx(3.0 / 3.0));
    }
}

TEST_CASE("random strategy is a seeded permutation")
{
    const auto inst = generate_instance({9, 2, 1.0, 10.0, 80, 100, 1.0});
    PlanOptions opt;
    opt.seed = 4;
    const auto a = plan_random(inst, opt);
    CHECK(is_permutation_of(a.route, 9));
    CHECK(plan_random(inst, opt).route == a.route);
}

TEST_CASE("underparameterized: ratio at most 3/2 on 200 random instances")
{
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        const std::size_t t = 4 + seed % 6;
        const auto inst = generate_instance({t, seed, 1.0, 10.0, 80, 100, 1.0});
        const double r = ratio(inst, Strategy::Algorithm1);
        CHECK(r <= 1.5);
        CHECK(r >= 1.0 - 1e-12);
    }
}

TEST_CASE("overparameterized: ratio within 3/2 + r^(1-T)")
{
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const std::size_t t = 2 + seed % 8;
        const auto inst = generate_instance({t, seed, 1.0, 10.0, 120, 100, 1.0});
        const double r = inst.regime().r;
        CHECK(ratio(inst, Strategy::Algorithm1) <= 1.5 + std::pow(r, 1.0 - static_cast<double>(t)));
    }
}

TEST_CASE("overparameterized, m much larger than n: ratio at most 3/2")
{
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const std::size_t t = 3 + seed % 7;
        auto inst = generate_instance({t, seed, 1.0, 10.0, 100000000, 100, 1.0});
        CHECK(ratio(inst, Strategy::Algorithm1) <= 1.5);
        // with the first term removed outright
        inst.delta.setZero();
        CHECK(ratio(inst, Strategy::Algorithm1) <= 1.5);
    }
}

TEST_CASE("every strategy has ratio at least 1; algorithm 1 ends at T'")
{
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        const std::size_t t = 3 + seed % 6;
        const auto inst = generate_instance({t, seed, 1.0, 10.0, seed % 2 ? 80 : 120, 100, 1.0});
        const auto exact = plan_exact(inst);
        for (auto s : {Strategy::Algorithm1, Strategy::ForgettingOnly, Strategy::Random}) {
            PlanOptions opt;
            opt.seed = seed;
            const auto p = plan(inst, s, opt);
            CHECK(ratio_against(p, exact, false) >= 1.0 - 1e-12);
            CHECK(ratio_against(p, exact, true) >= 1.0 - 1e-12);
        }
        CHECK(plan_algorithm1(inst).route.last() == best_final_region(inst));
    }
}

TEST_CASE("planning is deterministic")
{
    const auto inst = generate_instance({12, 8, 1.0, 10.0, 80, 100, 1.0});
    CHECK(plan_algorithm1(inst).route == plan_algorithm1(inst).route);
    CHECK(plan_exact(inst).route == plan_exact(inst).route);
}

TEST_CASE("fast matching still yields a valid route")
{
    const auto inst = generate_instance({30, 8, 1.0, 10.0, 80, 100, 1.0});
    PlanOptions opt;
    opt.matching = MatchingMode::Greedy;
    const auto p = plan_algorithm1(inst, opt);
    CHECK(is_permutation_of(p.route, 30));
    CHECK(p.route.last() == best_final_region(inst));
}

TEST_CASE("breakdown matches a fresh loss evaluation")
{
    const auto inst = generate_instance({8, 21, 1.0, 10.0, 120, 100, 1.0});
    for (auto s : {Strategy::Algorithm1, Strategy::Exact, Strategy::ForgettingOnly, Strategy::Random}) {
        const auto p = plan(inst, s);
        CHECK(p.breakdown.total == loss_upper(inst, p.route).total);
    }
}
