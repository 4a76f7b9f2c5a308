#include "clroute/errors.hpp"
#include "clroute/loss.hpp"
#include "clroute/random.hpp"
#include "clroute/shp.hpp"

#include "fixtures.hpp"

#include <doctest.h>

#include <bit>
#include <set>

using namespace clroute;
using fixtures::one_based;

namespace {

// Regions are 0-based in memory: region k (1-based) is k - 1, and the
// dummy of a T-region work graph is vertex T.

std::multiset<std::pair<std::size_t, std::size_t>> edge_multiset(const std::vector<WeightedEdge> &edges)
{
    std::multiset<std::pair<std::size_t, std::size_t>> out;
    for (const auto &e : edges)
        out.emplace(std::min(e.u, e.v), std::max(e.u, e.v));
    return out;
}

Eigen::MatrixXd path_costs()
{
    Eigen::MatrixXd c(3, 3);
    c << 0, 1, 2, 1, 0, 1, 2, 1, 0;
    return c;
}

} // namespace

TEST_CASE("minimum_spanning_tree: worked instance")
{
    const auto tree = minimum_spanning_tree(path_costs());
    CHECK(tree.weight == 2.0);
    REQUIRE(tree.edges.size() == 2);
    CHECK(tree.edges[0] == WeightedEdge{0, 1, 1.0});
    CHECK(tree.edges[1] == WeightedEdge{1, 2, 1.0});
}

TEST_CASE("minimum_spanning_tree: two vertices")
{
    Eigen::MatrixXd c(2, 2);
    c << 0, 4, 4, 0;
    const auto tree = minimum_spanning_tree(c);
    REQUIRE(tree.edges.size() == 1);
    CHECK(tree.edges[0] == WeightedEdge{0, 1, 4.0});
}

TEST_CASE("minimum_spanning_tree: equal weights use the lexicographic tie-break")
{
    Eigen::MatrixXd c = Eigen::MatrixXd::Constant(4, 4, 5.0);
    c.diagonal().setZero();
    const auto tree = minimum_spanning_tree(c);
    CHECK(tree.weight == 15.0);
    CHECK(edge_multiset(tree.edges) ==
          std::multiset<std::pair<std::size_t, std::size_t>>{{0, 1}, {0, 2}, {0, 3}});
}

TEST_CASE("minimum_spanning_tree: weight matches exhaustive search on small graphs")
{
    Rng rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t t = 3 + rng.below(3);
        const auto inst = generate_instance({t, rng.next_u64(), 1.0, 10.0, 80, 100, 1.0});
        // enumerate all (t-1)-edge subsets that connect the graph
        std::vector<std::pair<std::size_t, std::size_t>> all;
        for (std::size_t u = 0; u < t; ++u)
            for (std::size_t v = u + 1; v < t; ++v)
                all.emplace_back(u, v);
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t mask = 0; mask < (std::size_t{1} << all.size()); ++mask) {
            if (static_cast<std::size_t>(std::popcount(mask)) != t - 1)
                continue;
            std::vector<std::size_t> comp(t);
            std::iota(comp.begin(), comp.end(), std::size_t{0});
            double w = 0.0;
            for (std::size_t k = 0; k < all.size(); ++k) {
                if (!(mask >> k & 1))
                    continue;
                const auto a = comp[all[k].first], b = comp[all[k].second];
                for (auto &c : comp)
                    if (c == b)
                        c = a;
                w += inst.costs(all[k].first, all[k].second);
            }
            if (std::all_of(comp.begin(), comp.end(), [&](auto c) { return c == comp[0]; }))
                best = std::min(best, w);
        }
        CHECK(minimum_spanning_tree(inst.costs).weight == doctest::Approx(best));
    }
}

TEST_CASE("odd_degree_vertices")
{
    SUBCASE("worked instance, dummy at region 1")
    {
        const auto g = attach_dummy(minimum_spanning_tree(path_costs()), 3, 0);
        CHECK(g.degrees() == std::vector<std::size_t>{2, 2, 1, 1});
        CHECK(odd_degree_vertices(g) == std::vector<std::size_t>{2, 3});
    }
    SUBCASE("path on four vertices, dummy at an endpoint")
    {
        SpanningTree path{{{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}}, 3.0};
        const auto g = attach_dummy(path, 4, 0);
        CHECK(odd_degree_vertices(g) == std::vector<std::size_t>{3, 4});
    }
    SUBCASE("star centred at v'")
    {
        SpanningTree star{{{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}}, 3.0};
        const auto g = attach_dummy(star, 4, 0);
        CHECK(g.degrees()[0] == 4);
        CHECK(odd_degree_vertices(g) == std::vector<std::size_t>{1, 2, 3, 4});
    }
}

TEST_CASE("min_weight_perfect_matching examples")
{
    SUBCASE("dummy and one region")
    {
        const auto w = augmented_costs(path_costs());
        const std::vector<std::size_t> odd{3, 2};
        const auto m = min_weight_perfect_matching(w, odd);
        REQUIRE(m.pairs.size() == 1);
        CHECK(m.pairs[0] == std::pair<std::size_t, std::size_t>{3, 2});
        CHECK(m.weight == 0.0);
    }
    SUBCASE("four vertices")
    {
        Eigen::MatrixXd w(4, 4);
        // a=0 b=1 c=2 d=3: ab=1 cd=1 ac=bd=2 ad=bc=3
        w << 0, 1, 2, 3, 1, 0, 3, 2, 2, 3, 0, 1, 3, 2, 1, 0;
        const std::vector<std::size_t> vs{0, 1, 2, 3};
        const auto m = min_weight_perfect_matching(w, vs);
        CHECK(m.weight == 2.0);
        CHECK(m.pairs == std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {2, 3}});
    }
    SUBCASE("empty")
    {
        const auto m = min_weight_perfect_matching(Eigen::MatrixXd::Zero(1, 1), {});
        CHECK(m.pairs.empty());
        CHECK(m.weight == 0.0);
    }
    SUBCASE("odd count is a bug signal")
    {
        const std::vector<std::size_t> vs{0, 1, 2};
        CHECK_THROWS_AS(min_weight_perfect_matching(Eigen::MatrixXd::Zero(3, 3), vs),
                        InvariantViolation);
    }
    SUBCASE("dummy listed first takes the lowest-index zero-weight partner")
    {
        const Eigen::MatrixXd w = augmented_costs(Eigen::MatrixXd::Constant(4, 4, 3.0));
        const std::vector<std::size_t> vs{4, 1, 2, 3};
        const auto m = min_weight_perfect_matching(w, vs);
        CHECK(m.pairs[0] == std::pair<std::size_t, std::size_t>{4, 1});
    }
}

TEST_CASE("matching DP equals enumeration")
{
    Rng rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t k = 2 * (1 + rng.below(5));
        Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j)
                w(i, j) = w(j, i) = rng.uniform(0.0, 10.0);
        std::vector<std::size_t> vs(k);
        std::iota(vs.begin(), vs.end(), std::size_t{0});
        const auto m = min_weight_perfect_matching(w, vs);
        CHECK(m.weight == doctest::Approx(fixtures::brute_force_matching(w, vs)));
        CHECK(m.pairs.size() == k / 2);
        CHECK(greedy_matching(w, vs).weight >= m.weight - 1e-12);
    }
}

TEST_CASE("matching refuses oversized vertex sets")
{
    std::vector<std::size_t> vs(kMaxExactMatching + 2);
    std::iota(vs.begin(), vs.end(), std::size_t{0});
    const auto n = static_cast<Eigen::Index>(vs.size());
    CHECK_THROWS_AS(min_weight_perfect_matching(Eigen::MatrixXd::Zero(n, n), vs), SizeLimitError);
}

TEST_CASE("eulerian_circuit examples")
{
    SUBCASE("square through the dummy")
    {
        WorkGraph h{3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 3, 0.0}, {2, 3, 0.0}}};
        const auto tr = eulerian_circuit(h, 3);
        CHECK(tr.vertices == std::vector<std::size_t>{3, 0, 1, 2, 3});
        CHECK(tr.edge_ids.size() == 4);
    }
    SUBCASE("doubled dummy edge")
    {
        WorkGraph h{1, {{0, 1, 0.0}, {0, 1, 0.0}}};
        const auto tr = eulerian_circuit(h, 1);
        CHECK(tr.vertices == std::vector<std::size_t>{1, 0, 1});
    }
    SUBCASE("triangle plus doubled dummy edge")
    {
        WorkGraph h{3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}, {0, 3, 0.0}, {0, 3, 0.0}}};
        const auto tr = eulerian_circuit(h, 3);
        CHECK(tr.edge_ids.size() == 5);
        CHECK(tr.vertices.front() == 3);
        CHECK(tr.vertices.back() == 3);
        std::vector<std::size_t> ids = tr.edge_ids;
        std::sort(ids.begin(), ids.end());
        CHECK(ids == std::vector<std::size_t>{0, 1, 2, 3, 4});
    }
    SUBCASE("odd degree is rejected")
    {
        WorkGraph h{2, {{0, 1, 1.0}, {1, 2, 0.0}}};
        CHECK_THROWS_AS(eulerian_circuit(h, 2), InvariantViolation);
    }
    SUBCASE("disconnected edge set is rejected")
    {
        WorkGraph h{4, {{0, 4, 0.0}, {0, 4, 0.0}, {1, 2, 1.0}, {1, 2, 1.0}}};
        CHECK_THROWS_AS(eulerian_circuit(h, 4), InvariantViolation);
    }
}

TEST_CASE("shortcut_to_hamiltonian")
{
    SUBCASE("already Hamiltonian")
    {
        EulerTrace c{{3, 0, 1, 2, 3}, {}};
        CHECK(shortcut_to_hamiltonian(c, 3, 0) == std::vector<std::size_t>{3, 0, 1, 2, 3});
    }
    SUBCASE("repeat of v' skipped")
    {
        EulerTrace c{{3, 0, 1, 0, 2, 3}, {}};
        CHECK(shortcut_to_hamiltonian(c, 3, 0) == std::vector<std::size_t>{3, 0, 1, 2, 3});
    }
    SUBCASE("v' adjacent to the dummy only at the end: walk is re-anchored")
    {
        // v0-2-1-3-1-v0 with v' = 1
        EulerTrace c{{3, 1, 0, 2, 0, 3}, {}};
        CHECK(shortcut_to_hamiltonian(c, 3, 0) == std::vector<std::size_t>{3, 0, 2, 1, 3});
    }
    SUBCASE("no dummy-v' edge")
    {
        EulerTrace c{{3, 1, 0, 2, 3}, {}};
        CHECK_THROWS_AS(shortcut_to_hamiltonian(c, 3, 0), InvariantViolation);
    }
}

TEST_CASE("remove_dummy")
{
    const std::vector<std::size_t> cycle{3, 0, 1, 2, 3};
    CHECK(remove_dummy(cycle, 3, 0) == one_based({3, 2, 1}));

    const std::vector<std::size_t> two{2, 1, 0, 2};
    CHECK(remove_dummy(two, 2, 0) == one_based({2, 1}));

    const std::vector<std::size_t> bad{3, 1, 0, 2, 3};
    CHECK_THROWS_AS(remove_dummy(bad, 3, 0), InvariantViolation);

    // removing the zero-weight dummy edges keeps the weight
    const auto w = augmented_costs(path_costs());
    const auto route = remove_dummy(cycle, 3, 0);
    CHECK(walk_weight(w, cycle) == walk_weight(w, route.order));
}

TEST_CASE("held_karp_min_path: worked instance")
{
    const auto inst = fixtures::worked_instance();
    const auto hk = held_karp_min_path(inst, regime_objective(inst));
    CHECK(hk.route == one_based({3, 2, 1}));
    CHECK(hk.value == doctest::Approx(8.0 / 3.0 + 0.8));
}

TEST_CASE("held_karp_min_path: two regions picks the better route")
{
    for (long m : {80L, 120L}) {
        const auto inst = generate_instance({2, 77, 1.0, 10.0, m, 100, 1.0});
        const auto hk = held_karp_min_path(inst, regime_objective(inst));
        const double a = loss_upper(inst, one_based({1, 2})).total;
        const double b = loss_upper(inst, one_based({2, 1})).total;
        CHECK(hk.value == doctest::Approx(std::min(a, b)));
    }
}

TEST_CASE("held_karp_min_path matches a permutation scan at T=7")
{
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        for (long m : {80L, 120L}) {
            const auto inst = generate_instance({7, seed, 1.0, 10.0, m, 100, 1.0});
            const auto hk = held_karp_min_path(inst, regime_objective(inst));
            const auto [route, value] = fixtures::permutation_scan(
                7, [&](const Route &r) { return loss_upper(inst, r).total; });
            CHECK(hk.value == doctest::Approx(value).epsilon(1e-12));
            CHECK(loss_upper(inst, hk.route).total == doctest::Approx(value).epsilon(1e-12));
        }
    }
}

TEST_CASE("held_karp objective evaluation agrees with the loss module")
{
    for (long m : {80L, 120L}) {
        const auto inst = generate_instance({6, 4, 1.0, 10.0, m, 100, 2.0});
        const auto obj = regime_objective(inst);
        const Route r = one_based({5, 3, 1, 6, 2, 4});
        CHECK(evaluate_path(inst, obj, r) == doctest::Approx(loss_upper(inst, r).total).epsilon(1e-13));
    }
}

TEST_CASE("held_karp travel-only objective is the shortest Hamiltonian path")
{
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto inst = generate_instance({6, seed, 1.0, 10.0, 80, 100, 1.0});
        const auto hk = held_karp_min_path(inst, travel_only_objective(6));
        CHECK(hk.value == doctest::Approx(fixtures::brute_force_shp(inst.costs)));
    }
}

TEST_CASE("held_karp size guard")
{
    const auto inst = generate_instance({17, 1, 1.0, 10.0, 80, 100, 1.0});
    CHECK_THROWS_AS(held_karp_min_path(inst, regime_objective(inst)), SizeLimitError);
}
