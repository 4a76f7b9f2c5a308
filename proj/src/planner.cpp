#include "clroute/planner.hpp"

#include "clroute/errors.hpp"
#include "clroute/random.hpp"

#include <algorithm>
#include <numeric>

namespace clroute {

std::string_view strategy_name(Strategy s)
{
    switch (s) {
    case Strategy::Algorithm1:
        return "alg1";
    case Strategy::Exact:
        return "exact";
    case Strategy::ForgettingOnly:
        return "forgetting";
    case Strategy::Random:
        return "random";
    }
    return "?";
}

std::optional<Strategy> parse_strategy(std::string_view name)
{
    for (auto s : {Strategy::Algorithm1, Strategy::Exact, Strategy::ForgettingOnly, Strategy::Random})
        if (strategy_name(s) == name)
            return s;
    return std::nullopt;
}

namespace {

using Clock = std::chrono::steady_clock;

PlanResult finish(const ProblemInstance &inst, Route route, Strategy strategy, Clock::time_point start)
{
    PlanResult result;
    result.breakdown = loss_upper(inst, route);
    result.route = std::move(route);
    result.strategy = strategy;
    result.elapsed = Clock::now() - start;
    return result;
}

void shuffle(std::vector<std::size_t> &v, Rng &rng)
{
    for (std::size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[rng.below(i)]);
}

} // namespace

Algorithm1Trace trace_algorithm1(const ProblemInstance &inst, MatchingMode matching)
{
    const std::size_t t = inst.t_regions;
    const Eigen::MatrixXd weights = augmented_costs(inst.costs);

    Algorithm1Trace tr;
    tr.v_prime = best_final_region(inst);
    tr.tree = minimum_spanning_tree(inst.costs);
    tr.tree_plus_dummy = attach_dummy(tr.tree, t, tr.v_prime);

    // The dummy goes first so that it is matched first, to its lowest-index
    // partner among zero-weight ties.
    tr.odd_vertices = odd_degree_vertices(tr.tree_plus_dummy);
    std::vector<std::size_t> order = tr.odd_vertices;
    std::stable_partition(order.begin(), order.end(),
                          [&](std::size_t v) { return v == tr.tree_plus_dummy.dummy(); });
    tr.matching = matching == MatchingMode::Exact ? min_weight_perfect_matching(weights, order)
                                                  : greedy_matching(weights, order);

    tr.multigraph = combine(tr.tree_plus_dummy, tr.matching, weights);
    tr.circuit = eulerian_circuit(tr.multigraph, tr.multigraph.dummy());
    tr.cycle = shortcut_to_hamiltonian(tr.circuit, tr.multigraph.dummy(), tr.v_prime);
    tr.route = remove_dummy(tr.cycle, tr.multigraph.dummy(), tr.v_prime);
    if (!is_permutation_of(tr.route, t) || tr.route.last() != tr.v_prime)
        throw InvariantViolation("constructed route is not a Hamiltonian path ending at v'");
    return tr;
}

PlanResult plan_algorithm1(const ProblemInstance &inst, const PlanOptions &options)
{
    const auto start = Clock::now();
    auto tr = trace_algorithm1(inst, options.matching);
    return finish(inst, std::move(tr.route), Strategy::Algorithm1, start);
}

PlanResult plan_exact(const ProblemInstance &inst)
{
    const auto start = Clock::now();
    auto hk = held_karp_min_path(inst, regime_objective(inst));
    return finish(inst, std::move(hk.route), Strategy::Exact, start);
}

PlanResult plan_forgetting_baseline(const ProblemInstance &inst, const PlanOptions &options)
{
    const auto start = Clock::now();
    const std::size_t t = inst.t_regions;
    Route route;
    if (inst.regime().under()) {
        const std::size_t last = best_final_region(inst);
        for (std::size_t v = 0; v < t; ++v)
            if (v != last)
                route.order.push_back(v);
        if (options.interior == BaselineInterior::Random) {
            Rng rng(options.seed);
            shuffle(route.order, rng);
        }
        route.order.push_back(last);
    } else {
        std::vector<double> sums(t);
        for (std::size_t v = 0; v < t; ++v)
            sums[v] = inst.delta_row_sum(v);
        route.order.resize(t);
        std::iota(route.order.begin(), route.order.end(), std::size_t{0});
        std::stable_sort(route.order.begin(), route.order.end(),
                         [&](std::size_t a, std::size_t b) { return sums[a] > sums[b]; });
    }
    return finish(inst, std::move(route), Strategy::ForgettingOnly, start);
}

PlanResult plan_random(const ProblemInstance &inst, const PlanOptions &options)
{
    const auto start = Clock::now();
    Route route;
    route.order.resize(inst.t_regions);
    std::iota(route.order.begin(), route.order.end(), std::size_t{0});
    Rng rng(options.seed);
    shuffle(route.order, rng);
    return finish(inst, std::move(route), Strategy::Random, start);
}

PlanResult plan(const ProblemInstance &inst, Strategy strategy, const PlanOptions &options)
{
    switch (strategy) {
    case Strategy::Algorithm1:
        return plan_algorithm1(inst, options);
    case Strategy::Exact:
        return plan_exact(inst);
    case Strategy::ForgettingOnly:
        return plan_forgetting_baseline(inst, options);
    case Strategy::Random:
        return plan_random(inst, options);
    }
    throw ParameterError("unknown strategy");
}

double ratio_against(const PlanResult &candidate, const PlanResult &exact, bool exclude_constant)
{
    const auto value = [&](const LossBreakdown &b) {
        return exclude_constant ? b.forgetting_part + b.travel_part : b.total;
    };
    return value(candidate.breakdown) / value(exact.breakdown);
}

double ratio(const ProblemInstance &inst, Strategy strategy, const RatioOptions &options)
{
    const PlanResult exact = plan_exact(inst);
    return ratio_against(plan(inst, strategy, options.plan), exact, options.exclude_constant);
}

} // namespace clroute
