/**
 * @file planner.hpp
 * @brief Route planning strategies and the approximation ratio against the
 * exact optimum.
 */

#ifndef CLROUTE_PLANNER_HPP
#define CLROUTE_PLANNER_HPP

#include "clroute/instance.hpp"
#include "clroute/loss.hpp"
#include "clroute/shp.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace clroute {

enum class Strategy { Algorithm1, Exact, ForgettingOnly, Random };

/// CLI spelling: alg1, exact, forgetting, random.
std::string_view strategy_name(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view name);

enum class MatchingMode { Exact, Greedy };

/// Interior order of the forgetting-only baseline in the underparameterized
/// regime, where only the final region matters to the forgetting term.
enum class BaselineInterior { Ascending, Random };

struct PlanOptions {
    MatchingMode matching = MatchingMode::Exact;
    BaselineInterior interior = BaselineInterior::Ascending;
    /// Seed for the random strategy and the random baseline interior.
    std::uint64_t seed = 0;
};

struct PlanResult {
    Route route;
    LossBreakdown breakdown;
    Strategy strategy = Strategy::Algorithm1;
    std::chrono::duration<double> elapsed{0.0};
};

/// Every intermediate structure of the matching-based construction.
struct Algorithm1Trace {
    std::size_t v_prime = 0;
    SpanningTree tree;
    WorkGraph tree_plus_dummy;
    std::vector<std::size_t> odd_vertices;
    MatchingResult matching;
    WorkGraph multigraph;
    EulerTrace circuit;
    std::vector<std::size_t> cycle;
    Route route;
};

/// Spanning tree, dummy edge at the best final region, matching on odd
/// vertices, Euler circuit, shortcut, dummy removal.
Algorithm1Trace trace_algorithm1(const ProblemInstance &inst,
                                 MatchingMode matching = MatchingMode::Exact);

PlanResult plan_algorithm1(const ProblemInstance &inst, const PlanOptions &options = {});

/// Held-Karp optimum of the regime's loss bound. Throws SizeLimitError above 16 regions.
PlanResult plan_exact(const ProblemInstance &inst);

/// Cost-oblivious baseline that only minimises the forgetting term.
PlanResult plan_forgetting_baseline(const ProblemInstance &inst, const PlanOptions &options = {});

/// Uniformly random visiting order.
PlanResult plan_random(const ProblemInstance &inst, const PlanOptions &options = {});

PlanResult plan(const ProblemInstance &inst, Strategy strategy, const PlanOptions &options = {});

struct RatioOptions {
    PlanOptions plan;
    /// Drop the route-independent noise constant from both totals.
    bool exclude_constant = false;
};

/// Strategy total over exact total.
double ratio(const ProblemInstance &inst, Strategy strategy, const RatioOptions &options = {});

/// Same, reusing an already computed exact plan.
double ratio_against(const PlanResult &candidate, const PlanResult &exact, bool exclude_constant);

} // namespace clroute

#endif
