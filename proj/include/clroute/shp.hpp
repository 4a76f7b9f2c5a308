/**
 * @file shp.hpp
 * @brief Graph machinery for shortest Hamiltonian paths: spanning trees,
 * exact matching, Euler circuits, shortcutting, and Held-Karp oracles.
 *
 * Work graphs use vertices 0..T-1 for regions and vertex T for the dummy
 * vertex joined to every region by a zero-weight edge.
 */

#ifndef CLROUTE_SHP_HPP
#define CLROUTE_SHP_HPP

#include "clroute/instance.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace clroute {

struct WeightedEdge {
    std::size_t u = 0;
    std::size_t v = 0;
    double weight = 0.0;

    bool operator==(const WeightedEdge &) const = default;
};

struct SpanningTree {
    std::vector<WeightedEdge> edges;
    double weight = 0.0;
};

/// Undirected multigraph over regions plus the dummy vertex.
struct WorkGraph {
    std::size_t region_count = 0;
    std::vector<WeightedEdge> edges;

    std::size_t dummy() const { return region_count; }
    std::size_t vertex_count() const { return region_count + 1; }
    double weight() const;
    std::vector<std::size_t> degrees() const;
};

/// (T+1)x(T+1) weights of the augmented complete graph: region costs, zero to the dummy.
Eigen::MatrixXd augmented_costs(const Eigen::MatrixXd &costs);

/// Kruskal over edges sorted by (weight, u, v); edges reported with u < v.
SpanningTree minimum_spanning_tree(const Eigen::MatrixXd &costs);

/// Tree edges plus the zero-weight edge (v_prime, dummy).
WorkGraph attach_dummy(const SpanningTree &tree, std::size_t region_count, std::size_t v_prime);

/// Odd-degree vertices in ascending order (the dummy, if odd, comes last).
std::vector<std::size_t> odd_degree_vertices(const WorkGraph &graph);

struct MatchingResult {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    double weight = 0.0;
};

/// Largest vertex set the exact matching accepts.
inline constexpr std::size_t kMaxExactMatching = 22;

/**
 * Exact minimum-weight perfect matching on the complete graph induced by
 * @p vertices, by dynamic programming over subsets. The first unmatched
 * vertex (in the given order) is always paired next; among equal-weight
 * optima the partner earliest in the order wins.
 */
MatchingResult min_weight_perfect_matching(const Eigen::MatrixXd &weights,
                                           std::span<const std::size_t> vertices);

/// Greedy matching (cheapest available pair first). Fast, but gives up the
/// 3/2 guarantee of the route construction.
MatchingResult greedy_matching(const Eigen::MatrixXd &weights,
                               std::span<const std::size_t> vertices);

/// Adds the matched pairs as extra edges.
WorkGraph combine(const WorkGraph &graph, const MatchingResult &matching,
                  const Eigen::MatrixXd &weights);

/// Closed walk: vertices.front() == vertices.back(), edge_ids[k] joins
/// vertices[k] and vertices[k+1].
struct EulerTrace {
    std::vector<std::size_t> vertices;
    std::vector<std::size_t> edge_ids;
};

/// Hierholzer's algorithm from @p start, taking the lowest-numbered unused
/// neighbour first. Throws InvariantViolation on odd degrees or a
/// disconnected edge set.
EulerTrace eulerian_circuit(const WorkGraph &graph, std::size_t start);

/// Sum of weights(u, v) over consecutive vertices.
double walk_weight(const Eigen::MatrixXd &weights, std::span<const std::size_t> walk);

/**
 * Turns an Euler circuit starting and ending at @p dummy into a Hamiltonian
 * cycle. The circuit is oriented so that v_prime follows the dummy, then the
 * first occurrence of every vertex is kept.
 */
std::vector<std::size_t> shortcut_to_hamiltonian(const EulerTrace &circuit, std::size_t dummy,
                                                 std::size_t v_prime);

/// Drops the dummy from a Hamiltonian cycle; the resulting path ends at v_prime.
Route remove_dummy(std::span<const std::size_t> cycle, std::size_t dummy, std::size_t v_prime);

/// Position-additive route objective:
/// sum_p position_cost(p, route[p]) + travel_scale * sum c(route[p], route[p+1]) + offset.
struct PathObjective {
    Eigen::MatrixXd position_cost;
    double travel_scale = 1.0;
    double offset = 0.0;
};

/// The loss upper bound of the instance's regime as a PathObjective.
PathObjective regime_objective(const ProblemInstance &inst);

/// Plain shortest Hamiltonian path over @p t vertices.
PathObjective travel_only_objective(std::size_t t);

double evaluate_path(const ProblemInstance &inst, const PathObjective &objective,
                     const Route &route);

struct HeldKarpResult {
    Route route;
    double value = 0.0;
};

inline constexpr std::size_t kMaxHeldKarpRegions = 16;

/// Exact minimiser over all routes by subset dynamic programming.
/// Ties go to the lowest final vertex, then the lowest predecessor.
HeldKarpResult held_karp_min_path(const ProblemInstance &inst, const PathObjective &objective);

} // namespace clroute

#endif
