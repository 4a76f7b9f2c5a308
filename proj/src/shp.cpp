#include "clroute/shp.hpp"

#include "clroute/errors.hpp"
#include "clroute/loss.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <tuple>

namespace clroute {

double WorkGraph::weight() const
{
    double w = 0.0;
    for (const auto &e : edges)
        w += e.weight;
    return w;
}

std::vector<std::size_t> WorkGraph::degrees() const
{
    std::vector<std::size_t> deg(vertex_count(), 0);
    for (const auto &e : edges) {
        ++deg[e.u];
        ++deg[e.v];
    }
    return deg;
}

Eigen::MatrixXd augmented_costs(const Eigen::MatrixXd &costs)
{
    const Eigen::Index t = costs.rows();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(t + 1, t + 1);
    out.topLeftCorner(t, t) = costs;
    return out;
}

namespace {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t x)
    {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    bool unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a == b)
            return false;
        parent_[std::max(a, b)] = std::min(a, b);
        return true;
    }

private:
    std::vector<std::size_t> parent_;
};

} // namespace

SpanningTree minimum_spanning_tree(const Eigen::MatrixXd &costs)
{
    const auto t = static_cast<std::size_t>(costs.rows());
    std::vector<WeightedEdge> candidates;
    candidates.reserve(t * (t - 1) / 2);
    for (std::size_t u = 0; u < t; ++u)
        for (std::size_t v = u + 1; v < t; ++v)
            candidates.push_back({u, v, costs(u, v)});
    std::sort(candidates.begin(), candidates.end(), [](const auto &a, const auto &b) {
        return std::tie(a.weight, a.u, a.v) < std::tie(b.weight, b.u, b.v);
    });

    SpanningTree tree;
    DisjointSets sets(t);
    for (const auto &e : candidates) {
        if (!sets.unite(e.u, e.v))
            continue;
        tree.edges.push_back(e);
        tree.weight += e.weight;
        if (tree.edges.size() + 1 == t)
            break;
    }
    return tree;
}

WorkGraph attach_dummy(const SpanningTree &tree, std::size_t region_count, std::size_t v_prime)
{
    if (v_prime >= region_count)
        throw ParameterError("v_prime out of range");
    WorkGraph g;
    g.region_count = region_count;
    g.edges = tree.edges;
    g.edges.push_back({v_prime, g.dummy(), 0.0});
    return g;
}

std::vector<std::size_t> odd_degree_vertices(const WorkGraph &graph)
{
    const auto deg = graph.degrees();
    std::vector<std::size_t> odd;
    for (std::size_t v = 0; v < deg.size(); ++v)
        if (deg[v] % 2 == 1)
            odd.push_back(v);
    return odd;
}

MatchingResult min_weight_perfect_matching(const Eigen::MatrixXd &weights,
                                           std::span<const std::size_t> vertices)
{
    const std::size_t k = vertices.size();
    if (k % 2 != 0)
        throw InvariantViolation("perfect matching needs an even vertex count, got " +
                                 std::to_string(k));
    if (k > kMaxExactMatching)
        throw SizeLimitError("exact matching limited to " + std::to_string(kMaxExactMatching) +
                             " vertices, got " + std::to_string(k) +
                             "; use the fast (greedy) matching");
    MatchingResult result;
    if (k == 0)
        return result;

    // best[mask]: cheapest perfect matching of the positions in mask.
    // partner[mask]: position paired with the lowest set bit of mask.
    const std::size_t full = (std::size_t{1} << k) - 1;
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> best(full + 1, inf);
    std::vector<std::uint8_t> partner(full + 1, 0);
    best[0] = 0.0;
    for (std::size_t mask = 1; mask <= full; ++mask) {
        if (std::popcount(mask) % 2 != 0)
            continue;
        const auto i = static_cast<std::size_t>(std::countr_zero(mask));
        const std::size_t rest = mask & ~(std::size_t{1} << i);
        for (std::size_t j = i + 1; j < k; ++j) {
            if (!(rest >> j & 1))
                continue;
            const double w = best[rest & ~(std::size_t{1} << j)] + weights(vertices[i], vertices[j]);
            if (w < best[mask]) {
                best[mask] = w;
                partner[mask] = static_cast<std::uint8_t>(j);
            }
        }
    }

    std::size_t mask = full;
    while (mask) {
        const auto i = static_cast<std::size_t>(std::countr_zero(mask));
        const std::size_t j = partner[mask];
        result.pairs.emplace_back(vertices[i], vertices[j]);
        result.weight += weights(vertices[i], vertices[j]);
        mask &= ~((std::size_t{1} << i) | (std::size_t{1} << j));
    }
    return result;
}

MatchingResult greedy_matching(const Eigen::MatrixXd &weights,
                               std::span<const std::size_t> vertices)
{
    const std::size_t k = vertices.size();
    if (k % 2 != 0)
        throw InvariantViolation("perfect matching needs an even vertex count, got " +
                                 std::to_string(k));
    std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            pairs.emplace_back(weights(vertices[i], vertices[j]), i, j);
    std::sort(pairs.begin(), pairs.end());

    MatchingResult result;
    std::vector<bool> used(k, false);
    for (const auto &[w, i, j] : pairs) {
        if (used[i] || used[j])
            continue;
        used[i] = used[j] = true;
        result.pairs.emplace_back(vertices[i], vertices[j]);
        result.weight += w;
    }
    return result;
}

WorkGraph combine(const WorkGraph &graph, const MatchingResult &matching,
                  const Eigen::MatrixXd &weights)
{
    WorkGraph out = graph;
    for (const auto &[u, v] : matching.pairs)
        out.edges.push_back({std::min(u, v), std::max(u, v), weights(u, v)});
    return out;
}

EulerTrace eulerian_circuit(const WorkGraph &graph, std::size_t start)
{
    const std::size_t n = graph.vertex_count();
    if (start >= n)
        throw ParameterError("start vertex out of range");
    const auto deg = graph.degrees();
    for (std::size_t v = 0; v < n; ++v)
        if (deg[v] % 2 != 0)
            throw InvariantViolation("Euler circuit needs even degrees; vertex " +
                                     std::to_string(v) + " is odd");

    // (neighbour, edge id), lowest neighbour first
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(n);
    for (std::size_t id = 0; id < graph.edges.size(); ++id) {
        const auto &e = graph.edges[id];
        adj[e.u].emplace_back(e.v, id);
        if (e.u != e.v)
            adj[e.v].emplace_back(e.u, id);
    }
    for (auto &list : adj)
        std::sort(list.begin(), list.end());

    std::vector<std::size_t> next(n, 0);
    std::vector<bool> used(graph.edges.size(), false);
    std::vector<std::pair<std::size_t, std::size_t>> stack{{start, SIZE_MAX}};
    EulerTrace trace;
    while (!stack.empty()) {
        const std::size_t v = stack.back().first;
        auto &i = next[v];
        while (i < adj[v].size() && used[adj[v][i].second])
            ++i;
        if (i == adj[v].size()) {
            trace.vertices.push_back(v);
            if (stack.back().second != SIZE_MAX)
                trace.edge_ids.push_back(stack.back().second);
            stack.pop_back();
            continue;
        }
        const auto [w, id] = adj[v][i];
        used[id] = true;
        stack.emplace_back(w, id);
    }
    std::reverse(trace.vertices.begin(), trace.vertices.end());
    std::reverse(trace.edge_ids.begin(), trace.edge_ids.end());

    if (trace.edge_ids.size() != graph.edges.size())
        throw InvariantViolation("edge set is not connected from the start vertex");
    return trace;
}

double walk_weight(const Eigen::MatrixXd &weights, std::span<const std::size_t> walk)
{
    double w = 0.0;
    for (std::size_t k = 0; k + 1 < walk.size(); ++k)
        w += weights(walk[k], walk[k + 1]);
    return w;
}

std::vector<std::size_t> shortcut_to_hamiltonian(const EulerTrace &circuit, std::size_t dummy,
                                                 std::size_t v_prime)
{
    std::vector<std::size_t> walk = circuit.vertices;
    if (walk.size() < 3 || walk.front() != dummy || walk.back() != dummy)
        throw InvariantViolation("circuit must start and end at the dummy vertex");
    if (walk[1] != v_prime) {
        if (walk[walk.size() - 2] != v_prime)
            throw InvariantViolation("circuit has no edge between the dummy and v'");
        std::reverse(walk.begin(), walk.end());
    }

    std::size_t top = std::max(dummy, *std::max_element(walk.begin(), walk.end()));
    std::vector<bool> seen(top + 1, false);
    std::vector<std::size_t> cycle{dummy};
    seen[dummy] = true;
    for (std::size_t k = 1; k + 1 < walk.size(); ++k) {
        if (seen[walk[k]])
            continue;
        seen[walk[k]] = true;
        cycle.push_back(walk[k]);
    }
    cycle.push_back(dummy);
    return cycle;
}

Route remove_dummy(std::span<const std::size_t> cycle, std::size_t dummy, std::size_t v_prime)
{
    if (cycle.size() < 3 || cycle.front() != dummy || cycle.back() != dummy)
        throw InvariantViolation("cycle must start and end at the dummy vertex");
    Route route;
    route.order.assign(cycle.begin() + 1, cycle.end() - 1);
    if (route.order.front() == v_prime)
        std::reverse(route.order.begin(), route.order.end());
    else if (route.order.back() != v_prime)
        throw InvariantViolation("dummy vertex is not adjacent to v' in the cycle");
    if (std::find(route.order.begin(), route.order.end(), dummy) != route.order.end())
        throw InvariantViolation("dummy vertex repeated inside the cycle");
    return route;
}

PathObjective regime_objective(const ProblemInstance &inst)
{
    const Regime regime = inst.regime();
    const std::size_t t = inst.t_regions;
    const auto ti = static_cast<Eigen::Index>(t);
    const double td = static_cast<double>(t);
    const double m = static_cast<double>(inst.m_features);
    const double n = static_cast<double>(inst.n_samples);

    PathObjective obj;
    obj.position_cost = Eigen::MatrixXd::Zero(ti, ti);
    obj.travel_scale = 1.0 / td;
    if (regime.under()) {
        for (std::size_t v = 0; v < t; ++v)
            obj.position_cost(ti - 1, static_cast<Eigen::Index>(v)) = inst.delta_row_sum(v) / td;
        obj.offset = m * inst.sigma2 / (n - m - 1.0);
    } else {
        const auto weights = recency_weights(regime.r, t);
        const double r_t = power_by_steps(regime.r, t);
        for (std::size_t p = 0; p < t; ++p)
            for (std::size_t v = 0; v < t; ++v)
                obj.position_cost(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(v)) =
                    weights[p] * inst.delta_row_sum(v);
        obj.offset = r_t / td * inst.delta0.sum() + (1.0 - r_t) * m * inst.sigma2 / (m - n - 1.0);
    }
    return obj;
}

PathObjective travel_only_objective(std::size_t t)
{
    const auto ti = static_cast<Eigen::Index>(t);
    return {Eigen::MatrixXd::Zero(ti, ti), 1.0, 0.0};
}

double evaluate_path(const ProblemInstance &inst, const PathObjective &objective,
                     const Route &route)
{
    double value = 0.0;
    for (std::size_t p = 0; p < route.size(); ++p)
        value += objective.position_cost(static_cast<Eigen::Index>(p),
                                         static_cast<Eigen::Index>(route.order[p]));
    for (std::size_t p = 0; p + 1 < route.size(); ++p)
        value += objective.travel_scale * inst.costs(route.order[p], route.order[p + 1]);
    return value + objective.offset;
}

HeldKarpResult held_karp_min_path(const ProblemInstance &inst, const PathObjective &objective)
{
    const std::size_t t = inst.t_regions;
    if (t > kMaxHeldKarpRegions)
        throw SizeLimitError("exact solver limited to T ≤ " + std::to_string(kMaxHeldKarpRegions) +
                             " regions, got T=" + std::to_string(t) +
                             "; use Algorithm 1 (strategy alg1) instead");
    if (t == 0)
        throw ParameterError("empty instance");

    const std::size_t states = std::size_t{1} << t;
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> cost(states * t, inf);
    std::vector<std::uint8_t> prev(states * t, 0);
    auto at = [t](std::size_t mask, std::size_t v) { return mask * t + v; };
    auto pos_cost = [&](std::size_t p, std::size_t v) {
        return objective.position_cost(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(v));
    };

    for (std::size_t v = 0; v < t; ++v)
        cost[at(std::size_t{1} << v, v)] = pos_cost(0, v);

    for (std::size_t mask = 1; mask < states; ++mask) {
        const auto p = static_cast<std::size_t>(std::popcount(mask)) - 1;
        if (p == 0)
            continue;
        for (std::size_t u = 0; u < t; ++u) {
            if (!(mask >> u & 1))
                continue;
            const std::size_t before = mask & ~(std::size_t{1} << u);
            double best = inf;
            std::size_t arg = 0;
            for (std::size_t v = 0; v < t; ++v) {
                if (!(before >> v & 1))
                    continue;
                const double c = cost[at(before, v)] + objective.travel_scale * inst.costs(v, u);
                if (c < best) {
                    best = c;
                    arg = v;
                }
            }
            cost[at(mask, u)] = best + pos_cost(p, u);
            prev[at(mask, u)] = static_cast<std::uint8_t>(arg);
        }
    }

    const std::size_t full = states - 1;
    std::size_t last = 0;
    for (std::size_t v = 1; v < t; ++v)
        if (cost[at(full, v)] < cost[at(full, last)])
            last = v;

    HeldKarpResult result;
    result.value = cost[at(full, last)] + objective.offset;
    result.route.order.resize(t);
    std::size_t mask = full;
    std::size_t v = last;
    for (std::size_t p = t; p-- > 0;) {
        result.route.order[p] = v;
        const std::size_t u = prev[at(mask, v)];
        mask &= ~(std::size_t{1} << v);
        v = u;
    }
    return result;
}

} // namespace clroute
