/**
 * @file instance.hpp
 * @brief Problem instances: regions, dissimilarity bounds, travel costs and
 * the (m, n, sigma^2) regime parameters of the learning model.
 *
 * Region indices are 0-based in memory. Every user-facing surface (files,
 * CLI output, validation messages) prints them 1-based.
 */

#ifndef CLROUTE_INSTANCE_HPP
#define CLROUTE_INSTANCE_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace clroute {

enum class RegimeKind { Underparameterized, Overparameterized };

/// Learning regime implied by feature count m and sample count n.
struct Regime {
    RegimeKind kind;
    /// 1 - n/m; only meaningful when overparameterized, 0 otherwise.
    double r = 0.0;

    bool under() const { return kind == RegimeKind::Underparameterized; }
    bool over() const { return kind == RegimeKind::Overparameterized; }
};

/// Underparameterized iff n >= m + 2, overparameterized iff m >= n + 2.
/// Returns nothing for m in {n-1, n, n+1} or non-positive counts.
std::optional<Regime> classify_regime(long m, long n);

const char *regime_name(RegimeKind kind);

struct ProblemInstance {
    std::size_t t_regions = 0;
    /// Symmetric, zero diagonal upper bounds on squared parameter distances.
    Eigen::MatrixXd delta;
    /// Upper bounds on squared distance from each task to the initial predictor.
    Eigen::VectorXd delta0;
    /// Symmetric metric travel costs.
    Eigen::MatrixXd costs;
    long m_features = 0;
    long n_samples = 0;
    double sigma2 = 1.0;

    /// Regime of a valid instance. Throws RegimeError if undefined.
    Regime regime() const;

    /// Sum over t of delta(i, t).
    double delta_row_sum(std::size_t i) const;

    bool operator==(const ProblemInstance &other) const;
};

/// Visiting order of the regions; order.back() is the last training region.
struct Route {
    std::vector<std::size_t> order;

    std::size_t size() const { return order.size(); }
    std::size_t last() const { return order.back(); }
    bool operator==(const Route &) const = default;
};

/// True iff @p route is a permutation of 0..t-1.
bool is_permutation_of(const Route &route, std::size_t t);

/// Space-separated 1-based rendering, e.g. "3 2 1".
std::string format_route(const Route &route);

struct ValidationReport {
    std::vector<std::string> violations;
    std::optional<Regime> regime;

    bool ok() const { return violations.empty(); }
};

ValidationReport validate_instance(const ProblemInstance &inst);

/// All-pairs shortest path distances under the given edge weights.
/// Repeats Floyd-Warshall sweeps until no entry changes, so the result
/// satisfies the triangle inequality exactly in floating point.
Eigen::MatrixXd metric_closure(const Eigen::MatrixXd &costs);

struct GeneratorParams {
    std::size_t t = 0;
    std::uint64_t seed = 0;
    double range_lo = 1.0;
    double range_hi = 10.0;
    long m = 80;
    long n = 100;
    double sigma2 = 1.0;
};

/**
 * Random instance. Draw order from a single Rng seeded with @p seed:
 * delta(i, j) for i < j row by row, then delta0(0..t-1), then raw costs(i, j)
 * for i < j row by row. Each draw is uniform on [range_lo, range_hi]. Costs
 * are then replaced by their metric closure.
 */
ProblemInstance generate_instance(const GeneratorParams &params);

/// Instance JSON document (see README for the schema).
std::string to_json(const ProblemInstance &inst);
ProblemInstance from_json(const std::string &text);

void write_instance(const ProblemInstance &inst, const std::filesystem::path &path);
ProblemInstance read_instance(const std::filesystem::path &path);

} // namespace clroute

#endif
