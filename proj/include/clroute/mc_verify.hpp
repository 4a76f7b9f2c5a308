/**
 * @file mc_verify.hpp
 * @brief Monte Carlo simulation of the linear-regression continual learner,
 * used to check the closed-form expected forgetting losses.
 *
 * Features are i.i.d. N(0, 1), noise is i.i.d. N(0, sigma2). Trials are split
 * into fixed blocks of kTrialsPerBlock, each with its own Rng stream derived
 * from the master seed; block statistics are merged in block order, so the
 * report does not depend on the number of worker threads.
 */

#ifndef CLROUTE_MC_VERIFY_HPP
#define CLROUTE_MC_VERIFY_HPP

#include "clroute/instance.hpp"
#include "clroute/random.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace clroute {

struct TaskGroundTruth {
    /// One parameter vector of length m per region.
    std::vector<Eigen::VectorXd> w_star;
    /// Initial predictor, length m.
    Eigen::VectorXd w0;
    double sigma2 = 1.0;

    long features() const { return static_cast<long>(w0.size()); }
};

struct McReport {
    double empirical_mean = 0.0;
    double closed_form = 0.0;
    double std_error = 0.0;
    std::size_t trials = 0;
    /// |empirical - closed| / std_error.
    double z = 0.0;
};

inline constexpr std::size_t kTrialsPerBlock = 1000;

/// Least-squares solution (x x^T)^{-1} x y for an m x n feature matrix x
/// with n >= m. Returns nothing if x x^T is singular.
std::optional<Eigen::VectorXd> least_squares_fit(const Eigen::MatrixXd &x, const Eigen::VectorXd &y);

/// w + x (x^T x)^{-1} (y - x^T w): the interpolating solution closest to w,
/// for n <= m. Returns nothing if x^T x is singular.
std::optional<Eigen::VectorXd> interpolation_update(const Eigen::VectorXd &w,
                                                    const Eigen::MatrixXd &x,
                                                    const Eigen::VectorXd &y);

/// One least-squares fit on a fresh task: x is m x n, y = x^T w* + z.
Eigen::VectorXd simulate_task_under(const Eigen::VectorXd &w_star, long n, double sigma2, Rng &rng);

/// Minimum-distance interpolation updates along the route, starting from w0.
Eigen::VectorXd simulate_sequence_over(const TaskGroundTruth &truth, const Route &route, long n,
                                       Rng &rng);

/// Average squared distance from w to every task's true parameters.
double forgetting_loss(const Eigen::VectorXd &w, const TaskGroundTruth &truth);

/// Closed-form expected forgetting loss of the route in the regime of (m, n).
double closed_form_forgetting(const TaskGroundTruth &truth, const Route &route, long n);

/// Runs @p trials independent learning sequences and compares the mean
/// forgetting loss with the closed form. @p threads = 0 picks the hardware count.
McReport verify_lemma(const TaskGroundTruth &truth, const Route &route, long n, std::size_t trials,
                      std::uint64_t seed, unsigned threads = 0);

/**
 * Tasks at the vertices of a scaled simplex: every pair is exactly
 * @p pair_sq_dist apart, and w0 sits @p init_sq_dist from every task.
 * Needs m >= t + 1 and init_sq_dist >= pair_sq_dist / 2.
 */
TaskGroundTruth simplex_truth(std::size_t t, long m, double pair_sq_dist, double init_sq_dist,
                              double sigma2);

/// Gaussian task parameters with per-coordinate standard deviation @p scale;
/// w0 drawn the same way with @p w0_scale.
TaskGroundTruth random_truth(std::size_t t, long m, double scale, double w0_scale, double sigma2,
                             Rng &rng);

std::string to_json(const McReport &report);

} // namespace clroute

#endif
