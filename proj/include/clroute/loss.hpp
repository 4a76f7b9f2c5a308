/**
 * @file loss.hpp
 * @brief Closed-form expected losses and their route-dependent upper bounds.
 *
 * The planner only ever sees the dissimilarity bounds; the true-parameter
 * evaluators exist so the Monte Carlo checks have an exact reference.
 */

#ifndef CLROUTE_LOSS_HPP
#define CLROUTE_LOSS_HPP

#include "clroute/instance.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace clroute {

/// Expected overall loss upper bound split into its three components.
struct LossBreakdown {
    double forgetting_part = 0.0;
    double travel_part = 0.0;
    /// Route-independent noise term.
    double constant_part = 0.0;
    double total = 0.0;
};

/// Region with the smallest delta row sum, lowest index on ties.
std::size_t best_final_region(const ProblemInstance &inst);

/// Recency weights (1-r) r^(T-i) / T for positions i = 1..T, stored 0-based.
/// Powers are accumulated by repeated multiplication starting at i = T.
std::vector<double> recency_weights(double r, std::size_t t);

/// r^t by repeated multiplication, matching recency_weights.
double power_by_steps(double r, std::size_t t);

/// (1/T) * sum of consecutive travel costs along the route.
double travel_part(const ProblemInstance &inst, const Route &route);

LossBreakdown loss_upper_under(const ProblemInstance &inst, const Route &route);
LossBreakdown loss_upper_over(const ProblemInstance &inst, const Route &route);

/// Dispatches on inst.regime().
LossBreakdown loss_upper(const ProblemInstance &inst, const Route &route);

/// Expected forgetting loss after least squares on each task, for true
/// parameters listed in visiting order.
double closed_form_forgetting_under(std::span<const Eigen::VectorXd> true_params, double sigma2,
                                    long m, long n);

/// Expected forgetting loss of minimum-norm sequential interpolation started
/// from @p w0, for true parameters listed in visiting order.
double closed_form_forgetting_over(std::span<const Eigen::VectorXd> true_params,
                                   const Eigen::VectorXd &w0, double sigma2, long m, long n);

} // namespace clroute

#endif
