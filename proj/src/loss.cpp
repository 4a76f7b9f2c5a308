#include "clroute/loss.hpp"

#include "clroute/errors.hpp"

#include <string>

namespace clroute {

namespace {

void require_route(const ProblemInstance &inst, const Route &route)
{
    if (!is_permutation_of(route, inst.t_regions))
        throw ParameterError("route is not a permutation of the " +
                             std::to_string(inst.t_regions) + " regions");
}

Regime require_regime(long m, long n, RegimeKind want)
{
    auto regime = classify_regime(m, n);
    if (!regime || regime->kind != want)
        throw RegimeError(std::string("expected ") + regime_name(want) + " regime, got m=" +
                          std::to_string(m) + ", n=" + std::to_string(n));
    return *regime;
}

LossBreakdown finish(double forgetting, double travel, double constant)
{
    return {forgetting, travel, constant, forgetting + travel + constant};
}

} // namespace

std::size_t best_final_region(const ProblemInstance &inst)
{
    std::size_t best = 0;
    double best_sum = inst.delta_row_sum(0);
    for (std::size_t i = 1; i < inst.t_regions; ++i) {
        const double s = inst.delta_row_sum(i);
        if (s < best_sum) {
            best = i;
            best_sum = s;
        }
    }
    return best;
}

std::vector<double> recency_weights(double r, std::size_t t)
{
    std::vector<double> w(t);
    const double scale = (1.0 - r) / static_cast<double>(t);
    double power = 1.0;
    for (std::size_t k = t; k-- > 0;) {
        w[k] = scale * power;
        power *= r;
    }
    return w;
}

double power_by_steps(double r, std::size_t t)
{
    double power = 1.0;
    for (std::size_t k = 0; k < t; ++k)
        power *= r;
    return power;
}

double travel_part(const ProblemInstance &inst, const Route &route)
{
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < route.size(); ++k)
        sum += inst.costs(route.order[k], route.order[k + 1]);
    return sum / static_cast<double>(route.size());
}

LossBreakdown loss_upper_under(const ProblemInstance &inst, const Route &route)
{
    require_regime(inst.m_features, inst.n_samples, RegimeKind::Underparameterized);
    require_route(inst, route);
    const std::size_t t = route.size();
    const std::size_t last = route.last();
    double forgetting = 0.0;
    for (std::size_t k = 0; k + 1 < t; ++k)
        forgetting += inst.delta(route.order[k], last);
    forgetting /= static_cast<double>(t);
    const double m = static_cast<double>(inst.m_features);
    const double n = static_cast<double>(inst.n_samples);
    return finish(forgetting, travel_part(inst, route), m * inst.sigma2 / (n - m - 1.0));
}

LossBreakdown loss_upper_over(const ProblemInstance &inst, const Route &route)
{
    const Regime regime =
        require_regime(inst.m_features, inst.n_samples, RegimeKind::Overparameterized);
    require_route(inst, route);
    const std::size_t t = route.size();
    const double r = regime.r;
    const auto weights = recency_weights(r, t);
    const double r_t = power_by_steps(r, t);

    double forgetting = 0.0;
    for (std::size_t k = t; k-- > 0;)
        forgetting += weights[k] * inst.delta_row_sum(route.order[k]);
    double initial = 0.0;
    for (std::size_t k = 0; k < t; ++k)
        initial += inst.delta0(route.order[k]);
    forgetting += r_t / static_cast<double>(t) * initial;

    const double m = static_cast<double>(inst.m_features);
    const double n = static_cast<double>(inst.n_samples);
    return finish(forgetting, travel_part(inst, route),
                  (1.0 - r_t) * m * inst.sigma2 / (m - n - 1.0));
}

LossBreakdown loss_upper(const ProblemInstance &inst, const Route &route)
{
    return inst.regime().under() ? loss_upper_under(inst, route) : loss_upper_over(inst, route);
}

double closed_form_forgetting_under(std::span<const Eigen::VectorXd> true_params, double sigma2,
                                    long m, long n)
{
    require_regime(m, n, RegimeKind::Underparameterized);
    if (true_params.empty())
        throw ParameterError("need at least one task");
    const std::size_t t = true_params.size();
    const auto &last = true_params.back();
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < t; ++i)
        sum += (last - true_params[i]).squaredNorm();
    const double md = static_cast<double>(m);
    return sum / static_cast<double>(t) + md * sigma2 / (static_cast<double>(n) - md - 1.0);
}

double closed_form_forgetting_over(std::span<const Eigen::VectorXd> true_params,
                                   const Eigen::VectorXd &w0, double sigma2, long m, long n)
{
    const Regime regime = require_regime(m, n, RegimeKind::Overparameterized);
    if (true_params.empty())
        throw ParameterError("need at least one task");
    const std::size_t t = true_params.size();
    const double r = regime.r;
    const auto weights = recency_weights(r, t);
    const double r_t = power_by_steps(r, t);

    double sum = 0.0;
    for (std::size_t i = t; i-- > 0;) {
        double row = 0.0;
        for (std::size_t j = 0; j < t; ++j)
            row += (true_params[i] - true_params[j]).squaredNorm();
        sum += weights[i] * row;
    }
    double initial = 0.0;
    for (const auto &w : true_params)
        initial += (w - w0).squaredNorm();
    sum += r_t / static_cast<double>(t) * initial;

    const double md = static_cast<double>(m);
    return sum + (1.0 - r_t) * md * sigma2 / (md - static_cast<double>(n) - 1.0);
}

} // namespace clroute
