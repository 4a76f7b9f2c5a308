/**
 * @file experiment.hpp
 * @brief Ratio sweeps over feature count m or region count T.
 */

#ifndef CLROUTE_EXPERIMENT_HPP
#define CLROUTE_EXPERIMENT_HPP

#include "clroute/planner.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace clroute {

enum class SweepVar { M, T };

std::string_view sweep_name(SweepVar var);

struct ExperimentConfig {
    SweepVar sweep = SweepVar::M;
    std::vector<long> values;
    /// Held fixed when sweeping m.
    std::size_t t = 8;
    /// Held fixed when sweeping T.
    long m = 80;
    long n = 100;
    double sigma2 = 1.0;
    double range_lo = 1.0;
    double range_hi = 10.0;
    std::size_t instances = 30;
    /// Instance k (0-based) of every sweep point uses seed base_seed + k.
    std::uint64_t base_seed = 1;
    std::vector<Strategy> strategies{Strategy::Algorithm1};
    RatioOptions ratio;
    /// 0 picks the hardware count.
    unsigned threads = 0;
};

struct ExperimentRow {
    SweepVar sweep = SweepVar::M;
    long value = 0;
    Strategy strategy = Strategy::Algorithm1;
    double mean_r = 0.0;
    double min_r = 0.0;
    double max_r = 0.0;
    std::size_t instances = 0;
};

struct ExperimentResult {
    /// Sweep order, then strategy order of the config.
    std::vector<ExperimentRow> rows;
    /// One line per skipped sweep value.
    std::vector<std::string> warnings;
};

/// Skips m values with no defined regime. Throws ParameterError if nothing
/// is left to run and SizeLimitError if a point exceeds the exact solver.
ExperimentResult run_experiment(const ExperimentConfig &config);

/// Header sweep_var,value,strategy,mean_R,min_R,max_R,instances; 12 significant digits.
std::string to_csv(const std::vector<ExperimentRow> &rows);
std::string to_json(const std::vector<ExperimentRow> &rows);

/// %.12g rendering used by every CSV writer.
std::string format_g12(double x);

} // namespace clroute

#endif
