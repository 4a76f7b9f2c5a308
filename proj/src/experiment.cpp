#include "clroute/experiment.hpp"

#include "clroute/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <thread>

namespace clroute {

std::string_view sweep_name(SweepVar var)
{
    return var == SweepVar::M ? "m" : "t";
}

std::string format_g12(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

ExperimentResult run_experiment(const ExperimentConfig &config)
{
    if (config.instances == 0)
        throw ParameterError("instances must be ≥ 1");
    if (config.strategies.empty())
        throw ParameterError("no strategies requested");

    ExperimentResult result;
    std::vector<GeneratorParams> points;
    std::vector<long> kept;
    for (long value : config.values) {
        GeneratorParams p;
        p.range_lo = config.range_lo;
        p.range_hi = config.range_hi;
        p.n = config.n;
        p.sigma2 = config.sigma2;
        if (config.sweep == SweepVar::M) {
            p.t = config.t;
            p.m = value;
        } else {
            if (value < 2)
                throw ParameterError("t must be ≥ 2");
            p.t = static_cast<std::size_t>(value);
            p.m = config.m;
        }
        if (!classify_regime(p.m, p.n)) {
            result.warnings.push_back("skipping m=" + std::to_string(p.m) + ": regime undefined for n=" +
                                      std::to_string(p.n));
            continue;
        }
        if (p.t > kMaxHeldKarpRegions)
            throw SizeLimitError("experiment needs the exact solver; T=" + std::to_string(p.t) +
                                 " exceeds " + std::to_string(kMaxHeldKarpRegions));
        points.push_back(p);
        kept.push_back(value);
    }
    if (points.empty())
        throw ParameterError("no sweep value has a defined regime");

    const std::size_t k = config.instances;
    const std::size_t s = config.strategies.size();
    const std::size_t jobs = points.size() * k;
    std::vector<double> ratios(jobs * s);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t job; (job = next.fetch_add(1)) < jobs;) {
            GeneratorParams p = points[job / k];
            p.seed = config.base_seed + job % k;
            const ProblemInstance inst = generate_instance(p);
            const PlanResult exact = plan_exact(inst);
            RatioOptions opts = config.ratio;
            opts.plan.seed = p.seed;
            for (std::size_t i = 0; i < s; ++i) {
                const Strategy strategy = config.strategies[i];
                const PlanResult candidate =
                    strategy == Strategy::Exact ? exact : plan(inst, strategy, opts.plan);
                ratios[job * s + i] = ratio_against(candidate, exact, opts.exclude_constant);
            }
        }
    };
    unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, jobs));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < threads; ++i)
        pool.emplace_back(worker);
    worker();
    for (auto &th : pool)
        th.join();

    for (std::size_t pi = 0; pi < points.size(); ++pi) {
        for (std::size_t i = 0; i < s; ++i) {
            ExperimentRow row;
            row.sweep = config.sweep;
            row.value = kept[pi];
            row.strategy = config.strategies[i];
            row.instances = k;
            double sum = 0.0;
            row.min_r = row.max_r = ratios[(pi * k) * s + i];
            for (std::size_t j = 0; j < k; ++j) {
                const double r = ratios[(pi * k + j) * s + i];
                sum += r;
                row.min_r = std::min(row.min_r, r);
                row.max_r = std::max(row.max_r, r);
            }
            row.mean_r = sum / static_cast<double>(k);
            result.rows.push_back(row);
        }
    }
    return result;
}

std::string to_csv(const std::vector<ExperimentRow> &rows)
{
    std::string out = "sweep_var,value,strategy,mean_R,min_R,max_R,instances\n";
    for (const auto &r : rows) {
        out += std::string(sweep_name(r.sweep)) + "," + std::to_string(r.value) + "," +
               std::string(strategy_name(r.strategy)) + "," + format_g12(r.mean_r) + "," +
               format_g12(r.min_r) + "," + format_g12(r.max_r) + "," + std::to_string(r.instances) +
               "\n";
    }
    return out;
}

std::string to_json(const std::vector<ExperimentRow> &rows)
{
    auto arr = nlohmann::ordered_json::array();
    for (const auto &r : rows) {
        nlohmann::ordered_json j;
        j["sweep_var"] = sweep_name(r.sweep);
        j["value"] = r.value;
        j["strategy"] = strategy_name(r.strategy);
        j["mean_R"] = r.mean_r;
        j["min_R"] = r.min_r;
        j["max_R"] = r.max_r;
        j["instances"] = r.instances;
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
}

} // namespace clroute
