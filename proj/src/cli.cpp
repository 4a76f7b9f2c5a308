#include "clroute/cli.hpp"

#include "clroute/errors.hpp"
#include "clroute/experiment.hpp"
#include "clroute/instance.hpp"
#include "clroute/mc_verify.hpp"
#include "clroute/planner.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>

namespace clroute::cli {

namespace {

struct GenArgs {
    std::size_t t = 0;
    std::uint64_t seed = 0;
    long m = 80;
    long n = 100;
    double sigma2 = 1.0;
    double lo = 1.0;
    double hi = 10.0;
    std::string out;
};

struct PlanArgs {
    GenArgs gen;
    std::string in;
    std::string strategy = "alg1";
    std::string format = "text";
    bool fast_matching = false;
    bool random_interior = false;
};

struct ExperimentArgs {
    std::string sweep = "m";
    std::vector<long> values;
    std::size_t t = 8;
    long m = 80;
    long n = 100;
    double sigma2 = 1.0;
    std::size_t instances = 30;
    std::uint64_t seed = 1;
    std::vector<std::string> strategies{"alg1"};
    std::string out;
    std::string format = "csv";
    bool exclude_constant = false;
    bool random_interior = false;
    unsigned threads = 0;
};

struct VerifyArgs {
    std::size_t t = 3;
    long under_m = 4;
    long under_n = 10;
    long over_m = 12;
    long over_n = 4;
    double sigma2 = 1.0;
    double pair_sq_dist = 2.0;
    double init_sq_dist = 1.5;
    std::size_t trials = 20000;
    std::uint64_t seed = 1;
    double threshold = 3.0;
    std::string out;
    unsigned threads = 0;
};

void add_generator_flags(CLI::App &cmd, GenArgs &g)
{
    cmd.add_option("--t", g.t, "number of regions");
    cmd.add_option("--seed", g.seed, "random seed");
    cmd.add_option("--m", g.m, "feature count");
    cmd.add_option("--n", g.n, "sample count");
    cmd.add_option("--sigma2", g.sigma2, "noise variance");
    cmd.add_option("--lo", g.lo, "lower end of the draw range");
    cmd.add_option("--hi", g.hi, "upper end of the draw range");
}

GeneratorParams to_params(const GenArgs &g)
{
    return {g.t, g.seed, g.lo, g.hi, g.m, g.n, g.sigma2};
}

/// Writes to the file, or to @p out when path is empty.
void emit(const std::string &path, const std::string &text, std::ostream &out)
{
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::ios_base::failure("cannot open " + path + " for writing");
    f << text;
    if (!f)
        throw std::ios_base::failure("write failed: " + path);
}

std::string summary(const ProblemInstance &inst, const ValidationReport &report)
{
    std::string s = report.ok() ? "valid instance" : "INVALID instance";
    s += ": T=" + std::to_string(inst.t_regions) + ", m=" + std::to_string(inst.m_features) +
         ", n=" + std::to_string(inst.n_samples);
    if (report.regime)
        s += std::string(", ") + regime_name(report.regime->kind);
    s += "\n";
    for (const auto &v : report.violations)
        s += "  " + v + "\n";
    return s;
}

int cmd_gen(const GenArgs &args, std::ostream &out, std::ostream &err)
{
    if (args.t < 2) {
        err << "error: t must be ≥ 2\n";
        return kUsage;
    }
    const ProblemInstance inst = generate_instance(to_params(args));
    const auto report = validate_instance(inst);
    if (args.out.empty()) {
        out << to_json(inst);
    } else {
        write_instance(inst, args.out);
        out << "wrote " << args.out << "\n";
    }
    err << summary(inst, report);
    return report.ok() ? kOk : kUsage;
}

int cmd_plan(const PlanArgs &args, std::ostream &out, std::ostream &err)
{
    const auto strategy = parse_strategy(args.strategy);
    if (!strategy) {
        err << "error: unknown strategy '" << args.strategy << "' (alg1, exact, forgetting, random)\n";
        return kUsage;
    }
    if (args.format != "text" && args.format != "json" && args.format != "csv") {
        err << "error: unknown format '" << args.format << "'\n";
        return kUsage;
    }

    ProblemInstance inst;
    if (!args.in.empty()) {
        try {
            inst = read_instance(args.in);
        } catch (const std::exception &e) {
            err << "error: " << e.what() << "\n";
            return kIo;
        }
    } else {
        if (args.gen.t < 2) {
            err << "error: give --in FILE or --t (≥ 2) to generate an instance\n";
            return kUsage;
        }
        inst = generate_instance(to_params(args.gen));
    }
    const auto report = validate_instance(inst);
    if (!report.ok()) {
        err << summary(inst, report);
        return kUsage;
    }

    PlanOptions options;
    options.matching = args.fast_matching ? MatchingMode::Greedy : MatchingMode::Exact;
    options.interior = args.random_interior ? BaselineInterior::Random : BaselineInterior::Ascending;
    options.seed = args.gen.seed;
    const PlanResult result = plan(inst, *strategy, options);
    const auto &b = result.breakdown;

    if (args.format == "json") {
        nlohmann::ordered_json j;
        j["strategy"] = strategy_name(result.strategy);
        j["regime"] = regime_name(report.regime->kind);
        auto route = nlohmann::ordered_json::array();
        for (std::size_t v : result.route.order)
            route.push_back(v + 1);
        j["route"] = route;
        j["forgetting"] = b.forgetting_part;
        j["travel"] = b.travel_part;
        j["constant"] = b.constant_part;
        j["total"] = b.total;
        j["elapsed_s"] = result.elapsed.count();
        out << j.dump(2) << "\n";
    } else if (args.format == "csv") {
        out << "forgetting,travel,constant,total\n"
            << format_g12(b.forgetting_part) << "," << format_g12(b.travel_part) << ","
            << format_g12(b.constant_part) << "," << format_g12(b.total) << "\n";
    } else {
        out << "strategy: " << strategy_name(result.strategy) << "\n"
            << "regime: " << regime_name(report.regime->kind) << "\n"
            << "route: " << format_route(result.route) << "\n"
            << "forgetting: " << format_g12(b.forgetting_part) << "\n"
            << "travel: " << format_g12(b.travel_part) << "\n"
            << "constant: " << format_g12(b.constant_part) << "\n"
            << "total: " << format_g12(b.total) << "\n"
            << "elapsed_s: " << result.elapsed.count() << "\n";
    }
    return kOk;
}

int cmd_experiment(const ExperimentArgs &args, std::ostream &out, std::ostream &err)
{
    ExperimentConfig config;
    if (args.sweep == "m")
        config.sweep = SweepVar::M;
    else if (args.sweep == "t")
        config.sweep = SweepVar::T;
    else {
        err << "error: --sweep must be m or t\n";
        return kUsage;
    }
    if (args.format != "csv" && args.format != "json") {
        err << "error: unknown format '" << args.format << "'\n";
        return kUsage;
    }
    config.values = args.values;
    if (config.values.empty())
        config.values = config.sweep == SweepVar::M
                            ? std::vector<long>{20, 40, 60, 80, 120, 140, 160, 180}
                            : std::vector<long>{4, 5, 6, 7, 8, 9};
    config.t = args.t;
    config.m = args.m;
    config.n = args.n;
    config.sigma2 = args.sigma2;
    config.instances = args.instances;
    config.base_seed = args.seed;
    config.threads = args.threads;
    config.ratio.exclude_constant = args.exclude_constant;
    config.ratio.plan.interior =
        args.random_interior ? BaselineInterior::Random : BaselineInterior::Ascending;
    config.strategies.clear();
    for (const auto &name : args.strategies) {
        const auto s = parse_strategy(name);
        if (!s) {
            err << "error: unknown strategy '" << name << "'\n";
            return kUsage;
        }
        config.strategies.push_back(*s);
    }

    const ExperimentResult result = run_experiment(config);
    for (const auto &w : result.warnings)
        err << "warning: " << w << "\n";
    emit(args.out, args.format == "csv" ? to_csv(result.rows) : to_json(result.rows), out);
    return kOk;
}

int cmd_verify(const VerifyArgs &args, std::ostream &out, std::ostream &err)
{
    const auto under = classify_regime(args.under_m, args.under_n);
    const auto over = classify_regime(args.over_m, args.over_n);
    if (!under || !under->under() || !over || !over->over()) {
        err << "error: need n ≥ m+2 for the under check and m ≥ n+2 for the over check\n";
        return kUsage;
    }

    Route route;
    for (std::size_t i = 0; i < args.t; ++i)
        route.order.push_back(i);

    const auto run_one = [&](long m, long n, std::uint64_t seed) {
        const TaskGroundTruth truth =
            simplex_truth(args.t, m, args.pair_sq_dist, args.init_sq_dist, args.sigma2);
        return verify_lemma(truth, route, n, args.trials, seed, args.threads);
    };
    const McReport under_report = run_one(args.under_m, args.under_n, args.seed);
    const McReport over_report = run_one(args.over_m, args.over_n, args.seed + 1);

    const std::string text = "{\"underparameterized\": " + to_json(under_report) +
                             ", \"overparameterized\": " + to_json(over_report) + "}\n";
    emit(args.out, text, out);

    bool ok = true;
    for (const auto *r : {&under_report, &over_report})
        ok = ok && r->z <= args.threshold;
    if (!ok)
        err << "verification failed: |z| above threshold " << args.threshold << "\n";
    return ok ? kOk : kVerifyFailed;
}

} // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Route planning for continual learning over distributed tasks", "cl-route"};
    app.require_subcommand(1);

    GenArgs gen;
    auto *gen_cmd = app.add_subcommand("gen", "generate a random instance file");
    add_generator_flags(*gen_cmd, gen);
    gen_cmd->add_option("--out", gen.out, "output path (stdout if omitted)");

    PlanArgs plan_args;
    auto *plan_cmd = app.add_subcommand("plan", "plan a route for an instance");
    add_generator_flags(*plan_cmd, plan_args.gen);
    plan_cmd->add_option("--in", plan_args.in, "instance file (otherwise generated from --t/--seed)");
    plan_cmd->add_option("--strategy", plan_args.strategy, "alg1, exact, forgetting or random");
    plan_cmd->add_option("--format", plan_args.format, "text, json or csv");
    plan_cmd->add_flag("--fast-matching", plan_args.fast_matching,
                       "greedy matching; voids the 3/2 guarantee");
    plan_cmd->add_flag("--random-interior", plan_args.random_interior,
                       "forgetting baseline: shuffle the interior order (underparameterized)");

    ExperimentArgs exp;
    auto *exp_cmd = app.add_subcommand("experiment", "ratio sweep against the exact optimum");
    exp_cmd->add_option("--sweep", exp.sweep, "m or t");
    exp_cmd->add_option("--values", exp.values, "sweep values")->delimiter(',');
    exp_cmd->add_option("--t", exp.t, "region count when sweeping m");
    exp_cmd->add_option("--m", exp.m, "feature count when sweeping t");
    exp_cmd->add_option("--n", exp.n, "sample count");
    exp_cmd->add_option("--sigma2", exp.sigma2, "noise variance");
    exp_cmd->add_option("--instances", exp.instances, "instances per sweep point");
    exp_cmd->add_option("--seed", exp.seed, "base seed");
    exp_cmd->add_option("--strategy", exp.strategies, "strategies to compare")->delimiter(',');
    exp_cmd->add_option("--out", exp.out, "output path (stdout if omitted)");
    exp_cmd->add_option("--format", exp.format, "csv or json");
    exp_cmd->add_flag("--exclude-constant", exp.exclude_constant,
                      "drop the route-independent noise term from R");
    exp_cmd->add_flag("--random-interior", exp.random_interior,
                      "forgetting baseline: shuffle the interior order");
    exp_cmd->add_option("--threads", exp.threads, "worker threads (0 = all cores)");

    VerifyArgs ver;
    auto *ver_cmd = app.add_subcommand("verify", "Monte Carlo check of the closed-form losses");
    ver_cmd->add_option("--t", ver.t, "task count");
    ver_cmd->add_option("--under-m", ver.under_m);
    ver_cmd->add_option("--under-n", ver.under_n);
    ver_cmd->add_option("--over-m", ver.over_m);
    ver_cmd->add_option("--over-n", ver.over_n);
    ver_cmd->add_option("--sigma2", ver.sigma2, "noise variance");
    ver_cmd->add_option("--pair-dist", ver.pair_sq_dist, "squared distance between tasks");
    ver_cmd->add_option("--init-dist", ver.init_sq_dist, "squared distance from w0 to each task");
    ver_cmd->add_option("--trials", ver.trials, "trials per check");
    ver_cmd->add_option("--seed", ver.seed, "master seed");
    ver_cmd->add_option("--threshold", ver.threshold, "largest acceptable |z|");
    ver_cmd->add_option("--out", ver.out, "output path (stdout if omitted)");
    ver_cmd->add_option("--threads", ver.threads, "worker threads (0 = all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e, out, err) == 0 ? kOk : kUsage;
    }

    try {
        if (gen_cmd->parsed())
            return cmd_gen(gen, out, err);
        if (plan_cmd->parsed())
            return cmd_plan(plan_args, out, err);
        if (exp_cmd->parsed())
            return cmd_experiment(exp, out, err);
        return cmd_verify(ver, out, err);
    } catch (const SizeLimitError &e) {
        err << "error: " << e.what() << "\n";
        return kSizeLimit;
    } catch (const std::ios_base::failure &e) {
        err << "error: " << e.what() << "\n";
        return kIo;
    } catch (const ParameterError &e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const RegimeError &e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
}

} // namespace clroute::cli
