#include "clroute/mc_verify.hpp"

#include "clroute/errors.hpp"
#include "clroute/loss.hpp"

#include <json.hpp>

#include <atomic>
#include <cmath>
#include <iostream>
#include <limits>
#include <thread>

namespace clroute {

namespace {

Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng &rng)
{
    Eigen::MatrixXd x(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i)
            x(i, j) = rng.normal();
    return x;
}

Eigen::VectorXd gaussian_vector(Eigen::Index len, double stddev, Rng &rng)
{
    Eigen::VectorXd z(len);
    for (Eigen::Index i = 0; i < len; ++i)
        z(i) = stddev * rng.normal();
    return z;
}

Regime regime_of(long m, long n)
{
    auto regime = classify_regime(m, n);
    if (!regime)
        throw RegimeError("regime undefined for m=" + std::to_string(m) + ", n=" + std::to_string(n));
    return *regime;
}

struct BlockStats {
    std::size_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x)
    {
        ++count;
        const double d = x - mean;
        mean += d / static_cast<double>(count);
        m2 += d * (x - mean);
    }

    void merge(const BlockStats &o)
    {
        if (o.count == 0)
            return;
        const double total = static_cast<double>(count + o.count);
        const double d = o.mean - mean;
        mean += d * static_cast<double>(o.count) / total;
        m2 += o.m2 + d * d * static_cast<double>(count) * static_cast<double>(o.count) / total;
        count += o.count;
    }
};

} // namespace

std::optional<Eigen::VectorXd> least_squares_fit(const Eigen::MatrixXd &x, const Eigen::VectorXd &y)
{
    // least squares on the n x m design x^T
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x.transpose());
    if (qr.rank() < x.rows())
        return std::nullopt;
    return Eigen::VectorXd(qr.solve(y));
}

std::optional<Eigen::VectorXd> interpolation_update(const Eigen::VectorXd &w,
                                                    const Eigen::MatrixXd &x,
                                                    const Eigen::VectorXd &y)
{
    Eigen::LLT<Eigen::MatrixXd> gram(x.transpose() * x);
    if (gram.info() != Eigen::Success)
        return std::nullopt;
    return Eigen::VectorXd(w + x * gram.solve(y - x.transpose() * w));
}

Eigen::VectorXd simulate_task_under(const Eigen::VectorXd &w_star, long n, double sigma2, Rng &rng)
{
    const auto m = w_star.size();
    regime_of(static_cast<long>(m), n);
    const double sigma = std::sqrt(sigma2);
    for (;;) {
        const Eigen::MatrixXd x = gaussian_matrix(m, n, rng);
        const Eigen::VectorXd y = x.transpose() * w_star + gaussian_vector(n, sigma, rng);
        if (auto w = least_squares_fit(x, y))
            return *w;
        std::cerr << "warning: rank-deficient design drawn, resampling\n";
    }
}

Eigen::VectorXd simulate_sequence_over(const TaskGroundTruth &truth, const Route &route, long n,
                                       Rng &rng)
{
    const auto m = truth.w0.size();
    if (!regime_of(static_cast<long>(m), n).over())
        throw RegimeError("sequential interpolation needs m ≥ n + 2");
    if (!is_permutation_of(route, truth.w_star.size()))
        throw ParameterError("route does not match the ground truth task count");
    const double sigma = std::sqrt(truth.sigma2);

    Eigen::VectorXd w = truth.w0;
    for (std::size_t task : route.order) {
        for (;;) {
            const Eigen::MatrixXd x = gaussian_matrix(m, n, rng);
            const Eigen::VectorXd y =
                x.transpose() * truth.w_star[task] + gaussian_vector(n, sigma, rng);
            if (auto next = interpolation_update(w, x, y)) {
                w = std::move(*next);
                break;
            }
            std::cerr << "warning: singular Gram matrix drawn, resampling\n";
        }
    }
    return w;
}

double forgetting_loss(const Eigen::VectorXd &w, const TaskGroundTruth &truth)
{
    double sum = 0.0;
    for (const auto &ws : truth.w_star)
        sum += (w - ws).squaredNorm();
    return sum / static_cast<double>(truth.w_star.size());
}

double closed_form_forgetting(const TaskGroundTruth &truth, const Route &route, long n)
{
    std::vector<Eigen::VectorXd> ordered;
    ordered.reserve(route.size());
    for (std::size_t task : route.order)
        ordered.push_back(truth.w_star[task]);
    const long m = truth.features();
    if (regime_of(m, n).under())
        return closed_form_forgetting_under(ordered, truth.sigma2, m, n);
    return closed_form_forgetting_over(ordered, truth.w0, truth.sigma2, m, n);
}

McReport verify_lemma(const TaskGroundTruth &truth, const Route &route, long n, std::size_t trials,
                      std::uint64_t seed, unsigned threads)
{
    if (trials < 100)
        throw ParameterError("need at least 100 trials");
    if (!is_permutation_of(route, truth.w_star.size()))
        throw ParameterError("route does not match the ground truth task count");
    const long m = truth.features();
    for (const auto &w : truth.w_star)
        if (w.size() != m)
            throw ParameterError("all parameter vectors must have length m");
    const bool under = regime_of(m, n).under();

    const std::size_t blocks = (trials + kTrialsPerBlock - 1) / kTrialsPerBlock;
    std::vector<BlockStats> stats(blocks);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t b; (b = next.fetch_add(1)) < blocks;) {
            Rng rng = Rng::split(seed, b);
            const std::size_t count = std::min(kTrialsPerBlock, trials - b * kTrialsPerBlock);
            for (std::size_t k = 0; k < count; ++k) {
                const Eigen::VectorXd w =
                    under ? simulate_task_under(truth.w_star[route.last()], n, truth.sigma2, rng)
                          : simulate_sequence_over(truth, route, n, rng);
                stats[b].add(forgetting_loss(w, truth));
            }
        }
    };
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, blocks));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < threads; ++i)
        pool.emplace_back(worker);
    worker();
    for (auto &th : pool)
        th.join();

    BlockStats all;
    for (const auto &s : stats)
        all.merge(s);

    McReport report;
    report.trials = trials;
    report.empirical_mean = all.mean;
    report.closed_form = closed_form_forgetting(truth, route, n);
    const double variance = all.m2 / static_cast<double>(trials - 1);
    report.std_error = std::sqrt(std::max(variance, 0.0) / static_cast<double>(trials));
    const double gap = std::abs(report.empirical_mean - report.closed_form);
    if (report.std_error > 0.0)
        report.z = gap / report.std_error;
    else
        report.z = gap == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return report;
}

TaskGroundTruth simplex_truth(std::size_t t, long m, double pair_sq_dist, double init_sq_dist,
                              double sigma2)
{
    if (t == 0 || m < static_cast<long>(t) + 1)
        throw ParameterError("simplex placement needs m ≥ t + 1");
    const double corner_sq = pair_sq_dist / 2.0;
    if (pair_sq_dist < 0.0 || init_sq_dist < corner_sq)
        throw ParameterError("need init_sq_dist ≥ pair_sq_dist / 2 ≥ 0");

    TaskGroundTruth truth;
    truth.sigma2 = sigma2;
    const double corner = std::sqrt(corner_sq);
    for (std::size_t i = 0; i < t; ++i) {
        Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
        w(static_cast<Eigen::Index>(i)) = corner;
        truth.w_star.push_back(std::move(w));
    }
    truth.w0 = Eigen::VectorXd::Zero(m);
    truth.w0(static_cast<Eigen::Index>(t)) = std::sqrt(init_sq_dist - corner_sq);
    return truth;
}

TaskGroundTruth random_truth(std::size_t t, long m, double scale, double w0_scale, double sigma2,
                             Rng &rng)
{
    TaskGroundTruth truth;
    truth.sigma2 = sigma2;
    for (std::size_t i = 0; i < t; ++i)
        truth.w_star.push_back(gaussian_vector(m, scale, rng));
    truth.w0 = gaussian_vector(m, w0_scale, rng);
    return truth;
}

std::string to_json(const McReport &report)
{
    nlohmann::ordered_json j;
    j["empirical"] = report.empirical_mean;
    j["closed_form"] = report.closed_form;
    j["std_error"] = report.std_error;
    j["trials"] = report.trials;
    j["z"] = std::isfinite(report.z) ? nlohmann::ordered_json(report.z) : nlohmann::ordered_json(nullptr);
    return j.dump();
}

} // namespace clroute
