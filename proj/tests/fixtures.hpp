// Shared instances and independent brute-force oracles for the test suites.
#ifndef CLROUTE_TESTS_FIXTURES_HPP
#define CLROUTE_TESTS_FIXTURES_HPP

#include "clroute/instance.hpp"
#include "clroute/loss.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

namespace fixtures {

using clroute::ProblemInstance;
using clroute::Route;

/// Three regions, row sums 6, 8, 10; path costs 1 and 1 with c_{1,3} = 2.
inline ProblemInstance worked_instance(long m = 4, long n = 10, double sigma2 = 1.0)
{
    ProblemInstance inst;
    inst.t_regions = 3;
    inst.delta.resize(3, 3);
    inst.delta << 0, 2, 4, 2, 0, 6, 4, 6, 0;
    inst.delta0 = Eigen::VectorXd::Ones(3);
    inst.costs.resize(3, 3);
    inst.costs << 0, 1, 2, 1, 0, 1, 2, 1, 0;
    inst.m_features = m;
    inst.n_samples = n;
    inst.sigma2 = sigma2;
    return inst;
}

inline Route one_based(std::initializer_list<std::size_t> order)
{
    Route r;
    for (auto v : order)
        r.order.push_back(v - 1);
    return r;
}

/// Minimum of f over every permutation of 0..t-1 by exhaustive scan.
inline std::pair<Route, double> permutation_scan(std::size_t t,
                                                 const std::function<double(const Route &)> &f)
{
    Route r;
    r.order.resize(t);
    std::iota(r.order.begin(), r.order.end(), std::size_t{0});
    Route best = r;
    double best_value = std::numeric_limits<double>::infinity();
    do {
        const double v = f(r);
        if (v < best_value) {
            best_value = v;
            best = r;
        }
    } while (std::next_permutation(r.order.begin(), r.order.end()));
    return {best, best_value};
}

/// Travel cost (unscaled) of the cheapest Hamiltonian path, by enumeration.
inline double brute_force_shp(const Eigen::MatrixXd &costs)
{
    const auto t = static_cast<std::size_t>(costs.rows());
    return permutation_scan(t, [&](const Route &r) {
               double w = 0.0;
               for (std::size_t k = 0; k + 1 < t; ++k)
                   w += costs(r.order[k], r.order[k + 1]);
               return w;
           }).second;
}

/// Minimum perfect matching weight by recursive enumeration of all matchings.
inline double brute_force_matching(const Eigen::MatrixXd &w, std::vector<std::size_t> vs)
{
    if (vs.empty())
        return 0.0;
    const std::size_t first = vs.front();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < vs.size(); ++k) {
        std::vector<std::size_t> rest;
        for (std::size_t i = 1; i < vs.size(); ++i)
            if (i != k)
                rest.push_back(vs[i]);
        best = std::min(best, w(first, vs[k]) + brute_force_matching(w, rest));
    }
    return best;
}

} // namespace fixtures

#endif
