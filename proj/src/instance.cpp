#include "clroute/instance.hpp"

#include "clroute/errors.hpp"
#include "clroute/random.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace clroute {

std::optional<Regime> classify_regime(long m, long n)
{
    if (m < 1 || n < 1)
        return std::nullopt;
    if (n >= m + 2)
        return Regime{RegimeKind::Underparameterized, 0.0};
    if (m >= n + 2)
        return Regime{RegimeKind::Overparameterized,
                      1.0 - static_cast<double>(n) / static_cast<double>(m)};
    return std::nullopt;
}

const char *regime_name(RegimeKind kind)
{
    return kind == RegimeKind::Underparameterized ? "underparameterized" : "overparameterized";
}

Regime ProblemInstance::regime() const
{
    auto regime = classify_regime(m_features, n_samples);
    if (!regime) {
        std::ostringstream msg;
        msg << "regime undefined for m=" << m_features << ", n=" << n_samples;
        throw RegimeError(msg.str());
    }
    return *regime;
}

double ProblemInstance::delta_row_sum(std::size_t i) const
{
    double sum = 0.0;
    for (std::size_t t = 0; t < t_regions; ++t)
        sum += delta(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t));
    return sum;
}

bool ProblemInstance::operator==(const ProblemInstance &other) const
{
    return t_regions == other.t_regions && m_features == other.m_features &&
           n_samples == other.n_samples && sigma2 == other.sigma2 &&
           delta.rows() == other.delta.rows() && delta.cols() == other.delta.cols() &&
           delta == other.delta && delta0.size() == other.delta0.size() &&
           delta0 == other.delta0 && costs.rows() == other.costs.rows() &&
           costs.cols() == other.costs.cols() && costs == other.costs;
}

bool is_permutation_of(const Route &route, std::size_t t)
{
    if (route.order.size() != t)
        return false;
    std::vector<bool> seen(t, false);
    for (std::size_t v : route.order) {
        if (v >= t || seen[v])
            return false;
        seen[v] = true;
    }
    return true;
}

std::string format_route(const Route &route)
{
    std::string out;
    for (std::size_t i = 0; i < route.order.size(); ++i) {
        if (i)
            out += ' ';
        out += std::to_string(route.order[i] + 1);
    }
    return out;
}

namespace {

std::string num(double x)
{
    std::ostringstream s;
    s << x;
    return s.str();
}

std::string idx(std::size_t i, std::size_t j)
{
    return "{" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "}";
}

void check_square(const Eigen::MatrixXd &m, const char *name, std::size_t t,
                  std::vector<std::string> &out)
{
    if (static_cast<std::size_t>(m.rows()) != t || static_cast<std::size_t>(m.cols()) != t)
        out.push_back(std::string(name) + " must be " + std::to_string(t) + "x" +
                      std::to_string(t) + ", got " + std::to_string(m.rows()) + "x" +
                      std::to_string(m.cols()));
}

void check_pairwise(const Eigen::MatrixXd &m, const char *name, const char *sym,
                    std::vector<std::string> &out)
{
    const auto t = static_cast<std::size_t>(m.rows());
    for (std::size_t i = 0; i < t; ++i) {
        for (std::size_t j = 0; j < t; ++j) {
            const double v = m(i, j);
            if (!std::isfinite(v)) {
                out.push_back(std::string(name) + " must be finite: " + sym + "_" + idx(i, j));
                continue;
            }
            if (v < 0.0)
                out.push_back(std::string(name) + " must be ≥ 0: " + sym + "_" + idx(i, j) + "=" +
                              num(v));
            if (i == j && v != 0.0)
                out.push_back(std::string(name) + " diagonal must be zero: " + sym + "_" +
                              idx(i, j) + "=" + num(v));
            if (i < j && v != m(j, i))
                out.push_back(std::string(name) + " must be symmetric: " + sym + "_" + idx(i, j) +
                              "=" + num(v) + " != " + sym + "_" + idx(j, i) + "=" + num(m(j, i)));
        }
    }
}

} // namespace

ValidationReport validate_instance(const ProblemInstance &inst)
{
    ValidationReport report;
    auto &out = report.violations;
    const std::size_t t = inst.t_regions;

    if (t < 2)
        out.push_back("t must be ≥ 2");
    check_square(inst.delta, "delta", t, out);
    check_square(inst.costs, "costs", t, out);
    if (static_cast<std::size_t>(inst.delta0.size()) != t)
        out.push_back("delta0 must have " + std::to_string(t) + " entries, got " +
                      std::to_string(inst.delta0.size()));
    const bool shapes_ok = out.empty();

    if (shapes_ok) {
        check_pairwise(inst.delta, "delta", "Δ", out);
        for (std::size_t i = 0; i < t; ++i) {
            const double v = inst.delta0(i);
            if (!std::isfinite(v) || v < 0.0)
                out.push_back("delta0 must be ≥ 0: Δ_{" + std::to_string(i + 1) + ",0}=" + num(v));
        }
        const std::size_t before_costs = out.size();
        check_pairwise(inst.costs, "costs", "c", out);
        if (out.size() == before_costs) {
            const auto &c = inst.costs;
            for (std::size_t i = 0; i < t; ++i)
                for (std::size_t j = i + 1; j < t; ++j)
                    for (std::size_t k = 0; k < t; ++k) {
                        if (k == i || k == j)
                            continue;
                        const double via = c(i, k) + c(k, j);
                        if (c(i, j) > via)
                            out.push_back("triangle inequality: c_" + idx(i, j) + "=" +
                                          num(c(i, j)) + " > c_" + idx(i, k) + "+c_" + idx(k, j) +
                                          "=" + num(via));
                    }
        }
    }

    if (inst.m_features < 1)
        out.push_back("m must be ≥ 1");
    if (inst.n_samples < 1)
        out.push_back("n must be ≥ 1");
    if (!(inst.sigma2 >= 0.0) || !std::isfinite(inst.sigma2))
        out.push_back("sigma2 must be ≥ 0");
    if (inst.m_features >= 1 && inst.n_samples >= 1) {
        report.regime = classify_regime(inst.m_features, inst.n_samples);
        if (!report.regime)
            out.push_back("regime undefined for m ∈ {n−1,n,n+1} (m=" +
                          std::to_string(inst.m_features) + ", n=" +
                          std::to_string(inst.n_samples) + ")");
    }
    return report;
}

Eigen::MatrixXd metric_closure(const Eigen::MatrixXd &costs)
{
    Eigen::MatrixXd d = costs;
    const Eigen::Index t = d.rows();
    bool changed = true;
    while (changed) {
        changed = false;
        for (Eigen::Index k = 0; k < t; ++k)
            for (Eigen::Index i = 0; i < t; ++i)
                for (Eigen::Index j = 0; j < t; ++j) {
                    const double via = d(i, k) + d(k, j);
                    if (via < d(i, j)) {
                        d(i, j) = via;
                        changed = true;
                    }
                }
    }
    return d;
}

ProblemInstance generate_instance(const GeneratorParams &p)
{
    if (p.t < 2)
        throw ParameterError("t must be ≥ 2");
    if (!(p.range_lo > 0.0) || !(p.range_lo <= p.range_hi) || !std::isfinite(p.range_hi))
        throw ParameterError("range must satisfy 0 < lo ≤ hi");

    const auto t = static_cast<Eigen::Index>(p.t);
    Rng rng(p.seed);
    ProblemInstance inst;
    inst.t_regions = p.t;
    inst.m_features = p.m;
    inst.n_samples = p.n;
    inst.sigma2 = p.sigma2;

    inst.delta = Eigen::MatrixXd::Zero(t, t);
    for (Eigen::Index i = 0; i < t; ++i)
        for (Eigen::Index j = i + 1; j < t; ++j)
            inst.delta(i, j) = inst.delta(j, i) = rng.uniform(p.range_lo, p.range_hi);

    inst.delta0.resize(t);
    for (Eigen::Index i = 0; i < t; ++i)
        inst.delta0(i) = rng.uniform(p.range_lo, p.range_hi);

    Eigen::MatrixXd raw = Eigen::MatrixXd::Zero(t, t);
    for (Eigen::Index i = 0; i < t; ++i)
        for (Eigen::Index j = i + 1; j < t; ++j)
            raw(i, j) = raw(j, i) = rng.uniform(p.range_lo, p.range_hi);
    inst.costs = metric_closure(raw);
    return inst;
}

namespace {

void append_number(std::string &out, double x)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    out.append(buf, res.ptr);
}

void append_vector(std::string &out, const Eigen::VectorXd &v)
{
    out += '[';
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i)
            out += ", ";
        append_number(out, v(i));
    }
    out += ']';
}

void append_matrix(std::string &out, const Eigen::MatrixXd &m)
{
    out += "[\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        out += "    ";
        append_vector(out, m.row(i).transpose());
        out += i + 1 < m.rows() ? ",\n" : "\n";
    }
    out += "  ]";
}

using nlohmann::json;

const json &require(const json &doc, const char *field)
{
    auto it = doc.find(field);
    if (it == doc.end())
        throw ParseError(std::string("instance: missing field \"") + field + "\"");
    return *it;
}

double as_number(const json &v, const std::string &where)
{
    if (!v.is_number())
        throw ParseError("instance: field " + where + " must be a number");
    return v.get<double>();
}

long as_count(const json &v, const char *field)
{
    if (!v.is_number_integer())
        throw ParseError(std::string("instance: field \"") + field + "\" must be an integer");
    return v.get<long>();
}

Eigen::VectorXd as_vector(const json &v, const std::string &where, std::size_t len)
{
    if (!v.is_array())
        throw ParseError("instance: field " + where + " must be an array");
    if (v.size() != len)
        throw ParseError("instance: field " + where + " must have " + std::to_string(len) +
                         " entries, got " + std::to_string(v.size()));
    Eigen::VectorXd out(static_cast<Eigen::Index>(len));
    for (std::size_t i = 0; i < len; ++i)
        out(static_cast<Eigen::Index>(i)) = as_number(v[i], where + "[" + std::to_string(i) + "]");
    return out;
}

Eigen::MatrixXd as_matrix(const json &v, const char *field, std::size_t t)
{
    const std::string name = std::string("\"") + field + "\"";
    if (!v.is_array() || v.size() != t)
        throw ParseError("instance: field " + name + " must be an array of " + std::to_string(t) +
                         " rows");
    const auto n = static_cast<Eigen::Index>(t);
    Eigen::MatrixXd out(n, n);
    for (std::size_t i = 0; i < t; ++i)
        out.row(static_cast<Eigen::Index>(i)) =
            as_vector(v[i], name + "[" + std::to_string(i) + "]", t).transpose();
    return out;
}

} // namespace

std::string to_json(const ProblemInstance &inst)
{
    std::string out = "{\n";
    out += "  \"t\": " + std::to_string(inst.t_regions) + ",\n";
    out += "  \"m\": " + std::to_string(inst.m_features) + ",\n";
    out += "  \"n\": " + std::to_string(inst.n_samples) + ",\n";
    out += "  \"sigma2\": ";
    append_number(out, inst.sigma2);
    out += ",\n  \"delta\": ";
    append_matrix(out, inst.delta);
    out += ",\n  \"delta0\": ";
    append_vector(out, inst.delta0);
    out += ",\n  \"costs\": ";
    append_matrix(out, inst.costs);
    out += "\n}\n";
    return out;
}

ProblemInstance from_json(const std::string &text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ParseError(std::string("instance: ") + e.what());
    }
    if (!doc.is_object())
        throw ParseError("instance: top-level value must be an object");

    const long t = as_count(require(doc, "t"), "t");
    if (t < 0)
        throw ParseError("instance: field \"t\" must be non-negative");
    const auto tu = static_cast<std::size_t>(t);

    ProblemInstance inst;
    inst.t_regions = tu;
    inst.m_features = as_count(require(doc, "m"), "m");
    inst.n_samples = as_count(require(doc, "n"), "n");
    inst.sigma2 = as_number(require(doc, "sigma2"), "\"sigma2\"");
    inst.delta = as_matrix(require(doc, "delta"), "delta", tu);
    inst.delta0 = as_vector(require(doc, "delta0"), "\"delta0\"", tu);
    inst.costs = as_matrix(require(doc, "costs"), "costs", tu);

    const auto report = validate_instance(inst);
    if (!report.ok()) {
        std::string msg = "instance invalid:";
        for (const auto &v : report.violations)
            msg += "\n  " + v;
        throw ValidationError(msg);
    }
    return inst;
}

void write_instance(const ProblemInstance &inst, const std::filesystem::path &path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::ios_base::failure("cannot open " + path.string() + " for writing");
    out << to_json(inst);
    if (!out)
        throw std::ios_base::failure("write failed: " + path.string());
}

ProblemInstance read_instance(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::ios_base::failure("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

} // namespace clroute
