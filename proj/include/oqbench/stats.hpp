#pragma once

#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "oqbench/common.hpp"

namespace oqb {
namespace stats {

// ---------------------------------------------------------------------------
// Special functions: regularized incomplete beta for Student-t tails and a
// numerically integrated noncentral-t tail for power.
// ---------------------------------------------------------------------------

namespace detail {

// Continued fraction for the incomplete beta (modified Lentz).
inline double betacf(double a, double b, double x) {
    constexpr int max_iter = 300;
    constexpr double eps = 3e-16, fpmin = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0, d = 1.0 - qab * x / qap;
    if (std::abs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) return h;
    }
    throw NumericFailure("incomplete beta continued fraction did not converge");
}

}  // namespace detail

inline double incomplete_beta(double a, double b, double x) {
    if (a <= 0.0 || b <= 0.0) throw InvalidArgument("incomplete_beta: a, b must be > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double bt = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                               a * std::log(x) + b * std::log1p(-x));
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * detail::betacf(a, b, x) / a;
    return 1.0 - bt * detail::betacf(b, a, 1.0 - x) / b;
}

// P(T <= t) for Student t with df degrees of freedom.
inline double student_t_cdf(double t, int df) {
    if (df < 1) throw InvalidArgument("student_t_cdf: df must be >= 1");
    if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
    const double nu = df;
    const double half_tail = 0.5 * incomplete_beta(0.5 * nu, 0.5, nu / (nu + t * t));
    return t >= 0.0 ? 1.0 - half_tail : half_tail;
}

// Upper-tail quantile by bisection; deterministic and exact against our own CDF.
inline double student_t_quantile(double p, int df) {
    if (p <= 0.0 || p >= 1.0) throw InvalidArgument("student_t_quantile: p in (0,1) required");
    double lo = -1e8, hi = 1e8;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (student_t_cdf(mid, df) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

inline double normal_upper_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

namespace detail {

// Adaptive Simpson for the noncentral-t integral.
inline double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi,
                               double flo, double fmid, double fhi, double whole, double tol,
                               int depth) {
    const double mid = 0.5 * (lo + hi);
    const double lmid = 0.5 * (lo + mid), rmid = 0.5 * (mid + hi);
    const double fl = f(lmid), fr = f(rmid);
    const double left = (mid - lo) / 6.0 * (flo + 4.0 * fl + fmid);
    const double right = (hi - mid) / 6.0 * (fmid + 4.0 * fr + fhi);
    if (depth <= 0) return left + right;
    if (std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, lo, mid, flo, fl, fmid, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, mid, hi, fmid, fr, fhi, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double lo, double hi,
                        double tol) {
    const double mid = 0.5 * (lo + hi);
    const double flo = f(lo), fmid = f(mid), fhi = f(hi);
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    return adaptive_simpson(f, lo, hi, flo, fmid, fhi, whole, tol, 48);
}

}  // namespace detail

// P(T' > c) for noncentral t with df degrees of freedom and noncentrality
// delta, via T' = (Z + delta) / sqrt(V / df) and integration over V ~ chi^2_df.
inline double noncentral_t_upper_tail(double c, int df, double delta, double tol = 1e-9) {
    if (df < 1) throw InvalidArgument("noncentral_t_upper_tail: df must be >= 1");
    const double nu = df;
    const double log_norm = -0.5 * nu * std::log(2.0) - std::lgamma(0.5 * nu);
    auto integrand = [&](double v) {
        if (v <= 0.0) return 0.0;
        const double log_pdf = log_norm + (0.5 * nu - 1.0) * std::log(v) - 0.5 * v;
        return std::exp(log_pdf) * normal_upper_tail(c * std::sqrt(v / nu) - delta);
    };
    const double vmax = nu + 40.0 + 25.0 * std::sqrt(nu);
    return std::clamp(detail::integrate(integrand, 0.0, vmax, tol), 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Paired one-tailed t-test and power.
// ---------------------------------------------------------------------------

enum class Direction { greater, less };

inline const char* direction_name(Direction d) {
    return d == Direction::greater ? "greater" : "less";
}

struct TestResult {
    double t_stat = 0.0;
    int df = 0;
    double p_one_tailed = 0.5;
    Direction direction = Direction::greater;
};

// t = mean(d) / (sd(d)/sqrt(n)) on the paired differences. Zero variance with
// a nonzero mean reports the limit p of 0 or 1 instead of failing.
inline TestResult paired_t_one_tailed(const std::vector<double>& a,
                                      const std::vector<double>& b, Direction direction) {
    if (a.size() != b.size()) throw InvalidArgument("paired_t: unequal lengths");
    const int n = static_cast<int>(a.size());
    if (n < 2) throw InvalidArgument("paired_t: need at least two pairs");

    double mean = 0.0;
    for (int i = 0; i < n; ++i) mean += a[i] - b[i];
    mean /= n;
    double ss = 0.0;
    for (int i = 0; i < n; ++i) {
        const double d = (a[i] - b[i]) - mean;
        ss += d * d;
    }
    const double sd = std::sqrt(ss / (n - 1));

    TestResult r;
    r.df = n - 1;
    r.direction = direction;
    if (sd == 0.0) {
        r.t_stat = mean == 0.0 ? 0.0
                               : std::copysign(std::numeric_limits<double>::infinity(), mean);
    } else {
        r.t_stat = mean / (sd / std::sqrt(static_cast<double>(n)));
    }
    const double cdf = student_t_cdf(r.t_stat, r.df);
    r.p_one_tailed = direction == Direction::greater ? 1.0 - cdf : cdf;
    return r;
}

struct PowerResult {
    double power = 0.0;
    double alpha = 0.0;
    double effect = 0.0;
    double sd = 0.0;
    int n = 0;
};

// Power of the one-tailed paired t-test with noncentrality effect/(sd/sqrt(n)).
inline PowerResult power_analysis(double effect, double sd, int n, double alpha,
                                  Direction direction = Direction::greater) {
    if (sd <= 0.0) throw InvalidArgument("power_analysis: sd must be > 0");
    if (n < 2) throw InvalidArgument("power_analysis: n must be >= 2");
    if (alpha <= 0.0 || alpha >= 1.0) throw InvalidArgument("power_analysis: alpha in (0,1)");
    const int df = n - 1;
    const double delta = (direction == Direction::greater ? effect : -effect) /
                         (sd / std::sqrt(static_cast<double>(n)));
    const double t_crit = student_t_quantile(1.0 - alpha, df);
    return {noncentral_t_upper_tail(t_crit, df, delta), alpha, effect, sd, n};
}

// ---------------------------------------------------------------------------
// Trial records and the protocol report.
// ---------------------------------------------------------------------------

enum class Group { Tplus, Tminus, C1, C2 };

inline const char* group_name(Group g) {
    switch (g) {
        case Group::Tplus: return "Tplus";
        case Group::Tminus: return "Tminus";
        case Group::C1: return "C1";
        case Group::C2: return "C2";
    }
    return "?";
}

inline std::optional<Group> parse_group(const std::string& s) {
    if (s == "Tplus") return Group::Tplus;
    if (s == "Tminus") return Group::Tminus;
    if (s == "C1") return Group::C1;
    if (s == "C2") return Group::C2;
    return std::nullopt;
}

struct TrialRecord {
    int run_id = 0;
    Group group = Group::Tplus;
    double cell_count = 0.0;
    double caspase_per_cell = 0.0;
};

inline constexpr const char* kTrialHeader = "run_id,group,cell_count,caspase_per_cell";

inline std::vector<TrialRecord> load_trials(std::istream& in) {
    std::vector<TrialRecord> out;
    std::string line;
    int line_no = 0;
    std::map<std::pair<int, int>, int> seen;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1) {
            if (line != kTrialHeader)
                throw InvalidArgument("trials csv line 1: expected header '" +
                                      std::string(kTrialHeader) + "'");
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 4)
            throw InvalidArgument("trials csv line " + std::to_string(line_no) +
                                  ": expected 4 fields");
        TrialRecord rec;
        try {
            size_t used = 0;
            rec.run_id = std::stoi(fields[0], &used);
            if (used != fields[0].size()) throw std::invalid_argument("run_id");
            rec.cell_count = std::stod(fields[2]);
            rec.caspase_per_cell = std::stod(fields[3]);
        } catch (const std::exception&) {
            throw InvalidArgument("trials csv line " + std::to_string(line_no) +
                                  ": malformed numeric field");
        }
        auto group = parse_group(fields[1]);
        if (!group)
            throw InvalidArgument("trials csv line " + std::to_string(line_no) +
                                  ": unknown group '" + fields[1] + "'");
        rec.group = *group;
        if (rec.cell_count < 0.0 || rec.caspase_per_cell < 0.0)
            throw InvalidArgument("trials csv line " + std::to_string(line_no) +
                                  ": negative measurement");
        auto key = std::make_pair(rec.run_id, static_cast<int>(rec.group));
        if (auto it = seen.find(key); it != seen.end())
            throw InvalidArgument("trials csv line " + std::to_string(line_no) +
                                  ": duplicate (run_id, group) pair, first seen on line " +
                                  std::to_string(it->second));
        seen[key] = line_no;
        out.push_back(rec);
    }
    return out;
}

struct GroupStat {
    std::string label;
    double mean = 0.0;
    double se = 0.0;
};

struct Comparison {
    std::string label;
    TestResult result;
    bool significant_05 = false;
    bool significant_01 = false;
    bool significant_001 = false;
};

struct EndpointReport {
    std::string endpoint;
    std::vector<GroupStat> groups;  // four arms plus pooled controls
    std::vector<Comparison> comparisons;
};

struct ProtocolReport {
    int n_runs = 0;
    std::vector<EndpointReport> endpoints;
};

namespace detail {

inline GroupStat stat_of(const std::string& label, const std::vector<double>& xs) {
    GroupStat g;
    g.label = label;
    const int n = static_cast<int>(xs.size());
    for (double x : xs) g.mean += x;
    g.mean /= n;
    double ss = 0.0;
    for (double x : xs) ss += (x - g.mean) * (x - g.mean);
    g.se = std::sqrt(ss / (n - 1)) / std::sqrt(static_cast<double>(n));
    return g;
}

inline Comparison compare(const std::string& label, const std::vector<double>& a,
                          const std::vector<double>& b, Direction direction) {
    Comparison c;
    c.label = label;
    c.result = paired_t_one_tailed(a, b, direction);
    c.significant_05 = c.result.p_one_tailed < 0.05;
    c.significant_01 = c.result.p_one_tailed < 0.01;
    c.significant_001 = c.result.p_one_tailed < 0.001;
    return c;
}

}  // namespace detail

// Group summaries and the four protocol comparisons for both endpoints.
// Controls pool as the per-run mean of C1 and C2 before any cross-run
// statistics. One-tailed directions follow the expected treatment effect:
// lower cell counts, higher caspase activity.
inline ProtocolReport protocol_report(const std::vector<TrialRecord>& records) {
    std::map<int, std::map<int, TrialRecord>> runs;
    for (const auto& rec : records) runs[rec.run_id][static_cast<int>(rec.group)] = rec;
    if (runs.size() < 2) throw InvalidArgument("protocol_report: need at least two runs");
    for (const auto& [run_id, arms] : runs)
        for (int g = 0; g < 4; ++g)
            if (!arms.count(g))
                throw InvalidArgument("protocol_report: run " + std::to_string(run_id) +
                                      " is missing arm " + group_name(static_cast<Group>(g)));

    ProtocolReport report;
    report.n_runs = static_cast<int>(runs.size());

    struct Endpoint {
        const char* name;
        double TrialRecord::* field;
        Direction direction;
    };
    const Endpoint endpoints[] = {{"cell_count", &TrialRecord::cell_count, Direction::less},
                                  {"caspase_per_cell", &TrialRecord::caspase_per_cell,
                                   Direction::greater}};

    for (const auto& ep : endpoints) {
        std::vector<double> tp, tm, c1, c2, pooled;
        for (const auto& [run_id, arms] : runs) {
            tp.push_back(arms.at(static_cast<int>(Group::Tplus)).*ep.field);
            tm.push_back(arms.at(static_cast<int>(Group::Tminus)).*ep.field);
            c1.push_back(arms.at(static_cast<int>(Group::C1)).*ep.field);
            c2.push_back(arms.at(static_cast<int>(Group::C2)).*ep.field);
            pooled.push_back(0.5 * (c1.back() + c2.back()));
        }
        EndpointReport er;
        er.endpoint = ep.name;
        er.groups = {detail::stat_of("Tplus", tp), detail::stat_of("Tminus", tm),
                     detail::stat_of("C1", c1), detail::stat_of("C2", c2),
                     detail::stat_of("controls", pooled)};
        er.comparisons = {detail::compare("Tplus vs Tminus", tp, tm, ep.direction),
                          detail::compare("Tplus vs controls", tp, pooled, ep.direction),
                          detail::compare("Tminus vs controls", tm, pooled, ep.direction),
                          detail::compare("C1 vs C2", c1, c2, ep.direction)};
        report.endpoints.push_back(std::move(er));
    }
    return report;
}

// ---------------------------------------------------------------------------
// Deterministic HL-60 style fixture, moment-matched to published summaries.
// Each arm series is mean + SE * sqrt(2) * (-2,-1,0,1,2), which reproduces the
// mean and standard error exactly; the control arms split a pooled series as
// pooled +- delta with its own mean/SE pair.
// ---------------------------------------------------------------------------

struct FixtureArm {
    double mean, se;
};

inline std::vector<double> moment_matched_series(FixtureArm arm) {
    std::vector<double> out;
    for (int k = -2; k <= 2; ++k) out.push_back(arm.mean + arm.se * std::sqrt(2.0) * k);
    return out;
}

inline std::vector<TrialRecord> make_hl60_fixture() {
    const auto tp_cc = moment_matched_series({1.3e5, 2.8e4});
    const auto tm_cc = moment_matched_series({1.2e5, 1.9e4});
    const auto pool_cc = moment_matched_series({2.1e5, 1.7e4});
    const auto delta_cc = moment_matched_series({-1.5e4, 1.0e4});

    const auto tp_cs = moment_matched_series({0.32, 0.06});
    const auto tm_cs = moment_matched_series({0.17, 0.02});
    const auto pool_cs = moment_matched_series({0.098, 0.009});
    const auto delta_cs = moment_matched_series({0.005, 0.004});

    std::vector<TrialRecord> out;
    for (int i = 0; i < 5; ++i) {
        const int run = i + 1;
        out.push_back({run, Group::Tplus, tp_cc[i], tp_cs[i]});
        out.push_back({run, Group::Tminus, tm_cc[i], tm_cs[i]});
        out.push_back({run, Group::C1, pool_cc[i] + delta_cc[i], pool_cs[i] + delta_cs[i]});
        out.push_back({run, Group::C2, pool_cc[i] - delta_cc[i], pool_cs[i] - delta_cs[i]});
    }
    return out;
}

}  // namespace stats
}  // namespace oqb
