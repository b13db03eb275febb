#ifndef HMME_BENCH_HPP
#define HMME_BENCH_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hmme/elimination.hpp"
#include "hmme/model.hpp"
#include "hmme/simulate.hpp"

namespace hmme::bench {

struct BenchRow {
    Index n = 0;
    Index m = 0;
    Index p = 0;
    int repetitions = 0;
    double mean_seconds = 0;
    double stddev_seconds = 0;
};

/// Least-squares fit of log(time) against log(n) at one fixed p.
/// ci_halfwidth is the 95% band of the slope (NaN when under 3 points).
struct ScalingFit {
    Index p = 0;
    double slope = 0;
    double stderr_slope = 0;
    double ci_halfwidth = 0;
};

struct BenchReport {
    std::vector<BenchRow> rows;  // sorted by (n, p)
    std::vector<ScalingFit> scaling;
    std::string machine;
    std::string timestamp_utc;
    std::string timing_policy;
};

struct BenchConfig {
    std::vector<Index> n_grid{1000, 2000, 5000, 10000};
    std::vector<Index> p_grid{10, 20, 100, 200};
    Index m = 10;
    int repetitions = 10;
    std::uint64_t base_seed = 20240901;
    CovariateLaw covariate_law = CovariateLaw::InterceptPlusNormal;
};

namespace detail {

inline std::string cpu_description() {
    std::ifstream cpuinfo("/proc/cpuinfo");
    std::string line;
    while (std::getline(cpuinfo, line)) {
        const auto colon = line.find(':');
        if (line.rfind("model name", 0) == 0 && colon != std::string::npos) {
            std::string name = line.substr(colon + 1);
            const auto start = name.find_first_not_of(' ');
            return start == std::string::npos ? name : name.substr(start);
        }
    }
    return "unknown cpu";
}

inline std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buffer[32];
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buffer;
}

// Two-sided 97.5% Student-t quantile by residual degrees of freedom.
inline double t_quantile_975(int df) {
    static constexpr double table[] = {12.706, 4.303, 3.182, 2.776, 2.571,
                                       2.447,  2.365, 2.306, 2.262, 2.228};
    if (df < 1) return std::numeric_limits<double>::quiet_NaN();
    if (df <= 10) return table[df - 1];
    return 1.984;
}

}  // namespace detail

/// Slope of the least-squares line through (log x, log y).
inline double log_log_slope(const std::vector<std::pair<double, double>>& points) {
    const auto k = static_cast<double>(points.size());
    double mx = 0, my = 0;
    for (const auto& [x, y] : points) {
        mx += std::log(x);
        my += std::log(y);
    }
    mx /= k;
    my /= k;
    double sxy = 0, sxx = 0;
    for (const auto& [x, y] : points) {
        const double dx = std::log(x) - mx;
        sxy += dx * (std::log(y) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

/// Slope plus its standard error and 95% band.
inline ScalingFit fit_scaling(Index p, const std::vector<std::pair<double, double>>& points) {
    ScalingFit fit;
    fit.p = p;
    fit.slope = log_log_slope(points);

    const auto k = static_cast<double>(points.size());
    double mx = 0, my = 0;
    for (const auto& [x, y] : points) {
        mx += std::log(x);
        my += std::log(y);
    }
    mx /= k;
    my /= k;
    double sxx = 0;
    for (const auto& [x, y] : points) {
        (void)y;
        sxx += (std::log(x) - mx) * (std::log(x) - mx);
    }
    const double intercept = my - fit.slope * mx;
    double ss_res = 0;
    for (const auto& [x, y] : points) {
        const double r = std::log(y) - (intercept + fit.slope * std::log(x));
        ss_res += r * r;
    }
    const int df = static_cast<int>(points.size()) - 2;
    if (df >= 1) {
        fit.stderr_slope = std::sqrt(ss_res / df / sxx);
        fit.ci_halfwidth = detail::t_quantile_975(df) * fit.stderr_slope;
    } else {
        fit.stderr_slope = std::numeric_limits<double>::quiet_NaN();
        fit.ci_halfwidth = std::numeric_limits<double>::quiet_NaN();
    }
    return fit;
}

/// Runs the (n, p) timing grid strictly sequentially. Each cell generates
/// one design from a seed fixed by (base_seed, n, p), then times
/// `repetitions` full solves (assembly included; generation and I/O
/// excluded). Rows come out sorted by (n, p).
inline BenchReport run_bench(const BenchConfig& config) {
    BenchReport report;
    report.machine = detail::cpu_description();
    report.timestamp_utc = detail::utc_timestamp();
    report.timing_policy =
        "wall clock per repetition around assemble + eliminate + back-substitute; "
        "data generation and I/O excluded";

    std::vector<Index> n_grid = config.n_grid;
    std::vector<Index> p_grid = config.p_grid;
    std::sort(n_grid.begin(), n_grid.end());
    std::sort(p_grid.begin(), p_grid.end());

    for (const Index n : n_grid) {
        for (const Index p : p_grid) {
            SimConfig<double> sim;
            sim.group_count = n;
            sim.group_size = config.m;
            sim.covariate_count = p;
            sim.covariate_law = config.covariate_law;
            sim.beta_true = VectorX<double>::LinSpaced(p, 1.0, 2.0);
            sim.seed = hmme::detail::splitmix64(config.base_seed ^
                                                hmme::detail::splitmix64(
                                                    static_cast<std::uint64_t>(n) * 1000003ULL +
                                                    static_cast<std::uint64_t>(p)));
            const auto data = simulate(sim);

            BenchRow row;
            row.n = n;
            row.m = config.m;
            row.p = p;
            row.repetitions = config.repetitions;
            double sum = 0, sum_sq = 0;
            for (int rep = 0; rep < config.repetitions; ++rep) {
                const auto solution = solve(data.design);
                sum += solution.wall_time_seconds;
                sum_sq += solution.wall_time_seconds * solution.wall_time_seconds;
            }
            row.mean_seconds = sum / config.repetitions;
            row.stddev_seconds =
                config.repetitions > 1
                    ? std::sqrt(std::max(0.0, (sum_sq - sum * sum / config.repetitions) /
                                                  (config.repetitions - 1)))
                    : 0.0;
            report.rows.push_back(row);
        }
    }

    if (n_grid.size() >= 2) {
        for (const Index p : p_grid) {
            std::vector<std::pair<double, double>> points;
            for (const auto& row : report.rows) {
                if (row.p == p) {
                    points.emplace_back(static_cast<double>(row.n), row.mean_seconds);
                }
            }
            report.scaling.push_back(fit_scaling(p, points));
        }
    }
    return report;
}

/// Plain-text grid, one row per n and one column per p, with the scaling
/// fits appended.
inline std::string format_table(const BenchReport& report) {
    std::vector<Index> n_values, p_values;
    for (const auto& row : report.rows) {
        if (n_values.empty() || n_values.back() != row.n) n_values.push_back(row.n);
        if (std::find(p_values.begin(), p_values.end(), row.p) == p_values.end()) {
            p_values.push_back(row.p);
        }
    }
    std::sort(n_values.begin(), n_values.end());
    std::sort(p_values.begin(), p_values.end());

    auto cell = [&](Index n, Index p) -> const BenchRow* {
        for (const auto& row : report.rows) {
            if (row.n == n && row.p == p) return &row;
        }
        return nullptr;
    };

    std::ostringstream out;
    out << "mean solve seconds (" << (report.rows.empty() ? 0 : report.rows.front().repetitions)
        << " repetitions), m = " << (report.rows.empty() ? 0 : report.rows.front().m) << "\n";
    out << "machine: " << report.machine << "\n";
    out << "timestamp: " << report.timestamp_utc << "\n";
    out << "timing: " << report.timing_policy << "\n\n";

    out << std::setw(10) << "n \\ p";
    for (const Index p : p_values) out << std::setw(12) << p;
    out << "\n";
    for (const Index n : n_values) {
        out << std::setw(10) << n;
        for (const Index p : p_values) {
            const BenchRow* row = cell(n, p);
            out << std::setw(12);
            if (row) {
                out << std::fixed << std::setprecision(4) << row->mean_seconds
                    << std::defaultfloat << std::setprecision(6);
            } else {
                out << "-";
            }
        }
        out << "\n";
    }

    if (!report.scaling.empty()) {
        out << "\nlog-log slope of time vs n (ideal linear scaling = 1.0):\n";
        for (const auto& fit : report.scaling) {
            out << "  p = " << std::setw(5) << fit.p << ": slope " << std::fixed
                << std::setprecision(3) << fit.slope;
            if (std::isfinite(fit.ci_halfwidth)) {
                out << "  (95% band +/- " << fit.ci_halfwidth << ")";
            }
            out << std::defaultfloat << std::setprecision(6) << "\n";
        }
    }
    return out.str();
}

inline nlohmann::json to_json(const BenchReport& report) {
    nlohmann::json doc;
    doc["machine"] = report.machine;
    doc["timestamp_utc"] = report.timestamp_utc;
    doc["timing_policy"] = report.timing_policy;
    doc["rows"] = nlohmann::json::array();
    for (const auto& row : report.rows) {
        doc["rows"].push_back({{"n", row.n},
                               {"m", row.m},
                               {"p", row.p},
                               {"repetitions", row.repetitions},
                               {"mean_seconds", row.mean_seconds},
                               {"stddev_seconds", row.stddev_seconds}});
    }
    doc["scaling"] = nlohmann::json::array();
    for (const auto& fit : report.scaling) {
        nlohmann::json entry{{"p", fit.p}, {"slope", fit.slope}};
        if (std::isfinite(fit.stderr_slope)) {
            entry["stderr"] = fit.stderr_slope;
            entry["ci95_halfwidth"] = fit.ci_halfwidth;
        }
        doc["scaling"].push_back(entry);
    }
    return doc;
}

}  // namespace hmme::bench

#endif  // HMME_BENCH_HPP
