// Command-line front end: solve a design from CSV, generate synthetic
// designs, and run the (n, p) scaling benchmark.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hmme/bench.hpp"
#include "hmme/elimination.hpp"
#include "hmme/io.hpp"
#include "hmme/simulate.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitParse = 2;
constexpr int kExitSingular = 3;

std::vector<double> parse_beta_spec(const std::string& spec, hmme::Index p) {
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= spec.size()) {
        const std::size_t comma = spec.find(',', start);
        const std::string field =
            spec.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        try {
            std::size_t used = 0;
            values.push_back(std::stod(field, &used));
            if (used != field.size()) throw std::invalid_argument(field);
        } catch (const std::exception&) {
            throw hmme::Error("bad --beta entry '" + field + "'");
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (values.size() == 1 && p > 1) {
        values.assign(static_cast<std::size_t>(p), values[0]);  // broadcast a single value
    }
    if (values.size() != static_cast<std::size_t>(p)) {
        throw hmme::Error("--beta needs " + std::to_string(p) + " comma-separated values, got " +
                          std::to_string(values.size()));
    }
    return values;
}

std::string sidecar_path(const std::string& csv_path) { return csv_path + ".meta.json"; }

std::string table_path(const std::string& json_path) {
    const std::string suffix = ".json";
    if (json_path.size() > suffix.size() &&
        json_path.compare(json_path.size() - suffix.size(), suffix.size(), suffix) == 0) {
        return json_path.substr(0, json_path.size() - suffix.size()) + ".txt";
    }
    return json_path + ".txt";
}

int cmd_solve(const std::string& input_path, double lambda, const std::string& output_path) {
    const auto parsed = hmme::io::read_design_csv_file(input_path);
    const auto solution = hmme::solve(parsed.design, hmme::VarianceRatio<double>(lambda));
    const auto doc =
        hmme::io::solution_to_json(solution, parsed.design, lambda, parsed.group_labels);
    hmme::io::write_json_file(output_path, doc);
    return kExitOk;
}

int cmd_gen(hmme::Index n, hmme::Index m, hmme::Index p, const std::string& beta_spec,
            std::uint64_t seed, const std::string& law, const std::string& output_path) {
    hmme::SimConfig<double> config;
    config.group_count = n;
    config.group_size = m;
    config.covariate_count = p;
    config.seed = seed;
    config.covariate_law = law == "intercept" ? hmme::CovariateLaw::InterceptPlusNormal
                                              : hmme::CovariateLaw::StandardNormal;
    const auto beta_values = parse_beta_spec(beta_spec, p);
    config.beta_true = Eigen::Map<const hmme::VectorX<double>>(
        beta_values.data(), static_cast<hmme::Index>(beta_values.size()));

    const auto data = hmme::simulate(config);
    hmme::io::write_design_csv_file(output_path, data.design);

    nlohmann::json meta;
    meta["beta_true"] = hmme::io::vector_to_json(config.beta_true);
    meta["v_true"] = hmme::io::vector_to_json(data.true_effects);
    meta["seed"] = seed;
    meta["n"] = n;
    meta["m"] = m;
    meta["p"] = p;
    meta["covariate_law"] = law;
    hmme::io::write_json_file(sidecar_path(output_path), meta);
    return kExitOk;
}

int cmd_bench(const std::vector<hmme::Index>& n_grid, const std::vector<hmme::Index>& p_grid,
              hmme::Index m, int repetitions, const std::string& output_path) {
    hmme::bench::BenchConfig config;
    if (!n_grid.empty()) config.n_grid = n_grid;
    if (!p_grid.empty()) config.p_grid = p_grid;
    config.m = m;
    config.repetitions = repetitions;

    const auto report = hmme::bench::run_bench(config);
    const std::string table = hmme::bench::format_table(report);
    std::cout << table;
    if (!output_path.empty()) {
        hmme::io::write_json_file(output_path, hmme::bench::to_json(report));
        std::ofstream table_out(table_path(output_path));
        if (!table_out) {
            throw hmme::IoError("cannot open '" + table_path(output_path) + "' for writing");
        }
        table_out << table;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Henderson mixed-model equation solver for random-intercept designs"};
    app.require_subcommand(1);

    std::string input_path, output_path;
    double lambda = 1.0;
    auto* solve_cmd = app.add_subcommand("solve", "solve a design read from CSV");
    solve_cmd->add_option("--input", input_path, "input CSV (group,y,x1,...,xp)")->required();
    solve_cmd->add_option("--lambda", lambda, "variance ratio added to the Z'Z diagonal");
    solve_cmd->add_option("--output", output_path, "output JSON path")->required();

    hmme::Index gen_n = 1, gen_m = 1, gen_p = 1;
    std::string beta_spec = "0";
    std::string law = "normal";
    std::uint64_t seed = 0;
    std::string gen_output;
    auto* gen_cmd = app.add_subcommand("gen", "generate a synthetic design");
    gen_cmd->add_option("--n", gen_n, "number of groups")->required();
    gen_cmd->add_option("--m", gen_m, "observations per group")->required();
    gen_cmd->add_option("--p", gen_p, "number of covariates")->required();
    gen_cmd->add_option("--beta", beta_spec, "true coefficients, comma-separated (or one value)");
    gen_cmd->add_option("--seed", seed, "random seed");
    gen_cmd->add_option("--law", law, "covariate law: normal | intercept")
        ->check(CLI::IsMember({"normal", "intercept"}));
    gen_cmd->add_option("--output", gen_output, "output CSV path")->required();

    std::vector<hmme::Index> n_grid, p_grid;
    hmme::Index bench_m = 10;
    int repetitions = 10;
    std::string bench_output;
    auto* bench_cmd = app.add_subcommand("bench", "time solves over an (n, p) grid");
    bench_cmd->add_option("--n-grid", n_grid, "group counts (default 1000,2000,5000,10000)")
        ->delimiter(',');
    bench_cmd->add_option("--p-grid", p_grid, "covariate counts (default 10,20,100,200)")
        ->delimiter(',');
    bench_cmd->add_option("--m", bench_m, "observations per group");
    bench_cmd->add_option("--reps", repetitions, "repetitions per cell")
        ->check(CLI::PositiveNumber);
    bench_cmd->add_option("--output", bench_output, "output JSON path (table goes to .txt)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve_cmd->parsed()) return cmd_solve(input_path, lambda, output_path);
        if (gen_cmd->parsed()) return cmd_gen(gen_n, gen_m, gen_p, beta_spec, seed, law, gen_output);
        if (bench_cmd->parsed()) return cmd_bench(n_grid, p_grid, bench_m, repetitions, bench_output);
    } catch (const hmme::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitParse;
    } catch (const hmme::SingularSystemError& e) {
        std::cerr << "singular system: " << e.what() << '\n';
        return kExitSingular;
    } catch (const hmme::IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }
    return kExitOk;
}
