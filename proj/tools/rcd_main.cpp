#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rcd/errors.hpp"
#include "rcd/evaluation.hpp"
#include "rcd/io.hpp"
#include "rcd/rcd.hpp"
#include "rcd/simulation.hpp"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

void add_discover_flags(CLI::App& cmd, rcd::RcdConfig& cfg) {
    cmd.add_option("--alpha-corr", cfg.alpha_corr, "Significance level of the correlation test")
        ->capture_default_str();
    cmd.add_option("--alpha-indep", cfg.alpha_indep, "Significance level of the HSIC test")->capture_default_str();
    cmd.add_option("--alpha-shapiro", cfg.alpha_shapiro, "Significance level of the Shapiro-Wilk test")
        ->capture_default_str();
    cmd.add_option("--max-explanatory", cfg.max_explanatory, "Largest number of explanatory variables")
        ->capture_default_str();
    cmd.add_flag("--sweep", cfg.sweep_enabled, "Choose alpha-indep = 0.1^k with the fewest bi-directed pairs");
    cmd.add_option("--sweep-k-max", cfg.sweep_k_max, "Largest exponent k tried by --sweep")->capture_default_str();
}

void add_simulate_flags(CLI::App& cmd, rcd::SimConfig& sim) {
    cmd.add_option("--vars", sim.num_observed, "Observed variables")->capture_default_str();
    cmd.add_option("--latents", sim.num_latent, "Latent confounders")->capture_default_str();
    cmd.add_option("--edges", sim.num_edges, "Directed edges among observed variables")->capture_default_str();
    cmd.add_option("--children-per-latent", sim.children_per_latent, "Observed children of each latent")
        ->capture_default_str();
    cmd.add_option("--samples", sim.num_samples, "Samples per dataset")->capture_default_str();
}

nlohmann::json sim_to_json(const rcd::SimConfig& sim) {
    return {{"vars", sim.num_observed},
            {"latents", sim.num_latent},
            {"edges", sim.num_edges},
            {"children_per_latent", sim.children_per_latent},
            {"samples", sim.num_samples},
            {"seed", sim.seed}};
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
    } else {
        rcd::write_text_file(path, text);
    }
}

void run_discover(const std::string& input, const rcd::RcdConfig& cfg, const std::string& format,
                  const std::string& output) {
    cfg.validate();
    const rcd::Dataset data = rcd::ingest_csv(input);
    nlohmann::json meta = {{"config", rcd::config_to_json(cfg)}};
    rcd::CausalGraph graph;
    if (cfg.sweep_enabled) {
        rcd::SweepResult sweep = rcd::alpha_sweep(data, cfg);
        meta["chosen_k"] = sweep.chosen_k;
        meta["bidirected_counts"] = sweep.bidirected_counts;
        graph = std::move(sweep.graph);
    } else {
        graph = rcd::run_rcd(data, cfg);
    }
    const auto fmt = format == "json" ? rcd::GraphFormat::Json : rcd::GraphFormat::Dot;
    emit(output, rcd::emit_graph(graph, data.names, fmt, meta));
}

void run_simulate(rcd::SimConfig sim, const std::string& out, const std::string& truth) {
    sim.validate();
    const rcd::GroundTruthModel model = rcd::generate_model(sim);
    const rcd::Dataset data = rcd::sample_data(model, sim.num_samples, rcd::derive_seed(sim.seed, 1));
    nlohmann::json doc = rcd::model_to_json(model);
    doc["config"] = sim_to_json(sim);
    const rcd::CausalGraph g = rcd::ground_truth_graph(model);
    doc["graph"] = nlohmann::json::parse(rcd::emit_graph(g, data.names, rcd::GraphFormat::Json));
    rcd::write_text_file(out, rcd::to_csv(data));
    rcd::write_text_file(truth, doc.dump(2) + "\n");
}

void run_bench(const rcd::SimConfig& sim, const rcd::RcdConfig& cfg, int trials, const std::string& report_path,
               const std::string& summary_path) {
    sim.validate();
    cfg.validate();
    const rcd::BenchmarkReport report = rcd::run_benchmark(sim, cfg, trials);
    nlohmann::json summary = rcd::benchmark_summary(report);
    summary["simulation"] = sim_to_json(sim);
    summary["config"] = rcd::config_to_json(cfg);
    rcd::write_text_file(report_path, rcd::benchmark_csv(report));
    const std::string text = summary.dump(2) + "\n";
    if (summary_path.empty()) {
        std::cout << text;
    } else {
        rcd::write_text_file(summary_path, text);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Causal discovery with latent confounders"};
    app.require_subcommand(1);

    rcd::RcdConfig discover_cfg;
    std::string input, format = "dot", output;
    auto* discover = app.add_subcommand("discover", "Infer a causal graph from a CSV file");
    discover->add_option("--input", input, "CSV with a header row")->required()->check(CLI::ExistingFile);
    add_discover_flags(*discover, discover_cfg);
    discover->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"dot", "json"}))
        ->capture_default_str();
    discover->add_option("--output", output, "Output path (stdout when omitted)");

    rcd::SimConfig sim_cfg;
    std::string out_csv, truth_json;
    auto* simulate = app.add_subcommand("simulate", "Generate a random model and sample data from it");
    add_simulate_flags(*simulate, sim_cfg);
    simulate->add_option("--seed", sim_cfg.seed, "Random seed")->required();
    simulate->add_option("--out", out_csv, "Sample CSV path")->required();
    simulate->add_option("--truth", truth_json, "Ground truth JSON path")->required();

    rcd::SimConfig bench_sim;
    rcd::RcdConfig bench_cfg;
    int trials = 20;
    std::string report_csv, summary_json;
    auto* benchmark = app.add_subcommand("benchmark", "Score discovery on repeated simulations");
    add_simulate_flags(*benchmark, bench_sim);
    add_discover_flags(*benchmark, bench_cfg);
    benchmark->add_option("--trials", trials, "Number of simulated datasets")->required()->check(CLI::PositiveNumber);
    benchmark->add_option("--seed", bench_sim.seed, "Seed of the first trial")->capture_default_str();
    benchmark->add_option("--report", report_csv, "Per-trial CSV path")->required();
    benchmark->add_option("--summary", summary_json, "Quartile summary JSON path (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    try {
        if (*discover) run_discover(input, discover_cfg, format, output);
        if (*simulate) run_simulate(sim_cfg, out_csv, truth_json);
        if (*benchmark) run_bench(bench_sim, bench_cfg, trials, report_csv, summary_json);
    } catch (const rcd::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const rcd::InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
    return 0;
}
