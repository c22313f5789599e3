// impactpath: entropy-based impact feature selection and pathway graphs
// for paired forced/counterfactual ensemble time series.

#include "impactpath/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

using namespace impactpath;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNoPath = 4;

PipelineConfig load_or_default(const std::string& config_path) {
    if (config_path.empty()) return PipelineConfig{};
    return load_config(config_path);
}

int cmd_ingest(const PipelineConfig& cfg, const std::vector<std::string>& inputs) {
    std::vector<fs::path> paths(cfg.inputs.begin(), cfg.inputs.end());
    for (const auto& p : inputs) paths.emplace_back(p);
    if (paths.empty()) throw ConfigError("ingest: no input files given");
    const auto pairs = ingest_csv(paths);
    write_store(cfg.store_dir, pairs, config_hash(cfg));
    std::cout << "ingested " << pairs.size() << " (variable, region) pair(s) into "
              << cfg.store_dir.string() << "\n";
    for (const auto& pair : pairs)
        std::cout << "  " << pair.variable << " / " << pair.region << ": E="
                  << pair.ensemble_size() << ", N=" << pair.length() << "\n";
    return kExitOk;
}

int cmd_synth(const PipelineConfig& cfg, const std::string& out_dir) {
    const auto dataset = generate_pair(cfg.synth);
    const fs::path dir = out_dir.empty() ? fs::path("synth") : fs::path(out_dir);
    write_synth_csv(dir, dataset, config_hash(cfg));
    std::cout << "wrote " << (dir / "dataset.csv").string() << " ("
              << dataset.pairs.size() << " pairs) and ground_truth.json\n";
    return kExitOk;
}

int cmd_run(const PipelineConfig& cfg) {
    const auto pairs = read_store(cfg.store_dir);
    const auto result = run_pipeline(pairs, cfg);
    write_run_outputs(cfg.output_dir, result, cfg);
    std::cout << "full DAG: " << result.full_dag.node_count() << " nodes, "
              << result.full_dag.edge_count() << " edges\n";
    std::cout << "impact DAG: " << result.impact_dag_graph.node_count() << " nodes, "
              << result.impact_dag_graph.edge_count() << " edges\n";
    if (!result.path_found) {
        std::cerr << "source-impact path not found: " << result.path_message << "\n";
        return kExitNoPath;
    }
    std::cout << "source-impact path: " << result.path.size() << " nodes (path.csv)\n";
    return kExitOk;
}

int cmd_dag(const PipelineConfig& cfg) {
    // Graph-only rebuild from previously computed impacts.
    const auto pairs = read_store(cfg.store_dir);
    auto result = run_pipeline(pairs, cfg);
    write_run_outputs(cfg.output_dir, result, cfg);
    std::cout << "full DAG: " << result.full_dag.node_count() << " nodes, "
              << result.full_dag.edge_count() << " edges\n";
    return result.path_found ? kExitOk : kExitNoPath;
}

int cmd_report(const PipelineConfig& cfg) {
    const auto pairs = read_store(cfg.store_dir);
    const auto result = run_pipeline(pairs, cfg);
    write_report_outputs(cfg.output_dir, pairs, result, cfg);
    std::cout << "report bundles written to " << cfg.output_dir.string() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"entropy-based impact feature selection and pathway DAGs"};
    app.require_subcommand(1);

    std::string config_path;
    std::string synth_out;
    std::vector<std::string> inputs;
    std::string store_override, out_override;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON configuration file");
        cmd->add_option("--store", store_override, "override the working store directory");
        cmd->add_option("--out", out_override, "override the output directory");
    };

    auto* ingest = app.add_subcommand("ingest", "validate CSV inputs into the working store");
    add_common(ingest);
    ingest->add_option("inputs", inputs, "ingest CSV files");

    auto* synth = app.add_subcommand("synth", "generate a synthetic paired dataset");
    add_common(synth);
    synth->add_option("--dataset-out", synth_out, "directory for dataset.csv + ground truth");

    auto* run = app.add_subcommand("run", "entropy -> changepoints -> impacts -> DAGs");
    add_common(run);
    auto* report = app.add_subcommand("report", "plot-ready CSV bundles from a completed run");
    add_common(report);
    auto* dag = app.add_subcommand("dag", "rebuild pathway graphs only");
    add_common(dag);

    CLI11_PARSE(app, argc, argv);

    try {
        PipelineConfig cfg = load_or_default(config_path);
        if (!store_override.empty()) cfg.store_dir = store_override;
        if (!out_override.empty()) cfg.output_dir = out_override;

        if (ingest->parsed()) return cmd_ingest(cfg, inputs);
        if (synth->parsed()) return cmd_synth(cfg, synth_out);
        if (run->parsed()) return cmd_run(cfg);
        if (report->parsed()) return cmd_report(cfg);
        if (dag->parsed()) return cmd_dag(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const PathNotFoundError& e) {
        std::cerr << "path not found: " << e.what() << "\n";
        return kExitNoPath;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
