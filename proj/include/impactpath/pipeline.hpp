#pragma once

#include "impactpath/io.hpp"

namespace impactpath {

// Declarative run configuration; all defaults mirror the library
// defaults (n 30, p 9, m 2, r {0.2, 2}, alpha 0.05, ci_level 0.99,
// epsilon 1.0, surface-cooling constraints).
struct PipelineConfig {
    EntropyParams entropy;
    ChangepointConfig changepoint;
    Scalar ci_level = 0.99;
    PathwayConstraints constraints = default_constraints();
    std::string source_variable = "AEROD_v";
    std::string source_region = "Tropical";
    NodeSelector final_impact{"TREFHT", "Temperate North", Date::from_ymd(1992, 7, 5)};
    SynthConfig synth = default_synth_config();

    std::vector<std::filesystem::path> inputs;
    std::filesystem::path store_dir = "store";
    std::filesystem::path output_dir = "out";

    void validate() const;
};

// JSON (de)serialization; parse(serialize(cfg)) round-trips.
PipelineConfig parse_config(const std::string& text);
std::string serialize_config(const PipelineConfig& cfg);
PipelineConfig load_config(const std::filesystem::path& path);

// FNV-1a over the canonical serialized form.
std::string config_hash(const PipelineConfig& cfg);

struct PairResult {
    std::string variable;
    std::string region;
    Date start_date;
    EntropySeries entropy;
    std::vector<int> changepoints;
    std::vector<FeatureInterval> intervals;
    std::vector<ImpactRecord> impacts;
};

struct PipelineResult {
    std::vector<PairResult> per_pair;
    std::vector<ImpactRecord> all_impacts;
    PathwayGraph full_dag;
    PathwayGraph impact_dag_graph;
    std::vector<int> path;      // indices into impact_dag_graph.nodes
    bool path_found = false;
    std::string path_message;   // set when the final node or path is missing
};

// entropy -> changepoints -> impacts -> full/impact DAGs -> greedy path.
// A missing final node or unreachable source is reported in the result,
// not thrown.
PipelineResult run_pipeline(const std::vector<EnsemblePair>& pairs, const PipelineConfig& cfg);

// Writes the per-pair CSV/JSON artifacts plus DAG and path exports.
void write_run_outputs(const std::filesystem::path& dir, const PipelineResult& result,
                       const PipelineConfig& cfg);

// Plot-ready CSV bundles: ensemble envelopes, mean-difference bands,
// entropy with changepoint markers, granularity comparison and the
// changepoint stability histogram.
void write_report_outputs(const std::filesystem::path& dir,
                          const std::vector<EnsemblePair>& pairs, const PipelineResult& result,
                          const PipelineConfig& cfg);

}  // namespace impactpath
