#pragma once

#include "impactpath/pathway.hpp"
#include "impactpath/synth.hpp"

#include <filesystem>

namespace impactpath {

// --- ingest ---------------------------------------------------------------

// Reads `date,variable,region,member,scenario,value` rows (header
// required), groups them into one aligned EnsemblePair per
// (variable, region) and validates daily contiguity, duplicates and
// member pairing. Errors cite the file and row number.
std::vector<EnsemblePair> ingest_csv(const std::vector<std::filesystem::path>& paths);

// Reads a `column,region,weight` mask file; the weight column is
// optional and defaults to 1.0 (uniform mean).
RegionMask read_mask_csv(const std::filesystem::path& path);

// --- working store ---------------------------------------------------------

// Columnar per-pair layout: manifest.json plus one
// `<variable>__<region>.csv` per pair with columns
// date,forced_1..E,counterfactual_1..E.
void write_store(const std::filesystem::path& dir, const std::vector<EnsemblePair>& pairs,
                 const std::string& config_hash);
std::vector<EnsemblePair> read_store(const std::filesystem::path& dir);

// Writes the synthetic dataset in the ingest CSV format plus a
// ground-truth JSON sidecar.
void write_synth_csv(const std::filesystem::path& dir, const SynthDataset& dataset,
                     const std::string& config_hash);

// --- exports ----------------------------------------------------------------

std::string entropy_csv(const EntropySeries& entropy, Date start_date);
std::string changepoints_csv(const std::vector<int>& nu, const EntropyParams& params,
                             Date start_date);
std::string intervals_json(const std::vector<FeatureInterval>& intervals);
std::string impacts_csv(const std::vector<ImpactRecord>& impacts);

// Path rows in impact-table column order (source first).
std::string path_csv(const PathwayGraph& graph, const std::vector<int>& path);

// Writes `text` prefixed with a `# config_hash=<hash>` header line
// (skipped for .json payloads, which carry the hash as a member).
void write_text_file(const std::filesystem::path& path, const std::string& text,
                     const std::string& config_hash);

std::string pair_stem(const std::string& variable, const std::string& region);

}  // namespace impactpath
