#pragma once

#include "vizqm/corpus.hpp"
#include "vizqm/image.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace vizqm {

struct PipelineRun {
    std::string input_path;
    AnalysisConfig config;
    std::string corpus_path;
    std::string out_dir;
    bool dry_run = false;    // rank but never mutate the corpus
    std::string id;          // empty -> derived from stem + content hash
    std::string cohort;
    std::string data_dir;    // empty -> default_data_dir()
};

struct AnalysisBundle {
    std::string id;
    std::string image_path;
    int original_width = 0, original_height = 0;
    int analysis_width = 0, analysis_height = 0;
    std::map<std::string, double> scores;                 // S_ec, S_sy, S_wv, S_hs
    std::map<std::string, double> percentiles;            // absent metric = no corpus data
    std::map<std::string, RankingResult> rankings;        // full ranking detail (not persisted)
    std::map<std::string, std::string> artifacts;         // logical name -> relative PNG path
    std::vector<std::string> flags;
    std::string config_fp;
    int schema = 1;
};

/// Fingerprint of the analysis configuration plus data-table versions; stored
/// with every corpus record so evolving tooling is visible in rankings.
std::string config_fingerprint(const AnalysisConfig& cfg, int cvd_table_version,
                               int wave_table_version);

/// Full pipeline: load -> resize -> all metrics -> rank against the
/// corpus -> (unless dry-run) append record -> write overlays, panels,
/// ranking plots, and bundle.json into the output directory. Errors from a
/// metric stage are tagged with the stage name; on any failure no corpus
/// record is written.
AnalysisBundle analyze(const PipelineRun& run);

/// bundle.json serialization (schema 1).
std::string bundle_to_json(const AnalysisBundle& bundle);
AnalysisBundle bundle_from_json(const std::string& json_text); // throws schema_error
void write_bundle(const AnalysisBundle& bundle, const std::string& out_dir);
AnalysisBundle load_bundle(const std::string& out_dir);        // reads <out_dir>/bundle.json

} // namespace vizqm
