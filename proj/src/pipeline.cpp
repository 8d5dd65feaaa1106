#include "vizqm/pipeline.hpp"
#include "vizqm/color.hpp"
#include "vizqm/edge.hpp"
#include "vizqm/errors.hpp"
#include "vizqm/saliency.hpp"
#include "vizqm/plot.hpp"
#include "vizqm/util.hpp"
#include "vizqm/version.hpp"

#include "json.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <future>

namespace vizqm {

namespace {

using nlohmann::json;

const std::vector<std::string> kMetrics = {"S_ec", "S_sy", "S_wv", "S_hs"};

template <typename F>
auto run_stage(const char* stage, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        throw Error(e.code(), std::string("stage ") + stage + ": " + e.what());
    } catch (const std::exception& e) {
        throw Error(Errc::io_error, std::string("stage ") + stage + ": " + e.what());
    }
}

} // namespace

std::string config_fingerprint(const AnalysisConfig& cfg, int cvd_table_version,
                               int wave_table_version) {
    char canon[256];
    std::snprintf(canon, sizeof(canon),
                  "congestion_distance=%d;saliency_threshold=%d;max_dimension=%d;"
                  "cvd_severity=%.1f;cvd_table=%d;wave_table=%d",
                  cfg.congestion_distance, cfg.saliency_threshold, cfg.max_dimension,
                  cfg.cvd_severity, cvd_table_version, wave_table_version);
    return fnv1a_hex(canon);
}

AnalysisBundle analyze(const PipelineRun& run) {
    run.config.validate();
    const std::string data_dir = run.data_dir.empty() ? default_data_dir() : run.data_dir;

    // Input + tables first: any failure here precedes all side effects.
    ImageRGB original = run_stage("load", [&] { return load_image(run.input_path); });
    CvdMatrixTable cvd_table =
        run_stage("tables", [&] { return CvdMatrixTable::load(data_dir); });
    WaveTable wave_table = run_stage("tables", [&] { return WaveTable::load(data_dir); });

    ImageRGB analysis =
        run_stage("resize", [&] { return resize_to_analysis(original, run.config); });

    AnalysisBundle bundle;
    bundle.image_path = run.input_path;
    bundle.original_width = original.width;
    bundle.original_height = original.height;
    bundle.analysis_width = analysis.width;
    bundle.analysis_height = analysis.height;
    bundle.config_fp = config_fingerprint(run.config, cvd_table.table_version(),
                                          wave_table.table_version());

    const std::string raw = read_file(run.input_path);
    bundle.id = run.id.empty() ? path_stem(run.input_path) + "-" + fnv1a_hex(raw).substr(0, 12)
                               : run.id;

    // Metric fan-out: the three pathways are pure functions of the analysis
    // image and run concurrently.
    auto edge_future = std::async(std::launch::async, [&] {
        return run_stage("edge-metrics", [&] {
            EdgeMap edges = detect_edges(analysis);
            CongestionResult congestion = edge_congestion(edges, run.config.congestion_distance);
            return std::make_pair(std::move(edges), std::move(congestion));
        });
    });
    auto saliency_future = std::async(std::launch::async, [&] {
        return run_stage("saliency", [&] {
            SaliencyMap map = compute_saliency(analysis);
            SaliencyScore score = saliency_score(map, run.config);
            return std::make_pair(std::move(map), std::move(score));
        });
    });
    auto color_future = std::async(std::launch::async, [&] {
        return run_stage("color-metrics", [&] {
            struct ColorOutputs {
                ImageRGB cvd_d, cvd_p, cvd_t;
                ImageGray mono;
                double s_wv, s_hs;
            } out{simulate_cvd(analysis, CvdKind::deuteranomaly, cvd_table, run.config),
                  simulate_cvd(analysis, CvdKind::protanomaly, cvd_table, run.config),
                  simulate_cvd(analysis, CvdKind::tritanomaly, cvd_table, run.config),
                  monochrome_view(analysis),
                  wave_score(analysis, wave_table),
                  colorfulness(analysis)};
            return out;
        });
    });

    auto [edges, congestion] = edge_future.get();
    auto [sal_map, sal_score] = saliency_future.get();
    auto color_out = color_future.get();

    bundle.scores["S_ec"] = congestion.score;
    bundle.scores["S_sy"] = sal_score.s_sy;
    bundle.scores["S_wv"] = color_out.s_wv;
    bundle.scores["S_hs"] = color_out.s_hs;

    if (sal_map.degenerate) bundle.flags.push_back("degenerate_image");
    if (congestion.edge_pixels == 0) bundle.flags.push_back("no_edges");

    // Rank against previously seen work only, then append this submission.
    CorpusStore corpus = run_stage("corpus", [&] { return CorpusStore::open(run.corpus_path); });
    for (const auto& metric : kMetrics) {
        RankingResult ranking =
            run_stage("rank", [&] { return corpus.rank(metric, bundle.scores.at(metric)); });
        if (ranking.percentile) bundle.percentiles[metric] = *ranking.percentile;
        bundle.rankings[metric] = std::move(ranking);
    }
    const std::size_t mismatches = corpus.count_fp_mismatch(bundle.config_fp);
    if (mismatches > 0) {
        bundle.flags.push_back("config_fp_mismatch:" + std::to_string(mismatches));
    }
    if (!run.dry_run) {
        CorpusRecord record;
        record.id = bundle.id;
        record.ts = std::chrono::duration_cast<std::chrono::seconds>(
                        std::chrono::system_clock::now().time_since_epoch())
                        .count();
        record.cohort = run.cohort;
        record.scores = bundle.scores;
        record.config_fp = bundle.config_fp;
        run_stage("corpus", [&] {
            corpus.add(std::move(record));
            return 0;
        });
    }

    // Artifact emission.
    run_stage("write", [&] {
        ensure_directory(run.out_dir);
        const std::string stem = path_stem(run.input_path);
        auto emit_rgb = [&](const std::string& key, const std::string& name, const ImageRGB& img) {
            save_png(img, run.out_dir + "/" + name);
            bundle.artifacts[key] = name;
        };
        auto emit_gray = [&](const std::string& key, const std::string& name, const ImageGray& img) {
            save_png(img, run.out_dir + "/" + name);
            bundle.artifacts[key] = name;
        };
        emit_rgb("input", stem + "_input.png", analysis);
        emit_gray("congestion", stem + "_congestion.png", congestion.overlay);
        ImageGray sal_png(sal_map.width, sal_map.height);
        sal_png.data = sal_map.values;
        emit_gray("saliency", stem + "_saliency.png", sal_png);
        ImageGray mask_png(sal_map.width, sal_map.height);
        for (size_t i = 0; i < sal_score.mask.size(); ++i) {
            mask_png.data[i] = sal_score.mask[i] ? 255 : 0;
        }
        emit_gray("salient_mask", stem + "_salientmask.png", mask_png);
        emit_rgb("cvd_d", stem + "_cvd_d.png", color_out.cvd_d);
        emit_rgb("cvd_p", stem + "_cvd_p.png", color_out.cvd_p);
        emit_rgb("cvd_t", stem + "_cvd_t.png", color_out.cvd_t);
        emit_gray("mono", stem + "_mono.png", color_out.mono);
        for (const auto& metric : kMetrics) {
            emit_rgb("rank_" + metric, stem + "_rank_" + metric + ".png",
                     render_ranking(bundle.rankings.at(metric)));
        }
        write_bundle(bundle, run.out_dir);
        return 0;
    });

    return bundle;
}

std::string bundle_to_json(const AnalysisBundle& bundle) {
    json doc;
    doc["schema"] = bundle.schema;
    doc["id"] = bundle.id;
    doc["image"] = {
        {"path", bundle.image_path},
        {"original_size", {bundle.original_width, bundle.original_height}},
        {"analysis_size", {bundle.analysis_width, bundle.analysis_height}},
    };
    doc["scores"] = bundle.scores;
    doc["percentiles"] = json::object();
    for (const auto& [metric, value] : bundle.percentiles) doc["percentiles"][metric] = value;
    doc["artifacts"] = bundle.artifacts;
    doc["flags"] = bundle.flags;
    doc["config_fp"] = bundle.config_fp;
    doc["tool_version"] = kVersion;
    return doc.dump(2) + "\n";
}

AnalysisBundle bundle_from_json(const std::string& json_text) {
    json doc = json::parse(json_text, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw_error(Errc::schema_error, "bundle.json is not a JSON object");
    }
    AnalysisBundle bundle;
    try {
        bundle.schema = doc.at("schema").get<int>();
        if (bundle.schema != 1) {
            throw_error(Errc::schema_error,
                        "unsupported bundle schema " + std::to_string(bundle.schema));
        }
        bundle.id = doc.at("id").get<std::string>();
        const json& image = doc.at("image");
        bundle.image_path = image.at("path").get<std::string>();
        bundle.original_width = image.at("original_size").at(0).get<int>();
        bundle.original_height = image.at("original_size").at(1).get<int>();
        bundle.analysis_width = image.at("analysis_size").at(0).get<int>();
        bundle.analysis_height = image.at("analysis_size").at(1).get<int>();
        for (const auto& [key, value] : doc.at("scores").items()) {
            bundle.scores[key] = value.get<double>();
        }
        for (const auto& [key, value] : doc.at("percentiles").items()) {
            bundle.percentiles[key] = value.get<double>();
        }
        for (const auto& [key, value] : doc.at("artifacts").items()) {
            bundle.artifacts[key] = value.get<std::string>();
        }
        for (const auto& value : doc.at("flags")) {
            bundle.flags.push_back(value.get<std::string>());
        }
        bundle.config_fp = doc.at("config_fp").get<std::string>();
    } catch (const json::exception& e) {
        throw_error(Errc::schema_error, std::string("bundle.json: ") + e.what());
    }
    return bundle;
}

void write_bundle(const AnalysisBundle& bundle, const std::string& out_dir) {
    write_file(out_dir + "/bundle.json", bundle_to_json(bundle));
}

AnalysisBundle load_bundle(const std::string& out_dir) {
    const std::string path = out_dir + "/bundle.json";
    if (!path_exists(path)) {
        throw_error(Errc::file_not_found, "bundle.json not found in " + out_dir);
    }
    return bundle_from_json(read_file(path));
}

} // namespace vizqm
