#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vizqm/color.hpp"
#include "vizqm/edge.hpp"
#include "vizqm/errors.hpp"
#include "vizqm/pipeline.hpp"
#include "vizqm/report.hpp"
#include "vizqm/saliency.hpp"
#include "vizqm/testimage.hpp"
#include "vizqm/util.hpp"
#include "vizqm/version.hpp"

#include <optional>

namespace py = pybind11;

namespace {

py::dict bundle_to_dict(const vizqm::AnalysisBundle& bundle) {
    py::dict out;
    out["id"] = bundle.id;
    out["image"] = bundle.image_path;
    out["original_size"] = py::make_tuple(bundle.original_width, bundle.original_height);
    out["analysis_size"] = py::make_tuple(bundle.analysis_width, bundle.analysis_height);
    out["scores"] = bundle.scores;
    out["percentiles"] = bundle.percentiles;
    out["artifacts"] = bundle.artifacts;
    out["flags"] = bundle.flags;
    out["config_fp"] = bundle.config_fp;
    out["schema"] = bundle.schema;
    return out;
}

vizqm::AnalysisConfig config_from_kwargs(int congestion_distance, int saliency_threshold,
                                         int max_dimension, double cvd_severity) {
    vizqm::AnalysisConfig cfg;
    cfg.congestion_distance = congestion_distance;
    cfg.saliency_threshold = saliency_threshold;
    cfg.max_dimension = max_dimension;
    cfg.cvd_severity = cvd_severity;
    cfg.validate();
    return cfg;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Visualization quality metrics: edge congestion, fine-detail saliency, colour "
              "vision simulations, colour preference/colourfulness scores, corpus ranking, and "
              "feedback report assembly.";
    m.attr("__version__") = vizqm::kVersion;

    py::register_exception<vizqm::Error>(m, "VizqmError");

    m.def(
        "analyze",
        [](const std::string& image, const std::string& corpus, const std::string& out_dir,
           bool dry_run, const std::string& id, const std::string& cohort,
           const std::string& data_dir, int congestion_distance, int saliency_threshold,
           int max_dimension, double cvd_severity) {
            vizqm::PipelineRun run;
            run.input_path = image;
            run.corpus_path = corpus;
            run.out_dir = out_dir;
            run.dry_run = dry_run;
            run.id = id;
            run.cohort = cohort;
            run.data_dir = data_dir;
            run.config = config_from_kwargs(congestion_distance, saliency_threshold,
                                            max_dimension, cvd_severity);
            return bundle_to_dict(vizqm::analyze(run));
        },
        py::arg("image"), py::arg("corpus"), py::arg("out_dir"), py::kw_only(),
        py::arg("dry_run") = false, py::arg("id") = std::string(),
        py::arg("cohort") = std::string(), py::arg("data_dir") = std::string(),
        py::arg("congestion_distance") = 4, py::arg("saliency_threshold") = 64,
        py::arg("max_dimension") = 1280, py::arg("cvd_severity") = 1.0,
        "Run the full analysis pipeline on a PNG; returns the bundle as a dict and writes "
        "artifacts to out_dir.");

    m.def(
        "scores",
        [](const std::string& image, const std::string& data_dir, int congestion_distance,
           int saliency_threshold, int max_dimension, double cvd_severity) {
            vizqm::AnalysisConfig cfg = config_from_kwargs(
                congestion_distance, saliency_threshold, max_dimension, cvd_severity);
            vizqm::ImageRGB original = vizqm::load_image(image);
            vizqm::ImageRGB analysis = vizqm::resize_to_analysis(original, cfg);
            const std::string tables =
                data_dir.empty() ? vizqm::default_data_dir() : data_dir;
            vizqm::WaveTable wave = vizqm::WaveTable::load(tables);
            std::map<std::string, double> out;
            vizqm::EdgeMap edges = vizqm::detect_edges(analysis);
            out["S_ec"] = vizqm::edge_congestion(edges, cfg.congestion_distance).score;
            vizqm::SaliencyMap map = vizqm::compute_saliency(analysis);
            out["S_sy"] = vizqm::saliency_score(map, cfg).s_sy;
            out["S_wv"] = vizqm::wave_score(analysis, wave);
            out["S_hs"] = vizqm::colorfulness(analysis);
            return out;
        },
        py::arg("image"), py::kw_only(), py::arg("data_dir") = std::string(),
        py::arg("congestion_distance") = 4, py::arg("saliency_threshold") = 64,
        py::arg("max_dimension") = 1280, py::arg("cvd_severity") = 1.0,
        "Compute the four numeric scores for a PNG without touching any corpus or writing "
        "files; returns {metric: value}.");

    m.def(
        "assemble_report",
        [](const std::string& bundle_dir, const std::string& rubric,
           const std::string& feedback, const std::string& out_path) {
            vizqm::AnalysisBundle bundle = vizqm::load_bundle(bundle_dir);
            vizqm::Rubric rub = vizqm::load_rubric(rubric);
            std::optional<vizqm::FeedbackBundle> fb;
            if (!feedback.empty()) fb = vizqm::load_feedback(feedback, rub);
            const std::string html = vizqm::assemble_report(bundle, rub, fb, bundle_dir);
            vizqm::write_file(out_path, html);
            return out_path;
        },
        py::arg("bundle_dir"), py::arg("rubric"), py::kw_only(),
        py::arg("feedback") = std::string(), py::arg("out") = std::string("report.html"),
        "Assemble the eight-section HTML feedback document from a bundle directory; omit "
        "feedback for machine-only mode.");

    m.def(
        "generate_test_image",
        [](const std::string& out_path) {
            vizqm::ImageRGB img = vizqm::generate_test_image(nullptr);
            vizqm::save_png(img, out_path);
            return out_path;
        },
        py::arg("out"),
        "Write the discs/text/clutter characterization image as a PNG and return its path.");

    m.def("default_data_dir", &vizqm::default_data_dir,
          "Directory the numeric data tables are loaded from (VIZQM_DATA_DIR overrides).");
}
