#include "vizqm/report.hpp"
#include "vizqm/errors.hpp"
#include "vizqm/util.hpp"
#include "vizqm/version.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace vizqm {

namespace {

using nlohmann::json;

std::string html_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&#39;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fmt4(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

std::string fmt_pct(double fraction) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.1f%%", fraction * 100.0);
    return buf;
}

json parse_object_file(const std::string& path) {
    if (!path_exists(path)) {
        throw_error(Errc::file_not_found, "file not found: " + path);
    }
    json doc = json::parse(read_file(path), nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw_error(Errc::schema_error, path + ": not a JSON object");
    }
    return doc;
}

// Embedded-image tag from an artifact file; the logical name travels into
// error messages when the file is missing.
std::string embed_png(const AnalysisBundle& bundle, const std::string& bundle_dir,
                      const std::string& key, const std::string& alt) {
    auto it = bundle.artifacts.find(key);
    if (it == bundle.artifacts.end()) {
        throw_error(Errc::incomplete_bundle, "bundle is missing artifact: " + key);
    }
    const std::string path = bundle_dir + "/" + it->second;
    if (!path_exists(path)) {
        throw_error(Errc::incomplete_bundle,
                    "bundle artifact file absent: " + key + " (" + path + ")");
    }
    return "<img alt=\"" + html_escape(alt) + "\" src=\"data:image/png;base64," +
           base64_encode(read_file(path)) + "\">";
}

std::string metric_block(const AnalysisBundle& bundle, const std::string& metric) {
    std::ostringstream out;
    out << "<p class=\"score\">" << metric << " = " << fmt4(bundle.scores.at(metric));
    auto pct = bundle.percentiles.find(metric);
    if (pct != bundle.percentiles.end()) {
        out << " &mdash; percentile " << fmt_pct(pct->second)
            << " of previously seen submissions";
    } else {
        out << " &mdash; no prior submissions to rank against";
    }
    out << "</p>\n";
    return out.str();
}

constexpr const char* kPendingPlaceholder =
    "<p class=\"placeholder\">Pending human assessment &mdash; this report was produced in "
    "machine-only mode.</p>";

} // namespace

std::string base64_encode(const std::string& bytes) {
    static const char* alphabet =
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    size_t i = 0;
    while (i + 3 <= bytes.size()) {
        unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
                     (static_cast<unsigned char>(bytes[i + 1]) << 8) |
                     static_cast<unsigned char>(bytes[i + 2]);
        out += alphabet[(v >> 18) & 63];
        out += alphabet[(v >> 12) & 63];
        out += alphabet[(v >> 6) & 63];
        out += alphabet[v & 63];
        i += 3;
    }
    const size_t rest = bytes.size() - i;
    if (rest == 1) {
        unsigned v = static_cast<unsigned char>(bytes[i]) << 16;
        out += alphabet[(v >> 18) & 63];
        out += alphabet[(v >> 12) & 63];
        out += "==";
    } else if (rest == 2) {
        unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
                     (static_cast<unsigned char>(bytes[i + 1]) << 8);
        out += alphabet[(v >> 18) & 63];
        out += alphabet[(v >> 12) & 63];
        out += alphabet[(v >> 6) & 63];
        out += '=';
    }
    return out;
}

Rubric load_rubric(const std::string& path) {
    json doc = parse_object_file(path);
    if (!doc.contains("objectives") || !doc["objectives"].is_array()) {
        throw_error(Errc::schema_error, path + ": objectives (array) is required");
    }
    Rubric rubric;
    std::set<std::string> seen;
    size_t index = 0;
    for (const json& entry : doc["objectives"]) {
        const std::string where = "objectives[" + std::to_string(index) + "]";
        auto require_string = [&](const char* field) -> std::string {
            if (!entry.contains(field) || !entry[field].is_string() ||
                entry[field].get<std::string>().empty()) {
                throw_error(Errc::schema_error, where + "." + field);
            }
            return entry[field].get<std::string>();
        };
        RubricObjective objective;
        objective.id = require_string("id");
        if (!seen.insert(objective.id).second) {
            throw_error(Errc::schema_error, where + ".id: duplicate '" + objective.id + "'");
        }
        objective.title = require_string("title");
        if (entry.contains("description") && entry["description"].is_string()) {
            objective.description = entry["description"].get<std::string>();
        }
        if (!entry.contains("max_points") || !entry["max_points"].is_number() ||
            entry["max_points"].get<double>() <= 0.0) {
            throw_error(Errc::schema_error, where + ".max_points: must be a number > 0");
        }
        objective.max_points = entry["max_points"].get<double>();
        if (entry.contains("metrics")) {
            if (!entry["metrics"].is_array()) {
                throw_error(Errc::schema_error, where + ".metrics: must be an array");
            }
            for (const json& m : entry["metrics"]) {
                if (!m.is_string()) throw_error(Errc::schema_error, where + ".metrics");
                objective.metrics.push_back(m.get<std::string>());
            }
        }
        rubric.objectives.push_back(std::move(objective));
        ++index;
    }
    if (rubric.objectives.empty()) {
        throw_error(Errc::schema_error, path + ": objectives must not be empty");
    }
    return rubric;
}

FeedbackBundle load_feedback(const std::string& path, const Rubric& rubric) {
    json doc = parse_object_file(path);
    if (!doc.contains("items") || !doc["items"].is_array()) {
        throw_error(Errc::schema_error, path + ": items (array) is required");
    }
    FeedbackBundle feedback;
    std::set<std::string> covered;
    size_t index = 0;
    for (const json& entry : doc["items"]) {
        const std::string where = "items[" + std::to_string(index) + "]";
        if (!entry.is_object() || !entry.contains("objective") ||
            !entry["objective"].is_string()) {
            throw_error(Errc::schema_error, where + ".objective");
        }
        FeedbackItem item;
        item.objective_id = entry["objective"].get<std::string>();
        const RubricObjective* objective = nullptr;
        for (const auto& o : rubric.objectives) {
            if (o.id == item.objective_id) {
                objective = &o;
                break;
            }
        }
        if (!objective) {
            throw_error(Errc::schema_error,
                        where + ".objective: unknown id '" + item.objective_id + "'");
        }
        if (!covered.insert(item.objective_id).second) {
            throw_error(Errc::schema_error,
                        where + ".objective: duplicate id '" + item.objective_id + "'");
        }
        if (!entry.contains("mark") || !entry["mark"].is_number()) {
            throw_error(Errc::schema_error, where + ".mark");
        }
        item.mark = entry["mark"].get<double>();
        if (item.mark < 0.0 || item.mark > objective->max_points) {
            throw_error(Errc::mark_out_of_range,
                        where + ".mark: " + std::to_string(item.mark) + " outside [0, " +
                            std::to_string(objective->max_points) + "] for objective '" +
                            item.objective_id + "'");
        }
        if (entry.contains("comment") && entry["comment"].is_string()) {
            item.comment = entry["comment"].get<std::string>();
        }
        feedback.items.push_back(std::move(item));
        ++index;
    }
    for (const auto& objective : rubric.objectives) {
        if (!covered.count(objective.id)) {
            throw_error(Errc::missing_objective,
                        "feedback missing objective '" + objective.id + "'");
        }
    }
    if (doc.contains("overall") && doc["overall"].is_string()) {
        feedback.overall = doc["overall"].get<std::string>();
    }
    if (doc.contains("marker") && doc["marker"].is_string()) {
        feedback.marker = doc["marker"].get<std::string>();
    }
    return feedback;
}

std::string assemble_report(const AnalysisBundle& bundle, const Rubric& rubric,
                            const std::optional<FeedbackBundle>& feedback,
                            const std::string& bundle_dir) {
    for (const auto& metric : {"S_ec", "S_sy", "S_wv", "S_hs"}) {
        if (!bundle.scores.count(metric)) {
            throw_error(Errc::incomplete_bundle, std::string("bundle is missing score: ") + metric);
        }
    }

    std::ostringstream out;
    out << "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n"
        << "<title>Feedback &mdash; " << html_escape(bundle.id) << "</title>\n"
        << "<style>\n"
        << "body { font-family: Georgia, serif; margin: 0; color: #1a1a1a; }\n"
        << "section.page { padding: 2.2rem 2.6rem; min-height: 26rem; "
        << "border-bottom: 1px solid #bbb; page-break-after: always; }\n"
        << "section.page:last-of-type { border-bottom: none; }\n"
        << "h1 { font-size: 1.7rem; } h2 { font-size: 1.25rem; margin-top: 0; }\n"
        << "img { max-width: 100%; height: auto; border: 1px solid #ccc; margin: 0.4rem 0; }\n"
        << ".panel-row img { max-width: 46%; }\n"
        << "table { border-collapse: collapse; margin: 0.8rem 0; }\n"
        << "td, th { border: 1px solid #888; padding: 0.35rem 0.7rem; text-align: left; }\n"
        << ".score { font-weight: bold; }\n"
        << ".placeholder { color: #555; font-style: italic; }\n"
        << ".cite { font-size: 0.9rem; margin: 0.35rem 0; }\n"
        << ".meta { color: #444; font-size: 0.9rem; }\n"
        << "@media print { section.page { border-bottom: none; } }\n"
        << "</style>\n</head>\n<body>\n";

    // 1. Cover + submission snapshot.
    out << "<section class=\"page\" id=\"cover\">\n"
        << "<h1>Visualization Quality Feedback</h1>\n"
        << "<p class=\"meta\">Submission: <strong>" << html_escape(bundle.id) << "</strong></p>\n"
        << "<p class=\"meta\">Source image: " << html_escape(bundle.image_path) << " ("
        << bundle.original_width << "&times;" << bundle.original_height
        << " px; analysed at " << bundle.analysis_width << "&times;" << bundle.analysis_height
        << " px)</p>\n"
        << "<p class=\"meta\">Analysis configuration fingerprint: <code>"
        << html_escape(bundle.config_fp) << "</code> &mdash; tool version " << kVersion
        << "</p>\n"
        << embed_png(bundle, bundle_dir, "input", "submitted visualization (analysis raster)")
        << "\n</section>\n";

    // 2. Marks summary.
    out << "<section class=\"page\" id=\"marks\">\n<h2>Marks Summary</h2>\n";
    if (feedback) {
        double total = 0.0, max_total = 0.0;
        out << "<table>\n<tr><th>Objective</th><th>Mark</th><th>Out of</th></tr>\n";
        for (const auto& objective : rubric.objectives) {
            double mark = 0.0;
            for (const auto& item : feedback->items) {
                if (item.objective_id == objective.id) {
                    mark = item.mark;
                    break;
                }
            }
            total += mark;
            max_total += objective.max_points;
            out << "<tr><td>" << html_escape(objective.title) << "</td><td>" << mark
                << "</td><td>" << objective.max_points << "</td></tr>\n";
        }
        out << "<tr><th>Total</th><th>" << total << "</th><th>" << max_total << "</th></tr>\n"
            << "</table>\n";
        if (!feedback->marker.empty()) {
            out << "<p class=\"meta\">Marked by: " << html_escape(feedback->marker) << "</p>\n";
        }
    } else {
        out << kPendingPlaceholder << "\n";
    }
    out << "</section>\n";

    // 3. Edge congestion.
    out << "<section class=\"page\" id=\"congestion\">\n<h2>Edge Congestion</h2>\n"
        << "<p>Edges that crowd within " << "a few pixels of a neighbouring edge are flagged "
        << "(white pixels below); congested edges make plots harder to read at a glance.</p>\n"
        << "<div class=\"panel-row\">"
        << embed_png(bundle, bundle_dir, "congestion", "congested edge overlay") << "</div>\n"
        << metric_block(bundle, "S_ec")
        << embed_png(bundle, bundle_dir, "rank_S_ec", "edge congestion ranking") << "\n"
        << "</section>\n";

    // 4. Saliency.
    out << "<section class=\"page\" id=\"saliency\">\n<h2>Fine-Detail Saliency</h2>\n"
        << "<p>Brighter pixels are predicted to draw the eye sooner; the mask shows the "
        << "region above the salience threshold used for scoring.</p>\n"
        << "<div class=\"panel-row\">" << embed_png(bundle, bundle_dir, "saliency", "saliency map");
    if (bundle.artifacts.count("salient_mask")) {
        out << embed_png(bundle, bundle_dir, "salient_mask", "salient-region mask");
    }
    out << "</div>\n"
        << metric_block(bundle, "S_sy")
        << embed_png(bundle, bundle_dir, "rank_S_sy", "saliency ranking") << "\n"
        << "</section>\n";

    // 5. Colour vision deficiency panels.
    out << "<section class=\"page\" id=\"cvd\">\n<h2>Colour Vision Simulations</h2>\n"
        << "<p>The submission as seen with deuteranomaly (d), protanomaly (p), tritanomaly (t), "
        << "and in monochrome print/fax reproduction (m).</p>\n"
        << "<div class=\"panel-row\">"
        << embed_png(bundle, bundle_dir, "cvd_d", "deuteranomaly simulation")
        << embed_png(bundle, bundle_dir, "cvd_p", "protanomaly simulation") << "</div>\n"
        << "<div class=\"panel-row\">"
        << embed_png(bundle, bundle_dir, "cvd_t", "tritanomaly simulation")
        << embed_png(bundle, bundle_dir, "mono", "monochrome view") << "</div>\n"
        << "</section>\n";

    // 6. Colour scores.
    out << "<section class=\"page\" id=\"colour-scores\">\n<h2>Colour Preference and "
        << "Colourfulness</h2>\n"
        << metric_block(bundle, "S_wv")
        << embed_png(bundle, bundle_dir, "rank_S_wv", "colour preference ranking") << "\n"
        << metric_block(bundle, "S_hs")
        << embed_png(bundle, bundle_dir, "rank_S_hs", "colourfulness ranking") << "\n"
        << "</section>\n";

    // 7. Written feedback.
    out << "<section class=\"page\" id=\"feedback\">\n<h2>Written Feedback</h2>\n";
    if (feedback) {
        for (const auto& objective : rubric.objectives) {
            out << "<h3>" << html_escape(objective.title) << "</h3>\n";
            if (!objective.description.empty()) {
                out << "<p class=\"meta\">" << html_escape(objective.description) << "</p>\n";
            }
            for (const auto& item : feedback->items) {
                if (item.objective_id != objective.id) continue;
                out << "<p>" << (item.comment.empty() ? "<em>No comment.</em>"
                                                      : html_escape(item.comment))
                    << "</p>\n";
            }
        }
        if (!feedback->overall.empty()) {
            out << "<h3>Overall</h3>\n<p>" << html_escape(feedback->overall) << "</p>\n";
        }
    } else {
        out << kPendingPlaceholder << "\n";
    }
    out << "</section>\n";

    // 8. Methodology appendix with the algorithm references.
    out << "<section class=\"page\" id=\"methodology\">\n<h2>Methodology</h2>\n"
        << "<p>Every machine judgement above comes from a published, referenced algorithm so "
        << "that feedback stays open and checkable.</p>\n"
        << "<p class=\"cite\">Edge congestion: Miniukovich, A. and De Angeli, A. (2014), "
        << "\"Quantification of interface visual complexity\", AVI '14; distance threshold per "
        << "edge pair 4 px; edges from a per-channel Canny detector after Rosenholtz, R., Li, Y. "
        << "and Nakano, L. (2007), \"Measuring visual clutter\", Journal of Vision 7(2).</p>\n"
        << "<p class=\"cite\">Fine-detail saliency: Itti, L., Koch, C. and Niebur, E. (1998), "
        << "\"A model of saliency-based visual attention for rapid scene analysis\", IEEE TPAMI "
        << "20(11), with the thresholded score over the normalized map.</p>\n"
        << "<p class=\"cite\">Colour vision deficiency simulation: Machado, G. M., Oliveira, "
        << "M. M. and Fernandes, L. A. F. (2009), \"A physiologically-based model for simulation "
        << "of color vision deficiency\", IEEE TVCG 15(6).</p>\n"
        << "<p class=\"cite\">Monochrome view: luminance conversion with the ITU-R BT.601 "
        << "weights (0.299, 0.587, 0.114), the standard print/fax grey reproduction.</p>\n"
        << "<p class=\"cite\">Colour preference (WAVE): Palmer, S. E. and Schloss, K. B. (2010), "
        << "\"An ecological valence theory of human color preference\", PNAS 107(19), scored "
        << "against the Berkeley Color Project palette.</p>\n"
        << "<p class=\"cite\">Colourfulness: Hasler, D. and Susstrunk, S. (2003), \"Measuring "
        << "colourfulness in natural images\", SPIE Human Vision and Electronic Imaging "
        << "VIII.</p>\n"
        << "<p class=\"meta\">Scores are reported to four decimal places exactly as computed by "
        << "the analysis pipeline; rankings compare this submission with every previously "
        << "analysed submission.</p>\n";
    for (const auto& flag : bundle.flags) {
        if (flag.rfind("config_fp_mismatch:", 0) == 0) {
            out << "<p class=\"meta\">Note: " << flag.substr(std::string("config_fp_mismatch:").size())
                << " corpus record(s) were produced under a different analysis configuration; "
                << "they still participate in rankings.</p>\n";
        } else if (flag == "degenerate_image") {
            out << "<p class=\"meta\">Note: the submission is a constant image; saliency is "
                << "reported as zero by definition.</p>\n";
        }
    }
    out << "</section>\n</body>\n</html>\n";
    return out.str();
}

} // namespace vizqm
