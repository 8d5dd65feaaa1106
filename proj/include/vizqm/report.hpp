#pragma once

#include "vizqm/pipeline.hpp"

#include <optional>
#include <string>
#include <vector>

namespace vizqm {

struct RubricObjective {
    std::string id;
    std::string title;
    std::string description;
    double max_points = 0.0;
    std::vector<std::string> metrics; // names of the scores relevant to this objective
};

struct Rubric {
    std::vector<RubricObjective> objectives;
};

struct FeedbackItem {
    std::string objective_id;
    double mark = 0.0;
    std::string comment;
};

struct FeedbackBundle {
    std::vector<FeedbackItem> items; // one per rubric objective
    std::string overall;
    std::string marker;
};

/// Parse + validate a rubric JSON file ({"objectives": [...]}); throws
/// schema_error naming the offending field path (e.g. "objectives[3].id").
Rubric load_rubric(const std::string& path);

/// Parse + validate marker feedback against the rubric: full objective
/// coverage (missing_objective), one item per objective and known ids
/// (schema_error), and 0 <= mark <= max_points (mark_out_of_range).
FeedbackBundle load_feedback(const std::string& path, const Rubric& rubric);

/// Render the student-facing feedback document: a single self-contained HTML
/// file (all images base64-embedded) paginated into exactly eight print
/// sections — cover, marks, edge congestion, saliency, colour vision panels,
/// colour scores, written feedback, methodology. Passing no feedback selects
/// machine-only mode, which renders "pending human assessment" placeholders
/// in the marks and feedback sections. `bundle_dir` is where the bundle's
/// relative artifact paths resolve. Throws incomplete_bundle naming any
/// missing artifact. Output is byte-deterministic for identical inputs.
std::string assemble_report(const AnalysisBundle& bundle, const Rubric& rubric,
                            const std::optional<FeedbackBundle>& feedback,
                            const std::string& bundle_dir);

/// Base64 of raw bytes (RFC 4648, with padding).
std::string base64_encode(const std::string& bytes);

} // namespace vizqm
