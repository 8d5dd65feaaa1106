#include "vizqm/corpus.hpp"
#include "vizqm/errors.hpp"
#include "vizqm/util.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

namespace vizqm {

namespace {

using nlohmann::json;

const std::set<std::string>& builtin_metrics() {
    static const std::set<std::string> names = {"S_ec", "S_sy", "S_wv", "S_hs"};
    return names;
}

} // namespace

std::string serialize_record(const CorpusRecord& record) {
    json doc;
    doc["id"] = record.id;
    doc["ts"] = record.ts;
    doc["cohort"] = record.cohort;
    doc["scores"] = record.scores;
    doc["config_fp"] = record.config_fp;
    if (record.fp_mismatch) doc["fp_mismatch"] = true;
    return doc.dump(); // nlohmann objects serialize with sorted keys: stable bytes
}

CorpusRecord parse_record(const std::string& line) {
    json doc = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw_error(Errc::corrupt_record, "record is not a JSON object");
    }
    CorpusRecord record;
    try {
        record.id = doc.at("id").get<std::string>();
        record.ts = doc.at("ts").get<std::int64_t>();
        record.cohort = doc.at("cohort").get<std::string>();
        record.config_fp = doc.at("config_fp").get<std::string>();
        for (const auto& [key, value] : doc.at("scores").items()) {
            if (!value.is_number()) {
                throw_error(Errc::corrupt_record, "score '" + key + "' is not a number");
            }
            record.scores[key] = value.get<double>();
        }
        if (doc.contains("fp_mismatch")) record.fp_mismatch = doc["fp_mismatch"].get<bool>();
    } catch (const json::exception& e) {
        throw_error(Errc::corrupt_record, std::string("missing or mistyped field: ") + e.what());
    }
    if (record.id.empty()) {
        throw_error(Errc::corrupt_record, "record id is empty");
    }
    for (const auto& [name, value] : record.scores) {
        if (!std::isfinite(value)) {
            throw_error(Errc::corrupt_record, "score '" + name + "' is not finite");
        }
    }
    return record;
}

CorpusStore CorpusStore::open(const std::string& path) {
    CorpusStore store;
    store.path_ = path;
    if (!path_exists(path)) {
        return store;
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw_error(Errc::io_error, "cannot open corpus file: " + path);
    }
    std::string line;
    std::size_t line_no = 0;
    std::set<std::string> seen;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        CorpusRecord record;
        try {
            record = parse_record(line);
        } catch (const Error& e) {
            throw_error(Errc::corrupt_record, "corpus line " + std::to_string(line_no) + ": " +
                                                  e.what() + " (" + path + ")");
        }
        if (!seen.insert(record.id).second) {
            throw_error(Errc::corrupt_record, "corpus line " + std::to_string(line_no) +
                                                  ": duplicate id '" + record.id + "' (" + path +
                                                  ")");
        }
        store.records_.push_back(std::move(record));
    }
    return store;
}

void CorpusStore::add(CorpusRecord record) {
    for (const auto& existing : records_) {
        if (existing.id == record.id) {
            throw_error(Errc::duplicate_id, "submission id already in corpus: " + record.id);
        }
    }
    record.fp_mismatch = false;
    for (const auto& existing : records_) {
        if (existing.config_fp != record.config_fp) {
            record.fp_mismatch = true;
            break;
        }
    }

    const std::string line = serialize_record(record) + "\n";
    int fd = ::open(path_.c_str(), O_WRONLY | O_APPEND | O_CREAT, 0644);
    if (fd < 0) {
        throw_error(Errc::io_error, "cannot open corpus file for append: " + path_);
    }
    if (::flock(fd, LOCK_EX) != 0) {
        ::close(fd);
        throw_error(Errc::io_error, "cannot lock corpus file: " + path_);
    }
    ssize_t written = ::write(fd, line.data(), line.size());
    ::flock(fd, LOCK_UN);
    ::close(fd);
    if (written != static_cast<ssize_t>(line.size())) {
        throw_error(Errc::io_error, "short write appending to corpus file: " + path_);
    }
    records_.push_back(std::move(record));
}

RankingResult CorpusStore::rank(const std::string& metric, double score) const {
    bool known = builtin_metrics().count(metric) > 0;
    std::vector<double> values;
    values.reserve(records_.size());
    for (const auto& record : records_) {
        auto it = record.scores.find(metric);
        if (it != record.scores.end()) {
            known = true;
            values.push_back(it->second);
        }
    }
    if (!known) {
        throw_error(Errc::unknown_metric, "unknown metric: " + metric);
    }

    RankingResult result;
    result.metric = metric;
    result.score = score;
    result.corpus_size = values.size();

    if (!values.empty()) {
        std::size_t below = 0;
        for (double v : values) {
            if (v < score) ++below;
        }
        result.percentile = static_cast<double>(below) / static_cast<double>(values.size());
    }

    double lo = score, hi = score;
    for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi > lo) {
        const double width = (hi - lo) / kHistogramBins;
        result.bin_edges.resize(kHistogramBins + 1);
        for (int i = 0; i <= kHistogramBins; ++i) result.bin_edges[static_cast<size_t>(i)] = lo + width * i;
        result.bin_edges.back() = hi; // guard against accumulation drift
        result.counts.assign(kHistogramBins, 0);
        for (double v : values) {
            int bin = static_cast<int>((v - lo) / width);
            bin = std::clamp(bin, 0, kHistogramBins - 1);
            ++result.counts[static_cast<size_t>(bin)];
        }
    } else {
        // Degenerate range: a single bin centered on the value.
        const double half = std::max(std::abs(lo) * 1e-9, 1e-9) / 2.0;
        result.bin_edges = {lo - half, lo + half};
        result.counts = {static_cast<std::int64_t>(values.size())};
    }
    return result;
}

std::size_t CorpusStore::count_fp_mismatch(const std::string& config_fp) const {
    std::size_t n = 0;
    for (const auto& record : records_) {
        if (record.config_fp != config_fp) ++n;
    }
    return n;
}

} // namespace vizqm
