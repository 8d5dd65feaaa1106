#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace vizqm {

struct CorpusRecord {
    std::string id;
    std::int64_t ts = 0;                  // UTC seconds
    std::string cohort;
    std::map<std::string, double> scores; // metric name -> value
    std::string config_fp;                // fingerprint of config + data-table versions
    bool fp_mismatch = false;             // set at add time when the store already
                                          // holds records with a different fingerprint
};

struct RankingResult {
    std::string metric;
    double score = 0.0;
    std::optional<double> percentile;     // absent when no corpus scores exist
    std::size_t corpus_size = 0;          // records carrying this metric
    std::vector<double> bin_edges;        // bins+1 ascending edges
    std::vector<std::int64_t> counts;     // per-bin corpus counts; sum == corpus_size
};

/// JSON-lines store of per-submission scores. Append-only on disk; adds take
/// an exclusive advisory lock on the file so there is a single writer.
class CorpusStore {
  public:
    /// Load every record from `path`; a missing file yields an empty store.
    /// A malformed line aborts the load with corrupt_record naming the line
    /// number (no silent skipping).
    static CorpusStore open(const std::string& path);

    /// Append a record to the file and the in-memory store. Throws
    /// duplicate_id when the id is already present. Sets fp_mismatch on the
    /// stored record when the store already contains a different config
    /// fingerprint.
    void add(CorpusRecord record);

    /// Strict-less-than percentile of `score` among stored values of
    /// `metric`, plus a 20-bin equal-width histogram spanning corpus + score.
    /// Records lacking the metric are not counted. Throws unknown_metric for
    /// a name that is neither a built-in metric nor present in any record.
    RankingResult rank(const std::string& metric, double score) const;

    /// Number of records whose config fingerprint differs from `config_fp`
    /// (for report footnotes; mismatching records still rank).
    std::size_t count_fp_mismatch(const std::string& config_fp) const;

    const std::vector<CorpusRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }
    const std::string& path() const { return path_; }

  private:
    std::string path_;
    std::vector<CorpusRecord> records_;
};

/// One JSON line (without trailing newline) for a record; stable key order.
std::string serialize_record(const CorpusRecord& record);
CorpusRecord parse_record(const std::string& line); // throws corrupt_record

constexpr int kHistogramBins = 20;

} // namespace vizqm
