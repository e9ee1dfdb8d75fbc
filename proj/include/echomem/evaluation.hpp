#pragma once

// Scoring against ground truth (confusion matrix, per-class metrics) and the
// wall-clock / memory benchmark harness.

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "echomem/classifier.hpp"

namespace echomem {

// Truth rows are the class labels; predicted columns are the same classes
// plus a final UnID column. Fragments that cannot be scored (predicted
// Silence/Filtered/Error, or truth Silence) are tallied outside the matrix
// so silences never dilute the call metrics.
struct ConfusionMatrix {
    std::vector<std::string> classes;  // sorted; defines row/column order
    std::vector<std::vector<std::size_t>> counts;  // classes x (classes + 1)
    std::map<std::string, std::size_t> excluded;   // predicted label -> count
    std::size_t silence_truth_total = 0;
    std::size_t silence_truth_hits = 0;  // truth Silence predicted Silence

    std::size_t scored_total() const;
    std::size_t unid_total() const;
};

struct ClassMetrics {
    std::string name;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;
    bool zero_support = false;
};

struct ClassificationReport {
    std::vector<ClassMetrics> per_class;
    double accuracy = 0.0;
    std::size_t total_support = 0;
};

// Tallies results against truth (source_id -> label). Truth labels are class
// names or Silence; UnID/Filtered/Error are prediction-only. Every result
// needs a truth entry and every predicted class must exist in the truth set.
ConfusionMatrix score(const std::vector<ClassificationResult>& results,
                      const std::map<std::string, std::string>& truth);

// One-vs-rest precision/recall/F1 per class plus overall accuracy
// (diagonal / scored total). UnID predictions hurt recall and belong to no
// class's precision column.
ClassificationReport report(const ConfusionMatrix& cm);

// Plain-text table in the shape of a classification report.
std::string format_report(const ClassificationReport& rep);

// Machine-readable forms: class,precision,recall,f1,support rows with a
// trailing accuracy row; truth-by-predicted count matrix.
std::string report_to_csv(const ClassificationReport& rep);
std::string cm_to_csv(const ConfusionMatrix& cm);

// CSV readers for the evaluate path: predictions as written by
// results_to_csv, truth as source_id,truth rows.
std::vector<ClassificationResult> read_results_csv(const std::filesystem::path& path);
std::map<std::string, std::string> read_truth_csv(const std::filesystem::path& path);

struct BenchmarkReport {
    double train_time_s = 0.0;         // mean Hebbian training time
    double total_time_s = 0.0;         // mean wall-clock for the whole batch
    double per_fragment_time_s = 0.0;
    double peak_rss_mb = 0.0;          // max resident set during the run, 10^6 bytes
    std::size_t runs = 0;
    std::size_t fragments = 0;
};

// Repeats training and batch classification `runs` times (>= 5) with a
// monotonic clock and reports means; peak RSS is sampled from
// /proc/self/statm at >= 10 Hz for the duration.
BenchmarkReport benchmark(const TrainedModel& model,
                          const std::vector<FragmentSource>& sources,
                          std::size_t runs = 5, std::size_t workers = 0);

std::string format_benchmark(const BenchmarkReport& rep);

}  // namespace echomem
