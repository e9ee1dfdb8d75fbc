#include "echomem/evaluation.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "csv_util.hpp"
#include "echomem/error.hpp"

namespace echomem {
namespace {

using detail::csv_field;

std::string fixed6(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::vector<std::vector<std::string>> load_csv(const std::filesystem::path& path,
                                               const char* col0, const char* col1) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    auto rows = detail::parse_csv(buf.str());
    if (rows.empty()) {
        throw FormatError("'" + path.string() + "' is empty");
    }
    const auto& header = rows.front();
    if (header.size() < 2 || header[0] != col0 || header[1] != col1) {
        throw FormatError("'" + path.string() + "' does not start with a " +
                          col0 + "," + col1 + " header");
    }
    return rows;
}

// Peak resident set size, sampled from /proc/self/statm on a helper thread.
class RssSampler {
public:
    RssSampler()
        : page_(static_cast<std::size_t>(sysconf(_SC_PAGESIZE))), worker_([this] {
              while (!done_.load(std::memory_order_relaxed)) {
                  sample();
                  std::this_thread::sleep_for(std::chrono::milliseconds(10));
              }
          }) {
        sample();
    }

    RssSampler(const RssSampler&) = delete;
    RssSampler& operator=(const RssSampler&) = delete;

    ~RssSampler() {
        if (worker_.joinable()) {
            stop();
        }
    }

    double stop_and_report_mb() {
        stop();
        return static_cast<double>(peak_.load()) / 1e6;
    }

private:
    void stop() {
        done_.store(true, std::memory_order_relaxed);
        worker_.join();
        sample();
    }

    void sample() {
        std::ifstream statm("/proc/self/statm");
        std::size_t total = 0;
        std::size_t resident = 0;
        if (statm >> total >> resident) {
            const std::size_t bytes = resident * page_;
            std::size_t prev = peak_.load(std::memory_order_relaxed);
            while (bytes > prev &&
                   !peak_.compare_exchange_weak(prev, bytes, std::memory_order_relaxed)) {
            }
        }
    }

    std::size_t page_;
    std::atomic<std::size_t> peak_{0};
    std::atomic<bool> done_{false};
    std::thread worker_;
};

}  // namespace

std::size_t ConfusionMatrix::scored_total() const {
    std::size_t total = 0;
    for (const auto& row : counts) {
        for (const std::size_t c : row) {
            total += c;
        }
    }
    return total;
}

std::size_t ConfusionMatrix::unid_total() const {
    std::size_t total = 0;
    for (const auto& row : counts) {
        if (!row.empty()) {
            total += row.back();
        }
    }
    return total;
}

ConfusionMatrix score(const std::vector<ClassificationResult>& results,
                      const std::map<std::string, std::string>& truth) {
    std::set<std::string> class_set;
    for (const auto& [id, label] : truth) {
        if (label == kLabelUnid || label == kLabelFiltered || label == kLabelError) {
            throw InvalidArgument("'" + label + "' is a prediction-only label and cannot "
                                  "be the truth for '" + id + "'");
        }
        if (label != kLabelSilence) {
            class_set.insert(label);
        }
    }

    ConfusionMatrix cm;
    cm.classes.assign(class_set.begin(), class_set.end());
    cm.counts.assign(cm.classes.size(),
                     std::vector<std::size_t>(cm.classes.size() + 1, 0));
    const auto class_index = [&cm](const std::string& name) {
        const auto it = std::lower_bound(cm.classes.begin(), cm.classes.end(), name);
        return it != cm.classes.end() && *it == name
                   ? static_cast<std::ptrdiff_t>(it - cm.classes.begin())
                   : std::ptrdiff_t{-1};
    };

    for (const auto& r : results) {
        const auto entry = truth.find(r.source_id);
        if (entry == truth.end()) {
            throw InvalidArgument("no truth label for '" + r.source_id + "'");
        }
        if (entry->second == kLabelSilence) {
            ++cm.silence_truth_total;
            if (r.label == kLabelSilence) {
                ++cm.silence_truth_hits;
            }
            continue;
        }
        auto& row = cm.counts[static_cast<std::size_t>(class_index(entry->second))];
        if (r.label == kLabelSilence || r.label == kLabelFiltered ||
            r.label == kLabelError) {
            ++cm.excluded[r.label];
        } else if (r.label == kLabelUnid) {
            ++row.back();
        } else {
            const std::ptrdiff_t col = class_index(r.label);
            if (col < 0) {
                throw InvalidArgument("predicted label '" + r.label +
                                      "' does not appear in the truth set");
            }
            ++row[static_cast<std::size_t>(col)];
        }
    }
    return cm;
}

ClassificationReport report(const ConfusionMatrix& cm) {
    const std::size_t scored = cm.scored_total();
    if (cm.classes.empty() || scored == 0) {
        throw InvalidArgument("nothing to report: the confusion matrix is empty");
    }

    ClassificationReport rep;
    rep.total_support = scored;
    std::size_t diagonal = 0;
    for (std::size_t k = 0; k < cm.classes.size(); ++k) {
        ClassMetrics m;
        m.name = cm.classes[k];
        const double tp = static_cast<double>(cm.counts[k][k]);
        diagonal += cm.counts[k][k];

        std::size_t row_sum = 0;
        for (const std::size_t c : cm.counts[k]) {
            row_sum += c;
        }
        std::size_t col_sum = 0;
        for (const auto& row : cm.counts) {
            col_sum += row[k];
        }

        m.support = row_sum;
        m.zero_support = row_sum == 0;
        if (col_sum > 0) {
            m.precision = tp / static_cast<double>(col_sum);
        }
        if (row_sum > 0) {
            m.recall = tp / static_cast<double>(row_sum);
        }
        if (m.precision + m.recall > 0.0) {
            m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
        }
        rep.per_class.push_back(std::move(m));
    }
    rep.accuracy = static_cast<double>(diagonal) / static_cast<double>(scored);
    return rep;
}

std::string format_report(const ClassificationReport& rep) {
    std::size_t width = 8;
    for (const auto& m : rep.per_class) {
        width = std::max(width, m.name.size());
    }
    const int w = static_cast<int>(width);

    char line[256];
    std::snprintf(line, sizeof line, "%-*s  %9s  %9s  %9s  %9s\n", w, "class",
                  "precision", "recall", "f1", "support");
    std::string text = line;
    for (const auto& m : rep.per_class) {
        std::snprintf(line, sizeof line, "%-*s  %9.4f  %9.4f  %9.4f  %9zu%s\n", w,
                      m.name.c_str(), m.precision, m.recall, m.f1, m.support,
                      m.zero_support ? "  (no support)" : "");
        text += line;
    }
    std::snprintf(line, sizeof line, "%-*s  %9s  %9s  %9.4f  %9zu\n", w, "accuracy",
                  "", "", rep.accuracy, rep.total_support);
    text += line;
    return text;
}

std::string report_to_csv(const ClassificationReport& rep) {
    std::string csv = "class,precision,recall,f1,support\n";
    for (const auto& m : rep.per_class) {
        csv += csv_field(m.name);
        csv += ',' + fixed6(m.precision);
        csv += ',' + fixed6(m.recall);
        csv += ',' + fixed6(m.f1);
        csv += ',' + std::to_string(m.support);
        csv += '\n';
    }
    csv += "accuracy,,," + fixed6(rep.accuracy) + ',' +
           std::to_string(rep.total_support) + '\n';
    return csv;
}

std::string cm_to_csv(const ConfusionMatrix& cm) {
    std::string csv = "truth";
    for (const auto& name : cm.classes) {
        csv += ',' + csv_field(name);
    }
    csv += ",UnID\n";
    for (std::size_t k = 0; k < cm.classes.size(); ++k) {
        csv += csv_field(cm.classes[k]);
        for (const std::size_t c : cm.counts[k]) {
            csv += ',' + std::to_string(c);
        }
        csv += '\n';
    }
    return csv;
}

std::vector<ClassificationResult> read_results_csv(const std::filesystem::path& path) {
    const auto rows = load_csv(path, "source_id", "label");
    std::vector<ClassificationResult> results;
    results.reserve(rows.size() - 1);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.size() < 2) {
            throw FormatError("'" + path.string() + "' row " + std::to_string(i + 1) +
                              " has fewer than 2 fields");
        }
        ClassificationResult r;
        r.source_id = row[0];
        r.label = row[1];
        if (row.size() > 2 && !row[2].empty()) {
            try {
                r.iterations = std::stoul(row[2]);
            } catch (const std::exception&) {
                throw FormatError("'" + path.string() + "' row " +
                                  std::to_string(i + 1) + ": bad iteration count '" +
                                  row[2] + "'");
            }
        }
        results.push_back(std::move(r));
    }
    return results;
}

std::map<std::string, std::string> read_truth_csv(const std::filesystem::path& path) {
    const auto rows = load_csv(path, "source_id", "truth");
    std::map<std::string, std::string> truth;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.size() < 2) {
            throw FormatError("'" + path.string() + "' row " + std::to_string(i + 1) +
                              " has fewer than 2 fields");
        }
        if (!truth.emplace(row[0], row[1]).second) {
            throw FormatError("'" + path.string() + "' lists '" + row[0] +
                              "' more than once");
        }
    }
    return truth;
}

BenchmarkReport benchmark(const TrainedModel& model,
                          const std::vector<FragmentSource>& sources,
                          std::size_t runs, std::size_t workers) {
    if (sources.empty()) {
        throw InvalidArgument("nothing to benchmark: no fragment sources");
    }
    if (runs < 5) {
        throw InvalidArgument("benchmark needs at least 5 runs, got " +
                              std::to_string(runs));
    }

    using clock = std::chrono::steady_clock;
    const auto seconds_since = [](clock::time_point t0) {
        return std::chrono::duration<double>(clock::now() - t0).count();
    };

    RssSampler rss;
    BenchmarkReport rep;
    rep.runs = runs;
    rep.fragments = sources.size();

    double train_total = 0.0;
    for (std::size_t r = 0; r < runs; ++r) {
        const auto t0 = clock::now();
        volatile std::size_t sink = hebbian_train(model.stored_patterns).size();
        (void)sink;
        train_total += seconds_since(t0);
    }
    rep.train_time_s = train_total / static_cast<double>(runs);

    double batch_total = 0.0;
    for (std::size_t r = 0; r < runs; ++r) {
        const auto t0 = clock::now();
        const BatchResult batch = classify_batch(model, sources, workers);
        batch_total += seconds_since(t0);
        if (batch.results.size() != sources.size()) {
            throw Error("benchmark batch lost fragments");
        }
    }
    rep.total_time_s = batch_total / static_cast<double>(runs);
    rep.per_fragment_time_s = rep.total_time_s / static_cast<double>(sources.size());
    rep.peak_rss_mb = rss.stop_and_report_mb();
    return rep;
}

std::string format_benchmark(const BenchmarkReport& rep) {
    char line[160];
    std::string text;
    std::snprintf(line, sizeof line, "runs:            %zu\n", rep.runs);
    text += line;
    std::snprintf(line, sizeof line, "fragments:       %zu\n", rep.fragments);
    text += line;
    std::snprintf(line, sizeof line, "train time:      %.3f ms (mean)\n",
                  rep.train_time_s * 1e3);
    text += line;
    std::snprintf(line, sizeof line, "classify total:  %.3f s (mean)\n",
                  rep.total_time_s);
    text += line;
    std::snprintf(line, sizeof line, "per fragment:    %.3f ms\n",
                  rep.per_fragment_time_s * 1e3);
    text += line;
    std::snprintf(line, sizeof line, "peak memory:     %.2f MB\n", rep.peak_rss_mb);
    text += line;
    return text;
}

}  // namespace echomem
