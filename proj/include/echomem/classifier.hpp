#pragma once

// End-to-end pipeline: train a model from labelled exemplar fragments,
// classify single fragments or whole batches.

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "echomem/model.hpp"
#include "echomem/spectrum.hpp"
#include "echomem/wav.hpp"

namespace echomem {

inline constexpr std::string_view kLabelUnid = "UnID";
inline constexpr std::string_view kLabelSilence = "Silence";
inline constexpr std::string_view kLabelFiltered = "Filtered";
inline constexpr std::string_view kLabelError = "Error";

struct ClassificationResult {
    std::string source_id;
    std::string label;  // class name, UnID, Silence, Filtered or Error
    std::optional<MatchOutcome> match;  // absent for Silence/Filtered/Error
                                        // and for runs that hit the iteration cap
    std::size_t iterations = 0;
    std::optional<NetworkTrace> trace;  // on request only
    std::string error;                  // set iff label == Error
};

// One-shot Hebbian training from one or more exemplars per class. Exemplars
// must not be silent and their encodings must be pairwise distinct; both are
// hard errors naming the offending class. Pattern counts above 0.15*N append
// a warning (when `warnings` is given); above 0.5*N training refuses.
TrainedModel train(const std::vector<std::pair<std::string, Waveform>>& exemplars,
                   const EncodingConfig& cfg = {}, const DynamicsConfig& dyn = {},
                   bool band_filter = false,
                   std::vector<std::string>* warnings = nullptr);

// Pipeline: spectrum -> silence gate -> optional 49-51 kHz gate -> encode ->
// converge -> match. A class label is produced only for Retrieval matches;
// Reversed and Spurious map to UnID, as do runs that fail to converge.
ClassificationResult classify(const TrainedModel& model, const Waveform& w,
                              bool want_trace = false);

// Lazily loaded fragment, so batches never hold all audio in memory.
struct FragmentSource {
    std::string id;
    std::function<Waveform()> load;
};

struct BatchResult {
    std::vector<ClassificationResult> results;      // input order
    std::map<std::string, std::size_t> label_counts;
};

// Embarrassingly parallel batch over a shared read-only model. Results sit in
// input order at any worker count; per-fragment errors land in that
// fragment's slot (label Error) and never abort the batch. workers = 0 picks
// the hardware concurrency.
BatchResult classify_batch(const TrainedModel& model,
                           const std::vector<FragmentSource>& sources,
                           std::size_t workers = 0);

// CSV with header source_id,label,iterations,overlap (overlap empty when no
// match), RFC 4180 quoting, LF line endings.
std::string results_to_csv(const std::vector<ClassificationResult>& results);

}  // namespace echomem
