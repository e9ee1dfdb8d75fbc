#include "echomem/classifier.hpp"

#include <atomic>
#include <cstdio>
#include <thread>

#include "csv_util.hpp"
#include "echomem/error.hpp"

namespace echomem {

using detail::csv_field;

TrainedModel train(const std::vector<std::pair<std::string, Waveform>>& exemplars,
                   const EncodingConfig& cfg, const DynamicsConfig& dyn,
                   bool band_filter, std::vector<std::string>* warnings) {
    if (exemplars.empty()) {
        throw InvalidArgument("no exemplars given");
    }
    if (dyn.max_iterations < 1) {
        throw InvalidArgument("max_iterations must be at least 1");
    }

    const FrequencyBandMap map = band_map_for(cfg);
    std::vector<std::string> labels;
    std::vector<BipolarPattern> patterns;
    labels.reserve(exemplars.size());
    patterns.reserve(exemplars.size());
    for (const auto& [label, waveform] : exemplars) {
        const PowerSpectrum s = compute_spectrum(waveform, cfg);
        if (is_silence(s, cfg)) {
            throw InvalidArgument("exemplar for class '" + label + "' is silent");
        }
        labels.push_back(label);
        patterns.push_back(encode_pattern(s, map));
    }

    for (std::size_t a = 0; a < patterns.size(); ++a) {
        for (std::size_t b = a + 1; b < patterns.size(); ++b) {
            if (patterns[a] == patterns[b]) {
                throw InvalidArgument(
                    "exemplars for classes '" + labels[a] + "' and '" + labels[b] +
                    "' encode to the same pattern; they are indistinguishable "
                    "at this resolution");
            }
        }
    }

    const double n = static_cast<double>(cfg.n_neurons);
    const double p = static_cast<double>(patterns.size());
    if (p > 0.5 * n) {
        throw InvalidArgument("pattern count " + std::to_string(patterns.size()) +
                              " exceeds half the network size (N=" +
                              std::to_string(cfg.n_neurons) + ")");
    }
    if (p > 0.15 * n && warnings != nullptr) {
        warnings->push_back("pattern count " + std::to_string(patterns.size()) +
                            " exceeds the 0.15N capacity guideline (N=" +
                            std::to_string(cfg.n_neurons) +
                            "); expect retrieval degradation");
    }

    WeightMatrix weights = hebbian_train(patterns);
    return TrainedModel{std::move(weights), std::move(patterns), std::move(labels),
                        map,  cfg,          dyn,
                        band_filter,        kModelFormatVersion};
}

ClassificationResult classify(const TrainedModel& model, const Waveform& w,
                              bool want_trace) {
    ClassificationResult r;
    r.source_id = w.source_id;
    try {
        const PowerSpectrum s = compute_spectrum(w, model.encoding);
        if (is_silence(s, model.encoding)) {
            r.label = std::string(kLabelSilence);
            return r;
        }
        if (model.band_filter && band_reject_49_51(s)) {
            r.label = std::string(kLabelFiltered);
            return r;
        }
        const BipolarPattern x0 = encode_pattern(s, model.band_map);
        NetworkTrace trace = run_to_convergence(model.weights, x0, model.dynamics);
        r.iterations = trace.iterations();
        if (trace.converged) {
            const MatchOutcome match =
                match_state(trace.states.back(), model.stored_patterns);
            r.label = match.kind == MatchOutcome::Kind::Retrieval
                          ? model.class_labels[match.class_index]
                          : std::string(kLabelUnid);
            r.match = match;
        } else {
            r.label = std::string(kLabelUnid);
        }
        if (want_trace) {
            r.trace = std::move(trace);
        }
        return r;
    } catch (const InvalidArgument& e) {
        if (w.source_id.empty()) {
            throw;
        }
        throw InvalidArgument(w.source_id + ": " + e.what());
    } catch (const FormatError& e) {
        if (w.source_id.empty()) {
            throw;
        }
        throw FormatError(w.source_id + ": " + e.what());
    }
}

BatchResult classify_batch(const TrainedModel& model,
                           const std::vector<FragmentSource>& sources,
                           std::size_t workers) {
    BatchResult out;
    out.results.resize(sources.size());
    if (sources.empty()) {
        return out;
    }

    if (workers == 0) {
        workers = std::thread::hardware_concurrency();
        if (workers == 0) {
            workers = 1;
        }
    }
    workers = std::min(workers, sources.size());

    std::atomic<std::size_t> next{0};
    const auto run = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= sources.size()) {
                return;
            }
            ClassificationResult& slot = out.results[i];
            try {
                slot = classify(model, sources[i].load(), false);
            } catch (const std::exception& e) {
                slot = ClassificationResult{};
                slot.label = std::string(kLabelError);
                slot.error = e.what();
            }
            slot.source_id = sources[i].id;
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t t = 1; t < workers; ++t) {
        pool.emplace_back(run);
    }
    run();
    for (auto& t : pool) {
        t.join();
    }

    for (const auto& r : out.results) {
        ++out.label_counts[r.label];
    }
    return out;
}

std::string results_to_csv(const std::vector<ClassificationResult>& results) {
    std::string csv = "source_id,label,iterations,overlap\n";
    for (const auto& r : results) {
        csv += csv_field(r.source_id);
        csv += ',';
        csv += csv_field(r.label);
        csv += ',';
        csv += std::to_string(r.iterations);
        csv += ',';
        if (r.match.has_value()) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.6f", r.match->overlap);
            csv += buf;
        }
        csv += '\n';
    }
    return csv;
}

}  // namespace echomem
