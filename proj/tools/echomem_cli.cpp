// echomem: train, run and inspect the Hopfield bioacoustic classifier.
//
// Exit codes: 0 success, 1 usage, 2 I/O trouble, 3 bad data or format.

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "echomem/classifier.hpp"
#include "echomem/error.hpp"
#include "echomem/evaluation.hpp"
#include "echomem/model.hpp"
#include "echomem/spectrum.hpp"
#include "echomem/wav.hpp"

namespace fs = std::filesystem;

namespace {

struct UsageError {
    std::string message;
};

bool has_wav_extension(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".wav";
}

// A file is taken as-is; a directory is walked recursively for .wav files
// (case-insensitive) and sorted lexicographically for deterministic order.
std::vector<fs::path> collect_inputs(const fs::path& input) {
    if (fs::is_regular_file(input)) {
        return {input};
    }
    if (!fs::is_directory(input)) {
        throw echomem::IoError("input '" + input.string() +
                               "' is neither a file nor a directory");
    }
    std::vector<fs::path> paths;
    for (const auto& entry : fs::recursive_directory_iterator(input)) {
        if (entry.is_regular_file() && has_wav_extension(entry.path())) {
            paths.push_back(entry.path());
        }
    }
    std::sort(paths.begin(), paths.end(),
              [](const fs::path& a, const fs::path& b) {
                  return a.generic_string() < b.generic_string();
              });
    if (paths.empty()) {
        throw echomem::IoError("no .wav files under '" + input.string() + "'");
    }
    return paths;
}

std::vector<echomem::FragmentSource> make_sources(const std::vector<fs::path>& paths) {
    std::vector<echomem::FragmentSource> sources;
    sources.reserve(paths.size());
    for (const auto& p : paths) {
        sources.push_back(
            {p.generic_string(), [p] { return echomem::read_wav_file(p); }});
    }
    return sources;
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw echomem::IoError("cannot open '" + path.string() + "' for writing");
    }
    out << content;
    out.flush();
    if (!out) {
        throw echomem::IoError("failed writing '" + path.string() + "'");
    }
}

char glyph(echomem::Spin s) { return s > 0 ? '+' : (s < 0 ? '-' : '0'); }

const char* kind_name(echomem::MatchOutcome::Kind k) {
    switch (k) {
        case echomem::MatchOutcome::Kind::Retrieval: return "Retrieval";
        case echomem::MatchOutcome::Kind::Reversed: return "Reversed";
        case echomem::MatchOutcome::Kind::Spurious: return "Spurious";
    }
    return "?";
}

// Text view of the relaxation: one glyph row per iteration plus its energy.
std::string format_trace(const echomem::ClassificationResult& r) {
    std::string text = "source: " + r.source_id + "\n";
    text += "label: " + r.label;
    if (r.match.has_value()) {
        char buf[96];
        std::snprintf(buf, sizeof buf, " (%s, overlap %.6f, %zu iterations)",
                      kind_name(r.match->kind), r.match->overlap, r.iterations);
        text += buf;
    } else if (!r.error.empty()) {
        text += " (" + r.error + ")";
    }
    text += '\n';
    if (!r.trace.has_value()) {
        return text;
    }
    text += r.trace->converged ? "converged: yes\n" : "converged: no\n";
    text += "iter        energy  state\n";
    for (std::size_t t = 0; t < r.trace->states.size(); ++t) {
        char head[48];
        std::snprintf(head, sizeof head, "%4zu  %12.6f  ", t, r.trace->energies[t]);
        text += head;
        for (const echomem::Spin s : r.trace->states[t].values()) {
            text += glyph(s);
        }
        text += '\n';
    }
    return text;
}

std::string sanitize_filename(const std::string& name) {
    std::string safe;
    safe.reserve(name.size());
    for (const char c : name) {
        const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '.' ||
                        c == '_' || c == '-';
        safe += ok ? c : '_';
    }
    return safe;
}

std::string counts_line(const std::map<std::string, std::size_t>& counts,
                        std::size_t total) {
    std::string line = std::to_string(total) + " fragments:";
    for (const auto& [label, n] : counts) {
        line += ' ' + label + '=' + std::to_string(n);
    }
    return line;
}

struct TrainOptions {
    std::vector<std::string> exemplars;
    std::string out;
    echomem::EncodingConfig encoding;
};

int run_train(const TrainOptions& opt) {
    std::vector<std::pair<std::string, echomem::Waveform>> labelled;
    for (const std::string& spec : opt.exemplars) {
        const std::size_t eq = spec.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
            throw UsageError{"--exemplar expects LABEL=PATH, got '" + spec + "'"};
        }
        labelled.emplace_back(spec.substr(0, eq),
                              echomem::read_wav_file(spec.substr(eq + 1)));
    }

    std::vector<std::string> warnings;
    const echomem::TrainedModel model =
        echomem::train(labelled, opt.encoding, {}, false, &warnings);
    for (const std::string& w : warnings) {
        std::cerr << "warning: " << w << '\n';
    }
    echomem::save_model_file(opt.out, model);
    std::cout << "trained " << model.class_labels.size() << " classes, "
              << model.weights.size() << " neurons -> " << opt.out << '\n';
    return 0;
}

struct ClassifyOptions {
    std::string model;
    std::string input;
    std::string out;
    std::string trace_dir;
    bool band_reject = false;
    std::size_t jobs = 0;
};

int run_classify(const ClassifyOptions& opt) {
    echomem::TrainedModel model = echomem::load_model_file(opt.model);
    if (opt.band_reject) {
        model.band_filter = true;
    }
    const auto sources = make_sources(collect_inputs(opt.input));

    std::vector<echomem::ClassificationResult> results;
    std::map<std::string, std::size_t> counts;
    if (opt.trace_dir.empty()) {
        echomem::BatchResult batch = echomem::classify_batch(model, sources, opt.jobs);
        results = std::move(batch.results);
        counts = std::move(batch.label_counts);
    } else {
        // tracing forces the serial path; each fragment writes one file
        fs::create_directories(opt.trace_dir);
        results.reserve(sources.size());
        for (std::size_t i = 0; i < sources.size(); ++i) {
            echomem::ClassificationResult r;
            try {
                r = echomem::classify(model, sources[i].load(), true);
            } catch (const std::exception& e) {
                r.label = std::string(echomem::kLabelError);
                r.error = e.what();
            }
            r.source_id = sources[i].id;
            char index[16];
            std::snprintf(index, sizeof index, "%06zu", i);
            const fs::path trace_path =
                fs::path(opt.trace_dir) /
                (std::string(index) + '_' +
                 sanitize_filename(fs::path(sources[i].id).filename().string()) +
                 ".trace.txt");
            write_text_file(trace_path, format_trace(r));
            r.trace.reset();
            ++counts[r.label];
            results.push_back(std::move(r));
        }
    }

    for (const auto& r : results) {
        if (r.label == echomem::kLabelError) {
            std::cerr << "error: " << r.source_id << ": " << r.error << '\n';
        }
    }
    write_text_file(opt.out, echomem::results_to_csv(results));
    std::cout << counts_line(counts, results.size()) << '\n';
    return 0;
}

struct EvaluateOptions {
    std::string pred;
    std::string truth;
    std::string out_report;
    std::string out_cm;
};

int run_evaluate(const EvaluateOptions& opt) {
    const auto results = echomem::read_results_csv(opt.pred);
    const auto truth = echomem::read_truth_csv(opt.truth);
    const echomem::ConfusionMatrix cm = echomem::score(results, truth);
    const echomem::ClassificationReport rep = echomem::report(cm);

    std::string text = echomem::format_report(rep);
    text += "\nUnID: " + std::to_string(cm.unid_total()) + '\n';
    if (!cm.excluded.empty()) {
        std::string line = "excluded from scoring:";
        for (const auto& [label, n] : cm.excluded) {
            line += ' ' + label + '=' + std::to_string(n);
        }
        text += line + '\n';
    }
    if (cm.silence_truth_total > 0) {
        text += "silence recall: " + std::to_string(cm.silence_truth_hits) + '/' +
                std::to_string(cm.silence_truth_total) + '\n';
    }

    write_text_file(opt.out_report, text);
    write_text_file(opt.out_cm, echomem::cm_to_csv(cm));
    std::cout << text;
    return 0;
}

struct TraceOptions {
    std::string model;
    std::string input;
};

int run_trace(const TraceOptions& opt) {
    const echomem::TrainedModel model = echomem::load_model_file(opt.model);
    echomem::ClassificationResult r =
        echomem::classify(model, echomem::read_wav_file(opt.input), true);
    if (r.source_id.empty()) {
        r.source_id = opt.input;
    }
    std::cout << format_trace(r);
    return 0;
}

struct SpectrumOptions {
    std::string input;
    std::string out;
};

int run_spectrum(const SpectrumOptions& opt) {
    const echomem::Waveform w = echomem::read_wav_file(opt.input);
    const echomem::PowerSpectrum spec = echomem::compute_spectrum(w, {});

    std::string csv = "freq_hz,power\n";
    char row[80];
    for (std::size_t k = 0; k < spec.power.size(); ++k) {
        std::snprintf(row, sizeof row, "%.6f,%.9e\n", spec.bin_freqs[k], spec.power[k]);
        csv += row;
    }
    write_text_file(opt.out, csv);

    char summary[128];
    std::snprintf(summary, sizeof summary,
                  "%zu bins -> %s, F_maxE %.1f Hz, %zu peaks\n", spec.power.size(),
                  opt.out.c_str(), spec.f_max_e, spec.peak_freqs.size());
    std::cout << summary;
    return 0;
}

struct BenchOptions {
    std::string model;
    std::string input;
    std::size_t runs = 5;
    std::size_t jobs = 0;
};

int run_bench(const BenchOptions& opt) {
    const echomem::TrainedModel model = echomem::load_model_file(opt.model);
    const auto sources = make_sources(collect_inputs(opt.input));
    const echomem::BenchmarkReport rep =
        echomem::benchmark(model, sources, opt.runs, opt.jobs);
    std::cout << echomem::format_benchmark(rep);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hopfield associative-memory bioacoustic classifier"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();
    app.set_config("--config", "",
                   "key=value config file; explicit flags take precedence");

    TrainOptions train_opt;
    CLI::App* train = app.add_subcommand("train", "Train a model from exemplar WAVs");
    train->fallthrough();
    train->add_option("--exemplar", train_opt.exemplars,
                      "LABEL=PATH exemplar recording (repeatable)")
        ->required();
    train->add_option("--out", train_opt.out, "output model file")->required();
    train->add_option("--band-lo", train_opt.encoding.band_lo_hz,
                      "analysis band lower edge, Hz");
    train->add_option("--band-hi", train_opt.encoding.band_hi_hz,
                      "analysis band upper edge, Hz");
    train->add_option("--neurons", train_opt.encoding.n_neurons,
                      "frequency bands / network size");
    train->add_option("--threshold", train_opt.encoding.activation_threshold,
                      "peak activation threshold, fraction of the band maximum");

    ClassifyOptions classify_opt;
    CLI::App* classify =
        app.add_subcommand("classify", "Label a WAV file or a directory of fragments");
    classify->fallthrough();
    classify->add_option("--model", classify_opt.model, "trained model file")
        ->required();
    classify->add_option("--input", classify_opt.input, "WAV file or directory")
        ->required();
    classify->add_option("--out", classify_opt.out, "output CSV path")->required();
    classify->add_flag("--band-reject-49-51", classify_opt.band_reject,
                       "drop fragments peaking in the 49-51 kHz interference band");
    classify->add_option("--trace-dir", classify_opt.trace_dir,
                         "write per-fragment convergence traces here (serial)");
    classify->add_option("--jobs", classify_opt.jobs,
                         "worker threads, 0 = all available cores");

    EvaluateOptions eval_opt;
    CLI::App* evaluate =
        app.add_subcommand("evaluate", "Score predictions against ground truth");
    evaluate->fallthrough();
    evaluate->add_option("--pred", eval_opt.pred, "predictions CSV from classify")
        ->required();
    evaluate->add_option("--truth", eval_opt.truth, "truth CSV (source_id,truth)")
        ->required();
    evaluate->add_option("--out-report", eval_opt.out_report, "metrics text file")
        ->required();
    evaluate->add_option("--out-cm", eval_opt.out_cm, "confusion matrix CSV")
        ->required();

    TraceOptions trace_opt;
    CLI::App* trace =
        app.add_subcommand("trace", "Show per-iteration states and energies");
    trace->fallthrough();
    trace->add_option("--model", trace_opt.model, "trained model file")->required();
    trace->add_option("--input", trace_opt.input, "WAV file")->required();

    SpectrumOptions spectrum_opt;
    CLI::App* spectrum =
        app.add_subcommand("spectrum", "Export the power spectrum as CSV");
    spectrum->fallthrough();
    spectrum->add_option("--input", spectrum_opt.input, "WAV file")->required();
    spectrum->add_option("--out", spectrum_opt.out, "output CSV (freq_hz,power)")
        ->required();

    BenchOptions bench_opt;
    CLI::App* bench =
        app.add_subcommand("bench", "Time training and batch classification");
    bench->fallthrough();
    bench->add_option("--model", bench_opt.model, "trained model file")->required();
    bench->add_option("--input", bench_opt.input, "WAV file or directory")->required();
    bench->add_option("--runs", bench_opt.runs, "number of timed repetitions");
    bench->add_option("--jobs", bench_opt.jobs,
                      "worker threads, 0 = all available cores");

    train->callback([&] { run_train(train_opt); });
    classify->callback([&] { run_classify(classify_opt); });
    evaluate->callback([&] { run_evaluate(eval_opt); });
    trace->callback([&] { run_trace(trace_opt); });
    spectrum->callback([&] { run_spectrum(spectrum_opt); });
    bench->callback([&] { run_bench(bench_opt); });

    try {
        app.parse(argc, argv);
        return 0;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.message << '\n';
        return 1;
    } catch (const echomem::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const echomem::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
