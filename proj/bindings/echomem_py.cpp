// Python bindings for the core pipeline: waveforms, spectra, Hopfield
// primitives, training, classification and model files.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "echomem/classifier.hpp"
#include "echomem/error.hpp"
#include "echomem/evaluation.hpp"
#include "echomem/model.hpp"
#include "echomem/spectrum.hpp"
#include "echomem/wav.hpp"

namespace py = pybind11;
using namespace echomem;

namespace {

BipolarPattern to_pattern(const std::vector<int>& values) {
    return BipolarPattern::from_ints(values);
}

std::vector<int> from_pattern(const BipolarPattern& p) {
    return std::vector<int>(p.values().begin(), p.values().end());
}

const char* kind_name(MatchOutcome::Kind k) {
    switch (k) {
        case MatchOutcome::Kind::Retrieval: return "retrieval";
        case MatchOutcome::Kind::Reversed: return "reversed";
        case MatchOutcome::Kind::Spurious: return "spurious";
    }
    return "?";
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Hopfield associative-memory bioacoustic classifier";

    static py::exception<FormatError> format_error(m, "FormatError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const FormatError& e) {
            py::set_error(format_error, e.what());
        } catch (const IoError& e) {
            PyErr_SetString(PyExc_OSError, e.what());
        } catch (const InvalidArgument& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    py::class_<Waveform>(m, "Waveform")
        .def(py::init([](std::vector<double> samples, double sample_rate,
                         std::string source_id) {
                 return Waveform{std::move(samples), sample_rate,
                                 std::move(source_id)};
             }),
             py::arg("samples"), py::arg("sample_rate"), py::arg("source_id") = "")
        .def_readwrite("samples", &Waveform::samples)
        .def_readwrite("sample_rate", &Waveform::sample_rate)
        .def_readwrite("source_id", &Waveform::source_id)
        .def("__len__", [](const Waveform& w) { return w.samples.size(); });

    m.def("read_wav", &read_wav_file, py::arg("path"),
          "Decode a RIFF/WAVE file (PCM 8/16/24/32 or float32), averaging "
          "channels to mono.");
    m.def(
        "write_wav",
        [](const std::filesystem::path& path, const Waveform& w) {
            write_wav_pcm16(path, w.samples, w.sample_rate);
        },
        py::arg("path"), py::arg("waveform"), "Write 16-bit PCM.");

    py::class_<EncodingConfig>(m, "EncodingConfig")
        .def(py::init<>())
        .def_readwrite("band_lo_hz", &EncodingConfig::band_lo_hz)
        .def_readwrite("band_hi_hz", &EncodingConfig::band_hi_hz)
        .def_readwrite("n_neurons", &EncodingConfig::n_neurons)
        .def_readwrite("activation_threshold", &EncodingConfig::activation_threshold)
        .def_readwrite("silence_power_floor", &EncodingConfig::silence_power_floor)
        .def_readwrite("fft_length", &EncodingConfig::fft_length);

    py::class_<PowerSpectrum>(m, "PowerSpectrum")
        .def_readonly("power", &PowerSpectrum::power)
        .def_readonly("bin_freqs", &PowerSpectrum::bin_freqs)
        .def_readonly("f_max_e", &PowerSpectrum::f_max_e)
        .def_readonly("peak_freqs", &PowerSpectrum::peak_freqs);

    m.def("compute_spectrum", &compute_spectrum, py::arg("waveform"),
          py::arg("config") = EncodingConfig{},
          "Hann-windowed one-sided power spectrum with F_maxE and peak "
          "frequencies.");

    py::class_<NetworkTrace>(m, "NetworkTrace")
        .def_property_readonly("states",
                               [](const NetworkTrace& t) {
                                   std::vector<std::vector<int>> out;
                                   out.reserve(t.states.size());
                                   for (const auto& s : t.states) {
                                       out.push_back(from_pattern(s));
                                   }
                                   return out;
                               })
        .def_readonly("energies", &NetworkTrace::energies)
        .def_readonly("converged", &NetworkTrace::converged)
        .def_property_readonly("iterations", &NetworkTrace::iterations);

    py::class_<MatchOutcome>(m, "MatchOutcome")
        .def_property_readonly(
            "kind", [](const MatchOutcome& o) { return kind_name(o.kind); })
        .def_readonly("class_index", &MatchOutcome::class_index)
        .def_readonly("overlap", &MatchOutcome::overlap);

    py::class_<WeightMatrix>(m, "WeightMatrix")
        .def("__len__", &WeightMatrix::size)
        .def("row", [](const WeightMatrix& w, std::size_t i) {
            if (i >= w.size()) {
                throw py::index_error();
            }
            const auto r = w.row(i);
            return std::vector<double>(r.begin(), r.end());
        });

    m.def(
        "hebbian_train",
        [](const std::vector<std::vector<int>>& patterns) {
            std::vector<BipolarPattern> ps;
            ps.reserve(patterns.size());
            for (const auto& p : patterns) {
                ps.push_back(to_pattern(p));
            }
            return hebbian_train(ps);
        },
        py::arg("patterns"), "Hebbian weights from +/-1 patterns.");
    m.def(
        "energy",
        [](const WeightMatrix& w, const std::vector<int>& x) {
            return energy(w, to_pattern(x));
        },
        py::arg("weights"), py::arg("state"));
    m.def(
        "run_to_convergence",
        [](const WeightMatrix& w, const std::vector<int>& x0,
           std::size_t max_iterations) {
            DynamicsConfig cfg;
            cfg.max_iterations = max_iterations;
            return run_to_convergence(w, to_pattern(x0), cfg);
        },
        py::arg("weights"), py::arg("state"), py::arg("max_iterations") = 100);
    m.def(
        "match_state",
        [](const std::vector<int>& state,
           const std::vector<std::vector<int>>& stored) {
            std::vector<BipolarPattern> ps;
            ps.reserve(stored.size());
            for (const auto& p : stored) {
                ps.push_back(to_pattern(p));
            }
            return match_state(to_pattern(state), ps);
        },
        py::arg("state"), py::arg("stored"));

    py::class_<TrainedModel>(m, "TrainedModel")
        .def_readonly("class_labels", &TrainedModel::class_labels)
        .def_readwrite("band_filter", &TrainedModel::band_filter)
        .def_property_readonly(
            "n_neurons", [](const TrainedModel& t) { return t.weights.size(); })
        .def_property_readonly("stored_patterns", [](const TrainedModel& t) {
            std::vector<std::vector<int>> out;
            for (const auto& p : t.stored_patterns) {
                out.push_back(from_pattern(p));
            }
            return out;
        });

    m.def(
        "train",
        [](const std::vector<std::pair<std::string, Waveform>>& exemplars,
           const EncodingConfig& cfg, bool band_filter) {
            return train(exemplars, cfg, {}, band_filter);
        },
        py::arg("exemplars"), py::arg("config") = EncodingConfig{},
        py::arg("band_filter") = false,
        "Train from (label, waveform) exemplar pairs.");

    m.def("save_model", &save_model_file, py::arg("path"), py::arg("model"));
    m.def("load_model", &load_model_file, py::arg("path"));

    py::class_<ClassificationResult>(m, "ClassificationResult")
        .def_readonly("source_id", &ClassificationResult::source_id)
        .def_readonly("label", &ClassificationResult::label)
        .def_readonly("iterations", &ClassificationResult::iterations)
        .def_readonly("error", &ClassificationResult::error)
        .def_property_readonly(
            "match",
            [](const ClassificationResult& r) -> py::object {
                return r.match ? py::cast(*r.match) : py::none();
            })
        .def_property_readonly("trace", [](const ClassificationResult& r) -> py::object {
            return r.trace ? py::cast(*r.trace) : py::none();
        });

    m.def("classify", &classify, py::arg("model"), py::arg("waveform"),
          py::arg("want_trace") = false);
    m.def(
        "classify_files",
        [](const TrainedModel& model, const std::vector<std::filesystem::path>& paths,
           std::size_t workers) {
            std::vector<FragmentSource> sources;
            sources.reserve(paths.size());
            for (const auto& p : paths) {
                sources.push_back(
                    {p.generic_string(), [p] { return read_wav_file(p); }});
            }
            BatchResult batch;
            {
                py::gil_scoped_release release;
                batch = classify_batch(model, sources, workers);
            }
            return batch.results;
        },
        py::arg("model"), py::arg("paths"), py::arg("workers") = 0,
        "Deterministic parallel batch classification of WAV files.");

    m.def("results_to_csv", &results_to_csv, py::arg("results"));

    m.def("labels", [] {
        return std::map<std::string, std::string>{
            {"unid", std::string(kLabelUnid)},
            {"silence", std::string(kLabelSilence)},
            {"filtered", std::string(kLabelFiltered)},
            {"error", std::string(kLabelError)},
        };
    });
}
