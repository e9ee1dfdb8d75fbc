#include "echomem/model.hpp"

#include <array>
#include <cstring>
#include <fstream>

#include "echomem/error.hpp"

namespace echomem {
namespace {

std::array<std::uint32_t, 256> make_crc_table() {
    std::array<std::uint32_t, 256> table{};
    for (std::uint32_t i = 0; i < 256; ++i) {
        std::uint32_t c = i;
        for (int k = 0; k < 8; ++k) {
            c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
        }
        table[i] = c;
    }
    return table;
}

constexpr char kMagic[4] = {'E', 'M', 'H', 'N'};

struct Writer {
    std::vector<std::uint8_t> out;

    void u8(std::uint8_t v) { out.push_back(v); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) {
            out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
        }
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
        }
    }
    void f64(double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, 8);
        u64(bits);
    }
    void str(const std::string& s) {
        u64(s.size());
        out.insert(out.end(), s.begin(), s.end());
    }
};

struct Reader {
    std::span<const std::uint8_t> bytes;
    std::size_t pos = 0;

    void need(std::size_t n) {
        if (bytes.size() - pos < n) {
            throw FormatError("model file truncated");
        }
    }
    std::uint8_t u8() {
        need(1);
        return bytes[pos++];
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 3; i >= 0; --i) {
            v = (v << 8) | bytes[pos + static_cast<std::size_t>(i)];
        }
        pos += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 7; i >= 0; --i) {
            v = (v << 8) | bytes[pos + static_cast<std::size_t>(i)];
        }
        pos += 8;
        return v;
    }
    double f64() {
        const std::uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }
    std::string str() {
        const std::uint64_t len = u64();
        need(len);
        std::string s(reinterpret_cast<const char*>(bytes.data() + pos), len);
        pos += len;
        return s;
    }
};

}  // namespace

std::uint32_t crc32(std::span<const std::uint8_t> bytes) {
    static const auto table = make_crc_table();
    std::uint32_t c = 0xFFFFFFFFu;
    for (const std::uint8_t b : bytes) {
        c = table[(c ^ b) & 0xff] ^ (c >> 8);
    }
    return c ^ 0xFFFFFFFFu;
}

std::vector<std::uint8_t> save_model(const TrainedModel& model) {
    const std::size_t n = model.weights.size();
    const std::size_t p = model.stored_patterns.size();

    Writer w;
    w.out.insert(w.out.end(), kMagic, kMagic + 4);
    w.u32(model.format_version);
    w.u64(n);
    w.u64(p);

    w.f64(model.encoding.band_lo_hz);
    w.f64(model.encoding.band_hi_hz);
    w.u64(model.encoding.n_neurons);
    w.f64(model.encoding.activation_threshold);
    w.f64(model.encoding.silence_power_floor);
    w.u64(model.encoding.fft_length);

    w.u64(model.dynamics.max_iterations);
    w.u64(model.dynamics.bias.size());
    for (const double b : model.dynamics.bias) {
        w.f64(b);
    }

    w.u8(model.band_filter ? 1 : 0);

    for (const double e : model.band_map.edges()) {
        w.f64(e);
    }
    for (std::size_t k = 0; k < p; ++k) {
        w.str(model.class_labels[k]);
    }
    for (const auto& pattern : model.stored_patterns) {
        for (std::size_t i = 0; i < pattern.size(); ++i) {
            w.u8(static_cast<std::uint8_t>(pattern[i]));
        }
    }
    for (const double v : model.weights.data()) {
        w.f64(v);
    }

    w.u32(crc32(w.out));
    return w.out;
}

TrainedModel load_model(std::span<const std::uint8_t> bytes) {
    Reader r{bytes};
    r.need(4);
    if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
        throw FormatError("not a model file (bad magic)");
    }
    r.pos = 4;
    const std::uint32_t version = r.u32();
    if (version != kModelFormatVersion) {
        throw FormatError("unsupported model format version " +
                          std::to_string(version));
    }

    const std::uint64_t n = r.u64();
    const std::uint64_t p = r.u64();
    if (n < 2 || n > (1u << 20) || p < 1 || p > n) {
        throw FormatError("corrupt model structure (sizes)");
    }

    EncodingConfig enc;
    enc.band_lo_hz = r.f64();
    enc.band_hi_hz = r.f64();
    enc.n_neurons = r.u64();
    enc.activation_threshold = r.f64();
    enc.silence_power_floor = r.f64();
    enc.fft_length = r.u64();
    if (enc.n_neurons != n) {
        throw FormatError("corrupt model structure (neuron count)");
    }

    DynamicsConfig dyn;
    dyn.max_iterations = r.u64();
    const std::uint64_t bias_len = r.u64();
    if (bias_len != 0 && bias_len != n) {
        throw FormatError("corrupt model structure (bias length)");
    }
    dyn.bias.resize(bias_len);
    for (auto& b : dyn.bias) {
        b = r.f64();
    }

    const bool band_filter = r.u8() != 0;

    std::vector<double> edges(n + 1);
    for (auto& e : edges) {
        e = r.f64();
    }
    std::vector<std::string> labels(p);
    for (auto& label : labels) {
        label = r.str();
    }
    std::vector<std::vector<Spin>> raw_patterns(p, std::vector<Spin>(n));
    for (auto& pattern : raw_patterns) {
        for (auto& v : pattern) {
            v = static_cast<Spin>(r.u8());
        }
    }
    std::vector<double> weights(n * n);
    for (auto& v : weights) {
        v = r.f64();
    }

    if (bytes.size() - r.pos != 4) {
        throw FormatError("corrupt model structure (trailing data)");
    }
    const std::uint32_t want = r.u32();
    if (crc32(bytes.subspan(0, bytes.size() - 4)) != want) {
        throw FormatError("model file checksum mismatch");
    }

    // Content is authentic past this point; semantic validation happens in
    // the type constructors.
    FrequencyBandMap map(edges.front(), edges.back(), n);
    if (map.edges() != edges) {
        throw FormatError("corrupt model structure (band edges)");
    }
    std::vector<BipolarPattern> patterns;
    patterns.reserve(p);
    for (auto& raw : raw_patterns) {
        patterns.emplace_back(std::move(raw));
    }
    return TrainedModel{WeightMatrix(n, std::move(weights)),
                        std::move(patterns),
                        std::move(labels),
                        std::move(map),
                        enc,
                        std::move(dyn),
                        band_filter,
                        version};
}

void save_model_file(const std::filesystem::path& path, const TrainedModel& model) {
    const auto bytes = save_model(model);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw IoError("write failure on " + path.string());
    }
}

TrainedModel load_model_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw IoError("read failure on " + path.string());
    }
    return load_model(bytes);
}

}  // namespace echomem
