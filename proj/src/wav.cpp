#include "echomem/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "echomem/error.hpp"

namespace echomem {
namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

struct Cursor {
    std::span<const std::uint8_t> bytes;
    std::size_t pos = 0;

    std::size_t remaining() const { return bytes.size() - pos; }

    void need(std::size_t n, const char* what) {
        if (remaining() < n) {
            throw FormatError(std::string("malformed WAV: truncated ") + what);
        }
    }

    std::uint16_t u16(const char* what) {
        need(2, what);
        const std::uint16_t v =
            static_cast<std::uint16_t>(bytes[pos] | (bytes[pos + 1] << 8));
        pos += 2;
        return v;
    }

    std::uint32_t u32(const char* what) {
        need(4, what);
        std::uint32_t v = 0;
        for (int i = 3; i >= 0; --i) {
            v = (v << 8) | bytes[pos + static_cast<std::size_t>(i)];
        }
        pos += 4;
        return v;
    }

    std::string tag(const char* what) {
        need(4, what);
        std::string t(reinterpret_cast<const char*>(bytes.data() + pos), 4);
        pos += 4;
        return t;
    }
};

struct Format {
    std::uint16_t codec = 0;
    std::uint16_t channels = 0;
    std::uint32_t sample_rate = 0;
    std::uint16_t bits = 0;
};

Format parse_fmt(Cursor c, std::uint32_t chunk_size) {
    if (chunk_size < 16) {
        throw FormatError("malformed WAV: fmt chunk too small");
    }
    Format f;
    f.codec = c.u16("fmt chunk");
    f.channels = c.u16("fmt chunk");
    f.sample_rate = c.u32("fmt chunk");
    c.u32("fmt chunk");  // byte rate
    c.u16("fmt chunk");  // block align
    f.bits = c.u16("fmt chunk");
    if (f.codec == kFormatExtensible) {
        if (chunk_size < 40) {
            throw FormatError("malformed WAV: extensible fmt chunk too small");
        }
        c.u16("fmt chunk");  // cbSize
        c.u16("fmt chunk");  // valid bits
        c.u32("fmt chunk");  // channel mask
        f.codec = c.u16("fmt chunk");  // first two GUID bytes carry the codec
    }
    return f;
}

double decode_sample(const std::uint8_t* p, std::uint16_t codec, std::uint16_t bits) {
    if (codec == kFormatFloat) {
        float v;
        std::memcpy(&v, p, 4);
        return std::clamp(static_cast<double>(v), -1.0, 1.0);
    }
    switch (bits) {
        case 8:
            return (static_cast<double>(*p) - 128.0) / 128.0;
        case 16: {
            const auto v = static_cast<std::int16_t>(p[0] | (p[1] << 8));
            return static_cast<double>(v) / 32768.0;
        }
        case 24: {
            std::int32_t v = p[0] | (p[1] << 8) | (p[2] << 16);
            if (v & 0x800000) {
                v -= 0x1000000;
            }
            return static_cast<double>(v) / 8388608.0;
        }
        default: {  // 32
            std::uint32_t u = 0;
            for (int i = 3; i >= 0; --i) {
                u = (u << 8) | p[i];
            }
            return static_cast<double>(static_cast<std::int32_t>(u)) / 2147483648.0;
        }
    }
}

}  // namespace

Waveform read_wav(std::span<const std::uint8_t> bytes) {
    Cursor c{bytes};
    if (c.tag("header") != "RIFF") {
        throw FormatError("malformed WAV: missing RIFF magic");
    }
    c.u32("header");  // declared riff size; trust the buffer instead
    if (c.tag("header") != "WAVE") {
        throw FormatError("malformed WAV: missing WAVE tag");
    }

    bool have_fmt = false;
    Format fmt;
    std::span<const std::uint8_t> data;
    bool have_data = false;

    while (c.remaining() >= 8) {
        const std::string id = c.tag("chunk header");
        const std::uint32_t size = c.u32("chunk header");
        c.need(size, "chunk body");
        if (id == "fmt ") {
            fmt = parse_fmt(c, size);
            have_fmt = true;
        } else if (id == "data") {
            data = bytes.subspan(c.pos, size);
            have_data = true;
        }
        c.pos += size;
        if ((size & 1) && c.remaining() > 0) {
            ++c.pos;  // chunks are word aligned
        }
    }

    if (!have_fmt) {
        throw FormatError("malformed WAV: no fmt chunk");
    }
    if (!have_data) {
        throw FormatError("malformed WAV: no data chunk");
    }
    if (fmt.channels == 0) {
        throw FormatError("malformed WAV: zero channels");
    }
    if (fmt.sample_rate == 0) {
        throw FormatError("malformed WAV: zero sample rate");
    }

    const bool int_ok = fmt.codec == kFormatPcm &&
                        (fmt.bits == 8 || fmt.bits == 16 || fmt.bits == 24 ||
                         fmt.bits == 32);
    const bool float_ok = fmt.codec == kFormatFloat && fmt.bits == 32;
    if (!int_ok && !float_ok) {
        throw FormatError("unsupported WAV encoding: codec " +
                          std::to_string(fmt.codec) + ", " +
                          std::to_string(fmt.bits) + " bits");
    }

    const std::size_t bytes_per_sample = fmt.bits / 8u;
    const std::size_t frame_size = bytes_per_sample * fmt.channels;
    const std::size_t frames = data.size() / frame_size;
    if (frames == 0) {
        throw FormatError("malformed WAV: no audio samples");
    }

    Waveform w;
    w.sample_rate = static_cast<double>(fmt.sample_rate);
    w.samples.resize(frames);
    for (std::size_t i = 0; i < frames; ++i) {
        double acc = 0.0;
        const std::uint8_t* frame = data.data() + i * frame_size;
        for (std::uint16_t ch = 0; ch < fmt.channels; ++ch) {
            acc += decode_sample(frame + ch * bytes_per_sample, fmt.codec, fmt.bits);
        }
        w.samples[i] = acc / fmt.channels;
    }
    return w;
}

Waveform read_wav_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw IoError("read failure on " + path.string());
    }
    Waveform w = read_wav(bytes);
    w.source_id = path.string();
    return w;
}

void write_wav_pcm16(const std::filesystem::path& path,
                     const std::vector<double>& samples, double sample_rate) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }

    const auto put_u16 = [&](std::uint16_t v) {
        const char b[2] = {static_cast<char>(v & 0xff), static_cast<char>(v >> 8)};
        out.write(b, 2);
    };
    const auto put_u32 = [&](std::uint32_t v) {
        char b[4];
        for (int i = 0; i < 4; ++i) {
            b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
        }
        out.write(b, 4);
    };

    const auto data_size = static_cast<std::uint32_t>(samples.size() * 2);
    const auto rate = static_cast<std::uint32_t>(std::lround(sample_rate));
    out.write("RIFF", 4);
    put_u32(36 + data_size);
    out.write("WAVE", 4);
    out.write("fmt ", 4);
    put_u32(16);
    put_u16(kFormatPcm);
    put_u16(1);
    put_u32(rate);
    put_u32(rate * 2);
    put_u16(2);
    put_u16(16);
    out.write("data", 4);
    put_u32(data_size);
    for (const double s : samples) {
        const long v = std::lround(s * 32768.0);
        put_u16(static_cast<std::uint16_t>(
            static_cast<std::int16_t>(std::clamp(v, -32768L, 32767L))));
    }
    if (!out) {
        throw IoError("write failure on " + path.string());
    }
}

}  // namespace echomem
