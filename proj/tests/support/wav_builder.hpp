#pragma once

// Hand-rolled RIFF/WAVE byte construction for reader tests. Kept separate
// from the library writer so the reader is checked against independently
// built buffers.

#include <cstdint>
#include <vector>

namespace testutil {

inline void push_u16(std::vector<std::uint8_t>& b, std::uint16_t v) {
    b.push_back(static_cast<std::uint8_t>(v & 0xff));
    b.push_back(static_cast<std::uint8_t>(v >> 8));
}

inline void push_u32(std::vector<std::uint8_t>& b, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        b.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
    }
}

inline void push_tag(std::vector<std::uint8_t>& b, const char tag[5]) {
    for (int i = 0; i < 4; ++i) {
        b.push_back(static_cast<std::uint8_t>(tag[i]));
    }
}

struct WavSpec {
    std::uint16_t format = 1;  // 1 = PCM, 3 = IEEE float, 0xFFFE = extensible
    std::uint16_t channels = 1;
    std::uint32_t sample_rate = 48000;
    std::uint16_t bits = 16;
    std::uint16_t sub_format = 1;  // extensible only
};

inline std::vector<std::uint8_t> build_wav(const WavSpec& spec,
                                           const std::vector<std::uint8_t>& data) {
    const bool extensible = spec.format == 0xFFFE;
    const std::uint32_t fmt_size = extensible ? 40 : 16;
    std::vector<std::uint8_t> b;
    push_tag(b, "RIFF");
    push_u32(b, 4 + 8 + fmt_size + 8 + static_cast<std::uint32_t>(data.size()));
    push_tag(b, "WAVE");

    push_tag(b, "fmt ");
    push_u32(b, fmt_size);
    push_u16(b, spec.format);
    push_u16(b, spec.channels);
    push_u32(b, spec.sample_rate);
    const std::uint32_t block_align = spec.channels * (spec.bits / 8);
    push_u32(b, spec.sample_rate * block_align);
    push_u16(b, static_cast<std::uint16_t>(block_align));
    push_u16(b, spec.bits);
    if (extensible) {
        push_u16(b, 22);              // cbSize
        push_u16(b, spec.bits);       // valid bits
        push_u32(b, 0);               // channel mask
        push_u16(b, spec.sub_format);
        // rest of the KSDATAFORMAT GUID
        const std::uint8_t guid_tail[14] = {0x00, 0x00, 0x00, 0x00, 0x10, 0x00, 0x80,
                                            0x00, 0x00, 0xAA, 0x00, 0x38, 0x9B, 0x71};
        b.insert(b.end(), guid_tail, guid_tail + 14);
    }

    push_tag(b, "data");
    push_u32(b, static_cast<std::uint32_t>(data.size()));
    b.insert(b.end(), data.begin(), data.end());
    return b;
}

inline std::vector<std::uint8_t> pcm16_bytes(const std::vector<std::int16_t>& samples) {
    std::vector<std::uint8_t> data;
    for (const std::int16_t s : samples) {
        push_u16(data, static_cast<std::uint16_t>(s));
    }
    return data;
}

}  // namespace testutil
