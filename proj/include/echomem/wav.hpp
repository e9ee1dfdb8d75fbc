#pragma once

// Minimal RIFF/WAVE reader and PCM16 writer. Multi-channel input is averaged
// down to mono; integer samples are normalised into [-1, 1].

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace echomem {

struct Waveform {
    std::vector<double> samples;  // mono, normalised to [-1, 1]
    double sample_rate = 0.0;     // Hz
    std::string source_id;        // opaque fragment identifier, may be empty
};

// Parses a complete RIFF/WAVE byte buffer. Supported codecs: PCM 8/16/24/32
// bit integers and IEEE float32, plus WAVE_FORMAT_EXTENSIBLE wrapping either.
// Throws FormatError for malformed or unsupported input.
Waveform read_wav(std::span<const std::uint8_t> bytes);

// Reads the file into memory and parses it. Throws IoError when the file
// cannot be read.
Waveform read_wav_file(const std::filesystem::path& path);

// Writes a mono 16-bit PCM file; samples are scaled by 32768 and clamped to
// the int16 range, so a read-back differs by at most one LSB. Throws IoError
// on write failure.
void write_wav_pcm16(const std::filesystem::path& path,
                     const std::vector<double>& samples, double sample_rate);

}  // namespace echomem
