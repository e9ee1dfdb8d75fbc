#pragma once

// Synthetic bat-call stand-ins: pure tones, enveloped chirps with additive
// noise, and near-silent fragments. Everything is seeded explicitly so test
// corpora are reproducible.

#include <cstdint>
#include <vector>

#include "echomem/wav.hpp"

namespace synth {

inline constexpr double kSampleRate = 256000.0;

// amp * sin(2*pi*f*n/rate)
echomem::Waveform tone(double freq_hz, double amp, std::size_t length,
                       double rate = kSampleRate);

// Linear chirp sweeping center-span/2 .. center+span/2 under a Hann envelope,
// plus white Gaussian noise at the given SNR (dB, relative to chirp power).
echomem::Waveform chirp(double center_hz, double span_hz, double amp, double snr_db,
                        std::uint64_t seed, std::size_t length,
                        double rate = kSampleRate);

// Low-level noise floor, amplitude `amp` (default quiet enough to trip the
// silence gate with the stock config).
echomem::Waveform near_silence(std::uint64_t seed, std::size_t length,
                               double amp = 1e-4, double rate = kSampleRate);

}  // namespace synth
