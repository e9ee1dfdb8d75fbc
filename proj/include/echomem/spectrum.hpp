#pragma once

// Spectral analysis of echolocation fragments: windowed power spectrum,
// dominant-frequency extraction, peak picking, and the silence / mains-probe
// gates that run ahead of encoding.

#include <cstddef>
#include <vector>

#include "echomem/wav.hpp"

namespace echomem {

struct EncodingConfig {
    double band_lo_hz = 35000.0;        // analysed band, inclusive
    double band_hi_hz = 75000.0;
    std::size_t n_neurons = 64;          // equal-width frequency bands
    double activation_threshold = 0.5;         // fraction of in-band maximum
    double silence_power_floor = 1e-6;   // max in-band power below this = silence
    std::size_t fft_length = 0;          // 0 = auto: next pow2 >= length, capped at 4096
};

struct PowerSpectrum {
    std::vector<double> power;      // one-sided, |X_k|^2 / L^2, L = windowed length
    std::vector<double> bin_freqs;  // Hz, same length as power
    double f_max_e = 0.0;           // frequency of the globally strongest bin
    std::vector<double> peak_freqs; // in-band local maxima above threshold
};

// Windows the fragment with a raised cosine (Hann, w_n = 0.5*(1-cos(2*pi*n/L)))
// and runs a radix-2 FFT. Fragments shorter than fft_length are zero padded;
// longer ones are analysed over their centre fft_length samples. Peaks are
// strict local maxima of in-band power at or above activation_threshold times the
// in-band maximum; a plateau counts once, at its lowest bin.
PowerSpectrum compute_spectrum(const Waveform& w, const EncodingConfig& cfg);

// Peak picking on an arbitrary power array: strict local maxima among bins
// whose frequency lies in [lo_hz, hi_hz], at or above threshold times the
// in-band maximum, zero power excluded. Out-of-band neighbours still take
// part in the local-maximum comparison. Returns bin frequencies, ascending.
std::vector<double> find_peaks(const std::vector<double>& power,
                               const std::vector<double>& bin_freqs, double lo_hz,
                               double hi_hz, double threshold);

// True when the maximum in-band power is below cfg.silence_power_floor.
bool is_silence(const PowerSpectrum& s, const EncodingConfig& cfg);

// True when the dominant frequency falls in the 49-51 kHz probe band
// (inclusive), which the recording rig is known to pollute.
bool band_reject_49_51(const PowerSpectrum& s);

}  // namespace echomem
