#include "echomem/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "echomem/error.hpp"

namespace echomem {
namespace {

constexpr std::size_t kFftCap = 4096;
constexpr std::size_t kFftMin = 64;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) {
        p <<= 1;
    }
    return p;
}

// Iterative in-place radix-2 Cooley-Tukey; a.size() must be a power of two.
void fft_inplace(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) {
            j ^= bit;
        }
        j |= bit;
        if (i < j) {
            std::swap(a[i], a[j]);
        }
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wlen = std::polar(1.0, ang);
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w{1.0, 0.0};
            for (std::size_t j = 0; j < len / 2; ++j) {
                const std::complex<double> u = a[i + j];
                const std::complex<double> v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

void validate(const Waveform& w, const EncodingConfig& cfg) {
    if (w.samples.size() < 2) {
        throw InvalidArgument("fragment too short: need at least 2 samples");
    }
    if (!(w.sample_rate > 0.0)) {
        throw InvalidArgument("sample rate must be positive");
    }
    if (!(cfg.band_lo_hz > 0.0) || !(cfg.band_lo_hz < cfg.band_hi_hz)) {
        throw InvalidArgument("analysis band must satisfy 0 < lo < hi");
    }
    if (cfg.band_hi_hz > w.sample_rate / 2.0) {
        throw InvalidArgument("analysis band extends past the Nyquist frequency");
    }
    if (cfg.n_neurons < 2) {
        throw InvalidArgument("need at least 2 neurons");
    }
    if (!(cfg.activation_threshold > 0.0) || cfg.activation_threshold > 1.0) {
        throw InvalidArgument("peak threshold must lie in (0, 1]");
    }
    if (cfg.silence_power_floor < 0.0) {
        throw InvalidArgument("silence power floor must be nonnegative");
    }
    if (cfg.fft_length != 0 &&
        (!is_pow2(cfg.fft_length) || cfg.fft_length < kFftMin)) {
        throw InvalidArgument("fft_length must be a power of two, at least 64");
    }
}

}  // namespace

std::vector<double> find_peaks(const std::vector<double>& power,
                               const std::vector<double>& bin_freqs, double lo_hz,
                               double hi_hz, double threshold) {
    const std::size_t n = power.size();
    std::size_t first = n;
    std::size_t last = n;
    for (std::size_t k = 0; k < n; ++k) {
        if (bin_freqs[k] >= lo_hz && bin_freqs[k] <= hi_hz) {
            if (first == n) {
                first = k;
            }
            last = k;
        }
    }
    if (first == n) {
        return {};
    }

    double in_band_max = 0.0;
    for (std::size_t k = first; k <= last; ++k) {
        in_band_max = std::max(in_band_max, power[k]);
    }
    const double cutoff = threshold * in_band_max;

    std::vector<double> peaks;
    std::size_t k = first;
    while (k <= last) {
        const double v = power[k];
        std::size_t end = k;  // plateau [k, end]
        while (end + 1 < n && power[end + 1] == v) {
            ++end;
        }
        const bool rises = k == 0 || power[k - 1] < v;
        const bool falls = end + 1 >= n || power[end + 1] < v;
        if (v > 0.0 && v >= cutoff && rises && falls) {
            peaks.push_back(bin_freqs[k]);
        }
        k = end + 1;
    }
    return peaks;
}

PowerSpectrum compute_spectrum(const Waveform& w, const EncodingConfig& cfg) {
    validate(w, cfg);

    const std::size_t len = w.samples.size();
    std::size_t fft_len = cfg.fft_length;
    if (fft_len == 0) {
        fft_len = std::clamp(next_pow2(len), kFftMin, kFftCap);
    }

    // Analyse the centre of fragments longer than the FFT.
    const std::size_t seg_len = std::min(len, fft_len);
    const std::size_t start = (len - seg_len) / 2;

    std::vector<std::complex<double>> buf(fft_len, {0.0, 0.0});
    for (std::size_t n = 0; n < seg_len; ++n) {
        const double hann =
            0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(n) /
                                  static_cast<double>(seg_len)));
        buf[n] = {w.samples[start + n] * hann, 0.0};
    }
    fft_inplace(buf);

    PowerSpectrum s;
    const std::size_t bins = fft_len / 2 + 1;
    const double norm = static_cast<double>(seg_len) * static_cast<double>(seg_len);
    s.power.resize(bins);
    s.bin_freqs.resize(bins);
    for (std::size_t k = 0; k < bins; ++k) {
        s.power[k] = std::norm(buf[k]) / norm;
        s.bin_freqs[k] =
            static_cast<double>(k) * w.sample_rate / static_cast<double>(fft_len);
    }

    const auto max_it = std::max_element(s.power.begin(), s.power.end());
    s.f_max_e = s.bin_freqs[static_cast<std::size_t>(max_it - s.power.begin())];
    s.peak_freqs =
        find_peaks(s.power, s.bin_freqs, cfg.band_lo_hz, cfg.band_hi_hz,
                   cfg.activation_threshold);
    return s;
}

bool is_silence(const PowerSpectrum& s, const EncodingConfig& cfg) {
    double in_band_max = 0.0;
    for (std::size_t k = 0; k < s.power.size(); ++k) {
        if (s.bin_freqs[k] >= cfg.band_lo_hz && s.bin_freqs[k] <= cfg.band_hi_hz) {
            in_band_max = std::max(in_band_max, s.power[k]);
        }
    }
    return in_band_max < cfg.silence_power_floor;
}

bool band_reject_49_51(const PowerSpectrum& s) {
    return s.f_max_e >= 49000.0 && s.f_max_e <= 51000.0;
}

}  // namespace echomem
