#include "echomem/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <doctest.h>

#include "echomem/error.hpp"
#include "synth.hpp"

using echomem::EncodingConfig;
using echomem::InvalidArgument;
using echomem::PowerSpectrum;
using echomem::Waveform;
using echomem::band_reject_49_51;
using echomem::compute_spectrum;
using echomem::find_peaks;
using echomem::is_silence;

namespace {

// Direct windowed DFT, same definition as the library but summed literally.
double oracle_power(const std::vector<double>& s, std::size_t fft_len, std::size_t k) {
    const std::size_t L = s.size();
    double re = 0.0;
    double im = 0.0;
    for (std::size_t n = 0; n < L; ++n) {
        const double w =
            0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * double(n) / double(L)));
        const double ang =
            -2.0 * std::numbers::pi * double(k) * double(n) / double(fft_len);
        re += w * s[n] * std::cos(ang);
        im += w * s[n] * std::sin(ang);
    }
    return (re * re + im * im) / (double(L) * double(L));
}

Waveform two_tone_1024() {
    auto w = synth::tone(46000.0, 1.0, 1024);
    const auto second = synth::tone(55000.0, 0.8, 1024);
    for (std::size_t n = 0; n < w.samples.size(); ++n) {
        w.samples[n] += second.samples[n];
    }
    return w;
}

}  // namespace

TEST_CASE("on-bin tone lands its energy in the expected bin") {
    // 46 kHz at 256 kHz with a 1024-point FFT is exactly bin 184 (250 Hz bins).
    const auto w = synth::tone(46000.0, 1.0, 1024);
    const auto s = compute_spectrum(w, EncodingConfig{});

    REQUIRE(s.power.size() == 513);  // one-sided incl. DC and Nyquist
    REQUIRE(s.bin_freqs.size() == 513);
    CHECK(s.bin_freqs[184] == doctest::Approx(46000.0));
    CHECK(s.f_max_e == doctest::Approx(46000.0));
    // Hann-windowed on-bin sinusoid: |X| = 0.25 * L * amp.
    CHECK(s.power[184] == doctest::Approx(0.0625).epsilon(1e-9));
    REQUIRE(s.peak_freqs.size() == 1);
    CHECK(s.peak_freqs[0] == doctest::Approx(46000.0));
}

TEST_CASE("FFT agrees with a direct DFT on a two-tone fragment") {
    const auto w = two_tone_1024();
    const auto s = compute_spectrum(w, EncodingConfig{});

    for (const std::size_t k : {184u, 220u, 100u, 300u}) {
        const double want = oracle_power(w.samples, 1024, k);
        CHECK(s.power[k] == doctest::Approx(want).epsilon(1e-9));
    }
    CHECK(s.f_max_e == doctest::Approx(46000.0));

    REQUIRE(s.peak_freqs.size() == 2);
    CHECK(s.peak_freqs[0] == doctest::Approx(46000.0));
    CHECK(s.peak_freqs[1] == doctest::Approx(55000.0));
}

TEST_CASE("fragments shorter than the FFT are zero padded, not rejected") {
    auto w = synth::tone(46000.0, 1.0, 600);
    const auto s = compute_spectrum(w, EncodingConfig{});
    REQUIRE(s.power.size() == 513);  // auto length: next pow2(600) = 1024
    CHECK(std::abs(s.f_max_e - 46000.0) <= 250.0);

    const double want = oracle_power(w.samples, 1024, 184);
    CHECK(s.power[184] == doctest::Approx(want).epsilon(1e-9));
}

TEST_CASE("auto FFT length is the next power of two, capped at 4096") {
    EncodingConfig cfg;
    CHECK(compute_spectrum(synth::tone(46000.0, 0.5, 40), cfg).power.size() == 33);
    CHECK(compute_spectrum(synth::tone(46000.0, 0.5, 1000), cfg).power.size() == 513);
    CHECK(compute_spectrum(synth::tone(46000.0, 0.5, 4096), cfg).power.size() == 2049);
    CHECK(compute_spectrum(synth::tone(46000.0, 0.5, 9000), cfg).power.size() == 2049);
}

TEST_CASE("long fragments are analysed over their centre window") {
    // Tone only in the middle third of a 3*4096 fragment: the centre 4096
    // samples are exactly the tone, so it must dominate the spectrum.
    Waveform w;
    w.sample_rate = synth::kSampleRate;
    w.samples.assign(12288, 0.0);
    const auto mid = synth::tone(46000.0, 0.8, 4096);
    std::copy(mid.samples.begin(), mid.samples.end(), w.samples.begin() + 4096);

    const auto s = compute_spectrum(w, EncodingConfig{});
    CHECK(std::abs(s.f_max_e - 46000.0) <= synth::kSampleRate / 4096.0);
    CHECK_FALSE(is_silence(s, EncodingConfig{}));
}

TEST_CASE("an explicit FFT length overrides the automatic choice") {
    EncodingConfig cfg;
    cfg.fft_length = 128;
    const auto s = compute_spectrum(synth::tone(46000.0, 0.5, 1024), cfg);
    CHECK(s.power.size() == 65);
}

TEST_CASE("all-zero input has an empty peak list and trips the silence gate") {
    Waveform w;
    w.sample_rate = synth::kSampleRate;
    w.samples.assign(1024, 0.0);
    const auto s = compute_spectrum(w, EncodingConfig{});
    CHECK(s.peak_freqs.empty());
    for (const double p : s.power) {
        CHECK(p == 0.0);
    }
    CHECK(is_silence(s, EncodingConfig{}));
}

TEST_CASE("tone leakage stays within two bins of the tone") {
    std::mt19937_64 rng(404);
    std::uniform_real_distribution<double> freq(0.1 * synth::kSampleRate,
                                                0.4 * synth::kSampleRate);
    EncodingConfig cfg;
    for (int trial = 0; trial < 20; ++trial) {
        const double f = freq(rng);
        const auto s = compute_spectrum(synth::tone(f, 0.7, 1024), cfg);
        const double bin_width = synth::kSampleRate / 1024.0;
        double total = 0.0;
        double near = 0.0;
        for (std::size_t k = 0; k < s.power.size(); ++k) {
            total += s.power[k];
            if (std::abs(s.bin_freqs[k] - f) <= 2.0 * bin_width) {
                near += s.power[k];
            }
        }
        REQUIRE(total > 0.0);
        CHECK(near / total >= 0.9);
        CHECK(std::abs(s.f_max_e - f) <= bin_width);
    }
}

TEST_CASE("raising the peak threshold only removes peaks") {
    std::mt19937_64 rng(906);
    for (int trial = 0; trial < 10; ++trial) {
        auto w = synth::chirp(55000.0, 8000.0, 0.6, 10.0, rng(), 1024);
        EncodingConfig lo_cfg;
        lo_cfg.activation_threshold = 0.3;
        EncodingConfig hi_cfg;
        hi_cfg.activation_threshold = 0.7;
        const auto lo = compute_spectrum(w, lo_cfg).peak_freqs;
        const auto hi = compute_spectrum(w, hi_cfg).peak_freqs;
        for (const double f : hi) {
            CHECK(std::find(lo.begin(), lo.end(), f) != lo.end());
        }
        CHECK(hi.size() <= lo.size());
    }
}

TEST_CASE("spectrum computation is deterministic") {
    const auto w = synth::chirp(46000.0, 4000.0, 0.5, 20.0, 11, 2048);
    const auto a = compute_spectrum(w, EncodingConfig{});
    const auto b = compute_spectrum(w, EncodingConfig{});
    CHECK(a.power == b.power);
    CHECK(a.peak_freqs == b.peak_freqs);
    CHECK(a.f_max_e == b.f_max_e);
}

TEST_CASE("peak picking handles plateaus and band edges") {
    // Unit-spaced synthetic bins; band [0, 8] covers everything.
    const std::vector<double> freqs = {0, 1, 2, 3, 4, 5, 6, 7, 8};

    SUBCASE("plateau reports once, at its lowest bin") {
        const std::vector<double> power = {0, 1, 3, 3, 1, 0, 2, 5, 2};
        const auto peaks = find_peaks(power, freqs, 0.0, 8.0, 0.5);
        REQUIRE(peaks.size() == 2);
        CHECK(peaks[0] == doctest::Approx(2.0));
        CHECK(peaks[1] == doctest::Approx(7.0));
    }
    SUBCASE("edge bin with a single smaller neighbour is a peak") {
        const std::vector<double> power = {5, 1, 0, 0, 0, 0, 0, 0, 0};
        const auto peaks = find_peaks(power, freqs, 0.0, 8.0, 0.5);
        REQUIRE(peaks.size() == 1);
        CHECK(peaks[0] == doctest::Approx(0.0));
    }
    SUBCASE("edge plateau counts once") {
        const std::vector<double> power = {3, 3, 1, 0, 0, 0, 0, 0, 0};
        const auto peaks = find_peaks(power, freqs, 0.0, 8.0, 0.5);
        REQUIRE(peaks.size() == 1);
        CHECK(peaks[0] == doctest::Approx(0.0));
    }
    SUBCASE("below-threshold maxima are dropped") {
        const std::vector<double> power = {0, 1, 0, 0, 9, 0, 0, 1, 0};
        const auto peaks = find_peaks(power, freqs, 0.0, 8.0, 0.5);
        REQUIRE(peaks.size() == 1);
        CHECK(peaks[0] == doctest::Approx(4.0));
    }
    SUBCASE("an out-of-band neighbour can veto an in-band edge bin") {
        // band restricted to [1, 8]: bin 1 sits next to a larger bin 0
        const std::vector<double> power = {9, 4, 1, 0, 0, 0, 0, 0, 0};
        const auto peaks = find_peaks(power, freqs, 1.0, 8.0, 0.1);
        CHECK(peaks.empty());
    }
    SUBCASE("zero power is never a peak") {
        const std::vector<double> power(9, 0.0);
        CHECK(find_peaks(power, freqs, 0.0, 8.0, 0.5).empty());
    }
}

TEST_CASE("silence gate compares in-band power against the floor") {
    EncodingConfig cfg;

    SUBCASE("near-silent noise is silence") {
        const auto s = compute_spectrum(synth::near_silence(5, 1024), cfg);
        CHECK(is_silence(s, cfg));
    }
    SUBCASE("a clear in-band tone is not") {
        const auto s = compute_spectrum(synth::tone(46000.0, 0.5, 1024), cfg);
        CHECK_FALSE(is_silence(s, cfg));
    }
    SUBCASE("a loud out-of-band tone is still silence") {
        // 10 kHz is far below the 35 kHz band edge
        const auto s = compute_spectrum(synth::tone(10000.0, 0.9, 1024), cfg);
        CHECK(is_silence(s, cfg));
    }
    SUBCASE("the floor is configurable") {
        const auto s = compute_spectrum(synth::tone(46000.0, 0.5, 1024), cfg);
        EncodingConfig strict = cfg;
        strict.silence_power_floor = 1.0;
        CHECK(is_silence(s, strict));
    }
}

TEST_CASE("49-51 kHz probe rejection is inclusive at both edges") {
    PowerSpectrum s;
    s.f_max_e = 49000.0;
    CHECK(band_reject_49_51(s));
    s.f_max_e = 51000.0;
    CHECK(band_reject_49_51(s));
    s.f_max_e = 50000.0;
    CHECK(band_reject_49_51(s));
    s.f_max_e = 48999.0;
    CHECK_FALSE(band_reject_49_51(s));
    s.f_max_e = 51001.0;
    CHECK_FALSE(band_reject_49_51(s));
}

TEST_CASE("a 50 kHz dominant tone is flagged by the probe gate end to end") {
    const auto probed = compute_spectrum(synth::tone(50000.0, 0.7, 1024), EncodingConfig{});
    CHECK(band_reject_49_51(probed));
    const auto clean = compute_spectrum(synth::tone(46000.0, 0.7, 1024), EncodingConfig{});
    CHECK_FALSE(band_reject_49_51(clean));
}

TEST_CASE("waveform and config validation") {
    const auto good = synth::tone(46000.0, 0.5, 1024);

    SUBCASE("empty or single-sample fragments") {
        Waveform w;
        w.sample_rate = synth::kSampleRate;
        w.samples = {0.5};
        CHECK_THROWS_AS(compute_spectrum(w, EncodingConfig{}), InvalidArgument);
    }
    SUBCASE("nonpositive sample rate") {
        Waveform w = good;
        w.sample_rate = 0.0;
        CHECK_THROWS_AS(compute_spectrum(w, EncodingConfig{}), InvalidArgument);
    }
    SUBCASE("band above Nyquist") {
        Waveform w = good;
        w.sample_rate = 96000.0;  // Nyquist 48 kHz < 75 kHz band edge
        CHECK_THROWS_WITH_AS(compute_spectrum(w, EncodingConfig{}),
                             doctest::Contains("Nyquist"), InvalidArgument);
    }
    SUBCASE("inverted band") {
        EncodingConfig cfg;
        cfg.band_lo_hz = 75000.0;
        cfg.band_hi_hz = 35000.0;
        CHECK_THROWS_AS(compute_spectrum(good, cfg), InvalidArgument);
    }
    SUBCASE("nonpositive band_lo") {
        EncodingConfig cfg;
        cfg.band_lo_hz = 0.0;
        CHECK_THROWS_AS(compute_spectrum(good, cfg), InvalidArgument);
    }
    SUBCASE("threshold outside (0, 1]") {
        EncodingConfig cfg;
        cfg.activation_threshold = 0.0;
        CHECK_THROWS_AS(compute_spectrum(good, cfg), InvalidArgument);
        cfg.activation_threshold = 1.5;
        CHECK_THROWS_AS(compute_spectrum(good, cfg), InvalidArgument);
        cfg.activation_threshold = 1.0;
        CHECK_NOTHROW(compute_spectrum(good, cfg));
    }
    SUBCASE("too few neurons") {
        EncodingConfig cfg;
        cfg.n_neurons = 1;
        CHECK_THROWS_AS(compute_spectrum(good, cfg), InvalidArgument);
    }
    SUBCASE("FFT length must be a power of two, at least 64") {
        EncodingConfig cfg;
        cfg.fft_length = 100;
        CHECK_THROWS_AS(compute_spectrum(good, cfg), InvalidArgument);
        cfg.fft_length = 32;
        CHECK_THROWS_AS(compute_spectrum(good, cfg), InvalidArgument);
    }
    SUBCASE("negative silence floor") {
        EncodingConfig cfg;
        cfg.silence_power_floor = -1.0;
        CHECK_THROWS_AS(compute_spectrum(good, cfg), InvalidArgument);
    }
}
