#include "synth.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace synth {

echomem::Waveform tone(double freq_hz, double amp, std::size_t length, double rate) {
    echomem::Waveform w;
    w.sample_rate = rate;
    w.samples.resize(length);
    for (std::size_t n = 0; n < length; ++n) {
        w.samples[n] = amp * std::sin(2.0 * std::numbers::pi * freq_hz * double(n) / rate);
    }
    return w;
}

echomem::Waveform chirp(double center_hz, double span_hz, double amp, double snr_db,
                        std::uint64_t seed, std::size_t length, double rate) {
    echomem::Waveform w;
    w.sample_rate = rate;
    w.samples.resize(length);

    const double f0 = center_hz - span_hz / 2.0;
    const double slope = span_hz / (double(length) / rate);  // Hz per second
    double signal_power = 0.0;
    for (std::size_t n = 0; n < length; ++n) {
        const double t = double(n) / rate;
        const double phase = 2.0 * std::numbers::pi * (f0 * t + 0.5 * slope * t * t);
        const double env = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * double(n) / double(length)));
        w.samples[n] = amp * env * std::sin(phase);
        signal_power += w.samples[n] * w.samples[n];
    }
    signal_power /= double(length);

    const double noise_power = signal_power / std::pow(10.0, snr_db / 10.0);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, std::sqrt(noise_power));
    for (double& s : w.samples) {
        s += noise(rng);
        if (s > 1.0) s = 1.0;
        if (s < -1.0) s = -1.0;
    }
    return w;
}

echomem::Waveform near_silence(std::uint64_t seed, std::size_t length, double amp,
                               double rate) {
    echomem::Waveform w;
    w.sample_rate = rate;
    w.samples.resize(length);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-amp, amp);
    for (double& s : w.samples) {
        s = dist(rng);
    }
    return w;
}

}  // namespace synth
