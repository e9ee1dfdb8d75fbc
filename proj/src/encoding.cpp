#include "echomem/encoding.hpp"

#include <cmath>

#include "echomem/error.hpp"

namespace echomem {

FrequencyBandMap::FrequencyBandMap(double lo_hz, double hi_hz, std::size_t n)
    : lo_(lo_hz), hi_(hi_hz), n_(n) {
    if (!(lo_hz >= 0.0) || !(lo_hz < hi_hz)) {
        throw InvalidArgument("band map needs 0 <= lo < hi");
    }
    if (n < 2) {
        throw InvalidArgument("band map needs at least 2 bands");
    }
    edges_.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        edges_[k] = lo_ + static_cast<double>(k) * (hi_ - lo_) / static_cast<double>(n);
    }
    edges_[0] = lo_;
    edges_[n] = hi_;
}

std::optional<std::size_t> FrequencyBandMap::band_of(double f_hz) const {
    if (f_hz < lo_ || f_hz > hi_) {
        return std::nullopt;
    }
    if (f_hz == hi_) {
        return n_ - 1;
    }
    const double width = (hi_ - lo_) / static_cast<double>(n_);
    auto idx = static_cast<std::size_t>((f_hz - lo_) / width);
    if (idx >= n_) {
        idx = n_ - 1;
    }
    // The floor estimate can land one band off when f_hz sits on a rounded
    // edge; the edge array is authoritative.
    while (idx + 1 < n_ && f_hz >= edges_[idx + 1]) {
        ++idx;
    }
    while (idx > 0 && f_hz < edges_[idx]) {
        --idx;
    }
    return idx;
}

BipolarPattern encode_pattern(const PowerSpectrum& s, const FrequencyBandMap& map) {
    if (s.bin_freqs.empty() || s.bin_freqs.back() < map.hi_hz()) {
        throw InvalidArgument("spectrum does not cover the encoding band");
    }
    std::vector<Spin> neurons(map.size(), Spin{-1});
    for (const double f : s.peak_freqs) {
        if (const auto band = map.band_of(f)) {
            neurons[*band] = Spin{1};
        }
    }
    return BipolarPattern(std::move(neurons));
}

FrequencyBandMap band_map_for(const EncodingConfig& cfg) {
    return FrequencyBandMap(cfg.band_lo_hz, cfg.band_hi_hz, cfg.n_neurons);
}

}  // namespace echomem
