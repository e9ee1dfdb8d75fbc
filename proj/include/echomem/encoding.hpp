#pragma once

// Maps spectral peaks onto a bipolar neuron pattern: one neuron per
// equal-width frequency band, +1 where a peak falls, -1 elsewhere.

#include <cstddef>
#include <optional>
#include <vector>

#include "echomem/hopfield.hpp"
#include "echomem/spectrum.hpp"

namespace echomem {

class FrequencyBandMap {
public:
    // Splits [lo_hz, hi_hz] into n equal-width bands. Band k covers
    // [edge(k), edge(k+1)); the last band is closed at hi_hz.
    FrequencyBandMap(double lo_hz, double hi_hz, std::size_t n);

    std::size_t size() const { return n_; }
    double lo_hz() const { return lo_; }
    double hi_hz() const { return hi_; }

    // Band edges, n+1 values from lo_hz to hi_hz.
    const std::vector<double>& edges() const { return edges_; }

    // Band index for a frequency, or nullopt outside [lo_hz, hi_hz].
    std::optional<std::size_t> band_of(double f_hz) const;

private:
    double lo_;
    double hi_;
    std::size_t n_;
    std::vector<double> edges_;
};

// Encodes a spectrum's peak list as a bipolar pattern over the band map.
// Throws InvalidArgument when the spectrum does not cover the map's band.
BipolarPattern encode_pattern(const PowerSpectrum& s, const FrequencyBandMap& map);

// Band map induced by an encoding config.
FrequencyBandMap band_map_for(const EncodingConfig& cfg);

}  // namespace echomem
