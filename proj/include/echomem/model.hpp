#pragma once

// The trained associative memory and its on-disk form: a versioned
// little-endian binary blob with a trailing CRC32.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "echomem/encoding.hpp"
#include "echomem/hopfield.hpp"

namespace echomem {

inline constexpr std::uint32_t kModelFormatVersion = 1;

struct TrainedModel {
    WeightMatrix weights;
    std::vector<BipolarPattern> stored_patterns;
    std::vector<std::string> class_labels;  // parallel to stored_patterns
    FrequencyBandMap band_map;
    EncodingConfig encoding;
    DynamicsConfig dynamics;
    bool band_filter = false;  // Model-2 behaviour: drop 49-51 kHz dominants
    std::uint32_t format_version = kModelFormatVersion;
};

// Layout: "EMHN" magic, u32 version, sizes, configs, band edges, labels,
// patterns, row-major f64 weights, u32 CRC32 of everything before it.
std::vector<std::uint8_t> save_model(const TrainedModel& model);

// Validation order: magic, version, structure/truncation, checksum.
// Distinct FormatError messages for each failure mode.
TrainedModel load_model(std::span<const std::uint8_t> bytes);

void save_model_file(const std::filesystem::path& path, const TrainedModel& model);
TrainedModel load_model_file(const std::filesystem::path& path);

// IEEE (zlib) CRC32, exposed for format tests.
std::uint32_t crc32(std::span<const std::uint8_t> bytes);

}  // namespace echomem
