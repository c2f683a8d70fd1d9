#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "farf/config.hpp"
#include "farf/forest.hpp"
#include "farf/projection.hpp"

namespace farf {

inline constexpr std::uint32_t kModelFormatVersion = 1;

/// Everything inference needs. The config snapshot is authoritative.
struct TrainedModel {
  SRConfig config;
  ProjectionModel projection;
  ForestModel forest;
};

/// Binary layout, little-endian throughout:
///   "FARF" | u32 version | sections | u32 CRC-32 of all preceding bytes
/// Each section is a 4-byte tag, a u64 payload length and the payload:
///   CONF  canonical config text
///   PROJ  kind, dims, seed, data rank, mean, matrix (f64, row-major)
///   TREE  per tree, nodes in preorder; leaves carry P (f64, row-major)
std::string serialize_model(const TrainedModel& model);

/// Throws IoError on a bad magic, version, checksum or truncated section.
TrainedModel deserialize_model(std::string_view bytes);

void save_model(const std::filesystem::path& path, const TrainedModel& model);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace farf
