#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "iopscan/config.hpp"

namespace iopscan {

std::string sha256_hex(std::string_view data);
/// Throws IoError when the file cannot be read.
std::string sha256_file(const std::filesystem::path& path);

struct ManifestEntry {
  std::string subcommand;
  std::vector<std::filesystem::path> inputs;
  std::vector<std::filesystem::path> outputs;
  std::uint64_t seed = 0;
};

/// Writes <output_dir>/manifests/<subcommand>.json: input and output hashes,
/// the canonical config and its hash, the seed and a creation time. Returns
/// the manifest path.
std::filesystem::path write_manifest(const PipelineConfig& config, const ManifestEntry& entry);

}  // namespace iopscan
