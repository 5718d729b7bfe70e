#include "iopscan/manifest.hpp"

#include <array>
#include <fstream>

#include <json.hpp>
#include <openssl/evp.h>

#include "iopscan/errors.hpp"

namespace iopscan {

namespace fs = std::filesystem;

namespace {

class Digest {
 public:
  Digest() : ctx_(EVP_MD_CTX_new()) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1) {
      throw std::runtime_error("sha256 unavailable");
    }
  }
  ~Digest() { EVP_MD_CTX_free(ctx_); }
  Digest(const Digest&) = delete;
  Digest& operator=(const Digest&) = delete;

  void update(const void* data, std::size_t n) { EVP_DigestUpdate(ctx_, data, n); }

  std::string hex() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx_, md.data(), &len);
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
      out += kHex[md[i] >> 4];
      out += kHex[md[i] & 15];
    }
    return out;
  }

 private:
  EVP_MD_CTX* ctx_;
};

nlohmann::json file_list(const std::vector<fs::path>& paths) {
  auto arr = nlohmann::json::array();
  for (const auto& p : paths) {
    nlohmann::json e{{"path", p.string()}};
    if (fs::is_regular_file(p)) {
      e["sha256"] = sha256_file(p);
      e["bytes"] = fs::file_size(p);
    } else {
      e["sha256"] = nullptr;
    }
    arr.push_back(std::move(e));
  }
  return arr;
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  Digest d;
  d.update(data.data(), data.size());
  return d.hex();
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "' for hashing");
  Digest d;
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    d.update(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  return d.hex();
}

fs::path write_manifest(const PipelineConfig& config, const ManifestEntry& entry) {
  const fs::path dir = config.output_dir / "manifests";
  fs::create_directories(dir);
  const std::string text = canonical_text(config);
  nlohmann::json m;
  m["subcommand"] = entry.subcommand;
  m["created_at"] = format_timestamp(now_utc());
  m["seed"] = entry.seed;
  m["config_sha256"] = sha256_hex(text);
  m["config"] = text;
  m["inputs"] = file_list(entry.inputs);
  m["outputs"] = file_list(entry.outputs);
  const fs::path path = dir / (entry.subcommand + ".json");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << m.dump(2) << '\n';
  return path;
}

}  // namespace iopscan
