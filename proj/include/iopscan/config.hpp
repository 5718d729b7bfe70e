#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "iopscan/corpus.hpp"
#include "iopscan/features.hpp"

namespace iopscan {

/// Everything a pipeline invocation depends on. Relative paths in a config
/// file resolve against the file's directory.
struct PipelineConfig {
  // [input]
  std::vector<std::filesystem::path> inputs;
  SchemaMode schema_mode = SchemaMode::Strict;

  // [filter]
  std::set<std::string> keywords = KeywordSet::defaults().names();
  MatchMode match_mode = MatchMode::Token;

  // [tokenizer]
  std::filesystem::path stopwords;
  /// Biterm window; nullopt pairs every two tokens of a tweet.
  std::optional<std::size_t> biterm_window;

  // [btm]
  std::optional<std::size_t> k;
  std::size_t k_cap = 20;
  std::optional<double> alpha;
  double beta = 0.01;
  std::size_t iterations = 1000;
  std::uint64_t btm_seed = 1;

  // [screening]
  std::filesystem::path annotation_log;  // empty: <output>/annotations.jsonl
  /// Explicit rogue topics; empty means topic annotations decide.
  std::set<std::size_t> rogue_topics;

  // [features]
  EntityMode entity_mode = EntityMode::Presence;
  Timestamp account_cutoff = default_account_cutoff();

  // [classifier]
  double l2_lambda = 1.0;
  double split_fraction = 0.7;
  std::size_t runs = 10;
  std::uint64_t classifier_seed = 1;

  // [service]
  std::string host = "127.0.0.1";
  int port = 8080;
  std::size_t sample_tweets = 20;
  std::filesystem::path static_dir;

  // [output]
  std::filesystem::path output_dir = "out";

  std::filesystem::path resolved_annotation_log() const {
    return annotation_log.empty() ? output_dir / "annotations.jsonl" : annotation_log;
  }
};

/// Defaults with the bundled stopword list and UI directory.
PipelineConfig default_config();

/// Parses "key = value" lines under "[section]" headers. '#' and ';' start
/// comments. Unknown keys and bad values throw ConfigError naming the field
/// and line.
PipelineConfig load_config(const std::filesystem::path& path);
PipelineConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});

/// Applies "section.key=value".
void apply_override(PipelineConfig& config, const std::string& assignment);
void set_value(PipelineConfig& config, const std::string& key, const std::string& value,
               const std::filesystem::path& base_dir = {});

/// Range and existence checks. Throws ConfigError listing every problem.
/// `need_inputs` additionally requires at least one existing input file.
void validate(const PipelineConfig& config, bool need_inputs = false);

/// Every key in a fixed order, one "section.key = value" per line. Two
/// configs with equal canonical text behave identically.
std::string canonical_text(const PipelineConfig& config);

/// Every accepted "section.key".
std::vector<std::string> config_keys();

}  // namespace iopscan
