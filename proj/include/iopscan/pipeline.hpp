#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "iopscan/btm.hpp"
#include "iopscan/config.hpp"
#include "iopscan/corpus.hpp"

namespace iopscan {

/// File layout under the output directory.
struct Artifacts {
  std::filesystem::path dir;

  explicit Artifacts(std::filesystem::path d) : dir(std::move(d)) {}

  std::filesystem::path corpus() const { return dir / "corpus.jsonl"; }
  std::filesystem::path filtered() const { return dir / "filtered.jsonl"; }
  std::filesystem::path volume() const { return dir / "volume.csv"; }
  std::filesystem::path model() const { return dir / "btm_model.txt"; }
  std::filesystem::path topics_report() const { return dir / "topics.txt"; }
  std::filesystem::path topic_words() const { return dir / "topic_words.csv"; }
  std::filesystem::path doc_topics() const { return dir / "doc_topics.csv"; }
  std::filesystem::path topic_volume() const { return dir / "topic_volume.csv"; }
  std::filesystem::path candidates() const { return dir / "rogue_candidates.csv"; }
  std::filesystem::path labels() const { return dir / "labels.csv"; }
  std::filesystem::path features() const { return dir / "features.csv"; }
  std::filesystem::path stats_csv() const { return dir / "stats.csv"; }
  std::filesystem::path stats_txt() const { return dir / "stats.txt"; }
  std::filesystem::path account_age() const { return dir / "account_age.csv"; }
  std::filesystem::path logreg(const std::string& group) const { return dir / ("logreg_" + group + ".txt"); }
  std::filesystem::path evaluation_csv() const { return dir / "evaluation.csv"; }
  std::filesystem::path evaluation_txt() const { return dir / "evaluation.txt"; }
  std::filesystem::path evaluation_runs() const { return dir / "evaluation_runs.csv"; }
};

struct StageOutcome {
  std::vector<std::filesystem::path> inputs;
  std::vector<std::filesystem::path> outputs;
  std::uint64_t seed = 0;
  /// Human-readable summary for standard output.
  std::string summary;
};

/// Pipeline stages in execution order (serve is not a stage).
const std::vector<std::string>& stage_names();

/// Runs one stage and writes its manifest. Missing upstream artifacts and
/// unmet annotation gates throw GateError naming what to run or annotate.
StageOutcome run_stage(const std::string& name, const PipelineConfig& config);

/// Every stage in order, printing each summary to `out`.
void run_pipeline(const PipelineConfig& config, std::ostream& out);

/// Label of the combined column in per-drug reports.
inline constexpr const char* kAllDrugs = "all";

/// tweet_id, dominant_topic, degenerate, p0..p{k-1}.
void write_doc_topics(const std::filesystem::path& path, const std::vector<DocTopicDist>& dists);
std::vector<DocTopicDist> read_doc_topics(const std::filesystem::path& path);

/// Loads what the annotation service needs from a finished topics stage.
struct TopicArtifacts {
  BtmModel model;
  std::vector<TweetRecord> records;
  std::vector<DocTopicDist> doc_dists;
};
TopicArtifacts load_topic_artifacts(const PipelineConfig& config);

}  // namespace iopscan
