#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "iopscan/labels.hpp"
#include "iopscan/timeutil.hpp"

namespace iopscan {

struct TopicAnnotation {
  std::size_t topic_id = 0;
  TopicLabel label = TopicLabel::Irrelevant;
  std::string annotator_id;
  Timestamp timestamp{};
};

struct TweetAnnotation {
  std::string tweet_id;
  ClassLabel label = ClassLabel::NonRogue;
  std::string annotator_id;
  Timestamp timestamp{};
};

enum class ItemKind { Topic, Tweet };

/// One line of the annotation log.
struct AnnotationEvent {
  ItemKind kind = ItemKind::Topic;
  std::string item_id;
  std::string label;
  std::string annotator_id;
  Timestamp timestamp{};
  std::optional<std::string> nonce;
};

struct AppendResult {
  AnnotationEvent event;
  /// True when an identical (kind, item, annotator, label, nonce) event was
  /// already logged and nothing was appended.
  bool duplicate = false;
};

/// Append-only annotation log. The latest event per (item, annotator) is the
/// current label; the full history stays on disk. Appends are flushed and
/// fsync'd before returning. Safe for concurrent use.
class AnnotationStore {
 public:
  using Clock = std::function<Timestamp()>;

  /// Opens (or creates) a log file and replays it. Throws DataError on a
  /// malformed line.
  explicit AnnotationStore(std::filesystem::path log_path, Clock clock = now_utc);

  /// Memory-only store, for tests and dry runs.
  static AnnotationStore in_memory(Clock clock = now_utc);

  AppendResult annotate_topic(std::size_t topic_id, TopicLabel label,
                              const std::string& annotator_id,
                              std::optional<std::string> nonce = std::nullopt);
  AppendResult annotate_tweet(const std::string& tweet_id, ClassLabel label,
                              const std::string& annotator_id,
                              std::optional<std::string> nonce = std::nullopt);

  std::vector<TopicAnnotation> topic_annotations() const;
  std::vector<TweetAnnotation> tweet_annotations() const;
  std::vector<AnnotationEvent> history() const;

  const std::optional<std::filesystem::path>& path() const noexcept { return path_; }

 private:
  AnnotationStore(std::optional<std::filesystem::path> path, Clock clock);
  AppendResult append(AnnotationEvent event);
  void apply(const AnnotationEvent& event);

  std::optional<std::filesystem::path> path_;
  Clock clock_;
  mutable std::mutex mutex_;
  std::vector<AnnotationEvent> history_;
  // Index into history_ of the current event per (kind, item, annotator).
  std::map<std::tuple<ItemKind, std::string, std::string>, std::size_t> current_;
};

std::string serialize_event(const AnnotationEvent& event);
AnnotationEvent parse_event(const std::string& line);

}  // namespace iopscan
