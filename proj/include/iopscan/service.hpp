#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "iopscan/annotation_store.hpp"
#include "iopscan/btm.hpp"
#include "iopscan/corpus.hpp"

namespace iopscan {

struct ServiceData {
  BtmModel model;
  /// Aligned with records.
  std::vector<DocTopicDist> doc_dists;
  std::vector<TweetRecord> records;
  /// Fixed rogue topics; empty means the current topic annotations decide.
  std::set<std::size_t> rogue_topics;
  std::size_t sample_tweets = 20;
  /// Served at / when it exists.
  std::filesystem::path static_dir;
};

/// HTTP front end over an AnnotationStore. Endpoints:
///   GET  /topics
///   GET  /topics/{id}/tweets?offset=&limit=
///   POST /annotations/topic   {topic_id, label, annotator_id[, nonce]}
///   GET  /tweets/rogue-candidates?offset=&limit=
///   POST /annotations/tweet   {tweet_id, label, annotator_id[, nonce]}
///   GET  /progress
class AnnotationService {
 public:
  /// Throws std::invalid_argument when doc_dists and records disagree.
  AnnotationService(ServiceData data, AnnotationStore& store);
  ~AnnotationService();
  AnnotationService(const AnnotationService&) = delete;
  AnnotationService& operator=(const AnnotationService&) = delete;

  /// Binds and serves on a background thread. Port 0 picks a free port.
  /// Returns the bound port; throws std::runtime_error if binding fails.
  int start(const std::string& host, int port);
  /// Serves on the calling thread until stop().
  void run(const std::string& host, int port);
  void stop();

  nlohmann::json topics() const;
  /// nullopt for an unknown topic.
  std::optional<nlohmann::json> topic_tweets(std::size_t topic, std::size_t offset,
                                             std::size_t limit) const;
  nlohmann::json rogue_candidates(std::size_t offset, std::size_t limit) const;
  nlohmann::json progress() const;

  /// Topics whose current annotations give a strict Relevant majority, or the
  /// fixed set.
  std::set<std::size_t> current_rogue_topics() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace iopscan
