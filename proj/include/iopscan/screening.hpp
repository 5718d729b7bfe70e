#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "iopscan/annotation_store.hpp"
#include "iopscan/btm.hpp"
#include "iopscan/corpus.hpp"
#include "iopscan/errors.hpp"
#include "iopscan/labels.hpp"

namespace iopscan {

/// Ids of non-degenerate documents whose dominant topic is in rogue_topics,
/// in input order. Throws std::invalid_argument when rogue_topics is empty
/// or names a topic outside the distributions' range.
std::vector<std::string> isolate_rogue(const std::vector<DocTopicDist>& doc_dists,
                                       const std::set<std::size_t>& rogue_topics);

/// Simple percent agreement between two aligned label lists.
template <typename Label>
double agreement(std::span<const Label> a, std::span<const Label> b) {
  if (a.size() != b.size()) {
    throw AlignmentError("label lists differ in length (" + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()) + ")");
  }
  if (a.empty()) throw AlignmentError("agreement needs at least one item");
  std::size_t same = 0;
  for (std::size_t i = 0; i < a.size(); ++i) same += a[i] == b[i] ? 1 : 0;
  return static_cast<double>(same) / static_cast<double>(a.size());
}

template <typename Label>
double agreement(const std::vector<Label>& a, const std::vector<Label>& b) {
  return agreement(std::span<const Label>(a), std::span<const Label>(b));
}

/// Mean of pairwise percent agreement over annotator pairs, each pair
/// restricted to items both labelled. nullopt when no pair shares an item.
/// labels[item][annotator] = label.
template <typename Label>
std::optional<double> mean_pairwise_agreement(
    const std::map<std::string, std::map<std::string, Label>>& labels) {
  std::set<std::string> annotators;
  for (const auto& [item, by] : labels) {
    for (const auto& [who, l] : by) annotators.insert(who);
  }
  std::vector<std::string> people(annotators.begin(), annotators.end());
  double total = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < people.size(); ++i) {
    for (std::size_t j = i + 1; j < people.size(); ++j) {
      std::vector<Label> a, b;
      for (const auto& [item, by] : labels) {
        auto x = by.find(people[i]);
        auto y = by.find(people[j]);
        if (x != by.end() && y != by.end()) {
          a.push_back(x->second);
          b.push_back(y->second);
        }
      }
      if (a.empty()) continue;
      total += agreement(a, b);
      ++pairs;
    }
  }
  if (pairs == 0) return std::nullopt;
  return total / static_cast<double>(pairs);
}

/// Majority of annotators' current labels; ties resolve to NonRogue.
ClassLabel majority_label(const std::vector<TweetAnnotation>& annotations_for_one_tweet);

/// Fraction of isolated tweets whose majority label is Rogue. Throws
/// CoverageError listing isolated ids with no annotation.
double rogue_precision(const std::vector<std::string>& isolated,
                       const std::vector<TweetAnnotation>& annotations);

/// Per-topic consensus: the label a strict majority of annotators gave, or
/// NeedsInvestigation when no strict majority exists. Throws CoverageError
/// when a topic in [0, k) has no annotation.
std::vector<TopicLabel> topic_consensus(const std::vector<TopicAnnotation>& annotations,
                                        std::size_t k);

std::set<std::size_t> relevant_topics(const std::vector<TopicLabel>& consensus);

/// Topics held back for a second annotation pass.
std::vector<std::size_t> topics_needing_review(const std::vector<TopicLabel>& consensus);

struct LabeledTweet {
  std::string tweet_id;
  ClassLabel label = ClassLabel::NonRogue;

  bool operator==(const LabeledTweet&) const = default;
};

/// Rogue iff the tweet is isolated under a Relevant topic and its majority
/// tweet annotation is Rogue; everything else is NonRogue. Output follows
/// record order. Throws CoverageError when a topic lacks annotation.
std::vector<LabeledTweet> label_dataset(const std::vector<TweetRecord>& records,
                                        const std::vector<DocTopicDist>& doc_dists,
                                        const std::vector<TopicAnnotation>& topic_annotations,
                                        const std::vector<TweetAnnotation>& tweet_annotations);

/// Same rule with the isolated set already computed.
std::vector<LabeledTweet> label_dataset(const std::vector<TweetRecord>& records,
                                        const std::set<std::string>& isolated,
                                        const std::vector<TweetAnnotation>& tweet_annotations);

/// CSV with header "tweet_id,label".
void write_labels_csv(const std::filesystem::path& path, const std::vector<LabeledTweet>& labels);
std::vector<LabeledTweet> read_labels_csv(const std::filesystem::path& path);

}  // namespace iopscan
