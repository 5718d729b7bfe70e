#include "iopscan/screening.hpp"

#include <array>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace iopscan {

std::vector<std::string> isolate_rogue(const std::vector<DocTopicDist>& doc_dists,
                                       const std::set<std::size_t>& rogue_topics) {
  if (rogue_topics.empty()) throw std::invalid_argument("rogue topic set must be nonempty");
  for (const auto& d : doc_dists) {
    if (*rogue_topics.rbegin() >= d.proportions.size()) {
      throw std::invalid_argument("rogue topic " + std::to_string(*rogue_topics.rbegin()) +
                                  " outside model with " + std::to_string(d.proportions.size()) +
                                  " topics");
    }
  }
  std::vector<std::string> ids;
  for (const auto& d : doc_dists) {
    if (!d.degenerate && rogue_topics.count(d.dominant_topic)) ids.push_back(d.tweet_id);
  }
  return ids;
}

ClassLabel majority_label(const std::vector<TweetAnnotation>& annotations_for_one_tweet) {
  std::size_t rogue = 0;
  for (const auto& a : annotations_for_one_tweet) rogue += a.label == ClassLabel::Rogue ? 1 : 0;
  return 2 * rogue > annotations_for_one_tweet.size() ? ClassLabel::Rogue : ClassLabel::NonRogue;
}

namespace {
std::unordered_map<std::string, std::vector<TweetAnnotation>> by_tweet(
    const std::vector<TweetAnnotation>& annotations) {
  std::unordered_map<std::string, std::vector<TweetAnnotation>> grouped;
  for (const auto& a : annotations) grouped[a.tweet_id].push_back(a);
  return grouped;
}
}  // namespace

double rogue_precision(const std::vector<std::string>& isolated,
                       const std::vector<TweetAnnotation>& annotations) {
  auto grouped = by_tweet(annotations);
  std::vector<std::string> missing;
  std::size_t rogue = 0;
  for (const auto& id : isolated) {
    auto it = grouped.find(id);
    if (it == grouped.end()) {
      missing.push_back(id);
      continue;
    }
    rogue += majority_label(it->second) == ClassLabel::Rogue ? 1 : 0;
  }
  if (!missing.empty()) {
    throw CoverageError(std::to_string(missing.size()) + " isolated tweet(s) lack annotations",
                        std::move(missing));
  }
  if (isolated.empty()) return 0.0;
  return static_cast<double>(rogue) / static_cast<double>(isolated.size());
}

std::vector<TopicLabel> topic_consensus(const std::vector<TopicAnnotation>& annotations,
                                        std::size_t k) {
  std::vector<std::array<std::size_t, 3>> votes(k, {0, 0, 0});
  std::vector<std::size_t> voters(k, 0);
  for (const auto& a : annotations) {
    if (a.topic_id >= k) continue;
    ++votes[a.topic_id][static_cast<std::size_t>(a.label)];
    ++voters[a.topic_id];
  }
  std::vector<std::string> missing;
  std::vector<TopicLabel> consensus(k, TopicLabel::NeedsInvestigation);
  for (std::size_t z = 0; z < k; ++z) {
    if (voters[z] == 0) {
      missing.push_back(std::to_string(z));
      continue;
    }
    for (std::size_t l = 0; l < 3; ++l) {
      if (2 * votes[z][l] > voters[z]) consensus[z] = static_cast<TopicLabel>(l);
    }
  }
  if (!missing.empty()) {
    throw CoverageError(std::to_string(missing.size()) + " topic(s) have no annotation",
                        std::move(missing));
  }
  return consensus;
}

std::set<std::size_t> relevant_topics(const std::vector<TopicLabel>& consensus) {
  std::set<std::size_t> out;
  for (std::size_t z = 0; z < consensus.size(); ++z) {
    if (consensus[z] == TopicLabel::Relevant) out.insert(z);
  }
  return out;
}

std::vector<std::size_t> topics_needing_review(const std::vector<TopicLabel>& consensus) {
  std::vector<std::size_t> out;
  for (std::size_t z = 0; z < consensus.size(); ++z) {
    if (consensus[z] == TopicLabel::NeedsInvestigation) out.push_back(z);
  }
  return out;
}

std::vector<LabeledTweet> label_dataset(const std::vector<TweetRecord>& records,
                                        const std::vector<DocTopicDist>& doc_dists,
                                        const std::vector<TopicAnnotation>& topic_annotations,
                                        const std::vector<TweetAnnotation>& tweet_annotations) {
  std::set<std::string> isolated;
  if (!doc_dists.empty()) {
    const std::size_t k = doc_dists.front().proportions.size();
    auto relevant = relevant_topics(topic_consensus(topic_annotations, k));
    if (!relevant.empty()) {
      for (auto& id : isolate_rogue(doc_dists, relevant)) isolated.insert(std::move(id));
    }
  }
  return label_dataset(records, isolated, tweet_annotations);
}

std::vector<LabeledTweet> label_dataset(const std::vector<TweetRecord>& records,
                                        const std::set<std::string>& isolated,
                                        const std::vector<TweetAnnotation>& tweet_annotations) {
  auto grouped = by_tweet(tweet_annotations);
  std::vector<LabeledTweet> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    ClassLabel label = ClassLabel::NonRogue;
    if (isolated.count(r.tweet_id)) {
      auto it = grouped.find(r.tweet_id);
      if (it != grouped.end()) label = majority_label(it->second);
    }
    out.push_back({r.tweet_id, label});
  }
  return out;
}

void write_labels_csv(const std::filesystem::path& path, const std::vector<LabeledTweet>& labels) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "tweet_id,label\n";
  for (const auto& l : labels) out << l.tweet_id << ',' << to_string(l.label) << '\n';
}

std::vector<LabeledTweet> read_labels_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line != "tweet_id,label") {
    throw DataError("'" + path.string() + "' lacks the tweet_id,label header");
  }
  std::vector<LabeledTweet> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto comma = line.find(',');
    auto label = comma == std::string::npos ? std::nullopt
                                            : parse_class_label(line.substr(comma + 1));
    if (!label) throw DataError(path.string() + ":" + std::to_string(line_no) + ": bad label row");
    out.push_back({line.substr(0, comma), *label});
  }
  return out;
}

}  // namespace iopscan
