#include "iopscan/annotation_store.hpp"

#include <cstdio>
#include <fstream>

#include <fcntl.h>
#include <unistd.h>

#include <json.hpp>

#include "iopscan/errors.hpp"

namespace iopscan {

using nlohmann::json;

std::string serialize_event(const AnnotationEvent& e) {
  json j;
  j["kind"] = e.kind == ItemKind::Topic ? "topic" : "tweet";
  j["item_id"] = e.item_id;
  j["label"] = e.label;
  j["annotator_id"] = e.annotator_id;
  j["timestamp"] = format_timestamp(e.timestamp);
  if (e.nonce) j["nonce"] = *e.nonce;
  return j.dump();
}

AnnotationEvent parse_event(const std::string& line) {
  json j = json::parse(line);
  AnnotationEvent e;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "topic") {
    e.kind = ItemKind::Topic;
  } else if (kind == "tweet") {
    e.kind = ItemKind::Tweet;
  } else {
    throw DataError("unknown annotation kind '" + kind + "'");
  }
  e.item_id = j.at("item_id").get<std::string>();
  e.label = j.at("label").get<std::string>();
  e.annotator_id = j.at("annotator_id").get<std::string>();
  auto ts = parse_timestamp(j.at("timestamp").get<std::string>());
  if (!ts) throw DataError("bad annotation timestamp");
  e.timestamp = *ts;
  if (j.contains("nonce") && !j["nonce"].is_null()) e.nonce = j["nonce"].get<std::string>();
  bool valid = e.kind == ItemKind::Topic ? parse_topic_label(e.label).has_value()
                                         : parse_class_label(e.label).has_value();
  if (!valid) throw DataError("invalid label '" + e.label + "'");
  if (e.annotator_id.empty() || e.item_id.empty()) throw DataError("empty item or annotator id");
  if (e.kind == ItemKind::Topic &&
      e.item_id.find_first_not_of("0123456789") != std::string::npos) {
    throw DataError("topic id '" + e.item_id + "' is not an index");
  }
  return e;
}

AnnotationStore::AnnotationStore(std::optional<std::filesystem::path> path, Clock clock)
    : path_(std::move(path)), clock_(std::move(clock)) {}

AnnotationStore::AnnotationStore(std::filesystem::path log_path, Clock clock)
    : AnnotationStore(std::optional<std::filesystem::path>(std::move(log_path)), std::move(clock)) {
  std::ifstream in(*path_);
  if (!in) {
    if (std::filesystem::exists(*path_)) throw IoError("cannot read '" + path_->string() + "'");
    std::ofstream create(*path_, std::ios::app);
    if (!create) throw IoError("cannot create '" + path_->string() + "'");
    return;
  }
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      apply(parse_event(line));
    } catch (const std::exception& ex) {
      throw DataError(path_->string() + ":" + std::to_string(line_no) +
                      ": malformed annotation event: " + ex.what());
    }
  }
}

AnnotationStore AnnotationStore::in_memory(Clock clock) {
  return AnnotationStore(std::optional<std::filesystem::path>{}, std::move(clock));
}

void AnnotationStore::apply(const AnnotationEvent& event) {
  history_.push_back(event);
  current_[{event.kind, event.item_id, event.annotator_id}] = history_.size() - 1;
}

AppendResult AnnotationStore::append(AnnotationEvent event) {
  if (event.annotator_id.empty()) throw std::invalid_argument("annotator_id must be nonempty");
  std::lock_guard lock(mutex_);
  if (event.nonce) {
    for (const auto& e : history_) {
      if (e.nonce == event.nonce && e.kind == event.kind && e.item_id == event.item_id &&
          e.annotator_id == event.annotator_id && e.label == event.label) {
        return {e, true};
      }
    }
  }
  event.timestamp = clock_();
  if (path_) {
    const std::string line = serialize_event(event) + "\n";
    int fd = ::open(path_->c_str(), O_WRONLY | O_APPEND | O_CREAT, 0644);
    if (fd < 0) throw IoError("cannot open '" + path_->string() + "' for append");
    std::size_t written = 0;
    while (written < line.size()) {
      auto n = ::write(fd, line.data() + written, line.size() - written);
      if (n < 0) {
        ::close(fd);
        throw IoError("write to '" + path_->string() + "' failed");
      }
      written += static_cast<std::size_t>(n);
    }
    ::fsync(fd);
    ::close(fd);
  }
  apply(event);
  return {event, false};
}

AppendResult AnnotationStore::annotate_topic(std::size_t topic_id, TopicLabel label,
                                             const std::string& annotator_id,
                                             std::optional<std::string> nonce) {
  return append({ItemKind::Topic, std::to_string(topic_id), std::string(to_string(label)),
                 annotator_id, {}, std::move(nonce)});
}

AppendResult AnnotationStore::annotate_tweet(const std::string& tweet_id, ClassLabel label,
                                             const std::string& annotator_id,
                                             std::optional<std::string> nonce) {
  if (tweet_id.empty()) throw std::invalid_argument("tweet_id must be nonempty");
  return append({ItemKind::Tweet, tweet_id, std::string(to_string(label)), annotator_id, {},
                 std::move(nonce)});
}

std::vector<TopicAnnotation> AnnotationStore::topic_annotations() const {
  std::lock_guard lock(mutex_);
  std::vector<TopicAnnotation> out;
  for (const auto& [key, idx] : current_) {
    const auto& e = history_[idx];
    if (e.kind != ItemKind::Topic) continue;
    out.push_back({std::stoul(e.item_id), *parse_topic_label(e.label), e.annotator_id, e.timestamp});
  }
  return out;
}

std::vector<TweetAnnotation> AnnotationStore::tweet_annotations() const {
  std::lock_guard lock(mutex_);
  std::vector<TweetAnnotation> out;
  for (const auto& [key, idx] : current_) {
    const auto& e = history_[idx];
    if (e.kind != ItemKind::Tweet) continue;
    out.push_back({e.item_id, *parse_class_label(e.label), e.annotator_id, e.timestamp});
  }
  return out;
}

std::vector<AnnotationEvent> AnnotationStore::history() const {
  std::lock_guard lock(mutex_);
  return history_;
}

}  // namespace iopscan
