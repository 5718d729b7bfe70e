#include "iopscan/service.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <map>
#include <thread>
#include <unordered_map>

#include <httplib.h>

#include "iopscan/screening.hpp"

namespace iopscan {

using nlohmann::json;

namespace {

constexpr const char* kJson = "application/json";

json tweet_json(const TweetRecord& r, const DocTopicDist& d) {
  return {{"tweet_id", r.tweet_id},
          {"text", r.text},
          {"created_at", format_timestamp(r.created_at)},
          {"dominant_topic", d.dominant_topic},
          {"proportion", d.proportions[d.dominant_topic]},
          {"has_url", r.url_entity_count > 0},
          {"retweet_count", r.retweet_count},
          {"favorite_count", r.favorite_count},
          {"user_followers_count", r.user_followers_count},
          {"user_friends_count", r.user_friends_count},
          {"user_verified", r.user_verified},
          {"matched_keywords", r.matched_keywords}};
}

template <typename Names>
json names_json(const Names& names) {
  json arr = json::array();
  for (auto n : names) arr.push_back(std::string(n));
  return arr;
}

template <typename Label>
json note_json(const std::string& annotator, Label label, Timestamp ts) {
  return {{"annotator_id", annotator},
          {"label", std::string(to_string(label))},
          {"timestamp", format_timestamp(ts)}};
}

// false on a malformed value.
bool query_size(const httplib::Request& req, const char* name, std::size_t& out) {
  if (!req.has_param(name)) return true;
  const auto v = req.get_param_value(name);
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  return ec == std::errc() && p == v.data() + v.size();
}

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

struct AnnotationService::Impl {
  ServiceData data;
  AnnotationStore& store;
  httplib::Server server;
  std::thread thread;
  std::unordered_map<std::string, std::size_t> row_of;
  // by_topic[z] = rows with dominant topic z, highest proportion first.
  std::vector<std::vector<std::size_t>> by_topic;

  Impl(ServiceData d, AnnotationStore& s) : data(std::move(d)), store(s) {
    if (data.doc_dists.size() != data.records.size()) {
      throw std::invalid_argument("doc_dists and records differ in length");
    }
    by_topic.resize(data.model.k);
    for (std::size_t i = 0; i < data.records.size(); ++i) {
      row_of.emplace(data.records[i].tweet_id, i);
      const auto& dd = data.doc_dists[i];
      if (dd.proportions.size() != data.model.k) {
        throw std::invalid_argument("doc_dists do not match the model's topic count");
      }
      if (!dd.degenerate) by_topic[dd.dominant_topic].push_back(i);
    }
    for (std::size_t z = 0; z < by_topic.size(); ++z) {
      std::stable_sort(by_topic[z].begin(), by_topic[z].end(), [&](std::size_t a, std::size_t b) {
        return data.doc_dists[a].proportions[z] > data.doc_dists[b].proportions[z];
      });
    }
  }

  json topic_page(std::size_t z, std::size_t offset, std::size_t limit) const {
    const auto& rows = by_topic[z];
    json tweets = json::array();
    for (std::size_t i = offset; i < rows.size() && i - offset < limit; ++i) {
      tweets.push_back(tweet_json(data.records[rows[i]], data.doc_dists[rows[i]]));
    }
    return {{"topic_id", z}, {"total", rows.size()}, {"offset", offset}, {"limit", limit}, {"tweets", tweets}};
  }

  json topic_cards() const {
    std::map<std::size_t, json> notes;
    for (const auto& a : store.topic_annotations()) {
      notes[a.topic_id].push_back(note_json(a.annotator_id, a.label, a.timestamp));
    }
    json cards = json::array();
    for (std::size_t z = 0; z < data.model.k; ++z) {
      json words = json::array();
      for (const auto& wp : top_words(data.model, z, std::min<std::size_t>(10, data.model.vocab_size))) {
        words.push_back({{"word", wp.term}, {"probability", wp.probability}});
      }
      auto page = topic_page(z, 0, data.sample_tweets);
      auto it = notes.find(z);
      cards.push_back({{"topic_id", z},
                       {"weight", data.model.theta[z]},
                       {"words", words},
                       {"tweet_count", page["total"]},
                       {"samples", page["tweets"]},
                       {"annotations", it == notes.end() ? json::array() : it->second}});
    }
    return cards;
  }

  std::set<std::size_t> rogue_topics() const {
    if (!data.rogue_topics.empty()) return data.rogue_topics;
    std::vector<std::array<std::size_t, 3>> votes(data.model.k, {0, 0, 0});
    std::vector<std::size_t> voters(data.model.k, 0);
    for (const auto& a : store.topic_annotations()) {
      if (a.topic_id >= data.model.k) continue;
      ++votes[a.topic_id][static_cast<std::size_t>(a.label)];
      ++voters[a.topic_id];
    }
    std::set<std::size_t> out;
    for (std::size_t z = 0; z < data.model.k; ++z) {
      if (2 * votes[z][static_cast<std::size_t>(TopicLabel::Relevant)] > voters[z]) out.insert(z);
    }
    return out;
  }

  std::vector<std::size_t> candidate_rows() const {
    const auto rogue = rogue_topics();
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < data.records.size(); ++i) {
      const auto& d = data.doc_dists[i];
      if (!d.degenerate && rogue.count(d.dominant_topic)) rows.push_back(i);
    }
    return rows;
  }

  json candidates(std::size_t offset, std::size_t limit) const {
    const auto rows = candidate_rows();
    std::map<std::string, json> notes;
    for (const auto& a : store.tweet_annotations()) {
      notes[a.tweet_id].push_back(note_json(a.annotator_id, a.label, a.timestamp));
    }
    json out = json::array();
    for (std::size_t i = offset; i < rows.size() && i - offset < limit; ++i) {
      auto t = tweet_json(data.records[rows[i]], data.doc_dists[rows[i]]);
      auto it = notes.find(data.records[rows[i]].tweet_id);
      t["annotations"] = it == notes.end() ? json::array() : it->second;
      out.push_back(std::move(t));
    }
    return {{"rogue_topics", rogue_topics()}, {"total", rows.size()}, {"offset", offset}, {"candidates", out}};
  }

  json progress() const {
    const auto topic_notes = store.topic_annotations();
    const auto tweet_notes = store.tweet_annotations();
    std::set<std::string> annotators;

    std::map<std::string, std::map<std::string, TopicLabel>> topic_labels;
    for (const auto& a : topic_notes) {
      if (a.topic_id >= data.model.k) continue;
      topic_labels[std::to_string(a.topic_id)][a.annotator_id] = a.label;
      annotators.insert(a.annotator_id);
    }

    const auto rows = candidate_rows();
    std::set<std::string> candidate_ids;
    for (auto r : rows) candidate_ids.insert(data.records[r].tweet_id);
    std::map<std::string, std::map<std::string, ClassLabel>> tweet_labels;
    std::vector<TweetAnnotation> on_candidates;
    for (const auto& a : tweet_notes) {
      annotators.insert(a.annotator_id);
      if (!candidate_ids.count(a.tweet_id)) continue;
      tweet_labels[a.tweet_id][a.annotator_id] = a.label;
      on_candidates.push_back(a);
    }
    std::optional<double> precision;
    if (!tweet_labels.empty()) {
      std::vector<std::string> annotated;
      for (const auto& [id, by] : tweet_labels) annotated.push_back(id);
      precision = rogue_precision(annotated, on_candidates);
    }
    return {{"topics",
             {{"total", data.model.k},
              {"annotated", topic_labels.size()},
              {"remaining", data.model.k - topic_labels.size()},
              {"agreement", optional_number(mean_pairwise_agreement(topic_labels))}}},
            {"tweets",
             {{"candidates", rows.size()},
              {"annotated", tweet_labels.size()},
              {"remaining", rows.size() - tweet_labels.size()},
              {"agreement", optional_number(mean_pairwise_agreement(tweet_labels))},
              {"rogue_precision", optional_number(precision)}}},
            {"annotators", annotators}};
  }

  void routes();
};

void AnnotationService::Impl::routes() {
  server.Get("/topics", [this](const httplib::Request&, httplib::Response& res) {
    reply(res, 200, topic_cards());
  });

  server.Get(R"(/topics/(\d+)/tweets)", [this](const httplib::Request& req, httplib::Response& res) {
    std::size_t z = 0;
    const auto s = req.matches[1].str();
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), z);
    if (ec != std::errc() || z >= data.model.k) {
      reply(res, 404, {{"error", "unknown topic " + s}});
      return;
    }
    std::size_t offset = 0, limit = data.sample_tweets;
    if (!query_size(req, "offset", offset) || !query_size(req, "limit", limit)) {
      reply(res, 400, {{"error", "offset and limit must be nonnegative integers"}});
      return;
    }
    reply(res, 200, topic_page(z, offset, limit));
  });

  server.Get("/tweets/rogue-candidates", [this](const httplib::Request& req, httplib::Response& res) {
    std::size_t offset = 0, limit = SIZE_MAX;
    if (!query_size(req, "offset", offset) || !query_size(req, "limit", limit)) {
      reply(res, 400, {{"error", "offset and limit must be nonnegative integers"}});
      return;
    }
    reply(res, 200, candidates(offset, limit));
  });

  server.Get("/progress", [this](const httplib::Request&, httplib::Response& res) {
    reply(res, 200, progress());
  });

  auto parse_body = [](const httplib::Request& req, httplib::Response& res,
                       const char* id_field) -> std::optional<json> {
    json body = json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object()) {
      reply(res, 400, {{"error", "request body must be a JSON object"}});
      return std::nullopt;
    }
    for (const char* f : {id_field, "label", "annotator_id"}) {
      if (!body.contains(f)) {
        reply(res, 400, {{"error", std::string("missing field '") + f + "'"}});
        return std::nullopt;
      }
    }
    if (!body["label"].is_string() || !body["annotator_id"].is_string() ||
        body["annotator_id"].get<std::string>().empty()) {
      reply(res, 400, {{"error", "label and annotator_id must be nonempty strings"}});
      return std::nullopt;
    }
    if (body.contains("nonce") && !body["nonce"].is_string()) {
      reply(res, 400, {{"error", "nonce must be a string"}});
      return std::nullopt;
    }
    return body;
  };

  auto event_json = [](const AppendResult& r) {
    return json{{"kind", r.event.kind == ItemKind::Topic ? "topic" : "tweet"},
                {"item_id", r.event.item_id},
                {"label", r.event.label},
                {"annotator_id", r.event.annotator_id},
                {"timestamp", format_timestamp(r.event.timestamp)},
                {"duplicate", r.duplicate}};
  };

  auto nonce_of = [](const json& body) -> std::optional<std::string> {
    if (body.contains("nonce")) return body["nonce"].get<std::string>();
    return std::nullopt;
  };

  server.Post("/annotations/topic", [this, parse_body, event_json, nonce_of](const httplib::Request& req,
                                                                            httplib::Response& res) {
    auto body = parse_body(req, res, "topic_id");
    if (!body) return;
    const auto& id = (*body)["topic_id"];
    if (!id.is_number_integer() || id.get<long long>() < 0) {
      reply(res, 400, {{"error", "topic_id must be a nonnegative integer"}});
      return;
    }
    const auto text = (*body)["label"].get<std::string>();
    const auto label = parse_topic_label(text);
    if (!label) {
      reply(res, 422, {{"error", "invalid topic label '" + text + "'"}, {"allowed", names_json(kTopicLabelNames)}});
      return;
    }
    const auto z = id.get<std::size_t>();
    if (z >= data.model.k) {
      reply(res, 404, {{"error", "unknown topic " + std::to_string(z)}});
      return;
    }
    auto r = store.annotate_topic(z, *label, (*body)["annotator_id"].get<std::string>(), nonce_of(*body));
    reply(res, r.duplicate ? 200 : 201, event_json(r));
  });

  server.Post("/annotations/tweet", [this, parse_body, event_json, nonce_of](const httplib::Request& req,
                                                                            httplib::Response& res) {
    auto body = parse_body(req, res, "tweet_id");
    if (!body) return;
    if (!(*body)["tweet_id"].is_string()) {
      reply(res, 400, {{"error", "tweet_id must be a string"}});
      return;
    }
    const auto text = (*body)["label"].get<std::string>();
    const auto label = parse_class_label(text);
    if (!label) {
      reply(res, 422, {{"error", "invalid tweet label '" + text + "'"}, {"allowed", names_json(kClassLabelNames)}});
      return;
    }
    const auto id = (*body)["tweet_id"].get<std::string>();
    if (!row_of.count(id)) {
      reply(res, 404, {{"error", "unknown tweet " + id}});
      return;
    }
    auto r = store.annotate_tweet(id, *label, (*body)["annotator_id"].get<std::string>(), nonce_of(*body));
    reply(res, r.duplicate ? 200 : 201, event_json(r));
  });

  if (!data.static_dir.empty() && std::filesystem::is_directory(data.static_dir)) {
    server.set_mount_point("/", data.static_dir.string());
  } else {
    server.Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(
          "iopscan annotation service\n"
          "GET /topics, GET /topics/{id}/tweets, POST /annotations/topic,\n"
          "GET /tweets/rogue-candidates, POST /annotations/tweet, GET /progress\n",
          "text/plain");
    });
  }

  server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string what = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    reply(res, 500, {{"error", what}});
  });
}

AnnotationService::AnnotationService(ServiceData data, AnnotationStore& store)
    : impl_(std::make_unique<Impl>(std::move(data), store)) {
  impl_->routes();
}

AnnotationService::~AnnotationService() { stop(); }

int AnnotationService::start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void AnnotationService::run(const std::string& host, int port) {
  if (!impl_->server.listen(host, port)) {
    throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port));
  }
}

void AnnotationService::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

json AnnotationService::topics() const { return impl_->topic_cards(); }

std::optional<json> AnnotationService::topic_tweets(std::size_t topic, std::size_t offset,
                                                    std::size_t limit) const {
  if (topic >= impl_->data.model.k) return std::nullopt;
  return impl_->topic_page(topic, offset, limit);
}

json AnnotationService::rogue_candidates(std::size_t offset, std::size_t limit) const {
  return impl_->candidates(offset, limit);
}

json AnnotationService::progress() const { return impl_->progress(); }

std::set<std::size_t> AnnotationService::current_rogue_topics() const { return impl_->rogue_topics(); }

}  // namespace iopscan
