#include <doctest.h>

#include <thread>

#include "iopscan/annotation_store.hpp"
#include "iopscan/random.hpp"
#include "iopscan/screening.hpp"
#include "test_util.hpp"

using namespace iopscan;

namespace {

DocTopicDist dist(std::string id, std::vector<double> p, bool degenerate = false) {
  DocTopicDist d;
  d.tweet_id = std::move(id);
  d.dominant_topic = argmax_topic(p);
  d.proportions = std::move(p);
  d.degenerate = degenerate;
  return d;
}

TweetAnnotation tweet(std::string id, ClassLabel l, std::string who = "ann1") {
  return {std::move(id), l, std::move(who), {}};
}

TopicAnnotation topic(std::size_t z, TopicLabel l, std::string who = "ann1") {
  return {z, l, std::move(who), {}};
}

AnnotationStore::Clock ticking_clock() {
  auto t = std::make_shared<std::int64_t>(1'500'000'000);
  return [t] { return Timestamp{std::chrono::seconds{(*t)++}}; };
}

}  // namespace

TEST_CASE("isolate_rogue examples") {
  CHECK(isolate_rogue({dist("a", {0.7, 0.2, 0.1})}, {0}) == std::vector<std::string>{"a"});
  CHECK(isolate_rogue({dist("b", {0.4, 0.6})}, {0}).empty());
  CHECK(isolate_rogue({dist("c", {0.5, 0.5}, true)}, {0}).empty());
  CHECK_THROWS_AS(isolate_rogue({dist("a", {0.7, 0.3})}, {}), std::invalid_argument);
  CHECK_THROWS_AS(isolate_rogue({dist("a", {0.7, 0.3})}, {2}), std::invalid_argument);
}

TEST_CASE("isolate_rogue equals a brute-force argmax filter") {
  Rng rng(200);
  std::vector<DocTopicDist> dists;
  std::vector<std::size_t> planted;
  for (int i = 0; i < 200; ++i) {
    std::vector<double> p(5);
    const std::size_t top = rng.below(5);
    double sum = 0;
    for (std::size_t z = 0; z < 5; ++z) {
      p[z] = z == top ? 1.0 : rng.uniform() * 0.9;
      sum += p[z];
    }
    for (auto& v : p) v /= sum;
    planted.push_back(top);
    dists.push_back(dist("t" + std::to_string(i), p));
  }
  const std::set<std::size_t> rogue{1, 3};
  std::vector<std::string> expected;
  for (std::size_t i = 0; i < dists.size(); ++i) {
    if (planted[i] == 1 || planted[i] == 3) expected.push_back(dists[i].tweet_id);
  }
  auto got = isolate_rogue(dists, rogue);
  CHECK(got == expected);
  CHECK(isolate_rogue(dists, rogue) == got);
}

TEST_CASE("agreement") {
  using L = ClassLabel;
  std::vector<L> a(10, L::Rogue);
  CHECK(agreement(a, a) == 1.0);
  std::vector<L> b(10, L::NonRogue);
  CHECK(agreement(a, b) == 0.0);
  std::vector<L> c = a;
  c[0] = c[4] = c[9] = L::NonRogue;
  CHECK(agreement(a, c) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(agreement(c, a) == agreement(a, c));
  CHECK_THROWS_AS(agreement(a, std::vector<L>(9, L::Rogue)), AlignmentError);
  CHECK_THROWS_AS(agreement(std::vector<L>{}, std::vector<L>{}), AlignmentError);

  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<TopicLabel> x, y;
    for (int i = 0; i < 30; ++i) {
      x.push_back(static_cast<TopicLabel>(rng.below(3)));
      y.push_back(static_cast<TopicLabel>(rng.below(3)));
    }
    CHECK(agreement(x, y) == agreement(y, x));
  }
}

TEST_CASE("mean pairwise agreement over shared items") {
  std::map<std::string, std::map<std::string, TopicLabel>> labels;
  labels["0"] = {{"a", TopicLabel::Relevant}, {"b", TopicLabel::Relevant}};
  labels["1"] = {{"a", TopicLabel::Irrelevant}, {"b", TopicLabel::Irrelevant}};
  labels["2"] = {{"a", TopicLabel::Irrelevant}};
  CHECK(mean_pairwise_agreement(labels) == 1.0);
  labels["1"]["b"] = TopicLabel::NeedsInvestigation;
  CHECK(mean_pairwise_agreement(labels) == 0.5);
  labels.erase("0");
  labels.erase("1");
  CHECK_FALSE(mean_pairwise_agreement(labels).has_value());
}

TEST_CASE("majority label ties resolve to NonRogue") {
  CHECK(majority_label({tweet("x", ClassLabel::Rogue, "a"), tweet("x", ClassLabel::NonRogue, "b")}) ==
        ClassLabel::NonRogue);
  CHECK(majority_label({tweet("x", ClassLabel::Rogue, "a"), tweet("x", ClassLabel::Rogue, "b"),
                        tweet("x", ClassLabel::NonRogue, "c")}) == ClassLabel::Rogue);
}

TEST_CASE("rogue_precision") {
  std::vector<std::string> ids;
  std::vector<TweetAnnotation> ann;
  for (int i = 0; i < 10; ++i) {
    ids.push_back("t" + std::to_string(i));
    ann.push_back(tweet(ids.back(), i < 9 ? ClassLabel::Rogue : ClassLabel::NonRogue));
  }
  CHECK(rogue_precision(ids, ann) == doctest::Approx(0.9).epsilon(1e-15));

  for (auto& a : ann) a.label = ClassLabel::NonRogue;
  CHECK(rogue_precision(ids, ann) == 0.0);
  for (auto& a : ann) a.label = ClassLabel::Rogue;
  CHECK(rogue_precision(ids, ann) == 1.0);

  ids.push_back("unseen-1");
  ids.push_back("unseen-2");
  try {
    rogue_precision(ids, ann);
    FAIL("expected CoverageError");
  } catch (const CoverageError& e) {
    CHECK(e.missing() == std::vector<std::string>{"unseen-1", "unseen-2"});
  }
}

TEST_CASE("rogue_precision on a 60-candidate fixture with planted labels") {
  // Candidates 7, 23 and 41 are planted NonRogue; two annotators agree on
  // every label except candidate 10, where a 1-1 split stays Rogue because
  // a third annotator breaks it.
  std::vector<std::string> ids;
  std::vector<TweetAnnotation> ann;
  for (int i = 0; i < 60; ++i) {
    ids.push_back("c" + std::to_string(i));
    const bool rogue = i != 7 && i != 23 && i != 41;
    const auto l = rogue ? ClassLabel::Rogue : ClassLabel::NonRogue;
    ann.push_back(tweet(ids.back(), l, "a"));
    ann.push_back(tweet(ids.back(), i == 10 ? ClassLabel::NonRogue : l, "b"));
    if (i == 10) ann.push_back(tweet(ids.back(), ClassLabel::Rogue, "c"));
  }
  CHECK(rogue_precision(ids, ann) == doctest::Approx(0.95).epsilon(1e-15));
}

TEST_CASE("topic consensus") {
  std::vector<TopicAnnotation> ann = {
      topic(0, TopicLabel::Relevant, "a"),   topic(0, TopicLabel::Relevant, "b"),
      topic(1, TopicLabel::Relevant, "a"),   topic(1, TopicLabel::Irrelevant, "b"),
      topic(2, TopicLabel::Irrelevant, "a"),
  };
  auto c = topic_consensus(ann, 3);
  CHECK(c == std::vector<TopicLabel>{TopicLabel::Relevant, TopicLabel::NeedsInvestigation,
                                     TopicLabel::Irrelevant});
  CHECK(relevant_topics(c) == std::set<std::size_t>{0});
  CHECK(topics_needing_review(c) == std::vector<std::size_t>{1});
  try {
    topic_consensus(ann, 5);
    FAIL("expected CoverageError");
  } catch (const CoverageError& e) {
    CHECK(e.missing() == std::vector<std::string>{"3", "4"});
  }
}

TEST_CASE("label_dataset trivial cases") {
  std::vector<TweetRecord> records(3);
  std::vector<DocTopicDist> dists;
  std::vector<TweetAnnotation> tweets;
  for (int i = 0; i < 3; ++i) {
    records[i].tweet_id = "r" + std::to_string(i);
    dists.push_back(dist(records[i].tweet_id, {0.9, 0.1}));
    tweets.push_back(tweet(records[i].tweet_id, ClassLabel::Rogue));
  }
  auto none = label_dataset(records, dists, {topic(0, TopicLabel::Irrelevant), topic(1, TopicLabel::Irrelevant)},
                            tweets);
  for (const auto& l : none) CHECK(l.label == ClassLabel::NonRogue);
  auto all = label_dataset(records, dists, {topic(0, TopicLabel::Relevant), topic(1, TopicLabel::Irrelevant)},
                           tweets);
  for (const auto& l : all) CHECK(l.label == ClassLabel::Rogue);
  CHECK_THROWS_AS(label_dataset(records, dists, {topic(0, TopicLabel::Relevant)}, tweets), CoverageError);
}

TEST_CASE("label_dataset on the hand-labelled 20-tweet fixture") {
  // Topics: 0 Relevant (unanimous), 1 Irrelevant, 2 split -> NeedsInvestigation.
  std::vector<TopicAnnotation> topics = {
      topic(0, TopicLabel::Relevant, "a"),   topic(0, TopicLabel::Relevant, "b"),
      topic(1, TopicLabel::Irrelevant, "a"), topic(1, TopicLabel::Irrelevant, "b"),
      topic(2, TopicLabel::Relevant, "a"),   topic(2, TopicLabel::Irrelevant, "b"),
  };
  struct Row {
    const char* id;
    std::vector<double> p;
    bool degenerate;
    std::vector<std::pair<const char*, ClassLabel>> votes;
    ClassLabel expected;
  };
  using C = ClassLabel;
  const std::vector<Row> rows = {
      {"t01", {0.8, 0.1, 0.1}, false, {{"a", C::Rogue}, {"b", C::Rogue}}, C::Rogue},
      {"t02", {0.6, 0.3, 0.1}, false, {{"a", C::Rogue}, {"b", C::Rogue}}, C::Rogue},
      {"t03", {0.5, 0.2, 0.3}, false, {{"a", C::Rogue}}, C::Rogue},
      {"t04", {0.9, 0.05, 0.05}, false, {{"a", C::Rogue}, {"b", C::Rogue}}, C::Rogue},
      {"t05", {0.4, 0.3, 0.3}, false, {{"b", C::Rogue}}, C::Rogue},
      {"t06", {0.7, 0.2, 0.1}, false, {{"a", C::Rogue}, {"b", C::NonRogue}}, C::NonRogue},
      {"t07", {0.7, 0.2, 0.1}, false, {{"a", C::NonRogue}, {"b", C::NonRogue}}, C::NonRogue},
      {"t08", {0.6, 0.2, 0.2}, false, {}, C::NonRogue},
      {"t09", {0.1, 0.8, 0.1}, false, {{"a", C::Rogue}}, C::NonRogue},
      {"t10", {0.2, 0.7, 0.1}, false, {}, C::NonRogue},
      {"t11", {0.3, 0.4, 0.3}, false, {}, C::NonRogue},
      {"t12", {0.1, 0.6, 0.3}, false, {}, C::NonRogue},
      {"t13", {0.2, 0.5, 0.3}, false, {}, C::NonRogue},
      {"t14", {0.0, 1.0, 0.0}, false, {}, C::NonRogue},
      {"t15", {0.1, 0.1, 0.8}, false, {{"a", C::Rogue}, {"b", C::Rogue}}, C::NonRogue},
      {"t16", {0.2, 0.2, 0.6}, false, {}, C::NonRogue},
      {"t17", {0.3, 0.3, 0.4}, false, {}, C::NonRogue},
      {"t18", {0.1, 0.4, 0.5}, false, {}, C::NonRogue},
      {"t19", {1.0 / 3, 1.0 / 3, 1.0 / 3}, true, {{"a", C::Rogue}}, C::NonRogue},
      {"t20", {0.5, 0.25, 0.25}, false, {{"a", C::Rogue}, {"b", C::NonRogue}, {"c", C::Rogue}}, C::Rogue},
  };
  std::vector<TweetRecord> records;
  std::vector<DocTopicDist> dists;
  std::vector<TweetAnnotation> tweets;
  std::vector<LabeledTweet> expected;
  for (const auto& r : rows) {
    TweetRecord rec;
    rec.tweet_id = r.id;
    records.push_back(rec);
    dists.push_back(dist(r.id, r.p, r.degenerate));
    for (const auto& [who, l] : r.votes) tweets.push_back(tweet(r.id, l, who));
    expected.push_back({r.id, r.expected});
  }
  auto labels = label_dataset(records, dists, topics, tweets);
  CHECK(labels == expected);
  CHECK(label_dataset(records, dists, topics, tweets) == labels);

  // Never Rogue outside a Relevant dominant topic.
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].label == ClassLabel::Rogue) CHECK(dists[i].dominant_topic == 0);
  }

  iopscan::testing::TempDir dir;
  write_labels_csv(dir / "labels.csv", labels);
  CHECK(read_labels_csv(dir / "labels.csv") == labels);
}

TEST_CASE("labels csv rejects bad rows") {
  iopscan::testing::TempDir dir;
  iopscan::testing::write_file(dir / "a.csv", "id,label\n1,Rogue\n");
  CHECK_THROWS_AS(read_labels_csv(dir / "a.csv"), DataError);
  iopscan::testing::write_file(dir / "b.csv", "tweet_id,label\n1,Maybe\n");
  CHECK_THROWS_AS(read_labels_csv(dir / "b.csv"), DataError);
}

TEST_CASE("annotation store: last write wins, history kept, replay identical") {
  iopscan::testing::TempDir dir;
  const auto log = dir / "annotations.jsonl";
  {
    AnnotationStore store(log, ticking_clock());
    store.annotate_topic(0, TopicLabel::Irrelevant, "a");
    store.annotate_topic(0, TopicLabel::Relevant, "a");
    store.annotate_topic(0, TopicLabel::Relevant, "b");
    store.annotate_tweet("99", ClassLabel::Rogue, "a");
    auto topics = store.topic_annotations();
    REQUIRE(topics.size() == 2);
    for (const auto& t : topics) CHECK(t.label == TopicLabel::Relevant);
    CHECK(store.history().size() == 4);
  }
  AnnotationStore reopened(log, ticking_clock());
  CHECK(reopened.history().size() == 4);
  auto topics = reopened.topic_annotations();
  REQUIRE(topics.size() == 2);
  CHECK(topics[0].label == TopicLabel::Relevant);
  CHECK(topics[0].timestamp == Timestamp{std::chrono::seconds{1'500'000'001}});
  REQUIRE(reopened.tweet_annotations().size() == 1);
  CHECK(reopened.tweet_annotations()[0].tweet_id == "99");
}

TEST_CASE("annotation store: nonce makes retries idempotent") {
  auto store = AnnotationStore::in_memory(ticking_clock());
  auto first = store.annotate_tweet("5", ClassLabel::Rogue, "a", "n1");
  auto retry = store.annotate_tweet("5", ClassLabel::Rogue, "a", "n1");
  CHECK_FALSE(first.duplicate);
  CHECK(retry.duplicate);
  CHECK(store.history().size() == 1);
  store.annotate_tweet("5", ClassLabel::Rogue, "a", "n2");
  store.annotate_tweet("5", ClassLabel::Rogue, "a");
  store.annotate_tweet("5", ClassLabel::Rogue, "a");
  CHECK(store.history().size() == 4);
}

TEST_CASE("annotation store: malformed log line reports its number") {
  iopscan::testing::TempDir dir;
  AnnotationEvent ok{ItemKind::Topic, "1", "Relevant", "a", Timestamp{std::chrono::seconds{5}}, std::nullopt};
  iopscan::testing::write_file(dir / "log.jsonl", serialize_event(ok) + "\n{not json\n");
  try {
    AnnotationStore store(dir / "log.jsonl");
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_event(R"({"kind":"topic","item_id":"x","label":"Relevant","annotator_id":"a","timestamp":"2015-01-01T00:00:00Z"})"),
                  DataError);
  CHECK_THROWS_AS(parse_event(R"({"kind":"tweet","item_id":"1","label":"Relevant","annotator_id":"a","timestamp":"2015-01-01T00:00:00Z"})"),
                  DataError);
}

TEST_CASE("annotation store: concurrent appends all land on disk") {
  iopscan::testing::TempDir dir;
  const auto log = dir / "log.jsonl";
  {
    AnnotationStore store(log);
    std::vector<std::thread> threads;
    for (int t = 0; t < 4; ++t) {
      threads.emplace_back([&store, t] {
        for (int i = 0; i < 50; ++i) {
          store.annotate_tweet(std::to_string(i), ClassLabel::Rogue, "ann" + std::to_string(t));
        }
      });
    }
    for (auto& th : threads) th.join();
    CHECK(store.tweet_annotations().size() == 200);
  }
  AnnotationStore reopened(log);
  CHECK(reopened.history().size() == 200);
  CHECK(reopened.tweet_annotations().size() == 200);
}
