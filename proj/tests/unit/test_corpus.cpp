#include <doctest.h>

#include <algorithm>
#include <map>
#include <regex>

#include "iopscan/corpus.hpp"
#include "iopscan/errors.hpp"
#include "iopscan/random.hpp"
#include "test_util.hpp"

using namespace iopscan;
using iopscan::testing::TempDir;
using iopscan::testing::test_data;
using iopscan::testing::write_file;

namespace {

TweetRecord record_with_text(std::string id, std::string text) {
  TweetRecord r;
  r.tweet_id = std::move(id);
  r.text = std::move(text);
  r.user_id = "u";
  return r;
}

std::string minimal_line(const std::string& extra_top = "", const std::string& extra_user = "") {
  return R"({"id_str":"1","created_at":"2015-06-01T00:00:00Z","text":"hi")" + extra_top +
         R"(,"user":{"id_str":"9","created_at":"2012-01-01T00:00:00Z")" + extra_user + "}}";
}

}  // namespace

TEST_CASE("timestamps parse in both tweet formats") {
  auto classic = parse_timestamp("Mon Jun 01 12:30:00 +0000 2015");
  auto iso = parse_timestamp("2015-06-01T12:30:00Z");
  REQUIRE(classic);
  REQUIRE(iso);
  CHECK(*classic == *iso);
  CHECK(*parse_timestamp("2015-06-01T14:30:00+02:00") == *iso);
  CHECK(*parse_timestamp("2015-06-01T12:30:00.250Z") == *iso);
  CHECK(format_timestamp(*iso) == "2015-06-01T12:30:00Z");
  CHECK_FALSE(parse_timestamp("yesterday"));
  CHECK_FALSE(parse_timestamp("2015-02-30T00:00:00Z"));
}

TEST_CASE("keyword set validation") {
  CHECK(KeywordSet::defaults().names().size() == 7);
  CHECK(KeywordSet::defaults().contains("oxycontin"));
  CHECK_THROWS_AS(KeywordSet({}), std::invalid_argument);
  CHECK_THROWS_AS(KeywordSet({"Codeine"}), std::invalid_argument);
  CHECK_THROWS_AS(KeywordSet({" codeine"}), std::invalid_argument);
}

TEST_CASE("ingest: empty file gives no records") {
  TempDir dir;
  write_file(dir / "empty.jsonl", "");
  CHECK(ingest_jsonl(dir / "empty.jsonl", SchemaMode::Strict).empty());
}

TEST_CASE("ingest: unreadable file is an I/O error") {
  CHECK_THROWS_AS(ingest_jsonl("/nonexistent/file.jsonl", SchemaMode::Lenient), IoError);
}

TEST_CASE("ingest: negative count is a schema error in both modes") {
  TempDir dir;
  write_file(dir / "neg.jsonl", minimal_line(R"(,"retweet_count":-1)") + "\n");
  for (auto mode : {SchemaMode::Strict, SchemaMode::Lenient}) {
    if (mode == SchemaMode::Strict) {
      try {
        ingest_jsonl(dir / "neg.jsonl", mode);
        FAIL("expected a schema error");
      } catch (const SchemaError& e) {
        CHECK(e.line() == 1);
        CHECK(e.field() == "retweet_count");
      }
    } else {
      IngestReport report;
      CHECK(ingest_jsonl(dir / "neg.jsonl", mode, &report).empty());
      CHECK(report.skipped_malformed == 1);
    }
  }
}

TEST_CASE("ingest: three-record fixture matches field for field") {
  auto records = ingest_jsonl(test_data("three_tweets.jsonl"), SchemaMode::Strict);
  REQUIRE(records.size() == 3);

  TweetRecord a;
  a.tweet_id = "620001";
  a.created_at = make_timestamp(2015, 6, 1, 12, 30, 0);
  a.text = "RT @bob Buy CODEINE online http://x.co";
  a.retweeted_status_present = true;
  a.retweet_count = 3;
  a.favorite_count = 0;
  a.possibly_sensitive = false;
  a.url_entity_count = 1;
  a.user_id = "77";
  a.user_verified = false;
  a.user_friends_count = 12;
  a.user_followers_count = 28;
  a.user_statuses_count = 166995;
  a.user_favourites_count = 0;
  a.user_created_at = make_timestamp(2014, 3, 4, 9, 0, 0);
  CHECK(records[0] == a);

  TweetRecord b;
  b.tweet_id = "620002";
  b.created_at = make_timestamp(2015, 6, 2, 8, 15, 0);
  b.text = "aspirin only, thanks doc";
  b.favorite_count = 5;
  b.in_reply_to_status_id = "619500";
  b.possibly_sensitive = true;
  b.hashtag_entity_count = 2;
  b.symbol_entity_count = 1;
  b.user_id = "88";
  b.user_verified = true;
  b.user_friends_count = 1123;
  b.user_followers_count = 2666;
  b.user_statuses_count = 38823;
  b.user_favourites_count = 5436;
  b.user_created_at = make_timestamp(2010, 2, 11, 17, 45, 0);
  CHECK(records[1] == b);

  TweetRecord c;
  c.tweet_id = "620003";
  c.created_at = make_timestamp(2015, 6, 3, 19, 0, 0);
  c.text = "Long day at the clinic";
  c.retweet_count = 409;
  c.favorite_count = 386;
  c.user_id = "99";
  c.user_friends_count = 0;
  c.user_followers_count = 1;
  c.user_statuses_count = 2;
  c.user_created_at = make_timestamp(2013, 12, 31, 23, 59, 59);
  CHECK(records[2] == c);
}

TEST_CASE("ingest: strict mode names the missing field, lenient fills defaults") {
  TempDir dir;
  write_file(dir / "min.jsonl", "\n" + minimal_line() + "\n");
  try {
    ingest_jsonl(dir / "min.jsonl", SchemaMode::Strict);
    FAIL("expected a schema error");
  } catch (const SchemaError& e) {
    CHECK(e.line() == 2);
    CHECK(e.field() == "retweet_count");
  }
  auto records = ingest_jsonl(dir / "min.jsonl", SchemaMode::Lenient);
  REQUIRE(records.size() == 1);
  CHECK(records[0].retweet_count == 0);
  CHECK(records[0].url_entity_count == 0);
  CHECK_FALSE(records[0].possibly_sensitive.has_value());
  CHECK_FALSE(records[0].user_verified);
}

TEST_CASE("ingest: malformed JSON and duplicate ids") {
  TempDir dir;
  auto good = test_data("three_tweets.jsonl");
  std::string text = iopscan::testing::read_file(good);
  write_file(dir / "mixed.jsonl", text + "{not json\n" + text.substr(0, text.find('\n') + 1));
  CHECK_THROWS_AS(ingest_jsonl(dir / "mixed.jsonl", SchemaMode::Strict), SchemaError);
  IngestReport report;
  auto records = ingest_jsonl(dir / "mixed.jsonl", SchemaMode::Lenient, &report);
  CHECK(records.size() == 3);
  CHECK(report.skipped_malformed == 1);
  CHECK(report.skipped_duplicate == 1);
}

TEST_CASE("ingest: multiple files keep argument order") {
  TempDir dir;
  std::string text = iopscan::testing::read_file(test_data("three_tweets.jsonl"));
  auto first_nl = text.find('\n');
  write_file(dir / "b.jsonl", text.substr(first_nl + 1));
  write_file(dir / "a.jsonl", text.substr(0, first_nl + 1));
  auto records = ingest_files({dir / "b.jsonl", dir / "a.jsonl"}, SchemaMode::Strict);
  REQUIRE(records.size() == 3);
  CHECK(records[0].tweet_id == "620002");
  CHECK(records[1].tweet_id == "620003");
  CHECK(records[2].tweet_id == "620001");
}

TEST_CASE("ingest -> serialize -> ingest preserves every field") {
  Rng rng(11);
  std::vector<TweetRecord> records;
  for (int i = 0; i < 200; ++i) {
    TweetRecord r;
    r.tweet_id = std::to_string(1000000 + i);
    r.created_at = make_timestamp(2015, 1 + rng.below(12), 1 + rng.below(28), rng.below(24),
                                  rng.below(60), rng.below(60));
    r.text = i % 7 == 0 ? "" : "text \"quoted\" \\ \xF0\x9F\x92\x8A #codeine " + std::to_string(i);
    r.retweeted_status_present = rng.below(2);
    r.retweet_count = rng.below(1u << 20);
    r.favorite_count = rng.below(100);
    if (rng.below(2)) r.in_reply_to_status_id = std::to_string(rng.below(1000000));
    if (auto s = rng.below(3); s < 2) r.possibly_sensitive = s == 1;
    r.url_entity_count = rng.below(3);
    r.hashtag_entity_count = rng.below(4);
    r.symbol_entity_count = rng.below(2);
    r.user_id = "user" + std::to_string(rng.below(50));
    r.user_verified = rng.below(2);
    r.user_friends_count = rng.below(5000);
    r.user_followers_count = rng.below(50000);
    r.user_statuses_count = rng.below(300000);
    r.user_favourites_count = rng.below(9000);
    r.user_created_at = make_timestamp(2007 + rng.below(9), 1 + rng.below(12), 1 + rng.below(28));
    if (rng.below(2)) r.matched_keywords = {"codeine", "vicodin"};
    records.push_back(r);
  }
  TempDir dir;
  write_jsonl(dir / "rt.jsonl", records);
  CHECK(ingest_jsonl(dir / "rt.jsonl", SchemaMode::Strict) == records);
}

TEST_CASE("keyword_filter: direct examples") {
  auto kw = KeywordSet::defaults();
  auto kept = keyword_filter({record_with_text("1", "I love codeine dreams"),
                              record_with_text("2", "aspirin only")},
                             kw);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].tweet_id == "1");
  CHECK(kept[0].matched_keywords == std::set<std::string>{"codeine"});
}

TEST_CASE("keyword_filter: 100-record fixture keeps the 37 scripted hits") {
  auto records = ingest_jsonl(test_data("keyword_fixture.jsonl"), SchemaMode::Strict);
  REQUIRE(records.size() == 100);
  auto kept = keyword_filter(records, KeywordSet::defaults());
  CHECK(kept.size() == 37);

  // Substring mode also catches the decoy words ("codeines", ...).
  auto loose = keyword_filter(records, KeywordSet::defaults(), MatchMode::Substring);
  CHECK(loose.size() > kept.size());
}

TEST_CASE("keyword_filter is idempotent") {
  auto records = ingest_jsonl(test_data("keyword_fixture.jsonl"), SchemaMode::Strict);
  for (auto mode : {MatchMode::Token, MatchMode::Substring}) {
    auto once = keyword_filter(records, KeywordSet::defaults(), mode);
    CHECK(keyword_filter(once, KeywordSet::defaults(), mode) == once);
  }
}

TEST_CASE("tokenize_text: contract examples") {
  auto stop = load_stopwords(iopscan::testing::stopword_file());
  CHECK(stop.size() > 100);
  CHECK(tokenize_text("RT @bob Buy CODEINE online http://x.co", stop) ==
        std::vector<std::string>{"buy", "codeine", "online"});
  CHECK(tokenize_text("", stop).empty());
  CHECK(tokenize_text("#codeine #codeine", stop) == std::vector<std::string>{"codeine", "codeine"});
  CHECK(tokenize_text("rt: percocet, (https://a.b/c) ok!!", stop) ==
        std::vector<std::string>{"percocet", "ok"});
  // "rt" is only a marker at the start.
  CHECK(tokenize_text("art rt", {}) == std::vector<std::string>{"art", "rt"});
  CHECK(tokenize_text("hi@someone_else there", {}) == std::vector<std::string>{"hi", "there"});
}

TEST_CASE("tokenize_text never emits whitespace, mentions or URL schemes") {
  const std::string alphabet = "ab @#:/.,!-_ \t\nRThtps\xC3\xA9";
  Rng rng(5);
  for (int trial = 0; trial < 2000; ++trial) {
    std::string text;
    const auto len = rng.below(40);
    for (std::size_t i = 0; i < len; ++i) text += alphabet[rng.below(alphabet.size())];
    if (rng.below(3) == 0) text += " http://x.y/z";
    for (const auto& tok : tokenize_text(text, {})) {
      CHECK_FALSE(tok.empty());
      CHECK(tok.find_first_of(" \t\n@") == std::string::npos);
      CHECK(tok.find("://") == std::string::npos);
      CHECK(tok.find("http:") == std::string::npos);
    }
  }
}

TEST_CASE("tokenize against a frozen vocabulary drops unknown words") {
  auto rec = record_with_text("1", "buy codeine now");
  Vocabulary vocab({"codeine", "buy"});
  auto doc = tokenize(rec, {}, vocab);
  CHECK(doc.tokens == std::vector<std::uint32_t>{0, 1});
}

TEST_CASE("build_doc_term: definitional examples") {
  Vocabulary vocab({"a", "b", "c", "d"});
  std::vector<TokenizedDoc> four_terms = {{"1", {0, 3}}, {"2", {1}}, {"3", {}}};
  auto s4 = build_doc_term(four_terms, vocab);
  CHECK(s4.vocabulary.size() == 3);  // "c" unused
  CHECK(s4.sparsity == doctest::Approx(3.0 / 9.0));

  std::vector<TokenizedDoc> spec_case = {{"1", {0, 1}}, {"2", {2}}, {"3", {3}}};
  // 3 docs over 4 terms with 4 nonzero cells.
  CHECK(build_doc_term(spec_case, vocab).sparsity == doctest::Approx(4.0 / 12.0));
  std::vector<TokenizedDoc> quarter = {{"1", {0}}, {"2", {1, 2}}, {"3", {3}}, {"4", {}}};
  CHECK(build_doc_term(quarter, vocab).sparsity == doctest::Approx(4.0 / 16.0));

  Vocabulary ab({"a", "b"});
  auto single = build_doc_term({{"x", {0, 0, 1}}}, ab);
  CHECK(single.rows[0] == std::vector<std::pair<std::uint32_t, std::uint32_t>>{{0, 2}, {1, 1}});
  CHECK(single.sparsity == 1.0);

  CHECK_THROWS_AS(build_doc_term({{"x", {}}, {"y", {}}}, ab), DegenerateError);
}

TEST_CASE("build_doc_term: 50-doc corpus agrees with a dense recount") {
  Rng rng(50);
  std::vector<std::string> words;
  for (int i = 0; i < 30; ++i) words.push_back("w" + std::to_string(i));
  Vocabulary vocab(words);
  std::vector<TokenizedDoc> docs;
  for (int d = 0; d < 50; ++d) {
    TokenizedDoc doc{"d" + std::to_string(d), {}};
    const auto len = rng.below(9);
    for (std::size_t i = 0; i < len; ++i) doc.tokens.push_back(static_cast<std::uint32_t>(rng.below(30)));
    docs.push_back(doc);
  }
  auto stats = build_doc_term(docs, vocab);

  // Dense oracle over the original vocabulary.
  std::vector<std::vector<int>> dense(50, std::vector<int>(30, 0));
  for (int d = 0; d < 50; ++d) {
    for (auto t : docs[d].tokens) ++dense[d][t];
  }
  int nnz = 0, used_terms = 0;
  for (int w = 0; w < 30; ++w) {
    bool used = false;
    for (int d = 0; d < 50; ++d) {
      nnz += dense[d][w] > 0;
      used |= dense[d][w] > 0;
    }
    used_terms += used;
  }
  CHECK(stats.nonzero_cells == static_cast<std::size_t>(nnz));
  CHECK(stats.vocabulary.size() == static_cast<std::size_t>(used_terms));
  CHECK(stats.sparsity == doctest::Approx(static_cast<double>(nnz) / (50.0 * used_terms)).epsilon(1e-15));
  for (int d = 0; d < 50; ++d) {
    std::uint32_t row_sum = 0;
    for (auto [t, n] : stats.rows[d]) row_sum += n;
    CHECK(row_sum == docs[d].tokens.size());
  }
}

TEST_CASE("sparsity is 1 exactly when every document holds every term") {
  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t w = 1 + rng.below(4);
    std::vector<std::string> terms;
    for (std::size_t i = 0; i < w; ++i) terms.push_back(std::string(1, static_cast<char>('a' + i)));
    Vocabulary vocab(terms);
    std::vector<TokenizedDoc> docs;
    const std::size_t n = 1 + rng.below(4);
    for (std::size_t d = 0; d < n; ++d) {
      TokenizedDoc doc{std::to_string(d), {}};
      for (std::size_t i = 0; i < 1 + rng.below(6); ++i) {
        doc.tokens.push_back(static_cast<std::uint32_t>(rng.below(w)));
      }
      docs.push_back(doc);
    }
    auto stats = build_doc_term(docs, vocab);
    CHECK(stats.sparsity > 0.0);
    CHECK(stats.sparsity <= 1.0);
    bool full = true;
    for (const auto& row : stats.rows) full &= row.size() == stats.vocabulary.size();
    CHECK((stats.sparsity == 1.0) == full);
  }
}

TEST_CASE("tokenize_corpus builds a sorted vocabulary") {
  auto stop = load_stopwords(iopscan::testing::stopword_file());
  auto tc = tokenize_corpus({record_with_text("1", "Buy codeine online"),
                             record_with_text("2", "codeine and lean")},
                            stop);
  CHECK(tc.vocabulary.terms() == std::vector<std::string>{"buy", "codeine", "lean", "online"});
  CHECK(tc.docs[0].tokens == std::vector<std::uint32_t>{0, 1, 3});
  CHECK(tc.docs[1].tokens == std::vector<std::uint32_t>{1, 2});
}
