#include "iopscan/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <future>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "iopscan/errors.hpp"

namespace iopscan {

using nlohmann::json;

namespace {

bool is_word_byte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Alphanumeric runs of already-lowercased text.
std::vector<std::string_view> word_runs(std::string_view s) {
  std::vector<std::string_view> runs;
  std::size_t i = 0;
  while (i < s.size()) {
    if (!is_word_byte(static_cast<unsigned char>(s[i]))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < s.size() && is_word_byte(static_cast<unsigned char>(s[i]))) ++i;
    runs.push_back(s.substr(start, i - start));
  }
  return runs;
}

struct LineParser {
  std::size_t line;
  SchemaMode mode;

  [[noreturn]] void fail(const std::string& field, const std::string& what) const {
    throw SchemaError(line, field, what);
  }

  const json* find(const json& obj, const std::string& key) const {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return nullptr;
    return &*it;
  }

  std::string required_string(const json& obj, const std::string& key, const std::string& path,
                              const char* numeric_fallback = nullptr) const {
    if (const json* v = find(obj, key)) {
      if (!v->is_string()) fail(path, "expected a string");
      if (v->get_ref<const std::string&>().empty()) fail(path, "must be nonempty");
      return v->get<std::string>();
    }
    if (numeric_fallback && mode == SchemaMode::Lenient) {
      if (const json* v = find(obj, numeric_fallback)) {
        if (v->is_number_unsigned()) return std::to_string(v->get<std::uint64_t>());
      }
    }
    fail(path, "missing required field");
  }

  Timestamp required_time(const json& obj, const std::string& key, const std::string& path) const {
    std::string text = required_string(obj, key, path);
    auto ts = parse_timestamp(text);
    if (!ts) fail(path, "unrecognized timestamp '" + text + "'");
    return *ts;
  }

  std::uint64_t count(const json& obj, const std::string& key, const std::string& path) const {
    const json* v = find(obj, key);
    if (!v) {
      if (mode == SchemaMode::Lenient) return 0;
      fail(path, "missing required field");
    }
    if (v->is_number_integer() && !v->is_number_unsigned()) fail(path, "negative count");
    if (!v->is_number_unsigned()) fail(path, "expected a nonnegative integer");
    return v->get<std::uint64_t>();
  }

  bool flag(const json& obj, const std::string& key, const std::string& path) const {
    const json* v = find(obj, key);
    if (!v) {
      if (mode == SchemaMode::Lenient) return false;
      fail(path, "missing required field");
    }
    if (!v->is_boolean()) fail(path, "expected a boolean");
    return v->get<bool>();
  }

  std::uint64_t entity_count(const json* entities, const std::string& key) const {
    const std::string path = "entities." + key;
    const json* v = entities ? find(*entities, key) : nullptr;
    if (!v) {
      if (mode == SchemaMode::Lenient) return 0;
      fail(path, "missing required field");
    }
    if (!v->is_array()) fail(path, "expected an array");
    return v->size();
  }

  TweetRecord parse(const json& obj) const {
    if (!obj.is_object()) fail("<root>", "expected a JSON object");
    TweetRecord r;
    r.tweet_id = required_string(obj, "id_str", "id_str", "id");
    r.created_at = required_time(obj, "created_at", "created_at");
    if (const json* t = find(obj, "text"); t && t->is_string()) {
      r.text = t->get<std::string>();
    } else if (const json* ft = find(obj, "full_text"); ft && ft->is_string() &&
                                                         mode == SchemaMode::Lenient) {
      r.text = ft->get<std::string>();
    } else {
      fail("text", t ? "expected a string" : "missing required field");
    }
    r.retweeted_status_present = find(obj, "retweeted_status") != nullptr;
    r.retweet_count = count(obj, "retweet_count", "retweet_count");
    r.favorite_count = count(obj, "favorite_count", "favorite_count");

    const json* reply = find(obj, "in_reply_to_status_id_str");
    if (!reply) reply = find(obj, "in_reply_to_status_id");
    if (reply) {
      if (reply->is_string()) {
        r.in_reply_to_status_id = reply->get<std::string>();
      } else if (reply->is_number_unsigned()) {
        r.in_reply_to_status_id = std::to_string(reply->get<std::uint64_t>());
      } else {
        fail("in_reply_to_status_id", "expected a string or integer id");
      }
    }
    if (const json* ps = find(obj, "possibly_sensitive")) {
      if (!ps->is_boolean()) fail("possibly_sensitive", "expected a boolean");
      r.possibly_sensitive = ps->get<bool>();
    }

    const json* entities = find(obj, "entities");
    if (entities && !entities->is_object()) fail("entities", "expected an object");
    r.url_entity_count = entity_count(entities, "urls");
    r.hashtag_entity_count = entity_count(entities, "hashtags");
    r.symbol_entity_count = entity_count(entities, "symbols");

    const json* user = find(obj, "user");
    if (!user) fail("user", "missing required field");
    if (!user->is_object()) fail("user", "expected an object");
    r.user_id = required_string(*user, "id_str", "user.id_str", "id");
    r.user_verified = flag(*user, "verified", "user.verified");
    r.user_friends_count = count(*user, "friends_count", "user.friends_count");
    r.user_followers_count = count(*user, "followers_count", "user.followers_count");
    r.user_statuses_count = count(*user, "statuses_count", "user.statuses_count");
    r.user_favourites_count = count(*user, "favourites_count", "user.favourites_count");
    r.user_created_at = required_time(*user, "created_at", "user.created_at");

    if (const json* kw = find(obj, "matched_keywords")) {
      if (!kw->is_array()) fail("matched_keywords", "expected an array");
      for (const auto& k : *kw) {
        if (!k.is_string()) fail("matched_keywords", "expected strings");
        std::string s = k.get<std::string>();
        if (s != ascii_lower(s)) fail("matched_keywords", "keywords must be lowercase");
        r.matched_keywords.insert(std::move(s));
      }
    }
    return r;
  }
};

struct FileRecords {
  std::vector<TweetRecord> records;
  std::vector<std::size_t> lines;
  IngestReport report;
};

FileRecords read_file(const std::filesystem::path& path, SchemaMode mode) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  FileRecords out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (std::all_of(line.begin(), line.end(),
                    [](unsigned char c) { return std::isspace(c); })) {
      continue;
    }
    ++out.report.lines_read;
    LineParser parser{line_no, mode};
    try {
      json obj = json::parse(line);
      out.records.push_back(parser.parse(obj));
      out.lines.push_back(line_no);
    } catch (const json::parse_error& e) {
      if (mode == SchemaMode::Strict) throw SchemaError(line_no, "<root>", "invalid JSON", path.string());
      ++out.report.skipped_malformed;
    } catch (const SchemaError& e) {
      if (mode == SchemaMode::Strict) throw e.in_file(path.string());
      ++out.report.skipped_malformed;
    }
  }
  if (in.bad()) throw IoError("error reading '" + path.string() + "'");
  return out;
}

}  // namespace

KeywordSet::KeywordSet(std::set<std::string> drug_names) : names_(std::move(drug_names)) {
  if (names_.empty()) throw std::invalid_argument("keyword set must be nonempty");
  for (const auto& n : names_) {
    if (n.empty() || n != ascii_lower(n) ||
        std::isspace(static_cast<unsigned char>(n.front())) ||
        std::isspace(static_cast<unsigned char>(n.back()))) {
      throw std::invalid_argument("keyword '" + n +
                                  "' must be nonempty, lowercase and trimmed");
    }
  }
}

KeywordSet KeywordSet::defaults() {
  return KeywordSet({"percocet", "codeine", "oxycodone", "oxycontin", "hydrocodone", "vicodin",
                     "fentanyl"});
}

std::vector<TweetRecord> ingest_files(const std::vector<std::filesystem::path>& paths,
                                      SchemaMode mode, IngestReport* report) {
  std::vector<std::future<FileRecords>> jobs;
  jobs.reserve(paths.size());
  for (const auto& p : paths) {
    jobs.push_back(std::async(std::launch::async, read_file, p, mode));
  }
  std::vector<TweetRecord> merged;
  std::unordered_set<std::string> seen;
  IngestReport total;
  for (std::size_t f = 0; f < jobs.size(); ++f) {
    FileRecords part = jobs[f].get();
    total.lines_read += part.report.lines_read;
    total.skipped_malformed += part.report.skipped_malformed;
    for (std::size_t i = 0; i < part.records.size(); ++i) {
      auto& rec = part.records[i];
      if (!seen.insert(rec.tweet_id).second) {
        if (mode == SchemaMode::Strict) {
          throw SchemaError(part.lines[i], "id_str",
                            "duplicate tweet id '" + rec.tweet_id + "'", paths[f].string());
        }
        ++total.skipped_duplicate;
        continue;
      }
      merged.push_back(std::move(rec));
    }
  }
  if (report) *report = total;
  return merged;
}

std::vector<TweetRecord> ingest_jsonl(const std::filesystem::path& path, SchemaMode mode,
                                      IngestReport* report) {
  return ingest_files({path}, mode, report);
}

std::string serialize_record(const TweetRecord& r) {
  auto entity_array = [](std::uint64_t n) {
    json a = json::array();
    for (std::uint64_t i = 0; i < n; ++i) a.push_back(json::object());
    return a;
  };
  json obj;
  obj["id_str"] = r.tweet_id;
  obj["created_at"] = format_timestamp(r.created_at);
  obj["text"] = r.text;
  if (r.retweeted_status_present) obj["retweeted_status"] = json::object();
  obj["retweet_count"] = r.retweet_count;
  obj["favorite_count"] = r.favorite_count;
  obj["in_reply_to_status_id_str"] =
      r.in_reply_to_status_id ? json(*r.in_reply_to_status_id) : json(nullptr);
  if (r.possibly_sensitive) obj["possibly_sensitive"] = *r.possibly_sensitive;
  obj["entities"] = {{"urls", entity_array(r.url_entity_count)},
                     {"hashtags", entity_array(r.hashtag_entity_count)},
                     {"symbols", entity_array(r.symbol_entity_count)}};
  obj["user"] = {{"id_str", r.user_id},
                 {"verified", r.user_verified},
                 {"friends_count", r.user_friends_count},
                 {"followers_count", r.user_followers_count},
                 {"statuses_count", r.user_statuses_count},
                 {"favourites_count", r.user_favourites_count},
                 {"created_at", format_timestamp(r.user_created_at)}};
  obj["matched_keywords"] = r.matched_keywords;
  return obj.dump();
}

void write_jsonl(const std::filesystem::path& path, const std::vector<TweetRecord>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  for (const auto& r : records) out << serialize_record(r) << '\n';
  if (!out) throw IoError("error writing '" + path.string() + "'");
}

std::vector<TweetRecord> keyword_filter(const std::vector<TweetRecord>& records,
                                        const KeywordSet& keywords, MatchMode mode) {
  std::vector<TweetRecord> kept;
  for (const auto& r : records) {
    const std::string lower = ascii_lower(r.text);
    std::set<std::string> matched;
    if (mode == MatchMode::Token) {
      for (auto run : word_runs(lower)) {
        if (keywords.contains(run)) matched.emplace(run);
      }
    } else {
      for (const auto& k : keywords.names()) {
        if (lower.find(k) != std::string::npos) matched.insert(k);
      }
    }
    if (matched.empty()) continue;
    TweetRecord copy = r;
    copy.matched_keywords = std::move(matched);
    kept.push_back(std::move(copy));
  }
  return kept;
}

StopwordSet load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open stopword list '" + path.string() + "'");
  StopwordSet words;
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto last = line.find_last_not_of(" \t\r");
    words.insert(ascii_lower(line.substr(first, last - first + 1)));
  }
  return words;
}

std::vector<std::string> tokenize_text(std::string_view text, const StopwordSet& stopwords) {
  const std::string lower = ascii_lower(text);
  std::vector<std::string> tokens;
  std::size_t pos = 0;
  bool first_chunk = true;
  while (pos < lower.size()) {
    while (pos < lower.size() && std::isspace(static_cast<unsigned char>(lower[pos]))) ++pos;
    if (pos >= lower.size()) break;
    std::size_t end = pos;
    while (end < lower.size() && !std::isspace(static_cast<unsigned char>(lower[end]))) ++end;
    std::string_view chunk(lower.data() + pos, end - pos);
    pos = end;
    const bool leading = first_chunk;
    first_chunk = false;

    // A URL runs to the end of its whitespace-delimited chunk.
    auto url = std::min(chunk.find("http://"), chunk.find("https://"));
    if (url != std::string_view::npos) chunk = chunk.substr(0, url);
    if (leading && (chunk == "rt" || chunk == "rt:")) continue;

    std::size_t i = 0;
    while (i < chunk.size()) {
      auto c = static_cast<unsigned char>(chunk[i]);
      if (c == '@') {
        ++i;
        while (i < chunk.size() && (is_word_byte(static_cast<unsigned char>(chunk[i])) ||
                                    chunk[i] == '_')) {
          ++i;
        }
        continue;
      }
      if (!is_word_byte(c)) {
        ++i;
        continue;
      }
      std::size_t start = i;
      while (i < chunk.size() && is_word_byte(static_cast<unsigned char>(chunk[i]))) ++i;
      std::string word(chunk.substr(start, i - start));
      if (!stopwords.count(word)) tokens.push_back(std::move(word));
    }
  }
  return tokens;
}

Vocabulary::Vocabulary(std::vector<std::string> terms) : terms_(std::move(terms)) {
  std::sort(terms_.begin(), terms_.end());
  terms_.erase(std::unique(terms_.begin(), terms_.end()), terms_.end());
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    index_.emplace(terms_[i], static_cast<std::uint32_t>(i));
  }
}

std::optional<std::uint32_t> Vocabulary::find(std::string_view term) const {
  auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

TokenizedDoc tokenize(const TweetRecord& record, const StopwordSet& stopwords,
                      const Vocabulary& vocabulary) {
  TokenizedDoc doc{record.tweet_id, {}};
  for (const auto& tok : tokenize_text(record.text, stopwords)) {
    if (auto id = vocabulary.find(tok)) doc.tokens.push_back(*id);
  }
  return doc;
}

TokenizedCorpus tokenize_corpus(const std::vector<TweetRecord>& records,
                                const StopwordSet& stopwords) {
  std::vector<std::vector<std::string>> words;
  words.reserve(records.size());
  std::vector<std::string> all;
  for (const auto& r : records) {
    words.push_back(tokenize_text(r.text, stopwords));
    all.insert(all.end(), words.back().begin(), words.back().end());
  }
  TokenizedCorpus corpus{Vocabulary(std::move(all)), {}};
  corpus.docs.reserve(records.size());
  for (std::size_t d = 0; d < records.size(); ++d) {
    TokenizedDoc doc{records[d].tweet_id, {}};
    doc.tokens.reserve(words[d].size());
    for (const auto& w : words[d]) doc.tokens.push_back(*corpus.vocabulary.find(w));
    corpus.docs.push_back(std::move(doc));
  }
  return corpus;
}

DocTermStats build_doc_term(const std::vector<TokenizedDoc>& docs, const Vocabulary& vocabulary) {
  std::vector<std::map<std::uint32_t, std::uint32_t>> counts(docs.size());
  std::vector<bool> used(vocabulary.size(), false);
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (auto t : docs[d].tokens) {
      if (t >= vocabulary.size()) {
        throw std::out_of_range("token index outside vocabulary in doc '" + docs[d].tweet_id + "'");
      }
      ++counts[d][t];
      used[t] = true;
    }
  }
  std::vector<std::uint32_t> remap(vocabulary.size(), 0);
  DocTermStats stats;
  for (std::uint32_t t = 0; t < vocabulary.size(); ++t) {
    if (!used[t]) continue;
    remap[t] = static_cast<std::uint32_t>(stats.vocabulary.size());
    stats.vocabulary.push_back(vocabulary.term(t));
  }
  if (stats.vocabulary.empty()) throw DegenerateError("every document is empty after tokenization");
  stats.doc_count = docs.size();
  stats.rows.resize(docs.size());
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (auto [t, n] : counts[d]) stats.rows[d].emplace_back(remap[t], n);
    stats.nonzero_cells += counts[d].size();
  }
  stats.sparsity = static_cast<double>(stats.nonzero_cells) /
                   (static_cast<double>(stats.doc_count) * static_cast<double>(stats.vocabulary.size()));
  return stats;
}

}  // namespace iopscan
