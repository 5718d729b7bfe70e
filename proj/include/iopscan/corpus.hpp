#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "iopscan/timeutil.hpp"

namespace iopscan {

/// One ingested tweet: text, timestamps and the raw metadata fields behind
/// every extracted feature.
struct TweetRecord {
  std::string tweet_id;
  Timestamp created_at{};
  std::string text;
  bool retweeted_status_present = false;
  std::uint64_t retweet_count = 0;
  std::uint64_t favorite_count = 0;
  std::optional<std::string> in_reply_to_status_id;
  std::optional<bool> possibly_sensitive;
  std::uint64_t url_entity_count = 0;
  std::uint64_t hashtag_entity_count = 0;
  std::uint64_t symbol_entity_count = 0;
  std::string user_id;
  bool user_verified = false;
  std::uint64_t user_friends_count = 0;
  std::uint64_t user_followers_count = 0;
  std::uint64_t user_statuses_count = 0;
  std::uint64_t user_favourites_count = 0;
  Timestamp user_created_at{};
  std::set<std::string> matched_keywords;

  bool operator==(const TweetRecord&) const = default;
};

/// Lowercase drug names used to filter the stream.
class KeywordSet {
 public:
  /// Throws std::invalid_argument when empty or when an entry is not
  /// lowercase or carries surrounding whitespace.
  explicit KeywordSet(std::set<std::string> drug_names);

  static KeywordSet defaults();

  const std::set<std::string>& names() const noexcept { return names_; }
  bool contains(std::string_view name) const { return names_.count(std::string(name)) > 0; }

 private:
  std::set<std::string> names_;
};

enum class SchemaMode { Strict, Lenient };
enum class MatchMode { Token, Substring };

struct IngestReport {
  std::size_t lines_read = 0;
  std::size_t skipped_malformed = 0;
  std::size_t skipped_duplicate = 0;
};

/// Reads one tweet object per line. Blank lines are ignored.
///
/// Strict mode rejects the first malformed line with a SchemaError naming the
/// line and field. Lenient mode fills optional fields with defaults
/// (possibly_sensitive absent, entity/engagement counts 0, verified false),
/// skips unparseable lines and drops repeated tweet ids. Negative counts are
/// rejected in both modes.
std::vector<TweetRecord> ingest_jsonl(const std::filesystem::path& path, SchemaMode mode,
                                      IngestReport* report = nullptr);

/// Ingests several files concurrently; output preserves argument order and
/// per-file line order. Duplicate ids across files follow the mode rules.
std::vector<TweetRecord> ingest_files(const std::vector<std::filesystem::path>& paths,
                                      SchemaMode mode, IngestReport* report = nullptr);

/// Serializes to the same tweet-object layout ingest_jsonl reads, plus a
/// "matched_keywords" array. ingest(serialize(r)) == r.
std::string serialize_record(const TweetRecord& record);

void write_jsonl(const std::filesystem::path& path, const std::vector<TweetRecord>& records);

/// Keeps records whose lowercased text contains at least one keyword.
/// Token mode matches whole alphanumeric runs (so "#codeine" and "codeine,"
/// match but "codeinex" does not); substring mode matches anywhere.
/// matched_keywords is overwritten on every returned record.
std::vector<TweetRecord> keyword_filter(const std::vector<TweetRecord>& records,
                                        const KeywordSet& keywords,
                                        MatchMode mode = MatchMode::Token);

using StopwordSet = std::unordered_set<std::string>;

/// Loads one word per line; '#' starts a comment line.
StopwordSet load_stopwords(const std::filesystem::path& path);

/// The tokenizer contract: lowercase; drop http(s) URLs, @-mentions and a
/// leading "rt" marker; strip '#' from hashtags; split on punctuation; drop
/// stopwords. Order and duplicates are preserved.
std::vector<std::string> tokenize_text(std::string_view text, const StopwordSet& stopwords);

/// Sorted, frozen term list with index lookup.
class Vocabulary {
 public:
  Vocabulary() = default;
  /// Sorts and deduplicates.
  explicit Vocabulary(std::vector<std::string> terms);

  std::size_t size() const noexcept { return terms_.size(); }
  const std::string& term(std::uint32_t id) const { return terms_.at(id); }
  const std::vector<std::string>& terms() const noexcept { return terms_; }
  std::optional<std::uint32_t> find(std::string_view term) const;

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

struct TokenizedDoc {
  std::string tweet_id;
  std::vector<std::uint32_t> tokens;
};

/// Tokenizes against a frozen vocabulary; out-of-vocabulary tokens are
/// dropped.
TokenizedDoc tokenize(const TweetRecord& record, const StopwordSet& stopwords,
                      const Vocabulary& vocabulary);

struct TokenizedCorpus {
  Vocabulary vocabulary;
  std::vector<TokenizedDoc> docs;
};

/// Two passes: collects every token into a sorted vocabulary, then maps each
/// record onto it. Document order follows record order.
TokenizedCorpus tokenize_corpus(const std::vector<TweetRecord>& records,
                                const StopwordSet& stopwords);

/// Documents-by-terms count matrix in compressed row form.
struct DocTermStats {
  std::vector<std::string> vocabulary;
  std::size_t doc_count = 0;
  /// rows[d] lists (term index, count) sorted by term index.
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> rows;
  std::size_t nonzero_cells = 0;
  /// nonzero_cells / (doc_count * vocabulary.size()), in (0, 1].
  double sparsity = 0.0;
};

/// Every document counts as a row, including empty ones. Only terms that
/// occur in some document are kept in the vocabulary; indices are remapped
/// when the given vocabulary contains unused terms. Throws DegenerateError
/// when no document has a token.
DocTermStats build_doc_term(const std::vector<TokenizedDoc>& docs, const Vocabulary& vocabulary);

}  // namespace iopscan
