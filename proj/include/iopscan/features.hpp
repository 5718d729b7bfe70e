#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "iopscan/corpus.hpp"
#include "iopscan/labels.hpp"
#include "iopscan/timeutil.hpp"

namespace iopscan {

inline constexpr std::size_t kFeatureCount = 13;

/// Column order of every feature table and export.
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "retweeted_status",    "retweet_count",       "favorite_count",
    "in_reply_status_id",  "possibly_sensitive",  "entities_urls",
    "entities_symbols",    "entities_hashtags",   "user_verified",
    "user_friends_count",  "user_follower_count", "user_statuses_count",
    "user_favorites_count"};

enum class FeatureIndex : std::size_t {
  RetweetedStatus,
  RetweetCount,
  FavoriteCount,
  InReplyStatusId,
  PossiblySensitive,
  EntitiesUrls,
  EntitiesSymbols,
  EntitiesHashtags,
  UserVerified,
  UserFriendsCount,
  UserFollowerCount,
  UserStatusesCount,
  UserFavoritesCount,
};

/// Behavioural grouping used in reports.
enum class FeatureGroup { UserEngagement, TweetBased, UserNetwork, UserProfile };

FeatureGroup feature_group(FeatureIndex f);
std::string_view to_string(FeatureGroup g);

struct FeatureVector {
  std::string tweet_id;
  std::array<double, kFeatureCount> values{};
  std::optional<ClassLabel> label;

  double operator[](FeatureIndex f) const { return values[static_cast<std::size_t>(f)]; }
  double& operator[](FeatureIndex f) { return values[static_cast<std::size_t>(f)]; }
  bool operator==(const FeatureVector&) const = default;
};

/// Presence maps entity arrays to {0,1}; Count keeps the array length.
enum class EntityMode { Presence, Count };

FeatureVector extract_features(const TweetRecord& record,
                               EntityMode entity_mode = EntityMode::Presence);

struct GroupSummary {
  std::string drug;
  std::string feature;
  double rogue_mean = 0.0;
  double nonrogue_mean = 0.0;
  std::size_t rogue_n = 0;
  std::size_t nonrogue_n = 0;
};

/// Per-feature class means, in feature order. Throws DegenerateError when a
/// class is empty; unlabeled vectors are ignored.
std::vector<GroupSummary> group_means(const std::vector<FeatureVector>& vectors,
                                      const std::string& drug);

struct TTestResult {
  std::string feature;
  double t_statistic = 0.0;
  double degrees_of_freedom = 0.0;
  double p_value = 1.0;
};

/// Welch's unequal-variance t-test, two-sided. Throws std::invalid_argument
/// for samples under two values and UndefinedTestError when both samples
/// have zero variance.
TTestResult welch_ttest(std::span<const double> rogue_values,
                        std::span<const double> nonrogue_values);

enum class RatioDirection { NonRogueOverRogue, RogueOverNonRogue };

/// nullopt marks an undefined ratio (zero denominator), which reports print
/// as "inf" and aggregates skip.
std::optional<double> crossgroup_ratio(const GroupSummary& summary,
                                       RatioDirection direction = RatioDirection::NonRogueOverRogue);

inline Timestamp default_account_cutoff() { return make_timestamp(2014, 1, 1); }

/// Fraction of distinct users (by user_id) whose account was created at or
/// after `cutoff`. Throws DegenerateError for an empty input.
double account_age_fraction(const std::vector<TweetRecord>& rogue_records,
                            Timestamp cutoff = default_account_cutoff());

/// Header: tweet_id, the 13 features, label.
void write_features_csv(const std::filesystem::path& path, const std::vector<FeatureVector>& vectors);
std::vector<FeatureVector> read_features_csv(const std::filesystem::path& path);

/// Shortest round-trip decimal for CSV cells.
std::string format_number(double v);

}  // namespace iopscan
