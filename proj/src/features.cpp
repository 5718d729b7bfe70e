#include "iopscan/features.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "iopscan/errors.hpp"
#include "iopscan/stats.hpp"

namespace iopscan {

FeatureGroup feature_group(FeatureIndex f) {
  switch (f) {
    case FeatureIndex::RetweetedStatus:
    case FeatureIndex::RetweetCount:
    case FeatureIndex::FavoriteCount:
    case FeatureIndex::InReplyStatusId:
      return FeatureGroup::UserEngagement;
    case FeatureIndex::PossiblySensitive:
    case FeatureIndex::EntitiesUrls:
    case FeatureIndex::EntitiesSymbols:
    case FeatureIndex::EntitiesHashtags:
      return FeatureGroup::TweetBased;
    case FeatureIndex::UserFriendsCount:
    case FeatureIndex::UserFollowerCount:
      return FeatureGroup::UserNetwork;
    case FeatureIndex::UserVerified:
    case FeatureIndex::UserStatusesCount:
    case FeatureIndex::UserFavoritesCount:
      return FeatureGroup::UserProfile;
  }
  return FeatureGroup::UserProfile;
}

std::string_view to_string(FeatureGroup g) {
  switch (g) {
    case FeatureGroup::UserEngagement: return "User Engagement";
    case FeatureGroup::TweetBased: return "Tweet Based";
    case FeatureGroup::UserNetwork: return "User Network";
    case FeatureGroup::UserProfile: return "User Profile";
  }
  return "";
}

FeatureVector extract_features(const TweetRecord& r, EntityMode entity_mode) {
  auto entity = [&](std::uint64_t n) {
    if (entity_mode == EntityMode::Count) return static_cast<double>(n);
    return n > 0 ? 1.0 : 0.0;
  };
  FeatureVector v;
  v.tweet_id = r.tweet_id;
  v[FeatureIndex::RetweetedStatus] = r.retweeted_status_present ? 1.0 : 0.0;
  v[FeatureIndex::RetweetCount] = static_cast<double>(r.retweet_count);
  v[FeatureIndex::FavoriteCount] = static_cast<double>(r.favorite_count);
  v[FeatureIndex::InReplyStatusId] = r.in_reply_to_status_id ? 1.0 : 0.0;
  v[FeatureIndex::PossiblySensitive] = r.possibly_sensitive.value_or(false) ? 1.0 : 0.0;
  v[FeatureIndex::EntitiesUrls] = entity(r.url_entity_count);
  v[FeatureIndex::EntitiesSymbols] = entity(r.symbol_entity_count);
  v[FeatureIndex::EntitiesHashtags] = entity(r.hashtag_entity_count);
  v[FeatureIndex::UserVerified] = r.user_verified ? 1.0 : 0.0;
  v[FeatureIndex::UserFriendsCount] = static_cast<double>(r.user_friends_count);
  v[FeatureIndex::UserFollowerCount] = static_cast<double>(r.user_followers_count);
  v[FeatureIndex::UserStatusesCount] = static_cast<double>(r.user_statuses_count);
  v[FeatureIndex::UserFavoritesCount] = static_cast<double>(r.user_favourites_count);
  return v;
}

std::vector<GroupSummary> group_means(const std::vector<FeatureVector>& vectors,
                                      const std::string& drug) {
  std::array<std::vector<double>, kFeatureCount> rogue, nonrogue;
  for (const auto& v : vectors) {
    if (!v.label) continue;
    auto& side = *v.label == ClassLabel::Rogue ? rogue : nonrogue;
    for (std::size_t f = 0; f < kFeatureCount; ++f) side[f].push_back(v.values[f]);
  }
  if (rogue[0].empty() || nonrogue[0].empty()) {
    throw DegenerateError("drug '" + drug + "': both classes need at least one tweet (rogue " +
                          std::to_string(rogue[0].size()) + ", non-rogue " +
                          std::to_string(nonrogue[0].size()) + ")");
  }
  std::vector<GroupSummary> out;
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    out.push_back({drug, std::string(kFeatureNames[f]), mean(rogue[f]), mean(nonrogue[f]),
                   rogue[f].size(), nonrogue[f].size()});
  }
  return out;
}

TTestResult welch_ttest(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    throw std::invalid_argument("Welch's t-test needs at least two values per sample");
  }
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double va = sample_variance(a) / na;
  const double vb = sample_variance(b) / nb;
  if (!std::isfinite(va) || !std::isfinite(vb)) {
    throw std::invalid_argument("samples must have finite variance");
  }
  if (va == 0.0 && vb == 0.0) {
    throw UndefinedTestError("both samples have zero variance");
  }
  const double se2 = va + vb;
  TTestResult r;
  r.t_statistic = (mean(a) - mean(b)) / std::sqrt(se2);
  r.degrees_of_freedom = se2 * se2 / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
  r.p_value = student_t_two_sided_p(r.t_statistic, r.degrees_of_freedom);
  return r;
}

std::optional<double> crossgroup_ratio(const GroupSummary& s, RatioDirection direction) {
  const double num = direction == RatioDirection::NonRogueOverRogue ? s.nonrogue_mean : s.rogue_mean;
  const double den = direction == RatioDirection::NonRogueOverRogue ? s.rogue_mean : s.nonrogue_mean;
  if (!(den > 0.0)) return std::nullopt;
  return num / den;
}

double account_age_fraction(const std::vector<TweetRecord>& rogue_records, Timestamp cutoff) {
  std::set<std::string> users, recent;
  for (const auto& r : rogue_records) {
    users.insert(r.user_id);
    if (r.user_created_at >= cutoff) recent.insert(r.user_id);
  }
  if (users.empty()) throw DegenerateError("no users to compute account age over");
  return static_cast<double>(recent.size()) / static_cast<double>(users.size());
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_features_csv(const std::filesystem::path& path, const std::vector<FeatureVector>& vectors) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "tweet_id";
  for (auto name : kFeatureNames) out << ',' << name;
  out << ",label\n";
  for (const auto& v : vectors) {
    out << v.tweet_id;
    for (double x : v.values) out << ',' << format_number(x);
    out << ',' << (v.label ? to_string(*v.label) : "") << '\n';
  }
}

std::vector<FeatureVector> read_features_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::string line;
  std::getline(in, line);
  std::string expected = "tweet_id";
  for (auto name : kFeatureNames) expected += "," + std::string(name);
  expected += ",label";
  if (line != expected) throw DataError("'" + path.string() + "' has an unexpected header");
  std::vector<FeatureVector> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    auto bad = [&] { return DataError(path.string() + ":" + std::to_string(line_no) + ": bad row"); };
    if (cells.size() != kFeatureCount + 2) throw bad();
    FeatureVector v;
    v.tweet_id = cells[0];
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      const auto& c = cells[f + 1];
      auto res = std::from_chars(c.data(), c.data() + c.size(), v.values[f]);
      if (res.ec != std::errc{} || res.ptr != c.data() + c.size()) throw bad();
    }
    if (!cells.back().empty()) {
      v.label = parse_class_label(cells.back());
      if (!v.label) throw bad();
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace iopscan
