#include "iopscan/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace iopscan::synthetic {

namespace {

double standard_normal(Rng& rng) {
  // Box-Muller; 1 - u keeps the log argument away from zero.
  const double u1 = 1.0 - rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t poisson(double mean, Rng& rng) {
  const double limit = std::exp(-mean);
  std::uint64_t k = 0;
  double p = rng.uniform();
  while (p > limit) {
    ++k;
    p *= rng.uniform();
  }
  return k;
}

bool is_binary(std::size_t f) {
  switch (static_cast<FeatureIndex>(f)) {
    case FeatureIndex::RetweetedStatus:
    case FeatureIndex::InReplyStatusId:
    case FeatureIndex::PossiblySensitive:
    case FeatureIndex::EntitiesUrls:
    case FeatureIndex::EntitiesSymbols:
    case FeatureIndex::EntitiesHashtags:
    case FeatureIndex::UserVerified:
      return true;
    default:
      return false;
  }
}

double draw_feature(std::size_t f, double mean, double spread, Rng& rng) {
  if (is_binary(f)) return rng.uniform() < mean ? 1.0 : 0.0;
  if (mean <= 0.0) return 0.0;
  if (mean < 20.0) return static_cast<double>(poisson(mean, rng));
  const double z = standard_normal(rng);
  return std::round(mean * std::exp(spread * z - 0.5 * spread * spread));
}

template <typename T>
const T& pick(const std::vector<T>& items, Rng& rng) {
  return items[rng.below(items.size())];
}

}  // namespace

PopulationProfile codeine_profile() {
  return {
      {0.0, 0.3234, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 12.39, 28.39, 166995.0, 0.0},
      {0.4131, 409.16, 386.82, 0.0658, 0.102, 0.1724, 0.0009, 0.1647, 0.0022, 1123.05, 2666.85,
       38823.55, 5436.99},
  };
}

std::vector<FeatureVector> sample_population(const FeatureMeans& means, ClassLabel label,
                                             std::size_t n, double spread, Rng& rng,
                                             const std::string& id_prefix) {
  std::vector<FeatureVector> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    FeatureVector v;
    v.tweet_id = id_prefix + std::to_string(i);
    v.label = label;
    for (std::size_t f = 0; f < kFeatureCount; ++f) v.values[f] = draw_feature(f, means[f], spread, rng);
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<FeatureVector> labeled_population(const PopulationProfile& profile,
                                              std::size_t per_class, std::uint64_t seed) {
  Rng rng(seed);
  auto data = sample_population(profile.rogue, ClassLabel::Rogue, per_class, 1.0, rng, "r");
  auto regular = sample_population(profile.nonrogue, ClassLabel::NonRogue, per_class, 1.0, rng, "n");
  data.insert(data.end(), regular.begin(), regular.end());
  return data;
}

PlantedCorpus planted_communities(std::size_t communities, std::size_t words_per_community,
                                  std::size_t docs, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<std::string>> words(communities);
  std::vector<std::string> all;
  for (std::size_t c = 0; c < communities; ++c) {
    for (std::size_t w = 0; w < words_per_community; ++w) {
      words[c].push_back("c" + std::to_string(c) + "w" + std::to_string(w));
      all.push_back(words[c].back());
    }
  }
  PlantedCorpus planted;
  planted.corpus.vocabulary = Vocabulary(all);
  const auto& vocab = planted.corpus.vocabulary;
  planted.communities.resize(communities);
  for (std::size_t c = 0; c < communities; ++c) {
    for (const auto& w : words[c]) planted.communities[c].insert(*vocab.find(w));
  }
  for (std::size_t d = 0; d < docs; ++d) {
    const std::size_t c = d % communities;
    std::vector<std::string> pool = words[c];
    rng.shuffle(pool);
    const std::size_t len = std::min<std::size_t>(5 + rng.below(2), pool.size());
    TokenizedDoc doc{"d" + std::to_string(d), {}};
    for (std::size_t i = 0; i < len; ++i) doc.tokens.push_back(*vocab.find(pool[i]));
    if (rng.uniform() < 0.1) {
      const std::size_t other = (c + 1 + rng.below(communities - 1)) % communities;
      doc.tokens.push_back(*vocab.find(pick(words[other], rng)));
    }
    planted.corpus.docs.push_back(std::move(doc));
    planted.doc_community.push_back(c);
  }
  return planted;
}

const std::set<std::string>& sales_vocabulary() {
  static const std::set<std::string> words = {
      "buy",      "online",   "order",    "cheap",     "price",    "pharmacy", "discount",
      "pills",    "free",     "shipping", "quality",   "offer",    "delivery", "overnight",
      "sale",     "mg",       "tablets",  "guaranteed"};
  return words;
}

TweetCorpus tweet_corpus(std::size_t rogue, std::size_t regular, std::uint64_t seed,
                         const std::vector<std::string>& drugs) {
  Rng rng(seed);
  const std::vector<std::string> sales(sales_vocabulary().begin(), sales_vocabulary().end());
  const std::vector<std::vector<std::string>> themes = {
      {"lean", "cup", "sprite", "purple", "drank", "sipping", "poured", "song", "party"},
      {"pain", "surgery", "teeth", "wisdom", "doctor", "prescribed", "pulled", "recovery", "sore"},
      {"fda", "approval", "abuse", "deaths", "overdose", "epidemic", "police", "report", "study"},
      {"laughing", "funny", "dreams", "sleep", "high", "feel", "good", "lol", "tired"},
  };
  const auto profile = codeine_profile();
  const std::size_t rogue_users = std::max<std::size_t>(1, rogue / 12);

  TweetCorpus out;
  const std::size_t total = rogue + regular;
  // Interleave classes deterministically so ids do not reveal labels.
  std::vector<bool> is_rogue(total, false);
  std::fill(is_rogue.begin(), is_rogue.begin() + static_cast<std::ptrdiff_t>(rogue), true);
  rng.shuffle(is_rogue);

  for (std::size_t i = 0; i < total; ++i) {
    const bool bad = is_rogue[i];
    const std::string& drug = pick(drugs, rng);
    FeatureVector meta = sample_population(bad ? profile.rogue : profile.nonrogue,
                                           bad ? ClassLabel::Rogue : ClassLabel::NonRogue, 1,
                                           1.0, rng, "")
                             .front();
    TweetRecord r;
    r.tweet_id = std::to_string(600000000 + i * 7919 % 1000003);
    r.created_at = make_timestamp(2015, 6 + static_cast<unsigned>(rng.below(6)),
                                  1 + static_cast<unsigned>(rng.below(28)),
                                  static_cast<int>(rng.below(24)), static_cast<int>(rng.below(60)));

    std::vector<std::string> words;
    if (bad) {
      const std::size_t n = 3 + rng.below(3);
      for (std::size_t w = 0; w < n; ++w) words.push_back(pick(sales, rng));
      if (rng.uniform() < 0.1) words.push_back(pick(themes[1], rng));
    } else {
      const auto& theme = pick(themes, rng);
      const std::size_t n = 3 + rng.below(3);
      for (std::size_t w = 0; w < n; ++w) words.push_back(pick(theme, rng));
      if (rng.uniform() < 0.08) words.push_back(pick(sales, rng));
    }
    words.insert(words.begin() + static_cast<std::ptrdiff_t>(rng.below(words.size() + 1)),
                 rng.uniform() < 0.3 ? "#" + drug : drug);
    std::string text;
    for (const auto& w : words) text += (text.empty() ? "" : " ") + w;

    r.url_entity_count = static_cast<std::uint64_t>(meta[FeatureIndex::EntitiesUrls]);
    if (r.url_entity_count > 0) {
      text += " http://t.example/" + std::to_string(rng.below(100000));
    }
    r.text = text;
    r.retweeted_status_present = meta[FeatureIndex::RetweetedStatus] > 0.0;
    r.retweet_count = static_cast<std::uint64_t>(meta[FeatureIndex::RetweetCount]);
    r.favorite_count = static_cast<std::uint64_t>(meta[FeatureIndex::FavoriteCount]);
    if (meta[FeatureIndex::InReplyStatusId] > 0.0) {
      r.in_reply_to_status_id = std::to_string(500000000 + rng.below(100000000));
    }
    if (meta[FeatureIndex::PossiblySensitive] > 0.0) r.possibly_sensitive = true;
    r.hashtag_entity_count = static_cast<std::uint64_t>(meta[FeatureIndex::EntitiesHashtags]);
    r.symbol_entity_count = static_cast<std::uint64_t>(meta[FeatureIndex::EntitiesSymbols]);
    r.user_verified = meta[FeatureIndex::UserVerified] > 0.0;
    r.user_friends_count = static_cast<std::uint64_t>(meta[FeatureIndex::UserFriendsCount]);
    r.user_followers_count = static_cast<std::uint64_t>(meta[FeatureIndex::UserFollowerCount]);
    r.user_statuses_count = static_cast<std::uint64_t>(meta[FeatureIndex::UserStatusesCount]);
    r.user_favourites_count = static_cast<std::uint64_t>(meta[FeatureIndex::UserFavoritesCount]);
    // Creation dates are a function of the account so repeated posters agree.
    if (bad) {
      const std::uint64_t bot = rng.below(rogue_users);
      r.user_id = "bot" + std::to_string(bot);
      Rng account(derive_seed(seed, bot));
      // Most promotional accounts are recent.
      const bool recent = account.uniform() < 0.75;
      r.user_created_at = make_timestamp(recent ? 2014 + static_cast<int>(account.below(2))
                                                : 2009 + static_cast<int>(account.below(5)),
                                         1 + static_cast<unsigned>(account.below(12)), 10);
      out.rogue_ids.insert(r.tweet_id);
    } else {
      const std::uint64_t user = rng.below(total * 2);
      r.user_id = "user" + std::to_string(user);
      Rng account(derive_seed(~seed, user));
      r.user_created_at = make_timestamp(2007 + static_cast<int>(account.below(9)),
                                         1 + static_cast<unsigned>(account.below(12)), 10);
    }
    out.records.push_back(std::move(r));
  }
  return out;
}

}  // namespace iopscan::synthetic
