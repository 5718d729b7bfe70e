#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "iopscan/corpus.hpp"
#include "iopscan/features.hpp"
#include "iopscan/random.hpp"

namespace iopscan::synthetic {

/// Per-feature means for one class, in feature order.
using FeatureMeans = std::array<double, kFeatureCount>;

struct PopulationProfile {
  FeatureMeans rogue;
  FeatureMeans nonrogue;
};

/// Class means observed for codeine tweets in the reference collection.
PopulationProfile codeine_profile();

/// Draws feature vectors around `means`: binary features as Bernoulli, small
/// counts as Poisson, large counts as rounded log-normal with the given mean.
/// `spread` is the log-normal sigma.
std::vector<FeatureVector> sample_population(const FeatureMeans& means, ClassLabel label,
                                             std::size_t n, double spread, Rng& rng,
                                             const std::string& id_prefix);

/// Balanced labeled population from a profile, log-normal spread 1 for both classes.
std::vector<FeatureVector> labeled_population(const PopulationProfile& profile,
                                              std::size_t per_class, std::uint64_t seed);

struct PlantedCorpus {
  TokenizedCorpus corpus;
  /// community[c] = vocabulary ids of community c.
  std::vector<std::set<std::uint32_t>> communities;
  std::vector<std::size_t> doc_community;
};

/// Short documents, each drawing 5 or 6 distinct words from one community of
/// `words_per_community`, with an occasional word borrowed from another.
PlantedCorpus planted_communities(std::size_t communities, std::size_t words_per_community,
                                  std::size_t docs, std::uint64_t seed);

struct TweetCorpus {
  std::vector<TweetRecord> records;
  std::set<std::string> rogue_ids;
};

/// Sales vocabulary of planted rogue tweets.
const std::set<std::string>& sales_vocabulary();

/// Tweets mentioning the given drugs. Rogue tweets carry a URL, sales words
/// and rogue-profile metadata; regular tweets come from several unrelated
/// themes with regular-profile metadata.
TweetCorpus tweet_corpus(std::size_t rogue, std::size_t regular, std::uint64_t seed,
                         const std::vector<std::string>& drugs = {"codeine", "oxycodone",
                                                                  "percocet"});

}  // namespace iopscan::synthetic
