#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iopscan/corpus.hpp"
#include "iopscan/random.hpp"

namespace iopscan {

/// Unordered word pair, stored canonically with w1 <= w2.
struct Biterm {
  std::uint32_t w1 = 0;
  std::uint32_t w2 = 0;

  Biterm() = default;
  Biterm(std::uint32_t a, std::uint32_t b) : w1(a < b ? a : b), w2(a < b ? b : a) {}

  bool operator==(const Biterm&) const = default;
  auto operator<=>(const Biterm&) const = default;
};

struct BitermSet {
  /// per_doc[d] lists the biterms of document d in position order.
  std::vector<std::vector<Biterm>> per_doc;
  /// Concatenation of per_doc in document order.
  std::vector<Biterm> all;
};

/// Pairs every two positions closer than `window`. nullopt means the whole
/// document is one context. Throws std::invalid_argument for window < 2.
BitermSet extract_biterms(const std::vector<TokenizedDoc>& docs,
                          std::optional<std::size_t> window = std::nullopt);

inline constexpr std::size_t kDefaultTopicCap = 20;

/// round(1 / sparsity), at least 2, at most `cap` when given.
std::size_t choose_k(const DocTermStats& stats, std::optional<std::size_t> cap = kDefaultTopicCap);

struct BtmConfig {
  std::size_t k = 2;
  /// Topic smoothing; nullopt selects 50 / k.
  std::optional<double> alpha;
  double beta = 0.01;
  std::size_t iterations = 1000;
  std::uint64_t seed = 1;

  double resolved_alpha() const { return alpha ? *alpha : 50.0 / static_cast<double>(k); }
};

/// Fitted biterm topic model. Counts are authoritative; phi and theta are
/// point estimates derived from the counts of the final sweep.
struct BtmModel {
  std::size_t k = 0;
  double alpha = 0.0;
  double beta = 0.0;
  std::size_t vocab_size = 0;
  std::vector<std::string> vocabulary;
  std::vector<std::uint64_t> n_z;   // k
  std::vector<std::uint64_t> n_wz;  // vocab_size * k, row-major by word
  std::uint64_t seed = 0;
  std::size_t iterations = 0;

  std::vector<double> phi;    // k * vocab_size, row-major by topic
  std::vector<double> theta;  // k

  std::uint64_t word_topic(std::size_t w, std::size_t z) const { return n_wz[w * k + z]; }
  double phi_at(std::size_t z, std::size_t w) const { return phi[z * vocab_size + w]; }
  std::uint64_t biterm_count() const;

  /// phi_{w|z} = (n_wz + beta) / (2 n_z + W beta); theta_z = (n_z + alpha) / (|B| + k alpha).
  void recompute_distributions();
};

/// Collapsed Gibbs sampler over a fixed biterm multiset. Exposed so callers
/// can observe the chain between sweeps; fit() wraps it.
class BtmSampler {
 public:
  /// Throws DegenerateError on an empty biterm set and std::invalid_argument
  /// for k < 2, nonpositive priors or word ids outside vocab_size.
  BtmSampler(std::vector<Biterm> biterms, std::size_t vocab_size, const BtmConfig& config);

  /// One pass resampling every biterm's topic in order.
  void sweep();

  std::size_t sweeps_done() const noexcept { return sweeps_; }
  const std::vector<std::uint32_t>& assignments() const noexcept { return assignment_; }
  const std::vector<std::uint64_t>& topic_counts() const noexcept { return n_z_; }
  const std::vector<std::uint64_t>& word_topic_counts() const noexcept { return n_wz_; }

  /// Snapshot of the current state as a model (vocabulary left empty).
  BtmModel model() const;

 private:
  std::vector<Biterm> biterms_;
  std::size_t k_;
  std::size_t vocab_size_;
  double alpha_;
  double beta_;
  std::uint64_t seed_;
  Rng rng_;
  std::vector<std::uint32_t> assignment_;
  std::vector<std::uint64_t> n_z_;
  std::vector<std::uint64_t> n_wz_;
  std::vector<double> weights_;
  std::size_t sweeps_ = 0;
};

/// Runs config.iterations sweeps. Deterministic for fixed seed and input order.
BtmModel fit(const std::vector<Biterm>& biterms, const std::vector<std::string>& vocabulary,
             const BtmConfig& config);

struct DocTopicDist {
  std::string tweet_id;
  std::vector<double> proportions;
  std::size_t dominant_topic = 0;
  /// The document produced no biterms; proportions are uniform.
  bool degenerate = false;
};

/// Lowest index wins ties.
std::size_t argmax_topic(const std::vector<double>& proportions);

/// P(z|d) = sum_b P(z|b) P(b|d), P(z|b) proportional to theta_z phi_{w1|z} phi_{w2|z},
/// P(b|d) the empirical biterm frequency in d.
DocTopicDist infer_doc(const BtmModel& model, std::string tweet_id,
                       const std::vector<Biterm>& doc_biterms);

struct WordProbability {
  std::string term;
  double probability = 0.0;
};

/// Highest-probability terms of one topic; ties broken lexicographically.
std::vector<WordProbability> top_words(const BtmModel& model, std::size_t topic, std::size_t n = 10);

void save_model(const BtmModel& model, const std::filesystem::path& path);
BtmModel load_model(const std::filesystem::path& path);

/// One block per topic with its top words and probabilities.
std::string topic_summary_report(const BtmModel& model, std::size_t words_per_topic = 10);

}  // namespace iopscan
