#include "iopscan/btm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "iopscan/errors.hpp"

namespace iopscan {

namespace {
constexpr const char* kModelMagic = "iopscan-btm";
constexpr int kModelVersion = 1;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

BitermSet extract_biterms(const std::vector<TokenizedDoc>& docs, std::optional<std::size_t> window) {
  if (window && *window < 2) throw std::invalid_argument("biterm window must be >= 2");
  BitermSet out;
  out.per_doc.reserve(docs.size());
  for (const auto& doc : docs) {
    std::vector<Biterm> pairs;
    const auto& t = doc.tokens;
    for (std::size_t i = 0; i < t.size(); ++i) {
      for (std::size_t j = i + 1; j < t.size(); ++j) {
        if (window && j - i >= *window) break;
        pairs.emplace_back(t[i], t[j]);
      }
    }
    out.all.insert(out.all.end(), pairs.begin(), pairs.end());
    out.per_doc.push_back(std::move(pairs));
  }
  return out;
}

std::size_t choose_k(const DocTermStats& stats, std::optional<std::size_t> cap) {
  if (!(stats.sparsity > 0.0 && stats.sparsity <= 1.0)) {
    throw std::invalid_argument("sparsity must lie in (0, 1]");
  }
  auto k = static_cast<std::size_t>(std::llround(1.0 / stats.sparsity));
  k = std::max<std::size_t>(k, 2);
  if (cap) k = std::min(k, std::max<std::size_t>(*cap, 2));
  return k;
}

std::uint64_t BtmModel::biterm_count() const {
  return std::accumulate(n_z.begin(), n_z.end(), std::uint64_t{0});
}

void BtmModel::recompute_distributions() {
  const double wbeta = static_cast<double>(vocab_size) * beta;
  const double total = static_cast<double>(biterm_count());
  phi.assign(k * vocab_size, 0.0);
  theta.assign(k, 0.0);
  for (std::size_t z = 0; z < k; ++z) {
    const double denom = 2.0 * static_cast<double>(n_z[z]) + wbeta;
    for (std::size_t w = 0; w < vocab_size; ++w) {
      phi[z * vocab_size + w] = (static_cast<double>(word_topic(w, z)) + beta) / denom;
    }
    theta[z] = (static_cast<double>(n_z[z]) + alpha) / (total + static_cast<double>(k) * alpha);
  }
}

BtmSampler::BtmSampler(std::vector<Biterm> biterms, std::size_t vocab_size, const BtmConfig& config)
    : biterms_(std::move(biterms)),
      k_(config.k),
      vocab_size_(vocab_size),
      alpha_(config.resolved_alpha()),
      beta_(config.beta),
      seed_(config.seed),
      rng_(config.seed) {
  if (biterms_.empty()) throw DegenerateError("cannot fit a topic model on zero biterms");
  if (k_ < 2) throw std::invalid_argument("topic count must be >= 2");
  if (!(alpha_ > 0.0) || !(beta_ > 0.0)) throw std::invalid_argument("priors must be positive");
  n_z_.assign(k_, 0);
  n_wz_.assign(vocab_size_ * k_, 0);
  weights_.assign(k_, 0.0);
  assignment_.reserve(biterms_.size());
  for (const auto& b : biterms_) {
    if (b.w2 >= vocab_size_) throw std::invalid_argument("biterm word id outside vocabulary");
    auto z = static_cast<std::uint32_t>(rng_.below(k_));
    assignment_.push_back(z);
    ++n_z_[z];
    ++n_wz_[b.w1 * k_ + z];
    ++n_wz_[b.w2 * k_ + z];
  }
}

void BtmSampler::sweep() {
  const double wbeta = static_cast<double>(vocab_size_) * beta_;
  for (std::size_t i = 0; i < biterms_.size(); ++i) {
    const Biterm b = biterms_[i];
    std::uint32_t z = assignment_[i];
    --n_z_[z];
    --n_wz_[b.w1 * k_ + z];
    --n_wz_[b.w2 * k_ + z];

    // For a self-pair the second word sees the first one's count.
    const double self = b.w1 == b.w2 ? 1.0 : 0.0;
    double total = 0.0;
    for (std::size_t t = 0; t < k_; ++t) {
      const double nz = static_cast<double>(n_z_[t]);
      const double words = 2.0 * nz;
      total += (nz + alpha_) * (static_cast<double>(n_wz_[b.w1 * k_ + t]) + beta_) *
               (static_cast<double>(n_wz_[b.w2 * k_ + t]) + beta_ + self) /
               ((words + wbeta) * (words + 1.0 + wbeta));
      weights_[t] = total;
    }
    const double u = rng_.uniform() * total;
    z = static_cast<std::uint32_t>(k_ - 1);
    for (std::size_t t = 0; t < k_; ++t) {
      if (u < weights_[t]) {
        z = static_cast<std::uint32_t>(t);
        break;
      }
    }

    assignment_[i] = z;
    ++n_z_[z];
    ++n_wz_[b.w1 * k_ + z];
    ++n_wz_[b.w2 * k_ + z];
  }
  ++sweeps_;
}

BtmModel BtmSampler::model() const {
  BtmModel m;
  m.k = k_;
  m.alpha = alpha_;
  m.beta = beta_;
  m.vocab_size = vocab_size_;
  m.n_z = n_z_;
  m.n_wz = n_wz_;
  m.seed = seed_;
  m.iterations = sweeps_;
  m.recompute_distributions();
  return m;
}

BtmModel fit(const std::vector<Biterm>& biterms, const std::vector<std::string>& vocabulary,
             const BtmConfig& config) {
  if (config.iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  BtmSampler sampler(biterms, vocabulary.size(), config);
  for (std::size_t it = 0; it < config.iterations; ++it) sampler.sweep();
  BtmModel m = sampler.model();
  m.vocabulary = vocabulary;
  return m;
}

std::size_t argmax_topic(const std::vector<double>& proportions) {
  std::size_t best = 0;
  for (std::size_t z = 1; z < proportions.size(); ++z) {
    if (proportions[z] > proportions[best]) best = z;
  }
  return best;
}

DocTopicDist infer_doc(const BtmModel& model, std::string tweet_id,
                       const std::vector<Biterm>& doc_biterms) {
  DocTopicDist dist;
  dist.tweet_id = std::move(tweet_id);
  const std::size_t k = model.k;
  if (doc_biterms.empty()) {
    dist.proportions.assign(k, 1.0 / static_cast<double>(k));
    dist.degenerate = true;
    return dist;
  }
  dist.proportions.assign(k, 0.0);
  std::vector<double> pzb(k);
  // Each occurrence contributes 1/|B_d|, which sums repeated biterms into
  // their empirical frequency.
  const double weight = 1.0 / static_cast<double>(doc_biterms.size());
  for (const auto& b : doc_biterms) {
    double norm = 0.0;
    for (std::size_t z = 0; z < k; ++z) {
      pzb[z] = model.theta[z] * model.phi_at(z, b.w1) * model.phi_at(z, b.w2);
      norm += pzb[z];
    }
    for (std::size_t z = 0; z < k; ++z) dist.proportions[z] += weight * pzb[z] / norm;
  }
  const double sum = std::accumulate(dist.proportions.begin(), dist.proportions.end(), 0.0);
  for (auto& p : dist.proportions) p /= sum;
  dist.dominant_topic = argmax_topic(dist.proportions);
  return dist;
}

std::vector<WordProbability> top_words(const BtmModel& model, std::size_t topic, std::size_t n) {
  if (topic >= model.k) throw std::out_of_range("topic index out of range");
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  std::vector<std::size_t> order(model.vocab_size);
  std::iota(order.begin(), order.end(), 0);
  auto better = [&](std::size_t a, std::size_t b) {
    const double pa = model.phi_at(topic, a);
    const double pb = model.phi_at(topic, b);
    if (pa != pb) return pa > pb;
    return model.vocabulary[a] < model.vocabulary[b];
  };
  const std::size_t take = std::min(n, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                    better);
  std::vector<WordProbability> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    out.push_back({model.vocabulary[order[i]], model.phi_at(topic, order[i])});
  }
  return out;
}

void save_model(const BtmModel& model, const std::filesystem::path& path) {
  if (model.vocabulary.size() != model.vocab_size) {
    throw std::invalid_argument("model vocabulary does not match vocab_size");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << kModelMagic << ' ' << kModelVersion << '\n';
  out << "k " << model.k << '\n';
  out << "alpha " << fmt_double(model.alpha) << '\n';
  out << "beta " << fmt_double(model.beta) << '\n';
  out << "vocab_size " << model.vocab_size << '\n';
  out << "seed " << model.seed << '\n';
  out << "iterations " << model.iterations << '\n';
  out << "n_z";
  for (auto c : model.n_z) out << ' ' << c;
  out << '\n';
  for (std::size_t w = 0; w < model.vocab_size; ++w) {
    const auto& term = model.vocabulary[w];
    if (term.empty() || term.find_first_of(" \t\r\n") != std::string::npos) {
      throw std::invalid_argument("vocabulary term '" + term + "' cannot be persisted");
    }
    out << term;
    for (std::size_t z = 0; z < model.k; ++z) out << ' ' << model.word_topic(w, z);
    out << '\n';
  }
  if (!out) throw IoError("error writing '" + path.string() + "'");
}

BtmModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  auto bad = [&](const std::string& what) {
    return DataError("malformed model file '" + path.string() + "': " + what);
  };
  auto expect_key = [&](const char* key) {
    std::string got;
    if (!(in >> got) || got != key) throw bad(std::string("expected '") + key + "'");
  };
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != kModelMagic) throw bad("bad header");
  if (version != kModelVersion) throw bad("unsupported version " + std::to_string(version));
  BtmModel m;
  std::string alpha, beta;
  expect_key("k");
  in >> m.k;
  expect_key("alpha");
  in >> alpha;
  expect_key("beta");
  in >> beta;
  expect_key("vocab_size");
  in >> m.vocab_size;
  expect_key("seed");
  in >> m.seed;
  expect_key("iterations");
  in >> m.iterations;
  expect_key("n_z");
  if (!in) throw bad("truncated header");
  try {
    m.alpha = std::stod(alpha);
    m.beta = std::stod(beta);
  } catch (const std::exception&) {
    throw bad("bad prior");
  }
  if (!(m.alpha > 0.0 && m.beta > 0.0) || m.k < 2) throw bad("bad hyperparameters");
  m.n_z.resize(m.k);
  for (auto& c : m.n_z) in >> c;
  m.vocabulary.resize(m.vocab_size);
  m.n_wz.resize(m.vocab_size * m.k);
  for (std::size_t w = 0; w < m.vocab_size; ++w) {
    in >> m.vocabulary[w];
    for (std::size_t z = 0; z < m.k; ++z) in >> m.n_wz[w * m.k + z];
  }
  if (!in) throw bad("truncated counts");
  for (std::size_t z = 0; z < m.k; ++z) {
    std::uint64_t words = 0;
    for (std::size_t w = 0; w < m.vocab_size; ++w) words += m.word_topic(w, z);
    if (words != 2 * m.n_z[z]) throw bad("word counts inconsistent with topic counts");
  }
  m.recompute_distributions();
  return m;
}

std::string topic_summary_report(const BtmModel& model, std::size_t words_per_topic) {
  std::ostringstream out;
  out << "# " << model.k << " topics, " << model.biterm_count() << " biterms, " << model.iterations
      << " iterations, seed " << model.seed << '\n';
  for (std::size_t z = 0; z < model.k; ++z) {
    char head[96];
    std::snprintf(head, sizeof head, "\nTopic %zu (weight %.4f)\n", z, model.theta[z]);
    out << head;
    for (const auto& wp : top_words(model, z, words_per_topic)) {
      char line[160];
      std::snprintf(line, sizeof line, "  %-24s %.6f\n", wp.term.c_str(), wp.probability);
      out << line;
    }
  }
  return out.str();
}

}  // namespace iopscan
