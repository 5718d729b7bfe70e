#include "iopscan/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <numeric>
#include <sstream>

#include "iopscan/errors.hpp"
#include "iopscan/random.hpp"

namespace iopscan {

namespace {

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double inf_norm(const LogisticObjective::Params& g) {
  double m = 0.0;
  for (double v : g) m = std::max(m, std::fabs(v));
  return m;
}

std::array<FeatureScaling, kFeatureCount> fit_scaling(const std::vector<FeatureRow>& rows) {
  std::array<FeatureScaling, kFeatureCount> s{};
  const double n = static_cast<double>(rows.size());
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    double m = 0.0;
    for (const auto& r : rows) m += r[f];
    m /= n;
    double ss = 0.0;
    for (const auto& r : rows) ss += (r[f] - m) * (r[f] - m);
    const double sd = std::sqrt(ss / n);
    if (sd > 0.0 && std::isfinite(sd)) s[f] = {m, sd, true};
  }
  return s;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

FeatureRow LogRegModel::standardize(const FeatureRow& x) const {
  FeatureRow out = x;
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    const auto& s = standardization[f];
    if (s.applied) out[f] = (x[f] - s.mean) / s.stddev;
  }
  return out;
}

LogisticObjective::LogisticObjective(std::vector<FeatureRow> rows, std::vector<double> targets,
                                     double l2_lambda)
    : rows_(std::move(rows)), targets_(std::move(targets)), lambda_(l2_lambda) {
  if (rows_.size() != targets_.size()) throw std::invalid_argument("rows/targets size mismatch");
  if (rows_.empty()) throw std::invalid_argument("objective needs at least one row");
  if (!(lambda_ >= 0.0)) throw std::invalid_argument("l2_lambda must be nonnegative");
}

double LogisticObjective::value(const Params& p) const {
  double nll = 0.0;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    double z = p[kFeatureCount];
    for (std::size_t f = 0; f < kFeatureCount; ++f) z += p[f] * rows_[i][f];
    // -[y log s(z) + (1-y) log(1-s(z))] = softplus(z) - y z
    nll += softplus(z) - targets_[i] * z;
  }
  double reg = 0.0;
  for (std::size_t f = 0; f < kFeatureCount; ++f) reg += p[f] * p[f];
  return nll / static_cast<double>(rows_.size()) + 0.5 * lambda_ * reg;
}

LogisticObjective::Params LogisticObjective::gradient(const Params& p) const {
  Params g{};
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    double z = p[kFeatureCount];
    for (std::size_t f = 0; f < kFeatureCount; ++f) z += p[f] * rows_[i][f];
    const double err = sigmoid(z) - targets_[i];
    for (std::size_t f = 0; f < kFeatureCount; ++f) g[f] += err * rows_[i][f];
    g[kFeatureCount] += err;
  }
  const double n = static_cast<double>(rows_.size());
  for (auto& v : g) v /= n;
  for (std::size_t f = 0; f < kFeatureCount; ++f) g[f] += lambda_ * p[f];
  return g;
}

TrainResult train_detailed(const std::vector<FeatureVector>& data, const TrainOptions& options) {
  std::vector<FeatureRow> raw;
  std::vector<double> targets;
  std::size_t positives = 0;
  for (const auto& v : data) {
    if (!v.label) continue;
    raw.push_back(v.values);
    const bool rogue = *v.label == ClassLabel::Rogue;
    targets.push_back(rogue ? 1.0 : 0.0);
    positives += rogue ? 1 : 0;
  }
  if (raw.size() < 2 || positives == 0 || positives == raw.size()) {
    throw DegenerateError("training needs both classes (" + std::to_string(positives) +
                          " rogue of " + std::to_string(raw.size()) + ")");
  }

  TrainResult result;
  LogRegModel& model = result.model;
  model.l2_lambda = options.l2_lambda;
  model.seed = options.seed;
  model.standardization = fit_scaling(raw);
  for (auto& r : raw) r = model.standardize(r);

  LogisticObjective objective(std::move(raw), std::move(targets), options.l2_lambda);
  LogisticObjective::Params params{};
  double loss = objective.value(params);
  result.loss_trace.push_back(loss);
  double step = 1.0;
  constexpr double kArmijo = 1e-4;

  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    const auto grad = objective.gradient(params);
    if (inf_norm(grad) < options.gradient_tolerance) {
      result.converged = true;
      break;
    }
    double grad_sq = 0.0;
    for (double g : grad) grad_sq += g * g;

    // Try a slightly longer step than last time, then backtrack.
    step = std::min(step * 2.0, 1e6);
    LogisticObjective::Params candidate;
    double candidate_loss;
    for (;;) {
      for (std::size_t j = 0; j < params.size(); ++j) candidate[j] = params[j] - step * grad[j];
      candidate_loss = objective.value(candidate);
      if (candidate_loss <= loss - kArmijo * step * grad_sq) break;
      step *= 0.5;
      if (step < 1e-20) break;
    }
    if (step < 1e-20 || !(candidate_loss <= loss)) break;
    params = candidate;
    loss = candidate_loss;
    result.loss_trace.push_back(loss);
    ++result.iterations;
  }
  if (!result.converged && inf_norm(objective.gradient(params)) < options.gradient_tolerance) {
    result.converged = true;
  }

  std::copy_n(params.begin(), kFeatureCount, model.weights.begin());
  model.bias = params[kFeatureCount];
  return result;
}

LogRegModel train(const std::vector<FeatureVector>& data, double l2_lambda, std::uint64_t seed) {
  return train_detailed(data, {l2_lambda, seed, 1e-8, 10000}).model;
}

double predict_proba(const LogRegModel& model, const FeatureRow& x) {
  const auto s = model.standardize(x);
  double z = model.bias;
  for (std::size_t f = 0; f < kFeatureCount; ++f) z += model.weights[f] * s[f];
  return sigmoid(z);
}

RunMetrics compute_metrics(std::span<const ClassLabel> truth, std::span<const double> scores,
                           double threshold) {
  if (truth.size() != scores.size()) throw std::invalid_argument("truth/score size mismatch");
  if (truth.empty()) throw std::invalid_argument("metrics need at least one example");
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool actual = truth[i] == ClassLabel::Rogue;
    const bool predicted = scores[i] >= threshold;
    if (actual && predicted) ++tp;
    else if (!actual && predicted) ++fp;
    else if (actual) ++fn;
    else ++tn;
  }
  RunMetrics m;
  m.test_size = truth.size();
  m.accuracy = static_cast<double>(tp + tn) / static_cast<double>(truth.size());
  m.zero_one_loss = 1.0 - m.accuracy;
  if (tp + fp > 0) {
    m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  } else {
    m.precision_undefined = true;
  }
  if (tp + fn > 0) {
    m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  } else {
    m.recall_undefined = true;
  }
  if (m.precision + m.recall > 0.0) {
    m.f1_score = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  } else {
    m.f1_undefined = true;
  }

  const std::size_t positives = tp + fn;
  if (positives == 0) {
    m.average_precision_undefined = true;
    return m;
  }
  std::vector<std::size_t> order(truth.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::size_t cum_tp = 0, cum_all = 0;
  double prev_recall = 0.0, ap = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      cum_tp += truth[order[j]] == ClassLabel::Rogue ? 1 : 0;
      ++cum_all;
      ++j;
    }
    const double recall = static_cast<double>(cum_tp) / static_cast<double>(positives);
    const double precision = static_cast<double>(cum_tp) / static_cast<double>(cum_all);
    ap += (recall - prev_recall) * precision;
    prev_recall = recall;
    i = j;
  }
  m.average_precision = ap;
  return m;
}

namespace {

struct RunOutcome {
  RunMetrics metrics;
  std::size_t redraws = 0;
};

RunOutcome evaluate_run(const std::vector<const FeatureVector*>& data, const EvalOptions& opt,
                        std::size_t run) {
  const std::size_t n = data.size();
  auto train_size = static_cast<std::size_t>(std::llround(opt.split_fraction * static_cast<double>(n)));
  train_size = std::clamp<std::size_t>(train_size, 1, n - 1);
  const std::uint64_t run_seed = derive_seed(opt.seed, run);

  for (std::size_t attempt = 0; attempt <= opt.max_redraws; ++attempt) {
    Rng rng(derive_seed(run_seed, attempt));
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    rng.shuffle(idx);

    auto has_both = [&](std::size_t from, std::size_t to) {
      bool pos = false, neg = false;
      for (std::size_t i = from; i < to; ++i) {
        (*data[idx[i]]->label == ClassLabel::Rogue ? pos : neg) = true;
      }
      return pos && neg;
    };
    if (!has_both(0, train_size) || !has_both(train_size, n)) continue;

    std::vector<FeatureVector> train_set;
    train_set.reserve(train_size);
    for (std::size_t i = 0; i < train_size; ++i) train_set.push_back(*data[idx[i]]);
    const LogRegModel model = train(train_set, opt.l2_lambda, run_seed);

    std::vector<ClassLabel> truth;
    std::vector<double> scores;
    for (std::size_t i = train_size; i < n; ++i) {
      truth.push_back(*data[idx[i]]->label);
      scores.push_back(predict_proba(model, *data[idx[i]]));
    }
    return {compute_metrics(truth, scores), attempt};
  }
  throw DegenerateError("run " + std::to_string(run) + ": no split with both classes on each side after " +
                        std::to_string(opt.max_redraws) + " redraws");
}

}  // namespace

EvalReport evaluate(const std::vector<FeatureVector>& data, const EvalOptions& options) {
  if (!(options.split_fraction > 0.0 && options.split_fraction < 1.0)) {
    throw std::invalid_argument("split_fraction must lie in (0, 1)");
  }
  if (options.runs < 1) throw std::invalid_argument("runs must be >= 1");
  std::vector<const FeatureVector*> labeled;
  for (const auto& v : data) {
    if (v.label) labeled.push_back(&v);
  }
  if (labeled.size() < 4) throw DegenerateError("evaluation needs at least four labeled examples");

  std::vector<std::future<RunOutcome>> jobs;
  for (std::size_t r = 0; r < options.runs; ++r) {
    jobs.push_back(std::async(std::launch::async, evaluate_run, std::cref(labeled),
                              std::cref(options), r));
  }
  EvalReport report;
  report.run_count = options.runs;
  report.split_fraction = options.split_fraction;
  for (auto& j : jobs) {
    auto outcome = j.get();
    report.redraws += outcome.redraws;
    report.runs.push_back(outcome.metrics);
  }

  const double runs = static_cast<double>(report.runs.size());
  RunMetrics& m = report.mean;
  for (const auto& r : report.runs) {
    m.accuracy += r.accuracy / runs;
    m.average_precision += r.average_precision / runs;
    m.f1_score += r.f1_score / runs;
    m.precision += r.precision / runs;
    m.recall += r.recall / runs;
    m.zero_one_loss += r.zero_one_loss / runs;
    m.precision_undefined |= r.precision_undefined;
    m.recall_undefined |= r.recall_undefined;
    m.f1_undefined |= r.f1_undefined;
    m.average_precision_undefined |= r.average_precision_undefined;
    m.test_size += r.test_size;
  }
  m.test_size = static_cast<std::size_t>(std::llround(static_cast<double>(m.test_size) / runs));
  return report;
}

void save_logreg(const LogRegModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "iopscan-logreg 1\n";
  out << "lambda " << fmt17(model.l2_lambda) << '\n';
  out << "seed " << model.seed << '\n';
  out << "bias " << fmt17(model.bias) << '\n';
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    const auto& s = model.standardization[f];
    out << "feature " << kFeatureNames[f] << ' ' << fmt17(model.weights[f]) << ' '
        << fmt17(s.mean) << ' ' << fmt17(s.stddev) << ' ' << (s.applied ? 1 : 0) << '\n';
  }
  if (!out) throw IoError("error writing '" + path.string() + "'");
}

LogRegModel load_logreg(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  auto bad = [&](const std::string& what) {
    return DataError("malformed classifier file '" + path.string() + "': " + what);
  };
  auto number = [&](const std::string& text) {
    try {
      std::size_t used = 0;
      double v = std::stod(text, &used);
      if (used == text.size()) return v;
    } catch (const std::exception&) {
    }
    throw bad("'" + text + "' is not a number");
  };
  std::string word, num;
  int version = 0;
  if (!(in >> word >> version) || word != "iopscan-logreg") throw bad("bad header");
  if (version != 1) throw bad("unsupported version");
  LogRegModel m;
  if (!(in >> word >> num) || word != "lambda") throw bad("expected lambda");
  m.l2_lambda = number(num);
  if (!(in >> word >> m.seed) || word != "seed") throw bad("expected seed");
  if (!(in >> word >> num) || word != "bias") throw bad("expected bias");
  m.bias = number(num);
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    std::string name, w, mean, sd;
    int applied = 0;
    if (!(in >> word >> name >> w >> mean >> sd >> applied) || word != "feature" ||
        name != kFeatureNames[f]) {
      throw bad("expected feature " + std::string(kFeatureNames[f]));
    }
    m.weights[f] = number(w);
    m.standardization[f] = {number(mean), number(sd), applied != 0};
  }
  return m;
}

std::string evaluation_csv(const std::vector<std::pair<std::string, EvalReport>>& by_drug) {
  std::ostringstream out;
  out << "metric";
  for (const auto& [drug, r] : by_drug) out << ',' << drug;
  out << '\n';
  for (std::size_t i = 0; i < kMetricNames.size(); ++i) {
    out << kMetricNames[i];
    for (const auto& [drug, r] : by_drug) out << ',' << format_number(r.mean.values()[i]);
    out << '\n';
  }
  out << "runs";
  for (const auto& [drug, r] : by_drug) out << ',' << r.run_count;
  out << '\n';
  return out.str();
}

std::string evaluation_table(const std::vector<std::pair<std::string, EvalReport>>& by_drug) {
  std::ostringstream out;
  char cell[64];
  std::snprintf(cell, sizeof cell, "%-20s", "metric");
  out << cell;
  for (const auto& [drug, r] : by_drug) {
    std::snprintf(cell, sizeof cell, " %12s", drug.c_str());
    out << cell;
  }
  out << '\n';
  for (std::size_t i = 0; i < kMetricNames.size(); ++i) {
    std::snprintf(cell, sizeof cell, "%-20s", std::string(kMetricNames[i]).c_str());
    out << cell;
    for (const auto& [drug, r] : by_drug) {
      std::snprintf(cell, sizeof cell, " %12.4f", r.mean.values()[i]);
      out << cell;
    }
    out << '\n';
  }
  for (const auto& [drug, r] : by_drug) {
    const auto& m = r.mean;
    if (m.precision_undefined || m.recall_undefined || m.f1_undefined ||
        m.average_precision_undefined) {
      out << "note: " << drug << " has runs with undefined precision/recall (reported as 0)\n";
    }
  }
  return out.str();
}

std::string evaluation_runs_csv(const std::vector<std::pair<std::string, EvalReport>>& by_drug) {
  std::ostringstream out;
  out << "drug,run";
  for (auto name : kMetricNames) out << ',' << name;
  out << ",test_size,precision_undefined,recall_undefined\n";
  for (const auto& [drug, r] : by_drug) {
    for (std::size_t i = 0; i < r.runs.size(); ++i) {
      const auto& m = r.runs[i];
      out << drug << ',' << i;
      for (double v : m.values()) out << ',' << format_number(v);
      out << ',' << m.test_size << ',' << m.precision_undefined << ',' << m.recall_undefined << '\n';
    }
  }
  return out.str();
}

}  // namespace iopscan
