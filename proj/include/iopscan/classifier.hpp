#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "iopscan/features.hpp"
#include "iopscan/labels.hpp"

namespace iopscan {

using FeatureRow = std::array<double, kFeatureCount>;

/// z-score parameters fitted on training data. A constant training feature
/// passes through unchanged (applied = false).
struct FeatureScaling {
  double mean = 0.0;
  double stddev = 1.0;
  bool applied = false;
};

struct LogRegModel {
  FeatureRow weights{};
  double bias = 0.0;
  std::array<FeatureScaling, kFeatureCount> standardization{};
  double l2_lambda = 1.0;
  std::uint64_t seed = 0;

  FeatureRow standardize(const FeatureRow& x) const;
};

/// Mean negative log-likelihood plus (lambda/2)|w|^2 over standardized rows.
/// Parameters are packed as 13 weights followed by the bias, which is not
/// regularized.
class LogisticObjective {
 public:
  static constexpr std::size_t kParamCount = kFeatureCount + 1;
  using Params = std::array<double, kParamCount>;

  LogisticObjective(std::vector<FeatureRow> rows, std::vector<double> targets, double l2_lambda);

  double value(const Params& p) const;
  Params gradient(const Params& p) const;
  std::size_t size() const noexcept { return rows_.size(); }

 private:
  std::vector<FeatureRow> rows_;
  std::vector<double> targets_;
  double lambda_;
};

struct TrainOptions {
  double l2_lambda = 1.0;
  std::uint64_t seed = 0;
  double gradient_tolerance = 1e-8;
  std::size_t max_iterations = 10000;
};

struct TrainResult {
  LogRegModel model;
  /// Objective value before the first step and after every accepted step.
  std::vector<double> loss_trace;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Full-batch gradient descent with Armijo backtracking. Throws
/// DegenerateError unless both classes are present. Unlabeled vectors are
/// ignored.
TrainResult train_detailed(const std::vector<FeatureVector>& data, const TrainOptions& options);

LogRegModel train(const std::vector<FeatureVector>& data, double l2_lambda = 1.0,
                  std::uint64_t seed = 0);

/// sigmoid(w . standardize(x) + b).
double predict_proba(const LogRegModel& model, const FeatureRow& x);
inline double predict_proba(const LogRegModel& model, const FeatureVector& x) {
  return predict_proba(model, x.values);
}
inline ClassLabel predict(const LogRegModel& model, const FeatureVector& x) {
  return predict_proba(model, x) >= 0.5 ? ClassLabel::Rogue : ClassLabel::NonRogue;
}

double sigmoid(double z);

inline constexpr std::array<std::string_view, 6> kMetricNames = {
    "accuracy", "average_precision", "f1_score", "precision", "recall", "zero_one_loss"};

struct RunMetrics {
  double accuracy = 0.0;
  double average_precision = 0.0;
  double f1_score = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double zero_one_loss = 0.0;
  // Zero-denominator cases; the matching value is reported as 0.
  bool precision_undefined = false;
  bool recall_undefined = false;
  bool f1_undefined = false;
  bool average_precision_undefined = false;
  std::size_t test_size = 0;

  std::array<double, 6> values() const {
    return {accuracy, average_precision, f1_score, precision, recall, zero_one_loss};
  }
};

/// Thresholded metrics at `threshold`; average precision is the step sum
/// over the ranking by descending score, tied scores forming one step.
RunMetrics compute_metrics(std::span<const ClassLabel> truth, std::span<const double> scores,
                           double threshold = 0.5);

struct EvalOptions {
  double split_fraction = 0.7;
  std::size_t runs = 10;
  std::uint64_t seed = 0;
  double l2_lambda = 1.0;
  std::size_t max_redraws = 100;
};

struct EvalReport {
  std::vector<RunMetrics> runs;
  /// Per-metric mean over runs; undefined flags are set if any run had one.
  RunMetrics mean;
  std::size_t run_count = 0;
  double split_fraction = 0.0;
  /// Splits discarded because one side lacked a class.
  std::size_t redraws = 0;
};

/// Repeated random train/test splits. Each run derives its seed from the
/// master seed; a split whose train or test side lacks a class is redrawn,
/// up to max_redraws times before DegenerateError.
EvalReport evaluate(const std::vector<FeatureVector>& data, const EvalOptions& options);

void save_logreg(const LogRegModel& model, const std::filesystem::path& path);
LogRegModel load_logreg(const std::filesystem::path& path);

/// Metric rows by drug columns, as CSV and as an aligned text table.
std::string evaluation_csv(const std::vector<std::pair<std::string, EvalReport>>& by_drug);
std::string evaluation_table(const std::vector<std::pair<std::string, EvalReport>>& by_drug);
/// Long-form per-run CSV: drug, run, the six metrics, undefined flags.
std::string evaluation_runs_csv(const std::vector<std::pair<std::string, EvalReport>>& by_drug);

}  // namespace iopscan
