#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

#include "lesionlab/classifiers.hpp"
#include "lesionlab/core.hpp"

namespace lesionlab {

/// Segmentation scores of a segmented mask S against ground truth G. With
/// s = |S|, g = |G|, i = |S and G|:
///   MOL = i / |S or G|      (Jaccard overlap)
///   MUS = |G - S| / g       (under-segmentation)
///   MOS = |S - G| / g       (over-segmentation)
///   DSM = 2i / (s + g)      (Dice similarity)
///   ER  = (|S - G| + |G - S|) / g
struct SegScores {
  double mol = 0.0;
  double mus = 0.0;
  double mos = 0.0;
  double dsm = 0.0;
  double er = 0.0;
};

/// Throws data_error for mismatched dimensions or an empty ground truth.
SegScores seg_metrics(const Mask& segmented, const Mask& ground_truth);

/// Rows are true classes, columns predicted classes.
struct ConfusionMatrix {
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> counts;

  explicit ConfusionMatrix(int num_classes = 0) {
    counts.setZero(num_classes, num_classes);
  }
  void add(int truth, int predicted) { ++counts(truth, predicted); }
  int num_classes() const { return static_cast<int>(counts.rows()); }
  std::int64_t total() const { return counts.sum(); }
};

struct ClassScore {
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  bool flagged = false;  // a 0/0 was defined as 0
};

struct ClassificationMetrics {
  std::vector<ClassScore> per_class;
  double accuracy = 0.0;  // trace / total
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f = 0.0;
  double micro_f = 0.0;  // micro-averaged F equals accuracy for single-label
};

/// Per-class one-vs-rest precision, recall and F-measure plus overall
/// accuracy and unweighted macro averages. 0/0 ratios are defined as 0 and
/// flagged. Throws data_error on an empty matrix.
ClassificationMetrics classification_metrics(const ConfusionMatrix& cm);

/// The experiment protocol: stratified random splits at each training
/// fraction, repeated independently with per-trial derived seeds.
struct TrialConfig {
  std::vector<int> fractions = {30, 40, 50, 60, 70};  // percent
  int trials = 20;
  std::uint64_t master_seed = 0;
  double svm_lambda = 1e-4;
  int svm_epochs = 200;
  std::vector<int> knn_sweep = {1, 3, 5, 7, 9};
  int threads = 0;  // 0 = hardware concurrency
};

struct TrialResult {
  int fraction = 0;
  int trial = 0;
  int chosen_k = 0;
  ClassificationMetrics svm;
  ClassificationMetrics knn;
  ClassificationMetrics fused;
  ConfusionMatrix svm_cm;
  ConfusionMatrix knn_cm;
  ConfusionMatrix fused_cm;
};

struct Aggregate {
  double min = 0.0;
  double avg = 0.0;
  double max = 0.0;
};

Aggregate aggregate(const std::vector<double>& values);

struct Report {
  std::vector<std::string> class_names;
  TrialConfig config;
  std::vector<TrialResult> trials;  // ordered by (fraction, trial)

  std::vector<double> metric_values(int fraction, const std::string& classifier,
                                    const std::string& metric) const;
};

/// Stratified split of sample indices per class: train count =
/// round(fraction * class size) with a floor of 1 and at least one test
/// sample. The shuffle is seeded by child_seed(master, fraction, trial), so
/// adding a fraction never perturbs another fraction's trials. Throws
/// data_error naming any class too small to stratify.
struct Split {
  std::vector<int> train;
  std::vector<int> test;
};

Split stratified_split(const std::vector<int>& labels, int num_classes,
                       int fraction_percent, std::uint64_t seed);

/// Run the full protocol: for every fraction and trial, split, standardize
/// on the training rows, train SVM and k-NN (k picked from the sweep by
/// leave-one-out on the training set), evaluate both and their OR fusion on
/// the held-out rows. Trials may run in parallel; results are gathered in a
/// fixed order so the report is identical to sequential execution.
Report run_trials(const Eigen::MatrixXd& features,
                  const std::vector<int>& labels,
                  const std::vector<std::string>& class_names,
                  const TrialConfig& config);

/// Scoring convention for fused prediction sets: a correct set increments
/// the true-class diagonal, an entirely wrong set increments
/// (truth, svm label).
void add_fused(ConfusionMatrix& cm, int truth, const FusedPrediction& pred);

}  // namespace lesionlab
