#include "lesionlab/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "lesionlab/rng.hpp"

namespace lesionlab {

SegScores seg_metrics(const Mask& segmented, const Mask& ground_truth) {
  if (!same_shape(segmented, ground_truth))
    throw data_error("segmented and ground-truth masks differ in size");
  const std::int64_t g = ground_truth.area();
  if (g == 0) throw data_error("ground-truth mask is empty");

  std::int64_t s = 0, inter = 0;
  for (Eigen::Index y = 0; y < segmented.height(); ++y) {
    for (Eigen::Index x = 0; x < segmented.width(); ++x) {
      const bool in_s = segmented.m(y, x) != 0;
      const bool in_g = ground_truth.m(y, x) != 0;
      s += in_s;
      inter += in_s && in_g;
    }
  }
  const std::int64_t uni = s + g - inter;
  const std::int64_t s_only = s - inter;
  const std::int64_t g_only = g - inter;

  SegScores scores;
  scores.mol = uni > 0 ? static_cast<double>(inter) / static_cast<double>(uni)
                       : 0.0;
  scores.mus = static_cast<double>(g_only) / static_cast<double>(g);
  scores.mos = static_cast<double>(s_only) / static_cast<double>(g);
  scores.dsm = static_cast<double>(2 * inter) / static_cast<double>(s + g);
  scores.er = static_cast<double>(s_only + g_only) / static_cast<double>(g);
  return scores;
}

ClassificationMetrics classification_metrics(const ConfusionMatrix& cm) {
  const int c = cm.num_classes();
  if (c == 0 || cm.total() == 0)
    throw data_error("empty confusion matrix");

  ClassificationMetrics out;
  out.per_class.resize(static_cast<std::size_t>(c));
  const std::int64_t total = cm.total();
  std::int64_t trace = 0;

  for (int k = 0; k < c; ++k) {
    const std::int64_t tp = cm.counts(k, k);
    const std::int64_t fn = cm.counts.row(k).sum() - tp;
    const std::int64_t fp = cm.counts.col(k).sum() - tp;
    trace += tp;

    ClassScore& score = out.per_class[static_cast<std::size_t>(k)];
    if (tp + fp > 0) {
      score.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    } else {
      score.precision = 0.0;
      score.flagged = true;
    }
    if (tp + fn > 0) {
      score.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    } else {
      score.recall = 0.0;
      score.flagged = true;
    }
    if (score.precision + score.recall > 0.0) {
      score.f_measure = 2.0 * score.precision * score.recall /
                        (score.precision + score.recall);
    } else {
      score.f_measure = 0.0;
      score.flagged = true;
    }
    out.macro_precision += score.precision;
    out.macro_recall += score.recall;
    out.macro_f += score.f_measure;
  }
  out.macro_precision /= c;
  out.macro_recall /= c;
  out.macro_f /= c;
  out.accuracy = static_cast<double>(trace) / static_cast<double>(total);
  out.micro_f = out.accuracy;
  return out;
}

Aggregate aggregate(const std::vector<double>& values) {
  Aggregate agg;
  if (values.empty()) return agg;
  agg.min = *std::min_element(values.begin(), values.end());
  agg.max = *std::max_element(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  agg.avg = sum / static_cast<double>(values.size());
  return agg;
}

std::vector<double> Report::metric_values(int fraction,
                                          const std::string& classifier,
                                          const std::string& metric) const {
  std::vector<double> values;
  for (const TrialResult& t : trials) {
    if (t.fraction != fraction) continue;
    const ClassificationMetrics& m = classifier == "svm"   ? t.svm
                                     : classifier == "knn" ? t.knn
                                                           : t.fused;
    if (metric == "accuracy") {
      values.push_back(m.accuracy);
    } else if (metric == "macro_f") {
      values.push_back(m.macro_f);
    } else if (metric == "macro_precision") {
      values.push_back(m.macro_precision);
    } else if (metric == "macro_recall") {
      values.push_back(m.macro_recall);
    }
  }
  return values;
}

Split stratified_split(const std::vector<int>& labels, int num_classes,
                       int fraction_percent, std::uint64_t seed) {
  std::vector<std::vector<int>> by_class(
      static_cast<std::size_t>(num_classes));
  for (std::size_t i = 0; i < labels.size(); ++i)
    by_class[static_cast<std::size_t>(labels[i])].push_back(
        static_cast<int>(i));

  const double fraction = fraction_percent / 100.0;
  SplitMix64 rng(seed);
  Split split;
  for (int c = 0; c < num_classes; ++c) {
    auto& members = by_class[static_cast<std::size_t>(c)];
    const auto size = static_cast<std::int64_t>(members.size());
    if (size < 2)
      throw data_error("class " + std::to_string(c) +
                       " has fewer than 2 samples; cannot stratify");
    std::int64_t take =
        std::llround(fraction * static_cast<double>(size));
    take = std::max<std::int64_t>(take, 1);
    if (take >= size)
      throw data_error("class " + std::to_string(c) +
                       " too small to stratify at " +
                       std::to_string(fraction_percent) + "% training");
    shuffle_in_place(members, rng);
    for (std::int64_t i = 0; i < size; ++i) {
      if (i < take) {
        split.train.push_back(members[static_cast<std::size_t>(i)]);
      } else {
        split.test.push_back(members[static_cast<std::size_t>(i)]);
      }
    }
  }
  return split;
}

void add_fused(ConfusionMatrix& cm, int truth, const FusedPrediction& pred) {
  if (pred.contains(truth)) {
    cm.add(truth, truth);
  } else {
    cm.add(truth, pred.svm_label);
  }
}

namespace {

TrialResult run_one_trial(const Eigen::MatrixXd& features,
                          const std::vector<int>& labels, int num_classes,
                          const TrialConfig& config, int fraction, int trial) {
  const std::uint64_t seed =
      child_seed(config.master_seed, static_cast<std::uint64_t>(fraction),
                 static_cast<std::uint64_t>(trial));
  const Split split =
      stratified_split(labels, num_classes, fraction, seed);

  const auto n_train = static_cast<Eigen::Index>(split.train.size());
  const auto n_test = static_cast<Eigen::Index>(split.test.size());
  Eigen::MatrixXd train_raw(n_train, features.cols());
  std::vector<int> train_labels(split.train.size());
  for (Eigen::Index i = 0; i < n_train; ++i) {
    train_raw.row(i) = features.row(split.train[static_cast<std::size_t>(i)]);
    train_labels[static_cast<std::size_t>(i)] =
        labels[static_cast<std::size_t>(
            split.train[static_cast<std::size_t>(i)])];
  }

  const Standardizer st = Standardizer::fit(train_raw);
  const Eigen::MatrixXd train = st.transform_rows(train_raw);

  const LinearSvmModel svm =
      train_svm(train, train_labels, num_classes, config.svm_lambda,
                config.svm_epochs, seed);
  const int k = choose_k_loo(train, train_labels, config.knn_sweep);
  const KnnModel knn = make_knn(train, train_labels, k);

  TrialResult result;
  result.fraction = fraction;
  result.trial = trial;
  result.chosen_k = k;
  result.svm_cm = ConfusionMatrix(num_classes);
  result.knn_cm = ConfusionMatrix(num_classes);
  result.fused_cm = ConfusionMatrix(num_classes);

  for (Eigen::Index i = 0; i < n_test; ++i) {
    const int idx = split.test[static_cast<std::size_t>(i)];
    const int truth = labels[static_cast<std::size_t>(idx)];
    const Eigen::VectorXd x =
        st.transform(features.row(idx).transpose());
    const int svm_label = predict_svm(svm, x).label;
    const int knn_label = knn_predict(knn, x).label;
    result.svm_cm.add(truth, svm_label);
    result.knn_cm.add(truth, knn_label);
    add_fused(result.fused_cm, truth, fuse_or(svm_label, knn_label));
  }

  result.svm = classification_metrics(result.svm_cm);
  result.knn = classification_metrics(result.knn_cm);
  result.fused = classification_metrics(result.fused_cm);
  return result;
}

}  // namespace

Report run_trials(const Eigen::MatrixXd& features,
                  const std::vector<int>& labels,
                  const std::vector<std::string>& class_names,
                  const TrialConfig& config) {
  if (features.rows() == 0) throw data_error("no samples to evaluate");
  if (static_cast<Eigen::Index>(labels.size()) != features.rows())
    throw data_error("label count does not match sample count");
  const int num_classes = static_cast<int>(class_names.size());
  for (int label : labels)
    if (label < 0 || label >= num_classes)
      throw data_error("label outside declared class range");
  if (config.trials < 1) throw config_error("trial count must be >= 1");
  if (config.fractions.empty()) throw config_error("no training fractions");
  for (int f : config.fractions)
    if (f < 1 || f > 99)
      throw config_error("training fraction must be in [1, 99] percent");

  Report report;
  report.class_names = class_names;
  report.config = config;

  struct Task {
    int fraction;
    int trial;
  };
  std::vector<Task> tasks;
  for (int fraction : config.fractions)
    for (int trial = 0; trial < config.trials; ++trial)
      tasks.push_back({fraction, trial});

  report.trials.resize(tasks.size());
  unsigned n_threads = config.threads > 0
                           ? static_cast<unsigned>(config.threads)
                           : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads,
                                 static_cast<unsigned>(tasks.size()));

  // Each task writes only its own slot, so the gathered report is identical
  // no matter how many workers run.
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) break;
      try {
        report.trials[i] = run_one_trial(features, labels, num_classes,
                                         config, tasks[i].fraction,
                                         tasks[i].trial);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(tasks.size());
        break;
      }
    }
  };
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return report;
}

}  // namespace lesionlab
