#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lesionlab/features.hpp"

namespace lesionlab {

struct LabeledSample {
  FeatureVector features;
  int label = 0;  // index into the dataset's class list
  std::string image_id;
  int region_id = 0;
};

/// One-vs-rest linear SVM. The bias is carried as an augmented constant
/// feature, so each class weight vector has dim + 1 entries.
struct LinearSvmModel {
  Eigen::MatrixXd weights;  // classes x (dim + 1); last column is the bias
  double lambda = 1e-4;
  int epochs = 200;
  std::uint64_t seed = 0;

  int num_classes() const { return static_cast<int>(weights.rows()); }
  Eigen::Index dim() const { return weights.cols() - 1; }
};

/// Train one-vs-rest hinge-loss linear classifiers by deterministic
/// subgradient descent on the regularized average hinge loss with the
/// Pegasos step schedule 1/(lambda*t) and ball projection. The full-batch
/// subgradient makes training invariant to duplicating the training set and
/// bit-identical across runs; the seed is retained in the model header.
/// Throws data_error for a single-class training set or non-finite features.
LinearSvmModel train_svm(const Eigen::MatrixXd& X, const std::vector<int>& y,
                         int num_classes, double lambda = 1e-4,
                         int epochs = 200, std::uint64_t seed = 0);
LinearSvmModel train_svm(const std::vector<LabeledSample>& train,
                         int num_classes, double lambda = 1e-4,
                         int epochs = 200, std::uint64_t seed = 0);

struct SvmPrediction {
  int label = 0;
  Eigen::VectorXd scores;  // per-class w.x + b
};

/// Label = argmax of the per-class scores; ties go to the lowest class index.
/// Throws data_error on dimension mismatch.
SvmPrediction predict_svm(const LinearSvmModel& model,
                          const Eigen::VectorXd& x);

/// k-NN over retained training samples with Euclidean distance.
struct KnnModel {
  Eigen::MatrixXd train;   // samples x dim
  std::vector<int> labels;
  int k = 5;
};

/// Validates k in [1, training size]; throws data_error otherwise.
KnnModel make_knn(Eigen::MatrixXd train, std::vector<int> labels, int k);

struct KnnPrediction {
  int label = 0;
  std::vector<std::pair<double, int>> neighbors;  // (distance, train index)
};

/// Majority vote over the k nearest neighbors. Vote ties are broken by the
/// single nearest neighbor's label; distance ties by training-set insertion
/// order. Throws data_error for an empty training set or dim mismatch.
KnnPrediction knn_predict(const KnnModel& model, const Eigen::VectorXd& x);

/// Pick k from the sweep by leave-one-out accuracy on the training set
/// (ties to the smaller k). Values are clamped to the training size minus 1.
int choose_k_loo(const Eigen::MatrixXd& train, const std::vector<int>& labels,
                 const std::vector<int>& sweep);

/// Decision-level OR fusion: the prediction set {svm} union {knn}. Evaluation
/// scores a fused prediction as correct iff the true label is in the set.
struct FusedPrediction {
  int svm_label = 0;
  int knn_label = 0;

  bool contains(int label) const {
    return label == svm_label || label == knn_label;
  }
  std::vector<int> set() const {
    if (svm_label == knn_label) return {svm_label};
    return {svm_label, knn_label};
  }
};

inline FusedPrediction fuse_or(int svm_label, int knn_label) {
  return {svm_label, knn_label};
}

/// Everything needed to classify new samples: both models, the feature
/// standardization fitted on the training set, and the class list.
struct ModelBundle {
  std::vector<std::string> class_names;
  Standardizer standardizer;
  LinearSvmModel svm;
  KnnModel knn;
};

/// Versioned binary model file: magic + version + length-prefixed JSON header
/// (class list, lambda, epochs, k, seed, dims, standardization statistics)
/// followed by raw little-endian doubles for the weight and training
/// matrices.
void save_model(const std::filesystem::path& path, const ModelBundle& bundle);
ModelBundle load_model(const std::filesystem::path& path);

}  // namespace lesionlab
