#include "lesionlab/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

namespace lesionlab {

using json = nlohmann::json;

LinearSvmModel train_svm(const Eigen::MatrixXd& X, const std::vector<int>& y,
                         int num_classes, double lambda, int epochs,
                         std::uint64_t seed) {
  const Eigen::Index n = X.rows();
  const Eigen::Index d = X.cols();
  if (n == 0) throw data_error("empty training set");
  if (static_cast<Eigen::Index>(y.size()) != n)
    throw data_error("label count does not match sample count");
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (!X.allFinite()) throw data_error("training features contain NaN or Inf");

  std::set<int> present(y.begin(), y.end());
  if (present.size() < 2)
    throw data_error("training set must contain at least two classes");
  for (int label : present)
    if (label < 0 || label >= num_classes)
      throw data_error("label outside declared class range");

  // Augmented design matrix: constant 1 carries the (regularized) bias.
  Eigen::MatrixXd xa(n, d + 1);
  xa.leftCols(d) = X;
  xa.col(d).setOnes();

  Eigen::MatrixXd targets(n, num_classes);  // +-1 one-vs-rest encoding
  for (Eigen::Index i = 0; i < n; ++i)
    for (int c = 0; c < num_classes; ++c)
      targets(i, c) = y[static_cast<std::size_t>(i)] == c ? 1.0 : -1.0;

  const double inv_n = 1.0 / static_cast<double>(n);
  const double radius = 1.0 / std::sqrt(lambda);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(d + 1, num_classes);

  for (int t = 1; t <= epochs; ++t) {
    const Eigen::MatrixXd margins = (xa * w).cwiseProduct(targets);
    const Eigen::MatrixXd active =
        (margins.array() < 1.0).cast<double>() * targets.array();
    const double step = 1.0 / (lambda * static_cast<double>(t));
    w = (1.0 - 1.0 / static_cast<double>(t)) * w +
        (step * inv_n) * (xa.transpose() * active);
    for (int c = 0; c < num_classes; ++c) {
      const double norm = w.col(c).norm();
      if (norm > radius) w.col(c) *= radius / norm;
    }
  }

  LinearSvmModel model;
  model.weights = w.transpose();
  model.lambda = lambda;
  model.epochs = epochs;
  model.seed = seed;
  return model;
}

LinearSvmModel train_svm(const std::vector<LabeledSample>& train,
                         int num_classes, double lambda, int epochs,
                         std::uint64_t seed) {
  if (train.empty()) throw data_error("empty training set");
  const Eigen::Index d = train.front().features.size();
  Eigen::MatrixXd x(static_cast<Eigen::Index>(train.size()), d);
  std::vector<int> y(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    x.row(static_cast<Eigen::Index>(i)) = train[i].features.transpose();
    y[i] = train[i].label;
  }
  return train_svm(x, y, num_classes, lambda, epochs, seed);
}

SvmPrediction predict_svm(const LinearSvmModel& model,
                          const Eigen::VectorXd& x) {
  if (x.size() != model.dim())
    throw data_error("feature dimension does not match the SVM model");
  SvmPrediction pred;
  pred.scores = model.weights.leftCols(model.dim()) * x +
                model.weights.col(model.dim());
  pred.label = 0;
  for (int c = 1; c < model.num_classes(); ++c)
    if (pred.scores(c) > pred.scores(pred.label)) pred.label = c;
  return pred;
}

KnnModel make_knn(Eigen::MatrixXd train, std::vector<int> labels, int k) {
  if (train.rows() == 0) throw data_error("empty k-NN training set");
  if (static_cast<Eigen::Index>(labels.size()) != train.rows())
    throw data_error("label count does not match sample count");
  if (k < 1 || k > static_cast<int>(train.rows()))
    throw data_error("k must be in [1, training size]");
  return {std::move(train), std::move(labels), k};
}

KnnPrediction knn_predict(const KnnModel& model, const Eigen::VectorXd& x) {
  const Eigen::Index n = model.train.rows();
  if (n == 0) throw data_error("empty k-NN training set");
  if (x.size() != model.train.cols())
    throw data_error("feature dimension does not match the k-NN model");

  std::vector<std::pair<double, int>> dist(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    dist[static_cast<std::size_t>(i)] = {
        (model.train.row(i).transpose() - x).norm(), static_cast<int>(i)};
  }
  // (distance, insertion index) ordering fixes distance ties.
  std::sort(dist.begin(), dist.end());

  const int k = std::min<int>(model.k, static_cast<int>(n));
  KnnPrediction pred;
  pred.neighbors.assign(dist.begin(), dist.begin() + k);

  std::vector<int> votes;
  for (const auto& [d, idx] : pred.neighbors) {
    const int label = model.labels[static_cast<std::size_t>(idx)];
    if (label >= static_cast<int>(votes.size()))
      votes.resize(static_cast<std::size_t>(label) + 1, 0);
    ++votes[static_cast<std::size_t>(label)];
  }
  int best = -1;
  bool tie = false;
  for (std::size_t c = 0; c < votes.size(); ++c) {
    if (votes[c] == 0) continue;
    if (best < 0 || votes[c] > votes[static_cast<std::size_t>(best)]) {
      best = static_cast<int>(c);
      tie = false;
    } else if (votes[c] == votes[static_cast<std::size_t>(best)]) {
      tie = true;
    }
  }
  pred.label = tie ? model.labels[static_cast<std::size_t>(
                         pred.neighbors.front().second)]
                   : best;
  return pred;
}

int choose_k_loo(const Eigen::MatrixXd& train, const std::vector<int>& labels,
                 const std::vector<int>& sweep) {
  const Eigen::Index n = train.rows();
  if (n < 2) return 1;

  // Pairwise distances once; each row sorted with self excluded.
  Eigen::MatrixXd gram = train * train.transpose();
  Eigen::VectorXd sq = gram.diagonal();
  std::vector<std::vector<std::pair<double, int>>> ranked(
      static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    auto& row = ranked[static_cast<std::size_t>(i)];
    row.reserve(static_cast<std::size_t>(n) - 1);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d2 = std::max(0.0, sq(i) + sq(j) - 2.0 * gram(i, j));
      row.emplace_back(d2, static_cast<int>(j));
    }
    std::sort(row.begin(), row.end());
  }

  std::vector<int> candidates;
  for (int k : sweep) {
    const int kc = std::clamp(k, 1, static_cast<int>(n) - 1);
    if (std::find(candidates.begin(), candidates.end(), kc) ==
        candidates.end())
      candidates.push_back(kc);
  }
  if (candidates.empty()) candidates.push_back(1);
  std::sort(candidates.begin(), candidates.end());

  int best_k = candidates.front();
  int best_correct = -1;
  for (int k : candidates) {
    int correct = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& row = ranked[static_cast<std::size_t>(i)];
      std::vector<int> votes;
      for (int j = 0; j < k; ++j) {
        const int label = labels[static_cast<std::size_t>(row[static_cast<std::size_t>(j)].second)];
        if (label >= static_cast<int>(votes.size()))
          votes.resize(static_cast<std::size_t>(label) + 1, 0);
        ++votes[static_cast<std::size_t>(label)];
      }
      int best = -1;
      bool tie = false;
      for (std::size_t c = 0; c < votes.size(); ++c) {
        if (votes[c] == 0) continue;
        if (best < 0 || votes[c] > votes[static_cast<std::size_t>(best)]) {
          best = static_cast<int>(c);
          tie = false;
        } else if (votes[c] == votes[static_cast<std::size_t>(best)]) {
          tie = true;
        }
      }
      const int pred =
          tie ? labels[static_cast<std::size_t>(row.front().second)] : best;
      if (pred == labels[static_cast<std::size_t>(i)]) ++correct;
    }
    if (correct > best_correct) {
      best_correct = correct;
      best_k = k;
    }
  }
  return best_k;
}

namespace {

void write_doubles(std::ofstream& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double v = m(i, j);
      out.write(reinterpret_cast<const char*>(&v), sizeof(double));
    }
}

Eigen::MatrixXd read_doubles(std::ifstream& in, Eigen::Index rows,
                             Eigen::Index cols,
                             const std::filesystem::path& path) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) {
      double v = 0.0;
      if (!in.read(reinterpret_cast<char*>(&v), sizeof(double)))
        throw data_error("truncated model file " + path.string());
      m(i, j) = v;
    }
  return m;
}

constexpr char kMagic[4] = {'L', 'L', 'M', 'B'};
constexpr std::uint32_t kVersion = 1;

}  // namespace

void save_model(const std::filesystem::path& path, const ModelBundle& bundle) {
  json header;
  header["format"] = "lesionlab-model";
  header["version"] = kVersion;
  header["classes"] = bundle.class_names;
  header["feature_dim"] = bundle.standardizer.mean.size();
  header["layout"] = {{"color_moments", kColorMomentCount},
                      {"texture", kTextureCount},
                      {"histogram", kHistogramBins}};
  header["svm"] = {{"lambda", bundle.svm.lambda},
                   {"epochs", bundle.svm.epochs},
                   {"seed", bundle.svm.seed},
                   {"classes", bundle.svm.num_classes()}};
  header["knn"] = {{"k", bundle.knn.k},
                   {"samples", bundle.knn.train.rows()},
                   {"labels", bundle.knn.labels}};
  const std::string header_str = header.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot write model file " + path.string());
  out.write(kMagic, 4);
  const std::uint32_t version = kVersion;
  out.write(reinterpret_cast<const char*>(&version), sizeof(version));
  const std::uint64_t header_len = header_str.size();
  out.write(reinterpret_cast<const char*>(&header_len), sizeof(header_len));
  out.write(header_str.data(),
            static_cast<std::streamsize>(header_str.size()));

  write_doubles(out, bundle.standardizer.mean);
  write_doubles(out, bundle.standardizer.scale);
  write_doubles(out, bundle.svm.weights);
  write_doubles(out, bundle.knn.train);
  if (!out) throw data_error("failed writing model file " + path.string());
}

ModelBundle load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open model file " + path.string());
  char magic[4] = {};
  in.read(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0)
    throw data_error("not a lesionlab model file: " + path.string());
  std::uint32_t version = 0;
  in.read(reinterpret_cast<char*>(&version), sizeof(version));
  if (version != kVersion)
    throw data_error("unsupported model version in " + path.string());
  std::uint64_t header_len = 0;
  in.read(reinterpret_cast<char*>(&header_len), sizeof(header_len));
  std::string header_str(header_len, '\0');
  in.read(header_str.data(), static_cast<std::streamsize>(header_len));
  if (!in) throw data_error("truncated model file " + path.string());

  json header = json::parse(header_str, nullptr, false);
  if (header.is_discarded())
    throw data_error("corrupt model header in " + path.string());

  ModelBundle bundle;
  bundle.class_names = header.at("classes").get<std::vector<std::string>>();
  const auto dim = header.at("feature_dim").get<Eigen::Index>();
  const int num_classes = header.at("svm").at("classes").get<int>();
  const auto knn_samples = header.at("knn").at("samples").get<Eigen::Index>();

  bundle.standardizer.mean = read_doubles(in, dim, 1, path);
  bundle.standardizer.scale = read_doubles(in, dim, 1, path);
  bundle.svm.weights = read_doubles(in, num_classes, dim + 1, path);
  bundle.svm.lambda = header.at("svm").at("lambda").get<double>();
  bundle.svm.epochs = header.at("svm").at("epochs").get<int>();
  bundle.svm.seed = header.at("svm").at("seed").get<std::uint64_t>();
  bundle.knn.train = read_doubles(in, knn_samples, dim, path);
  bundle.knn.labels = header.at("knn").at("labels").get<std::vector<int>>();
  bundle.knn.k = header.at("knn").at("k").get<int>();
  return bundle;
}

}  // namespace lesionlab
