#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "graphembed/embedding.hpp"
#include "graphembed/graph.hpp"

namespace graphembed {

/// Fold id per position of the label vector it was built from.
struct FoldSplit {
  std::vector<int> fold;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  bool stratified = true;

  /// Positions assigned to fold f, ascending.
  std::vector<std::size_t> members(int f) const;
  std::vector<std::size_t> complement(int f) const;
};

/// Shuffles positions, then deals them round-robin class by class so every fold gets
/// each class's count within +-1 and fold sizes differ by at most one. Falls back to an
/// unstratified deal (with a warning) when some class has fewer than k members.
FoldSplit stratified_folds(std::span<const ClassId> labels, std::size_t k, std::uint64_t seed,
                           std::vector<std::string>* warnings = nullptr);

struct LogRegOptions {
  double gradient_tolerance = 1e-6;
  int max_iterations = 1000;
};

/// One-vs-rest L2-regularized logistic regression. Per class c the objective is
///   sum_i log(1 + exp(-y_i (x_i . w_c + b_c))) + ||w_c||^2 / (2 C),  y_i = +-1,
/// with the bias unregularized. Classes absent from training never win a prediction.
struct LogRegModel {
  Eigen::MatrixXd weights; // dim x classes
  Eigen::VectorXd bias;    // classes
  std::vector<bool> trained;
  double C = 1.0;
  int iterations = 0;
  double gradient_norm = 0.0;

  Eigen::MatrixXd scores(const Eigen::MatrixXd& features) const;
  /// Argmax of per-class scores; ties go to the lowest class id.
  std::vector<ClassId> predict(const Eigen::MatrixXd& features) const;
};

/// Objective and gradient for one binary problem; `theta` holds w followed by b.
/// Targets are +-1.
double logreg_objective(const Eigen::MatrixXd& features, const Eigen::VectorXd& targets, double C,
                        const Eigen::VectorXd& theta, Eigen::VectorXd* gradient = nullptr);

/// Truncated Newton (conjugate gradients plus Armijo backtracking) per class. `warm_start`, when given, seeds the parameters.
LogRegModel train_ovr_logreg(const Eigen::MatrixXd& features, std::span<const ClassId> labels,
                             std::size_t num_classes, double C, const LogRegOptions& options = {},
                             const LogRegModel* warm_start = nullptr);

/// Micro-averaged F1 over classes from pooled true/false positives and false negatives.
double micro_f1(std::span<const ClassId> predicted, std::span<const ClassId> truth);

/// Parameters that change the embedding itself.
struct EmbeddingParams {
  std::size_t dim = 128;
  double p = 1.0;
  double q = 1.0;

  friend auto operator<=>(const EmbeddingParams&, const EmbeddingParams&) = default;
};

/// A full grid point. Ties in model selection go to the lexicographically smallest
/// (C, dim, normalize, p, q).
struct HyperParams {
  double C = 1.0;
  std::size_t dim = 128;
  bool normalize = false;
  double p = 1.0;
  double q = 1.0;

  EmbeddingParams embedding() const { return {dim, p, q}; }
  friend auto operator<=>(const HyperParams&, const HyperParams&) = default;
};

std::string format_params(const HyperParams& h);

struct HyperGrid {
  std::vector<double> C_values{0.25, 0.5, 1.0, 2.0, 4.0};
  std::vector<std::size_t> dims{128, 256};
  std::vector<bool> normalize{false, true};
  std::vector<double> p_values{1.0};
  std::vector<double> q_values{1.0};

  std::size_t size() const;
  std::vector<EmbeddingParams> embedding_points() const;
};

struct NodeOutcome {
  ClassId truth = 0;
  ClassId predicted = 0;
  int fold = -1;

  bool correct() const { return truth == predicted; }
};

struct EvalReport {
  std::string algorithm;
  std::uint64_t seed = 0;
  std::vector<double> fold_scores;
  double mean = 0.0;
  /// Population standard deviation over folds.
  double stddev = 0.0;
  std::vector<HyperParams> chosen;
  /// Indexed by node; each node's prediction from the fold where it was held out.
  std::vector<NodeOutcome> outcomes;
  std::vector<std::string> warnings;

  double accuracy() const;
};

using EmbeddingProvider = std::function<EmbeddingMatrix(const EmbeddingParams&)>;

struct CvOptions {
  std::size_t outer_folds = 5;
  std::size_t inner_folds = 4;
  unsigned workers = 1;
  LogRegOptions logreg;
};

/// Outer k-fold loop; inside each outer training set an inner stratified CV picks the
/// grid point with the best mean micro-F1, which is refit on the outer training set and
/// scored on the held-out fold. Each embedding point is requested from the provider once.
EvalReport nested_cv(const EmbeddingProvider& provider, const LabelTable& labels,
                     const HyperGrid& grid, std::uint64_t seed, const CvOptions& options = {});

/// Plain k-fold CV of fixed features and hyperparameters over the outer folds that
/// nested_cv would use for the same seed.
EvalReport cross_validate(const EmbeddingMatrix& embedding, const LabelTable& labels,
                          const HyperParams& params, std::uint64_t seed,
                          const CvOptions& options = {});

void write_report(const EvalReport& report, const Graph& g, const LabelTable& labels,
                  std::ostream& out);
EvalReport read_report(std::istream& in, const Graph& g, const LabelTable& labels);

} // namespace graphembed
