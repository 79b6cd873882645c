#include "graphembed/classify.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include <Eigen/Dense>

#include "graphembed/error.hpp"
#include "graphembed/random.hpp"
#include "graphembed/sgns.hpp"
#include "parallel.hpp"
#include "text_util.hpp"

namespace graphembed {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// ---------------------------------------------------------------------------------------
// Folds

std::vector<std::size_t> FoldSplit::members(int f) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold.size(); ++i)
    if (fold[i] == f) out.push_back(i);
  return out;
}

std::vector<std::size_t> FoldSplit::complement(int f) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold.size(); ++i)
    if (fold[i] != f) out.push_back(i);
  return out;
}

FoldSplit stratified_folds(std::span<const ClassId> labels, std::size_t k, std::uint64_t seed,
                           std::vector<std::string>* warnings) {
  const auto n = labels.size();
  if (k < 2) throw ContractViolation("folds: k must be at least 2");
  if (n < k)
    throw ContractViolation("folds: " + std::to_string(n) + " labeled nodes cannot fill " +
                            std::to_string(k) + " folds");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

  std::map<ClassId, std::size_t> counts;
  for (auto c : labels) ++counts[c];
  const bool stratify = std::all_of(counts.begin(), counts.end(),
                                    [&](const auto& kv) { return kv.second >= k; });
  if (!stratify && warnings)
    warnings->push_back("some class has fewer than " + std::to_string(k) +
                        " members; folds are not stratified");
  if (stratify)
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return labels[a] < labels[b]; });

  FoldSplit split;
  split.k = k;
  split.seed = seed;
  split.stratified = stratify;
  split.fold.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) split.fold[order[i]] = static_cast<int>(i % k);
  return split;
}

// ---------------------------------------------------------------------------------------
// Logistic regression

namespace {

MatrixXd with_bias_column(const MatrixXd& x) {
  MatrixXd a(x.rows(), x.cols() + 1);
  a.leftCols(x.cols()) = x;
  a.col(x.cols()).setOnes();
  return a;
}

// Objective on features already carrying a trailing ones column.
double binary_objective(const MatrixXd& xa, const VectorXd& y, double inv_c, const VectorXd& theta,
                        VectorXd* grad, VectorXd* curvature) {
  const auto d = theta.size() - 1;
  const VectorXd z = xa * theta;
  double loss = 0.0;
  VectorXd coeff(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double m = y(i) * z(i);
    loss -= log_sigmoid(m);
    const double p = sigmoid(-m);
    coeff(i) = -y(i) * p;
    if (curvature) (*curvature)(i) = p * (1.0 - p);
  }
  const double reg = 0.5 * inv_c * theta.head(d).squaredNorm();
  if (grad) {
    *grad = xa.transpose() * coeff;
    grad->head(d) += inv_c * theta.head(d);
  }
  return loss + reg;
}

struct BinaryFit {
  VectorXd theta;
  int iterations = 0;
  double gradient_norm = 0.0;
};

// Approximate Newton direction by preconditioned conjugate gradients on Hessian-vector
// products, H v = X' (D (X v)) + reg, stopping at the forcing tolerance min(0.5, sqrt|g|) |g|.
VectorXd newton_step(const MatrixXd& xa, const VectorXd& curvature, double inv_c, const VectorXd& grad) {
  const auto p = grad.size();
  const auto d = p - 1;
  VectorXd reg = VectorXd::Constant(p, inv_c);
  reg(d) = 1e-12;
  const VectorXd precond =
      ((xa.array().square().colwise() * curvature.array()).colwise().sum().transpose() + reg.array()).inverse();
  const double gnorm = grad.norm();
  const double target = std::min(0.5, std::sqrt(gnorm)) * gnorm;

  VectorXd step = VectorXd::Zero(p);
  VectorXd r = -grad;
  VectorXd z = precond.cwiseProduct(r);
  VectorXd dir = z;
  VectorXd xv(xa.rows()), hv(p);
  double rz = r.dot(z);
  for (Eigen::Index k = 0; k < 2 * p && r.norm() > target; ++k) {
    xv.noalias() = xa * dir;
    xv.array() *= curvature.array();
    hv.noalias() = xa.transpose() * xv;
    hv += reg.cwiseProduct(dir);
    const double curv = dir.dot(hv);
    if (!(curv > 0.0)) break;
    const double a = rz / curv;
    step += a * dir;
    r -= a * hv;
    z = precond.cwiseProduct(r);
    const double rz_next = r.dot(z);
    dir = z + (rz_next / rz) * dir;
    rz = rz_next;
  }
  return step;
}

BinaryFit fit_binary(const MatrixXd& xa, const VectorXd& y, double C, VectorXd theta,
                     const LogRegOptions& options) {
  const auto p = theta.size();
  const double inv_c = 1.0 / C;
  VectorXd grad(p), curvature(y.size()), trial_grad;
  double f = binary_objective(xa, y, inv_c, theta, &grad, &curvature);
  BinaryFit fit;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    fit.gradient_norm = grad.norm();
    fit.iterations = iter;
    if (fit.gradient_norm <= options.gradient_tolerance) break;

    VectorXd step = newton_step(xa, curvature, inv_c, grad);
    double slope = grad.dot(step);
    if (!(slope < 0.0) || !step.allFinite()) {
      step = -grad;
      slope = -grad.squaredNorm();
    }

    // Near the optimum the predicted decrease is below the objective's rounding noise, so
    // Armijo cannot judge the step; take the full Newton step if it shrinks the gradient.
    if (-slope <= 1e-10 * (1.0 + std::abs(f))) {
      VectorXd trial = theta + step;
      VectorXd trial_curvature(y.size());
      const double ft = binary_objective(xa, y, inv_c, trial, &trial_grad, &trial_curvature);
      if (!(trial_grad.norm() < fit.gradient_norm)) break;
      theta = std::move(trial);
      f = ft;
      grad = trial_grad;
      curvature = std::move(trial_curvature);
      fit.iterations = iter + 1;
      fit.gradient_norm = grad.norm();
      continue;
    }

    // Armijo backtracking.
    double t = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      VectorXd trial = theta + t * step;
      const double ft = binary_objective(xa, y, inv_c, trial, nullptr, nullptr);
      if (ft <= f + 1e-4 * t * slope) {
        theta = std::move(trial);
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break; // no representable decrease left
    f = binary_objective(xa, y, inv_c, theta, &grad, &curvature);
    fit.iterations = iter + 1;
    fit.gradient_norm = grad.norm();
  }
  fit.theta = std::move(theta);
  return fit;
}

} // namespace

double logreg_objective(const MatrixXd& features, const VectorXd& targets, double C,
                        const VectorXd& theta, VectorXd* gradient) {
  if (theta.size() != features.cols() + 1)
    throw ContractViolation("logreg_objective: theta must hold dim + 1 entries");
  return binary_objective(with_bias_column(features), targets, 1.0 / C, theta, gradient, nullptr);
}

MatrixXd LogRegModel::scores(const MatrixXd& features) const {
  MatrixXd s = features * weights;
  s.rowwise() += bias.transpose();
  return s;
}

std::vector<ClassId> LogRegModel::predict(const MatrixXd& features) const {
  const MatrixXd s = scores(features);
  std::vector<ClassId> out(static_cast<std::size_t>(features.rows()), 0);
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    Eigen::Index best = -1;
    for (Eigen::Index c = 0; c < s.cols(); ++c) {
      if (!trained[static_cast<std::size_t>(c)]) continue;
      if (best < 0 || s(i, c) > s(i, best)) best = c;
    }
    out[static_cast<std::size_t>(i)] = static_cast<ClassId>(std::max<Eigen::Index>(best, 0));
  }
  return out;
}

LogRegModel train_ovr_logreg(const MatrixXd& features, std::span<const ClassId> labels,
                             std::size_t num_classes, double C, const LogRegOptions& options,
                             const LogRegModel* warm_start) {
  if (static_cast<std::size_t>(features.rows()) != labels.size())
    throw ContractViolation("logreg: feature rows and labels differ in length");
  if (!(C > 0.0)) throw ContractViolation("logreg: C must be positive");
  std::vector<std::size_t> counts(num_classes, 0);
  for (auto c : labels) {
    if (c >= num_classes) throw ContractViolation("logreg: class id out of range");
    ++counts[c];
  }
  if (std::count_if(counts.begin(), counts.end(), [](auto n) { return n > 0; }) < 2)
    throw ContractViolation("logreg: training data must contain at least two classes");

  const auto d = features.cols();
  const MatrixXd xa = with_bias_column(features);
  LogRegModel model;
  model.C = C;
  model.weights = MatrixXd::Zero(d, static_cast<Eigen::Index>(num_classes));
  model.bias = VectorXd::Zero(static_cast<Eigen::Index>(num_classes));
  model.trained.assign(num_classes, false);
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (counts[c] == 0) continue;
    VectorXd y(xa.rows());
    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = labels[static_cast<std::size_t>(i)] == c ? 1.0 : -1.0;
    VectorXd theta = VectorXd::Zero(d + 1);
    const auto col = static_cast<Eigen::Index>(c);
    if (warm_start && warm_start->trained.size() == num_classes && warm_start->trained[c] &&
        warm_start->weights.rows() == d) {
      theta.head(d) = warm_start->weights.col(col);
      theta(d) = warm_start->bias(col);
    }
    auto fit = fit_binary(xa, y, C, std::move(theta), options);
    if (!fit.theta.allFinite()) throw NumericalError("logreg: non-finite parameters");
    model.weights.col(col) = fit.theta.head(d);
    model.bias(col) = fit.theta(d);
    model.trained[c] = true;
    model.iterations = std::max(model.iterations, fit.iterations);
    model.gradient_norm = std::max(model.gradient_norm, fit.gradient_norm);
  }
  return model;
}

double micro_f1(std::span<const ClassId> predicted, std::span<const ClassId> truth) {
  if (predicted.size() != truth.size())
    throw ContractViolation("micro_f1: prediction and truth lengths differ");
  if (predicted.empty()) throw ContractViolation("micro_f1: empty input");
  // Pooled over classes: each prediction is a TP for its class or an FP for the
  // predicted class plus an FN for the true class.
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] == truth[i]) {
      ++tp;
    } else {
      ++fp;
      ++fn;
    }
  }
  // 2TP / (2TP + FP + FN) with one rounding, so single-label inputs give exactly TP / n.
  const auto denom = 2 * tp + fp + fn;
  return static_cast<double>(2 * tp) / static_cast<double>(denom);
}

// ---------------------------------------------------------------------------------------
// Grid and nested CV

std::string format_params(const HyperParams& h) {
  std::ostringstream out;
  out << "C=" << detail::format_double(h.C) << " dim=" << h.dim << " normalize=" << (h.normalize ? 1 : 0)
      << " p=" << detail::format_double(h.p) << " q=" << detail::format_double(h.q);
  return out.str();
}

std::size_t HyperGrid::size() const {
  return C_values.size() * dims.size() * normalize.size() * p_values.size() * q_values.size();
}

std::vector<EmbeddingParams> HyperGrid::embedding_points() const {
  std::vector<EmbeddingParams> out;
  for (auto d : dims)
    for (auto p : p_values)
      for (auto q : q_values) out.push_back({d, p, q});
  std::sort(out.begin(), out.end());
  return out;
}

double EvalReport::accuracy() const {
  if (outcomes.empty()) return 0.0;
  const auto correct = std::count_if(outcomes.begin(), outcomes.end(),
                                     [](const NodeOutcome& o) { return o.correct(); });
  return static_cast<double>(correct) / static_cast<double>(outcomes.size());
}

namespace {

MatrixXd gather_rows(const MatrixXd& x, const std::vector<std::size_t>& rows) {
  MatrixXd out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(rows[i]));
  return out;
}

std::vector<ClassId> gather(std::span<const ClassId> v, const std::vector<std::size_t>& idx) {
  std::vector<ClassId> out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[i] = v[idx[i]];
  return out;
}

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

void finalize(EvalReport& report) {
  const double k = static_cast<double>(report.fold_scores.size());
  report.mean = std::accumulate(report.fold_scores.begin(), report.fold_scores.end(), 0.0) / k;
  double var = 0.0;
  for (double s : report.fold_scores) var += (s - report.mean) * (s - report.mean);
  report.stddev = std::sqrt(var / k);
}

// Scores one held-out fold; returns its micro-F1 and records per-node outcomes.
double score_fold(const MatrixXd& features, std::span<const ClassId> labels, std::size_t num_classes,
                  const std::vector<std::size_t>& train, const std::vector<std::size_t>& test,
                  double C, const LogRegOptions& options, EvalReport* report, int fold) {
  const auto train_y = gather(labels, train);
  const auto test_y = gather(labels, test);
  auto model = train_ovr_logreg(gather_rows(features, train), train_y, num_classes, C, options);
  auto pred = model.predict(gather_rows(features, test));
  if (report)
    for (std::size_t i = 0; i < test.size(); ++i)
      report->outcomes[test[i]] = {test_y[i], pred[i], fold};
  return micro_f1(pred, test_y);
}

std::uint64_t outer_seed(std::uint64_t seed) { return derive_seed({seed, 0x0e7e4}); }
std::uint64_t inner_seed(std::uint64_t seed, int fold) {
  return derive_seed({seed, 0x1a4e4, static_cast<std::uint64_t>(fold)});
}

} // namespace

EvalReport nested_cv(const EmbeddingProvider& provider, const LabelTable& labels,
                     const HyperGrid& grid, std::uint64_t seed, const CvOptions& options) {
  if (grid.size() == 0) throw ContractViolation("nested_cv: empty hyperparameter grid");
  const auto n = labels.size();
  const auto num_classes = labels.num_classes();
  std::span<const ClassId> y(labels.labels);

  // Feature matrices per (embedding point, normalize).
  const auto points = grid.embedding_points();
  std::map<EmbeddingParams, MatrixXd> raw;
  std::map<EmbeddingParams, MatrixXd> normalized;
  for (const auto& pt : points) {
    EmbeddingMatrix emb;
    const auto context = "embedding provider failed for dim=" + std::to_string(pt.dim) + " p=" +
                         detail::format_double(pt.p) + " q=" + detail::format_double(pt.q) + ": ";
    try {
      emb = provider(pt);
    } catch (const ResourceError& e) {
      throw ResourceError(context + e.what());
    } catch (const ContractViolation& e) {
      throw ContractViolation(context + e.what());
    } catch (const Error& e) {
      throw Error(context + e.what());
    }
    if (emb.num_nodes() != n)
      throw ContractViolation("nested_cv: embedding rows do not match the label table");
    if (std::find(grid.normalize.begin(), grid.normalize.end(), true) != grid.normalize.end())
      normalized[pt] = normalize_rows(emb.rows);
    raw[pt] = std::move(emb.rows);
  }
  auto features_for = [&](const EmbeddingParams& pt, bool norm) -> const MatrixXd& {
    return norm ? normalized.at(pt) : raw.at(pt);
  };

  const auto c_values = sorted_unique(grid.C_values);
  std::vector<bool> norm_values(grid.normalize.begin(), grid.normalize.end());
  std::sort(norm_values.begin(), norm_values.end());
  norm_values.erase(std::unique(norm_values.begin(), norm_values.end()), norm_values.end());

  EvalReport report;
  report.seed = seed;
  report.outcomes.assign(n, NodeOutcome{});
  const auto outer = stratified_folds(y, options.outer_folds, outer_seed(seed), &report.warnings);

  for (int f = 0; f < static_cast<int>(options.outer_folds); ++f) {
    const auto train = outer.complement(f);
    const auto test = outer.members(f);
    const auto train_y = gather(y, train);
    const auto inner = stratified_folds(train_y, options.inner_folds, inner_seed(seed, f));

    // A chain runs the C values in ascending order for one (inner fold, embedding,
    // normalize) triple, warm-starting each fit from the previous one.
    struct Chain {
      int inner_fold;
      EmbeddingParams point;
      bool normalize;
      std::vector<double> scores; // per C
    };
    std::vector<Chain> chains;
    for (int g = 0; g < static_cast<int>(options.inner_folds); ++g)
      for (const auto& pt : points)
        for (bool norm : norm_values) chains.push_back({g, pt, norm, {}});

    detail::parallel_for(chains.size(), options.workers, [&](std::size_t ci) {
      auto& chain = chains[ci];
      const auto& x = features_for(chain.point, chain.normalize);
      const auto in_train = inner.complement(chain.inner_fold);
      const auto in_test = inner.members(chain.inner_fold);
      std::vector<std::size_t> tr(in_train.size()), te(in_test.size());
      for (std::size_t i = 0; i < tr.size(); ++i) tr[i] = train[in_train[i]];
      for (std::size_t i = 0; i < te.size(); ++i) te[i] = train[in_test[i]];
      const MatrixXd xtr = gather_rows(x, tr);
      const MatrixXd xte = gather_rows(x, te);
      const auto ytr = gather(y, tr);
      const auto yte = gather(y, te);
      LogRegModel previous;
      bool have_previous = false;
      for (double C : c_values) {
        auto model = train_ovr_logreg(xtr, ytr, num_classes, C, options.logreg,
                                      have_previous ? &previous : nullptr);
        chain.scores.push_back(micro_f1(model.predict(xte), yte));
        previous = std::move(model);
        have_previous = true;
      }
    });

    // Mean inner score per grid point; ties resolve to the smallest parameter tuple.
    std::map<HyperParams, double> totals;
    for (const auto& chain : chains)
      for (std::size_t i = 0; i < c_values.size(); ++i) {
        HyperParams h{c_values[i], chain.point.dim, chain.normalize, chain.point.p, chain.point.q};
        totals[h] += chain.scores[i];
      }
    HyperParams best{};
    double best_score = -1.0;
    for (const auto& [h, total] : totals) {
      const double mean = total / static_cast<double>(options.inner_folds);
      if (mean > best_score) {
        best_score = mean;
        best = h;
      }
    }

    report.chosen.push_back(best);
    report.fold_scores.push_back(score_fold(features_for(best.embedding(), best.normalize), y,
                                            num_classes, train, test, best.C, options.logreg,
                                            &report, f));
  }
  finalize(report);
  return report;
}

EvalReport cross_validate(const EmbeddingMatrix& embedding, const LabelTable& labels,
                          const HyperParams& params, std::uint64_t seed, const CvOptions& options) {
  const auto n = labels.size();
  if (embedding.num_nodes() != n)
    throw ContractViolation("cross_validate: embedding rows do not match the label table");
  std::span<const ClassId> y(labels.labels);
  const MatrixXd x = params.normalize ? normalize_rows(embedding.rows) : embedding.rows;
  EvalReport report;
  report.algorithm = embedding.algorithm;
  report.seed = seed;
  report.outcomes.assign(n, NodeOutcome{});
  const auto outer = stratified_folds(y, options.outer_folds, outer_seed(seed), &report.warnings);
  for (int f = 0; f < static_cast<int>(options.outer_folds); ++f) {
    report.chosen.push_back(params);
    report.fold_scores.push_back(score_fold(x, y, labels.num_classes(), outer.complement(f),
                                            outer.members(f), params.C, options.logreg, &report, f));
  }
  finalize(report);
  return report;
}

// ---------------------------------------------------------------------------------------
// Report text format

void write_report(const EvalReport& report, const Graph& g, const LabelTable& labels,
                  std::ostream& out) {
  out << "# evaluation report\n";
  out << "algorithm=" << report.algorithm << '\n';
  out << "seed=" << report.seed << '\n';
  out << "folds=" << report.fold_scores.size() << '\n';
  for (std::size_t f = 0; f < report.fold_scores.size(); ++f) {
    out << "fold." << f << ".micro_f1=" << detail::format_double(report.fold_scores[f]) << '\n';
    if (f < report.chosen.size()) out << "fold." << f << ".params=" << format_params(report.chosen[f]) << '\n';
  }
  out << "mean_micro_f1=" << detail::format_double(report.mean) << '\n';
  out << "std_micro_f1=" << detail::format_double(report.stddev) << '\n';
  out << "accuracy=" << detail::format_double(report.accuracy()) << '\n';
  for (const auto& w : report.warnings) out << "warning=" << w << '\n';
  out << "# node true predicted correct fold\n";
  out << "table\n";
  for (NodeIndex u = 0; u < report.outcomes.size(); ++u) {
    const auto& o = report.outcomes[u];
    out << g.token(u) << ' ' << labels.class_names[o.truth] << ' ' << labels.class_names[o.predicted]
        << ' ' << (o.correct() ? 1 : 0) << ' ' << o.fold << '\n';
  }
}

namespace {

HyperParams parse_params(std::string_view text, std::size_t line_no) {
  HyperParams h;
  for (auto field : detail::split_fields(text)) {
    auto eq = field.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "malformed params field");
    auto key = field.substr(0, eq);
    auto value = detail::parse_double(field.substr(eq + 1));
    if (!value) throw ParseError(line_no, "non-numeric params value");
    if (key == "C") h.C = *value;
    else if (key == "dim") h.dim = static_cast<std::size_t>(*value);
    else if (key == "normalize") h.normalize = *value != 0.0;
    else if (key == "p") h.p = *value;
    else if (key == "q") h.q = *value;
    else throw ParseError(line_no, "unknown params key '" + std::string(key) + "'");
  }
  return h;
}

} // namespace

EvalReport read_report(std::istream& in, const Graph& g, const LabelTable& labels) {
  EvalReport report;
  report.outcomes.assign(g.num_nodes(), NodeOutcome{});
  std::map<std::string, ClassId> class_index;
  for (std::size_t c = 0; c < labels.class_names.size(); ++c)
    class_index[labels.class_names[c]] = static_cast<ClassId>(c);
  std::map<std::size_t, double> fold_scores;
  std::map<std::size_t, HyperParams> chosen;
  std::vector<bool> seen(g.num_nodes(), false);
  bool in_table = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (!in_table) {
      if (line == "table") {
        in_table = true;
        continue;
      }
      auto eq = line.find('=');
      if (eq == std::string::npos) throw ParseError(line_no, "expected key=value");
      const auto key = line.substr(0, eq);
      const auto value = line.substr(eq + 1);
      if (key == "algorithm") report.algorithm = value;
      else if (key == "seed") report.seed = std::stoull(value);
      else if (key == "warning") report.warnings.push_back(value);
      else if (key == "mean_micro_f1") report.mean = std::stod(value);
      else if (key == "std_micro_f1") report.stddev = std::stod(value);
      else if (key.rfind("fold.", 0) == 0) {
        const auto dot = key.find('.', 5);
        const auto f = std::stoul(key.substr(5, dot - 5));
        const auto what = key.substr(dot + 1);
        if (what == "micro_f1") fold_scores[f] = std::stod(value);
        else if (what == "params") chosen[f] = parse_params(value, line_no);
      }
      continue;
    }
    auto fields = detail::split_fields(line);
    if (fields.size() != 5) throw ParseError(line_no, "expected 'node true predicted correct fold'");
    auto node = g.nodes().find(fields[0]);
    if (!node) throw ParseError(line_no, "unknown node '" + std::string(fields[0]) + "'");
    auto truth = class_index.find(std::string(fields[1]));
    auto pred = class_index.find(std::string(fields[2]));
    auto fold = detail::parse_int(fields[4]);
    if (truth == class_index.end() || pred == class_index.end() || !fold)
      throw ParseError(line_no, "malformed report row");
    report.outcomes[*node] = {truth->second, pred->second, static_cast<int>(*fold)};
    if ((fields[3] == "1") != report.outcomes[*node].correct())
      throw ParseError(line_no, "correct flag disagrees with the classes");
    seen[*node] = true;
  }
  for (NodeIndex u = 0; u < g.num_nodes(); ++u)
    if (!seen[u]) throw ParseError(0, "report has no prediction for node '" + g.token(u) + "'");
  for (auto& [f, s] : fold_scores) report.fold_scores.push_back(s);
  for (auto& [f, h] : chosen) report.chosen.push_back(h);
  return report;
}

} // namespace graphembed
