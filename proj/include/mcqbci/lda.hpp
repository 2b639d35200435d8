#pragma once

#include "mcqbci/error.hpp"
#include "mcqbci/jacobi.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cmath>
#include <string>
#include <vector>

namespace mcqbci {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// How between-class scatter is accumulated. paper_unweighted sums the
// outer products of (mu_i - mu) once per class; count_weighted multiplies
// each by N_i, which makes S_W + S_B equal the total scatter.
enum class SbWeighting { paper_unweighted, count_weighted };

// Rows of `samples` are feature vectors; labels[k] indexes class_labels.
// For two classes, index 1 is the positive (target) class.
template <typename Scalar>
struct BasicLabeledDataset {
  MatrixX<Scalar> samples;
  std::vector<int> labels;
  std::vector<std::string> class_labels;

  Eigen::Index size() const noexcept { return samples.rows(); }
  Eigen::Index dim() const noexcept { return samples.cols(); }
  int n_classes() const noexcept { return static_cast<int>(class_labels.size()); }
};

template <typename Scalar>
struct ClassMeans {
  std::vector<VectorX<Scalar>> means;
  std::vector<Eigen::Index> counts;
  VectorX<Scalar> grand_mean;
};

template <typename Scalar>
struct BasicScatterPair {
  MatrixX<Scalar> s_w;
  MatrixX<Scalar> s_b;
  VectorX<Scalar> grand_mean;
  std::vector<VectorX<Scalar>> class_means;
  std::vector<Eigen::Index> class_counts;
};

template <typename Scalar>
struct BasicLdaModel {
  MatrixX<Scalar> projection;  // [d x k], unit-norm columns
  std::vector<VectorX<Scalar>> class_means_projected;
  Scalar bias = Scalar(0);
  Scalar shrinkage_used = Scalar(0);
  SbWeighting sb_weighting = SbWeighting::paper_unweighted;
  std::vector<std::string> class_labels;

  Eigen::Index feature_dim() const noexcept { return projection.rows(); }
  bool is_binary() const noexcept { return projection.cols() == 1 && class_labels.size() == 2; }
};

using LabeledDataset = BasicLabeledDataset<double>;
using ScatterPair = BasicScatterPair<double>;
using LdaModel = BasicLdaModel<double>;

namespace detail {

template <typename Scalar>
void check_labels(const BasicLabeledDataset<Scalar>& data) {
  if (static_cast<Eigen::Index>(data.labels.size()) != data.size())
    throw Error(Errc::DimensionMismatch, "label count " + std::to_string(data.labels.size()) +
                                             " differs from sample count " + std::to_string(data.size()));
  for (int label : data.labels) {
    if (label < 0 || label >= data.n_classes())
      throw Error(Errc::DimensionMismatch, "label index " + std::to_string(label) + " out of range");
  }
}

}  // namespace detail

template <typename Scalar>
ClassMeans<Scalar> class_means(const BasicLabeledDataset<Scalar>& data) {
  detail::check_labels(data);
  const int n_classes = data.n_classes();
  ClassMeans<Scalar> out;
  out.means.assign(static_cast<std::size_t>(n_classes), VectorX<Scalar>::Zero(data.dim()));
  out.counts.assign(static_cast<std::size_t>(n_classes), 0);
  for (Eigen::Index k = 0; k < data.size(); ++k) {
    const auto c = static_cast<std::size_t>(data.labels[static_cast<std::size_t>(k)]);
    out.means[c] += data.samples.row(k).transpose();
    ++out.counts[c];
  }
  for (int c = 0; c < n_classes; ++c) {
    const auto i = static_cast<std::size_t>(c);
    if (out.counts[i] == 0) throw Error(Errc::EmptyClass, "class '" + data.class_labels[i] + "' has no samples");
    out.means[i] /= static_cast<Scalar>(out.counts[i]);
  }
  out.grand_mean = data.samples.colwise().mean().transpose();
  return out;
}

template <typename Scalar>
BasicScatterPair<Scalar> scatter_matrices(const BasicLabeledDataset<Scalar>& data,
                                          SbWeighting weighting = SbWeighting::paper_unweighted) {
  auto means = class_means(data);
  const Eigen::Index d = data.dim();
  BasicScatterPair<Scalar> out;
  out.s_w = MatrixX<Scalar>::Zero(d, d);
  out.s_b = MatrixX<Scalar>::Zero(d, d);

  MatrixX<Scalar> centered(data.size(), d);
  for (Eigen::Index k = 0; k < data.size(); ++k) {
    centered.row(k) = data.samples.row(k) - means.means[static_cast<std::size_t>(data.labels[static_cast<std::size_t>(k)])].transpose();
  }
  out.s_w.template selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose());
  out.s_w = out.s_w.template selfadjointView<Eigen::Lower>();

  for (std::size_t c = 0; c < means.means.size(); ++c) {
    const VectorX<Scalar> diff = means.means[c] - means.grand_mean;
    const Scalar weight = weighting == SbWeighting::count_weighted ? static_cast<Scalar>(means.counts[c]) : Scalar(1);
    out.s_b.noalias() += weight * diff * diff.transpose();
  }

  out.grand_mean = std::move(means.grand_mean);
  out.class_means = std::move(means.means);
  out.class_counts = std::move(means.counts);
  return out;
}

// Maximizes w'S_B w / w'S~_W w with S~_W = S_W + shrinkage * (tr(S_W)/d) I.
// Binary: closed form w ~ S~_W^-1 (mu_1 - mu_0). Multiclass: Cholesky
// whitening, Jacobi on the whitened S_B, back-transform, Gram-Schmidt.
template <typename Scalar>
BasicLdaModel<Scalar> fit(const BasicLabeledDataset<Scalar>& data, Scalar shrinkage = Scalar(1e-3),
                          SbWeighting weighting = SbWeighting::paper_unweighted) {
  if (!(shrinkage >= Scalar(0))) throw Error(Errc::ConfigError, "shrinkage must be nonnegative");
  if (data.n_classes() < 2) throw Error(Errc::DegenerateClasses, "need at least two classes");
  const auto sp = scatter_matrices(data, weighting);
  for (std::size_t c = 0; c < sp.class_counts.size(); ++c) {
    if (sp.class_counts[c] < 2)
      throw Error(Errc::EmptyClass, "class '" + data.class_labels[c] + "' has fewer than 2 samples");
  }
  const Eigen::Index d = data.dim();

  const Scalar data_scale = data.samples.size() ? data.samples.cwiseAbs().maxCoeff() : Scalar(0);
  Scalar spread(0);
  for (const auto& m : sp.class_means) spread = std::max(spread, (m - sp.grand_mean).cwiseAbs().maxCoeff());
  if (spread <= Scalar(1e-12) * data_scale) throw Error(Errc::DegenerateClasses, "all class means coincide");

  // When S_W vanishes (noise-free data) the ridge is scaled by S_B instead.
  Scalar ridge_base = sp.s_w.trace() / static_cast<Scalar>(d);
  if (ridge_base <= Scalar(0)) ridge_base = sp.s_b.trace() / static_cast<Scalar>(d);
  MatrixX<Scalar> s_w_reg = sp.s_w;
  s_w_reg.diagonal().array() += shrinkage * ridge_base;

  const Scalar pivot_floor = Scalar(1e-12) * s_w_reg.trace() / static_cast<Scalar>(d);
  Eigen::LLT<MatrixX<Scalar>> llt(s_w_reg);
  bool singular = llt.info() != Eigen::Success || !(pivot_floor > Scalar(0));
  if (!singular) {
    const VectorX<Scalar> pivots = llt.matrixLLT().diagonal().array().square();
    singular = pivots.minCoeff() < pivot_floor;
  }
  if (singular)
    throw Error(Errc::SingularWithin, "regularized within-class scatter is singular; increase shrinkage");

  BasicLdaModel<Scalar> model;
  model.shrinkage_used = shrinkage;
  model.sb_weighting = weighting;
  model.class_labels = data.class_labels;

  if (data.n_classes() == 2) {
    const VectorX<Scalar> delta = sp.class_means[1] - sp.class_means[0];
    VectorX<Scalar> w = llt.solve(delta);
    w.normalize();
    if (w.dot(delta) < Scalar(0)) w = -w;
    model.projection = w;
    model.bias = -w.dot(sp.class_means[0] + sp.class_means[1]) / Scalar(2);
  } else {
    const auto& l = llt.matrixL();
    MatrixX<Scalar> tmp = l.solve(sp.s_b);
    MatrixX<Scalar> whitened = l.solve(tmp.transpose());
    const auto eig = jacobi_eigen(whitened);
    const Eigen::Index k = std::min<Eigen::Index>(data.n_classes() - 1, d);
    MatrixX<Scalar> w = llt.matrixU().solve(eig.vectors.leftCols(k));
    for (Eigen::Index j = 0; j < k; ++j) {
      for (Eigen::Index i = 0; i < j; ++i) w.col(j) -= w.col(i).dot(w.col(j)) * w.col(i);
      w.col(j).normalize();
    }
    model.projection = std::move(w);
  }
  for (const auto& m : sp.class_means) model.class_means_projected.push_back(model.projection.transpose() * m);
  return model;
}

template <typename Scalar, typename Derived>
Scalar score(const BasicLdaModel<Scalar>& model, const Eigen::MatrixBase<Derived>& x) {
  if (!model.is_binary()) throw Error(Errc::DimensionMismatch, "score requires a binary model");
  if (x.size() != model.feature_dim())
    throw Error(Errc::DimensionMismatch, "feature length " + std::to_string(x.size()) + " != model dimension " +
                                             std::to_string(model.feature_dim()));
  return model.projection.col(0).dot(x) + model.bias;
}

// Returns a class index into model.class_labels.
template <typename Scalar, typename Derived>
int classify(const BasicLdaModel<Scalar>& model, const Eigen::MatrixBase<Derived>& x) {
  if (model.is_binary()) return score(model, x) > Scalar(0) ? 1 : 0;
  if (x.size() != model.feature_dim())
    throw Error(Errc::DimensionMismatch, "feature length " + std::to_string(x.size()) + " != model dimension " +
                                             std::to_string(model.feature_dim()));
  const VectorX<Scalar> projected = model.projection.transpose() * x;
  int best = 0;
  Scalar best_dist = (projected - model.class_means_projected[0]).squaredNorm();
  for (std::size_t c = 1; c < model.class_means_projected.size(); ++c) {
    const Scalar dist = (projected - model.class_means_projected[c]).squaredNorm();
    if (dist < best_dist) {
      best_dist = dist;
      best = static_cast<int>(c);
    }
  }
  return best;
}

}  // namespace mcqbci
