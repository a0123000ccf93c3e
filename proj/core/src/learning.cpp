#include "codedfl/learning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "codedfl/rng.hpp"

namespace codedfl::learning {

RbfEmbedding RbfEmbedding::make(int in_dim, int features, double kernel_gamma,
                                std::uint64_t seed) {
  if (features < 1) throw std::invalid_argument("embedding needs at least one feature");
  Rng rng = make_rng(derive_seed(seed, {stream::kEmbed}));
  std::normal_distribution<double> normal(0.0, std::sqrt(2.0 * kernel_gamma));
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  RbfEmbedding e;
  e.features = features;
  e.w.resize(features, in_dim);
  for (int i = 0; i < features; ++i)
    for (int j = 0; j < in_dim; ++j) e.w(i, j) = normal(rng);
  e.b.resize(features);
  for (int i = 0; i < features; ++i) e.b(i) = phase(rng);
  return e;
}

RealMatrix RbfEmbedding::apply(const RealMatrix& x) const {
  RealMatrix z = x * w.transpose();
  z.rowwise() += b;
  const double scale = std::sqrt(2.0 / double(features));
  return scale * z.array().cos().matrix();
}

RealMatrix one_hot(const std::vector<int>& labels, int classes) {
  RealMatrix y = RealMatrix::Zero(std::ptrdiff_t(labels.size()), classes);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= classes)
      throw std::invalid_argument("label outside [0, classes)");
    y(std::ptrdiff_t(i), labels[i]) = 1.0;
  }
  return y;
}

RealMatrix images_to_features(const IdxImages& images) {
  const int d = images.rows * images.cols;
  RealMatrix x(images.count, d);
  for (int i = 0; i < images.count; ++i)
    for (int j = 0; j < d; ++j)
      x(i, j) = double(images.pixels[std::size_t(i) * d + j]) / 255.0;
  return x;
}

Dataset make_synthetic(const SyntheticParams& p, std::uint64_t seed) {
  Rng rng = make_rng(derive_seed(seed, {stream::kSynth}));
  std::normal_distribution<double> normal(0.0, 1.0);
  const int m = p.train_samples + p.test_samples;

  // Per-dimension scales, normalized so the mean feature variance is 1/dim
  // regardless of the decay.
  std::vector<double> scale(std::size_t(p.dim));
  double sum_sq = 0.0;
  for (int j = 0; j < p.dim; ++j) {
    scale[std::size_t(j)] = std::pow(double(j + 1), -0.5 * p.spectrum_decay);
    sum_sq += scale[std::size_t(j)] * scale[std::size_t(j)];
  }
  const double norm = std::sqrt(sum_sq / double(p.dim)) * std::sqrt(double(p.dim));
  for (auto& s : scale) s /= norm;

  RealMatrix x(m, p.dim);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < p.dim; ++j) x(i, j) = normal(rng) * scale[std::size_t(j)];
  RealMatrix teacher(p.dim, p.classes);
  for (int i = 0; i < p.dim; ++i)
    for (int j = 0; j < p.classes; ++j) teacher(i, j) = normal(rng);
  RealMatrix scores = x * teacher;
  const double score_std =
      std::sqrt(scores.array().square().mean() - std::pow(scores.array().mean(), 2));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < p.classes; ++j)
      scores(i, j) += p.label_noise * score_std * normal(rng);
  std::vector<int> labels(m);
  for (int i = 0; i < m; ++i) {
    int best = 0;
    for (int j = 1; j < p.classes; ++j)
      if (scores(i, j) > scores(i, best)) best = j;
    labels[i] = best;
  }
  Dataset ds;
  ds.classes = p.classes;
  ds.train_x = x.topRows(p.train_samples);
  ds.test_x = x.bottomRows(p.test_samples);
  ds.train_labels.assign(labels.begin(), labels.begin() + p.train_samples);
  ds.test_labels.assign(labels.begin() + p.train_samples, labels.end());
  ds.train_y = one_hot(ds.train_labels, p.classes);
  ds.test_y = one_hot(ds.test_labels, p.classes);
  return ds;
}

std::vector<DevicePartition> partition_noniid(const RealMatrix& x, const RealMatrix& y,
                                              const std::vector<int>& labels, int devices,
                                              const fxp::FxConfig& cfg) {
  const int m = int(x.rows());
  if (devices < 1 || devices > m)
    throw std::invalid_argument("need 1 <= devices <= sample count");
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return labels[a] < labels[b]; });

  const int base = m / devices;
  const int extra = m % devices;
  std::vector<DevicePartition> parts;
  parts.reserve(devices);
  int offset = 0;
  for (int dev = 0; dev < devices; ++dev) {
    const int n = base + (dev < extra ? 1 : 0);
    DevicePartition p;
    p.device_id = dev + 1;
    p.samples = n;
    p.x.resize(n, x.cols());
    p.y.resize(n, y.cols());
    for (int r = 0; r < n; ++r) {
      p.x.row(r) = x.row(order[offset + r]);
      p.y.row(r) = y.row(order[offset + r]);
    }
    offset += n;
    p.gram_xx = p.x.transpose() * p.x;
    p.gram_xy = p.x.transpose() * p.y;
    const fxp::FxMatrix xq = fxp::from_real(p.x, cfg);
    const fxp::FxMatrix yq = fxp::from_real(p.y, cfg);
    p.fx_gram_xx = fxp::matmul(xq.transposed(), xq);
    p.fx_gram_xy = fxp::matmul(xq.transposed(), yq);
    parts.push_back(std::move(p));
  }
  return parts;
}

RealMatrix local_gradient(const DevicePartition& p, const RealMatrix& theta) {
  return p.gram_xx * theta - p.gram_xy;
}

fxp::FxMatrix local_gradient_fx(const DevicePartition& p, const fxp::FxMatrix& theta) {
  return fxp::sub(fxp::matmul(p.fx_gram_xx, theta), p.fx_gram_xy);
}

RealMatrix aggregate_update(const RealMatrix& g_sum, const RealMatrix& theta, double mu,
                            double lambda, std::int64_t m) {
  if (m <= 0) throw std::invalid_argument("sample count must be positive");
  return theta - mu * (g_sum / double(m) + lambda * theta);
}

double LearningRateSchedule::at(int epoch) const {
  double mu = initial;
  for (int step : decay_epochs)
    if (epoch >= step) mu *= factor;
  return mu;
}

double global_loss(const RealMatrix& x, const RealMatrix& y, const RealMatrix& theta,
                   double lambda) {
  const double residual = (x * theta - y).squaredNorm();
  return residual / (2.0 * double(x.rows())) + 0.5 * lambda * theta.squaredNorm();
}

double accuracy(const RealMatrix& x, const std::vector<int>& labels, const RealMatrix& theta) {
  const RealMatrix scores = x * theta;
  int correct = 0;
  for (int i = 0; i < scores.rows(); ++i) {
    int best = 0;
    for (int j = 1; j < scores.cols(); ++j)
      if (scores(i, j) > scores(i, best)) best = j;
    if (best == labels[std::size_t(i)]) ++correct;
  }
  return double(correct) / double(scores.rows());
}

}  // namespace codedfl::learning
