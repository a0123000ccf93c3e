#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "codedfl/fixed_point.hpp"
#include "codedfl/idx_io.hpp"

namespace codedfl::learning {

using RealMatrix = Eigen::MatrixXd;

/// Feature/label matrices with one-hot labels, plus a test split.
struct Dataset {
  RealMatrix train_x;               // m x d
  RealMatrix train_y;               // m x c, one-hot rows
  std::vector<int> train_labels;    // m
  RealMatrix test_x;
  RealMatrix test_y;
  std::vector<int> test_labels;
  int classes = 0;
};

/// Random Fourier features for the Gaussian kernel exp(-gamma ||x-y||^2):
/// z(x) = sqrt(2/F) * cos(x W^T + b), W rows ~ N(0, 2*gamma*I), b ~ U[0, 2pi).
struct RbfEmbedding {
  RealMatrix w;           // features x in_dim
  Eigen::RowVectorXd b;   // features
  int features = 0;

  static RbfEmbedding make(int in_dim, int features, double kernel_gamma, std::uint64_t seed);
  RealMatrix apply(const RealMatrix& x) const;
};

struct SyntheticParams {
  int train_samples = 600;
  int test_samples = 200;
  int dim = 20;
  int classes = 3;
  /// Label noise relative to the teacher scores' standard deviation.
  double label_noise = 0.3;
  /// Power-law feature spectrum: dimension j has variance ~ j^(-decay)
  /// (normalized). 0 keeps features isotropic; ~1 mimics the slowly-rising
  /// accuracy curves of embedded image data.
  double spectrum_decay = 0.0;
};

/// Multiclass data with a linear teacher: labels are the argmax of a random
/// linear map plus noise. Gives regression structure and meaningful accuracy.
Dataset make_synthetic(const SyntheticParams& p, std::uint64_t seed);

/// One-hot encoding with `classes` columns.
RealMatrix one_hot(const std::vector<int>& labels, int classes);

/// Pixels scaled to [0,1], flattened row-major.
RealMatrix images_to_features(const IdxImages& images);

/// One device's slice of the training data plus the precomputed Gram matrices
/// X^T X and X^T Y on both the real and the fixed-point paths.
struct DevicePartition {
  int device_id = 0;        // 1-based
  RealMatrix x;             // n_i x d
  RealMatrix y;             // n_i x c
  RealMatrix gram_xx;       // d x d
  RealMatrix gram_xy;       // d x c
  fxp::FxMatrix fx_gram_xx;
  fxp::FxMatrix fx_gram_xy;
  int samples = 0;
};

/// Stable-sorts rows by label, splits contiguously into `devices` batches of
/// size floor(m/devices) with the remainder spread one-each to the first
/// devices, and precomputes the Gram matrices.
std::vector<DevicePartition> partition_noniid(const RealMatrix& x, const RealMatrix& y,
                                              const std::vector<int>& labels, int devices,
                                              const fxp::FxConfig& cfg);

/// n_i * grad f_i = X^T X Theta - X^T Y from the precomputed Grams.
RealMatrix local_gradient(const DevicePartition& p, const RealMatrix& theta);
fxp::FxMatrix local_gradient_fx(const DevicePartition& p, const fxp::FxMatrix& theta);

/// Gradient-descent step: Theta - mu * (G/m + lambda * Theta).
RealMatrix aggregate_update(const RealMatrix& g_sum, const RealMatrix& theta, double mu,
                            double lambda, std::int64_t m);

/// Step-decay learning rate: initial * factor^(#steps at or before epoch).
struct LearningRateSchedule {
  double initial = 6.0;
  double factor = 0.8;
  std::vector<int> decay_epochs = {200, 350};

  double at(int epoch) const;
};

double global_loss(const RealMatrix& x, const RealMatrix& y, const RealMatrix& theta,
                   double lambda);
double accuracy(const RealMatrix& x, const std::vector<int>& labels, const RealMatrix& theta);

}  // namespace codedfl::learning
