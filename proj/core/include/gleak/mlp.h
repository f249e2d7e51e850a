// Copyright 2026 The gleak Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GLEAK_MLP_H_
#define GLEAK_MLP_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "Eigen/Core"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "gleak/classifier.h"
#include "gleak/features.h"
#include "gleak/preprocess.h"
#include "gleak/rng.h"

namespace gleak {

struct MlpConfig {
  std::vector<std::size_t> hidden = {100, 100, 100};
  double learning_rate = 1e-3;
  std::size_t epochs = 700;
  // Training samples (total weight) per mini-batch.
  std::size_t batch_size = 1000;

  absl::Status Validate() const;
};

// Columns of `features` are inputs; columns of `targets` are probability
// vectors over guesses; `weights` are per-column loss weights.
struct TrainingBatch {
  Eigen::MatrixXd features;
  Eigen::MatrixXd targets;
  Eigen::VectorXd weights;
};

// Fully connected network with ReLU hidden layers and a softmax output,
// trained on weighted cross-entropy.
class MlpNetwork {
 public:
  MlpNetwork() = default;
  // Glorot-uniform weights, zero biases.
  static absl::StatusOr<MlpNetwork> Create(std::size_t input_dim,
                                           const std::vector<std::size_t>& hidden,
                                           std::size_t outputs, Rng& rng);

  std::size_t input_dim() const;
  std::size_t num_outputs() const;
  std::size_t num_layers() const { return weights_.size(); }
  std::size_t num_parameters() const;

  const Eigen::MatrixXd& weight(std::size_t layer) const { return weights_[layer]; }
  const Eigen::VectorXd& bias(std::size_t layer) const { return biases_[layer]; }
  Eigen::MatrixXd& mutable_weight(std::size_t layer) { return weights_[layer]; }
  Eigen::VectorXd& mutable_bias(std::size_t layer) { return biases_[layer]; }

  // Softmax outputs, one column per input column.
  Eigen::MatrixXd Probabilities(const Eigen::MatrixXd& features) const;

  // sum_b weights_b * CE(targets_b, p_b) / sum_b weights_b.
  double Loss(const TrainingBatch& batch) const;
  // Loss plus its gradient, flattened in FlatParameters() order.
  double LossAndGradient(const TrainingBatch& batch,
                         std::vector<double>& gradient) const;

  // Per layer: weights (column-major) then biases.
  std::vector<double> FlatParameters() const;
  void SetFlatParameters(std::span<const double> params);

  bool AllFinite() const;

 private:
  std::vector<Eigen::MatrixXd> weights_;
  std::vector<Eigen::VectorXd> biases_;
};

// Largest relative error |a - n| / max(|a| + |n|, 1e-6) between analytic and
// central-difference gradients of the batch loss.
double GradientCheck(const MlpNetwork& network, const TrainingBatch& batch,
                     double h = 1e-5);

// Trained network plus the codec that turns observables into inputs.
class MlpClassifier final : public Classifier {
 public:
  // Training data is grouped per distinct observable: the target is the
  // weight-normalized guess distribution seen with it and the loss weight is
  // its total weight, so an entry of weight k trains exactly as k copies.
  // Each epoch visits the groups in a fresh random order and takes
  // ceil(total weight / batch_size) Adam steps, each on an equal slice of the
  // groups. Fails on a non-finite loss.
  static absl::StatusOr<MlpClassifier> Train(const WeightedSampleSet& data,
                                             const FeatureCodec& codec,
                                             const MlpConfig& config,
                                             std::uint64_t master_seed,
                                             std::uint64_t stream_id);

  static MlpClassifier FromNetwork(MlpNetwork network, FeatureCodec codec);

  std::size_t Predict(const Observable& y) const override;
  std::size_t num_guesses() const override { return network_.num_outputs(); }

  std::vector<double> Probabilities(const Observable& y) const;
  const MlpNetwork& network() const { return network_; }
  const FeatureCodec& codec() const { return codec_; }
  // Weighted mean training loss of each epoch.
  const std::vector<double>& epoch_losses() const { return epoch_losses_; }

  // Versioned text dump of codec and parameters.
  void Export(std::ostream& out) const;
  static absl::StatusOr<MlpClassifier> Import(std::istream& in);

 private:
  MlpNetwork network_;
  FeatureCodec codec_;
  std::vector<double> epoch_losses_;
};

}  // namespace gleak

#endif  // GLEAK_MLP_H_
