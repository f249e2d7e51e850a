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

#include "gleak/mlp.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <string>

#if defined(__SSE2__)
#include <pmmintrin.h>
#include <xmmintrin.h>
#endif

#include "absl/strings/str_cat.h"
#include "gleak/matrix.h"
#include "gleak/status_macros.h"

namespace gleak {
namespace {

// Adam moments of inactive units decay geometrically into the subnormal range,
// which is very slow on x86. Flushes subnormals to zero while alive and
// restores the caller's mode afterwards.
class FlushDenormalsScope {
 public:
#if defined(__SSE2__)
  FlushDenormalsScope() : saved_(_mm_getcsr()) {
    _MM_SET_FLUSH_ZERO_MODE(_MM_FLUSH_ZERO_ON);
    _MM_SET_DENORMALS_ZERO_MODE(_MM_DENORMALS_ZERO_ON);
  }
  ~FlushDenormalsScope() { _mm_setcsr(saved_); }

 private:
  unsigned int saved_;
#endif
};

constexpr char kExportMagic[] = "gleak-mlp";
constexpr int kExportVersion = 1;

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kAdamEpsilon = 1e-8;

// Column-wise log-softmax.
Eigen::MatrixXd LogSoftmax(const Eigen::MatrixXd& z) {
  Eigen::MatrixXd out(z.rows(), z.cols());
  for (Eigen::Index c = 0; c < z.cols(); ++c) {
    const double m = z.col(c).maxCoeff();
    const double lse = m + std::log((z.col(c).array() - m).exp().sum());
    out.col(c) = z.col(c).array() - lse;
  }
  return out;
}

struct Adam {
  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t t = 0;

  void Step(std::vector<double>& params, const std::vector<double>& grad,
            double lr) {
    if (m.empty()) {
      m.assign(params.size(), 0.0);
      v.assign(params.size(), 0.0);
    }
    ++t;
    const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(t));
    const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(t));
    for (std::size_t i = 0; i < params.size(); ++i) {
      m[i] = kBeta1 * m[i] + (1.0 - kBeta1) * grad[i];
      v[i] = kBeta2 * v[i] + (1.0 - kBeta2) * grad[i] * grad[i];
      params[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + kAdamEpsilon);
    }
  }
};

}  // namespace

absl::Status MlpConfig::Validate() const {
  if (hidden.empty()) {
    return absl::InvalidArgumentError("MLP needs at least one hidden layer");
  }
  for (std::size_t width : hidden) {
    if (width == 0) return absl::InvalidArgumentError("MLP hidden widths must be >= 1");
  }
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    return absl::InvalidArgumentError("MLP learning rate must be positive");
  }
  if (epochs == 0) return absl::InvalidArgumentError("MLP epochs must be >= 1");
  if (batch_size == 0) return absl::InvalidArgumentError("MLP batch size must be >= 1");
  return absl::OkStatus();
}

absl::StatusOr<MlpNetwork> MlpNetwork::Create(std::size_t input_dim,
                                              const std::vector<std::size_t>& hidden,
                                              std::size_t outputs, Rng& rng) {
  if (input_dim == 0 || outputs == 0) {
    return absl::InvalidArgumentError("MLP input and output sizes must be >= 1");
  }
  std::vector<std::size_t> sizes{input_dim};
  for (std::size_t width : hidden) {
    if (width == 0) return absl::InvalidArgumentError("MLP hidden widths must be >= 1");
    sizes.push_back(width);
  }
  sizes.push_back(outputs);
  MlpNetwork net;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const auto fan_in = static_cast<Eigen::Index>(sizes[l]);
    const auto fan_out = static_cast<Eigen::Index>(sizes[l + 1]);
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    Eigen::MatrixXd w(fan_out, fan_in);
    for (Eigen::Index c = 0; c < fan_in; ++c) {
      for (Eigen::Index r = 0; r < fan_out; ++r) {
        w(r, c) = (2.0 * rng.Uniform01() - 1.0) * limit;
      }
    }
    net.weights_.push_back(std::move(w));
    net.biases_.push_back(Eigen::VectorXd::Zero(fan_out));
  }
  return net;
}

std::size_t MlpNetwork::input_dim() const {
  return weights_.empty() ? 0 : static_cast<std::size_t>(weights_.front().cols());
}

std::size_t MlpNetwork::num_outputs() const {
  return weights_.empty() ? 0 : static_cast<std::size_t>(weights_.back().rows());
}

std::size_t MlpNetwork::num_parameters() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    n += weights_[l].size() + biases_[l].size();
  }
  return n;
}

Eigen::MatrixXd MlpNetwork::Probabilities(const Eigen::MatrixXd& features) const {
  Eigen::MatrixXd a = features;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    Eigen::MatrixXd z = weights_[l] * a;
    z.colwise() += biases_[l];
    a = l + 1 < weights_.size() ? Eigen::MatrixXd(z.cwiseMax(0.0)) : std::move(z);
  }
  return LogSoftmax(a).array().exp();
}

double MlpNetwork::Loss(const TrainingBatch& batch) const {
  Eigen::MatrixXd a = batch.features;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    Eigen::MatrixXd z = weights_[l] * a;
    z.colwise() += biases_[l];
    a = l + 1 < weights_.size() ? Eigen::MatrixXd(z.cwiseMax(0.0)) : std::move(z);
  }
  const Eigen::MatrixXd log_p = LogSoftmax(a);
  const Eigen::RowVectorXd ce = -(batch.targets.array() * log_p.array()).colwise().sum();
  return ce.dot(batch.weights) / batch.weights.sum();
}

double MlpNetwork::LossAndGradient(const TrainingBatch& batch,
                                   std::vector<double>& gradient) const {
  const std::size_t layers = weights_.size();
  // activations[l] is the input of layer l; pre[l] its pre-activation.
  std::vector<Eigen::MatrixXd> activations(layers + 1);
  std::vector<Eigen::MatrixXd> pre(layers);
  activations[0] = batch.features;
  for (std::size_t l = 0; l < layers; ++l) {
    pre[l] = weights_[l] * activations[l];
    pre[l].colwise() += biases_[l];
    if (l + 1 < layers) activations[l + 1] = pre[l].cwiseMax(0.0);
  }
  const Eigen::MatrixXd log_p = LogSoftmax(pre.back());
  const double total_weight = batch.weights.sum();
  const Eigen::VectorXd omega = batch.weights / total_weight;
  const Eigen::RowVectorXd ce = -(batch.targets.array() * log_p.array()).colwise().sum();
  const double loss = ce.dot(omega);

  // d loss / d logits = (p - t) * omega per column (targets sum to 1).
  Eigen::MatrixXd delta = (log_p.array().exp().matrix() - batch.targets) * omega.asDiagonal();
  std::vector<Eigen::MatrixXd> grad_w(layers);
  std::vector<Eigen::VectorXd> grad_b(layers);
  for (std::size_t l = layers; l-- > 0;) {
    grad_w[l] = delta * activations[l].transpose();
    grad_b[l] = delta.rowwise().sum();
    if (l > 0) {
      delta = (weights_[l].transpose() * delta).cwiseProduct(
          (pre[l - 1].array() > 0.0).cast<double>().matrix());
    }
  }
  gradient.clear();
  gradient.reserve(num_parameters());
  for (std::size_t l = 0; l < layers; ++l) {
    gradient.insert(gradient.end(), grad_w[l].data(), grad_w[l].data() + grad_w[l].size());
    gradient.insert(gradient.end(), grad_b[l].data(), grad_b[l].data() + grad_b[l].size());
  }
  return loss;
}

std::vector<double> MlpNetwork::FlatParameters() const {
  std::vector<double> out;
  out.reserve(num_parameters());
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    out.insert(out.end(), weights_[l].data(), weights_[l].data() + weights_[l].size());
    out.insert(out.end(), biases_[l].data(), biases_[l].data() + biases_[l].size());
  }
  return out;
}

void MlpNetwork::SetFlatParameters(std::span<const double> params) {
  std::size_t pos = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    std::copy_n(params.begin() + pos, weights_[l].size(), weights_[l].data());
    pos += weights_[l].size();
    std::copy_n(params.begin() + pos, biases_[l].size(), biases_[l].data());
    pos += biases_[l].size();
  }
}

bool MlpNetwork::AllFinite() const {
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    if (!weights_[l].allFinite() || !biases_[l].allFinite()) return false;
  }
  return true;
}

double GradientCheck(const MlpNetwork& network, const TrainingBatch& batch,
                     double h) {
  std::vector<double> analytic;
  network.LossAndGradient(batch, analytic);
  MlpNetwork probe = network;
  std::vector<double> params = network.FlatParameters();
  double worst = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double saved = params[i];
    params[i] = saved + h;
    probe.SetFlatParameters(params);
    const double up = probe.Loss(batch);
    params[i] = saved - h;
    probe.SetFlatParameters(params);
    const double down = probe.Loss(batch);
    params[i] = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double denom = std::max(std::abs(analytic[i]) + std::abs(numeric), 1e-6);
    worst = std::max(worst, std::abs(analytic[i] - numeric) / denom);
  }
  return worst;
}

absl::StatusOr<MlpClassifier> MlpClassifier::Train(const WeightedSampleSet& data,
                                                   const FeatureCodec& codec,
                                                   const MlpConfig& config,
                                                   std::uint64_t master_seed,
                                                   std::uint64_t stream_id) {
  GLEAK_RETURN_IF_ERROR(config.Validate());
  if (data.empty()) return absl::InvalidArgumentError("MLP training data is empty");
  const FlushDenormalsScope flush_denormals;
  if (codec.dim() == 0) return absl::InvalidArgumentError("MLP needs a feature codec");

  const std::size_t nw = data.guesses().size();
  std::map<Observable, std::size_t> slot;
  for (const auto& e : data.entries()) slot.emplace(e.observable, 0);
  const auto groups = static_cast<Eigen::Index>(slot.size());
  Eigen::MatrixXd features(codec.dim(), groups);
  Eigen::MatrixXd targets = Eigen::MatrixXd::Zero(nw, groups);
  Eigen::VectorXd weights = Eigen::VectorXd::Zero(groups);
  {
    Eigen::Index g = 0;
    for (auto& [y, index] : slot) {
      index = static_cast<std::size_t>(g);
      codec.Encode(y, {features.col(g).data(), codec.dim()});
      ++g;
    }
  }
  for (const auto& e : data.entries()) {
    const auto g = static_cast<Eigen::Index>(slot[e.observable]);
    targets(e.guess, g) += static_cast<double>(e.weight);
    weights(g) += static_cast<double>(e.weight);
  }
  for (Eigen::Index g = 0; g < groups; ++g) targets.col(g) /= weights(g);

  Rng rng(master_seed, stream_id);
  MlpClassifier model;
  model.codec_ = codec;
  GLEAK_ASSIGN_OR_RETURN(model.network_,
                         MlpNetwork::Create(codec.dim(), config.hidden, nw, rng));

  std::vector<Eigen::Index> order(groups);
  for (Eigen::Index g = 0; g < groups; ++g) order[g] = g;
  Adam adam;
  std::vector<double> params = model.network_.FlatParameters();
  std::vector<double> gradient;
  const double total_weight = weights.sum();
  const auto steps = static_cast<Eigen::Index>(std::max(
      1.0, std::ceil(total_weight / static_cast<double>(config.batch_size))));
  const Eigen::Index batch_size = (groups + std::min(steps, groups) - 1) / std::min(steps, groups);
  TrainingBatch batch;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    for (Eigen::Index i = groups - 1; i > 0; --i) {
      const auto j = static_cast<Eigen::Index>(rng.UniformIndex(i + 1));
      std::swap(order[i], order[j]);
    }
    double epoch_loss = 0.0;
    for (Eigen::Index start = 0; start < groups; start += batch_size) {
      const Eigen::Index size = std::min(batch_size, groups - start);
      batch.features.resize(features.rows(), size);
      batch.targets.resize(targets.rows(), size);
      batch.weights.resize(size);
      for (Eigen::Index b = 0; b < size; ++b) {
        const Eigen::Index g = order[start + b];
        batch.features.col(b) = features.col(g);
        batch.targets.col(b) = targets.col(g);
        batch.weights(b) = weights(g);
      }
      const double loss = model.network_.LossAndGradient(batch, gradient);
      if (!std::isfinite(loss)) {
        return absl::InternalError(
            absl::StrCat("MLP training diverged (non-finite loss) at epoch ", epoch + 1));
      }
      epoch_loss += loss * batch.weights.sum() / total_weight;
      adam.Step(params, gradient, config.learning_rate);
      model.network_.SetFlatParameters(params);
    }
    if (!model.network_.AllFinite()) {
      return absl::InternalError(
          absl::StrCat("MLP weights became non-finite at epoch ", epoch + 1));
    }
    model.epoch_losses_.push_back(epoch_loss);
  }
  return model;
}

MlpClassifier MlpClassifier::FromNetwork(MlpNetwork network, FeatureCodec codec) {
  MlpClassifier model;
  model.network_ = std::move(network);
  model.codec_ = std::move(codec);
  return model;
}

std::vector<double> MlpClassifier::Probabilities(const Observable& y) const {
  Eigen::MatrixXd x(codec_.dim(), 1);
  codec_.Encode(y, {x.data(), codec_.dim()});
  const Eigen::MatrixXd p = network_.Probabilities(x);
  return {p.data(), p.data() + p.size()};
}

std::size_t MlpClassifier::Predict(const Observable& y) const {
  return ArgmaxLowest(Probabilities(y));
}

void MlpClassifier::Export(std::ostream& out) const {
  const auto old_precision = out.precision(17);
  out << kExportMagic << ' ' << kExportVersion << '\n';
  out << "codec " << codec_.dim();
  for (double s : codec_.scales()) out << ' ' << s;
  out << '\n' << "layers " << network_.num_layers() << '\n';
  for (std::size_t l = 0; l < network_.num_layers(); ++l) {
    const auto& w = network_.weight(l);
    const auto& b = network_.bias(l);
    out << w.rows() << ' ' << w.cols() << '\n';
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) out << (c ? " " : "") << w(r, c);
      out << '\n';
    }
    for (Eigen::Index r = 0; r < b.size(); ++r) out << (r ? " " : "") << b(r);
    out << '\n';
  }
  out.precision(old_precision);
}

absl::StatusOr<MlpClassifier> MlpClassifier::Import(std::istream& in) {
  std::string magic, word;
  int version = 0;
  if (!(in >> magic >> version) || magic != kExportMagic) {
    return absl::InvalidArgumentError("not a gleak MLP export");
  }
  if (version != kExportVersion) {
    return absl::InvalidArgumentError(
        absl::StrCat("unsupported MLP export version ", version));
  }
  std::size_t dim = 0;
  if (!(in >> word >> dim) || word != "codec") {
    return absl::InvalidArgumentError("MLP export: missing codec");
  }
  std::vector<double> scales(dim);
  for (double& s : scales) {
    if (!(in >> s)) return absl::InvalidArgumentError("MLP export: bad codec scale");
  }
  GLEAK_ASSIGN_OR_RETURN(FeatureCodec codec, FeatureCodec::Create(std::move(scales)));
  std::size_t layers = 0;
  if (!(in >> word >> layers) || word != "layers" || layers == 0) {
    return absl::InvalidArgumentError("MLP export: missing layer count");
  }
  Rng unused(0, 0);
  std::vector<Eigen::MatrixXd> ws;
  std::vector<Eigen::VectorXd> bs;
  for (std::size_t l = 0; l < layers; ++l) {
    Eigen::Index rows = 0, cols = 0;
    if (!(in >> rows >> cols) || rows <= 0 || cols <= 0) {
      return absl::InvalidArgumentError("MLP export: bad layer shape");
    }
    if (l == 0 ? static_cast<std::size_t>(cols) != dim : cols != ws.back().rows()) {
      return absl::InvalidArgumentError("MLP export: layer shapes do not chain");
    }
    Eigen::MatrixXd w(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) {
        if (!(in >> w(r, c))) return absl::InvalidArgumentError("MLP export: truncated");
      }
    }
    Eigen::VectorXd b(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (!(in >> b(r))) return absl::InvalidArgumentError("MLP export: truncated");
    }
    ws.push_back(std::move(w));
    bs.push_back(std::move(b));
  }
  std::vector<std::size_t> hidden;
  for (std::size_t l = 0; l + 1 < layers; ++l) hidden.push_back(ws[l].rows());
  GLEAK_ASSIGN_OR_RETURN(
      MlpNetwork net,
      MlpNetwork::Create(dim, hidden, static_cast<std::size_t>(ws.back().rows()), unused));
  for (std::size_t l = 0; l < layers; ++l) {
    net.mutable_weight(l) = std::move(ws[l]);
    net.mutable_bias(l) = std::move(bs[l]);
  }
  return FromNetwork(std::move(net), std::move(codec));
}

}  // namespace gleak
