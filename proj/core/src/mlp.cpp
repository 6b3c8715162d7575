#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "hullscope/overparam.hpp"

namespace hullscope::overparam {

namespace {

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

Matrix activate(const Matrix& z, Activation act) {
  if (act == Activation::Tanh) return z.array().tanh().matrix();
  return z.cwiseMax(0.0);
}

/// Derivative of the activation expressed through its pre-activation.
Matrix activation_slope(const Matrix& z, Activation act) {
  if (act == Activation::Tanh) return (1.0 - z.array().tanh().square()).matrix();
  return (z.array() > 0.0).cast<double>().matrix();
}

void check_data(const Architecture& arch, const Dataset& data) {
  if (data.d() != arch.input_dim()) {
    throw InvalidArgument("data dimension " + std::to_string(data.d()) + " does not match model input " +
                          std::to_string(arch.input_dim()));
  }
  if (static_cast<std::size_t>(data.n_classes()) > arch.n_classes()) {
    throw InvalidArgument("data has more classes than the model outputs");
  }
}

struct ForwardPass {
  std::vector<Matrix> pre;   // pre-activations per layer
  std::vector<Matrix> post;  // post[0] = inputs, post[l+1] = activation of layer l (logits for the last)
};

ForwardPass run_forward(const Architecture& arch, const Params& p, const Matrix& inputs) {
  ForwardPass fp;
  fp.post.push_back(inputs);
  for (std::size_t l = 0; l < arch.n_layers(); ++l) {
    Matrix z = fp.post.back() * p.weights[l].transpose();
    z.rowwise() += p.biases[l].transpose();
    fp.pre.push_back(z);
    fp.post.push_back(l + 1 == arch.n_layers() ? z : activate(z, arch.activation));
  }
  return fp;
}

/// Mean cross-entropy and d(loss)/d(logits).
double output_loss(const Matrix& logits, const std::vector<int>& labels, Matrix* dlogits) {
  const auto n = logits.rows();
  double total = 0.0;
  if (dlogits) dlogits->resize(n, logits.cols());
  if (logits.cols() == 1) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double z = logits(i, 0);
      const double y = labels[static_cast<std::size_t>(i)] == 1 ? 1.0 : 0.0;
      total += softplus(z) - y * z;
      if (dlogits) (*dlogits)(i, 0) = (sigmoid(z) - y) / static_cast<double>(n);
    }
  } else {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double top = logits.row(i).maxCoeff();
      const Eigen::RowVectorXd shifted = logits.row(i).array() - top;
      const double log_norm = std::log(shifted.array().exp().sum());
      const int y = labels[static_cast<std::size_t>(i)];
      total += log_norm - shifted(y);
      if (dlogits) {
        dlogits->row(i) = (shifted.array() - log_norm).exp().matrix() / static_cast<double>(n);
        (*dlogits)(i, y) -= 1.0 / static_cast<double>(n);
      }
    }
  }
  return total / static_cast<double>(n);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

void Architecture::validate() const {
  if (layer_sizes.size() < 2) throw InvalidArgument("architecture needs an input and an output layer");
  for (const auto s : layer_sizes) {
    if (s == 0) throw InvalidArgument("layer sizes must be positive");
  }
}

Params Params::zeros(const Architecture& arch) {
  Params p;
  for (std::size_t l = 0; l < arch.n_layers(); ++l) {
    const auto in = static_cast<Eigen::Index>(arch.layer_sizes[l]);
    const auto out = static_cast<Eigen::Index>(arch.layer_sizes[l + 1]);
    p.weights.push_back(Matrix::Zero(out, in));
    p.biases.push_back(Vector::Zero(out));
  }
  return p;
}

Params Params::ones(const Architecture& arch) {
  Params p = zeros(arch);
  for (auto& w : p.weights) w.setOnes();
  for (auto& b : p.biases) b.setOnes();
  return p;
}

std::size_t Params::size() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) n += static_cast<std::size_t>(weights[l].size() + biases[l].size());
  return n;
}

double Params::sum() const {
  double s = 0.0;
  for (std::size_t l = 0; l < weights.size(); ++l) s += weights[l].sum() + biases[l].sum();
  return s;
}

Params& Params::operator*=(const Params& other) {
  for (std::size_t l = 0; l < weights.size(); ++l) {
    weights[l].array() *= other.weights[l].array();
    biases[l].array() *= other.biases[l].array();
  }
  return *this;
}

Mlp::Mlp(Architecture arch) : arch_(std::move(arch)) {
  arch_.validate();
  params_ = Params::zeros(arch_);
  mask_ = Params::ones(arch_);
}

Mlp Mlp::initialized(Architecture arch, std::uint64_t seed, std::optional<Mask> mask) {
  Mlp model(std::move(arch));
  std::mt19937_64 rng(seed);
  Params p = Params::zeros(model.arch_);
  for (std::size_t l = 0; l < model.arch_.n_layers(); ++l) {
    const double fan = static_cast<double>(model.arch_.layer_sizes[l] + model.arch_.layer_sizes[l + 1]);
    std::uniform_real_distribution<double> uni(-std::sqrt(6.0 / fan), std::sqrt(6.0 / fan));
    for (Eigen::Index i = 0; i < p.weights[l].size(); ++i) p.weights[l].data()[i] = uni(rng);
  }
  if (mask) model.set_mask(std::move(*mask));
  model.set_params(std::move(p));
  return model;
}

void Mlp::set_params(Params params) {
  if (params.weights.size() != arch_.n_layers()) throw InvalidArgument("parameter layer count mismatch");
  for (std::size_t l = 0; l < arch_.n_layers(); ++l) {
    if (params.weights[l].rows() != params_.weights[l].rows() || params.weights[l].cols() != params_.weights[l].cols() ||
        params.biases[l].size() != params_.biases[l].size()) {
      throw InvalidArgument("parameter shape mismatch in layer " + std::to_string(l));
    }
  }
  params_ = std::move(params);
  params_ *= mask_;
}

void Mlp::set_mask(Mask mask) {
  if (mask.weights.size() != arch_.n_layers()) throw InvalidArgument("mask layer count mismatch");
  for (std::size_t l = 0; l < arch_.n_layers(); ++l) {
    if (mask.weights[l].rows() != params_.weights[l].rows() || mask.weights[l].cols() != params_.weights[l].cols() ||
        mask.biases[l].size() != params_.biases[l].size()) {
      throw InvalidArgument("mask shape mismatch in layer " + std::to_string(l));
    }
    const bool binary = (mask.weights[l].array() == 0.0 || mask.weights[l].array() == 1.0).all() &&
                        (mask.biases[l].array() == 0.0 || mask.biases[l].array() == 1.0).all();
    if (!binary) throw InvalidArgument("mask entries must be 0 or 1");
  }
  mask_ = std::move(mask);
  params_ *= mask_;
}

std::size_t Mlp::active_parameter_count() const { return static_cast<std::size_t>(std::llround(mask_.sum())); }

Matrix Mlp::forward(const Matrix& inputs) const {
  if (static_cast<std::size_t>(inputs.cols()) != arch_.input_dim()) throw InvalidArgument("input dimension mismatch");
  return run_forward(arch_, params_, inputs).post.back();
}

int Mlp::predict(const Vector& x) const {
  const Matrix logits = forward(x.transpose());
  if (logits.cols() == 1) return logits(0, 0) > 0.0 ? 1 : 0;
  Eigen::Index best = 0;
  logits.row(0).maxCoeff(&best);
  return static_cast<int>(best);
}

Vector Mlp::penultimate(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != arch_.input_dim()) throw InvalidArgument("input dimension mismatch");
  const auto fp = run_forward(arch_, params_, x.transpose());
  return fp.post[fp.post.size() - 2].row(0).transpose();
}

double loss(const Mlp& model, const Dataset& data) {
  check_data(model.architecture(), data);
  return output_loss(model.forward(data.points()), data.labels(), nullptr);
}

LossGradient loss_and_gradient(const Mlp& model, const Dataset& data) {
  const auto& arch = model.architecture();
  check_data(arch, data);
  const auto fp = run_forward(arch, model.params(), data.points());
  LossGradient out;
  Matrix delta;
  out.loss = output_loss(fp.post.back(), data.labels(), &delta);
  out.gradient = Params::zeros(arch);
  for (std::size_t l = arch.n_layers(); l-- > 0;) {
    out.gradient.weights[l] = delta.transpose() * fp.post[l];
    out.gradient.biases[l] = delta.colwise().sum().transpose();
    if (l > 0) {
      delta = (delta * model.params().weights[l]).cwiseProduct(activation_slope(fp.pre[l - 1], arch.activation));
    }
  }
  return out;
}

std::uint64_t restart_seed(std::uint64_t seed, std::size_t index) {
  return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(index)));
}

TrainResult train(const Mlp& model, const Dataset& data, const TrainConfig& config) {
  check_data(model.architecture(), data);
  if (!(config.epsilon > 0.0)) throw InvalidArgument("epsilon must be > 0");
  if (config.n_restarts < 1) throw InvalidArgument("n_restarts must be >= 1");

  TrainResult result;
  result.final_loss = std::numeric_limits<double>::infinity();
  bool have_best = false;
  for (std::size_t r = 0; r < config.n_restarts; ++r) {
    RestartRecord record;
    record.seed = restart_seed(config.seed, r);
    Mlp current = Mlp::initialized(model.architecture(), record.seed, model.mask());
    Params velocity = Params::zeros(model.architecture());

    double current_loss = loss(current, data);
    std::size_t epoch = 0;
    while (epoch < config.max_epochs && current_loss > config.epsilon && std::isfinite(current_loss)) {
      auto lg = loss_and_gradient(current, data);
      Params p = current.params();
      for (std::size_t l = 0; l < p.weights.size(); ++l) {
        velocity.weights[l] = config.momentum * velocity.weights[l] - config.learning_rate * lg.gradient.weights[l];
        velocity.biases[l] = config.momentum * velocity.biases[l] - config.learning_rate * lg.gradient.biases[l];
        p.weights[l] += velocity.weights[l];
        p.biases[l] += velocity.biases[l];
      }
      velocity *= current.mask();
      current.set_params(std::move(p));
      current_loss = loss(current, data);
      ++epoch;
    }
    record.epochs = epoch;
    record.final_loss = current_loss;
    record.diverged = !std::isfinite(current_loss);
    record.reached = !record.diverged && current_loss <= config.epsilon;
    result.restarts.push_back(record);
    ++result.restarts_used;

    if (!record.diverged && (!have_best || current_loss < result.final_loss)) {
      have_best = true;
      result.final_loss = current_loss;
      result.epochs_used = epoch;
      result.model = std::move(current);
    }
    if (record.reached) break;
  }
  if (!have_best) result.model = Mlp::initialized(model.architecture(), restart_seed(config.seed, 0), model.mask());
  result.reached_epsilon = have_best && result.final_loss <= config.epsilon;
  return result;
}

TrainResult eliminate_and_retrain(const Mlp& model, const Dataset& data, const Mask& mask, const TrainConfig& config) {
  Mlp pruned = model;
  Mask combined = model.mask();
  if (mask.weights.size() != combined.weights.size()) throw InvalidArgument("mask layer count mismatch");
  combined *= mask;
  if (combined.sum() >= model.mask().sum()) {
    throw InvalidArgument("elimination plan removes no currently active parameter");
  }
  for (std::size_t l = 0; l < combined.weights.size(); ++l) {
    if (combined.weights[l].sum() + combined.biases[l].sum() == 0.0) {
      throw InvalidArgument("degenerate architecture: elimination removes every parameter of layer " +
                            std::to_string(l));
    }
  }
  pruned.set_mask(std::move(combined));
  return train(pruned, data, config);
}

boundary::Classifier as_classifier(const Mlp& model) {
  return boundary::Classifier(
      model.architecture().input_dim(), [model](const Vector& x) { return model.predict(x); }, "mlp");
}

}  // namespace hullscope::overparam
