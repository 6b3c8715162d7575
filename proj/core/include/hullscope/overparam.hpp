#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hullscope/arrays.hpp"
#include "hullscope/boundary.hpp"

namespace hullscope::overparam {

enum class Activation { Tanh, Relu };

/// Layer sizes run from the input dimension through the hidden widths to the
/// output width. An output width of 1 means binary logistic regression on a
/// single logit (label 1 <=> logit > 0); wider outputs use softmax.
struct Architecture {
  std::vector<std::size_t> layer_sizes;
  Activation activation = Activation::Tanh;

  std::size_t input_dim() const { return layer_sizes.front(); }
  std::size_t output_dim() const { return layer_sizes.back(); }
  std::size_t n_layers() const { return layer_sizes.size() - 1; }
  std::size_t n_classes() const { return output_dim() == 1 ? 2 : output_dim(); }
  void validate() const;
};

/// Per-layer tensors with the same shapes as the weights (out x in) and
/// biases (out). Used for parameters, gradients and masks alike.
struct Params {
  std::vector<Matrix> weights;
  std::vector<Vector> biases;

  static Params zeros(const Architecture& arch);
  static Params ones(const Architecture& arch);
  std::size_t size() const;
  double sum() const;
  Params& operator*=(const Params& other);  ///< elementwise
};

/// 1 = active, 0 = eliminated (frozen at zero).
using Mask = Params;

class Mlp {
 public:
  explicit Mlp(Architecture arch);

  /// Xavier-uniform weights, zero biases, then the mask applied.
  static Mlp initialized(Architecture arch, std::uint64_t seed, std::optional<Mask> mask = std::nullopt);

  const Architecture& architecture() const noexcept { return arch_; }
  const Params& params() const noexcept { return params_; }
  const Mask& mask() const noexcept { return mask_; }

  /// Replaces parameters; masked entries are forced to zero.
  void set_params(Params params);
  /// Replaces the mask and zeroes newly eliminated parameters.
  void set_mask(Mask mask);

  std::size_t parameter_count() const { return params_.size(); }
  std::size_t active_parameter_count() const;

  /// Logits, one row per input row.
  Matrix forward(const Matrix& inputs) const;
  int predict(const Vector& x) const;
  /// Activations of the last hidden layer (the input itself when there is none).
  Vector penultimate(const Vector& x) const;

 private:
  Architecture arch_;
  Params params_;
  Mask mask_;
};

/// Mean cross-entropy of the model on the dataset.
double loss(const Mlp& model, const Dataset& data);

struct LossGradient {
  double loss = 0.0;
  Params gradient;  ///< unmasked
};

LossGradient loss_and_gradient(const Mlp& model, const Dataset& data);

inline constexpr double kDefaultEpsilon = 0.05;

struct TrainConfig {
  double epsilon = kDefaultEpsilon;
  std::size_t max_epochs = 4000;
  std::size_t n_restarts = 3;
  double learning_rate = 0.2;
  double momentum = 0.9;
  std::uint64_t seed = 0;
};

struct RestartRecord {
  std::uint64_t seed = 0;
  double final_loss = 0.0;
  std::size_t epochs = 0;
  bool diverged = false;
  bool reached = false;
};

struct TrainResult {
  double final_loss = 0.0;  ///< best over restarts
  bool reached_epsilon = false;
  std::size_t epochs_used = 0;  ///< epochs of the best restart
  std::size_t restarts_used = 0;
  std::vector<RestartRecord> restarts;
  Mlp model{Architecture{{1, 1}}};  ///< parameters of the best restart
};

/// Seed of restart `index` for a run seeded with `seed`.
std::uint64_t restart_seed(std::uint64_t seed, std::size_t index);

/// Full-batch gradient descent with momentum from a fresh initialisation per
/// restart (architecture and mask taken from `model`). Stops at the first
/// restart whose loss reaches epsilon; diverged restarts are recorded.
TrainResult train(const Mlp& model, const Dataset& data, const TrainConfig& config);

/// Retrains from scratch with `mask` applied on top of the model's mask.
/// Throws if the mask removes no active parameter or empties a layer.
TrainResult eliminate_and_retrain(const Mlp& model, const Dataset& data, const Mask& mask, const TrainConfig& config);

enum class Regime { Over, Perfect, Under };

const char* to_string(Regime r) noexcept;

struct EliminationAttempt {
  std::string description;
  Mask mask;
  std::size_t eliminated = 0;
  double final_loss = 0.0;
  bool reached = false;
  std::vector<std::uint64_t> seeds;
};

struct RegimeConfig {
  TrainConfig train;
  std::size_t elimination_budget = 8;
};

struct RegimeCertificate {
  Regime regime = Regime::Under;
  double epsilon = 0.0;
  Architecture architecture;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> seeds;  ///< restart seeds of the full-model run
  TrainResult full;                  ///< training of the unpruned model
  std::vector<EliminationAttempt> attempts;
  std::optional<std::size_t> winning_attempt;  ///< index into attempts when Over
  std::string note;
};

/// Candidate eliminations in search order: single parameters by ascending
/// magnitude, then hidden units by ascending norm of their outgoing weights.
std::vector<EliminationAttempt> elimination_candidates(const Mlp& trained);

/// Under if the full model never reaches epsilon; otherwise Over at the first
/// budgeted elimination that still reaches epsilon after retraining, else Perfect.
RegimeCertificate classify_regime(const Architecture& arch, const Dataset& data, const RegimeConfig& config);

boundary::Classifier as_classifier(const Mlp& model);

struct GroupStats {
  std::size_t count = 0;
  std::size_t correct = 0;
  std::optional<double> accuracy;  ///< empty for an empty group
  double mean_distance = 0.0;
};

struct GeneralizationReport {
  std::size_t n_test = 0;
  double overall_accuracy = 0.0;
  GroupStats interpolation;  ///< test points inside the training hull
  GroupStats extrapolation;  ///< test points certifiably outside it
  GroupStats unresolved;     ///< membership could not be certified
};

GeneralizationReport decompose_generalization(const boundary::Classifier& clf, const Dataset& train,
                                              const Dataset& test,
                                              double dist_tol = hull::kDefaultMembershipTolerance);

}  // namespace hullscope::overparam
