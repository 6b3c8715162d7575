#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "hullscope/overparam.hpp"

namespace hullscope::overparam {

const char* to_string(Regime r) noexcept {
  switch (r) {
    case Regime::Over:
      return "over";
    case Regime::Perfect:
      return "perfect";
    case Regime::Under:
      return "under";
  }
  return "under";
}

std::vector<EliminationAttempt> elimination_candidates(const Mlp& trained) {
  const auto& arch = trained.architecture();
  const auto& params = trained.params();
  const auto& mask = trained.mask();

  auto layer_active = [&](std::size_t l) { return mask.weights[l].sum() + mask.biases[l].sum(); };

  struct Single {
    double magnitude;
    std::size_t layer;
    bool is_bias;
    Eigen::Index row;
    Eigen::Index col;
  };
  std::vector<Single> singles;
  for (std::size_t l = 0; l < arch.n_layers(); ++l) {
    if (layer_active(l) <= 1.0) continue;
    for (Eigen::Index i = 0; i < params.weights[l].rows(); ++i) {
      for (Eigen::Index j = 0; j < params.weights[l].cols(); ++j) {
        if (mask.weights[l](i, j) != 0.0) singles.push_back({std::abs(params.weights[l](i, j)), l, false, i, j});
      }
      if (mask.biases[l](i) != 0.0) singles.push_back({std::abs(params.biases[l](i)), l, true, i, 0});
    }
  }
  std::stable_sort(singles.begin(), singles.end(),
                   [](const Single& a, const Single& b) { return a.magnitude < b.magnitude; });

  std::vector<EliminationAttempt> out;
  for (const auto& s : singles) {
    EliminationAttempt a;
    a.mask = Params::ones(arch);
    std::ostringstream os;
    if (s.is_bias) {
      a.mask.biases[s.layer](s.row) = 0.0;
      os << "bias[" << s.layer << "][" << s.row << "]";
    } else {
      a.mask.weights[s.layer](s.row, s.col) = 0.0;
      os << "weight[" << s.layer << "][" << s.row << "][" << s.col << "]";
    }
    a.description = os.str();
    a.eliminated = 1;
    out.push_back(std::move(a));
  }

  struct Unit {
    double outgoing;
    std::size_t layer;
    Eigen::Index index;
  };
  std::vector<Unit> units;
  for (std::size_t l = 0; l + 1 < arch.n_layers(); ++l) {
    for (Eigen::Index i = 0; i < params.weights[l].rows(); ++i) {
      const bool active = mask.weights[l].row(i).sum() + mask.biases[l](i) + mask.weights[l + 1].col(i).sum() > 0.0;
      if (active && params.weights[l].rows() > 1) units.push_back({params.weights[l + 1].col(i).norm(), l, i});
    }
  }
  std::stable_sort(units.begin(), units.end(), [](const Unit& a, const Unit& b) { return a.outgoing < b.outgoing; });
  for (const auto& u : units) {
    EliminationAttempt a;
    a.mask = Params::ones(arch);
    a.mask.weights[u.layer].row(u.index).setZero();
    a.mask.biases[u.layer](u.index) = 0.0;
    a.mask.weights[u.layer + 1].col(u.index).setZero();
    Mask effective = mask;
    effective *= a.mask;
    a.eliminated = static_cast<std::size_t>(std::llround(mask.sum() - effective.sum()));
    std::ostringstream os;
    os << "unit[" << u.layer << "][" << u.index << "]";
    a.description = os.str();
    out.push_back(std::move(a));
  }
  return out;
}

RegimeCertificate classify_regime(const Architecture& arch, const Dataset& data, const RegimeConfig& config) {
  if (config.elimination_budget < 1 || config.train.n_restarts < 1 || config.train.max_epochs < 1) {
    throw InvalidArgument("regime search budgets must be >= 1");
  }
  RegimeCertificate cert;
  cert.architecture = arch;
  cert.epsilon = config.train.epsilon;
  cert.seed = config.train.seed;

  const Mlp blank(arch);
  cert.full = train(blank, data, config.train);
  for (const auto& r : cert.full.restarts) cert.seeds.push_back(r.seed);

  std::ostringstream note;
  if (!cert.full.reached_epsilon) {
    cert.regime = Regime::Under;
    note << "not reached within budget: best loss " << cert.full.final_loss << " over " << cert.full.restarts_used
         << " restarts of " << config.train.max_epochs << " epochs";
    cert.note = note.str();
    return cert;
  }

  auto candidates = elimination_candidates(cert.full.model);
  const std::size_t budget = std::min(config.elimination_budget, candidates.size());
  for (std::size_t i = 0; i < budget; ++i) {
    auto attempt = std::move(candidates[i]);
    const auto result = eliminate_and_retrain(blank, data, attempt.mask, config.train);
    attempt.final_loss = result.final_loss;
    attempt.reached = result.reached_epsilon;
    for (const auto& r : result.restarts) attempt.seeds.push_back(r.seed);
    cert.attempts.push_back(std::move(attempt));
    if (result.reached_epsilon) {
      cert.regime = Regime::Over;
      cert.winning_attempt = i;
      note << "eliminating " << cert.attempts.back().description << " still reaches epsilon (loss "
           << result.final_loss << ")";
      cert.note = note.str();
      return cert;
    }
  }
  cert.regime = Regime::Perfect;
  note << "all " << budget << " budgeted eliminations failed to reach epsilon (greedy search, not exhaustive)";
  cert.note = note.str();
  return cert;
}

}  // namespace hullscope::overparam
