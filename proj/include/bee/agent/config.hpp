#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bee/nn/mlp.hpp"

namespace bee::agent {

enum class LambdaMode { fixed, min, max, ada };
enum class ValueLoss { expectile, sparse_q, exponential_q };
enum class ExploreVariant { entropy, target_smoothing };

struct BacConfig {
  double lambda = 0.5;
  LambdaMode lambda_mode = LambdaMode::fixed;
  double expectile_tau = 0.7;
  ValueLoss value_loss = ValueLoss::expectile;
  double value_alpha = 2.0;           ///< SQL / EQL temperature
  std::optional<double> ent_target;   ///< unset: -action_dim
  double lr = 3e-4;
  int batch_size = 256;
  double gamma = 0.99;
  double polyak_rho = 0.005;
  int warmup_transitions = 1000;
  bool double_q = true;
  ExploreVariant explore_variant = ExploreVariant::entropy;
  double smoothing_sigma = 0.2;
  double smoothing_clip = 0.5;
  double exploration_noise = 0.1;     ///< behaviour noise of the deterministic variant
  double init_alpha = 1.0;
  bool learn_alpha = true;
  double ada_decay = 0.99;
  int buffer_capacity = 1000000;
  std::vector<int> hidden_sizes{256, 256};
  nn::Activation activation = nn::Activation::relu;

  /// Throws ValidationError naming every bad field.
  void validate() const;
  std::vector<std::string> violations() const;

  double entropy_target(int action_dim) const { return ent_target ? *ent_target : -static_cast<double>(action_dim); }
};

std::string to_string(LambdaMode m);
std::string to_string(ValueLoss v);
std::string to_string(ExploreVariant v);
LambdaMode lambda_mode_from_string(const std::string& s);
ValueLoss value_loss_from_string(const std::string& s);
ExploreVariant explore_variant_from_string(const std::string& s);

}  // namespace bee::agent
