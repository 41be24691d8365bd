#include "bee/agent/config.hpp"

#include "bee/errors.hpp"

namespace bee::agent {

std::vector<std::string> BacConfig::violations() const {
  std::vector<std::string> v;
  if (!(lambda >= 0.0 && lambda <= 1.0)) v.push_back("agent.lambda must lie in [0, 1]");
  if (!(expectile_tau > 0.5 && expectile_tau < 1.0)) v.push_back("agent.expectile_tau must lie in (0.5, 1)");
  if (!(value_alpha > 0.0)) v.push_back("agent.value_alpha must be positive");
  if (!(lr > 0.0)) v.push_back("agent.lr must be positive");
  if (batch_size < 1) v.push_back("agent.batch_size must be >= 1");
  if (!(gamma >= 0.0 && gamma < 1.0)) v.push_back("agent.gamma must lie in [0, 1)");
  if (!(polyak_rho >= 0.0 && polyak_rho <= 1.0)) v.push_back("agent.polyak_rho must lie in [0, 1]");
  if (warmup_transitions < 0) v.push_back("agent.warmup_transitions must be >= 0");
  if (!(smoothing_sigma >= 0.0)) v.push_back("agent.smoothing_sigma must be >= 0");
  if (!(smoothing_clip >= 0.0)) v.push_back("agent.smoothing_clip must be >= 0");
  if (!(exploration_noise >= 0.0)) v.push_back("agent.exploration_noise must be >= 0");
  if (!(init_alpha > 0.0)) v.push_back("agent.init_alpha must be positive");
  if (!(ada_decay > 0.0 && ada_decay < 1.0)) v.push_back("agent.ada_decay must lie in (0, 1)");
  if (buffer_capacity < 1) v.push_back("agent.buffer_capacity must be >= 1");
  for (int h : hidden_sizes)
    if (h < 1) {
      v.push_back("agent.hidden_sizes entries must be positive");
      break;
    }
  return v;
}

void BacConfig::validate() const {
  auto v = violations();
  if (!v.empty()) throw ValidationError(std::move(v));
}

std::string to_string(LambdaMode m) {
  switch (m) {
    case LambdaMode::fixed: return "fixed";
    case LambdaMode::min: return "min";
    case LambdaMode::max: return "max";
    case LambdaMode::ada: return "ada";
  }
  return "?";
}

std::string to_string(ValueLoss v) {
  switch (v) {
    case ValueLoss::expectile: return "expectile";
    case ValueLoss::sparse_q: return "sparse_q";
    case ValueLoss::exponential_q: return "exponential_q";
  }
  return "?";
}

std::string to_string(ExploreVariant v) { return v == ExploreVariant::entropy ? "entropy" : "target_smoothing"; }

LambdaMode lambda_mode_from_string(const std::string& s) {
  if (s == "fixed") return LambdaMode::fixed;
  if (s == "min") return LambdaMode::min;
  if (s == "max") return LambdaMode::max;
  if (s == "ada") return LambdaMode::ada;
  throw ArgumentError("unknown lambda mode '" + s + "'");
}

ValueLoss value_loss_from_string(const std::string& s) {
  if (s == "expectile") return ValueLoss::expectile;
  if (s == "sparse_q" || s == "sql") return ValueLoss::sparse_q;
  if (s == "exponential_q" || s == "eql") return ValueLoss::exponential_q;
  throw ArgumentError("unknown value loss '" + s + "'");
}

ExploreVariant explore_variant_from_string(const std::string& s) {
  if (s == "entropy") return ExploreVariant::entropy;
  if (s == "target_smoothing") return ExploreVariant::target_smoothing;
  throw ArgumentError("unknown explore variant '" + s + "'");
}

}  // namespace bee::agent
