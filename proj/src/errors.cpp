#include "bee/errors.hpp"

namespace bee {
namespace {

std::string join_violations(const std::vector<std::string>& v) {
  std::string out = "invalid configuration:";
  for (const auto& s : v) out += "\n  - " + s;
  return out;
}

}  // namespace

NumericError::NumericError(const std::string& what, int layer, long step)
    : std::runtime_error(what), layer_(layer), step_(step) {}

ValidationError::ValidationError(std::vector<std::string> violations)
    : std::invalid_argument(join_violations(violations)), violations_(std::move(violations)) {}

}  // namespace bee
