#pragma once

#include <map>
#include <string>
#include <vector>

#include "netwave/system.hpp"

namespace netwave {

/// A built-in worked example: the generated system plus the classification
/// the construction is designed to achieve (asserted by the test suite).
struct ModelPreset {
  std::string name;
  std::map<std::string, std::string> params;  // resolved parameter record
  System system;
  std::string summary;
};

const std::vector<std::string>& model_names();

/// Builds a preset system. Unknown names, unknown parameters, and parameters
/// outside their documented validity range raise Error with the violated
/// condition spelled out.
ModelPreset make_model(const std::string& name,
                       const std::map<std::string, std::string>& params = {});

}  // namespace netwave
