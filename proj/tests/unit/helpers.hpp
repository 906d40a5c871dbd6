#pragma once

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>

#include "chernflow/torus.hpp"

namespace testing {

inline constexpr double kPi = std::numbers::pi;

inline double rel_err(const chernflow::ScalarField& a, const chernflow::ScalarField& b) {
  return (a - b).sup_norm() / std::max(b.sup_norm(), 1e-300);
}

inline double sup_diff(const chernflow::ScalarField& a, const chernflow::ScalarField& b) {
  return (a - b).sup_norm();
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  static std::mt19937_64 rng(std::random_device{}());
  auto dir = std::filesystem::temp_directory_path() / ("chernflow-" + tag + "-" + std::to_string(rng() % 1000000007));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing
