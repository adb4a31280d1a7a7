#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "quatspec/calculus.hpp"
#include "quatspec/json_io.hpp"
#include "quatspec/qmatrix.hpp"
#include "quatspec/spectrum.hpp"

namespace quatspec
{

struct BatteryConfig
{
  std::size_t n = 4;
  std::size_t count = 20;
  std::uint64_t seed = 7;
  SpectrumOptions spectrum;
  ContourOptions contour;
  /// Quasi-nilpotency threshold relative to max(1, ||T||^2).
  double qn_rel = 1e-6;
  /// Test hook: "projector" corrupts the first Riesz projector of every matrix.
  std::optional<std::string> fault;
};

/// Aggregated outcome of one identity over all cases.
struct IdentityResult
{
  std::string name;
  /// Description of the normalization applied before comparing with tolerance.
  std::string scale;
  double tolerance = 0.0;
  double max_residual = 0.0;
  std::size_t cases = 0;
  /// Cases where the identity was not applicable.
  std::size_t skipped = 0;
  /// Non-gating entries are reported but do not affect the overall verdict.
  bool gating = true;
  bool pass = true;
};

struct BatteryReport
{
  Json provenance;
  Json parameters;
  std::vector<IdentityResult> identities;
  bool pass = true;
  std::optional<std::string> first_failure;
};

/// Seeded battery over `count` constructed matrices of side n.
BatteryReport run_random_battery(const BatteryConfig &cfg);

/// Battery on one input matrix; random test points come from cfg.seed.
BatteryReport run_matrix_battery(const QMatrix &t, const std::string &source_hash,
                                 const BatteryConfig &cfg);

Json battery_to_json(const BatteryReport &rep);

}  // namespace quatspec
