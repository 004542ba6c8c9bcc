#pragma once

#include "ampec/instance.hpp"

#include <optional>

namespace ampec {

struct OracleResult {
  double value = 0.0;
  Vec y_best;
  Vec x_best;
  double grid_step = 0.0;  // actual spacing used (largest over coordinates)
  bool refined = false;
  std::size_t evaluations = 0;
};

/// Largest m accepted by grid_solve.
inline constexpr std::size_t kOracleMaxM = 3;

/// Brute-force global minimum of f(x*(y), y) over y in Y (or in `region`),
/// where x*(y) is the unique lower-level equilibrium. Scans a uniform grid
/// with spacing <= step; with `refine`, polishes the best grid point by
/// golden-section coordinate descent inside its grid cell.
///
/// Throws std::invalid_argument when m > kOracleMaxM or step <= 0.
OracleResult grid_solve(const Instance& inst, double step, bool refine = true,
                        const std::optional<BoxRegion>& region = std::nullopt);

}  // namespace ampec
