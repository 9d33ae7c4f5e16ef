#pragma once

// Invariant suite run by `fracequiv verify`: every check is recorded as
// {check_name, value, tolerance, pass} in a Report.

#include "fracequiv/report.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace fracequiv {

struct VerifyOptions {
  /// Unset: the default grid {0.3, 0.5, 0.7}. 0.5 alone runs the degenerate subset.
  std::optional<double> hurst;
  /// Fault injection: every a_k multiplied by (1 + perturb_ak).
  double perturb_ak = 0.0;
  int jobs = 1;
  std::uint64_t seed = 1;
  /// Monte Carlo replicates of the rate experiment.
  std::size_t replicates = 200;
};

Report run_verify(const VerifyOptions& options);

/// Checks of the H = 1/2 reduction to the classical Fourier system.
void verify_degenerate(Report& report, const VerifyOptions& options);

/// Checks that depend on a single Hurst index.
void verify_hurst(Report& report, double H, const VerifyOptions& options);

/// Checks that sweep their own H grid (c_H identity, Toeplitz bounds, weighted mean).
void verify_global(Report& report, const VerifyOptions& options);

}  // namespace fracequiv
