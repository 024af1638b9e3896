#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "risgeom/geometry.hpp"
#include "risgeom/params.hpp"

namespace risgeom {

enum class BlockingMode { geometric, independent };

std::string_view to_string(BlockingMode mode);
/// Accepts "geometric" or "independent"; throws std::invalid_argument otherwise.
BlockingMode parse_blocking_mode(std::string_view text);

enum class MetricKind {
  p_los,        // P_LoS(r)
  p_indirect,   // P_I(r)
  p_visible,    // P_v(r)
  path_cdf,     // F_W(x)
  assoc_indirect,  // A_i
  assoc_direct,    // A_d
  blind,        // ℰ
  coverage,     // P_cov(τ)
};

struct MetricId {
  MetricKind kind = MetricKind::blind;
  double arg = 0.0;  // r, x or τ; unused for A_i, A_d, ℰ

  /// Canonical text form: "P_LoS(100)", "P_I(100)", "P_v(200)", "F_W(400)",
  /// "A_i", "A_d", "E", "P_cov(1000000)".
  std::string name() const;
  bool has_arg() const;
  /// Parses the canonical form (case-sensitive). Throws std::invalid_argument.
  static MetricId parse(std::string_view text);
};

struct Estimate {
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t n = 0;
  BlockingMode mode = BlockingMode::independent;
  double level = 0.99;
};

/// Binomial proportion interval: normal approximation, or Wilson's score
/// interval when the mean lies within 5/n of 0 or 1. Throws for n < 100 or a
/// level outside (0, 1).
Estimate binomial_estimate(std::size_t successes, std::size_t n, double level, BlockingMode mode);

struct EstimateOptions {
  std::size_t n_reps = 10'000;
  std::uint64_t seed = 1;
  BlockingMode mode = BlockingMode::independent;
  double ci_level = 0.99;
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// Monte Carlo estimates of several metrics from shared replications. Each
/// replication draws a fresh world from (seed, replication index) and places
/// the typical user at window.center(); results do not depend on the thread
/// count.
///
/// geometric: blockages are sampled on window.expanded() and every LoS
/// indicator is an exact segment test. P_LoS(r) instead samples only the
/// blockages whose midpoints can reach the link (its bounding box grown by
/// len_max/2), which is exact for a single link.
///
/// independent: every link is LoS with probability e^{-β·length},
/// independently. BSs form a PPP on the disk of radius
/// min(width, height)/2 of the expanded window. Each BS sees its own RIS
/// field, sampled directly as the PPP of RISs whose user leg is clear
/// (intensity λ_R·e^{-βt}); coated side, orientation and M stay geometric
/// marks and the RIS-to-BS leg is a Bernoulli draw per pair.
std::vector<Estimate> estimate_metrics(std::span<const MetricId> metrics, const NetworkParams& params,
                                       const Window& window, const EstimateOptions& options);

Estimate estimate_metric(const MetricId& metric, const NetworkParams& params, const Window& window,
                         const EstimateOptions& options);

}  // namespace risgeom
