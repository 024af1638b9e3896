#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "risgeom/estimate.hpp"
#include "risgeom/geometry.hpp"
#include "risgeom/params.hpp"

namespace risgeom::cli {

/// Parse or validation failure. line() is 0 for whole-file problems such as
/// a missing required key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::size_t line, std::string key, const std::string& message);
  std::size_t line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  std::size_t line_;
  std::string key_;
};

struct Sweep {
  std::string variable;  // mu, lambda_b, tau, r or x
  std::vector<double> grid;
};

struct RunConfig {
  NetworkParams params;
  double window_side = 1000.0;
  /// Empty means "auto": the analytic truncation radius (5000 m without blockages).
  std::optional<double> guard_margin;
  std::vector<std::uint64_t> seeds{1};
  std::optional<Sweep> sweep;
  BlockingMode mode = BlockingMode::independent;
  std::size_t n_reps = 10'000;
  std::string output_dir = "out";
  double ci_level = 0.99;
  unsigned threads = 0;
  /// Metric templates such as "P_v(200)", "P_v(r)" (sweep variable as the
  /// argument), "A_i", or "eta" (analytic only).
  std::vector<std::string> metrics{"E", "A_d", "A_i"};
  double raster_resolution = 10.0;
  std::vector<double> raster_mu{0.0, 0.05, 0.1, 0.4};
  double figure_tau = 1e7;
  /// Blockage densities (per km²) that each figure is drawn for.
  std::vector<double> figure_lambda_b{300.0, 500.0, 700.0};
  /// μ values for the per-curve figures (P_v, F_W).
  std::vector<double> figure_mu{0.0, 0.1, 0.3};
  /// μ axis of the figures plotted against μ.
  std::vector<double> figure_mu_grid{0.0,  0.01, 0.02, 0.03, 0.05, 0.075, 0.1, 0.15, 0.2, 0.25, 0.3,
                                     0.35, 0.4,  0.45, 0.5,  0.55, 0.6,   0.65, 0.7, 0.75, 0.8, 0.85,
                                     0.9,  0.95, 1.0};
  /// Points along the r and x axes.
  std::size_t figure_points = 200;

  /// Window centered on the origin for the given params (guard resolved).
  Window window_for(const NetworkParams& p) const;
  /// Normalized `key = value` listing of every setting, used for hashing.
  std::string canonical() const;
  std::uint64_t hash() const;
};

/// Parses line-oriented `key = value` text with `#` comments. Densities are
/// per km², lengths in meters. Missing keys take defaults except `lambda_b`,
/// which is required. Throws ConfigError naming the key and line.
RunConfig parse_config(std::string_view text);

/// Parses a number list: "a, b, c", "linspace(a, b, n)" or "logspace(a, b, n)"
/// (n values from a to b, geometric spacing for logspace). Throws
/// std::invalid_argument.
std::vector<double> parse_grid(std::string_view text);

}  // namespace risgeom::cli
