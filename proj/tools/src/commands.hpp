#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "config.hpp"
#include "risgeom/analytic.hpp"
#include "risgeom/estimate.hpp"

namespace risgeom::cli {

enum class Command { analytic, simulate, validate, raster, figures };

/// Throws std::invalid_argument for an unknown name.
Command parse_command(std::string_view name);

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitValidateFailed = 2;

/// A metric template with any sweep-variable argument filled in.
struct ResolvedMetric {
  bool eta = false;  // deployment efficiency, analytic only
  MetricId id;
  std::string name() const { return eta ? "eta" : id.name(); }
};

/// Resolves "P_v(r)"-style templates against the sweep value; a template
/// without a variable argument ignores `value`.
ResolvedMetric resolve_metric(std::string_view metric_template, const std::optional<Sweep>& sweep,
                              double value);

/// Params with a mu or lambda_b sweep value applied (other variables leave
/// the params untouched).
NetworkParams apply_sweep(const NetworkParams& params, const std::optional<Sweep>& sweep, double value);

double analytic_value(const AnalyticEngine& engine, const ResolvedMetric& metric);

/// Runs a subcommand and writes its files under cfg.output_dir. Progress and
/// per-file notes go to `log`. Returns kExitOk, or kExitValidateFailed when a
/// validate row fails; errors are thrown.
int run_command(Command command, const RunConfig& cfg, std::ostream& log);

}  // namespace risgeom::cli
