#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>

#include "risgeom/params.hpp"

namespace risgeom {

/// e^{-βr}. Throws std::invalid_argument for r < 0.
double p_los(double r, double beta);

/// Probability that an RIS at polar position (t, φ) relative to the user
/// can reflect toward a BS at distance r on the φ = 0 axis.
struct Reflection {
  double probability = 0.0;  // a_i(r, t, φ)
  double orientation = 0.0;  // C(r, t, φ), chance the BS sits on the usable half-plane
};

/// a_i = ½·e^{-βt}·e^{-βd}·C with d = √(r² + t² - 2rt cos φ) and
/// C = 1 - arccos((t - r cos φ)/d)/π. At d = 0 returns the C = ½ limit.
/// Throws std::invalid_argument for r <= 0 or t <= 0.
Reflection reflection_probability(double r, double t, double phi, double beta);

struct AnalyticOptions {
  double rel_tol = 1e-6;
  double abs_tol = 1e-10;
  double tail_tol = 1e-8;
};

struct DistanceDistribution {
  double cdf = 0.0;
  double pdf = 0.0;
};

struct AssociationProbabilities {
  double direct = 0.0;    // A_d
  double indirect = 0.0;  // A_i
  double blind = 0.0;     // ℰ
};

/// Memo of the reflection integrals ∬ a_i t dt dφ keyed by (β, r, path
/// limit). These do not depend on μ, λ_BS, λ_u or meta_dist, so engines that
/// differ only in those (and share AnalyticOptions) can share one cache.
/// Thread-safe.
class ReflectionCache {
 public:
  explicit ReflectionCache(AnalyticOptions options = {}) : options_(options) {}

  const AnalyticOptions& options() const { return options_; }
  std::optional<double> find(double beta, double r, double path_limit) const;
  void insert(double beta, double r, double path_limit, double value);
  std::size_t size() const;

 private:
  struct Key {
    double beta;
    double r;
    double path_limit;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept;
  };

  AnalyticOptions options_;
  mutable std::mutex mutex_;
  std::unordered_map<Key, double, KeyHash> map_;
};

// Evaluates the closed forms and integral expressions for one parameter set.
// All inputs and outputs in meters; densities are read from NetworkParams and
// converted to m⁻² internally. Radial improper integrals are cut at
// truncation_radius(); "x = ∞" means infinity() = 10·truncation_radius().
//
// The whole-plane and elliptic reflection integrals ∬ a_i t dt dφ depend only
// on (β, r, upper path length) and are memoized in a ReflectionCache, which
// may be shared between engines. Thread-safe.
class AnalyticEngine {
 public:
  /// Throws std::invalid_argument for invalid params or tolerances, or when
  /// `cache` was created with different options.
  explicit AnalyticEngine(NetworkParams params, AnalyticOptions options = {},
                          std::shared_ptr<ReflectionCache> cache = nullptr);

  const NetworkParams& params() const { return params_; }
  const AnalyticOptions& options() const { return options_; }
  double beta() const { return beta_; }
  /// 0 when β = 0 (no blockages; every closed form then has its β → 0 limit).
  double truncation_radius() const { return r_trunc_; }
  double infinity() const;

  double p_los(double r) const;
  double p_nlos(double r) const { return 1.0 - p_los(r); }

  /// P_I(r): at least one RIS offers an indirect LoS path to a BS at r.
  double indirect_path_probability(double r) const;
  /// P_v(r) = P_LoS(r) + P_NLoS(r)·P_I(r).
  double visibility_probability(double r) const;
  /// λ_v(r) = λ_BS·P_v(r) in m⁻².
  double visible_bs_density(double r) const;
  /// ℰ = exp(-2π ∫ λ_v(r) r dr).
  double blind_spot_fraction() const;

  /// Nearest direct-LoS BS distance R_d.
  DistanceDistribution direct_distance(double x) const;

  /// F_{R_{i,k}|r}(x) for meta-surface count k (must be in the support).
  double conditional_indirect_cdf(double x, double r, int k) const;
  /// F_{R_i|r}(x) = 1 - ∏_k (1 - F_{R_{i,k}|r}(x)).
  double conditional_indirect_cdf(double x, double r) const;
  /// F_{R_{i,k}}(x), or F_{R_i}(x) when k is empty.
  double indirect_distance_cdf(double x, std::optional<int> k = std::nullopt) const;
  /// F_W(x) = 1 - (1 - F_{R_d}(x))(1 - F_{R_i}(x)).
  double shortest_path_cdf(double x) const;

  /// H(x): probability that no NLoS BS offers an indirect path whose
  /// path-loss beats a direct path of length x.
  double association_h(double x) const;
  AssociationProbabilities association_probabilities() const;
  /// η = min{1, λ_u·A_i/λ_R}; 0 when no RIS is deployed.
  double deployment_efficiency() const;
  /// P(path-loss to the serving BS <= τ).
  double coverage_probability(double tau) const;

  /// ∬ a_i(r,t,φ) t dt dφ over the region where the path length t + d is
  /// below `path_limit` (whole plane for +∞). Exposed for tests.
  double reflection_integral(double r, double path_limit) const;

 private:
  double blocked_mass(double x) const;
  double elliptic_reflection_integral(double r, double y, double rel_tol, double abs_tol) const;

  NetworkParams params_;
  AnalyticOptions options_;
  double beta_ = 0.0;
  double r_trunc_ = 0.0;
  std::shared_ptr<ReflectionCache> cache_;
  mutable std::mutex memo_mutex_;
  mutable std::optional<double> blind_memo_;
  mutable std::optional<AssociationProbabilities> assoc_memo_;
};

}  // namespace risgeom
