#pragma once

#include <vector>

namespace risgeom {

/// PMF of the number of meta-surfaces per RIS.
struct MetaSurfaceDistribution {
  std::vector<int> support{1};
  std::vector<double> probs{1.0};

  /// Every RIS carries exactly `m` meta-surfaces.
  static MetaSurfaceDistribution fixed(int m);
  /// Uniform over {lo, ..., hi}.
  static MetaSurfaceDistribution uniform(int lo, int hi);
  /// Uniform over {1, ..., 2m - 1}, whose mean is m.
  static MetaSurfaceDistribution uniform_with_mean(int m);

  /// Throws std::invalid_argument unless the PMF sums to 1 (within 1e-12),
  /// support values are distinct and >= 1, and sizes match.
  void validate() const;

  int max_k() const;
  double mean() const;
  /// Inverse-CDF draw from a uniform variate u in [0, 1).
  int sample(double u) const;
};

/// Scalar model parameters. Densities are per km² at this boundary; the
/// *_m2 accessors convert to per m² for the math. Lengths are meters.
struct NetworkParams {
  double lambda_bs = 10.0;
  double lambda_b = 0.0;
  double lambda_u = 300.0;
  double mu = 0.0;
  double mean_len = 15.0;
  double len_min = 5.0;
  double len_max = 25.0;
  double alpha = 3.0;
  MetaSurfaceDistribution meta_dist{};

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  double lambda_bs_m2() const { return lambda_bs * 1e-6; }
  double lambda_b_m2() const { return lambda_b * 1e-6; }
  double lambda_u_m2() const { return lambda_u * 1e-6; }
  /// RIS density λ_R = μ·λ_b, per km².
  double lambda_ris() const { return mu * lambda_b; }
  double lambda_ris_m2() const { return lambda_ris() * 1e-6; }
};

/// β = 2·λ_b·E[L]/π in m⁻¹ (LoS probability over r meters is e^{-βr}).
double blockage_rate(const NetworkParams& params);

}  // namespace risgeom
