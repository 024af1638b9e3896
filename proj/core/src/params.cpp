#include "risgeom/params.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace risgeom {

MetaSurfaceDistribution MetaSurfaceDistribution::fixed(int m) {
  MetaSurfaceDistribution d{{m}, {1.0}};
  d.validate();
  return d;
}

MetaSurfaceDistribution MetaSurfaceDistribution::uniform(int lo, int hi) {
  if (lo < 1 || hi < lo) throw std::invalid_argument("meta_dist: need 1 <= lo <= hi");
  MetaSurfaceDistribution d;
  d.support.clear();
  d.probs.clear();
  const double p = 1.0 / static_cast<double>(hi - lo + 1);
  for (int k = lo; k <= hi; ++k) {
    d.support.push_back(k);
    d.probs.push_back(p);
  }
  return d;
}

MetaSurfaceDistribution MetaSurfaceDistribution::uniform_with_mean(int m) {
  return uniform(1, 2 * m - 1);
}

void MetaSurfaceDistribution::validate() const {
  if (support.empty() || support.size() != probs.size()) {
    throw std::invalid_argument("meta_dist: support and probs must be non-empty and equal length");
  }
  std::set<int> seen;
  for (int k : support) {
    if (k < 1) throw std::invalid_argument("meta_dist: meta-surface counts must be >= 1");
    if (!seen.insert(k).second) throw std::invalid_argument("meta_dist: duplicate support value");
  }
  for (double p : probs) {
    if (!(p >= 0.0) || p > 1.0) throw std::invalid_argument("meta_dist: probabilities must lie in [0, 1]");
  }
  const double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("meta_dist: probabilities must sum to 1");
}

int MetaSurfaceDistribution::max_k() const { return *std::max_element(support.begin(), support.end()); }

double MetaSurfaceDistribution::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) m += support[i] * probs[i];
  return m;
}

int MetaSurfaceDistribution::sample(double u) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    acc += probs[i];
    if (u < acc) return support[i];
  }
  return support.back();
}

void NetworkParams::validate() const {
  auto require = [](bool ok, const char* field, const std::string& msg) {
    if (!ok) throw std::invalid_argument(std::string(field) + ": " + msg);
  };
  require(std::isfinite(lambda_bs) && lambda_bs >= 0.0, "lambda_bs", "must be finite and >= 0");
  require(std::isfinite(lambda_b) && lambda_b >= 0.0, "lambda_b", "must be finite and >= 0");
  require(std::isfinite(lambda_u) && lambda_u >= 0.0, "lambda_u", "must be finite and >= 0");
  require(mu >= 0.0 && mu <= 1.0, "mu", "must lie in [0, 1]");
  require(std::isfinite(mean_len) && mean_len > 0.0, "mean_len", "must be > 0");
  require(std::isfinite(len_min) && len_min > 0.0, "len_min", "must be > 0");
  require(std::isfinite(len_max) && len_max >= len_min, "len_max", "must be >= len_min");
  require(std::abs(0.5 * (len_min + len_max) - mean_len) <= 1e-9 * mean_len, "mean_len",
          "must equal (len_min + len_max) / 2");
  require(std::isfinite(alpha) && alpha > 2.0, "alpha", "must be > 2");
  meta_dist.validate();
}

double blockage_rate(const NetworkParams& params) {
  return 2.0 * params.lambda_b_m2() * params.mean_len / std::numbers::pi;
}

}  // namespace risgeom
