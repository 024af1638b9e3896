#include "risgeom/analytic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "risgeom/quadrature.hpp"

namespace risgeom {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// 1 - (u + 1)e^{-u}, accurate for small u.
double los_mass_fraction(double u) {
  if (u < 0.05) {
    // Σ_{n>=2} (-1)^n (n-1) u^n / n!
    double term = u * u / 2.0;  // u^n / n! at n = 2
    double sum = 0.0;
    for (int n = 2; n < 20; ++n) {
      sum += ((n % 2 == 0) ? 1.0 : -1.0) * (n - 1) * term;
      term *= u / (n + 1);
    }
    return sum;
  }
  return -std::expm1(-u) - u * std::exp(-u);
}

void require_nonnegative(double v, const char* what) {
  if (!(v >= 0.0)) throw std::invalid_argument(std::string(what) + " must be >= 0");
}

// ∬ a_i t dt dφ over {t + d < y} in confocal elliptic coordinates with foci
// at the user and the BS: s = t + d = r·cosh w, t - d = r·sin θ. The area
// element and the orientation factor then separate into
//   G = (r²/4) ∫_0^{acosh(y/r)} e^{-βr cosh w} k(w) dw,
//   k(w) = 2 ∫_0^{π/2} (1 - (2/π)·atan2(cos θ, sinh w)) (sinh² w + cos² θ) dθ,
// both smooth, so the thin ellipses met as y -> r cost nothing extra.
double orientation_kernel(double w, double rel_tol) {
  const double sh = std::sinh(w);
  auto f = [sh](double th) {
    const double c = std::cos(th);
    return (1.0 - 2.0 / kPi * std::atan2(c, sh)) * (sh * sh + c * c);
  };
  const double scale = sh * sh + 1.0;
  return 2.0 * integrate_1d(f, 0.0, 0.5 * kPi, rel_tol, 1e-15 * scale).value;
}

}  // namespace

double p_los(double r, double beta) {
  if (!(r >= 0.0)) throw std::invalid_argument("p_los: distance must be >= 0");
  return std::exp(-beta * r);
}

Reflection reflection_probability(double r, double t, double phi, double beta) {
  if (!(r > 0.0) || !(t > 0.0)) {
    throw std::invalid_argument("reflection_probability: r and t must be > 0");
  }
  // Components of the RIS-to-BS vector in a frame aligned with the RIS
  // direction; avoids the cancellation of r² + t² - 2rt·cos φ near the BS.
  const double along = t - r * std::cos(phi);
  const double across = r * std::abs(std::sin(phi));
  const double d = std::hypot(along, across);
  double orientation = 0.5;
  if (d > 1e-12 * std::max(r, t)) orientation = 1.0 - std::atan2(across, along) / kPi;
  const double prob = 0.5 * std::exp(-beta * (t + d)) * orientation;
  return {prob, orientation};
}

std::size_t ReflectionCache::KeyHash::operator()(const Key& k) const noexcept {
  std::uint64_t h = 0x9E3779B97F4A7C15ULL;
  for (double v : {k.beta, k.r, k.path_limit}) {
    h ^= std::bit_cast<std::uint64_t>(v) + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

std::optional<double> ReflectionCache::find(double beta, double r, double path_limit) const {
  std::lock_guard lock(mutex_);
  const auto it = map_.find({beta, r, path_limit});
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

void ReflectionCache::insert(double beta, double r, double path_limit, double value) {
  std::lock_guard lock(mutex_);
  map_.emplace(Key{beta, r, path_limit}, value);
}

std::size_t ReflectionCache::size() const {
  std::lock_guard lock(mutex_);
  return map_.size();
}

AnalyticEngine::AnalyticEngine(NetworkParams params, AnalyticOptions options,
                               std::shared_ptr<ReflectionCache> cache)
    : params_(std::move(params)), options_(options), cache_(std::move(cache)) {
  params_.validate();
  if (!(options_.rel_tol > 0.0) || !(options_.abs_tol > 0.0)) {
    throw std::invalid_argument("AnalyticEngine: tolerances must be > 0");
  }
  if (!cache_) {
    cache_ = std::make_shared<ReflectionCache>(options_);
  } else {
    const AnalyticOptions& o = cache_->options();
    if (o.rel_tol != options_.rel_tol || o.abs_tol != options_.abs_tol || o.tail_tol != options_.tail_tol) {
      throw std::invalid_argument("AnalyticEngine: shared cache was built with different options");
    }
  }
  beta_ = blockage_rate(params_);
  if (beta_ > 0.0) r_trunc_ = risgeom::truncation_radius(beta_, options_.tail_tol);
}

double AnalyticEngine::infinity() const { return beta_ > 0.0 ? 10.0 * r_trunc_ : kInf; }

double AnalyticEngine::p_los(double r) const { return risgeom::p_los(r, beta_); }

double AnalyticEngine::reflection_integral(double r, double path_limit) const {
  if (!(r > 0.0)) throw std::invalid_argument("reflection_integral: r must be > 0");
  if (beta_ <= 0.0) throw std::logic_error("reflection_integral: requires beta > 0");
  if (!(path_limit > r)) return 0.0;

  if (const auto hit = cache_->find(beta_, r, path_limit)) return *hit;

  // a_i·t <= e^{-β(2t - r)}·t beyond t = r, so r + R/2 leaves a tail of the
  // same relative size as the radial truncation.
  const double t_cap = r + 0.5 * r_trunc_;
  auto integrand = [&](double t, double phi) {
    return reflection_probability(r, t, phi, beta_).probability;
  };
  PolarOptions opt;
  opt.rel_tol = options_.rel_tol / 100.0;
  // The integral enters as λ_R·G; scaling abs_tol by 1 km⁻² keeps the cache
  // independent of μ while staying far below the outer tolerances.
  opt.abs_tol = options_.abs_tol / (100.0 * 1e-6);
  opt.even_in_phi = true;
  opt.radial_breaks = {r};

  const double value =
      std::isinf(path_limit)
          ? integrate_polar(integrand, t_cap, opt).value
          : elliptic_reflection_integral(r, std::min(path_limit, r + r_trunc_), opt.rel_tol, opt.abs_tol);

  cache_->insert(beta_, r, path_limit, value);
  return value;
}

double AnalyticEngine::elliptic_reflection_integral(double r, double y, double rel_tol,
                                                   double abs_tol) const {
  const double w_max = std::acosh(y / r);
  const double kernel_tol = rel_tol / 10.0;
  auto f = [&](double w) { return std::exp(-beta_ * r * std::cosh(w)) * orientation_kernel(w, kernel_tol); };
  const double scale = 0.25 * r * r;
  return scale * integrate_1d(f, 0.0, w_max, rel_tol, abs_tol / scale).value;
}

double AnalyticEngine::indirect_path_probability(double r) const {
  if (!(r > 0.0)) throw std::invalid_argument("indirect_path_probability: r must be > 0");
  const double lambda_r = params_.lambda_ris_m2();
  if (lambda_r == 0.0) return 0.0;
  return -std::expm1(-lambda_r * reflection_integral(r, kInf));
}

double AnalyticEngine::visibility_probability(double r) const {
  require_nonnegative(r, "visibility_probability: r");
  const double plos = p_los(r);
  if (r == 0.0 || plos == 1.0) return plos;
  return plos + (1.0 - plos) * indirect_path_probability(r);
}

double AnalyticEngine::visible_bs_density(double r) const {
  return params_.lambda_bs_m2() * visibility_probability(r);
}

double AnalyticEngine::blind_spot_fraction() const {
  {
    std::lock_guard lock(memo_mutex_);
    if (blind_memo_) return *blind_memo_;
  }
  double value = 0.0;
  const double lambda_bs = params_.lambda_bs_m2();
  if (lambda_bs == 0.0) {
    value = 1.0;
  } else if (beta_ == 0.0) {
    value = 0.0;
  } else {
    auto integrand = [&](double r) { return r > 0.0 ? visibility_probability(r) * r : 0.0; };
    QuadratureOptions opt;
    opt.rel_tol = options_.rel_tol;
    opt.abs_tol = options_.abs_tol;
    const IntegralResult res = integrate_1d(integrand, 0.0, r_trunc_, opt);
    value = std::exp(-2.0 * kPi * lambda_bs * res.value);
  }
  std::lock_guard lock(memo_mutex_);
  blind_memo_ = value;
  return value;
}

DistanceDistribution AnalyticEngine::direct_distance(double x) const {
  require_nonnegative(x, "direct_distance: x");
  const double lambda_bs = params_.lambda_bs_m2();
  if (std::isinf(x)) {
    const double cdf = beta_ > 0.0 ? -std::expm1(-2.0 * kPi * lambda_bs / (beta_ * beta_))
                                   : (lambda_bs > 0.0 ? 1.0 : 0.0);
    return {cdf, 0.0};
  }
  if (beta_ == 0.0) {
    const double mass = kPi * lambda_bs * x * x;
    return {-std::expm1(-mass), 2.0 * kPi * lambda_bs * x * std::exp(-mass)};
  }
  const double u = beta_ * x;
  const double mass = 2.0 * kPi * lambda_bs * los_mass_fraction(u) / (beta_ * beta_);
  return {-std::expm1(-mass), 2.0 * kPi * lambda_bs * x * std::exp(-u - mass)};
}

double AnalyticEngine::conditional_indirect_cdf(double x, double r, int k) const {
  require_nonnegative(x, "conditional_indirect_cdf: x");
  if (!(r > 0.0)) throw std::invalid_argument("conditional_indirect_cdf: r must be > 0");
  const auto& md = params_.meta_dist;
  const auto it = std::find(md.support.begin(), md.support.end(), k);
  if (it == md.support.end()) {
    throw std::invalid_argument("conditional_indirect_cdf: k not in meta-surface support");
  }
  const double rho = md.probs[static_cast<std::size_t>(it - md.support.begin())];
  const double lambda_r = params_.lambda_ris_m2();
  if (x <= r || lambda_r == 0.0 || rho == 0.0) return 0.0;
  return -std::expm1(-lambda_r * rho * reflection_integral(r, x));
}

double AnalyticEngine::conditional_indirect_cdf(double x, double r) const {
  require_nonnegative(x, "conditional_indirect_cdf: x");
  if (!(r > 0.0)) throw std::invalid_argument("conditional_indirect_cdf: r must be > 0");
  const double lambda_r = params_.lambda_ris_m2();
  if (x <= r || lambda_r == 0.0) return 0.0;
  // Every class shares the same path-length region, so Σ_k ρ_k = 1 folds the
  // product into a single exponent.
  return -std::expm1(-lambda_r * reflection_integral(r, x));
}

double AnalyticEngine::indirect_distance_cdf(double x, std::optional<int> k) const {
  require_nonnegative(x, "indirect_distance_cdf: x");
  const double lambda_bs = params_.lambda_bs_m2();
  if (x == 0.0 || lambda_bs == 0.0 || params_.lambda_ris_m2() == 0.0) return 0.0;
  const double upper = std::min(x, r_trunc_);
  auto integrand = [&](double r) {
    if (r <= 0.0) return 0.0;
    const double f = k ? conditional_indirect_cdf(x, r, *k) : conditional_indirect_cdf(x, r);
    return p_nlos(r) * f * r;
  };
  QuadratureOptions opt;
  opt.rel_tol = options_.rel_tol / 10.0;
  opt.abs_tol = options_.abs_tol / 10.0;
  const IntegralResult res = integrate_1d(integrand, 0.0, upper, opt);
  return -std::expm1(-2.0 * kPi * lambda_bs * res.value);
}

double AnalyticEngine::shortest_path_cdf(double x) const {
  require_nonnegative(x, "shortest_path_cdf: x");
  const double direct = direct_distance(x).cdf;
  const double indirect = indirect_distance_cdf(x);
  return 1.0 - (1.0 - direct) * (1.0 - indirect);
}

double AnalyticEngine::blocked_mass(double x) const {
  // ∫ P_NLoS(r)(1 - ∏_k F̄_{R_{i,k}|r}(x k^{2/α})) r dr, with the product in
  // log space: log ∏ = -λ_R Σ_k ρ_k G(r, x k^{2/α}).
  const double lambda_r = params_.lambda_ris_m2();
  const auto& md = params_.meta_dist;
  std::vector<double> scaled(md.support.size());
  for (std::size_t i = 0; i < md.support.size(); ++i) {
    scaled[i] = x * std::pow(static_cast<double>(md.support[i]), 2.0 / params_.alpha);
  }
  std::vector<double> pts{0.0};
  for (double y : scaled) {
    if (y > 0.0 && y < r_trunc_) pts.push_back(y);
  }
  std::sort(pts.begin(), pts.end());
  const double top = std::min(*std::max_element(scaled.begin(), scaled.end()), r_trunc_);
  if (top <= 0.0) return 0.0;
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.back() < top) pts.push_back(top);

  auto integrand = [&](double r) {
    if (r <= 0.0) return 0.0;
    double log_survive = 0.0;
    for (std::size_t i = 0; i < scaled.size(); ++i) {
      if (scaled[i] > r && md.probs[i] > 0.0) {
        log_survive -= lambda_r * md.probs[i] * reflection_integral(r, scaled[i]);
      }
    }
    return p_nlos(r) * (-std::expm1(log_survive)) * r;
  };
  QuadratureOptions opt;
  opt.rel_tol = options_.rel_tol / 10.0;
  opt.abs_tol = options_.abs_tol / 10.0;
  return integrate_1d_breaks(integrand, pts, opt).value;
}

double AnalyticEngine::association_h(double x) const {
  require_nonnegative(x, "association_h: x");
  if (x == 0.0 || params_.lambda_ris_m2() == 0.0 || params_.lambda_bs_m2() == 0.0) return 1.0;
  if (beta_ == 0.0) return 1.0;
  const double xs = std::isinf(x) ? infinity() : x;
  return std::exp(-2.0 * kPi * params_.lambda_bs_m2() * blocked_mass(xs));
}

AssociationProbabilities AnalyticEngine::association_probabilities() const {
  {
    std::lock_guard lock(memo_mutex_);
    if (assoc_memo_) return *assoc_memo_;
  }
  AssociationProbabilities out;
  out.blind = blind_spot_fraction();
  if (params_.lambda_ris_m2() == 0.0 || beta_ == 0.0) {
    out.direct = 1.0 - out.blind;
    out.indirect = 0.0;
  } else {
    auto integrand = [&](double x) { return x > 0.0 ? direct_distance(x).pdf * association_h(x) : 0.0; };
    QuadratureOptions opt;
    opt.rel_tol = options_.rel_tol;
    opt.abs_tol = options_.abs_tol;
    out.direct = integrate_1d(integrand, 0.0, r_trunc_, opt).value;
    double indirect = 1.0 - out.blind - out.direct;
    const double slack = 1e-6;
    if (indirect < 0.0) {
      if (indirect < -slack) {
        throw std::runtime_error("association_probabilities: A_i < 0 beyond tolerance (integration failure)");
      }
      indirect = 0.0;
    } else if (indirect > 1.0) {
      if (indirect > 1.0 + slack) {
        throw std::runtime_error("association_probabilities: A_i > 1 beyond tolerance (integration failure)");
      }
      indirect = 1.0;
    }
    out.indirect = indirect;
    // Keep the identity A_d + A_i + ℰ = 1 exact after any clamp.
    out.direct = 1.0 - out.blind - out.indirect;
  }
  std::lock_guard lock(memo_mutex_);
  assoc_memo_ = out;
  return out;
}

double AnalyticEngine::deployment_efficiency() const {
  const double lambda_r = params_.lambda_ris();
  if (lambda_r == 0.0) return 0.0;
  const double a_i = association_probabilities().indirect;
  return std::min(1.0, params_.lambda_u * a_i / lambda_r);
}

double AnalyticEngine::coverage_probability(double tau) const {
  if (!(tau > 0.0)) throw std::invalid_argument("coverage_probability: tau must be > 0");
  const double x = std::isinf(tau) ? kInf : std::pow(tau, 1.0 / params_.alpha);
  const double survive_direct = 1.0 - direct_distance(x).cdf;
  return 1.0 - survive_direct * association_h(x);
}

}  // namespace risgeom
