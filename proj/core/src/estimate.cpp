#include "risgeom/estimate.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

#include <boost/math/distributions/normal.hpp>

#include "path_cost.hpp"
#include "risgeom/association.hpp"
#include "risgeom/curve_table.hpp"
#include "risgeom/realization.hpp"

namespace risgeom {

std::string_view to_string(BlockingMode mode) {
  return mode == BlockingMode::geometric ? "geometric" : "independent";
}

BlockingMode parse_blocking_mode(std::string_view text) {
  if (text == "geometric") return BlockingMode::geometric;
  if (text == "independent") return BlockingMode::independent;
  throw std::invalid_argument("unknown blocking mode '" + std::string(text) +
                              "' (expected geometric or independent)");
}

namespace {

struct MetricSpelling {
  MetricKind kind;
  std::string_view prefix;
  bool takes_arg;
};

constexpr MetricSpelling kSpellings[] = {
    {MetricKind::p_los, "P_LoS", true},          {MetricKind::p_indirect, "P_I", true},
    {MetricKind::p_visible, "P_v", true},        {MetricKind::path_cdf, "F_W", true},
    {MetricKind::assoc_indirect, "A_i", false},  {MetricKind::assoc_direct, "A_d", false},
    {MetricKind::blind, "E", false},             {MetricKind::coverage, "P_cov", true},
};

const MetricSpelling& spelling(MetricKind kind) {
  for (const auto& s : kSpellings) {
    if (s.kind == kind) return s;
  }
  throw std::logic_error("unknown metric kind");
}

}  // namespace

bool MetricId::has_arg() const { return spelling(kind).takes_arg; }

std::string MetricId::name() const {
  const auto& s = spelling(kind);
  std::string out(s.prefix);
  if (s.takes_arg) out += "(" + format_number(arg) + ")";
  return out;
}

MetricId MetricId::parse(std::string_view text) {
  const auto bad = [&](const std::string& why) {
    return std::invalid_argument("metric '" + std::string(text) + "': " + why);
  };
  const auto open = text.find('(');
  const std::string_view head = text.substr(0, open);
  for (const auto& s : kSpellings) {
    if (head != s.prefix) continue;
    if (!s.takes_arg) {
      if (open != std::string_view::npos) throw bad("takes no argument");
      return {s.kind, 0.0};
    }
    if (open == std::string_view::npos || text.back() != ')') throw bad("expected an argument in parentheses");
    const std::string_view num = text.substr(open + 1, text.size() - open - 2);
    double v = 0.0;
    const auto res = std::from_chars(num.data(), num.data() + num.size(), v);
    if (res.ec != std::errc{} || res.ptr != num.data() + num.size()) throw bad("argument is not a number");
    if (!(v > 0.0) || !std::isfinite(v)) throw bad("argument must be finite and > 0");
    return {s.kind, v};
  }
  throw bad("unknown metric (expected P_LoS(r), P_I(r), P_v(r), F_W(x), A_i, A_d, E or P_cov(tau))");
}

Estimate binomial_estimate(std::size_t successes, std::size_t n, double level, BlockingMode mode) {
  if (n < 100) throw std::invalid_argument("estimate: at least 100 replications are required for a CI");
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("estimate: CI level must lie in (0, 1)");
  if (successes > n) throw std::invalid_argument("estimate: successes exceed replications");
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(successes) / nn;
  const double z = boost::math::quantile(boost::math::normal(), 0.5 + 0.5 * level);
  Estimate e;
  e.mean = p;
  e.n = n;
  e.mode = mode;
  e.level = level;
  if (p <= 5.0 / nn || p >= 1.0 - 5.0 / nn) {
    const double z2 = z * z;
    const double center = (p + z2 / (2.0 * nn)) / (1.0 + z2 / nn);
    const double half = z / (1.0 + z2 / nn) * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
    e.ci_low = std::max(0.0, center - half);
    e.ci_high = std::min(1.0, center + half);
  } else {
    const double half = z * std::sqrt(p * (1.0 - p) / nn);
    e.ci_low = std::max(0.0, p - half);
    e.ci_high = std::min(1.0, p + half);
  }
  e.ci_low = std::min(e.ci_low, p);
  e.ci_high = std::max(e.ci_high, p);
  return e;
}

namespace {

constexpr double kPi = std::numbers::pi;

struct IndirectOption {
  double len;
  int meta;
};

struct IndependentBs {
  double r = 0.0;
  bool los = false;
  std::vector<IndirectOption> options;  // RISs serving this BS, any order
};

// BS on the +x axis at distance r from a user at the origin, with its own
// thinned RIS field. The RIS field is skipped for LoS BSs unless asked for.
IndependentBs draw_bs(double r, const NetworkParams& params, double beta, bool always_ris,
                      std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  IndependentBs b;
  b.r = r;
  b.los = unit(rng) < std::exp(-beta * r);
  const double lambda_r = params.lambda_ris_m2();
  if (lambda_r == 0.0 || beta == 0.0 || (b.los && !always_ris)) return b;

  std::poisson_distribution<int> count(2.0 * kPi * lambda_r / (beta * beta));
  std::gamma_distribution<double> radius(2.0, 1.0 / beta);
  const int n = count(rng);
  const Point2 y{r, 0.0};
  for (int i = 0; i < n; ++i) {
    const double t = radius(rng);
    const double phi = 2.0 * kPi * unit(rng);
    const double theta = 2.0 * kPi * unit(rng);
    const int coated = unit(rng) < 0.5 ? -1 : 1;
    const int meta = params.meta_dist.sample(unit(rng));
    const double leg = unit(rng);
    const Point2 z{t * std::cos(phi), t * std::sin(phi)};
    const Point2 dir{std::cos(theta), std::sin(theta)};
    const double su = cross(dir, Point2{0.0, 0.0} - z);
    const double sy = cross(dir, y - z);
    const int side_u = (su > 0.0) - (su < 0.0);
    const int side_y = (sy > 0.0) - (sy < 0.0);
    if (side_u != coated || side_y != coated) continue;
    const double d = distance(z, y);
    if (leg < std::exp(-beta * d)) b.options.push_back({t + d, meta});
  }
  return b;
}

// BSs around a user at the origin, generated lazily in order of distance.
class IndependentWorld {
 public:
  IndependentWorld(const NetworkParams& params, double beta, double radius, std::uint64_t seed)
      : params_(params), beta_(beta), radius_(radius), seed_(seed), rng_(mix_seed(seed, 1)) {
    done_ = params.lambda_bs_m2() == 0.0;
  }

  const IndependentBs* at(std::size_t k) {
    while (bs_.size() <= k && !done_) extend();
    return k < bs_.size() ? &bs_[k] : nullptr;
  }

 private:
  void extend() {
    std::exponential_distribution<double> gap(1.0);
    area_ += gap(rng_) / (kPi * params_.lambda_bs_m2());
    const double r = std::sqrt(area_);
    if (r > radius_) {
      done_ = true;
      return;
    }
    std::mt19937_64 g(mix_seed(seed_, 0x10000 + bs_.size()));
    bs_.push_back(draw_bs(r, params_, beta_, false, g));
  }

  const NetworkParams& params_;
  double beta_;
  double radius_;
  std::uint64_t seed_;
  std::mt19937_64 rng_;
  double area_ = 0.0;  // r² of the last BS
  bool done_ = false;
  std::vector<IndependentBs> bs_;
};

detail::SearchResult search_independent(IndependentWorld& world, const detail::PathCost& cost, int k_max) {
  detail::SearchResult best;
  for (std::size_t k = 0;; ++k) {
    const IndependentBs* b = world.at(k);
    if (b == nullptr || cost.floor(b->r, k_max) >= best.cost) break;
    if (b->los) {
      const double c = cost.direct(b->r);
      if (c < best.cost) best = {c, OutcomeTag::direct, k, std::nullopt};
      continue;
    }
    for (const IndirectOption& o : b->options) {
      const double c = cost.indirect(o.len, o.meta);
      if (c < best.cost) best = {c, OutcomeTag::indirect, k, std::nullopt};
    }
  }
  return best;
}

bool needs_association(MetricKind k) {
  return k == MetricKind::assoc_indirect || k == MetricKind::assoc_direct || k == MetricKind::blind ||
         k == MetricKind::coverage;
}

bool association_hit(MetricId m, OutcomeTag tag, double path_loss) {
  switch (m.kind) {
    case MetricKind::assoc_indirect: return tag == OutcomeTag::indirect;
    case MetricKind::assoc_direct: return tag == OutcomeTag::direct;
    case MetricKind::blind: return tag == OutcomeTag::blind;
    case MetricKind::coverage: return path_loss <= m.arg;
    default: throw std::logic_error("not an association metric");
  }
}

bool link_hit(MetricKind kind, bool los, bool indirect) {
  switch (kind) {
    case MetricKind::p_los: return los;
    case MetricKind::p_indirect: return indirect;
    case MetricKind::p_visible: return los || indirect;
    default: throw std::logic_error("not a link metric");
  }
}

class Replicator {
 public:
  Replicator(std::span<const MetricId> metrics, const NetworkParams& params, const Window& window,
             const EstimateOptions& options)
      : metrics_(metrics.begin(), metrics.end()), params_(params), window_(window), options_(options) {
    beta_ = blockage_rate(params);
    const Window ex = window.expanded();
    indep_radius_ = 0.5 * std::min(ex.width(), ex.height());
    for (const auto& m : metrics_) {
      want_assoc_ |= needs_association(m.kind);
      want_path_ |= m.kind == MetricKind::path_cdf;
      want_world_ |= !(m.kind == MetricKind::p_los);
    }
  }

  // Writes one 0/1 outcome per metric for replication `rep`.
  void run(std::size_t rep, std::vector<std::uint8_t>& hits) const {
    const std::uint64_t seed = mix_seed(options_.seed, rep);
    if (options_.mode == BlockingMode::independent) {
      run_independent(seed, hits);
    } else {
      run_geometric(seed, hits);
    }
  }

 private:
  void run_independent(std::uint64_t seed, std::vector<std::uint8_t>& hits) const {
    IndependentWorld world(params_, beta_, indep_radius_, seed);
    const int k_max = params_.meta_dist.max_k();
    detail::SearchResult assoc;
    detail::SearchResult path;
    if (want_assoc_) assoc = search_independent(world, {params_.alpha, true}, k_max);
    if (want_path_) path = search_independent(world, {1.0, false}, k_max);
    for (std::size_t i = 0; i < metrics_.size(); ++i) {
      const MetricId& m = metrics_[i];
      if (needs_association(m.kind)) {
        hits[i] = association_hit(m, assoc.tag, assoc.cost);
      } else if (m.kind == MetricKind::path_cdf) {
        hits[i] = path.cost <= m.arg;
      } else {
        std::mt19937_64 g(mix_seed(seed, 0x100 + i));
        const IndependentBs b = draw_bs(m.arg, params_, beta_, true, g);
        hits[i] = link_hit(m.kind, b.los, !b.options.empty());
      }
    }
  }

  void run_geometric(std::uint64_t seed, std::vector<std::uint8_t>& hits) const {
    const Point2 u = window_.center();
    Realization world;
    if (want_world_) world = build_realization(params_, window_, mix_seed(seed, 1));
    AssociationOutcome assoc;
    double path = 0.0;
    if (want_assoc_) assoc = associate_user(u, world);
    if (want_path_) path = shortest_path_length(u, world);
    for (std::size_t i = 0; i < metrics_.size(); ++i) {
      const MetricId& m = metrics_[i];
      if (needs_association(m.kind)) {
        hits[i] = association_hit(m, assoc.tag, assoc.path_loss);
        continue;
      }
      if (m.kind == MetricKind::path_cdf) {
        hits[i] = path <= m.arg;
        continue;
      }
      std::mt19937_64 g(mix_seed(seed, 0x100 + i));
      const double psi = 2.0 * kPi * std::uniform_real_distribution<double>(0.0, 1.0)(g);
      const Point2 y = u + m.arg * Point2{std::cos(psi), std::sin(psi)};
      if (m.kind == MetricKind::p_los) {
        // Only blockages with midpoints within len_max/2 of the link can touch it.
        const double pad = 0.5 * params_.len_max;
        const Window box{std::min(u.x, y.x) - pad, std::max(u.x, y.x) + pad,
                         std::min(u.y, y.y) - pad, std::max(u.y, y.y) + pad, 0.0};
        const Realization local = build_realization(params_, box, mix_seed(seed, 0x200 + i), false);
        hits[i] = los_clear(u, y, local);
        continue;
      }
      const bool los = los_clear(u, y, world);
      const bool indirect = (m.kind == MetricKind::p_visible && los) ? false : indirect_path_exists(u, y, world);
      hits[i] = link_hit(m.kind, los, indirect);
    }
  }

  std::vector<MetricId> metrics_;
  const NetworkParams& params_;
  const Window& window_;
  const EstimateOptions& options_;
  double beta_ = 0.0;
  double indep_radius_ = 0.0;
  bool want_assoc_ = false;
  bool want_path_ = false;
  bool want_world_ = false;
};

}  // namespace

std::vector<Estimate> estimate_metrics(std::span<const MetricId> metrics, const NetworkParams& params,
                                       const Window& window, const EstimateOptions& options) {
  params.validate();
  window.validate();
  if (options.n_reps < 100) throw std::invalid_argument("estimate: n_reps must be >= 100");
  if (!(options.ci_level > 0.0 && options.ci_level < 1.0)) {
    throw std::invalid_argument("estimate: ci_level must lie in (0, 1)");
  }
  for (const auto& m : metrics) {
    if (m.has_arg() && !(m.arg > 0.0 && std::isfinite(m.arg))) {
      throw std::invalid_argument("estimate: metric " + m.name() + " needs a finite argument > 0");
    }
  }
  if (metrics.empty()) return {};

  const Replicator replicator(metrics, params, window, options);
  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, options.n_reps));

  // Integer tallies make the result independent of scheduling.
  constexpr std::size_t kChunk = 256;
  std::atomic<std::size_t> next{0};
  std::vector<std::vector<std::size_t>> tallies(threads, std::vector<std::size_t>(metrics.size(), 0));
  std::vector<std::exception_ptr> errors(threads);
  auto worker = [&](unsigned w) {
    try {
      std::vector<std::uint8_t> hits(metrics.size());
      for (;;) {
        const std::size_t begin = next.fetch_add(kChunk);
        if (begin >= options.n_reps) break;
        const std::size_t end = std::min(options.n_reps, begin + kChunk);
        for (std::size_t rep = begin; rep < end; ++rep) {
          replicator.run(rep, hits);
          for (std::size_t i = 0; i < hits.size(); ++i) tallies[w][i] += hits[i];
        }
      }
    } catch (...) {
      errors[w] = std::current_exception();
      next.store(options.n_reps);
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<Estimate> out;
  out.reserve(metrics.size());
  for (std::size_t i = 0; i < metrics.size(); ++i) {
    std::size_t total = 0;
    for (const auto& t : tallies) total += t[i];
    out.push_back(binomial_estimate(total, options.n_reps, options.ci_level, options.mode));
  }
  return out;
}

Estimate estimate_metric(const MetricId& metric, const NetworkParams& params, const Window& window,
                         const EstimateOptions& options) {
  return estimate_metrics(std::span<const MetricId>(&metric, 1), params, window, options).front();
}

}  // namespace risgeom
