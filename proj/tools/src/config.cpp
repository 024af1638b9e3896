#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "risgeom/curve_table.hpp"
#include "risgeom/quadrature.hpp"

namespace risgeom::cli {

ConfigError::ConfigError(std::size_t line, std::string key, const std::string& message)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + key + ": " + message
                              : key + ": " + message),
      line_(line),
      key_(std::move(key)) {}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double to_double(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw std::invalid_argument("'" + std::string(s) + "' is not a finite number");
  }
  return v;
}

std::uint64_t to_u64(std::string_view s) {
  s = trim(s);
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("'" + std::string(s) + "' is not a non-negative integer");
  }
  return v;
}

std::vector<double> to_list(std::string_view s) {
  std::vector<double> out;
  for (auto item : split(s, ',')) out.push_back(to_double(item));
  return out;
}

MetaSurfaceDistribution parse_meta(std::string_view s) {
  std::istringstream in{std::string(s)};
  std::string kind;
  in >> kind;
  const auto rest = trim(s.substr(std::min(s.size(), kind.size())));
  auto as_int = [](std::string_view t) {
    const auto v = to_u64(t);
    if (v < 1 || v > 1'000'000) throw std::invalid_argument("meta-surface count must lie in [1, 1e6]");
    return static_cast<int>(v);
  };
  if (kind == "fixed") return MetaSurfaceDistribution::fixed(as_int(rest));
  if (kind == "uniform") {
    const auto parts = split(rest, ' ');
    std::vector<std::string_view> nums;
    for (auto p : parts) {
      if (!p.empty()) nums.push_back(p);
    }
    if (nums.size() != 2) throw std::invalid_argument("expected 'uniform LO HI'");
    return MetaSurfaceDistribution::uniform(as_int(nums[0]), as_int(nums[1]));
  }
  if (kind == "uniform_mean") return MetaSurfaceDistribution::uniform_with_mean(as_int(rest));
  if (kind == "pmf") {
    MetaSurfaceDistribution d;
    d.support.clear();
    d.probs.clear();
    for (auto item : split(rest, ',')) {
      const auto colon = item.find(':');
      if (colon == std::string_view::npos) throw std::invalid_argument("pmf entries are K:P");
      d.support.push_back(as_int(item.substr(0, colon)));
      d.probs.push_back(to_double(item.substr(colon + 1)));
    }
    d.validate();
    return d;
  }
  throw std::invalid_argument("expected 'fixed M', 'uniform LO HI', 'uniform_mean M' or 'pmf K:P, ...'");
}

std::string meta_text(const MetaSurfaceDistribution& d) {
  std::string out = "pmf ";
  for (std::size_t i = 0; i < d.support.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(d.support[i]) + ":" + format_number(d.probs[i]);
  }
  return out;
}

std::string list_text(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_number(v[i]);
  }
  return out;
}

constexpr std::string_view kSweepVariables[] = {"mu", "lambda_b", "tau", "r", "x"};

bool is_identifier(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  });
}

void check_metric_template(std::string_view m, const std::optional<Sweep>& sweep) {
  if (m == "eta") return;
  const auto open = m.find('(');
  if (open != std::string_view::npos && m.back() == ')') {
    const auto arg = m.substr(open + 1, m.size() - open - 2);
    if (is_identifier(arg)) {
      if (!sweep || sweep->variable != arg) {
        throw std::invalid_argument("metric '" + std::string(m) + "' uses '" + std::string(arg) +
                                    "', which is not the sweep variable");
      }
      if (arg != "r" && arg != "x" && arg != "tau") {
        throw std::invalid_argument("only r, x or tau can stand in for a metric argument");
      }
      (void)MetricId::parse(std::string(m.substr(0, open)) + "(1)");
      return;
    }
  }
  (void)MetricId::parse(m);
}

}  // namespace

std::vector<double> parse_grid(std::string_view text) {
  text = trim(text);
  for (std::string_view fn : {"linspace", "logspace"}) {
    if (text.substr(0, fn.size()) != fn) continue;
    auto rest = trim(text.substr(fn.size()));
    if (rest.size() < 2 || rest.front() != '(' || rest.back() != ')') {
      throw std::invalid_argument(std::string(fn) + " needs (start, stop, count)");
    }
    const auto args = split(rest.substr(1, rest.size() - 2), ',');
    if (args.size() != 3) throw std::invalid_argument(std::string(fn) + " needs (start, stop, count)");
    const double a = to_double(args[0]);
    const double b = to_double(args[1]);
    const auto n = to_u64(args[2]);
    if (n < 2 || n > 1'000'000) throw std::invalid_argument("grid count must lie in [2, 1e6]");
    const bool log = fn == "logspace";
    if (log && !(a > 0.0 && b > 0.0)) throw std::invalid_argument("logspace endpoints must be > 0");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double f = static_cast<double>(i) / static_cast<double>(n - 1);
      out[i] = log ? std::exp(std::log(a) + f * (std::log(b) - std::log(a))) : a + f * (b - a);
    }
    out.front() = a;
    out.back() = b;
    return out;
  }
  return to_list(text);
}

Window RunConfig::window_for(const NetworkParams& p) const {
  double guard = 5000.0;
  if (guard_margin) {
    guard = *guard_margin;
  } else if (const double beta = blockage_rate(p); beta > 0.0) {
    guard = truncation_radius(beta, 1e-8);
  }
  return Window::centered({0.0, 0.0}, window_side, guard);
}

std::string RunConfig::canonical() const {
  std::ostringstream o;
  o << "lambda_bs = " << format_number(params.lambda_bs) << '\n'
    << "lambda_b = " << format_number(params.lambda_b) << '\n'
    << "lambda_u = " << format_number(params.lambda_u) << '\n'
    << "mu = " << format_number(params.mu) << '\n'
    << "mean_len = " << format_number(params.mean_len) << '\n'
    << "len_min = " << format_number(params.len_min) << '\n'
    << "len_max = " << format_number(params.len_max) << '\n'
    << "alpha = " << format_number(params.alpha) << '\n'
    << "meta_dist = " << meta_text(params.meta_dist) << '\n'
    << "window_side = " << format_number(window_side) << '\n'
    << "guard_margin = " << (guard_margin ? format_number(*guard_margin) : "auto") << '\n';
  o << "seeds = ";
  for (std::size_t i = 0; i < seeds.size(); ++i) o << (i ? ", " : "") << seeds[i];
  o << '\n';
  if (sweep) o << "sweep = " << sweep->variable << '\n' << "grid = " << list_text(sweep->grid) << '\n';
  o << "mode = " << to_string(mode) << '\n'
    << "reps = " << n_reps << '\n'
    << "output_dir = " << output_dir << '\n'
    << "ci_level = " << format_number(ci_level) << '\n';
  o << "metrics = ";
  for (std::size_t i = 0; i < metrics.size(); ++i) o << (i ? ", " : "") << metrics[i];
  o << '\n'
    << "raster_resolution = " << format_number(raster_resolution) << '\n'
    << "raster_mu = " << list_text(raster_mu) << '\n'
    << "figure_tau = " << format_number(figure_tau) << '\n'
    << "figure_lambda_b = " << list_text(figure_lambda_b) << '\n'
    << "figure_mu = " << list_text(figure_mu) << '\n'
    << "figure_mu_grid = " << list_text(figure_mu_grid) << '\n'
    << "figure_points = " << figure_points << '\n';
  // Thread count does not change results and is left out on purpose.
  return o.str();
}

std::uint64_t RunConfig::hash() const { return fnv1a64(canonical()); }

RunConfig parse_config(std::string_view text) {
  struct Entry {
    std::string value;
    std::size_t line;
  };
  std::map<std::string, Entry> entries;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, std::string(line), "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError(line_no, "(empty)", "missing key before '='");
    if (value.empty()) throw ConfigError(line_no, key, "missing value");
    if (entries.count(key)) throw ConfigError(line_no, key, "duplicate key");
    entries.emplace(key, Entry{value, line_no});
  }

  RunConfig cfg;
  NetworkParams& p = cfg.params;
  std::string sweep_var;
  std::vector<double> grid;
  bool has_grid = false;
  bool has_sweep = false;
  bool has_mean = false;
  bool has_min = false;
  bool has_max = false;

  auto positive = [](double v, const char* what) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string("must be > 0") + what);
    return v;
  };
  auto nonneg = [](double v) {
    if (!(v >= 0.0)) throw std::invalid_argument("must be >= 0");
    return v;
  };

  const std::map<std::string, std::function<void(const std::string&)>> handlers = {
      {"lambda_bs", [&](const std::string& v) { p.lambda_bs = nonneg(to_double(v)); }},
      {"lambda_b", [&](const std::string& v) { p.lambda_b = nonneg(to_double(v)); }},
      {"lambda_u", [&](const std::string& v) { p.lambda_u = nonneg(to_double(v)); }},
      {"mu",
       [&](const std::string& v) {
         p.mu = to_double(v);
         if (p.mu < 0.0 || p.mu > 1.0) throw std::invalid_argument("must lie in [0, 1]");
       }},
      {"mean_len", [&](const std::string& v) { p.mean_len = positive(to_double(v), " (meters)"); has_mean = true; }},
      {"len_min", [&](const std::string& v) { p.len_min = positive(to_double(v), " (meters)"); has_min = true; }},
      {"len_max", [&](const std::string& v) { p.len_max = positive(to_double(v), " (meters)"); has_max = true; }},
      {"alpha",
       [&](const std::string& v) {
         p.alpha = to_double(v);
         if (!(p.alpha > 2.0)) throw std::invalid_argument("must be > 2");
       }},
      {"meta_dist", [&](const std::string& v) { p.meta_dist = parse_meta(v); }},
      {"window_side", [&](const std::string& v) { cfg.window_side = positive(to_double(v), " (meters)"); }},
      {"guard_margin",
       [&](const std::string& v) {
         if (v == "auto") {
           cfg.guard_margin.reset();
         } else {
           cfg.guard_margin = nonneg(to_double(v));
         }
       }},
      {"seeds",
       [&](const std::string& v) {
         cfg.seeds.clear();
         for (auto s : split(v, ',')) cfg.seeds.push_back(to_u64(s));
       }},
      {"sweep",
       [&](const std::string& v) {
         if (std::find(std::begin(kSweepVariables), std::end(kSweepVariables), v) == std::end(kSweepVariables)) {
           throw std::invalid_argument("unknown sweep variable (expected mu, lambda_b, tau, r or x)");
         }
         sweep_var = v;
         has_sweep = true;
       }},
      {"grid",
       [&](const std::string& v) {
         grid = parse_grid(v);
         for (std::size_t i = 1; i < grid.size(); ++i) {
           if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("grid must be strictly increasing");
         }
         has_grid = true;
       }},
      {"mode", [&](const std::string& v) { cfg.mode = parse_blocking_mode(v); }},
      {"reps",
       [&](const std::string& v) {
         cfg.n_reps = to_u64(v);
         if (cfg.n_reps < 100) throw std::invalid_argument("must be >= 100 for a confidence interval");
       }},
      {"output_dir", [&](const std::string& v) { cfg.output_dir = v; }},
      {"ci_level",
       [&](const std::string& v) {
         cfg.ci_level = to_double(v);
         if (!(cfg.ci_level > 0.0 && cfg.ci_level < 1.0)) throw std::invalid_argument("must lie in (0, 1)");
       }},
      {"threads", [&](const std::string& v) { cfg.threads = static_cast<unsigned>(to_u64(v)); }},
      {"metrics",
       [&](const std::string& v) {
         cfg.metrics.clear();
         for (auto m : split(v, ',')) cfg.metrics.emplace_back(m);
       }},
      {"raster_resolution",
       [&](const std::string& v) { cfg.raster_resolution = positive(to_double(v), " (meters)"); }},
      {"raster_mu",
       [&](const std::string& v) {
         cfg.raster_mu = to_list(v);
         for (double m : cfg.raster_mu) {
           if (m < 0.0 || m > 1.0) throw std::invalid_argument("values must lie in [0, 1]");
         }
       }},
      {"figure_tau", [&](const std::string& v) { cfg.figure_tau = positive(to_double(v), ""); }},
      {"figure_mu",
       [&](const std::string& v) {
         cfg.figure_mu = to_list(v);
         for (double m : cfg.figure_mu) {
           if (m < 0.0 || m > 1.0) throw std::invalid_argument("values must lie in [0, 1]");
         }
       }},
      {"figure_lambda_b",
       [&](const std::string& v) {
         cfg.figure_lambda_b = to_list(v);
         for (double l : cfg.figure_lambda_b) {
           if (l < 0.0) throw std::invalid_argument("values must be >= 0");
         }
       }},
      {"figure_mu_grid",
       [&](const std::string& v) {
         cfg.figure_mu_grid = parse_grid(v);
         for (std::size_t i = 0; i < cfg.figure_mu_grid.size(); ++i) {
           const double m = cfg.figure_mu_grid[i];
           if (m < 0.0 || m > 1.0) throw std::invalid_argument("values must lie in [0, 1]");
           if (i && !(m > cfg.figure_mu_grid[i - 1])) throw std::invalid_argument("must be strictly increasing");
         }
       }},
      {"figure_points",
       [&](const std::string& v) {
         cfg.figure_points = to_u64(v);
         if (cfg.figure_points < 2) throw std::invalid_argument("must be >= 2");
       }},
  };

  for (const auto& [key, entry] : entries) {
    const auto h = handlers.find(key);
    if (h == handlers.end()) throw ConfigError(entry.line, key, "unknown key");
    try {
      h->second(entry.value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(entry.line, key, e.what());
    }
  }
  auto line_of = [&](const std::string& key) -> std::size_t {
    const auto it = entries.find(key);
    return it == entries.end() ? 0 : it->second.line;
  };

  if (!entries.count("lambda_b")) throw ConfigError(0, "lambda_b", "required key is missing (blockages per km²)");

  // Lengths: keep the default 5/25 m spread proportional when only the mean
  // is given; derive the mean when only the bounds are.
  if (has_mean && !has_min && !has_max) {
    p.len_min = p.mean_len / 3.0;
    p.len_max = 5.0 * p.mean_len / 3.0;
  } else if (!has_mean && (has_min || has_max)) {
    p.mean_len = 0.5 * (p.len_min + p.len_max);
  }
  if (p.len_max < p.len_min) throw ConfigError(line_of("len_max"), "len_max", "must be >= len_min");
  if (std::abs(0.5 * (p.len_min + p.len_max) - p.mean_len) > 1e-9 * p.mean_len) {
    throw ConfigError(line_of("mean_len"), "mean_len", "must equal (len_min + len_max) / 2");
  }

  if (has_sweep != has_grid) {
    const std::string missing = has_sweep ? "grid" : "sweep";
    throw ConfigError(line_of(has_sweep ? "sweep" : "grid"), missing, "sweep and grid must be given together");
  }
  if (has_sweep) {
    if (sweep_var == "mu") {
      for (double m : grid) {
        if (m < 0.0 || m > 1.0) throw ConfigError(line_of("grid"), "grid", "mu values must lie in [0, 1]");
      }
    } else {
      for (double g : grid) {
        if (sweep_var == "lambda_b" ? g < 0.0 : !(g > 0.0)) {
          throw ConfigError(line_of("grid"), "grid", "values out of range for " + sweep_var);
        }
      }
    }
    cfg.sweep = Sweep{sweep_var, grid};
  }
  for (const auto& m : cfg.metrics) {
    try {
      check_metric_template(m, cfg.sweep);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(line_of("metrics"), "metrics", e.what());
    }
  }
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    const std::string field = msg.substr(0, msg.find(':'));
    throw ConfigError(line_of(field), field, msg.substr(std::min(msg.size(), field.size() + 2)));
  }
  return cfg;
}

}  // namespace risgeom::cli
