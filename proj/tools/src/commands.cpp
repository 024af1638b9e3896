#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

#include "risgeom/curve_table.hpp"
#include "risgeom/raster.hpp"
#include "risgeom/realization.hpp"

namespace risgeom::cli {

Command parse_command(std::string_view name) {
  if (name == "analytic") return Command::analytic;
  if (name == "simulate") return Command::simulate;
  if (name == "validate") return Command::validate;
  if (name == "raster") return Command::raster;
  if (name == "figures") return Command::figures;
  throw std::invalid_argument("unknown subcommand '" + std::string(name) + "'");
}

ResolvedMetric resolve_metric(std::string_view metric_template, const std::optional<Sweep>& sweep, double value) {
  if (metric_template == "eta") return {true, {}};
  const auto open = metric_template.find('(');
  if (sweep && open != std::string_view::npos && metric_template.back() == ')') {
    const auto arg = metric_template.substr(open + 1, metric_template.size() - open - 2);
    if (arg == sweep->variable) {
      MetricId id = MetricId::parse(std::string(metric_template.substr(0, open)) + "(1)");
      id.arg = value;
      return {false, id};
    }
  }
  return {false, MetricId::parse(metric_template)};
}

NetworkParams apply_sweep(const NetworkParams& params, const std::optional<Sweep>& sweep, double value) {
  NetworkParams p = params;
  if (sweep && sweep->variable == "mu") p.mu = value;
  if (sweep && sweep->variable == "lambda_b") p.lambda_b = value;
  return p;
}

double analytic_value(const AnalyticEngine& engine, const ResolvedMetric& metric) {
  if (metric.eta) return engine.deployment_efficiency();
  const double a = metric.id.arg;
  switch (metric.id.kind) {
    case MetricKind::p_los: return engine.p_los(a);
    case MetricKind::p_indirect: return engine.indirect_path_probability(a);
    case MetricKind::p_visible: return engine.visibility_probability(a);
    case MetricKind::path_cdf: return engine.shortest_path_cdf(a);
    case MetricKind::assoc_indirect: return engine.association_probabilities().indirect;
    case MetricKind::assoc_direct: return engine.association_probabilities().direct;
    case MetricKind::blind: return engine.blind_spot_fraction();
    case MetricKind::coverage: return engine.coverage_probability(a);
  }
  throw std::logic_error("unhandled metric kind");
}

namespace {

unsigned worker_count(unsigned requested) {
  if (requested) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Evaluates fn(0..n-1) on a worker pool; results keep index order. The
/// first exception thrown by any task is rethrown.
template <class F>
auto parallel_map(std::size_t n, unsigned threads, F&& fn) {
  using T = decltype(fn(std::size_t{}));
  std::vector<T> out(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
      }
    }
  };
  const unsigned k = std::min<std::size_t>(worker_count(threads), std::max<std::size_t>(n, 1));
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < k; ++t) pool.emplace_back(work);
  work();
  pool.clear();
  if (error) std::rethrow_exception(error);
  return out;
}

/// One ReflectionCache per blockage rate, shared by every engine built here.
class EngineFactory {
 public:
  std::shared_ptr<const AnalyticEngine> make(const NetworkParams& p) {
    const double beta = blockage_rate(p);
    std::shared_ptr<ReflectionCache> cache;
    {
      std::lock_guard lock(mutex_);
      auto& slot = caches_[std::bit_cast<std::uint64_t>(beta)];
      if (!slot) slot = std::make_shared<ReflectionCache>();
      cache = slot;
    }
    return std::make_shared<const AnalyticEngine>(p, AnalyticOptions{}, cache);
  }

 private:
  std::mutex mutex_;
  std::map<std::uint64_t, std::shared_ptr<ReflectionCache>> caches_;
};

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string seed_list(const std::vector<std::uint64_t>& seeds) {
  std::string out;
  for (std::size_t i = 0; i < seeds.size(); ++i) out += (i ? "," : "") + std::to_string(seeds[i]);
  return out;
}

std::vector<std::string> header(const RunConfig& cfg, std::string_view command) {
  return {"ris-geom " + std::string(command), "config_hash=" + hex64(cfg.hash()),
          "seeds=" + seed_list(cfg.seeds)};
}

std::filesystem::path prepare_output(const RunConfig& cfg, const std::string& name) {
  const std::filesystem::path dir(cfg.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());
  return dir / name;
}

void write_table(const RunConfig& cfg, const std::string& name, const CsvTable& table, std::ostream& log) {
  const auto path = prepare_output(cfg, name);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  write_csv(out, table);
  out.close();
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
  log << "wrote " << path.string() << " (" << table.rows.size() << " rows)\n";
}

/// Sweep points; a config without a sweep has a single point.
std::vector<double> sweep_points(const RunConfig& cfg) {
  return cfg.sweep ? cfg.sweep->grid : std::vector<double>{0.0};
}

bool sweeps_params(const RunConfig& cfg) {
  return cfg.sweep && (cfg.sweep->variable == "mu" || cfg.sweep->variable == "lambda_b");
}

void add_sweep_column(const RunConfig& cfg, std::vector<std::string>& columns) {
  if (cfg.sweep) columns.push_back(cfg.sweep->variable);
}

void add_sweep_cell(const RunConfig& cfg, double value, std::vector<std::string>& cells) {
  if (cfg.sweep) cells.push_back(format_number(value));
}

/// Analytic values per sweep point, one entry per metric template.
std::vector<std::vector<double>> analytic_grid(const RunConfig& cfg, EngineFactory& factory) {
  const auto points = sweep_points(cfg);
  if (sweeps_params(cfg)) {
    return parallel_map(points.size(), cfg.threads, [&](std::size_t i) {
      const auto engine = factory.make(apply_sweep(cfg.params, cfg.sweep, points[i]));
      std::vector<double> row;
      for (const auto& m : cfg.metrics) row.push_back(analytic_value(*engine, resolve_metric(m, cfg.sweep, points[i])));
      return row;
    });
  }
  const auto engine = factory.make(cfg.params);
  return parallel_map(points.size(), cfg.threads, [&](std::size_t i) {
    std::vector<double> row;
    for (const auto& m : cfg.metrics) row.push_back(analytic_value(*engine, resolve_metric(m, cfg.sweep, points[i])));
    return row;
  });
}

int run_analytic(const RunConfig& cfg, std::ostream& log) {
  EngineFactory factory;
  const auto points = sweep_points(cfg);
  const auto values = analytic_grid(cfg, factory);
  CsvTable table;
  table.comments = header(cfg, "analytic");
  add_sweep_column(cfg, table.columns);
  table.columns.insert(table.columns.end(), {"metric", "value"});
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < cfg.metrics.size(); ++j) {
      std::vector<std::string> cells;
      add_sweep_cell(cfg, points[i], cells);
      cells.push_back(resolve_metric(cfg.metrics[j], cfg.sweep, points[i]).name());
      cells.push_back(format_number(values[i][j]));
      table.add_cells(std::move(cells));
    }
  }
  write_table(cfg, "analytic.csv", table, log);
  return kExitOk;
}

/// Monte Carlo estimates indexed [seed][point][metric]. Points that share
/// params (r, x or tau sweeps) share one set of replications.
std::vector<std::vector<std::vector<Estimate>>> simulate_grid(const RunConfig& cfg, std::ostream& log) {
  for (const auto& m : cfg.metrics) {
    if (m == "eta") throw std::invalid_argument("metric 'eta' has no Monte Carlo estimator; remove it for simulate/validate");
  }
  const auto points = sweep_points(cfg);
  std::vector<std::vector<std::size_t>> groups;
  if (sweeps_params(cfg)) {
    for (std::size_t i = 0; i < points.size(); ++i) groups.push_back({i});
  } else {
    groups.emplace_back();
    for (std::size_t i = 0; i < points.size(); ++i) groups.back().push_back(i);
  }

  std::vector<std::vector<std::vector<Estimate>>> out(cfg.seeds.size(),
                                                      std::vector<std::vector<Estimate>>(points.size()));
  for (std::size_t s = 0; s < cfg.seeds.size(); ++s) {
    for (const auto& group : groups) {
      const NetworkParams p = apply_sweep(cfg.params, cfg.sweep, points[group.front()]);
      std::vector<MetricId> ids;
      std::map<std::string, std::size_t> slot;
      for (std::size_t i : group) {
        for (const auto& m : cfg.metrics) {
          const MetricId id = resolve_metric(m, cfg.sweep, points[i]).id;
          if (slot.emplace(id.name(), ids.size()).second) ids.push_back(id);
        }
      }
      EstimateOptions opt;
      opt.n_reps = cfg.n_reps;
      opt.seed = cfg.seeds[s];
      opt.mode = cfg.mode;
      opt.ci_level = cfg.ci_level;
      opt.threads = cfg.threads;
      const auto est = estimate_metrics(ids, p, cfg.window_for(p), opt);
      for (std::size_t i : group) {
        for (const auto& m : cfg.metrics) {
          out[s][i].push_back(est[slot.at(resolve_metric(m, cfg.sweep, points[i]).id.name())]);
        }
      }
      log << "seed " << cfg.seeds[s] << ": " << ids.size() << " metric(s) over " << cfg.n_reps << " replications\n";
    }
  }
  return out;
}

std::vector<std::string> mc_header(const RunConfig& cfg, std::string_view command) {
  auto h = header(cfg, command);
  h.push_back("mode=" + std::string(to_string(cfg.mode)));
  h.push_back("reps=" + std::to_string(cfg.n_reps));
  h.push_back("ci_level=" + format_number(cfg.ci_level));
  return h;
}

int run_simulate(const RunConfig& cfg, std::ostream& log) {
  const auto points = sweep_points(cfg);
  const auto est = simulate_grid(cfg, log);
  CsvTable table;
  table.comments = mc_header(cfg, "simulate");
  table.columns.push_back("seed");
  add_sweep_column(cfg, table.columns);
  table.columns.insert(table.columns.end(), {"metric", "mean", "ci_low", "ci_high", "n", "mode"});
  for (std::size_t s = 0; s < cfg.seeds.size(); ++s) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      for (std::size_t j = 0; j < cfg.metrics.size(); ++j) {
        const Estimate& e = est[s][i][j];
        std::vector<std::string> cells{std::to_string(cfg.seeds[s])};
        add_sweep_cell(cfg, points[i], cells);
        cells.insert(cells.end(), {resolve_metric(cfg.metrics[j], cfg.sweep, points[i]).name(), format_number(e.mean),
                                   format_number(e.ci_low), format_number(e.ci_high), std::to_string(e.n),
                                   std::string(to_string(e.mode))});
        table.add_cells(std::move(cells));
      }
    }
  }
  write_table(cfg, "simulate.csv", table, log);
  return kExitOk;
}

int run_validate(const RunConfig& cfg, std::ostream& log) {
  const auto points = sweep_points(cfg);
  const auto est = simulate_grid(cfg, log);
  EngineFactory factory;
  const auto exact = analytic_grid(cfg, factory);
  CsvTable table;
  table.comments = mc_header(cfg, "validate");
  table.comments.push_back("pass = analytic value inside the Monte Carlo confidence interval");
  table.columns.push_back("seed");
  add_sweep_column(cfg, table.columns);
  table.columns.insert(table.columns.end(), {"metric", "analytic", "mc_mean", "ci_low", "ci_high", "n", "pass"});
  std::size_t failures = 0;
  for (std::size_t s = 0; s < cfg.seeds.size(); ++s) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      for (std::size_t j = 0; j < cfg.metrics.size(); ++j) {
        const Estimate& e = est[s][i][j];
        const double a = exact[i][j];
        const bool pass = a >= e.ci_low && a <= e.ci_high;
        if (!pass) ++failures;
        std::vector<std::string> cells{std::to_string(cfg.seeds[s])};
        add_sweep_cell(cfg, points[i], cells);
        const std::string name = resolve_metric(cfg.metrics[j], cfg.sweep, points[i]).name();
        cells.insert(cells.end(), {name, format_number(a), format_number(e.mean), format_number(e.ci_low),
                                   format_number(e.ci_high), std::to_string(e.n), pass ? "1" : "0"});
        table.add_cells(std::move(cells));
        if (!pass) {
          log << "FAIL seed " << cfg.seeds[s] << " " << name << ": analytic " << format_number(a) << " outside ["
              << format_number(e.ci_low) << ", " << format_number(e.ci_high) << "]\n";
        }
      }
    }
  }
  write_table(cfg, "validate.csv", table, log);
  log << table.rows.size() - failures << "/" << table.rows.size() << " rows pass\n";
  return failures ? kExitValidateFailed : kExitOk;
}

int run_raster(const RunConfig& cfg, std::ostream& log) {
  struct Task {
    std::uint64_t seed;
    double mu;
  };
  std::vector<Task> tasks;
  for (auto seed : cfg.seeds) {
    for (double mu : cfg.raster_mu) tasks.push_back({seed, mu});
  }
  const auto maps = parallel_map(tasks.size(), cfg.threads, [&](std::size_t i) {
    NetworkParams p = cfg.params;
    p.mu = tasks[i].mu;
    const auto world = build_realization(p, cfg.window_for(p), tasks[i].seed);
    return raster_blind_map(world, cfg.raster_resolution);
  });

  CsvTable summary;
  summary.comments = header(cfg, "raster");
  summary.comments.push_back("resolution_m=" + format_number(cfg.raster_resolution));
  summary.columns = {"seed", "mu", "width", "height", "blind_cells", "blind_fraction", "file"};
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const BlindMap& m = maps[i];
    const std::string name =
        "raster_seed" + std::to_string(tasks[i].seed) + "_mu" + format_number(tasks[i].mu) + ".pgm";
    std::vector<std::uint8_t> pixels(m.covered.size());
    std::transform(m.covered.begin(), m.covered.end(), pixels.begin(),
                   [](std::uint8_t c) { return static_cast<std::uint8_t>(c ? 255 : 0); });
    auto comments = header(cfg, "raster");
    comments.push_back("seed=" + std::to_string(tasks[i].seed) + " mu=" + format_number(tasks[i].mu) +
                       " resolution_m=" + format_number(m.resolution));
    comments.push_back("0 = blind, 255 = covered; row 0 is the top of the window");
    const auto path = prepare_output(cfg, name);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    write_pgm(out, m.width, m.height, pixels, comments);
    out.close();
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
    const std::size_t blind = m.blind_count();
    summary.add_cells({std::to_string(tasks[i].seed), format_number(tasks[i].mu), std::to_string(m.width),
                       std::to_string(m.height), std::to_string(blind),
                       format_number(static_cast<double>(blind) / static_cast<double>(m.covered.size())), name});
    log << "wrote " << path.string() << " (" << blind << " blind cells)\n";
  }
  write_table(cfg, "raster_summary.csv", summary, log);
  return kExitOk;
}

// Figure data: each figure is a list of rows; every row is computed by one
// task so the engine-level memos are not raced.
constexpr double kFigureRangeM = 1000.0;

struct FigureRow {
  std::vector<std::string> keys;
  std::function<std::vector<double>()> compute;
};

struct Figure {
  std::string file;
  std::vector<std::string> columns;
  std::vector<std::string> notes;
  std::vector<FigureRow> rows;
};

std::vector<double> axis(std::size_t points) {
  std::vector<double> v(points);
  for (std::size_t i = 0; i < points; ++i) {
    v[i] = kFigureRangeM * static_cast<double>(i + 1) / static_cast<double>(points);
  }
  return v;
}

int run_figures(const RunConfig& cfg, std::ostream& log) {
  EngineFactory factory;
  auto params_for = [&](double lambda_b, double mu, const MetaSurfaceDistribution& meta) {
    NetworkParams p = cfg.params;
    p.lambda_b = lambda_b;
    p.mu = mu;
    p.meta_dist = meta;
    return p;
  };
  const auto base_meta = cfg.params.meta_dist;
  const auto xs = axis(cfg.figure_points);
  const auto f = format_number;
  std::vector<Figure> figs;

  {
    Figure fig{"fig4.csv", {"lambda_b", "mu", "r", "P_v"}, {"visibility probability vs link length r (m)"}, {}};
    for (double lb : cfg.figure_lambda_b) {
      for (double mu : cfg.figure_mu) {
        auto engine = factory.make(params_for(lb, mu, base_meta));
        for (double r : xs) {
          fig.rows.push_back({{f(lb), f(mu), f(r)}, [engine, r] { return std::vector{engine->visibility_probability(r)}; }});
        }
      }
    }
    figs.push_back(std::move(fig));
  }
  {
    Figure fig{"fig5.csv", {"lambda_b", "mu", "E"}, {"blind-spot fraction vs RIS fraction mu"}, {}};
    for (double lb : cfg.figure_lambda_b) {
      for (double mu : cfg.figure_mu_grid) {
        auto engine = factory.make(params_for(lb, mu, base_meta));
        fig.rows.push_back({{f(lb), f(mu)}, [engine] { return std::vector{engine->blind_spot_fraction()}; }});
      }
    }
    figs.push_back(std::move(fig));
  }
  {
    Figure fig{"fig6.csv",
               {"lambda_b", "mu", "x", "F_W", "F_Rd", "F_Ri"},
               {"shortest-path CDF and its direct/indirect components vs path length x (m)"},
               {}};
    for (double lb : cfg.figure_lambda_b) {
      for (double mu : cfg.figure_mu) {
        auto engine = factory.make(params_for(lb, mu, base_meta));
        for (double x : xs) {
          fig.rows.push_back({{f(lb), f(mu), f(x)}, [engine, x] {
                                return std::vector{engine->shortest_path_cdf(x), engine->direct_distance(x).cdf,
                                                   engine->indirect_distance_cdf(x)};
                              }});
        }
      }
    }
    figs.push_back(std::move(fig));
  }
  {
    Figure fig{"fig7.csv", {"lambda_b", "M", "mu", "A_i", "eta"}, {"deployment efficiency for fixed M"}, {}};
    for (double lb : cfg.figure_lambda_b) {
      for (int m = 1; m <= 3; ++m) {
        for (double mu : cfg.figure_mu_grid) {
          auto engine = factory.make(params_for(lb, mu, MetaSurfaceDistribution::fixed(m)));
          fig.rows.push_back({{f(lb), std::to_string(m), f(mu)}, [engine] {
                                return std::vector{engine->association_probabilities().indirect,
                                                   engine->deployment_efficiency()};
                              }});
        }
      }
    }
    figs.push_back(std::move(fig));
  }
  const std::string tau_note = "tau=" + f(cfg.figure_tau) + " alpha=" + f(cfg.params.alpha);
  const double tau = cfg.figure_tau;
  {
    Figure fig{"fig8.csv", {"lambda_b", "mu", "P_cov"}, {"coverage probability vs mu, M = 1", tau_note}, {}};
    for (double lb : cfg.figure_lambda_b) {
      for (double mu : cfg.figure_mu_grid) {
        auto engine = factory.make(params_for(lb, mu, MetaSurfaceDistribution::fixed(1)));
        fig.rows.push_back({{f(lb), f(mu)}, [engine, tau] { return std::vector{engine->coverage_probability(tau)}; }});
      }
    }
    figs.push_back(std::move(fig));
  }
  {
    Figure fig{"fig9.csv", {"lambda_b", "M", "mu", "P_cov"}, {"coverage probability vs mu for fixed M", tau_note}, {}};
    for (double lb : cfg.figure_lambda_b) {
      for (int m = 1; m <= 3; ++m) {
        for (double mu : cfg.figure_mu_grid) {
          auto engine = factory.make(params_for(lb, mu, MetaSurfaceDistribution::fixed(m)));
          fig.rows.push_back(
              {{f(lb), std::to_string(m), f(mu)}, [engine, tau] { return std::vector{engine->coverage_probability(tau)}; }});
        }
      }
    }
    figs.push_back(std::move(fig));
  }
  {
    Figure fig{"fig10.csv",
               {"lambda_b", "M_F", "meta_dist", "mu", "P_cov"},
               {"coverage probability: fixed M = M_F vs M uniform on {1..2M_F-1}", tau_note},
               {}};
    for (double lb : cfg.figure_lambda_b) {
      for (int mf : {2, 3}) {
        for (const bool uniform : {false, true}) {
          const auto meta =
              uniform ? MetaSurfaceDistribution::uniform_with_mean(mf) : MetaSurfaceDistribution::fixed(mf);
          for (double mu : cfg.figure_mu_grid) {
            auto engine = factory.make(params_for(lb, mu, meta));
            fig.rows.push_back({{f(lb), std::to_string(mf), uniform ? "uniform" : "fixed", f(mu)},
                                [engine, tau] { return std::vector{engine->coverage_probability(tau)}; }});
          }
        }
      }
    }
    figs.push_back(std::move(fig));
  }

  std::vector<const FigureRow*> all;
  for (const auto& fig : figs) {
    for (const auto& row : fig.rows) all.push_back(&row);
  }
  log << "evaluating " << all.size() << " figure rows\n";
  const auto values = parallel_map(all.size(), cfg.threads, [&](std::size_t i) { return all[i]->compute(); });

  std::size_t k = 0;
  for (const auto& fig : figs) {
    CsvTable table;
    table.comments = header(cfg, "figures");
    table.comments.insert(table.comments.end(), fig.notes.begin(), fig.notes.end());
    table.columns = fig.columns;
    for (const auto& row : fig.rows) {
      auto cells = row.keys;
      for (double v : values[k++]) cells.push_back(format_number(v));
      table.add_cells(std::move(cells));
    }
    write_table(cfg, fig.file, table, log);
  }
  return kExitOk;
}

}  // namespace

int run_command(Command command, const RunConfig& cfg, std::ostream& log) {
  switch (command) {
    case Command::analytic: return run_analytic(cfg, log);
    case Command::simulate: return run_simulate(cfg, log);
    case Command::validate: return run_validate(cfg, log);
    case Command::raster: return run_raster(cfg, log);
    case Command::figures: return run_figures(cfg, log);
  }
  throw std::logic_error("unhandled command");
}

}  // namespace risgeom::cli
