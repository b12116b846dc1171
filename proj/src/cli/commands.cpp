#include "rot/cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "rot/cli/svg.hpp"
#include "rot/csv.hpp"
#include "rot/entropic.hpp"
#include "rot/error.hpp"
#include "rot/experiments.hpp"
#include "rot/inference.hpp"
#include "rot/ot1d.hpp"
#include "rot/ot_nd.hpp"
#include "rot/parallel.hpp"
#include "rot/sliced.hpp"
#include "rot/smooth.hpp"

namespace rot::cli {

namespace {

// Seed family layout: directions, smoothing noise, resampling.
constexpr std::uint64_t kDirectionStream = 0;
constexpr std::uint64_t kNoiseStream = 1;
constexpr std::uint64_t kResampleStream = 2;

struct Inputs {
  SampleMatrix x;
  SampleMatrix y;
};

Inputs load_inputs(const RunConfig& cfg, const Log& log) {
  log("reading " + cfg.x_path);
  auto x = read_csv_file(cfg.x_path);
  log("reading " + cfg.y_path);
  auto y = read_csv_file(cfg.y_path);
  if (x.dim() != y.dim())
    throw InputError("dimension mismatch: " + std::to_string(x.dim()) + " vs " + std::to_string(y.dim()) + " columns");
  const bool needs_equal = cfg.kind == Kind::smooth || (cfg.kind == Kind::plain && x.dim() > 1);
  if (needs_equal && x.rows() != y.rows())
    throw InputError("--kind " + kind_name(cfg.kind) + " needs equal sample counts in d > 1 (got " +
                     std::to_string(x.rows()) + " and " + std::to_string(y.rows()) + ")");
  return {std::move(x), std::move(y)};
}

std::vector<Direction> directions_for(const RunConfig& cfg, std::size_t d) {
  return sample_sphere(d, cfg.k, SeedPolicy(cfg.seed).child(kDirectionStream));
}

MaxSlicedConfig max_config(std::vector<Direction> dirs) {
  MaxSlicedConfig c;
  c.directions = std::move(dirs);
  return c;
}

double plain_wp(const SampleMatrix& x, const SampleMatrix& y, double p) {
  if (x.dim() == 1) {
    return wp_quantile(Discrete1D::uniform({x.data().begin(), x.data().end()}),
                       Discrete1D::uniform({y.data().begin(), y.data().end()}), p);
  }
  return exact_wp(x, y, p);
}

SinkhornConfig sinkhorn_config(const RunConfig& cfg) {
  SinkhornConfig c;
  c.eps = cfg.eps;
  c.max_iter = cfg.max_iter;
  c.tol = cfg.tol;
  c.validate();
  return c;
}

// The statistic on the scale reported as "value".
Statistic make_statistic(const RunConfig& cfg, std::size_t d) {
  const double p = cfg.p;
  switch (cfg.kind) {
    case Kind::plain:
      return {"plain", [p](const SampleMatrix& x, const SampleMatrix* y) { return plain_wp(x, *y, p); }};
    case Kind::sliced_avg: {
      auto dirs = directions_for(cfg, d);
      return {"sliced-avg", [p, dirs](const SampleMatrix& x, const SampleMatrix* y) {
                return avg_sliced_wp(x, *y, p, dirs).value;
              }};
    }
    case Kind::sliced_max: {
      auto conf = max_config(directions_for(cfg, d));
      return {"sliced-max", [p, conf](const SampleMatrix& x, const SampleMatrix* y) {
                return max_sliced_wp(x, *y, p, conf).first.value;
              }};
    }
    case Kind::smooth: {
      const MollifierKernel kernel(*cfg.sigma, d);
      const std::size_t r = cfg.r;
      const SeedPolicy noise = SeedPolicy(cfg.seed).child(kNoiseStream);
      return {"smooth", [p, kernel, r, noise](const SampleMatrix& x, const SampleMatrix* y) {
                return smooth_wp(x, *y, kernel, p, r, noise).value;
              }};
    }
    case Kind::entropic: {
      const auto conf = sinkhorn_config(cfg);
      return {"entropic", [conf](const SampleMatrix& x, const SampleMatrix* y) {
                return eot_estimate(x, *y, conf).value;
              }};
    }
  }
  throw InputError("unknown kind");
}

Json parameters(const RunConfig& cfg, const Inputs& in) {
  Json j;
  j["p"] = cfg.p;
  if (cfg.kind == Kind::sliced_avg || cfg.kind == Kind::sliced_max) j["k"] = cfg.k;
  if (cfg.kind == Kind::smooth) {
    j["sigma"] = *cfg.sigma;
    j["r"] = cfg.r;
  }
  if (cfg.kind == Kind::entropic) j["eps"] = cfg.eps;
  j["n_x"] = in.x.rows();
  j["n_y"] = in.y.rows();
  j["d"] = in.x.dim();
  return j;
}

Json direction_json(const Direction& dir) {
  Json a = Json::array();
  for (double c : dir.components()) a.push_back(c);
  return a;
}

Json summarize(const SlicedEstimate& est, bool with_argmax) {
  std::vector<double> v;
  v.reserve(est.per_direction.size());
  for (const auto& dv : est.per_direction) v.push_back(dv.value);
  Json j;
  j["count"] = v.size();
  j["mean"] = mean(v);
  j["sd"] = std::sqrt(population_variance(v));
  j["min"] = *std::min_element(v.begin(), v.end());
  j["max"] = *std::max_element(v.begin(), v.end());
  if (with_argmax) {
    const auto best = std::max_element(est.per_direction.begin(), est.per_direction.end(),
                                       [](const auto& a, const auto& b) { return a.value < b.value; });
    j["argmax_direction"] = direction_json(best->direction);
  }
  return j;
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

// Fills kind, value, value_pth_root and per_direction; returns the value.
double distance_fields(const RunConfig& cfg, const Inputs& in, Json& doc, const Log& log) {
  const double p = cfg.p;
  doc["kind"] = kind_name(cfg.kind);
  switch (cfg.kind) {
    case Kind::plain: {
      log("solving the assignment problem");
      const double v = plain_wp(in.x, in.y, p);
      doc["value"] = v;
      doc["value_pth_root"] = std::pow(v, 1.0 / p);
      doc["per_direction"] = nullptr;
      return v;
    }
    case Kind::sliced_avg: {
      log("projecting onto " + std::to_string(cfg.k) + " directions");
      const auto dirs = directions_for(cfg, in.x.dim());
      const auto est = avg_sliced_wp(in.x, in.y, p, dirs);
      doc["value"] = est.value;
      doc["value_pth_root"] = std::pow(est.value, 1.0 / p);
      doc["per_direction"] = summarize(est, false);
      return est.value;
    }
    case Kind::sliced_max: {
      log("searching " + std::to_string(cfg.k) + " directions and refining the best");
      const auto [est, argmax] = max_sliced_wp(in.x, in.y, p, max_config(directions_for(cfg, in.x.dim())));
      doc["value"] = est.value;
      doc["value_pth_root"] = std::pow(est.value, 1.0 / p);
      doc["per_direction"] = summarize(est, true);
      doc["per_direction"]["near_maximizers"] = argmax.directions.size();
      return est.value;
    }
    case Kind::smooth: {
      log("smoothing with " + std::to_string(cfg.r) + " noise reps");
      const MollifierKernel kernel(*cfg.sigma, in.x.dim());
      const auto est = smooth_wp(in.x, in.y, kernel, p, cfg.r, SeedPolicy(cfg.seed).child(kNoiseStream));
      doc["value"] = est.value;
      doc["per_direction"] = nullptr;
      doc["rep_sd"] = est.rep_sd;
      doc["mc_error"] = est.mc_error();
      return est.value;
    }
    case Kind::entropic: {
      log("running Sinkhorn");
      const auto est = eot_estimate(in.x, in.y, sinkhorn_config(cfg));
      doc["value"] = est.value;
      doc["per_direction"] = nullptr;
      doc["iterations"] = est.solution.iterations;
      doc["marginal_error"] = est.solution.marginal_err;
      return est.value;
    }
  }
  return 0.0;
}

// Plug-in asymptotic variance of sqrt(n_x) (T - T_0) for the normal interval.
double plugin_variance(const RunConfig& cfg, const Inputs& in) {
  const double ratio = static_cast<double>(in.x.rows()) / static_cast<double>(in.y.rows());
  switch (cfg.kind) {
    case Kind::sliced_avg: {
      const auto dirs = directions_for(cfg, in.x.dim());
      const auto v = cfg.p > 1.0 ? variance_vp(in.x, in.y, cfg.p, dirs, Design::two_sample)
                                 : variance_v1_sign(in.x, in.y, dirs);
      return v.v2 + ratio * v.w2.value_or(0.0);
    }
    case Kind::entropic: {
      const auto est = eot_estimate(in.x, in.y, sinkhorn_config(cfg));
      return est.v1 + ratio * est.v2.value_or(0.0);
    }
    default:
      throw InputError("--method normal is available for sliced-avg and entropic only");
  }
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path.string());
  f << content;
  if (!f) throw InputError("failed writing " + path.string());
}

}  // namespace

Json cmd_dist(const RunConfig& cfg, const Log& log) {
  cfg.validate_distance();
  const auto t0 = std::chrono::steady_clock::now();
  const auto in = load_inputs(cfg, log);
  Json doc;
  distance_fields(cfg, in, doc, log);
  doc["parameters"] = parameters(cfg, in);
  doc["seed"] = cfg.seed;
  if (cfg.timing) doc["wall_time_ms"] = elapsed_ms(t0);
  return doc;
}

Json cmd_ci(const RunConfig& cfg, const Log& log) {
  cfg.validate_ci();
  const auto t0 = std::chrono::steady_clock::now();
  const auto in = load_inputs(cfg, log);
  Json doc;
  const double value = distance_fields(cfg, in, doc, log);

  std::string method = cfg.method;
  if (method == "auto") method = cfg.kind == Kind::sliced_max ? "subsample" : "bootstrap";

  const SeedPolicy resample_seed = SeedPolicy(cfg.seed).child(kResampleStream);
  Interval ci;
  double variance = 0.0;
  Json extra;
  if (method == "normal") {
    log("computing the plug-in variance");
    variance = plugin_variance(cfg, in);
    ci = normal_ci(value, variance, in.x.rows(), cfg.level);
  } else if (method == "bootstrap") {
    log("bootstrap with B = " + std::to_string(cfg.B));
    const auto res = bootstrap(make_statistic(cfg, in.x.dim()), in.x, &in.y, cfg.B, resample_seed, cfg.level);
    ci = res.ci;
    variance = res.variance;
    extra["B"] = cfg.B;
  } else {
    const std::size_t m = cfg.m.value_or(default_subsample_size(std::min(in.x.rows(), in.y.rows())));
    log("subsampling with m = " + std::to_string(m) + ", B = " + std::to_string(cfg.B));
    const auto res = subsample(make_statistic(cfg, in.x.dim()), in.x, &in.y, m, cfg.B, resample_seed, cfg.level);
    ci = res.ci;
    variance = res.variance;
    extra["B"] = cfg.B;
    extra["m"] = m;
    extra["median_replicate"] = res.k(0.5);
    extra["median_corrected"] = res.corrected(0.5);
  }
  doc["method"] = method;
  doc["level"] = cfg.level;
  doc["ci_lo"] = ci.lo;
  doc["ci_hi"] = ci.hi;
  doc["variance_estimate"] = variance;
  doc["resampling"] = extra.is_null() ? Json(nullptr) : extra;
  doc["parameters"] = parameters(cfg, in);
  doc["seed"] = cfg.seed;
  if (cfg.timing) doc["wall_time_ms"] = elapsed_ms(t0);
  return doc;
}

Json cmd_clt(const RunConfig& cfg, const Log& log) {
  cfg.validate_clt();
  CltExperiment exp;
  if (cfg.population == "eot-discrete") {
    EotCltOptions opt;
    opt.n = cfg.n;
    opt.bootstrap_B = cfg.B;
    opt.level = cfg.level;
    opt.eps = cfg.eps;
    log("solving the population problem");
    exp = eot_clt_experiment(opt);
  } else if (cfg.population == "uniform-boxes") {
    SlicedCltOptions opt;
    opt.n = cfg.n;
    opt.k = cfg.k;
    opt.p = cfg.p;
    opt.direction_seed = SeedPolicy(cfg.seed).sub_seed(kDirectionStream);
    exp = sliced_boxes_experiment(opt);
    exp.level = cfg.level;
  } else {
    exp = point_mass_experiment(cfg.n, 2);
    exp.level = cfg.level;
  }
  log("running " + std::to_string(cfg.R) + " replications of " + exp.name);
  const auto rep = clt_experiment(exp, cfg.R, SeedPolicy(cfg.seed).child(kResampleStream));

  namespace fs = std::filesystem;
  const fs::path dir(cfg.plot_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create --plot-dir " + cfg.plot_dir + ": " + ec.message());

  const std::string stem = cfg.population;
  const fs::path csv_path = dir / (stem + "_replicates.csv");
  {
    std::ostringstream csv;
    csv << "replicate,estimate,plugin_variance,standardized\n";
    const double root = std::sqrt(static_cast<double>(rep.n));
    const double center = rep.reference ? *rep.reference : mean(rep.estimates);
    for (std::size_t r = 0; r < rep.R; ++r) {
      csv << r << ',' << format_double(rep.estimates[r]) << ',' << format_double(rep.variances[r]) << ',';
      if (!rep.degenerate && rep.variances[r] > 0.0)
        csv << format_double(root * (rep.estimates[r] - center) / std::sqrt(rep.variances[r]));
      csv << '\n';
    }
    write_file(csv_path, csv.str());
  }

  Json files;
  files["replicates_csv"] = csv_path.string();
  if (!rep.degenerate) {
    const fs::path hist = dir / (stem + "_histogram.svg");
    const fs::path qq = dir / (stem + "_qq.svg");
    log("writing plots to " + dir.string());
    write_file(hist, histogram_svg(rep.standardized, exp.name + ": standardized replicates"));
    write_file(qq, qq_svg(rep.standardized, exp.name + ": normal QQ plot"));
    files["histogram_svg"] = hist.string();
    files["qq_svg"] = qq.string();
  } else {
    files["histogram_svg"] = nullptr;
    files["qq_svg"] = nullptr;
  }

  Json doc;
  doc["population"] = cfg.population;
  doc["name"] = rep.name;
  doc["n"] = rep.n;
  doc["R"] = rep.R;
  doc["level"] = rep.level;
  doc["seed"] = cfg.seed;
  doc["self_centered"] = rep.self_centered;
  doc["degenerate"] = rep.degenerate;
  doc["reference"] = rep.reference ? Json(*rep.reference) : Json(nullptr);
  doc["reference_note"] = rep.reference_note;
  doc["ks_distance"] = rep.ks_distance ? Json(*rep.ks_distance) : Json(nullptr);
  doc["coverage"] = rep.coverage ? Json(*rep.coverage) : Json(nullptr);
  doc["mean_estimate"] = mean(rep.estimates);
  doc["replicate_variance"] = rep.replicate_variance;
  doc["mean_plugin_variance"] = rep.mean_plugin_variance;
  doc["variance_ratio"] =
      rep.replicate_variance > 0.0 ? Json(rep.mean_plugin_variance / rep.replicate_variance) : Json(nullptr);
  if (!rep.standardized.empty()) {
    doc["standardized_mean"] = mean(rep.standardized);
    doc["standardized_sd"] = std::sqrt(population_variance(rep.standardized));
  } else {
    doc["standardized_mean"] = nullptr;
    doc["standardized_sd"] = nullptr;
  }
  doc["files"] = files;
  return doc;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::optional<int> threads;
  std::string kind = "plain";
  std::optional<double> sigma;
  std::optional<std::size_t> m;

  CLI::App app{"Statistical inference for Wasserstein-type distances", "rot-infer"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");
  app.add_option("--threads", threads, "Worker thread cap (default: ROT_INFER_THREADS, then OpenMP default)");
  app.add_flag("--verbose,-v", cfg.verbose, "Log one line per stage to stderr");

  auto add_distance_opts = [&](CLI::App* sub) {
    sub->add_option("--kind", kind, "plain | sliced-avg | sliced-max | smooth | entropic")->capture_default_str();
    sub->add_option("--p", cfg.p, "Cost exponent p >= 1")->capture_default_str();
    sub->add_option("--sigma", sigma, "Mollifier bandwidth (smooth only)");
    sub->add_option("--eps", cfg.eps, "Entropic regularization")->capture_default_str();
    sub->add_option("--max-iter", cfg.max_iter, "Sinkhorn iteration cap (entropic)")->capture_default_str();
    sub->add_option("--tol", cfg.tol, "Sinkhorn L1 marginal tolerance (entropic)")->capture_default_str();
    sub->add_option("--k", cfg.k, "Number of Monte Carlo directions")->capture_default_str();
    sub->add_option("--r", cfg.r, "Noise reps for smooth")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
    sub->add_option("--out,-o", cfg.out_path, "Write the JSON document here instead of stdout");
    sub->add_flag("!--no-timing", cfg.timing, "Omit wall_time_ms so output is byte-reproducible");
    sub->add_option("x", cfg.x_path, "Source sample CSV")->required();
    sub->add_option("y", cfg.y_path, "Target sample CSV")->required();
  };

  auto* dist = app.add_subcommand("dist", "Point estimate of a distance between two samples");
  add_distance_opts(dist);

  auto* ci = app.add_subcommand("ci", "Confidence interval for a distance");
  add_distance_opts(ci);
  ci->add_option("--method", cfg.method, "auto | bootstrap | normal | subsample")->capture_default_str();
  ci->add_option("--B", cfg.B, "Resampling replicates (>= 100)")->capture_default_str();
  ci->add_option("--m", m, "Subsample size (default ceil(n^(2/3)))");
  ci->add_option("--level", cfg.level, "Confidence level")->capture_default_str();

  auto* clt = app.add_subcommand("clt", "Monte Carlo check of a central limit theorem");
  clt->add_option("--population", cfg.population, "eot-discrete | uniform-boxes | point-mass")->required();
  clt->add_option("--n", cfg.n, "Sample size per replication")->capture_default_str();
  clt->add_option("--R", cfg.R, "Replications")->capture_default_str();
  clt->add_option("--B", cfg.B, "Bootstrap replicates per replication (eot-discrete; 0 = normal interval)")
      ->capture_default_str();
  clt->add_option("--k", cfg.k, "Directions (uniform-boxes)")->capture_default_str();
  clt->add_option("--p", cfg.p, "Cost exponent (uniform-boxes)")->capture_default_str();
  clt->add_option("--eps", cfg.eps, "Entropic regularization (eot-discrete)")->capture_default_str();
  clt->add_option("--level", cfg.level, "Confidence level")->capture_default_str();
  clt->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
  clt->add_option("--out,-o", cfg.out_path, "Write the JSON report here instead of stdout");
  clt->add_option("--plot-dir", cfg.plot_dir, "Directory for the CSV and SVG files")->capture_default_str();

  auto* self = app.add_subcommand("selftest", "Run the built-in oracle checks");
  self->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  const Log log = [&](const std::string& msg) {
    if (cfg.verbose) err << "[rot-infer] " << msg << "\n";
  };

  try {
    const char* env = std::getenv("ROT_INFER_THREADS");
    if (auto t = resolve_threads(threads, env)) {
      set_threads(*t);
      log("threads = " + std::to_string(*t));
    }
    cfg.sigma = sigma;
    cfg.m = m;
    if (!dist->parsed() && !ci->parsed() && self->parsed()) return cmd_selftest(cfg.seed, out);

    Json doc;
    if (dist->parsed() || ci->parsed()) {
      cfg.kind = parse_kind(kind);
      doc = dist->parsed() ? cmd_dist(cfg, log) : cmd_ci(cfg, log);
    } else {
      doc = cmd_clt(cfg, log);
    }
    const std::string text = dump_json(doc) + "\n";
    if (cfg.out_path.empty()) {
      out << text;
    } else {
      write_file(cfg.out_path, text);
      log("wrote " + cfg.out_path);
    }
    return 0;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace rot::cli
