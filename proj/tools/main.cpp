// Command-line front end: simulate, fit, evaluate, cv.
#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include "lina/eval.hpp"
#include "lina/io.hpp"
#include "lina/mdlina.hpp"
#include "lina/synth.hpp"

namespace fs = std::filesystem;
using namespace lina;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct CommonOpts {
  Hyperparams hp;
  std::string penalty = "qpm";
  std::string out = ".";
  std::string config_path;
};

void add_hyperparam_flags(CLI::App* sub, CommonOpts& c) {
  sub->add_option("--lambda1", c.hp.lambda1, "adaptive-L1 weight on B");
  sub->add_option("--lambda2", c.hp.lambda2, "L2 weight on B");
  sub->add_option("--lambda3", c.hp.lambda3, "adaptive-L1 weight on H");
  sub->add_option("--eps", c.hp.threshold_eps, "pruning threshold");
  sub->add_option("--penalty", c.penalty, "qpm or alm")
      ->check(CLI::IsMember({"qpm", "alm"}));
  sub->add_option("--seed", c.hp.seed, "RNG seed");
  sub->add_option("--out", c.out, "output directory");
  sub->add_option("--config", c.config_path,
                  "key=value file with defaults for the flags above");
}

// Config files supply defaults only; flags given on the command line win.
void apply_config_file(const CLI::App* sub, CommonOpts& c) {
  if (c.config_path.empty()) return;
  const std::map<std::string, std::string> kv = read_keyvalue(c.config_path);
  auto has = [&](const std::string& key) {
    return kv.count(key) > 0 && sub->count("--" + key) == 0;
  };
  auto number = [&](const std::string& key, double& field) {
    if (!has(key)) return;
    try {
      field = std::stod(kv.at(key));
    } catch (const std::exception&) {
      throw IoError("bad numeric value for '" + key + "' in " + c.config_path);
    }
  };
  number("lambda1", c.hp.lambda1);
  number("lambda2", c.hp.lambda2);
  number("lambda3", c.hp.lambda3);
  number("eps", c.hp.threshold_eps);
  if (has("seed")) {
    try {
      c.hp.seed = std::stol(kv.at("seed"));
    } catch (const std::exception&) {
      throw IoError("bad numeric value for 'seed' in " + c.config_path);
    }
  }
  if (has("penalty")) {
    const std::string& v = kv.at("penalty");
    if (v != "qpm" && v != "alm")
      throw IoError("penalty must be qpm or alm in " + c.config_path);
    c.penalty = v;
  }
  if (has("out")) c.out = kv.at("out");
}

void finish_hyperparams(const CLI::App* sub, CommonOpts& c) {
  apply_config_file(sub, c);
  c.hp.penalty_mode = c.penalty == "alm" ? PenaltyMode::ALM : PenaltyMode::QPM;
  c.hp.validate();
}

// Deterministic per-trial seed spacing; wide stride avoids stream overlap.
long trial_seed(long base, int trial) { return base + 1000003L * trial; }

void write_error_record(const fs::path& out_dir, const std::string& kind,
                        const std::string& msg) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) return;  // stderr still carries the message
  write_keyvalue(out_dir / "error.txt", {{"error", kind}, {"message", msg}});
}

void run_trials(int trials, int jobs, const std::function<void(int)>& body) {
  if (trials <= 1) {
    body(0);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex err_mutex;
  auto worker = [&] {
    for (int t = next.fetch_add(1); t < trials; t = next.fetch_add(1)) {
      try {
        body(t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  const int n_threads = std::max(1, std::min(jobs, trials));
  std::vector<std::thread> pool;
  for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double quartile(std::vector<double> v, double frac) {
  std::sort(v.begin(), v.end());
  const double pos = frac * (static_cast<double>(v.size()) - 1);
  const size_t lo = static_cast<size_t>(pos);
  const size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - lo) * (v[hi] - v[lo]);
}

std::vector<std::string> augmented_names(const MultiDomainDataset& md) {
  std::vector<std::string> names;
  for (const auto& d : md.domains)
    names.insert(names.end(), d.variable_names.begin(), d.variable_names.end());
  return names;
}

// ---------------------------------------------------------------- simulate

struct SimulateOpts {
  CommonOpts common;
  GenConfig gen;
  std::string noise = "laplace";
  int domains = 1;
  bool shared = false;
  int trials = 1;
  int jobs = 1;
};

void write_simulation(const fs::path& dir, const SimulateOpts& o, long seed) {
  fs::create_directories(dir);
  GenConfig cfg = o.gen;
  cfg.seed = seed;
  std::vector<std::pair<std::string, std::string>> summary;

  if (o.domains == 1) {
    const GroundTruth gt = gen_single(cfg);
    DomainDataset d;
    d.data = gt.X;
    for (Eigen::Index i = 0; i < gt.X.rows(); ++i)
      d.variable_names.push_back("x" + std::to_string(i + 1));
    write_domain_csv(dir / "data.csv", d);
    write_manifest(dir / "manifest.txt", {"data.csv"});
    write_matrix_csv(dir / "b_true.csv", gt.B_true);
    write_matrix_csv(dir / "g_true.csv", gt.G_true);
    write_matrix_csv(dir / "f_true.csv", gt.F);
    write_clusters(dir / "clusters.txt", gt.clusters, d.variable_names);
    summary = {{"q", std::to_string(cfg.q)},
               {"p", std::to_string(gt.X.rows())},
               {"n", std::to_string(cfg.n)},
               {"M", "1"},
               {"seed", std::to_string(seed)}};
  } else {
    const MultiDomainTruth mt = gen_multidomain(o.domains, cfg, o.shared, seed);
    std::vector<std::string> files;
    for (int m = 0; m < o.domains; ++m) {
      const std::string name = "domain_" + std::to_string(m + 1) + ".csv";
      write_domain_csv(dir / name, mt.data.domains[m]);
      files.push_back(name);
      write_matrix_csv(dir / ("b_true_" + std::to_string(m + 1) + ".csv"),
                       mt.truths[m].B_true);
      write_matrix_csv(dir / ("g_true_" + std::to_string(m + 1) + ".csv"),
                       mt.truths[m].G_true);
    }
    write_manifest(dir / "manifest.txt", files);

    // Clusters over the augmented (concatenated) variable set.
    ClusterSpec aug;
    int offset = 0;
    for (int m = 0; m < o.domains; ++m) {
      for (const auto& cl : mt.truths[m].clusters.clusters) {
        std::vector<int> shifted;
        for (int v : cl) shifted.push_back(v + offset);
        aug.clusters.push_back(shifted);
      }
      offset += static_cast<int>(mt.data.domains[m].p());
    }
    write_clusters(dir / "clusters.txt", aug, augmented_names(mt.data));
    summary = {{"q", std::to_string(cfg.q)},
               {"p", std::to_string(mt.data.domains[0].p())},
               {"n", std::to_string(cfg.n)},
               {"M", std::to_string(o.domains)},
               {"seed", std::to_string(seed)}};
  }
  write_keyvalue(dir / "summary.txt", summary);
}

int cmd_simulate(const SimulateOpts& o) {
  SimulateOpts opts = o;
  if (o.noise == "sub")
    opts.gen.noise_dist = NoiseDist::SubGaussian;
  else if (o.noise == "super")
    opts.gen.noise_dist = NoiseDist::SuperGaussian;
  else
    opts.gen.noise_dist = NoiseDist::Laplace;
  opts.gen.validate();

  const fs::path out(o.common.out);
  if (o.trials == 1) {
    write_simulation(out, opts, o.common.hp.seed);
  } else {
    run_trials(o.trials, o.jobs, [&](int t) {
      write_simulation(out / ("trial_" + std::to_string(t + 1)), opts,
                       trial_seed(o.common.hp.seed, t));
    });
  }
  std::cout << "simulate q=" << opts.gen.q
            << " p=" << opts.gen.q * opts.gen.indicators_per_factor
            << " n=" << opts.gen.n << " M=" << o.domains
            << " seed=" << o.common.hp.seed << " trials=" << o.trials << "\n";
  return kExitOk;
}

// --------------------------------------------------------------------- fit

struct FitOpts {
  CommonOpts common;
  std::string data;      // single-domain CSV
  std::string manifest;  // multi-domain manifest
  std::string clusters;
  bool locate = false;
  int q_tilde = 0;  // 0 -> max_m q_m
};

int cmd_fit(const FitOpts& o) {
  if (o.data.empty() == o.manifest.empty()) {
    std::cerr << "fit: exactly one of --data or --manifest is required\n";
    return kExitUsage;
  }
  if (o.clusters.empty() && !o.locate) {
    std::cerr << "fit: supply --clusters or pass --locate\n";
    return kExitUsage;
  }

  MultiDomainDataset md;
  if (!o.data.empty())
    md.domains.push_back(read_domain_csv(o.data, 1));
  else
    md = read_manifest(o.manifest);
  for (auto& d : md.domains) d = standardize(d);

  const std::vector<std::string> names = augmented_names(md);
  ClusterSpec clusters;
  if (!o.clusters.empty()) {
    clusters = read_clusters(o.clusters, names);
  } else {
    IndependenceTestConfig icfg;
    int offset = 0;
    for (const auto& d : md.domains) {
      const ClusterSpec found = locate_clusters(d, icfg);
      for (const auto& cl : found.clusters) {
        std::vector<int> shifted;
        for (int v : cl) shifted.push_back(v + offset);
        clusters.clusters.push_back(shifted);
      }
      offset += static_cast<int>(d.p());
    }
  }

  const fs::path out(o.common.out);
  fs::create_directories(out);
  write_clusters(out / "clusters.txt", clusters, names);

  PenaltyState state;
  if (md.num_domains() == 1) {
    const MeasurementModel model = fit_cfa(md.domains[0].data, clusters);
    const StructureModel fit = fit_structure(model, md.domains[0].data, o.common.hp);
    state = fit.state;
    write_measurement_model(out / "loadings.txt", model);
    write_matrix_csv(out / "b.csv", fit.pruned_B);
    write_matrix_csv(out / "b_unpruned.csv", fit.B);
    write_dot(out / "graph.dot", fit.pruned_B, fit.factor_names);
  } else {
    const AugmentedDataset aug = augment(md);
    const MeasurementModel model = fit_cfa(aug.data, clusters);
    int q_max = 0;
    {
      // q_m read off the cluster/domain bookkeeping: factors whose members
      // live in the same domain.
      std::vector<int> per_domain(md.num_domains(), 0);
      for (const auto& cl : clusters.clusters)
        ++per_domain[aug.row_domain[cl.front()] - 1];
      q_max = *std::max_element(per_domain.begin(), per_domain.end());
    }
    const int q_tilde = o.q_tilde > 0 ? o.q_tilde : q_max;
    const MdStructureModel fit = fit_md(model, aug, q_tilde, o.common.hp);
    state = fit.state;
    write_measurement_model(out / "loadings.txt", model);
    write_matrix_csv(out / "b_tilde.csv", fit.pruned_B_tilde);
    write_matrix_csv(out / "b_tilde_unpruned.csv", fit.B_tilde);
    write_transform(out / "transform.txt", fit.H, fit.assignment);
    std::vector<std::string> fnames;
    for (int f = 0; f < q_tilde; ++f) fnames.push_back("f" + std::to_string(f + 1));
    write_dot(out / "graph.dot", fit.pruned_B_tilde, fnames);
  }

  const bool clean = state.constraint_satisfied && state.line_search_ok;
  write_keyvalue(out / "report.txt",
                 {{"h", format_double(state.h_value)},
                  {"rho", format_double(state.rho)},
                  {"alpha", format_double(state.alpha)},
                  {"lambda1", format_double(o.common.hp.lambda1)},
                  {"lambda2", format_double(o.common.hp.lambda2)},
                  {"lambda3", format_double(o.common.hp.lambda3)},
                  {"eps", format_double(o.common.hp.threshold_eps)},
                  {"penalty", o.common.penalty},
                  {"seed", std::to_string(o.common.hp.seed)},
                  {"outer_iterations", std::to_string(state.outer_iter)},
                  {"constraint_satisfied", state.constraint_satisfied ? "1" : "0"},
                  {"line_search_ok", state.line_search_ok ? "1" : "0"},
                  {"status", clean ? "ok" : "numerical_failure"}});
  std::cout << "fit M=" << md.num_domains() << " h=" << format_double(state.h_value)
            << " status=" << (clean ? "ok" : "numerical_failure") << "\n";
  return clean ? kExitOk : kExitNumerical;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateOpts {
  CommonOpts common;
  std::string b_est, b_true, g_est, g_true, data;
  int trials = 0;  // > 0 switches to batch simulate+fit+score mode
  int jobs = 1;
  long n = 1000;
  int q = 5;
};

void write_metrics(const fs::path& out, const Matrix& B_est, const Matrix& B_true,
                   double eps) {
  const SkeletonMetrics sk = skeleton_metrics(B_est, B_true, eps);
  const SkeletonMetrics dm = directed_metrics(B_est, B_true, eps);
  write_keyvalue(out,
                 {{"skeleton_recall", format_double(sk.recall)},
                  {"skeleton_precision", format_double(sk.precision)},
                  {"skeleton_f1", format_double(sk.f1)},
                  {"directed_recall", format_double(dm.recall)},
                  {"directed_precision", format_double(dm.precision)},
                  {"directed_f1", format_double(dm.f1)}});
}

int cmd_evaluate_batch(const EvaluateOpts& o) {
  struct TrialRow {
    long seed = 0;
    double f1 = 0, recall = 0, precision = 0, effect_error = 0;
  };
  std::vector<TrialRow> rows(o.trials);
  run_trials(o.trials, o.jobs, [&](int t) {
    GenConfig cfg;
    cfg.q = o.q;
    cfg.n = o.n;
    cfg.seed = trial_seed(o.common.hp.seed, t);
    const GroundTruth gt = gen_single(cfg);
    Matrix X = gt.X;
    standardize_in_place(X);
    Hyperparams hp = o.common.hp;
    hp.seed = cfg.seed;
    const MeasurementModel model = fit_cfa(X, gt.clusters);
    const StructureModel fit = fit_structure(model, X, hp);
    const SkeletonMetrics sk =
        skeleton_metrics(fit.pruned_B, gt.B_true, hp.threshold_eps);
    const MatchResult match =
        matched_effect_error(fit.pruned_B, model.loadings, gt.B_true, gt.G_true);
    rows[t] = {cfg.seed, sk.f1, sk.recall, sk.precision, match.mean_abs_error};
  });

  const fs::path out(o.common.out);
  fs::create_directories(out);
  {
    std::ostringstream csv;
    csv << "trial,seed,f1,recall,precision,effect_error\n";
    for (int t = 0; t < o.trials; ++t)
      csv << (t + 1) << "," << rows[t].seed << "," << format_double(rows[t].f1)
          << "," << format_double(rows[t].recall) << ","
          << format_double(rows[t].precision) << ","
          << format_double(rows[t].effect_error) << "\n";
    std::ofstream f(out / "trials.csv");
    if (!f) throw IoError("cannot write " + (out / "trials.csv").string());
    f << csv.str();
  }
  std::vector<double> f1s, errs;
  for (const auto& r : rows) {
    f1s.push_back(r.f1);
    errs.push_back(r.effect_error);
  }
  write_keyvalue(out / "summary.txt",
                 {{"trials", std::to_string(o.trials)},
                  {"f1_median", format_double(median(f1s))},
                  {"f1_q1", format_double(quartile(f1s, 0.25))},
                  {"f1_q3", format_double(quartile(f1s, 0.75))},
                  {"effect_error_median", format_double(median(errs))}});
  std::cout << "evaluate trials=" << o.trials
            << " f1_median=" << format_double(median(f1s)) << "\n";
  return kExitOk;
}

int cmd_evaluate(const EvaluateOpts& o) {
  if (o.trials > 0) return cmd_evaluate_batch(o);
  if (o.b_est.empty() || o.b_true.empty()) {
    std::cerr << "evaluate: --b-est and --b-true are required\n";
    return kExitUsage;
  }
  const Matrix B_est = read_matrix_csv(o.b_est);
  const Matrix B_true = read_matrix_csv(o.b_true);
  const fs::path out(o.common.out);
  fs::create_directories(out);
  write_metrics(out / "metrics.txt", B_est, B_true, o.common.hp.threshold_eps);

  if (!o.g_est.empty() && !o.g_true.empty()) {
    const MatchResult match = matched_effect_error(
        B_est, read_matrix_csv(o.g_est), B_true, read_matrix_csv(o.g_true));
    std::ostringstream perm;
    for (size_t i = 0; i < match.permutation.size(); ++i)
      perm << (i ? " " : "") << match.permutation[i];
    write_keyvalue(out / "effect_error.txt",
                   {{"mean_abs_error", format_double(match.mean_abs_error)},
                    {"permutation", perm.str()}});
  }
  if (!o.data.empty()) {
    const DomainDataset d = read_domain_csv(o.data);
    const Vector v = vif(d.data);
    std::ofstream f(out / "vif.csv");
    if (!f) throw IoError("cannot write " + (out / "vif.csv").string());
    f << "variable,vif\n";
    for (Eigen::Index i = 0; i < v.size(); ++i)
      f << d.variable_names[i] << "," << format_double(v[i]) << "\n";
  }
  std::cout << "evaluate f1="
            << format_double(
                   skeleton_metrics(B_est, B_true, o.common.hp.threshold_eps).f1)
            << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------- cv

struct CvOpts {
  CommonOpts common;
  std::string data, clusters;
  int folds = 10;
  std::vector<double> lambda1_grid{0.001, 0.01, 0.1, 1.0};
  std::vector<double> eps_grid{0.05, 0.1, 0.2, 0.3, 0.4, 0.6};
};

int cmd_cv(const CvOpts& o) {
  if (o.data.empty() || o.clusters.empty()) {
    std::cerr << "cv: --data and --clusters are required\n";
    return kExitUsage;
  }
  const DomainDataset d = read_domain_csv(o.data);
  const ClusterSpec clusters = read_clusters(o.clusters, d.variable_names);

  std::vector<std::pair<double, double>> grid;
  for (double l1 : o.lambda1_grid)
    for (double eps : o.eps_grid) grid.emplace_back(l1, eps);

  const CvReport report =
      cross_validate(d.data, clusters, grid, o.folds, o.common.hp);

  const fs::path out(o.common.out);
  fs::create_directories(out);
  {
    std::ofstream f(out / "cv_grid.csv");
    if (!f) throw IoError("cannot write " + (out / "cv_grid.csv").string());
    f << "lambda1,eps,mean_validation_negloglik,failed\n";
    for (const auto& c : report.grid)
      f << format_double(c.lambda1) << "," << format_double(c.eps) << ","
        << (c.failed ? "" : format_double(c.mean_validation_negloglik)) << ","
        << (c.failed ? 1 : 0) << "\n";
  }
  if (report.best_cell < 0) {
    write_keyvalue(out / "best.txt", {{"status", "all_cells_failed"}});
    std::cerr << "cv: every grid cell failed\n";
    return kExitNumerical;
  }
  const CvCell& best = report.grid[report.best_cell];
  write_keyvalue(out / "best.txt",
                 {{"lambda1", format_double(best.lambda1)},
                  {"eps", format_double(best.eps)},
                  {"mean_validation_negloglik",
                   format_double(best.mean_validation_negloglik)},
                  {"folds", std::to_string(report.folds)}});
  std::cout << "cv best lambda1=" << format_double(best.lambda1)
            << " eps=" << format_double(best.eps) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Latent-factor causal structure estimation"};
  app.require_subcommand(1);

  SimulateOpts sim;
  CLI::App* s = app.add_subcommand("simulate", "generate synthetic benchmark data");
  add_hyperparam_flags(s, sim.common);
  s->add_option("--q", sim.gen.q, "number of latent factors");
  s->add_option("--indicators", sim.gen.indicators_per_factor,
                "pure indicators per factor");
  s->add_option("--n", sim.gen.n, "samples per domain");
  s->add_option("--noise", sim.noise, "laplace, sub or super")
      ->check(CLI::IsMember({"laplace", "sub", "super"}));
  s->add_option("--noise-ratio", sim.gen.noise_ratio, "measurement noise share");
  s->add_option("--edges", sim.gen.edge_density, "expected edge count");
  s->add_option("--domains", sim.domains, "number of domains");
  s->add_flag("--shared", sim.shared, "share the support across domains");
  s->add_option("--trials", sim.trials, "independent datasets to generate");
  s->add_option("--jobs", sim.jobs, "concurrent trials");

  FitOpts fit;
  CLI::App* f = app.add_subcommand("fit", "estimate measurement + structure models");
  add_hyperparam_flags(f, fit.common);
  f->add_option("--data", fit.data, "single-domain CSV");
  f->add_option("--manifest", fit.manifest, "multi-domain manifest");
  f->add_option("--clusters", fit.clusters, "clusters file");
  f->add_flag("--locate", fit.locate, "discover clusters from data");
  f->add_option("--q-tilde", fit.q_tilde, "interest factor count (multi-domain)");

  EvaluateOpts ev;
  CLI::App* e = app.add_subcommand("evaluate", "score a fit against ground truth");
  add_hyperparam_flags(e, ev.common);
  e->add_option("--b-est", ev.b_est, "estimated effects CSV");
  e->add_option("--b-true", ev.b_true, "true effects CSV");
  e->add_option("--g-est", ev.g_est, "estimated loadings CSV");
  e->add_option("--g-true", ev.g_true, "true loadings CSV");
  e->add_option("--data", ev.data, "dataset CSV for the VIF table");
  e->add_option("--trials", ev.trials, "batch simulate+fit+score trials");
  e->add_option("--jobs", ev.jobs, "concurrent trials");
  e->add_option("--n", ev.n, "batch mode sample size");
  e->add_option("--q", ev.q, "batch mode factor count");

  CvOpts cv;
  CLI::App* c = app.add_subcommand("cv", "cross-validated (lambda1, eps) selection");
  add_hyperparam_flags(c, cv.common);
  c->add_option("--data", cv.data, "dataset CSV");
  c->add_option("--clusters", cv.clusters, "clusters file");
  c->add_option("--folds", cv.folds, "fold count")->check(CLI::Range(2, 1000));
  c->add_option("--lambda1-grid", cv.lambda1_grid, "lambda1 grid values");
  c->add_option("--eps-grid", cv.eps_grid, "eps grid values");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  std::string out_dir = ".";
  try {
    if (s->parsed()) {
      finish_hyperparams(s, sim.common);
      out_dir = sim.common.out;
      return cmd_simulate(sim);
    }
    if (f->parsed()) {
      finish_hyperparams(f, fit.common);
      out_dir = fit.common.out;
      return cmd_fit(fit);
    }
    if (e->parsed()) {
      finish_hyperparams(e, ev.common);
      out_dir = ev.common.out;
      return cmd_evaluate(ev);
    }
    finish_hyperparams(c, cv.common);
    out_dir = cv.common.out;
    return cmd_cv(cv);
  } catch (const IoError& err) {
    std::cerr << "error: " << err.what() << "\n";
    write_error_record(out_dir, "io", err.what());
    return kExitIo;
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    write_error_record(out_dir, "numerical", err.what());
    return kExitNumerical;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    write_error_record(out_dir, "internal", err.what());
    return kExitNumerical;
  }
}
