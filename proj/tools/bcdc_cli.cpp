// Experiment runner: `bcdc run` reproduces the solver studies and writes
// run-record CSVs plus a summary table; `bcdc verify` executes the invariant
// suites and exits nonzero on any violation.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "bcdc/io/gset.hpp"
#include "bcdc/io/libsvm.hpp"
#include "bcdc/io/run_record_io.hpp"
#include "bcdc/problems/block_em.hpp"
#include "bcdc/problems/nonconvex_qp.hpp"
#include "bcdc/problems/onebit_mimo.hpp"
#include "bcdc/problems/sparse_logistic.hpp"
#include "bcdc/solvers.hpp"

namespace fs = std::filesystem;
using namespace bcdc;

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, sep))
    if (!item.empty()) parts.push_back(item);
  return parts;
}

std::map<std::string, double> parse_kv(const std::string& text) {
  std::map<std::string, double> kv;
  for (const auto& part : split(text, ',')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key=value in '" + part + "'");
    kv[part.substr(0, eq)] = std::stod(part.substr(eq + 1));
  }
  return kv;
}

double kv_get(const std::map<std::string, double>& kv, const std::string& key, double fallback) {
  const auto it = kv.find(key);
  return it == kv.end() ? fallback : it->second;
}

struct RunOptions {
  std::string problem;
  std::string dataset;
  std::string synthetic;
  std::string solvers = "bdca";
  std::string seeds = "1";
  std::string out_dir = "results";
  std::string init = "auto";
  std::string preset;
  double lambda_scale = -1.0;  // lambda = scale / m when set
  double lambda = -1.0;
  double gap_tol = 1e-6;
  long max_epochs = 200;
  long block_size = 0;  // 0 -> problem default
  long qtop = 0;
  long gap_period = 0;  // 0 -> once per epoch
  long mimo_mc = 50;
  std::string mimo_ebn = "-5,0,5,10,15";
};

SolverConfig base_config(const RunOptions& opt, Index n_blocks, std::uint64_t seed) {
  SolverConfig cfg;
  cfg.max_iterations = static_cast<Index>(opt.max_epochs) * n_blocks;
  cfg.gap_tolerance = opt.gap_tol;
  if (opt.gap_period > 0) cfg.gap_check_period = static_cast<Index>(opt.gap_period);
  cfg.rng_seed = seed;
  return cfg;
}

struct SolverOutcome {
  std::string solver;
  double best_objective = 0.0;
  double mean_time = 0.0;
};

void write_summary(const fs::path& dir, const std::string& dataset,
                   const std::vector<SolverOutcome>& outcomes) {
  std::ofstream summary(dir / "summary.csv", std::ios::binary);
  summary << "dataset";
  for (const auto& o : outcomes) summary << ",obj_" << o.solver;
  for (const auto& o : outcomes) summary << ",time_" << o.solver;
  summary << "\n" << dataset;
  for (const auto& o : outcomes) summary << ',' << format_double(o.best_objective);
  for (const auto& o : outcomes) summary << ',' << format_double(o.mean_time);
  summary << "\n";
}

int cmd_run(const RunOptions& opt) {
  fs::create_directories(opt.out_dir);
  const fs::path dir(opt.out_dir);
  const auto solver_names = split(opt.solvers, ',');
  std::vector<std::uint64_t> seeds;
  for (const auto& s : split(opt.seeds, ',')) seeds.push_back(std::stoull(s));
  if (solver_names.empty()) throw ConfigError("need at least one solver");
  if (seeds.empty()) throw ConfigError("need at least one seed");

  if (opt.problem == "logistic" || opt.problem == "qp") {
    std::shared_ptr<DcProblem> problem;
    std::shared_ptr<DcProblem> envelope;  // QP only
    std::string dataset_name;
    SolverConfig::Init default_init = SolverConfig::Init::ZeroProjected;

    if (opt.problem == "logistic") {
      LogisticInstance inst;
      if (!opt.dataset.empty()) {
        const LibsvmData data = load_libsvm(opt.dataset);
        const double m = static_cast<double>(data.features.cols());
        const double lambda = opt.lambda >= 0 ? opt.lambda
                              : opt.lambda_scale >= 0 ? opt.lambda_scale / m
                                                      : 0.1 / m;
        const Index qtop = opt.qtop > 0 ? opt.qtop : std::max<Index>(1, data.features.cols() / 100);
        inst = make_logistic_instance(data.features, data.labels, lambda, qtop);
        dataset_name = fs::path(opt.dataset).filename().string();
      } else {
        const auto kv = parse_kv(opt.synthetic.empty() ? "N=2000,m=500" : opt.synthetic);
        const Index m = static_cast<Index>(kv_get(kv, "m", 500));
        const double lambda = opt.lambda >= 0 ? opt.lambda
                              : (opt.lambda_scale >= 0 ? opt.lambda_scale : 0.1) /
                                    static_cast<double>(m);
        const Index qtop = opt.qtop > 0 ? opt.qtop : std::max<Index>(1, m / 20);
        inst = make_synthetic_logistic(static_cast<Index>(kv_get(kv, "N", 2000)), m,
                                       kv_get(kv, "density", 0.02), kv_get(kv, "noise", 0.05),
                                       qtop, lambda, static_cast<std::uint64_t>(kv_get(kv, "seed", 1)));
        dataset_name = "synthetic-logistic";
      }
      const Index bs = opt.block_size > 0 ? opt.block_size
                                          : std::max<Index>(1, inst.dimension() / 10);
      problem = build_dc_decomposition(std::move(inst), bs);
    } else {
      QpInstance inst;
      if (!opt.dataset.empty()) {
        const GsetGraph graph = load_gset(opt.dataset);
        for (const auto& w : graph.warnings) std::cerr << "warning: " << w << "\n";
        inst = make_qp_instance(SparseMatrix(-graph.adjacency),
                                opt.lambda >= 0 ? std::optional<double>(opt.lambda) : std::nullopt);
        dataset_name = fs::path(opt.dataset).filename().string();
      } else {
        const auto kv = parse_kv(opt.synthetic.empty() ? "m=100" : opt.synthetic);
        inst = make_synthetic_qp(static_cast<Index>(kv_get(kv, "m", 100)),
                                 kv_get(kv, "density", 0.1),
                                 kv_get(kv, "gaussian", 0) != 0 ? QpWeights::Gaussian
                                                                : QpWeights::Unit,
                                 static_cast<std::uint64_t>(kv_get(kv, "seed", 1)),
                                 opt.lambda >= 0 ? std::optional<double>(opt.lambda) : std::nullopt);
        dataset_name = "synthetic-qp";
      }
      auto primal = build_primal_decomposition(inst);
      envelope = build_envelope_decomposition(inst);
      problem = primal;
      default_init = SolverConfig::Init::Gaussian;
    }

    if (opt.init == "zero") default_init = SolverConfig::Init::ZeroProjected;
    if (opt.init == "gaussian") default_init = SolverConfig::Init::Gaussian;

    std::vector<SolverOutcome> outcomes;
    for (const auto& name : solver_names) {
      SolverOutcome outcome;
      outcome.solver = name;
      outcome.best_objective = std::numeric_limits<double>::infinity();
      for (const auto seed : seeds) {
        SolverConfig cfg = base_config(opt, problem->partition().count(), seed);
        cfg.init = default_init;
        RunRecord record;
        if (name == "bdca") {
          record = solve_bdca(*problem, cfg);
        } else if (name == "rcsd") {
          record = solve_rcsd(*problem, cfg);
        } else if (name == "dca") {
          if (opt.problem == "logistic") {
            SolverConfig dcfg = cfg;
            dcfg.max_iterations = opt.max_epochs;
            record = solve_dca(*problem, dcfg);
          } else {
            // Full DCA comparator for the box QP: coordinate sweeps on the
            // primal surrogate (the exact full subproblem is NP-hard).
            SolverConfig dcfg = cfg;
            dcfg.max_iterations = opt.max_epochs;
            record = solve_dca(*problem, dcfg, coordinate_sweep_surrogate());
          }
        } else if (name == "dca-envelope" && envelope) {
          SolverConfig dcfg = cfg;
          dcfg.max_iterations = opt.max_epochs;
          record = solve_dca(*envelope, dcfg);
        } else {
          throw ConfigError("unknown solver '" + name + "' for problem " + opt.problem);
        }
        const std::string stem = opt.problem + "_" + name + "_seed" + std::to_string(seed);
        write_run_record(record, cfg, (dir / stem).string());
        outcome.best_objective = std::min(outcome.best_objective, record.final_objective());
        outcome.mean_time += record.wall_time_seconds;
        std::printf("%-12s seed %llu: objective %.6g, min gap %.3g, %s, %.2fs\n", name.c_str(),
                    static_cast<unsigned long long>(seed), record.final_objective(),
                    record.min_recorded_gap(), record.terminated_by_gap ? "gap-stop" : "budget",
                    record.wall_time_seconds);
      }
      outcome.mean_time /= static_cast<double>(seeds.size());
      outcomes.push_back(outcome);
    }
    write_summary(dir, dataset_name, outcomes);
    return 0;
  }

  if (opt.problem == "mimo") {
    MimoExperimentConfig cfg;
    if (!opt.preset.empty() && opt.preset != "paper-desk" && opt.preset != "paper-scale")
      throw ConfigError("unknown preset '" + opt.preset + "'");
    if (opt.preset == "paper-scale") {
      cfg.system = {6, 64, 32, 5, 4, 1.0};
      cfg.block_em = {10, 10000, 25, 10, 1e-3, 0};
      cfg.em = {0, 1000, 25, 10, 1e-3, 0};
    } else {
      cfg.system = {2, 8, 8, 3, 2, 1.0};
      cfg.block_em = {4, 600, 10, 3, 1e-3, 0};
      cfg.em = {0, 150, 10, 3, 1e-3, 0};
    }
    if (!opt.synthetic.empty()) {
      const auto kv = parse_kv(opt.synthetic);
      cfg.system.n_users = static_cast<Index>(kv_get(kv, "N", cfg.system.n_users));
      cfg.system.m_antennas = static_cast<Index>(kv_get(kv, "M", cfg.system.m_antennas));
      cfg.system.signal_length = static_cast<Index>(kv_get(kv, "W", cfg.system.signal_length));
      cfg.system.taps = static_cast<Index>(kv_get(kv, "L", cfg.system.taps));
      cfg.system.paths = static_cast<Index>(kv_get(kv, "paths", cfg.system.paths));
      cfg.block_em.block_size =
          static_cast<Index>(kv_get(kv, "block", cfg.block_em.block_size));
      cfg.block_em.max_updates =
          static_cast<Index>(kv_get(kv, "updates", cfg.block_em.max_updates));
      cfg.em.max_updates = static_cast<Index>(kv_get(kv, "em_updates", cfg.em.max_updates));
    }
    cfg.monte_carlo_runs = opt.mimo_mc;
    cfg.seed = std::stoull(split(opt.seeds, ',').front());

    std::vector<double> grid;
    for (const auto& s : split(opt.mimo_ebn, ',')) grid.push_back(std::stod(s));
    const auto table = run_mimo_experiment(cfg, grid);

    std::ofstream csv(dir / "mimo_ber.csv", std::ios::binary);
    csv << "requested_ebn_db,empirical_ebn_db,sigma_alpha,ber_block_em,ber_em\n";
    for (const auto& row : table) {
      csv << format_double(row.requested_ebn_db) << ',' << format_double(row.empirical_ebn_db)
          << ',' << format_double(row.sigma_alpha) << ',' << format_double(row.ber_block_em)
          << ',' << format_double(row.ber_em) << "\n";
      std::printf("Eb/N %6.2f dB (emp %6.2f): BER block-em %.6f, em %.6f\n", row.requested_ebn_db,
                  row.empirical_ebn_db, row.ber_block_em, row.ber_em);
    }
    return 0;
  }

  throw ConfigError("unknown problem '" + opt.problem + "'");
}

// ---- verify ----------------------------------------------------------------

int verify_failures = 0;

void verdict(const std::string& name, bool pass, const std::string& detail = "") {
  std::printf("[%s] %s%s%s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.empty() ? "" : ": ",
              detail.c_str());
  if (!pass) ++verify_failures;
}

int cmd_verify(std::uint64_t seed, bool corrupt) {
  // Descent + proof chain on one logistic and one QP instance.
  {
    LogisticInstance inst = make_synthetic_logistic(400, 100, 0.05, 0.05, 10, 0.001, seed);
    auto problem = build_dc_decomposition(inst, 10);
    SolverConfig cfg;
    cfg.max_iterations = 300;
    cfg.rng_seed = seed;
    cfg.gap_tolerance = 0.0;
    const RunRecord record = solve_bdca(*problem, cfg);
    double prev = record.initial_objective;
    bool descent = true;
    for (const auto& it : record.iterations) {
      if (it.objective > prev + descent_slack(prev)) descent = false;
      prev = it.objective;
    }
    verdict("descent (logistic BDCA)", descent);
    verdict("block-gap bound (logistic BDCA)", rate_certificate(record, 10).ok());
  }
  {
    const QpInstance inst = make_synthetic_qp(80, 0.1, QpWeights::Unit, seed + 1);
    auto primal = build_primal_decomposition(inst);
    SolverConfig cfg;
    cfg.max_iterations = 1600;
    cfg.rng_seed = seed + 2;
    cfg.gap_tolerance = 0.0;
    cfg.init = SolverConfig::Init::Gaussian;
    const RunRecord record = solve_bdca(*primal, cfg);
    verdict("block-gap bound (QP BDCA)", rate_certificate(record, 80).ok());

    SplitMix64 rng(seed + 3);
    bool nonneg = true;
    Vector y(80), v;
    for (int trial = 0; trial < 50; ++trial) {
      for (Index j = 0; j < 80; ++j) y[j] = 2.0 * rng.uniform() - 1.0;
      primal->h_subgradient(y, v);
      if (evaluate_gap(*primal, y, v).gap_value < -1e-10 * (1.0 + std::abs(objective(*primal, y))))
        nonneg = false;
    }
    verdict("gap nonnegativity (50 random points)", nonneg);

    // Prox fixed-point equivalence at a deeply converged point.
    SolverConfig deep = cfg;
    deep.gap_tolerance = primal->smoothness() * 0.5e-8;
    deep.max_iterations = 400 * 80;
    const RunRecord converged = solve_bdca(*primal, deep);
    primal->h_subgradient(converged.final_point, v);
    const GapReport gr = evaluate_gap(*primal, converged.final_point, v);
    verdict("prox fixed-point equivalence",
            !converged.terminated_by_gap || gr.prox_residual <= 1e-4,
            "gap " + std::to_string(gr.gap_value) + ", residual " + std::to_string(gr.prox_residual));
  }
  // RCSD == BDCA-on-envelope equivalence.
  {
    const QpInstance inst = make_synthetic_qp(60, 0.12, QpWeights::Unit, seed + 4);
    auto primal = build_primal_decomposition(inst);
    auto envelope = build_envelope_decomposition(inst);
    SolverConfig cfg;
    cfg.max_iterations = 600;
    cfg.gap_tolerance = 0.0;
    cfg.rng_seed = seed + 5;
    cfg.init = SolverConfig::Init::Gaussian;
    cfg.record_iterates = true;
    const RunRecord a = solve_bdca(*envelope, cfg);
    const RunRecord b = solve_rcsd(*primal, cfg);
    bool same = a.iterate_trace.size() == b.iterate_trace.size();
    for (size_t k = 0; same && k < a.iterate_trace.size(); ++k)
      same = (a.iterate_trace[k] - b.iterate_trace[k]).lpNorm<Eigen::Infinity>() == 0.0;
    verdict("RCSD == BDCA on envelope (bitwise)", same);
  }
  // Theorem-level Monte-Carlo bound.
  {
    const QpInstance inst = make_synthetic_qp(100, 0.08, QpWeights::Unit, seed + 6);
    auto primal = build_primal_decomposition(inst);
    SplitMix64 init_rng(seed + 7);
    Vector x0(100);
    for (Index j = 0; j < 100; ++j) x0[j] = init_rng.gaussian();
    primal->project(x0);
    double mean_min = 0.0, bound = 0.0;
    for (int s = 0; s < 20; ++s) {
      SolverConfig cfg;
      cfg.max_iterations = 2000;
      cfg.gap_tolerance = 0.0;
      cfg.gap_check_period = 1;
      cfg.rng_seed = SplitMix64::derive(seed + 8, s);
      cfg.init = SolverConfig::Init::Given;
      cfg.start = x0;
      const RateCertificate cert = rate_certificate(solve_bdca(*primal, cfg), 100);
      mean_min += cert.min_gap;
      bound = cert.bound;
    }
    mean_min /= 20.0;
    std::ostringstream detail;
    detail << "mean min-gap " << mean_min << " vs bound " << bound;
    verdict("rate bound (20-seed Monte-Carlo)", mean_min <= 1.1 * bound, detail.str());
  }
  // Negative control: a corrupted stepper must be caught.
  if (corrupt) {
    struct Corrupting final : DcProblem {
      explicit Corrupting(std::shared_ptr<const DcProblem> base)
          : DcProblem(base->partition(), base->smoothness()), base_(std::move(base)) {}
      double f_value(const Vector& x) const override { return base_->f_value(x); }
      void f_gradient(const Vector& x, Vector& g) const override { base_->f_gradient(x, g); }
      double g_block_value(const Vector& x, Index b) const override {
        return base_->g_block_value(x, b);
      }
      void block_prox(const Vector& u, Index b, double t, Vector& out) const override {
        base_->block_prox(u, b, t, out);
      }
      double h_value(const Vector& x) const override { return base_->h_value(x); }
      void h_subgradient(const Vector& x, Vector& v) const override {
        base_->h_subgradient(x, v);
      }
      struct BadStepper final : BlockStepper {
        void solve(const Vector&, Index, const Vector&, Vector& z) override {
          z = Vector::Constant(1, 1.0);  // pinned corner regardless of the data
        }
      };
      std::unique_ptr<BlockStepper> make_stepper() const override {
        return std::make_unique<BadStepper>();
      }
      std::shared_ptr<const DcProblem> base_;
    };
    const QpInstance inst = make_synthetic_qp(40, 0.2, QpWeights::Gaussian, seed + 9);
    Corrupting corrupted(build_primal_decomposition(inst));
    SolverConfig cfg;
    cfg.max_iterations = 400;
    cfg.gap_tolerance = 0.0;
    cfg.rng_seed = seed + 10;
    cfg.init = SolverConfig::Init::Gaussian;
    bool caught = false;
    try {
      solve_bdca(corrupted, cfg);
    } catch (const SolverFault&) {
      caught = true;
    }
    verdict("corrupted stepper detected (negative control)", caught);
  }

  std::printf("%s\n", verify_failures == 0 ? "verify: all properties hold" : "verify: FAILURES");
  return verify_failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block-coordinate DC solvers and experiments"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Key-value config file (flags take precedence)");

  RunOptions opt;
  auto* run = app.add_subcommand("run", "Run solvers and write records");
  run->add_option("--problem", opt.problem, "logistic | qp | mimo")->required();
  run->add_option("--dataset", opt.dataset, "LIBSVM file (logistic) or GSet file (qp)");
  run->add_option("--synthetic", opt.synthetic, "generator params, e.g. N=2000,m=500,density=0.02");
  run->add_option("--solvers", opt.solvers, "comma list: dca,bdca,rcsd,dca-envelope");
  run->add_option("--seeds", opt.seeds, "comma list of seeds");
  run->add_option("--out", opt.out_dir, "output directory");
  run->add_option("--init", opt.init, "zero | gaussian | auto");
  run->add_option("--preset", opt.preset, "mimo: paper-desk | paper-scale");
  run->add_option("--lambda", opt.lambda, "regularization weight");
  run->add_option("--lambda-scale", opt.lambda_scale, "lambda = scale / m");
  run->add_option("--qtop", opt.qtop, "largest-Q norm order");
  run->add_option("--gap-tol", opt.gap_tol, "gap stopping tolerance");
  run->add_option("--max-epochs", opt.max_epochs, "epoch budget");
  run->add_option("--block-size", opt.block_size, "coordinates per block");
  run->add_option("--gap-period", opt.gap_period, "iterations between gap checks (0 = per epoch)");
  run->add_option("--mc", opt.mimo_mc, "mimo: Monte-Carlo runs");
  run->add_option("--ebn", opt.mimo_ebn, "mimo: comma list of Eb/N dB points");

  std::uint64_t verify_seed = 1;
  bool corrupt = true;
  auto* verify = app.add_subcommand("verify", "Run the invariant suites");
  verify->add_option("--seed", verify_seed, "base seed");
  verify->add_flag("!--no-corrupt", corrupt, "skip the corrupted-solver negative control");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(opt);
    if (verify->parsed()) return cmd_verify(verify_seed, corrupt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
