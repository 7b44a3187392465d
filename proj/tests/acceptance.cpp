// Acceptance suite: one pass/fail line per criterion. Exit code 0 iff every
// non-skipped criterion passes.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "bcdc/io/gset.hpp"
#include "bcdc/io/run_record_io.hpp"
#include "bcdc/problems/block_em.hpp"
#include "bcdc/problems/nonconvex_qp.hpp"
#include "bcdc/problems/onebit_mimo.hpp"
#include "bcdc/problems/sparse_logistic.hpp"
#include "bcdc/solvers.hpp"

using namespace bcdc;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
  if (!pass) ++failures;
}

void skip(int criterion, const std::string& detail) {
  std::printf("[SKIP] criterion %2d: %s\n", criterion, detail.c_str());
}

double run_seconds(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool monotone_descent(const RunRecord& record, std::string& why) {
  double prev = record.initial_objective;
  for (size_t k = 0; k < record.iterations.size(); ++k) {
    const auto& it = record.iterations[k];
    if (it.objective > prev + descent_slack(prev)) {
      why = "ascent at iteration " + std::to_string(k + 1);
      return false;
    }
    prev = it.objective;
  }
  return true;
}

struct DescentStats {
  long runs = 0;
  long violations = 0;        // descent violations
  long chain_violations = 0;  // block-gap / telescoping violations
  std::string detail;
  void absorb(const RunRecord& record, Index n_blocks) {
    ++runs;
    std::string why;
    if (!monotone_descent(record, why)) {
      ++violations;
      detail = why;
    }
    const RateCertificate cert = rate_certificate(record, n_blocks);
    chain_violations += cert.violations;
  }
};

// ---- shared desk-scale run collections ------------------------------------

struct SuiteRuns {
  DescentStats logistic;
  DescentStats qp;
  DescentStats em;
  std::vector<RunRecord> gap_terminated;             // runs that stopped on the gap rule
  std::vector<std::pair<double, double>> residuals;  // (gap, prox residual) at stops
};

SuiteRuns run_descent_suite() {
  SuiteRuns suite;

  // 50 logistic instances: BDCA plus a few DCA comparators.
  for (int trial = 0; trial < 50; ++trial) {
    SplitMix64 szrng(1000 + trial);
    const Index n = 300 + static_cast<Index>(szrng.bounded(1700));  // <= 2000
    const Index m = 50 + static_cast<Index>(szrng.bounded(450));    // <= 500
    LogisticInstance inst = make_synthetic_logistic(
        n, m, 0.05, 0.05, std::max<Index>(1, m / 20), 0.1 / static_cast<double>(m),
        SplitMix64::derive(11, trial));
    auto problem = build_dc_decomposition(inst, std::max<Index>(1, m / 8));
    SolverConfig cfg;
    cfg.max_iterations = 3 * problem->partition().count();
    cfg.gap_tolerance = 0.0;
    cfg.rng_seed = SplitMix64::derive(13, trial);
    suite.logistic.absorb(solve_bdca(*problem, cfg), problem->partition().count());
    if (trial % 10 == 0) {
      SolverConfig dcfg = cfg;
      dcfg.max_iterations = 5;
      suite.logistic.absorb(solve_dca(*problem, dcfg), 1);
    }
  }

  // 50 QP instances: BDCA on the primal, sweep-DCA comparator (descent only),
  // envelope DCA (full chain), plus RCSD.
  for (int trial = 0; trial < 50; ++trial) {
    SplitMix64 szrng(2000 + trial);
    const Index m = 20 + static_cast<Index>(szrng.bounded(180));  // <= 200
    const QpInstance inst = make_synthetic_qp(
        m, 0.1, trial % 2 == 0 ? QpWeights::Unit : QpWeights::Gaussian,
        SplitMix64::derive(17, trial));
    auto primal = build_primal_decomposition(inst);
    auto envelope = build_envelope_decomposition(inst);
    SolverConfig cfg;
    cfg.max_iterations = 3 * m;
    cfg.gap_tolerance = 0.0;
    cfg.rng_seed = SplitMix64::derive(19, trial);
    cfg.init = SolverConfig::Init::Gaussian;
    suite.qp.absorb(solve_bdca(*primal, cfg), m);
    suite.qp.absorb(solve_rcsd(*primal, cfg), m);
    if (trial % 10 == 0) {
      SolverConfig dcfg = cfg;
      dcfg.max_iterations = 8;
      suite.qp.absorb(solve_dca(*envelope, dcfg), 1);
      // Sweep-DCA on the primal: descent asserted, proof chain not (its full
      // subproblem is solved by coordinate sweeps, not globally).
      const RunRecord sweep = solve_dca(*primal, dcfg, coordinate_sweep_surrogate());
      std::string why;
      ++suite.qp.runs;
      if (!monotone_descent(sweep, why)) {
        ++suite.qp.violations;
        suite.qp.detail = why;
      }
    }
  }

  // 50 MIMO desk instances driven through the relaxed block EM loop.
  for (int trial = 0; trial < 50; ++trial) {
    MimoSystemSpec spec;
    spec.sigma_alpha = 0.5 + 0.05 * static_cast<double>(trial % 10);
    SplitMix64 rng(SplitMix64::derive(23, trial));
    auto inst = std::make_shared<MimoInstance>(simulate_mimo(spec, rng));
    MimoLatentModel model(inst, 4);
    SolverConfig cfg;
    cfg.max_iterations = 50;
    cfg.rng_seed = SplitMix64::derive(29, trial);
    const RunRecord record = run_block_em(model, cfg);
    ++suite.em.runs;
    std::string why;
    if (!monotone_descent(record, why)) {
      ++suite.em.violations;
      suite.em.detail = why;
    }
  }

  // Deep gap-terminated runs for the stationarity checks (criterion 4).
  for (int trial = 0; trial < 6; ++trial) {
    const QpInstance inst =
        make_synthetic_qp(80, 0.1, QpWeights::Unit, SplitMix64::derive(31, trial));
    auto primal = build_primal_decomposition(inst);
    SolverConfig cfg;
    cfg.max_iterations = 400 * 80;
    // L-aware deep tolerance so a gap-terminated point provably satisfies
    // the residual threshold: r <= sqrt(2 tol / L) <= 1e-4.
    cfg.gap_tolerance = std::min(1e-6, primal->smoothness() * 0.5e-8);
    cfg.rng_seed = SplitMix64::derive(37, trial);
    cfg.init = SolverConfig::Init::Gaussian;
    RunRecord record = solve_bdca(*primal, cfg);
    if (record.terminated_by_gap) {
      Vector v;
      primal->h_subgradient(record.final_point, v);
      const GapReport gr = evaluate_gap(*primal, record.final_point, v);
      suite.residuals.emplace_back(gr.gap_value, gr.prox_residual);
      suite.gap_terminated.push_back(std::move(record));
    }
  }
  return suite;
}

}  // namespace

int main() {
  std::printf("acceptance suite\n================\n");

  // ---- criteria 1 and 2: descent and the per-iteration proof chain --------
  SuiteRuns suite;
  const double suite_seconds = run_seconds([&] { suite = run_descent_suite(); });
  {
    const long runs = suite.logistic.runs + suite.qp.runs + suite.em.runs;
    const long violations =
        suite.logistic.violations + suite.qp.violations + suite.em.violations;
    std::ostringstream detail;
    detail << "descent: " << runs << " runs, " << violations << " violations, "
           << std::round(suite_seconds) << "s";
    report(1, violations == 0 && suite_seconds < 120.0, detail.str());

    const long chain = suite.logistic.chain_violations + suite.qp.chain_violations;
    report(2, chain == 0,
           "proof chain: " + std::to_string(chain) + " block-gap/telescoping violations");
  }

  // ---- criterion 3: Monte-Carlo rate bound --------------------------------
  {
    const QpInstance inst = make_synthetic_qp(100, 0.08, QpWeights::Unit, 4242);
    auto primal = build_primal_decomposition(inst);
    SplitMix64 init_rng(777);
    Vector x0(100);
    for (Index j = 0; j < 100; ++j) x0[j] = init_rng.gaussian();
    primal->project(x0);

    double mean_min_gap = 0.0, bound = 0.0;
    for (int seed = 0; seed < 20; ++seed) {
      SolverConfig cfg;
      cfg.max_iterations = 50 * 100;
      cfg.gap_tolerance = 0.0;
      cfg.gap_check_period = 1;  // record the gap at every iterate
      cfg.rng_seed = SplitMix64::derive(51, seed);
      cfg.init = SolverConfig::Init::Given;
      cfg.start = x0;
      const RunRecord record = solve_bdca(*primal, cfg);
      const RateCertificate cert = rate_certificate(record, 100);
      mean_min_gap += cert.min_gap;
      bound = cert.bound;  // shared x0: same initial objective each seed
    }
    mean_min_gap /= 20.0;
    std::ostringstream detail;
    detail << "mean min-gap " << mean_min_gap << " <= 1.1 * bound " << bound;
    report(3, mean_min_gap <= 1.1 * bound, detail.str());
  }

  // ---- criterion 4: gap sign, residual at stops, grid oracle --------------
  {
    bool sign_ok = true, residual_ok = true, grid_ok = true;
    std::ostringstream detail;

    SplitMix64 rng(4004);
    for (int trial = 0; trial < 40 && sign_ok; ++trial) {
      const QpInstance qp = make_synthetic_qp(30, 0.2, QpWeights::Gaussian, rng.next());
      auto primal = build_primal_decomposition(qp);
      Vector y(30), v;
      for (Index j = 0; j < 30; ++j) y[j] = 2.0 * rng.uniform() - 1.0;
      primal->h_subgradient(y, v);
      const GapReport gr = evaluate_gap(*primal, y, v);
      if (gr.gap_value < -1e-10 * (1.0 + std::abs(objective(*primal, y)))) sign_ok = false;
    }

    if (suite.residuals.empty()) {
      residual_ok = false;
      detail << "no gap-terminated runs; ";
    }
    for (const auto& [gap, residual] : suite.residuals) {
      if (gap <= 1e-6 && residual > 1e-4) residual_ok = false;
    }

    // 1-D instances against the grid oracle were exercised in unit tests;
    // repeat the two pinned cases here so the criterion stands on its own.
    {
      // f = x^2/2, g = |x|, y = 2: closed form 4 vs grid over [-5,5].
      double best = -1e300;
      for (double x = -5.0; x <= 5.0; x += 1e-4)
        best = std::max(best, 2.0 * (2.0 - x) + 2.0 - std::abs(x) - 0.5 * (x - 2.0) * (x - 2.0));
      if (std::abs(best - 4.0) > 1e-3) grid_ok = false;
      // f = x^2/2 on [-1,1], y = 1: closed form 0.5.
      best = -1e300;
      for (double x = -1.0; x <= 1.0; x += 1e-4)
        best = std::max(best, 1.0 * (1.0 - x) - 0.5 * (x - 1.0) * (x - 1.0));
      if (std::abs(best - 0.5) > 1e-3) grid_ok = false;
    }

    detail << "sign " << (sign_ok ? "ok" : "violated") << ", " << suite.residuals.size()
           << " gap-terminated stops, grid oracle " << (grid_ok ? "ok" : "off");
    report(4, sign_ok && residual_ok && grid_ok, detail.str());
  }

  // ---- criterion 5: envelope BDCA == primal RCSD, bitwise ------------------
  {
    const QpInstance inst = make_synthetic_qp(100, 0.08, QpWeights::Unit, 555);
    auto primal = build_primal_decomposition(inst);
    auto envelope = build_envelope_decomposition(inst);
    SolverConfig cfg;
    cfg.max_iterations = 10 * 100;
    cfg.gap_tolerance = 0.0;
    cfg.rng_seed = 999;
    cfg.init = SolverConfig::Init::Gaussian;
    cfg.record_iterates = true;
    const RunRecord a = solve_bdca(*envelope, cfg);
    const RunRecord b = solve_rcsd(*primal, cfg);
    bool identical = a.iterate_trace.size() == b.iterate_trace.size();
    for (size_t k = 0; identical && k < a.iterate_trace.size(); ++k)
      for (Index j = 0; j < 100; ++j)
        if (a.iterate_trace[k][j] != b.iterate_trace[k][j]) {
          identical = false;
          break;
        }
    report(5, identical,
           "K = 1000 iterate pairs " + std::string(identical ? "bitwise equal" : "diverged"));
  }

  // ---- criterion 6: subproblem oracles vs grid search ----------------------
  {
    SplitMix64 rng(6006);
    bool ok = true;
    long trials = 100000;
    for (long t = 0; t < trials && ok; ++t) {
      const double a = 4.0 * rng.uniform() - 2.0;
      const double b = 4.0 * rng.uniform() - 2.0;
      const auto f = [&](double z) { return (a * z + b) * z; };
      const double z_star = scalar_quadratic_minimize(a, b, -1.0, 1.0);
      double best = f(-1.0);
      for (double z = -1.0; z <= 1.0; z += 1e-3) best = std::min(best, f(z));
      double fine_lo = -1.0, fine_hi = 1.0;  // refine near incumbent
      // coarse argmin
      double zc = -1.0;
      for (double z = -1.0; z <= 1.0; z += 1e-3)
        if (f(z) < f(zc)) zc = z;
      fine_lo = std::max(-1.0, zc - 2e-3);
      fine_hi = std::min(1.0, zc + 2e-3);
      for (double z = fine_lo; z <= fine_hi; z += 1e-6) best = std::min(best, f(z));
      const double slope = 2.0 * std::abs(a) + std::abs(b) + 1.0;
      if (f(z_star) > best + slope * 1e-6) ok = false;
    }

    for (long t = 0; t < trials && ok; ++t) {
      // Minimizer |v|/L stays inside the oracle's [-10,10] box.
      const double v = 8.0 * rng.uniform() - 4.0;
      const double big_l = 0.5 + 3.0 * rng.uniform();
      const double lambda = 2.0 * rng.uniform();
      Vector vin(1), vout;
      vin[0] = v;
      soft_threshold_block(vin, big_l, lambda, vout);
      const auto f = [&](double z) { return 0.5 * big_l * z * z + lambda * std::abs(z) - v * z; };
      double zc = -10.0;
      for (double z = -10.0; z <= 10.0; z += 1e-2)
        if (f(z) < f(zc)) zc = z;
      double zbest = zc;
      for (double z = std::max(-10.0, zc - 2e-2); z <= std::min(10.0, zc + 2e-2); z += 1e-5)
        if (f(z) < f(zbest)) zbest = z;
      if (std::abs(zbest - vout[0]) > 2e-5) ok = false;
    }
    report(6, ok, "scalar quadratic and soft threshold vs 1e5 grid searches each");
  }

  // ---- criterion 7: gradient checks ----------------------------------------
  {
    bool ok = true;
    LogisticInstance logi = make_synthetic_logistic(150, 40, 0.2, 0.1, 5, 0.01, 7007);
    SplitMix64 rng(7008);
    for (int t = 0; t < 100 && ok; ++t) {
      Vector x(40);
      for (Index j = 0; j < 40; ++j) x[j] = rng.gaussian();
      Vector grad, numeric(40), probe = x;
      logistic_loss_and_gradient(logi, x, grad);
      for (Index j = 0; j < 40; ++j) {
        probe[j] = x[j] + 1e-6;
        const double up = logistic_loss(logi, probe);
        probe[j] = x[j] - 1e-6;
        const double down = logistic_loss(logi, probe);
        probe[j] = x[j];
        numeric[j] = (up - down) / 2e-6;
      }
      if ((grad - numeric).norm() > 1e-5 * (1.0 + grad.norm())) ok = false;
    }

    const QpInstance qp = make_synthetic_qp(50, 0.15, QpWeights::Gaussian, 7009);
    auto primal = build_primal_decomposition(qp);
    for (int t = 0; t < 100 && ok; ++t) {
      Vector x(50);
      for (Index j = 0; j < 50; ++j) x[j] = 2.0 * rng.uniform() - 1.0;
      Vector grad, numeric(50), probe = x;
      primal->f_gradient(x, grad);
      for (Index j = 0; j < 50; ++j) {
        probe[j] = x[j] + 1e-6;
        const double up = primal->f_value(probe);
        probe[j] = x[j] - 1e-6;
        const double down = primal->f_value(probe);
        probe[j] = x[j];
        numeric[j] = (up - down) / 2e-6;
      }
      if ((grad - numeric).norm() > 1e-5 * (1.0 + grad.norm())) ok = false;
    }
    report(7, ok, "logistic and QP gradients vs central differences, 100 points each");
  }

  // ---- criterion 8: logistic qualitative reproduction ----------------------
  {
    LogisticInstance inst = make_synthetic_logistic(2000, 500, 0.02, 0.05, 25, 0.1 / 500.0, 8008);
    auto problem = build_dc_decomposition(inst, 50);
    const Index n = problem->partition().count();

    SolverConfig dca_cfg;
    dca_cfg.max_iterations = 200;
    dca_cfg.gap_tolerance = 0.0;
    const RunRecord dca = solve_dca(*problem, dca_cfg);

    SolverConfig bdca_cfg;
    bdca_cfg.max_iterations = 200 * n;
    bdca_cfg.gap_tolerance = 0.0;
    bdca_cfg.rng_seed = 42;
    const RunRecord bdca = solve_bdca(*problem, bdca_cfg);

    const bool log2_ok =
        std::abs(dca.initial_objective - std::log(2.0)) <= 1e-6 &&
        std::abs(bdca.initial_objective - std::log(2.0)) <= 1e-6;

    const auto drop = [](const RunRecord& record) {
      return record.gap_trace.front().gap_value / record.min_recorded_gap();
    };
    const bool gap_drop_ok = drop(dca) >= 1e3 && drop(bdca) >= 1e3;

    // Objective agreement at matched epochs.
    bool curves_ok = true;
    double max_rel = 0.0;
    for (Index e = 1; e <= 200; ++e) {
      const double dca_obj = dca.iterations[static_cast<size_t>(e - 1)].objective;
      double bdca_obj = bdca.initial_objective;
      for (const auto& it : bdca.iterations) {
        if (it.epoch <= static_cast<double>(e)) bdca_obj = it.objective;
        else break;
      }
      const double rel = std::abs(bdca_obj - dca_obj) / std::abs(dca_obj);
      max_rel = std::max(max_rel, rel);
      if (rel > 0.05) curves_ok = false;
    }

    std::ostringstream detail;
    detail << "log2 " << (log2_ok ? "ok" : "off") << ", gap drop x" << std::scientific
           << drop(dca) << "/" << drop(bdca) << ", max curve gap " << max_rel;
    report(8, log2_ok && gap_drop_ok && curves_ok, detail.str());
  }

  // ---- criterion 9: GSet G1 basin (network-gated) ---------------------------
  {
    const char* dir = std::getenv("BCDC_GSET_DIR");
    std::string path = dir ? std::string(dir) + "/G1" : "data/G1";
    std::ifstream probe(path);
    if (!probe) {
      skip(9, "G1 not present (set BCDC_GSET_DIR to enable)");
    } else {
      const GsetGraph graph = parse_gset(probe);
      QpInstance inst = make_qp_instance(SparseMatrix(-graph.adjacency));
      auto primal = build_primal_decomposition(inst);
      int successes = 0;
      for (int seed = 0; seed < 20; ++seed) {
        SolverConfig cfg;
        cfg.max_iterations = 4000 * 800;
        cfg.gap_tolerance = 1e-6;
        cfg.rng_seed = SplitMix64::derive(91, seed);
        cfg.init = SolverConfig::Init::Gaussian;
        const RunRecord bdca = solve_bdca(*primal, cfg);
        const RunRecord rcsd = solve_rcsd(*primal, cfg);
        if (bdca.final_objective() <= -43000.0 && bdca.terminated_by_gap &&
            rcsd.final_objective() <= -43000.0 && rcsd.terminated_by_gap)
          ++successes;
      }
      report(9, successes >= 18, "G1 basin reached in " + std::to_string(successes) + "/20 seeds");
    }
  }

  // ---- criterion 10: MIMO desk BER ------------------------------------------
  {
    MimoExperimentConfig cfg;
    cfg.system.n_users = 2;
    cfg.system.m_antennas = 8;
    cfg.system.signal_length = 8;
    cfg.system.taps = 3;
    cfg.system.paths = 2;
    cfg.monte_carlo_runs = 50;
    cfg.block_em.block_size = 4;
    cfg.block_em.max_updates = 600;
    cfg.block_em.window = 10;
    cfg.block_em.max_windows = 3;
    cfg.em.max_updates = 150;
    cfg.em.window = 10;
    cfg.em.max_windows = 3;
    cfg.seed = 1010;
    // One-bit recovery needs noise dithering: past ~20 dB the sign-consistent
    // set degenerates toward a scale-invariant cone and magnitude bits are
    // lost, so the monotone operating range sits at low-to-moderate Eb/N.
    const std::vector<double> grid{-5.0, 0.0, 5.0, 10.0, 15.0};
    const auto table = run_mimo_experiment(cfg, grid);

    bool monotone = true, close = true;
    for (size_t i = 0; i < table.size(); ++i) {
      if (i > 0 && table[i].ber_block_em > table[i - 1].ber_block_em + 1e-12) monotone = false;
      if (std::abs(table[i].ber_block_em - table[i].ber_em) > 0.01) close = false;
    }

    bool trunc_ok = true;
    for (double t = -8.0; t <= 8.0 && trunc_ok; t += 0.25) {
      const double closed = truncated_gaussian_mean(t, 1.0, 1.0);
      // Simpson integration oracle.
      const auto density = [&](double r) { return std::exp(-0.5 * (r - t) * (r - t)); };
      const double hi = std::max(0.0, t) + 12.0;
      long n_int = 400000;
      double mass = 0.0, first = 0.0;
      const double h = hi / static_cast<double>(n_int);
      for (long k = 0; k <= n_int; ++k) {
        const double r = h * static_cast<double>(k);
        const double wgt = (k == 0 || k == n_int) ? 1.0 : (k % 2 == 0 ? 2.0 : 4.0);
        mass += wgt * density(r);
        first += wgt * r * density(r);
      }
      if (std::abs(first / mass - closed) > 1e-8) trunc_ok = false;
    }

    std::ostringstream detail;
    detail << "BER ";
    for (const auto& row : table) detail << row.ber_block_em << "/" << row.ber_em << " ";
    detail << (monotone ? "monotone" : "NOT monotone") << ", EM gap "
           << (close ? "<= 0.01" : "> 0.01") << ", truncated mean "
           << (trunc_ok ? "ok" : "off");
    report(10, monotone && close && trunc_ok, detail.str());
  }

  // ---- criterion 11: determinism --------------------------------------------
  {
    bool ok = true;

    LogisticInstance logi = make_synthetic_logistic(400, 80, 0.05, 0.05, 8, 0.1 / 80.0, 1111);
    auto lp = build_dc_decomposition(logi, 10);
    SolverConfig lcfg;
    lcfg.max_iterations = 200;
    lcfg.rng_seed = 5;
    lcfg.gap_tolerance = 0.0;
    for (int rep = 0; rep < 1; ++rep) {
      std::ostringstream a_csv, b_csv, a_json, b_json;
      const RunRecord a = solve_bdca(*lp, lcfg);
      const RunRecord b = solve_bdca(*lp, lcfg);
      write_run_record_csv(a_csv, a);
      write_run_record_csv(b_csv, b);
      write_run_record_json(a_json, a, lcfg);
      write_run_record_json(b_json, b, lcfg);
      if (a_csv.str() != b_csv.str() || a_json.str() != b_json.str()) ok = false;
    }

    const QpInstance qp = make_synthetic_qp(60, 0.1, QpWeights::Unit, 1112);
    auto primal = build_primal_decomposition(qp);
    SolverConfig qcfg;
    qcfg.max_iterations = 600;
    qcfg.rng_seed = 6;
    qcfg.gap_tolerance = 0.0;
    qcfg.init = SolverConfig::Init::Gaussian;
    {
      std::ostringstream a_csv, b_csv;
      write_run_record_csv(a_csv, solve_rcsd(*primal, qcfg));
      write_run_record_csv(b_csv, solve_rcsd(*primal, qcfg));
      if (a_csv.str() != b_csv.str()) ok = false;
    }

    {
      MimoExperimentConfig mcfg;
      mcfg.monte_carlo_runs = 3;
      mcfg.block_em.max_updates = 120;
      mcfg.em.max_updates = 60;
      mcfg.seed = 77;
      const auto t1 = run_mimo_experiment(mcfg, {20.0});
      const auto t2 = run_mimo_experiment(mcfg, {20.0});
      if (t1[0].ber_block_em != t2[0].ber_block_em || t1[0].ber_em != t2[0].ber_em) ok = false;
    }
    report(11, ok, "byte-identical records and BER tables on repeated seeded runs");
  }

  std::printf("================\n%s (%d failure%s)\n", failures == 0 ? "ALL PASS" : "FAILURES",
              failures, failures == 1 ? "" : "s");
  return failures == 0 ? 0 : 1;
}
