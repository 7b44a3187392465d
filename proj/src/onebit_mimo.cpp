#include "bcdc/problems/onebit_mimo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace bcdc {

namespace {

constexpr double kQamLevels[4] = {-3.0, -1.0, 1.0, 3.0};
constexpr double kSymbolEnergy = 10.0;  // E|s|^2 over the 16-QAM alphabet
constexpr double kBitsPerSymbol = 4.0;
constexpr double kRelaxedBound = 3.0;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;  // 1/sqrt(2 pi)
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// phi(t)/Phi(t). Below t = -8 the direct ratio loses digits, so switch to
// the Laplace continued fraction for the Mills ratio.
double normal_hazard(double t) {
  if (t >= -8.0) {
    const double pdf = kInvSqrt2Pi * std::exp(-0.5 * t * t);
    const double cdf = 0.5 * std::erfc(-t * 0.7071067811865475244);
    return pdf / cdf;
  }
  const double r = -t;
  double cf = r + 9.0 / r;  // truncated tail of the fraction
  for (int level = 8; level >= 1; --level) cf = r + static_cast<double>(level) / cf;
  return cf;
}

// log Phi(t), finite for all representable t.
double log_normal_cdf(double t) {
  if (t > -30.0) return std::log(0.5 * std::erfc(-t * 0.7071067811865475244));
  // Asymptotic tail: Phi(t) ~ phi(t)/(-t) (1 - 1/t^2 + 3/t^4).
  const double t2 = t * t;
  return -0.5 * t2 - std::log(-t) - 0.91893853320467274178 + std::log1p(-1.0 / t2 + 3.0 / (t2 * t2));
}

int qam_gray_bits(double level) {
  // Levels -3,-1,1,3 -> Gray codes 00,01,11,10.
  const int index = static_cast<int>((level + 3.0) * 0.5);
  return index ^ (index >> 1);
}

}  // namespace

double MimoInstance::component_sigma() const { return sigma_alpha / std::sqrt(2.0); }

double truncated_gaussian_mean(double z, double sigma, double sign) {
  if (sigma <= 0.0) throw DomainError("truncated_gaussian_mean needs sigma > 0");
  if (sign != 1.0 && sign != -1.0) throw DomainError("sign must be +-1");
  const double t = sign * z / sigma;
  return z + sign * sigma * normal_hazard(t);
}

double project_to_qam_level(double value) {
  double best = kQamLevels[0];
  double best_dist = std::abs(value - best);
  for (double level : kQamLevels) {
    const double dist = std::abs(value - level);
    if (dist < best_dist) {
      best = level;
      best_dist = dist;
    }
  }
  return best;
}

MimoInstance simulate_mimo(const MimoSystemSpec& spec, SplitMix64& rng) {
  if (spec.n_users < 1 || spec.m_antennas < 1 || spec.signal_length < 1)
    throw ConfigError("empty MIMO system");
  if (spec.taps < 1 || spec.taps > spec.signal_length)
    throw ConfigError("tap count must lie in [1, W]");
  if (spec.paths < 1 || spec.paths > spec.taps) throw ConfigError("paths must lie in [1, taps]");
  if (spec.sigma_alpha < 0.0) throw ConfigError("noise level must be nonnegative");

  const Index n = spec.n_users, m = spec.m_antennas, w = spec.signal_length;
  MimoInstance inst;
  inst.n_users = n;
  inst.m_antennas = m;
  inst.signal_length = w;
  inst.taps = spec.taps;
  inst.sigma_alpha = spec.sigma_alpha;

  // Unit average power: each of the `paths` active taps is CN(0, 1/paths).
  const double tap_dev = std::sqrt(0.5 / static_cast<double>(spec.paths));
  inst.channel.setZero(m * w, n * w);
  inst.impulse_responses.reserve(static_cast<size_t>(m * n));
  std::vector<Index> positions(static_cast<size_t>(spec.taps));
  for (Index rx = 0; rx < m; ++rx) {
    for (Index tx = 0; tx < n; ++tx) {
      for (Index p = 0; p < spec.taps; ++p) positions[static_cast<size_t>(p)] = p;
      for (Index p = 0; p < spec.paths; ++p) {
        const Index pick = p + static_cast<Index>(rng.bounded(static_cast<std::uint64_t>(spec.taps - p)));
        std::swap(positions[static_cast<size_t>(p)], positions[static_cast<size_t>(pick)]);
      }
      Eigen::VectorXcd h = Eigen::VectorXcd::Zero(w);
      for (Index p = 0; p < spec.paths; ++p) {
        const double re = tap_dev * rng.gaussian();
        const double im = tap_dev * rng.gaussian();
        h[positions[static_cast<size_t>(p)]] = std::complex<double>(re, im);
      }
      // Circulant block: H[r, c] = h[(r - c) mod W].
      for (Index r = 0; r < w; ++r)
        for (Index c = 0; c < w; ++c)
          inst.channel(rx * w + r, tx * w + c) = h[((r - c) % w + w) % w];
      inst.impulse_responses.push_back(std::move(h));
    }
  }

  const Index mw = m * w, nw = n * w;
  inst.channel_real.resize(2 * mw, 2 * nw);
  inst.channel_real.topLeftCorner(mw, nw) = inst.channel.real();
  inst.channel_real.topRightCorner(mw, nw) = -inst.channel.imag();
  inst.channel_real.bottomLeftCorner(mw, nw) = inst.channel.imag();
  inst.channel_real.bottomRightCorner(mw, nw) = inst.channel.real();
  inst.column_norms_sq = inst.channel_real.colwise().squaredNorm();

  inst.true_symbols.resize(nw);
  Vector theta_real(2 * nw);
  for (Index j = 0; j < nw; ++j) {
    const double re = kQamLevels[rng.bounded(4)];
    const double im = kQamLevels[rng.bounded(4)];
    inst.true_symbols[j] = std::complex<double>(re, im);
    theta_real[j] = re;
    theta_real[nw + j] = im;
  }

  const Vector z = inst.channel_real * theta_real;
  const double comp_sigma = inst.component_sigma();
  inst.observed_signs.resize(2 * mw);
  for (Index c = 0; c < 2 * mw; ++c) {
    const double received = z[c] + comp_sigma * rng.gaussian();
    inst.observed_signs[c] = received < 0.0 ? -1.0 : 1.0;
  }
  return inst;
}

void mimo_e_step_from_output(const MimoInstance& inst, const Vector& z_real, Vector& r_hat) {
  if (z_real.size() != inst.real_observations()) throw DomainError("E-step: dimension mismatch");
  const double sigma = inst.component_sigma();
  r_hat.resize(z_real.size());
  for (Index c = 0; c < z_real.size(); ++c)
    r_hat[c] = truncated_gaussian_mean(z_real[c], sigma, inst.observed_signs[c]);
}

void mimo_e_step(const MimoInstance& inst, const Vector& theta_real, Vector& r_hat) {
  if (theta_real.size() != inst.real_parameters()) throw DomainError("E-step: dimension mismatch");
  if (theta_real.lpNorm<Eigen::Infinity>() > kRelaxedBound + 1e-12)
    throw DomainError("E-step: parameters outside the relaxed box");
  const Vector z = inst.channel_real * theta_real;
  mimo_e_step_from_output(inst, z, r_hat);
}

void mimo_block_m_step(const MimoInstance& inst, const Vector& r_hat, const Vector& theta_real,
                       const std::vector<Index>& real_coords, Vector& out_values,
                       bool& ridge_flag) {
  ridge_flag = false;
  Vector residual = r_hat - inst.channel_real * theta_real;
  out_values.resize(static_cast<Index>(real_coords.size()));
  for (size_t j = 0; j < real_coords.size(); ++j)
    out_values[static_cast<Index>(j)] = theta_real[real_coords[j]];

  const Index max_sweeps = 100;
  for (Index sweep = 0; sweep < max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (size_t j = 0; j < real_coords.size(); ++j) {
      const Index c = real_coords[j];
      const auto column = inst.channel_real.col(c);
      double denom = inst.column_norms_sq[c];
      const double current = out_values[static_cast<Index>(j)];
      double target;
      if (denom <= 1e-12) {
        ridge_flag = true;
        target = (column.dot(residual) + denom * current) / (denom + 1e-10);
      } else {
        target = current + column.dot(residual) / denom;
      }
      const double clamped = std::clamp(target, -kRelaxedBound, kRelaxedBound);
      const double delta = clamped - current;
      if (delta != 0.0) {
        residual -= column * delta;
        out_values[static_cast<Index>(j)] = clamped;
        max_change = std::max(max_change, std::abs(delta));
      }
    }
    if (max_change <= 1e-12 * (1.0 + out_values.lpNorm<Eigen::Infinity>())) break;
  }
}

double mimo_neg_log_likelihood(const MimoInstance& inst, const Vector& theta_real) {
  const Vector z = inst.channel_real * theta_real;
  const double sigma = inst.component_sigma();
  double nll = 0.0;
  for (Index c = 0; c < z.size(); ++c)
    nll -= log_normal_cdf(inst.observed_signs[c] * z[c] / sigma);
  return nll;
}

BlockPartition MimoLatentModel::real_partition(Index complex_dim, Index block_size) {
  std::vector<std::vector<Index>> blocks;
  for (Index start = 0; start < complex_dim; start += block_size) {
    const Index end = std::min(complex_dim, start + block_size);
    std::vector<Index> b;
    for (Index j = start; j < end; ++j) b.push_back(j);                // real parts
    for (Index j = start; j < end; ++j) b.push_back(complex_dim + j);  // imaginary parts
    blocks.push_back(std::move(b));
  }
  return BlockPartition(std::move(blocks));
}

MimoLatentModel::MimoLatentModel(std::shared_ptr<const MimoInstance> instance, Index block_size)
    : LatentModel(real_partition(instance->complex_parameters(), block_size)),
      instance_(std::move(instance)) {}

void MimoLatentModel::e_step(const Vector& theta, Vector& expected) const {
  mimo_e_step(*instance_, theta, expected);
}

void MimoLatentModel::block_m_step(const Vector& expected, const Vector& theta, Index block,
                                   Vector& out_block) const {
  bool ridge = false;
  mimo_block_m_step(*instance_, expected, theta, partition_.block(block), out_block, ridge);
}

double MimoLatentModel::neg_log_likelihood(const Vector& theta) const {
  return mimo_neg_log_likelihood(*instance_, theta);
}

void MimoLatentModel::project_block(Vector& block_values, Index block) const {
  (void)block;
  for (Index j = 0; j < block_values.size(); ++j)
    block_values[j] = std::clamp(block_values[j], -kRelaxedBound, kRelaxedBound);
}

MimoRecoveryResult recover_block_em(const MimoInstance& inst, const MimoRecoveryConfig& config) {
  if (config.block_size < 1 || config.window < 1 || config.max_windows < 1 ||
      config.max_updates < 1)
    throw ConfigError("invalid recovery configuration");

  const auto t0 = std::chrono::steady_clock::now();
  const Index nw = inst.complex_parameters();
  const BlockPartition partition = MimoLatentModel::real_partition(nw, config.block_size);
  const Index n_blocks = partition.count();
  const double sigma = inst.component_sigma();

  SplitMix64 rng(config.seed);
  Vector theta = Vector::Zero(inst.real_parameters());
  Vector z = Vector::Zero(inst.real_observations());

  auto nll_of_output = [&](const Vector& output) {
    double nll = 0.0;
    for (Index c = 0; c < output.size(); ++c)
      nll -= log_normal_cdf(inst.observed_signs[c] * output[c] / sigma);
    return nll;
  };

  MimoRecoveryResult result;
  result.record.solver = "block-em";
  result.record.seed = config.seed;
  double nll = nll_of_output(z);
  result.record.initial_objective = nll;

  Vector r_hat, new_block, old_block;
  Vector window_sum(theta.size()), prev_mean(theta.size());
  double epoch = 0.0;
  Index updates = 0;

  while (updates < config.max_updates) {
    const Index block = static_cast<Index>(rng.bounded(static_cast<std::uint64_t>(n_blocks)));
    const auto& coords = partition.block(block);
    z = inst.channel_real * theta;  // refresh per visit to bound drift

    bool have_prev = false;
    bool budget_hit = false;
    for (Index u = 0; u < config.max_windows && !budget_hit; ++u) {
      window_sum.setZero();
      for (Index p = 0; p < config.window; ++p) {
        mimo_e_step_from_output(inst, z, r_hat);
        bool ridge = false;
        mimo_block_m_step(inst, r_hat, theta, coords, new_block, ridge);
        if (ridge) result.ridge_used = true;

        for (size_t j = 0; j < coords.size(); ++j) {
          const double delta = new_block[static_cast<Index>(j)] - theta[coords[j]];
          if (delta != 0.0) z += inst.channel_real.col(coords[j]) * delta;
          theta[coords[j]] = new_block[static_cast<Index>(j)];
        }

        const double updated = nll_of_output(z);
        if (updated > nll + 1e-8 * (1.0 + std::abs(nll)))
          throw SolverFault(updates + 1, "relaxed M-step increased the negative log-likelihood");
        epoch += static_cast<double>(coords.size()) / static_cast<double>(theta.size());
        result.record.iterations.push_back({updated, block, kNaN, nll - updated, epoch});
        nll = updated;
        window_sum += theta;
        if (++updates >= config.max_updates) {
          budget_hit = true;
          break;
        }
      }
      const Vector mean = window_sum / static_cast<double>(config.window);
      if (have_prev && (mean - prev_mean).norm() <= config.inner_tol * prev_mean.norm()) break;
      prev_mean = mean;
      have_prev = true;
    }

    // Snap the visited block to the alphabet; the NLL may move either way.
    for (Index c : coords) {
      const double snapped = project_to_qam_level(theta[c]);
      const double delta = snapped - theta[c];
      if (delta != 0.0) z += inst.channel_real.col(c) * delta;
      theta[c] = snapped;
    }
    const double after = nll_of_output(z);
    ++result.projection_events;
    if (after > nll + 1e-12 * (1.0 + std::abs(nll))) ++result.projection_increases;
    nll = after;
  }

  result.record.final_point = theta;
  result.record.epochs = epoch;
  result.record.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  result.theta = theta;
  for (Index c = 0; c < result.theta.size(); ++c)
    result.theta[c] = project_to_qam_level(result.theta[c]);
  return result;
}

double bit_error_rate(const Eigen::VectorXcd& truth, const Vector& decided_real) {
  const Index nw = truth.size();
  if (decided_real.size() != 2 * nw) throw DomainError("BER: dimension mismatch");
  long errors = 0;
  for (Index j = 0; j < nw; ++j) {
    errors += __builtin_popcount(
        static_cast<unsigned>(qam_gray_bits(truth[j].real()) ^ qam_gray_bits(decided_real[j])));
    errors += __builtin_popcount(static_cast<unsigned>(qam_gray_bits(truth[j].imag()) ^
                                                       qam_gray_bits(decided_real[nw + j])));
  }
  return static_cast<double>(errors) / static_cast<double>(4 * nw);
}

double sigma_for_ebn_db(const MimoSystemSpec& spec, double ebn_db) {
  // Eb/N = P tr(E[H H^H]) / (M N sigma^2 B) with P the total transmit power
  // of the frame (N W symbols at average energy 10) and tr = M N W for
  // unit-power taps.
  const double p_total = kSymbolEnergy * static_cast<double>(spec.n_users * spec.signal_length);
  const double trace = static_cast<double>(spec.m_antennas * spec.n_users * spec.signal_length);
  const double ebn_linear = std::pow(10.0, ebn_db / 10.0);
  const double denom = static_cast<double>(spec.m_antennas * spec.n_users) * kBitsPerSymbol;
  return std::sqrt(p_total * trace / (denom * ebn_linear));
}

std::vector<BerPoint> run_mimo_experiment(const MimoExperimentConfig& config,
                                          const std::vector<double>& ebn_db_grid) {
  if (config.monte_carlo_runs < 1) throw ConfigError("need at least one Monte-Carlo run");
  std::vector<BerPoint> table;
  table.reserve(ebn_db_grid.size());

  for (size_t point = 0; point < ebn_db_grid.size(); ++point) {
    MimoSystemSpec system = config.system;
    system.sigma_alpha = sigma_for_ebn_db(system, ebn_db_grid[point]);

    double ber_block_sum = 0.0, ber_em_sum = 0.0, trace_sum = 0.0;
    for (Index run = 0; run < config.monte_carlo_runs; ++run) {
      const std::uint64_t run_seed = SplitMix64::derive(
          config.seed, static_cast<std::uint64_t>(point) * 1000003ull + static_cast<std::uint64_t>(run));
      SplitMix64 sim_rng(run_seed);
      const MimoInstance inst = simulate_mimo(system, sim_rng);
      trace_sum += inst.channel.squaredNorm();

      MimoRecoveryConfig block_cfg = config.block_em;
      block_cfg.seed = SplitMix64::derive(run_seed, 1);
      const MimoRecoveryResult block_result = recover_block_em(inst, block_cfg);
      ber_block_sum += bit_error_rate(inst.true_symbols, block_result.theta);

      MimoRecoveryConfig em_cfg = config.em;
      em_cfg.block_size = inst.complex_parameters();  // single block: classical EM
      em_cfg.seed = SplitMix64::derive(run_seed, 2);
      const MimoRecoveryResult em_result = recover_block_em(inst, em_cfg);
      ber_em_sum += bit_error_rate(inst.true_symbols, em_result.theta);
    }

    BerPoint row;
    row.requested_ebn_db = ebn_db_grid[point];
    row.sigma_alpha = system.sigma_alpha;
    const double mc = static_cast<double>(config.monte_carlo_runs);
    const double p_total =
        kSymbolEnergy * static_cast<double>(system.n_users * system.signal_length);
    const double denom = static_cast<double>(system.m_antennas * system.n_users) * kBitsPerSymbol *
                         system.sigma_alpha * system.sigma_alpha;
    row.empirical_ebn_db = 10.0 * std::log10(p_total * (trace_sum / mc) / denom);
    row.ber_block_em = ber_block_sum / mc;
    row.ber_em = ber_em_sum / mc;
    table.push_back(row);
  }
  return table;
}

}  // namespace bcdc
