#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <vector>

#include "bcdc/problems/block_em.hpp"
#include "bcdc/rng.hpp"

namespace bcdc {

// Multi-user uplink where the receiver observes only the componentwise signs
// of the real and imaginary parts of the noisy channel output; the
// unquantized signal is the latent variable and the 16-QAM symbols are the
// parameters. Complex arithmetic is carried as separate real/imaginary
// channels: theta stacks [Re; Im] (length 2NW) and observations stack
// [Re; Im] (length 2MW).
struct MimoInstance {
  Index n_users = 0;        // N
  Index m_antennas = 0;     // M
  Index signal_length = 0;  // W
  Index taps = 0;           // L
  double sigma_alpha = 0.0;

  Eigen::MatrixXcd channel;                         // H (MW x NW), block-circulant
  std::vector<Eigen::VectorXcd> impulse_responses;  // per (antenna, user), length W
  Eigen::MatrixXd channel_real;                     // [[Re,-Im],[Im,Re]] (2MW x 2NW)
  Vector column_norms_sq;                           // per real column
  Vector observed_signs;                            // 2MW, entries in {-1,+1}
  Eigen::VectorXcd true_symbols;                    // NW

  Index complex_parameters() const { return n_users * signal_length; }
  Index real_parameters() const { return 2 * complex_parameters(); }
  Index real_observations() const { return 2 * m_antennas * signal_length; }
  // Per real/imaginary component the noise deviation is sigma_alpha/sqrt(2).
  double component_sigma() const;
};

struct MimoSystemSpec {
  Index n_users = 2;
  Index m_antennas = 8;
  Index signal_length = 8;
  Index taps = 3;
  Index paths = 2;  // nonzero taps among the first `taps` positions
  double sigma_alpha = 1.0;
};

// Draws channels (i.i.d. complex Gaussian taps, unit average power per
// antenna/user pair), 16-QAM symbols, noise, and quantizes the output.
MimoInstance simulate_mimo(const MimoSystemSpec& spec, SplitMix64& rng);

// E[r | r ~ Normal(z, sigma^2), sign(r) = sign]
//   = z + sign * sigma * phi(sign z / sigma) / Phi(sign z / sigma),
// evaluated through a Mills-ratio continued fraction when sign*z/sigma < -8.
double truncated_gaussian_mean(double z, double sigma, double sign);

// Posterior expectation of the unquantized signal given signs and theta.
void mimo_e_step(const MimoInstance& inst, const Vector& theta_real, Vector& r_hat);
// Variant on a precomputed Z = H_real * theta (used by the solver loops).
void mimo_e_step_from_output(const MimoInstance& inst, const Vector& z_real, Vector& r_hat);

// Box-constrained block least squares min ||r_hat - H theta||^2 over the
// listed real coordinates (others fixed), solved by projected coordinate
// refinement on [-3,3]. Near-zero column norms get a 1e-10 ridge and set
// `ridge_flag`.
void mimo_block_m_step(const MimoInstance& inst, const Vector& r_hat, const Vector& theta_real,
                       const std::vector<Index>& real_coords, Vector& out_values, bool& ridge_flag);

// Nearest 16-QAM level per real component.
double project_to_qam_level(double value);

// Observed-data negative log-likelihood -sum_c log Phi(Y_c Z_c / sigma_c).
double mimo_neg_log_likelihood(const MimoInstance& inst, const Vector& theta_real);

// LatentModel view of the relaxed problem (no alphabet projection), with
// contiguous blocks of `block_size` complex symbols.
class MimoLatentModel final : public LatentModel {
 public:
  MimoLatentModel(std::shared_ptr<const MimoInstance> instance, Index block_size);

  const MimoInstance& instance() const { return *instance_; }
  Index expected_size() const override { return instance_->real_observations(); }
  void e_step(const Vector& theta, Vector& expected) const override;
  void block_m_step(const Vector& expected, const Vector& theta, Index block,
                    Vector& out_block) const override;
  double neg_log_likelihood(const Vector& theta) const override;
  void project_block(Vector& block_values, Index block) const override;

  static BlockPartition real_partition(Index complex_dim, Index block_size);

 private:
  std::shared_ptr<const MimoInstance> instance_;
};

struct MimoRecoveryConfig {
  Index block_size = 4;      // complex symbols per block
  Index max_updates = 1500;  // total relaxed parameter updates
  Index window = 10;         // inner-loop window length (iterate-mean batches)
  Index max_windows = 4;     // inner loops per block visit
  double inner_tol = 1e-3;   // ||xi_u - xi_{u-1}|| <= tol ||xi_{u-1}||
  std::uint64_t seed = 0;
};

struct MimoRecoveryResult {
  Vector theta;  // real-stacked decision, all entries on the alphabet
  RunRecord record;
  Index projection_events = 0;
  Index projection_increases = 0;  // projections that raised the NLL (logged, not faulted)
  bool ridge_used = false;
};

// Appendix-style recovery: per random block, run relaxed E/M updates in
// windows until the windowed iterate mean stabilizes, then snap the block to
// the alphabet. Relaxed updates must not increase the NLL (fault); the
// projection step may, and is only logged.
MimoRecoveryResult recover_block_em(const MimoInstance& inst, const MimoRecoveryConfig& config);

struct BerPoint {
  double requested_ebn_db = 0.0;
  double empirical_ebn_db = 0.0;
  double sigma_alpha = 0.0;
  double ber_block_em = 0.0;
  double ber_em = 0.0;
};

struct MimoExperimentConfig {
  MimoSystemSpec system;  // sigma_alpha is overridden per grid point
  Index monte_carlo_runs = 50;
  MimoRecoveryConfig block_em;
  MimoRecoveryConfig em;  // applied with a single all-symbols block
  std::uint64_t seed = 0;
};

// Per grid point derives sigma from the requested Eb/N through the analytic
// channel trace, then runs paired Block EM / EM recoveries on identical
// channel, symbol and noise draws. Bits are Gray-coded per real component.
// The reported Eb/N uses the empirical trace average over the batch.
std::vector<BerPoint> run_mimo_experiment(const MimoExperimentConfig& config,
                                          const std::vector<double>& ebn_db_grid);

double bit_error_rate(const Eigen::VectorXcd& truth, const Vector& decided_real);

// sigma_alpha that realizes a requested Eb/N for the given system.
double sigma_for_ebn_db(const MimoSystemSpec& spec, double ebn_db);

}  // namespace bcdc
