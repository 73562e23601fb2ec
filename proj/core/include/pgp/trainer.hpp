#ifndef PGP_TRAINER_HPP_
#define PGP_TRAINER_HPP_

#include <limits>
#include <string>
#include <vector>

#include "pgp/adam.hpp"
#include "pgp/dataio.hpp"
#include "pgp/kmeans.hpp"
#include "pgp/pgp.hpp"

namespace pgp {

struct TrainConfig {
  int m_inducing = 8;
  int batch_size = 1;
  long iterations = 0;  // takes precedence when > 0
  int epochs = 0;       // one epoch = ceil(N / batch_size) iterations

  AdamConfig adam;
  bool learn_hyperparams = true;
  double log_gamma_init = 0.0;
  // NaN = automatic: the initial lengthscale matches the resolution of the
  // inducing grid, w0 = M^(1/D). Starting much coarser than the grid lets
  // the early distill steps spend the S budget on an over-smoothed m that
  // the hyperparameter steps can never recover from.
  double log_w_init = std::numeric_limits<double>::quiet_NaN();
  double sigma_eps_init = 0.1;  // normalized target units, fixed during training

  std::uint64_t seed = 0;
  long eval_every = 100;
  std::string checkpoint_path;  // empty disables checkpointing
  std::string resume_from;      // checkpoint to continue from

  int kmeans_max_iters = 100;
  double kmeans_rel_tol = 1e-6;
  int kmeans_sample_cap = 100000;
};

struct EvalRecord {
  long iteration;
  double nlml;
  double train_mse;  // mean pre-update mini-batch MSE since the last record
  double test_mse;   // NaN when no test set was given
};

struct TrainReport {
  std::vector<EvalRecord> history;
  double kmeans_seconds = 0.0;
  double train_seconds = 0.0;
};

struct TrainResult {
  PgpState state;
  Normalizer normalizer;
  TrainReport report;
  long iterations_run = 0;
};

/// Full pipeline: fit normalizer on train_ds, pick Z by k-means, init, then
/// loop { draw mini-batch; distill; Adam step on the NLML gradient }.
/// Mini-batches come from a seeded shuffle with reshuffling between epochs.
TrainResult train(const Dataset& train_ds, const TrainConfig& cfg,
                  const Dataset* test_ds = nullptr);

struct EvalResult {
  double mse;           // normalized test MSE
  double baseline_mse;  // MSE of the train-mean predictor, ~1.0 in-distribution
};

/// Normalized MSE of the predictive mean on a raw-unit dataset.
EvalResult evaluate(const PgpState& state, const Normalizer& normalizer,
                    const Dataset& ds);

/// Predictive mean/variance over a large query set, chunked internally.
Prediction predict_chunked(const PgpState& state,
                           const Eigen::Ref<const Matrix>& Xstar,
                           Eigen::Index chunk = 4096);

/// "iteration,nlml,train_mse,test_mse" lines.
void write_metrics_csv(const TrainReport& report, const std::string& path);

}  // namespace pgp

#endif  // PGP_TRAINER_HPP_
