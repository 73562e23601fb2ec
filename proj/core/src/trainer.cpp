#include "pgp/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>

#include "pgp/model_io.hpp"

namespace pgp {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void checkpoint(const std::string& path, const PgpState& state,
                const Normalizer& nm, const std::vector<std::string>& cols,
                std::uint64_t seed, long iters_done, const std::string& fp) {
  if (path.empty()) return;
  ModelFile mf;
  mf.state = state;
  mf.normalizer = nm;
  mf.column_names = cols;
  mf.seed = seed;
  mf.iterations = iters_done;
  mf.data_fingerprint = fp;
  save_model(mf, path);
}

}  // namespace

Prediction predict_chunked(const PgpState& state,
                           const Eigen::Ref<const Matrix>& Xstar,
                           Eigen::Index chunk) {
  Prediction out;
  out.mean.resize(Xstar.rows());
  out.variance.resize(Xstar.rows());
  for (Eigen::Index start = 0; start < Xstar.rows(); start += chunk) {
    const Eigen::Index len = std::min(chunk, Xstar.rows() - start);
    const Prediction p = predict(state, Xstar.middleRows(start, len));
    out.mean.segment(start, len) = p.mean;
    out.variance.segment(start, len) = p.variance;
  }
  return out;
}

EvalResult evaluate(const PgpState& state, const Normalizer& normalizer,
                    const Dataset& ds) {
  const Matrix Xn = normalizer.apply_x(ds.X);
  const Vector yn = normalizer.apply_y(ds.y);
  const Prediction pred = predict_chunked(state, Xn);
  EvalResult res;
  res.mse = (pred.mean - yn).squaredNorm() / static_cast<double>(yn.size());
  res.baseline_mse = yn.squaredNorm() / static_cast<double>(yn.size());
  return res;
}

TrainResult train(const Dataset& train_ds, const TrainConfig& cfg,
                  const Dataset* test_ds) {
  if (cfg.m_inducing < 1 || cfg.batch_size < 1)
    throw ConfigError("train: m_inducing >= 1 and batch_size >= 1 required");
  if (train_ds.n() < 1) throw DataError("train: empty training set");
  if (cfg.m_inducing > train_ds.n())
    throw ConfigError("train: m_inducing exceeds training set size");

  const long n = train_ds.n();
  const int d = static_cast<int>(train_ds.d());
  const long iters_per_epoch = (n + cfg.batch_size - 1) / cfg.batch_size;
  long total_iters = cfg.iterations;
  if (total_iters <= 0) {
    if (cfg.epochs <= 0)
      throw ConfigError("train: set iterations or epochs");
    total_iters = iters_per_epoch * cfg.epochs;
  }

  TrainResult result;
  PgpState state;
  long start_iter = 0;
  const auto t0 = std::chrono::steady_clock::now();

  if (!cfg.resume_from.empty()) {
    ModelFile mf = load_model(cfg.resume_from);
    state = mf.state;
    result.normalizer = mf.normalizer;
    start_iter = mf.iterations;
    if (state.dim() != d)
      throw ConfigError("train: checkpoint dimension does not match data");
  } else {
    result.normalizer = Normalizer::fit(train_ds);
  }

  const Matrix Xn = result.normalizer.apply_x(train_ds.X);
  const Vector yn = result.normalizer.apply_y(train_ds.y);
  const std::string fingerprint = dataset_fingerprint(train_ds);

  if (cfg.resume_from.empty()) {
    KMeansConfig kc;
    kc.k = cfg.m_inducing;
    kc.max_iters = cfg.kmeans_max_iters;
    kc.rel_tol = cfg.kmeans_rel_tol;
    kc.sample_cap = cfg.kmeans_sample_cap;
    kc.seed = cfg.seed;
    const Matrix Z = kmeans(Xn, kc);
    result.report.kmeans_seconds = seconds_since(t0);

    KernelParams params;
    params.log_gamma = cfg.log_gamma_init;
    const double log_w0 = std::isnan(cfg.log_w_init)
                              ? std::log(static_cast<double>(cfg.m_inducing)) / d
                              : cfg.log_w_init;
    params.log_w = Vector::Constant(d, log_w0);
    params.log_sigma_eps = std::log(cfg.sigma_eps_init);
    state = init(Z, params);
  }

  AdamState opt(1 + d, cfg.adam);
  std::mt19937_64 rng(cfg.seed + 0x9e3779b97f4a7c15ull);
  std::vector<long> order(n);
  std::iota(order.begin(), order.end(), 0L);
  std::shuffle(order.begin(), order.end(), rng);
  long pos = 0;

  const auto t_train = std::chrono::steady_clock::now();
  double mse_accum = 0.0;
  long mse_count = 0;
  Vector resid;
  MiniBatch batch;

  for (long it = start_iter; it < total_iters; ++it) {
    const long take = std::min<long>(cfg.batch_size, n - pos);
    batch.X.resize(take, d);
    batch.y.resize(take);
    for (long b = 0; b < take; ++b) {
      batch.X.row(b) = Xn.row(order[pos + b]);
      batch.y[b] = yn[order[pos + b]];
    }
    pos += take;
    if (pos >= n) {  // epoch boundary: reshuffle
      std::shuffle(order.begin(), order.end(), rng);
      pos = 0;
    }

    try {
      state = distill(state, batch, &resid);
      if (cfg.learn_hyperparams) {
        const Vector grad = nlml_grad(state);
        Vector theta(1 + d);
        theta[0] = state.params.log_gamma;
        theta.tail(d) = state.params.log_w;
        auto [opt_next, theta_next] = adam_step(opt, theta, grad);
        opt = std::move(opt_next);
        state.params.log_gamma = theta_next[0];
        state.params.log_w = theta_next.tail(d);
        state.params.validate();
      }
    } catch (const NumericalError& e) {
      checkpoint(cfg.checkpoint_path, state, result.normalizer,
                 train_ds.column_names, cfg.seed, it, fingerprint);
      throw NumericalError("train: aborted at iteration " + std::to_string(it) +
                               ": " + e.what(),
                           e.jitter);
    }

    mse_accum += resid.squaredNorm() / static_cast<double>(resid.size());
    ++mse_count;

    const bool at_eval =
        (cfg.eval_every > 0 && (it + 1) % cfg.eval_every == 0) ||
        it + 1 == total_iters;
    if (at_eval) {
      EvalRecord rec;
      rec.iteration = it + 1;
      rec.nlml = nlml(state);
      if (!std::isfinite(rec.nlml)) {
        checkpoint(cfg.checkpoint_path, state, result.normalizer,
                   train_ds.column_names, cfg.seed, it + 1, fingerprint);
        throw NumericalError("train: non-finite NLML at iteration " +
                             std::to_string(it + 1));
      }
      rec.train_mse = mse_count > 0 ? mse_accum / static_cast<double>(mse_count)
                                    : std::numeric_limits<double>::quiet_NaN();
      mse_accum = 0.0;
      mse_count = 0;
      rec.test_mse = test_ds ? evaluate(state, result.normalizer, *test_ds).mse
                             : std::numeric_limits<double>::quiet_NaN();
      result.report.history.push_back(rec);
      checkpoint(cfg.checkpoint_path, state, result.normalizer,
                 train_ds.column_names, cfg.seed, it + 1, fingerprint);
    }
  }

  result.report.train_seconds = seconds_since(t_train);
  result.state = std::move(state);
  result.iterations_run = total_iters - start_iter;
  return result;
}

void write_metrics_csv(const TrainReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("write_metrics_csv: cannot open " + path);
  out << "iteration,nlml,train_mse,test_mse\n";
  for (const auto& rec : report.history) {
    out << rec.iteration << ',' << rec.nlml << ',' << rec.train_mse << ',';
    if (std::isfinite(rec.test_mse)) out << rec.test_mse;
    out << '\n';
  }
}

}  // namespace pgp
