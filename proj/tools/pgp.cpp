#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pgp/dataio.hpp"
#include "pgp/kmeans.hpp"
#include "pgp/model_io.hpp"
#include "pgp/oracle.hpp"
#include "pgp/pgp.hpp"
#include "pgp/trainer.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(s);
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

std::vector<std::string> header_columns(const std::string& path, char delim) {
  std::ifstream in(path);
  if (!in) throw pgp::DataError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw pgp::DataError("empty file " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> cols;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, delim)) cols.push_back(field);
  return cols;
}

void write_dataset_csv(const pgp::Dataset& ds, const std::string& target_name,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw pgp::DataError("cannot open " + path);
  for (const auto& name : ds.column_names) out << name << ',';
  out << target_name << '\n';
  out.precision(17);
  for (Eigen::Index i = 0; i < ds.n(); ++i) {
    for (Eigen::Index j = 0; j < ds.d(); ++j) out << ds.X(i, j) << ',';
    out << ds.y[i] << '\n';
  }
}

struct SynthFlags {
  long n = 6000;
  double noise_std = 0.1;
  int d_total = 8;
  int d_relevant = 2;
};

int run(int argc, char** argv) {
  CLI::App app{"Parametric Gaussian process regression"};
  app.require_subcommand(1);

  // --- synth ---------------------------------------------------------------
  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset CSV");
  std::string synth_kind = "1d";
  SynthFlags sf;
  std::string synth_out;
  std::uint64_t synth_seed = 0;
  synth->add_option("--kind", synth_kind, "1d or highdim")
      ->check(CLI::IsMember({"1d", "highdim"}));
  synth->add_option("--n", sf.n, "number of rows");
  synth->add_option("--noise-std", sf.noise_std, "noise standard deviation");
  synth->add_option("--d-total", sf.d_total, "total dimensions (highdim)");
  synth->add_option("--d-relevant", sf.d_relevant, "relevant dimensions (highdim)");
  synth->add_option("--seed", synth_seed, "RNG seed");
  synth->add_option("--out", synth_out, "output CSV path")->required();

  // --- train ---------------------------------------------------------------
  auto* train_cmd = app.add_subcommand("train", "Train a model");
  std::string data_path, target = "y", features_flag, out_path, metrics_path;
  std::string checkpoint_path, resume_from;
  long synth_1d_n = 0, synth_highdim_n = 0;
  SynthFlags tsf;
  pgp::TrainConfig tc;
  double test_fraction = 0.0;
  bool freeze = false;
  char delimiter = ',';
  train_cmd->add_option("--data", data_path, "training CSV");
  train_cmd->add_option("--target", target, "target column name");
  train_cmd->add_option("--features", features_flag,
                        "comma-separated feature columns (default: all others)");
  train_cmd->add_option("--delimiter", delimiter, "CSV delimiter");
  train_cmd->add_option("--synth-1d", synth_1d_n,
                        "generate N points of the 1-D synthetic curve instead");
  train_cmd->add_option("--synth-highdim", synth_highdim_n,
                        "generate N points of the high-dim synthetic surface");
  train_cmd->add_option("--d-total", tsf.d_total, "synth-highdim dimensions");
  train_cmd->add_option("--d-relevant", tsf.d_relevant,
                        "synth-highdim relevant dimensions");
  train_cmd->add_option("--noise-std", tsf.noise_std, "synthetic noise std");
  train_cmd->add_option("--m", tc.m_inducing, "hypothetical dataset size M");
  train_cmd->add_option("--batch", tc.batch_size, "mini-batch size");
  train_cmd->add_option("--iters", tc.iterations, "training iterations");
  train_cmd->add_option("--epochs", tc.epochs, "training epochs");
  train_cmd->add_option("--seed", tc.seed, "seed for all randomness");
  train_cmd->add_option("--sigma-eps", tc.sigma_eps_init,
                        "noise std in normalized units (fixed during training)");
  train_cmd->add_option("--alpha", tc.adam.alpha, "Adam learning rate");
  train_cmd->add_option("--beta1", tc.adam.beta1, "Adam beta1");
  train_cmd->add_option("--beta2", tc.adam.beta2, "Adam beta2");
  train_cmd->add_option("--grad-clip", tc.adam.grad_clip,
                        "per-coordinate gradient clip (0 = off)");
  train_cmd->add_flag("--freeze-hyperparams", freeze,
                      "skip the hyperparameter gradient steps");
  train_cmd->add_option("--eval-every", tc.eval_every, "metrics interval");
  train_cmd->add_option("--test-fraction", test_fraction,
                        "hold out this fraction for testing");
  train_cmd->add_option("--kmeans-iters", tc.kmeans_max_iters, "k-means max iterations");
  train_cmd->add_option("--kmeans-sample-cap", tc.kmeans_sample_cap,
                        "max points used for clustering");
  train_cmd->add_option("--checkpoint", checkpoint_path, "checkpoint model path");
  train_cmd->add_option("--resume", resume_from, "resume from checkpoint");
  train_cmd->add_option("--metrics", metrics_path,
                        "metrics CSV path (default <out>.metrics.csv)");
  train_cmd->add_option("--out", out_path, "output model path")->required();

  // --- predict ---------------------------------------------------------------
  auto* predict_cmd = app.add_subcommand("predict", "Predict from a model file");
  std::string p_model, p_data, p_out;
  bool observation_noise = false;
  char p_delim = ',';
  predict_cmd->add_option("--model", p_model, "model file")->required();
  predict_cmd->add_option("--data", p_data, "query CSV")->required();
  predict_cmd->add_option("--out", p_out, "predictions CSV")->required();
  predict_cmd->add_option("--delimiter", p_delim, "CSV delimiter");
  predict_cmd->add_flag("--observation-noise", observation_noise,
                        "add sigma_eps^2 to the variance before sqrt");

  // --- eval ------------------------------------------------------------------
  auto* eval_cmd = app.add_subcommand("eval", "Normalized MSE on a dataset");
  std::string e_model, e_data, e_target = "y";
  char e_delim = ',';
  eval_cmd->add_option("--model", e_model, "model file")->required();
  eval_cmd->add_option("--data", e_data, "evaluation CSV")->required();
  eval_cmd->add_option("--target", e_target, "target column name");
  eval_cmd->add_option("--delimiter", e_delim, "CSV delimiter");

  // --- export-plots ------------------------------------------------------------
  auto* plots = app.add_subcommand("export-plots", "Emit plot-ready data files");
  std::string x_model, grid_out, pairs_out, ard_out;
  long grid_n = 400;
  bool with_truth = false;
  plots->add_option("--model", x_model, "model file")->required();
  plots->add_option("--grid-out", grid_out,
                    "1-D prediction grid CSV (D=1 models only)");
  plots->add_option("--pairs-out", pairs_out, "(Z, m) pairs CSV");
  plots->add_option("--ard-out", ard_out, "ARD weights CSV, sorted descending");
  plots->add_option("--grid-n", grid_n, "grid resolution");
  plots->add_flag("--truth-1d", with_truth,
                  "include the synthetic 1-D curve in the grid file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (*synth) {
    pgp::Dataset ds = synth_kind == "1d"
                          ? pgp::synth_1d(sf.n, sf.noise_std, synth_seed)
                          : pgp::synth_highdim(sf.n, sf.d_total, sf.d_relevant,
                                               sf.noise_std, synth_seed);
    write_dataset_csv(ds, "y", synth_out);
    std::cout << "wrote " << ds.n() << " rows to " << synth_out << "\n";
    return 0;
  }

  if (*train_cmd) {
    tc.learn_hyperparams = !freeze;
    tc.checkpoint_path = checkpoint_path;
    tc.resume_from = resume_from;

    pgp::Dataset full;
    if (synth_1d_n > 0) {
      full = pgp::synth_1d(synth_1d_n, tsf.noise_std, tc.seed);
    } else if (synth_highdim_n > 0) {
      full = pgp::synth_highdim(synth_highdim_n, tsf.d_total, tsf.d_relevant,
                                tsf.noise_std, tc.seed);
    } else if (!data_path.empty()) {
      std::vector<std::string> features = split_list(features_flag);
      if (features.empty()) {
        for (const auto& c : header_columns(data_path, delimiter))
          if (c != target) features.push_back(c);
      }
      const auto loaded =
          pgp::load_csv(data_path, target, features, {delimiter});
      if (loaded.dropped_rows > 0)
        std::cerr << "dropped " << loaded.dropped_rows << " malformed rows\n";
      full = loaded.data;
    } else {
      throw pgp::ConfigError("train: need --data, --synth-1d or --synth-highdim");
    }

    pgp::Dataset train_ds = std::move(full);
    pgp::Dataset test_ds;
    const bool have_test = test_fraction > 0.0;
    if (have_test)
      std::tie(train_ds, test_ds) =
          pgp::split(train_ds, 1.0 - test_fraction, tc.seed);

    const auto result =
        pgp::train(train_ds, tc, have_test ? &test_ds : nullptr);

    pgp::ModelFile mf;
    mf.state = result.state;
    mf.normalizer = result.normalizer;
    mf.column_names = train_ds.column_names;
    mf.seed = tc.seed;
    mf.iterations = result.iterations_run;
    mf.data_fingerprint = pgp::dataset_fingerprint(train_ds);
    pgp::save_model(mf, out_path);

    if (metrics_path.empty()) metrics_path = out_path + ".metrics.csv";
    pgp::write_metrics_csv(result.report, metrics_path);

    std::cout.precision(10);
    std::cout << "final nlml " << pgp::nlml(result.state) << "\n";
    if (have_test) {
      const auto ev = pgp::evaluate(result.state, result.normalizer, test_ds);
      std::cout << "test normalized mse " << ev.mse << " (mean-predictor baseline "
                << ev.baseline_mse << ")\n";
    }
    std::cout << "model written to " << out_path << "\n";
    return 0;
  }

  if (*predict_cmd) {
    const pgp::ModelFile mf = pgp::load_model(p_model);
    const auto loaded = pgp::load_csv(p_data, "", mf.column_names, {p_delim});
    const pgp::Matrix Xn = mf.normalizer.apply_x(loaded.data.X);
    pgp::Prediction pred = pgp::predict_chunked(mf.state, Xn);
    if (observation_noise) {
      const double se = mf.state.params.sigma_eps();
      pred.variance.array() += se * se;
    }

    std::ofstream out(p_out);
    if (!out) throw pgp::DataError("cannot open " + p_out);
    for (const auto& name : mf.column_names) out << name << ',';
    out << "mean,std\n";
    out.precision(17);
    const double ys = mf.normalizer.y_std;
    for (Eigen::Index i = 0; i < Xn.rows(); ++i) {
      for (Eigen::Index j = 0; j < loaded.data.d(); ++j)
        out << loaded.data.X(i, j) << ',';
      out << mf.normalizer.invert_y(pred.mean[i]) << ','
          << std::sqrt(pred.variance[i]) * ys << '\n';
    }
    return 0;
  }

  if (*eval_cmd) {
    const pgp::ModelFile mf = pgp::load_model(e_model);
    const auto loaded =
        pgp::load_csv(e_data, e_target, mf.column_names, {e_delim});
    const auto ev = pgp::evaluate(mf.state, mf.normalizer, loaded.data);
    std::cout.precision(10);
    std::cout << ev.mse << "\n";
    std::cerr << "mean-predictor baseline " << ev.baseline_mse << "\n";
    return 0;
  }

  if (*plots) {
    const pgp::ModelFile mf = pgp::load_model(x_model);
    const auto& st = mf.state;

    if (!grid_out.empty()) {
      if (st.dim() != 1)
        throw pgp::ConfigError("export-plots: --grid-out requires a 1-D model");
      pgp::Matrix grid(grid_n, 1);
      const double lo = mf.normalizer.x_min[0], hi = mf.normalizer.x_max[0];
      for (long i = 0; i < grid_n; ++i)
        grid(i, 0) = lo + (hi - lo) * static_cast<double>(i) /
                              static_cast<double>(grid_n - 1);
      const pgp::Matrix gn = mf.normalizer.apply_x(grid);
      const pgp::Prediction pred = pgp::predict_chunked(st, gn);

      std::ofstream out(grid_out);
      if (!out) throw pgp::DataError("cannot open " + grid_out);
      out << "x" << (with_truth ? ",f_true" : "") << ",mean,lower,upper\n";
      out.precision(17);
      const double ys = mf.normalizer.y_std;
      for (long i = 0; i < grid_n; ++i) {
        const double mean = mf.normalizer.invert_y(pred.mean[i]);
        const double sd = std::sqrt(pred.variance[i]) * ys;
        out << grid(i, 0);
        if (with_truth) out << ',' << pgp::synth_1d_truth(grid(i, 0));
        out << ',' << mean << ',' << mean - 2.0 * sd << ',' << mean + 2.0 * sd
            << '\n';
      }
    }

    if (!pairs_out.empty()) {
      std::ofstream out(pairs_out);
      if (!out) throw pgp::DataError("cannot open " + pairs_out);
      for (const auto& name : mf.column_names) out << name << ',';
      out << "m\n";
      out.precision(17);
      const pgp::Matrix Zraw = mf.normalizer.invert_x(st.Z);
      for (Eigen::Index i = 0; i < Zraw.rows(); ++i) {
        for (Eigen::Index j = 0; j < Zraw.cols(); ++j) out << Zraw(i, j) << ',';
        out << mf.normalizer.invert_y(st.m[i]) << '\n';
      }
    }

    if (!ard_out.empty()) {
      std::vector<std::pair<std::string, double>> rows;
      const pgp::Vector w = st.params.weights();
      for (int j = 0; j < st.dim(); ++j)
        rows.emplace_back(j < static_cast<int>(mf.column_names.size())
                              ? mf.column_names[j]
                              : "x" + std::to_string(j),
                          w[j]);
      std::sort(rows.begin(), rows.end(),
                [](const auto& a, const auto& b) { return a.second > b.second; });
      std::ofstream out(ard_out);
      if (!out) throw pgp::DataError("cannot open " + ard_out);
      out << "column_name,w\n";
      out.precision(17);
      for (const auto& [name, wv] : rows) out << name << ',' << wv << '\n';
    }
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const pgp::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const pgp::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const pgp::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const pgp::DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
