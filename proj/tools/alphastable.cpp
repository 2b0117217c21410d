// Command-line front end: fit, simulate, pdf, study, returns.
//
// Every subcommand prints a single-line JSON result record on stdout (and to
// --record FILE when given) holding the inputs, configuration and seed.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "alphastable/baseline.hpp"
#include "alphastable/density.hpp"
#include "alphastable/em.hpp"
#include "alphastable/goodness_of_fit.hpp"
#include "alphastable/io.hpp"
#include "alphastable/record.hpp"
#include "alphastable/sampling.hpp"
#include "alphastable/study.hpp"

namespace as = alphastable;
using as::record::Json;

namespace {

void emit(const Json& rec, const std::string& record_path) {
  const std::string line = rec.dump();
  std::cout << line << '\n';
  if (!record_path.empty()) {
    std::ofstream out(record_path);
    if (!out) throw as::io::DataError(as::io::DataErrorKind::MissingFile, "cannot write " + record_path);
    out << line << '\n';
  }
}

struct FitOptions {
  std::string input, column, method = "em", record;
  bool returns = false;
  std::optional<double> alpha0, beta0, sigma0, mu0;
  as::em::EMConfig cfg;
};

int run_fit(const FitOptions& o) {
  const auto prices = as::io::load_price_csv(o.input, o.column);
  const std::vector<double> data =
      o.returns ? as::io::to_returns(prices).returns : prices.prices;
  const auto method = as::study::method_from_string(o.method);

  Json rec;
  rec["command"] = "fit";
  rec["input"] = o.input;
  rec["column"] = o.column;
  rec["returns"] = o.returns;
  rec["method"] = as::study::to_string(method);
  rec["n"] = data.size();

  as::StableParams est;
  double loglik = 0.0, ks = 0.0;
  if (method == as::study::Method::EM) {
    const bool any_init = o.alpha0 || o.beta0 || o.sigma0 || o.mu0;
    as::StableParams init;
    if (any_init) {
      init = as::baseline::cf_estimate(data);
      init = as::StableParams::s0(o.alpha0.value_or(init.alpha), o.beta0.value_or(init.beta),
                                  o.sigma0.value_or(init.sigma), o.mu0.value_or(init.mu));
    }
    rec["init"] = any_init ? as::record::to_json(init) : Json("cf_estimate");
    const auto fit = any_init ? as::em::fit_em(data, init, o.cfg) : as::em::fit_em(data, o.cfg);
    est = fit.params;
    loglik = fit.loglik;
    ks = fit.ks;
  } else {
    est = method == as::study::Method::SQ ? as::baseline::sq_estimate(data)
                                          : as::baseline::cf_estimate(data);
    const as::RngStream root(o.cfg.seed, 0);
    as::RngStream ll_rng = root.substream(4);
    as::RngStream ks_rng = root.substream(5);
    loglik = as::observed_loglik(data, est, o.cfg.K, ll_rng);
    ks = as::ks_statistic(data, est, o.cfg.cdf_sample_size, ks_rng);
  }
  rec["config"] = as::record::to_json(o.cfg);
  rec["seed"] = o.cfg.seed;
  rec["estimate"] = as::record::to_json(est);
  rec["loglik"] = loglik;
  rec["ks"] = ks;

  std::cerr << std::left << std::setw(8) << "method" << std::setw(12) << "alpha" << std::setw(12)
            << "beta" << std::setw(12) << "sigma" << std::setw(12) << "mu0" << std::setw(12)
            << "loglik" << "KS\n";
  std::cerr << std::setw(8) << as::study::to_string(method) << std::setprecision(4) << std::fixed
            << std::setw(12) << est.alpha << std::setw(12) << est.beta << std::setprecision(6)
            << std::setw(12) << est.sigma << std::setw(12) << est.mu << std::setprecision(2)
            << std::setw(12) << loglik << std::setprecision(4) << ks << '\n';
  emit(rec, o.record);
  return 0;
}

void add_config_options(CLI::App* sub, as::em::EMConfig& cfg) {
  sub->add_option("--K", cfg.K, "E-step grid size (K*K latent pairs)")->capture_default_str();
  sub->add_option("--N", cfg.N, "EM iterations")->capture_default_str();
  sub->add_option("--N0", cfg.N0, "EM burn-in")->capture_default_str();
  sub->add_option("--M", cfg.M, "SEM cycles per CM-step")->capture_default_str();
  sub->add_option("--M0", cfg.M0, "SEM burn-in")->capture_default_str();
  sub->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Alpha-stable distribution fitting and simulation"};
  app.require_subcommand(1);

  FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit", "fit four stable parameters to a CSV column");
  fit_cmd->add_option("--input", fit.input, "CSV file with a header row")->required();
  fit_cmd->add_option("--column", fit.column, "column name")->required();
  fit_cmd->add_option("--method", fit.method, "em, sq or cf")->capture_default_str();
  fit_cmd->add_flag("--returns", fit.returns, "transform prices to returns first");
  fit_cmd->add_option("--alpha0", fit.alpha0, "EM start alpha");
  fit_cmd->add_option("--beta0", fit.beta0, "EM start beta");
  fit_cmd->add_option("--sigma0", fit.sigma0, "EM start sigma");
  fit_cmd->add_option("--mu0", fit.mu0, "EM start location");
  fit_cmd->add_option("--record", fit.record, "also write the result record here");
  add_config_options(fit_cmd, fit.cfg);

  double alpha = 1.5, beta = 0.0, sigma = 1.0, mu0 = 0.0;
  std::uint64_t seed = 1;
  std::string out, record;
  const auto add_law = [&](CLI::App* sub) {
    sub->add_option("--alpha", alpha)->capture_default_str();
    sub->add_option("--beta", beta)->capture_default_str();
    sub->add_option("--sigma", sigma)->capture_default_str();
    sub->add_option("--mu0", mu0, "S0 location")->capture_default_str();
    sub->add_option("--seed", seed)->capture_default_str();
    sub->add_option("--out", out, "output CSV")->required();
    sub->add_option("--record", record, "also write the result record here");
  };

  std::size_t n = 1000;
  auto* sim_cmd = app.add_subcommand("simulate", "draw a stable sample");
  add_law(sim_cmd);
  sim_cmd->add_option("--n", n)->capture_default_str();

  double from = -5.0, to = 5.0;
  std::size_t points = 201, K = 100;
  auto* pdf_cmd = app.add_subcommand("pdf", "Monte Carlo density on a grid");
  add_law(pdf_cmd);
  pdf_cmd->add_option("--from", from)->capture_default_str();
  pdf_cmd->add_option("--to", to)->capture_default_str();
  pdf_cmd->add_option("--points", points)->capture_default_str();
  pdf_cmd->add_option("--K", K)->capture_default_str();

  std::string grid_path, out_dir, study_record;
  bool full = false;
  auto* study_cmd = app.add_subcommand("study", "replicated RMSE simulation study");
  study_cmd->add_option("--grid", grid_path, "JSON grid file")->required();
  study_cmd->add_option("--out", out_dir, "output directory")->required();
  study_cmd->add_flag("--full", full, "200 replicates per cell");
  study_cmd->add_option("--record", study_record, "also write the result record here");

  std::string ret_input, ret_column, ret_out, ret_record;
  auto* ret_cmd = app.add_subcommand("returns", "price column to returns");
  ret_cmd->add_option("--input", ret_input)->required();
  ret_cmd->add_option("--column", ret_column)->required();
  ret_cmd->add_option("--out", ret_out)->required();
  ret_cmd->add_option("--record", ret_record, "also write the result record here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (fit_cmd->parsed()) return run_fit(fit);

    if (sim_cmd->parsed()) {
      const auto p = as::StableParams::s0(alpha, beta, sigma, mu0);
      p.validate();
      as::RngStream rng(seed, 0);
      as::io::write_series_csv(out, "x", as::sample_stable(p, n, rng));
      Json rec;
      rec["command"] = "simulate";
      rec["law"] = as::record::to_json(p);
      rec["n"] = n;
      rec["seed"] = seed;
      rec["out"] = out;
      emit(rec, record);
      return 0;
    }

    if (pdf_cmd->parsed()) {
      const auto p = as::StableParams::s0(alpha, beta, sigma, mu0);
      p.validate();
      if (points < 2 || !(to > from)) throw as::InvalidArgument("pdf needs --points >= 2 and --to > --from");
      std::vector<double> ys(points);
      for (std::size_t i = 0; i < points; ++i)
        ys[i] = from + (to - from) * static_cast<double>(i) / static_cast<double>(points - 1);
      as::RngStream rng(seed, 0);
      const auto dens = as::pdf_mc(ys, p, K, rng);
      std::ofstream f(out);
      if (!f) throw as::io::DataError(as::io::DataErrorKind::MissingFile, "cannot write " + out);
      f << "y,density\n";
      for (std::size_t i = 0; i < points; ++i)
        f << as::io::format_double(ys[i]) << ',' << as::io::format_double(dens[i]) << '\n';
      Json rec;
      rec["command"] = "pdf";
      rec["law"] = as::record::to_json(p);
      rec["from"] = from;
      rec["to"] = to;
      rec["points"] = points;
      rec["K"] = K;
      rec["seed"] = seed;
      rec["out"] = out;
      emit(rec, record);
      return 0;
    }

    if (study_cmd->parsed()) {
      auto grid = as::study::StudyGrid::load(grid_path);
      if (full) grid.make_full();
      const auto cells = as::study::run_rmse_study(grid, [](const as::study::ProgressEvent& e) {
        std::cerr << "\rreplicate " << e.completed << '/' << e.total << std::flush;
        if (e.completed == e.total) std::cerr << '\n';
      });
      std::filesystem::create_directories(out_dir);
      const std::string rmse_path = (std::filesystem::path(out_dir) / "rmse.csv").string();
      as::study::write_rmse_csv(rmse_path, grid, cells);
      const auto panels = as::study::write_panel_csvs(out_dir, grid, cells);
      Json rec;
      rec["command"] = "study";
      rec["grid"] = grid_path;
      rec["full"] = full;
      rec["n"] = grid.n;
      rec["replicates"] = grid.replicates;
      rec["workers"] = grid.workers;
      rec["config"] = as::record::to_json(grid.cfg);
      rec["seed"] = grid.seed;
      rec["rmse_csv"] = rmse_path;
      rec["panels"] = panels.size();
      emit(rec, study_record);
      return 0;
    }

    if (ret_cmd->parsed()) {
      const auto r = as::io::to_returns(as::io::load_price_csv(ret_input, ret_column));
      as::io::write_series_csv(ret_out, r.name, r.returns);
      Json rec;
      rec["command"] = "returns";
      rec["input"] = ret_input;
      rec["column"] = ret_column;
      rec["n"] = r.returns.size();
      rec["out"] = ret_out;
      emit(rec, ret_record);
      return 0;
    }
  } catch (const as::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
