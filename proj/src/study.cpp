#include "alphastable/study.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "alphastable/baseline.hpp"
#include "alphastable/io.hpp"
#include "alphastable/log.hpp"
#include "alphastable/record.hpp"
#include "alphastable/sampling.hpp"

namespace alphastable::study {

namespace {

constexpr std::array<const char*, 4> kParamNames{"alpha", "beta", "sigma", "mu0"};

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::EM: return "EM";
    case Method::SQ: return "SQ";
    case Method::CF: return "CF";
  }
  return "?";
}

Method method_from_string(const std::string& s) {
  std::string u = s;
  std::transform(u.begin(), u.end(), u.begin(), [](unsigned char c) { return std::toupper(c); });
  if (u == "EM") return Method::EM;
  if (u == "SQ") return Method::SQ;
  if (u == "CF") return Method::CF;
  throw InvalidArgument("unknown method '" + s + "' (expected em, sq or cf)");
}

void StudyGrid::validate() const {
  if (alphas.empty() || betas.empty() || sigmas.empty() || methods.empty())
    throw InvalidArgument("study grid axes and method list must be non-empty");
  for (double a : alphas)
    for (double b : betas)
      for (double s : sigmas) StableParams::s0(a, b, s, mu0).validate();
  if (n < 10) throw InvalidArgument("study sample size must be at least 10");
  if (replicates == 0) throw InvalidArgument("study needs at least one replicate");
  if (workers == 0) throw InvalidArgument("study needs at least one worker");
  cfg.validate();
}

StudyGrid StudyGrid::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("study grid: ") + e.what());
  }
  if (!j.is_object()) throw InvalidArgument("study grid must be a JSON object");
  StudyGrid g;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "alphas") g.alphas = value.get<std::vector<double>>();
      else if (key == "betas") g.betas = value.get<std::vector<double>>();
      else if (key == "sigmas") g.sigmas = value.get<std::vector<double>>();
      else if (key == "mu0") g.mu0 = value.get<double>();
      else if (key == "n") g.n = value.get<std::size_t>();
      else if (key == "replicates") g.replicates = value.get<std::size_t>();
      else if (key == "seed") g.seed = value.get<std::uint64_t>();
      else if (key == "workers") g.workers = value.get<std::size_t>();
      else if (key == "em") g.cfg = record::config_from_json(value, g.cfg);
      else if (key == "methods") {
        g.methods.clear();
        for (const auto& m : value) g.methods.push_back(method_from_string(m.get<std::string>()));
      } else {
        throw InvalidArgument("study grid: unknown key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("study grid: ") + e.what());
  }
  g.validate();
  return g;
}

StudyGrid StudyGrid::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io::DataError(io::DataErrorKind::MissingFile, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

void StudyGrid::make_full() { replicates = 200; }

double rmse(std::span<const double> estimates, double truth) {
  if (estimates.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (double e : estimates) s += (e - truth) * (e - truth);
  return std::sqrt(s / static_cast<double>(estimates.size()));
}

namespace {

using Estimate = std::optional<std::array<double, 4>>;

Estimate run_method(Method m, std::span<const double> data, const em::EMConfig& cfg) {
  try {
    StableParams p;
    switch (m) {
      case Method::EM: p = em::fit_em(data, cfg).params; break;
      case Method::SQ: p = baseline::sq_estimate(data); break;
      case Method::CF: p = baseline::cf_estimate(data); break;
    }
    p = convert_parameterization(p, Parameterization::S0);
    if (!p.valid()) return std::nullopt;
    return std::array<double, 4>{p.alpha, p.beta, p.sigma, p.mu};
  } catch (const Error& e) {
    log::warn(to_string(m) + " fit failed: " + e.what());
    return std::nullopt;
  }
}

}  // namespace

std::vector<StudyCell> run_rmse_study(const StudyGrid& grid, const ProgressCallback& progress) {
  grid.validate();
  std::vector<StableParams> truths;
  for (double a : grid.alphas)
    for (double b : grid.betas)
      for (double s : grid.sigmas) truths.push_back(StableParams::s0(a, b, s, grid.mu0));

  const std::size_t n_methods = grid.methods.size();
  const std::size_t total = truths.size() * grid.replicates;
  // results[item * n_methods + method]; each slot is written by exactly one worker.
  std::vector<Estimate> results(total * n_methods);

  std::atomic<std::size_t> next{0};
  std::size_t completed = 0;
  std::mutex progress_mutex;

  const auto work = [&] {
    for (;;) {
      const std::size_t item = next.fetch_add(1);
      if (item >= total) return;
      const std::size_t cell = item / grid.replicates;
      const std::size_t rep = item % grid.replicates;

      const RngStream replicate_stream = RngStream(grid.seed, cell).substream(rep);
      RngStream data_rng = replicate_stream.substream(0);
      const std::vector<double> data = sample_stable(truths[cell], grid.n, data_rng);

      em::EMConfig cfg = grid.cfg;
      cfg.seed = replicate_stream.substream(1).engine()();
      for (std::size_t m = 0; m < n_methods; ++m)
        results[item * n_methods + m] = run_method(grid.methods[m], data, cfg);

      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress({++completed, total, cell, rep});
      }
    }
  };

  const std::size_t n_threads = std::min(grid.workers, total);
  if (n_threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(work);
  }

  std::vector<StudyCell> cells;
  for (std::size_t c = 0; c < truths.size(); ++c) {
    for (std::size_t m = 0; m < n_methods; ++m) {
      StudyCell out;
      out.truth = truths[c];
      out.method = grid.methods[m];
      for (std::size_t r = 0; r < grid.replicates; ++r) {
        const Estimate& e = results[(c * grid.replicates + r) * n_methods + m];
        if (e) out.estimates.push_back(*e);
        else ++out.n_fail;
      }
      const std::array<double, 4> t{out.truth.alpha, out.truth.beta, out.truth.sigma, out.truth.mu};
      for (std::size_t k = 0; k < 4; ++k) {
        std::vector<double> column;
        for (const auto& e : out.estimates) column.push_back(e[k]);
        out.rmse[k] = rmse(column, t[k]);
      }
      cells.push_back(std::move(out));
    }
  }
  return cells;
}

namespace {

void write_header_comment(std::ostream& out, const StudyGrid& grid) {
  out << "# n=" << grid.n << " replicates=" << grid.replicates << " seed=" << grid.seed
      << " em=" << record::to_json(grid.cfg).dump()
      << " em_init=cf_estimate\n";
}

}  // namespace

void write_rmse_csv(const std::string& path, const StudyGrid& grid,
                    const std::vector<StudyCell>& cells) {
  std::ofstream out(path);
  if (!out) throw io::DataError(io::DataErrorKind::MissingFile, "cannot write " + path);
  write_header_comment(out, grid);
  out << "alpha_true,beta_true,sigma_true,method,parameter,rmse,n_fail\n";
  for (const auto& c : cells)
    for (std::size_t k = 0; k < 4; ++k)
      out << io::format_double(c.truth.alpha) << ',' << io::format_double(c.truth.beta) << ','
          << io::format_double(c.truth.sigma) << ',' << to_string(c.method) << ','
          << kParamNames[k] << ',' << io::format_double(c.rmse[k]) << ',' << c.n_fail << '\n';
  if (!out) throw io::DataError(io::DataErrorKind::MissingFile, "write failed for " + path);
}

std::vector<std::string> write_panel_csvs(const std::string& dir, const StudyGrid& grid,
                                          const std::vector<StudyCell>& cells) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> paths;
  for (double s : grid.sigmas) {
    for (std::size_t k = 0; k < 4; ++k) {
      for (double b : grid.betas) {
        const std::string path = (std::filesystem::path(dir) /
                                  ("panel_sigma_" + io::format_double(s) + "_" + kParamNames[k] +
                                   "_beta_" + io::format_double(b) + ".csv"))
                                     .string();
        std::ofstream out(path);
        if (!out) throw io::DataError(io::DataErrorKind::MissingFile, "cannot write " + path);
        write_header_comment(out, grid);
        out << "alpha_true";
        for (Method m : grid.methods) out << ',' << to_string(m);
        out << '\n';
        for (double a : grid.alphas) {
          out << io::format_double(a);
          for (Method m : grid.methods) {
            const auto it = std::find_if(cells.begin(), cells.end(), [&](const StudyCell& c) {
              return c.method == m && c.truth.alpha == a && c.truth.beta == b &&
                     c.truth.sigma == s;
            });
            out << ',' << (it == cells.end() ? std::string("nan") : io::format_double(it->rmse[k]));
          }
          out << '\n';
        }
        paths.push_back(path);
      }
    }
  }
  return paths;
}

}  // namespace alphastable::study
