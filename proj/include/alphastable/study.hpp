#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "alphastable/em.hpp"
#include "alphastable/params.hpp"

namespace alphastable::study {

enum class Method { EM, SQ, CF };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

/// Replicated simulation design: every (alpha, beta, sigma) combination at
/// location mu0, `replicates` samples of size `n` per combination.
struct StudyGrid {
  std::vector<double> alphas{0.5, 0.9, 1.2, 1.5};
  std::vector<double> betas{0.0, 0.5, 0.9};
  std::vector<double> sigmas{0.5, 5.0};
  double mu0 = 0.0;
  std::size_t n = 300;
  std::size_t replicates = 20;
  std::vector<Method> methods{Method::EM, Method::SQ, Method::CF};
  em::EMConfig cfg;
  std::uint64_t seed = 1;
  std::size_t workers = 1;

  void validate() const;

  /// Reads the JSON grid format (every key optional; see README).
  static StudyGrid from_json_text(const std::string& text);
  static StudyGrid load(const std::string& path);

  /// The full design: 200 replicates.
  void make_full();
};

/// One (truth, method) cell. estimates[r] = (alpha, beta, sigma, mu0) of the
/// r-th successful replicate; failures are counted, not stored.
struct StudyCell {
  StableParams truth;
  Method method = Method::EM;
  std::array<double, 4> rmse{};
  std::vector<std::array<double, 4>> estimates;
  std::size_t n_fail = 0;

  friend bool operator==(const StudyCell&, const StudyCell&) = default;
};

struct ProgressEvent {
  std::size_t completed = 0;
  std::size_t total = 0;
  std::size_t cell = 0;
  std::size_t replicate = 0;
};

using ProgressCallback = std::function<void(const ProgressEvent&)>;

double rmse(std::span<const double> estimates, double truth);

/// Cells in (alpha, beta, sigma, method) order; identical for a given grid
/// whatever the worker count.
std::vector<StudyCell> run_rmse_study(const StudyGrid& grid, const ProgressCallback& progress = {});

/// Columns alpha_true,beta_true,sigma_true,method,parameter,rmse,n_fail.
void write_rmse_csv(const std::string& path, const StudyGrid& grid,
                    const std::vector<StudyCell>& cells);

/// One CSV per (sigma, parameter, beta) panel: alpha_true and one RMSE
/// column per method. Returns the written paths.
std::vector<std::string> write_panel_csvs(const std::string& dir, const StudyGrid& grid,
                                          const std::vector<StudyCell>& cells);

}  // namespace alphastable::study
