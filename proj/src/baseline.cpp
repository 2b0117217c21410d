#include "alphastable/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "alphastable/error.hpp"
#include "alphastable/log.hpp"

namespace alphastable::baseline {

namespace detail {
extern const std::string_view kBuiltinQuantileTables;
}

using std::numbers::pi;

// ---------------------------------------------------------------- tables

namespace {

// Index i and weight f so that x ~ axis[i] + f (axis[i+1] - axis[i]);
// works for increasing or decreasing axes, clamps outside.
std::pair<std::size_t, double> locate(const std::vector<double>& axis, double x) {
  const bool increasing = axis.back() > axis.front();
  const double lo = increasing ? axis.front() : axis.back();
  const double hi = increasing ? axis.back() : axis.front();
  x = std::clamp(x, lo, hi);
  for (std::size_t i = 0; i + 1 < axis.size(); ++i) {
    const double a = axis[i], b = axis[i + 1];
    if ((x - a) * (x - b) <= 0.0) return {i, a == b ? 0.0 : (x - a) / (b - a)};
  }
  return {axis.size() - 2, 1.0};
}

bool monotone(const std::vector<double>& axis) {
  if (axis.size() < 2) return false;
  const bool increasing = axis[1] > axis[0];
  for (std::size_t i = 1; i < axis.size(); ++i)
    if (increasing ? !(axis[i] > axis[i - 1]) : !(axis[i] < axis[i - 1])) return false;
  return true;
}

}  // namespace

Grid2D::Grid2D(std::vector<double> rows, std::vector<double> cols, std::vector<double> values)
    : rows_(std::move(rows)), cols_(std::move(cols)), values_(std::move(values)) {
  if (!monotone(rows_) || !monotone(cols_)) throw InvalidArgument("table axes must be monotone");
  if (values_.size() != rows_.size() * cols_.size())
    throw InvalidArgument("table size does not match its axes");
}

double Grid2D::operator()(double row, double col) const {
  const auto [i, fr] = locate(rows_, row);
  const auto [j, fc] = locate(cols_, col);
  const std::size_t nc = cols_.size();
  const double v00 = values_[i * nc + j], v01 = values_[i * nc + j + 1];
  const double v10 = values_[(i + 1) * nc + j], v11 = values_[(i + 1) * nc + j + 1];
  return (1 - fr) * ((1 - fc) * v00 + fc * v01) + fr * ((1 - fc) * v10 + fc * v11);
}

QuantileTableSet QuantileTableSet::parse(std::string_view text) {
  std::map<std::string, std::vector<double>> axes;
  struct RawTable {
    std::string row_axis, col_axis;
    std::vector<double> values;
  };
  std::map<std::string, RawTable> tables;
  int version = 0;
  RawTable* open = nullptr;

  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string head;
    if (!(fields >> head)) continue;
    auto fail = [&](const std::string& why) {
      throw InvalidArgument("quantile tables line " + std::to_string(line_no) + ": " + why);
    };
    if (head == "version") {
      if (!(fields >> version)) fail("bad version");
      open = nullptr;
    } else if (head == "axis") {
      std::string name;
      if (!(fields >> name)) fail("axis without a name");
      std::vector<double> values;
      for (double v; fields >> v;) values.push_back(v);
      if (!fields.eof()) fail("non-numeric axis value");
      axes[name] = std::move(values);
      open = nullptr;
    } else if (head == "table") {
      std::string name;
      RawTable t;
      if (!(fields >> name >> t.row_axis >> t.col_axis)) fail("table header needs name and two axes");
      open = &(tables[name] = std::move(t));
    } else {
      if (!open) fail("numbers outside a table");
      std::istringstream row(line);
      for (double v; row >> v;) open->values.push_back(v);
      if (!row.eof()) fail("non-numeric table entry");
    }
  }

  auto build = [&](const std::string& name) {
    const auto it = tables.find(name);
    if (it == tables.end()) throw InvalidArgument("quantile tables lack table " + name);
    const RawTable& t = it->second;
    if (!axes.contains(t.row_axis) || !axes.contains(t.col_axis))
      throw InvalidArgument("table " + name + " refers to an undefined axis");
    return Grid2D(axes.at(t.row_axis), axes.at(t.col_axis), t.values);
  };
  QuantileTableSet set;
  set.version = version;
  set.psi_alpha = build("psi_alpha");
  set.psi_beta = build("psi_beta");
  set.nu_scale = build("nu_scale");
  set.nu_location = build("nu_location");
  return set;
}

QuantileTableSet QuantileTableSet::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidArgument("cannot open quantile tables " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  return parse(buf.str());
}

const QuantileTableSet& QuantileTableSet::builtin() {
  static const QuantileTableSet set = parse(detail::kBuiltinQuantileTables);
  return set;
}

// ---------------------------------------------------------------- SQ

double sample_quantile(std::span<const double> sorted, double level) {
  if (sorted.empty()) throw InvalidArgument("quantile of an empty sample");
  const double pos = level * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double f = pos - static_cast<double>(lo);
  return sorted[lo] + f * (sorted[hi] - sorted[lo]);
}

namespace {

constexpr std::size_t kMinSample = 10;

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

std::vector<double> sorted_copy(std::span<const double> data) {
  std::vector<double> s(data.begin(), data.end());
  for (double x : s)
    if (!std::isfinite(x)) throw InvalidArgument("data contain a non-finite value");
  std::ranges::sort(s);
  return s;
}

}  // namespace

StableParams sq_estimate(std::span<const double> data, const QuantileTableSet& tables) {
  if (data.size() < kMinSample) throw InvalidArgument("quantile estimator needs at least 10 points");
  const std::vector<double> s = sorted_copy(data);
  const double q05 = sample_quantile(s, 0.05), q25 = sample_quantile(s, 0.25);
  const double q50 = sample_quantile(s, 0.50), q75 = sample_quantile(s, 0.75);
  const double q95 = sample_quantile(s, 0.95);
  if (!(q75 > q25) || !(q95 > q05)) throw InvalidArgument("sample has a degenerate quantile spread");

  double nu_alpha = (q95 - q05) / (q75 - q25);
  double nu_beta = (q95 + q05 - 2.0 * q50) / (q95 - q05);
  const auto& na_axis = tables.psi_alpha.rows();
  const double na_lo = std::min(na_axis.front(), na_axis.back());
  const double na_hi = std::max(na_axis.front(), na_axis.back());
  if (nu_alpha < na_lo || nu_alpha > na_hi) {
    log::warn("quantile ratio nu_alpha = " + std::to_string(nu_alpha) + " outside table; clamped");
    nu_alpha = std::clamp(nu_alpha, na_lo, na_hi);
  }
  const auto& nb_axis = tables.psi_alpha.cols();
  const double nb_hi = std::max(nb_axis.front(), nb_axis.back());
  if (std::abs(nu_beta) > nb_hi) {
    log::warn("quantile ratio nu_beta = " + std::to_string(nu_beta) + " outside table; clamped");
    nu_beta = std::clamp(nu_beta, -nb_hi, nb_hi);
  }

  const double abs_nb = std::abs(nu_beta);
  const double alpha = std::clamp(tables.psi_alpha(nu_alpha, abs_nb), 0.1, 2.0);
  const double beta = std::clamp(sgn(nu_beta) * tables.psi_beta(nu_alpha, abs_nb), -1.0, 1.0);
  const double sigma = (q75 - q25) / tables.nu_scale(alpha, std::abs(beta));
  const double mu0 = q50 + sigma * sgn(beta) * tables.nu_location(alpha, std::abs(beta));
  return StableParams::s0(alpha, beta, sigma, mu0);
}

// ---------------------------------------------------------------- CF

std::vector<double> default_cf_frequencies() {
  std::vector<double> t(10);
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = 0.1 * static_cast<double>(k + 1);
  return t;
}

namespace {

std::complex<double> empirical_cf(std::span<const double> x, double t) {
  double re = 0.0, im = 0.0;
  for (double v : x) {
    re += std::cos(t * v);
    im += std::sin(t * v);
  }
  const double n = static_cast<double>(x.size());
  return {re / n, im / n};
}

// Least squares y ~ c0 * x0 + c1 * x1 via the 2x2 normal equations.
std::pair<double, double> fit_two(std::span<const double> x0, std::span<const double> x1,
                                  std::span<const double> y) {
  double a00 = 0, a01 = 0, a11 = 0, r0 = 0, r1 = 0;
  for (std::size_t k = 0; k < y.size(); ++k) {
    a00 += x0[k] * x0[k];
    a01 += x0[k] * x1[k];
    a11 += x1[k] * x1[k];
    r0 += x0[k] * y[k];
    r1 += x1[k] * y[k];
  }
  const double det = a00 * a11 - a01 * a01;
  if (!(std::abs(det) > 1e-300)) throw InvalidArgument("characteristic-function regression is singular");
  return {(a11 * r0 - a01 * r1) / det, (a00 * r1 - a01 * r0) / det};
}

// Phase regressor of the S0 characteristic function at unit scale:
// tan(pi alpha / 2) (t^alpha - t), with its alpha -> 1 limit -(2/pi) t log t.
double phase_regressor(double alpha, double t) {
  if (is_unit_alpha(alpha)) return -(2.0 / pi) * t * std::log(t);
  return std::tan(pi * alpha / 2.0) * (std::pow(t, alpha) - t);
}

}  // namespace

StableParams cf_estimate(std::span<const double> data, std::span<const double> frequencies) {
  if (data.size() < kMinSample) throw InvalidArgument("characteristic-function estimator needs at least 10 points");
  const std::vector<double> freq_default = default_cf_frequencies();
  if (frequencies.empty()) frequencies = freq_default;

  const StableParams start = sq_estimate(data);
  std::vector<double> x(data.begin(), data.end());
  for (double& v : x) v = (v - start.mu) / start.sigma;

  // Stage 1: log(-log|phi(t)|^2) = log(2 s^alpha) + alpha log t.
  std::vector<double> ones, logt, target;
  for (double t : frequencies) {
    const double mod2 = std::norm(empirical_cf(x, t));
    if (!(mod2 > 0.0 && mod2 < 1.0)) continue;
    ones.push_back(1.0);
    logt.push_back(std::log(t));
    target.push_back(std::log(-std::log(mod2)));
  }
  if (target.size() < 2) throw InvalidArgument("too few usable frequencies for the modulus regression");
  const auto [intercept, slope] = fit_two(ones, logt, target);
  double alpha = slope;
  if (!(alpha > 0.1 && alpha <= 2.0)) {
    log::warn("characteristic-function alpha = " + std::to_string(alpha) + " clamped to (0.1, 2]");
    alpha = std::clamp(alpha, 0.1 + 1e-9, 2.0);
  }
  const double scale = std::pow(std::exp(intercept) / 2.0, 1.0 / alpha);

  // Stage 2: arg phi(t) = mu t + beta tan(pi alpha / 2) (t^alpha - t) at unit scale.
  for (double& v : x) v /= scale;
  std::vector<double> tt, reg, phase;
  double previous = 0.0;
  for (double t : frequencies) {
    double a = std::arg(empirical_cf(x, t));
    while (a - previous > pi) a -= 2.0 * pi;
    while (a - previous < -pi) a += 2.0 * pi;
    previous = a;
    tt.push_back(t);
    reg.push_back(phase_regressor(alpha, t));
    phase.push_back(a);
  }
  const auto [mu_std, beta_raw] = fit_two(tt, reg, phase);
  const double beta = std::clamp(beta_raw, -1.0, 1.0);
  const double sigma = start.sigma * scale;
  const double mu0 = start.mu + sigma * mu_std;
  return StableParams::s0(alpha, beta, sigma, mu0);
}

}  // namespace alphastable::baseline
