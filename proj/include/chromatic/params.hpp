#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "chromatic/core.hpp"
#include "chromatic/instance.hpp"

namespace chromatic {

enum class Mode { Counting, Sampling };

std::string to_string(Mode m);
Mode parse_mode(const std::string& s);

struct SettledParams {
  std::size_t k1 = 0;
  std::size_t k2 = 0;
  Rational beta;
};

// k1 = floor(13k/14), k2 = floor(3k/7), beta = 1/2.
SettledParams settle_counting(std::size_t k);
// k1 = floor(13k/16), k2 = floor(3k/8), beta = 1/2.
SettledParams settle_sampling(std::size_t k);
SettledParams settle(std::size_t k, Mode mode);

// Headline constant C and exponent A / (k - B) per mode.
double headline_constant(Mode mode);
Rational headline_exponent(std::size_t k, Mode mode);

struct InequalityCheck {
  std::string name;
  std::string relation;  // ">", ">=" between lhs and rhs
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

struct RegimeReport {
  bool in_regime = false;
  SettledParams settled;
  std::vector<InequalityCheck> checks;
};

// Transcendental comparisons pass only when lhs clears rhs by a 1e-12 relative band.
bool passes_guarded(double lhs, double rhs);

// The q-independent inequalities on C for the settled parameters of `mode`,
// plus the exponent-dominance conditions, evaluated with exact rationals.
std::vector<InequalityCheck> constant_checks(std::size_t k, double C, Mode mode);

RegimeReport regime_check(std::size_t k, std::size_t delta, std::size_t q, Mode mode);

struct RuntimeParams {
  double t_star = 0.0;
  std::size_t L = 0;
  double L_S = 0.0;
};

// t* = 5 (e^2 k^3 delta^3)^{1/(1-beta)}, L = k^3 delta^2 ceil(ln(4/eps)),
// L_S = k^2 delta ln(2 n delta / eps).
RuntimeParams derive_runtime_params(std::size_t k, std::size_t delta, const Rational& beta, double eps,
                                    std::size_t n, Mode mode);

double default_t_star(std::size_t k, std::size_t delta, const Rational& beta);
std::size_t counting_depth(std::size_t k, std::size_t delta, double eps);
// 4 exp(-L / (k^3 delta^2)); zero when delta = 0.
double truncation_gamma(std::size_t L, std::size_t k, std::size_t delta);

struct AlgoParams {
  std::size_t k1 = 0;
  std::size_t k2 = 0;
  Rational beta{1, 2};
  double t_star = 0.0;
  std::size_t L = 1;
  double gamma = 0.0;
  Mode mode = Mode::Counting;
};

// k^2 delta ln(2 n delta / eps); components this large flag a sampler failure.
// Infinite when there are no edges.
double residual_threshold(std::size_t k, std::size_t delta, std::size_t n, double eps);

struct ParamOverrides {
  std::optional<std::size_t> k1;
  std::optional<std::size_t> k2;
  std::optional<Rational> beta;
  std::optional<std::size_t> L;
  std::optional<double> t_star;
};

struct ResolvedParams {
  AlgoParams params;
  bool in_regime = false;
  std::vector<std::string> warnings;
};

// Settles parameters for an instance. `depth_eps` is the per-marginal
// accuracy that fixes L. Outside the proven regime the settled k1, k2 are
// clamped to k1 <= min(k - 2, k_min), k2 <= k1 - 1 and t* defaults to 5.
ResolvedParams resolve_params(const Instance& inst, double depth_eps, Mode mode, const ParamOverrides& ov = {});

}  // namespace chromatic
