#include "chromatic/params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/binomial.hpp>

namespace chromatic {

namespace {

constexpr double kGuard = 1e-12;

InequalityCheck make_check(std::string name, std::string relation, double lhs, double rhs, bool pass) {
  return InequalityCheck{std::move(name), std::move(relation), lhs, rhs, pass};
}

InequalityCheck exact_ge(std::string name, const Rational& lhs, const Rational& rhs) {
  return make_check(std::move(name), ">=", to_double(lhs), to_double(rhs), lhs >= rhs);
}

InequalityCheck guarded(std::string name, std::string relation, double lhs, double rhs) {
  const bool pass = passes_guarded(lhs, rhs);
  return make_check(std::move(name), std::move(relation), lhs, rhs, pass);
}

}  // namespace

std::string to_string(Mode m) { return m == Mode::Counting ? "counting" : "sampling"; }

Mode parse_mode(const std::string& s) {
  if (s == "counting") return Mode::Counting;
  if (s == "sampling") return Mode::Sampling;
  fail(ErrorKind::InvalidArgument, "mode must be counting or sampling, got '" + s + "'");
}

SettledParams settle_counting(std::size_t k) { return {13 * k / 14, 3 * k / 7, Rational(1, 2)}; }

SettledParams settle_sampling(std::size_t k) { return {13 * k / 16, 3 * k / 8, Rational(1, 2)}; }

SettledParams settle(std::size_t k, Mode mode) {
  return mode == Mode::Counting ? settle_counting(k) : settle_sampling(k);
}

double headline_constant(Mode mode) { return mode == Mode::Counting ? 357.0 : 931.0; }

Rational headline_exponent(std::size_t k, Mode mode) {
  // A/(k - B) with (A, B) = (14, 14) or (16, 16/3).
  const Rational kk(static_cast<long long>(k));
  const Rational denom = mode == Mode::Counting ? kk - 14 : kk - Rational(16, 3);
  if (denom <= 0) return Rational(-1);
  return Rational(mode == Mode::Counting ? 14 : 16) / denom;
}

bool passes_guarded(double lhs, double rhs) {
  if (!std::isfinite(lhs) || std::isnan(rhs)) return false;
  return lhs >= rhs + kGuard * std::abs(rhs);
}

std::vector<InequalityCheck> constant_checks(std::size_t k, double C, Mode mode) {
  const SettledParams sp = settle(k, mode);
  const double kd = static_cast<double>(k);
  const double beta = to_double(sp.beta);
  const double k3 = kd * kd * kd;
  std::vector<InequalityCheck> out;
  const bool shapes_ok = sp.k2 >= 2 && sp.k1 >= sp.k2 + 2 && k >= sp.k1 + 2;
  out.push_back(make_check("0 < k2 < k1 < k-1 with k1-k2-1 > 0 and k2-1 > 0", ">=", shapes_ok ? 1.0 : 0.0, 1.0,
                           shapes_ok));
  if (!shapes_ok) return out;
  const double d12 = static_cast<double>(sp.k1 - sp.k2 - 1);
  const double k2m1 = static_cast<double>(sp.k2 - 1);
  const double rest = static_cast<double>(k - sp.k1 - 1);

  out.push_back(guarded("C >= (5e (e^2 k^3)^{1/(1-beta)})^{1/(k1-k2-1)}", ">=", C,
                        std::pow(5.0 * std::exp(1.0) * std::pow(std::exp(2.0) * k3, 1.0 / (1.0 - beta)), 1.0 / d12)));
  const double binom = boost::math::binomial_coefficient<double>(static_cast<unsigned>(k), static_cast<unsigned>(sp.k2));
  out.push_back(guarded("C >= (e^{beta+3} k^3 / beta^beta * binom(k,k2))^{1/(beta(k2-1))}", ">=", C,
                        std::pow(std::exp(beta + 3.0) * k3 / std::pow(beta, beta) * binom, 1.0 / (beta * k2m1))));
  if (mode == Mode::Counting) {
    out.push_back(guarded("C >= 4(k-k1)^{1/(k-k1-1)}", ">=", C,
                          4.0 * std::pow(static_cast<double>(k - sp.k1), 1.0 / rest)));
  } else {
    out.push_back(guarded("C > (e^7 k^3)^{1/(k-k1-1)}", ">", C, std::pow(std::exp(7.0) * k3, 1.0 / rest)));
  }

  const Rational A_over = headline_exponent(k, mode);
  if (A_over < 0) {
    out.push_back(make_check("k > B", ">", kd, mode == Mode::Counting ? 14.0 : 16.0 / 3.0, false));
    return out;
  }
  const Rational b = sp.beta;
  out.push_back(exact_ge("A/(k-B) >= 3/(beta(k2-1))", A_over,
                         Rational(3) / (b * Rational(static_cast<long long>(sp.k2 - 1)))));
  out.push_back(exact_ge("A/(k-B) >= (4-beta)/((1-beta)(k1-k2-1))", A_over,
                         (Rational(4) - b) / ((Rational(1) - b) * Rational(static_cast<long long>(sp.k1 - sp.k2 - 1)))));
  const Rational last_num(mode == Mode::Counting ? 1 : 3);
  out.push_back(exact_ge(mode == Mode::Counting ? "A/(k-B) >= 1/(k-k1-1)" : "A/(k-B) >= 3/(k-k1-1)", A_over,
                         last_num / Rational(static_cast<long long>(k - sp.k1 - 1))));
  return out;
}

RegimeReport regime_check(std::size_t k, std::size_t delta, std::size_t q, Mode mode) {
  RegimeReport rep;
  rep.settled = settle(k, mode);
  const SettledParams& sp = rep.settled;
  const double kd = static_cast<double>(k);
  const double dd = static_cast<double>(delta);
  const double qd = static_cast<double>(q);
  const double C = headline_constant(mode);

  rep.checks.push_back(make_check("k >= 28", ">=", kd, 28.0, k >= 28));
  const Rational expo = headline_exponent(k, mode);
  if (expo > 0) {
    const double threshold = C * std::pow(dd, to_double(expo));
    rep.checks.push_back(guarded(std::string("q > ") + (mode == Mode::Counting ? "357" : "931") +
                                     " Delta^{A/(k-B)}",
                                 ">", qd, threshold));
  } else {
    rep.checks.push_back(make_check("q > C Delta^{A/(k-B)} (k > B required)", ">", qd, HUGE_VAL, false));
  }
  rep.checks.push_back(make_check("k - k1 - 2 >= 0", ">=", kd - static_cast<double>(sp.k1), 2.0, k >= sp.k1 + 2));
  if (sp.k2 >= 1) {
    // q^{k2-1} > 1/beta, exact.
    const BigInt lhs = boost::multiprecision::pow(BigInt(q), static_cast<unsigned>(sp.k2 - 1));
    const Rational rhs = Rational(1) / sp.beta;
    rep.checks.push_back(make_check("q^{k2-1} > 1/beta", ">", to_double(lhs), to_double(rhs), Rational(lhs) > rhs));
  } else {
    rep.checks.push_back(make_check("q^{k2-1} > 1/beta (k2 >= 1 required)", ">", 0.0, 2.0, false));
  }
  if (sp.k1 > 2) {
    rep.checks.push_back(guarded("q > (e k Delta)^{1/(k1-2)}", ">", qd,
                                 std::pow(std::exp(1.0) * kd * dd, 1.0 / static_cast<double>(sp.k1 - 2))));
  } else {
    rep.checks.push_back(make_check("q > (e k Delta)^{1/(k1-2)} (k1 > 2 required)", ">", qd, HUGE_VAL, false));
  }
  for (auto& c : constant_checks(k, C, mode)) rep.checks.push_back(std::move(c));
  rep.in_regime = true;
  for (const auto& c : rep.checks) rep.in_regime = rep.in_regime && c.pass;
  return rep;
}

double default_t_star(std::size_t k, std::size_t delta, const Rational& beta) {
  const double kd = static_cast<double>(k);
  const double dd = static_cast<double>(delta);
  const double b = to_double(beta);
  return 5.0 * std::pow(std::exp(2.0) * kd * kd * kd * dd * dd * dd, 1.0 / (1.0 - b));
}

std::size_t counting_depth(std::size_t k, std::size_t delta, double eps) {
  if (!(eps > 0.0)) fail(ErrorKind::InvalidArgument, "eps must be positive");
  const double c = std::ceil(std::log(4.0 / eps));
  const std::size_t base = k * k * k * std::max<std::size_t>(delta, 1) * std::max<std::size_t>(delta, 1);
  return base * static_cast<std::size_t>(std::max(c, 1.0));
}

double truncation_gamma(std::size_t L, std::size_t k, std::size_t delta) {
  if (delta == 0 || k == 0) return 0.0;
  const double scale = static_cast<double>(k) * k * k * static_cast<double>(delta) * delta;
  return 4.0 * std::exp(-static_cast<double>(L) / scale);
}

RuntimeParams derive_runtime_params(std::size_t k, std::size_t delta, const Rational& beta, double eps,
                                    std::size_t n, [[maybe_unused]] Mode mode) {
  if (!(beta > 0 && beta < 1)) fail(ErrorKind::InvalidArgument, "beta must lie in (0,1)");
  if (!(eps > 0.0 && eps < 1.0)) fail(ErrorKind::InvalidArgument, "eps must lie in (0,1)");
  RuntimeParams rp;
  rp.t_star = default_t_star(k, delta, beta);
  rp.L = counting_depth(k, delta, eps);
  const double kd = static_cast<double>(k);
  const double dd = static_cast<double>(delta);
  const double arg = 2.0 * static_cast<double>(n) * dd / eps;
  rp.L_S = arg > 1.0 ? kd * kd * dd * std::log(arg) : 0.0;
  return rp;
}

double residual_threshold(std::size_t k, std::size_t delta, std::size_t n, double eps) {
  if (delta == 0) return std::numeric_limits<double>::infinity();
  const double arg = 2.0 * static_cast<double>(n) * static_cast<double>(delta) / eps;
  const double kd = static_cast<double>(k);
  return arg > 1.0 ? kd * kd * static_cast<double>(delta) * std::log(arg) : 0.0;
}

ResolvedParams resolve_params(const Instance& inst, double depth_eps, Mode mode, const ParamOverrides& ov) {
  if (!(depth_eps > 0.0)) fail(ErrorKind::InvalidArgument, "eps must be positive");
  ResolvedParams out;
  AlgoParams& p = out.params;
  p.mode = mode;
  const std::size_t k = inst.max_edge_size();
  const std::size_t k_min = inst.num_edges() > 0 ? inst.min_edge_size() : 0;
  const std::size_t delta = inst.max_degree();
  const SettledParams settled = settle(k, mode);
  out.in_regime = inst.num_edges() > 0 &&
                  regime_check(k, delta, static_cast<std::size_t>(inst.num_colours()), mode).in_regime;

  if (inst.num_edges() == 0) {
    p.k1 = ov.k1.value_or(1);
    p.k2 = ov.k2.value_or(0);
  } else {
    std::size_t k1 = settled.k1;
    const std::size_t cap = std::max<std::size_t>(1, std::min(k >= 2 ? k - 2 : 1, k_min));
    if (!ov.k1 && (k1 > cap || k1 == 0)) {
      out.warnings.push_back("k1 clamped from " + std::to_string(k1) + " to " + std::to_string(cap));
      k1 = cap;
    }
    p.k1 = ov.k1.value_or(k1);
    std::size_t k2 = settled.k2;
    if (!ov.k2 && k2 >= p.k1) {
      out.warnings.push_back("k2 clamped from " + std::to_string(k2) + " to " + std::to_string(p.k1 - 1));
      k2 = p.k1 - 1;
    }
    p.k2 = ov.k2.value_or(k2);
    if (p.k1 == 0 || p.k1 > k_min) fail(ErrorKind::InvalidArgument, "k1 must satisfy 0 < k1 <= k_min");
  }
  if (p.k2 >= p.k1) fail(ErrorKind::InvalidArgument, "k2 must be smaller than k1");
  p.beta = ov.beta.value_or(settled.beta);
  if (!(p.beta > 0 && p.beta < 1)) fail(ErrorKind::InvalidArgument, "beta must lie in (0,1)");
  if (k < 28) out.warnings.push_back("k = " + std::to_string(k) + " is below 28; no accuracy guarantee applies");

  if (ov.t_star) {
    if (!(*ov.t_star > 0.0)) fail(ErrorKind::InvalidArgument, "t* must be positive");
    p.t_star = *ov.t_star;
    out.warnings.push_back("t* overridden; the truncation guarantee no longer applies");
  } else if (out.in_regime) {
    p.t_star = default_t_star(k, delta, p.beta);
  } else {
    p.t_star = 5.0;
    out.warnings.push_back("instance is outside the proven regime; using t* = 5");
  }
  p.L = ov.L.value_or(counting_depth(std::max<std::size_t>(k, 1), delta, depth_eps));
  if (p.L == 0) fail(ErrorKind::InvalidArgument, "depth must be positive");
  p.gamma = truncation_gamma(p.L, k, delta);
  return out;
}

}  // namespace chromatic
