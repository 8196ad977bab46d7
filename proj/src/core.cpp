#include "chromatic/core.hpp"

#include <cmath>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace chromatic {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Parse: return "parse";
    case ErrorKind::InvalidArgument: return "invalid_argument";
    case ErrorKind::BudgetExceeded: return "budget_exceeded";
    case ErrorKind::EmptySupport: return "empty_support";
    case ErrorKind::ZeroDenominator: return "zero_denominator";
    case ErrorKind::ResampleLimit: return "resample_limit";
    case ErrorKind::InitialInfeasible: return "initial_infeasible";
    case ErrorKind::BothHalvesInfeasible: return "both_halves_infeasible";
    case ErrorKind::VacuousSystem: return "vacuous_system";
    case ErrorKind::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

Rng child_stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

double to_double(const BigInt& n) { return n.convert_to<double>(); }

double log_of(const BigInt& n) {
  if (n <= 0) fail(ErrorKind::InvalidArgument, "log_of: non-positive argument");
  const boost::multiprecision::cpp_bin_float_50 wide(n);
  return static_cast<double>(boost::multiprecision::log(wide));
}

}  // namespace chromatic
