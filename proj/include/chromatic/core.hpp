#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace chromatic {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using Rng = std::mt19937_64;

enum class ErrorKind {
  Parse,
  InvalidArgument,
  BudgetExceeded,
  EmptySupport,
  ZeroDenominator,
  ResampleLimit,
  InitialInfeasible,
  BothHalvesInfeasible,
  VacuousSystem,
  NumericalFailure,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

// Independent generator for sub-task `index` of a run seeded with `seed`.
Rng child_stream(std::uint64_t seed, std::uint64_t index);

double to_double(const Rational& r);
double to_double(const BigInt& n);

// Natural logarithm of a positive integer of any size.
double log_of(const BigInt& n);

}  // namespace chromatic
