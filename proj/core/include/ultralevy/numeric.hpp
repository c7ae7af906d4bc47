#pragma once

// Number types shared by every module, plus the library's error hierarchy.

#include <cstdint>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

namespace ultralevy {

using Natural = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;
using Real = boost::multiprecision::mpfr_float;

/// Default number of significant decimal digits for floating evaluation.
inline constexpr unsigned kDefaultDigits = 34;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A profile or parameter violates a stated invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A level beyond the profile's explicit depth was requested.
class DepthError : public Error {
 public:
  using Error::Error;
};

/// A simulation would exceed its configured event budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// A statistical estimator has no usable data.
class EstimationError : public Error {
 public:
  using Error::Error;
};

/// Parses "a/b", "a", or a finite decimal literal such as "-0.125" exactly.
Rational parse_rational(std::string_view text);

/// Canonical "num/den" (or "num" when den == 1).
std::string to_string(const Rational& r);

/// Decimal rendering with the given number of significant digits.
std::string to_decimal(const Real& x, unsigned digits);

bool is_probable_prime(std::uint64_t n);

/// Sets the working precision of Real temporaries for the lifetime of the scope.
///
/// Boost's mpfr_float keeps its default precision in process-wide state, so every
/// scope holds a process-wide recursive lock. Nested scopes on the same thread are
/// fine; scopes on different threads serialize.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned digits10);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

  unsigned digits() const { return digits_; }

 private:
  std::unique_lock<std::recursive_mutex> lock_;
  unsigned previous_;
  unsigned digits_;
};

/// Converts with the current default precision (call inside a PrecisionScope).
Real to_real(const Rational& r);

}  // namespace ultralevy
