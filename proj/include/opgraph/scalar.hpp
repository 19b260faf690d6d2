#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <variant>

#include <gmpxx.h>

namespace opgraph {

// Default zero tolerance for the floating backend, relative to the max norm
// of the data involved where applicable.
inline constexpr double kDefaultTol = 1e-9;

enum class Backend { kExact, kFloat };

std::string backend_name(Backend b);

// Gaussian rational: re + im*i with arbitrary-precision rational parts.
struct ExactComplex {
  mpq_class re;
  mpq_class im;
};

// A complex scalar under one of two backends: exact Gaussian rationals or
// double-precision floating complex. Arithmetic between different backends
// is rejected, never coerced.
class Scalar {
 public:
  Scalar() : value_(ExactComplex{0, 0}) {}

  static Scalar exact(mpq_class re, mpq_class im = 0);
  static Scalar exact_int(long re, long im = 0);
  static Scalar floating(std::complex<double> v);
  static Scalar floating(double re, double im = 0.0);
  static Scalar zero(Backend b);
  static Scalar one(Backend b);

  Backend backend() const {
    return std::holds_alternative<ExactComplex>(value_) ? Backend::kExact
                                                        : Backend::kFloat;
  }

  const ExactComplex& exact_value() const;
  std::complex<double> float_value() const;

  // Value as a double complex regardless of backend (exact values are
  // rounded). Used for printing and float re-evaluation.
  std::complex<double> to_complex() const;

  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator/(const Scalar& o) const;
  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);

  Scalar conj() const;
  // s * conj(s); always real and nonnegative, same backend.
  Scalar abs2() const;
  Scalar inverse() const;

  bool is_exactly_zero() const;
  bool is_one() const;
  // |s| for the float backend; exact backend returns sqrt as double.
  double abs() const;

  // Exact backend: s == 0. Float backend: |s| <= tol.
  bool is_zero(double tol) const;

  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  // Canonical lowest-terms form "p/q+r/s*i" (exact) or "a+bi" (float).
  std::string str() const;

 private:
  explicit Scalar(ExactComplex v) : value_(std::move(v)) {}
  explicit Scalar(std::complex<double> v) : value_(v) {}
  static void require_same_backend(const Scalar& a, const Scalar& b);

  std::variant<ExactComplex, std::complex<double>> value_;
};

// The graph parameter. Nonzero by construction.
struct Theta {
  Scalar value;
  bool on_unit_circle = false;

  Backend backend() const { return value.backend(); }
  Scalar inverse() const { return value.inverse(); }
};

// Builds a Theta from an already-parsed scalar, validating nonzeroness and
// deciding the unit-circle flag (exactly, or within tol on float).
Theta make_theta(const Scalar& value, double tol = kDefaultTol);

// Backend-aware comparison against a small Gaussian integer: exact equality
// on the exact backend, distance <= tol on the float backend.
bool scalar_equals_int(const Scalar& s, long re, long im, double tol);

// Accepted forms: Gaussian-rational "a/b+c/d*i" (also plain "2", "i", "-i",
// decimal literals), decimal complex "x+yi", and "exp(i*pi*p/q)" (float
// backend only).
Theta parse_theta(const std::string& text, Backend backend,
                  double tol = kDefaultTol);

// Parses a standalone complex literal under the given backend; the same
// grammar parse_theta uses minus the exp form. Throws std::invalid_argument
// on syntax errors.
Scalar parse_scalar(const std::string& text, Backend backend);

// Parses "p" or "p/q" (optionally with a decimal point or exponent) into an
// exact rational.
mpq_class parse_rational(const std::string& text);

std::string rational_str(const mpq_class& q);

}  // namespace opgraph
