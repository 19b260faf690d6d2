#include "opgraph/scalar.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace opgraph {

namespace {

const double kPi = 3.14159265358979323846264338327950288;

std::string double_str(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

std::string backend_name(Backend b) {
  return b == Backend::kExact ? "exact" : "float";
}

Scalar Scalar::exact(mpq_class re, mpq_class im) {
  re.canonicalize();
  im.canonicalize();
  return Scalar(ExactComplex{std::move(re), std::move(im)});
}

Scalar Scalar::exact_int(long re, long im) {
  return Scalar(ExactComplex{mpq_class(re), mpq_class(im)});
}

Scalar Scalar::floating(std::complex<double> v) { return Scalar(v); }

Scalar Scalar::floating(double re, double im) {
  return Scalar(std::complex<double>(re, im));
}

Scalar Scalar::zero(Backend b) {
  return b == Backend::kExact ? exact_int(0) : floating(0.0);
}

Scalar Scalar::one(Backend b) {
  return b == Backend::kExact ? exact_int(1) : floating(1.0);
}

const ExactComplex& Scalar::exact_value() const {
  if (backend() != Backend::kExact)
    throw std::invalid_argument("scalar is not on the exact backend");
  return std::get<ExactComplex>(value_);
}

std::complex<double> Scalar::float_value() const {
  if (backend() != Backend::kFloat)
    throw std::invalid_argument("scalar is not on the float backend");
  return std::get<std::complex<double>>(value_);
}

std::complex<double> Scalar::to_complex() const {
  if (backend() == Backend::kFloat) return std::get<std::complex<double>>(value_);
  const auto& v = std::get<ExactComplex>(value_);
  return {v.re.get_d(), v.im.get_d()};
}

void Scalar::require_same_backend(const Scalar& a, const Scalar& b) {
  if (a.backend() != b.backend())
    throw std::invalid_argument("scalar backend mismatch (exact vs float)");
}

Scalar Scalar::operator+(const Scalar& o) const {
  require_same_backend(*this, o);
  if (backend() == Backend::kExact) {
    const auto& a = std::get<ExactComplex>(value_);
    const auto& b = std::get<ExactComplex>(o.value_);
    return Scalar(ExactComplex{a.re + b.re, a.im + b.im});
  }
  return Scalar(std::get<std::complex<double>>(value_) +
                std::get<std::complex<double>>(o.value_));
}

Scalar Scalar::operator-(const Scalar& o) const {
  require_same_backend(*this, o);
  if (backend() == Backend::kExact) {
    const auto& a = std::get<ExactComplex>(value_);
    const auto& b = std::get<ExactComplex>(o.value_);
    return Scalar(ExactComplex{a.re - b.re, a.im - b.im});
  }
  return Scalar(std::get<std::complex<double>>(value_) -
                std::get<std::complex<double>>(o.value_));
}

Scalar Scalar::operator*(const Scalar& o) const {
  require_same_backend(*this, o);
  if (backend() == Backend::kExact) {
    const auto& a = std::get<ExactComplex>(value_);
    const auto& b = std::get<ExactComplex>(o.value_);
    return Scalar(ExactComplex{a.re * b.re - a.im * b.im,
                               a.re * b.im + a.im * b.re});
  }
  return Scalar(std::get<std::complex<double>>(value_) *
                std::get<std::complex<double>>(o.value_));
}

Scalar Scalar::operator/(const Scalar& o) const {
  return *this * o.inverse();
}

Scalar Scalar::operator-() const {
  if (backend() == Backend::kExact) {
    const auto& a = std::get<ExactComplex>(value_);
    return Scalar(ExactComplex{-a.re, -a.im});
  }
  return Scalar(-std::get<std::complex<double>>(value_));
}

Scalar& Scalar::operator+=(const Scalar& o) { return *this = *this + o; }
Scalar& Scalar::operator-=(const Scalar& o) { return *this = *this - o; }
Scalar& Scalar::operator*=(const Scalar& o) { return *this = *this * o; }

Scalar Scalar::conj() const {
  if (backend() == Backend::kExact) {
    const auto& a = std::get<ExactComplex>(value_);
    return Scalar(ExactComplex{a.re, -a.im});
  }
  return Scalar(std::conj(std::get<std::complex<double>>(value_)));
}

Scalar Scalar::abs2() const { return *this * conj(); }

Scalar Scalar::inverse() const {
  if (backend() == Backend::kExact) {
    const auto& a = std::get<ExactComplex>(value_);
    mpq_class n = a.re * a.re + a.im * a.im;
    if (n == 0) throw std::domain_error("division by zero scalar");
    return Scalar(ExactComplex{a.re / n, -a.im / n});
  }
  auto v = std::get<std::complex<double>>(value_);
  if (v == std::complex<double>(0.0, 0.0))
    throw std::domain_error("division by zero scalar");
  return Scalar(1.0 / v);
}

bool Scalar::is_exactly_zero() const {
  if (backend() == Backend::kExact) {
    const auto& a = std::get<ExactComplex>(value_);
    return a.re == 0 && a.im == 0;
  }
  return std::get<std::complex<double>>(value_) == std::complex<double>(0.0, 0.0);
}

bool Scalar::is_one() const {
  if (backend() == Backend::kExact) {
    const auto& a = std::get<ExactComplex>(value_);
    return a.re == 1 && a.im == 0;
  }
  return std::get<std::complex<double>>(value_) == std::complex<double>(1.0, 0.0);
}

double Scalar::abs() const { return std::abs(to_complex()); }

bool Scalar::is_zero(double tol) const {
  if (backend() == Backend::kExact) return is_exactly_zero();
  return std::abs(std::get<std::complex<double>>(value_)) <= tol;
}

bool Scalar::operator==(const Scalar& o) const {
  if (backend() != o.backend()) return false;
  if (backend() == Backend::kExact) {
    const auto& a = std::get<ExactComplex>(value_);
    const auto& b = std::get<ExactComplex>(o.value_);
    return a.re == b.re && a.im == b.im;
  }
  return std::get<std::complex<double>>(value_) ==
         std::get<std::complex<double>>(o.value_);
}

std::string rational_str(const mpq_class& q) { return q.get_str(); }

std::string Scalar::str() const {
  if (backend() == Backend::kFloat) {
    auto v = std::get<std::complex<double>>(value_);
    if (v.imag() == 0.0) return double_str(v.real());
    std::string s = double_str(v.real());
    s += (v.imag() < 0 ? "-" : "+");
    s += double_str(std::fabs(v.imag()));
    s += "i";
    return s;
  }
  const auto& a = std::get<ExactComplex>(value_);
  if (a.im == 0) return rational_str(a.re);
  std::string im_part;
  mpq_class im_abs = ::abs(a.im);
  if (im_abs == 1)
    im_part = "i";
  else
    im_part = rational_str(im_abs) + "*i";
  if (a.re == 0) return (a.im < 0 ? "-" : "") + im_part;
  return rational_str(a.re) + (a.im < 0 ? "-" : "+") + im_part;
}

namespace {

// "p", "p/q", "1.25", "12e-2" -> exact rational.
mpq_class rational_from_token(const std::string& tok) {
  if (tok.empty()) throw std::invalid_argument("empty number");
  auto slash = tok.find('/');
  if (slash != std::string::npos) {
    std::string num = tok.substr(0, slash);
    std::string den = tok.substr(slash + 1);
    if (num.empty() || den.empty())
      throw std::invalid_argument("malformed rational '" + tok + "'");
    mpq_class q;
    if (q.set_str(num + "/" + den, 10) != 0)
      throw std::invalid_argument("malformed rational '" + tok + "'");
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator");
    q.canonicalize();
    return q;
  }
  // Decimal or integer, optionally with exponent.
  std::string digits;
  long frac_digits = 0;
  long exponent = 0;
  size_t i = 0;
  bool neg = false;
  if (i < tok.size() && (tok[i] == '+' || tok[i] == '-')) {
    neg = tok[i] == '-';
    ++i;
  }
  bool seen_digit = false, seen_point = false;
  for (; i < tok.size(); ++i) {
    char c = tok[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits += c;
      if (seen_point) ++frac_digits;
      seen_digit = true;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else if ((c == 'e' || c == 'E') && seen_digit) {
      exponent = std::strtol(tok.c_str() + i + 1, nullptr, 10);
      std::string tail = tok.substr(i + 1);
      if (tail.empty() ||
          tail.find_first_not_of("+-0123456789") != std::string::npos)
        throw std::invalid_argument("malformed exponent in '" + tok + "'");
      break;
    } else {
      throw std::invalid_argument("malformed number '" + tok + "'");
    }
  }
  if (!seen_digit) throw std::invalid_argument("malformed number '" + tok + "'");
  mpz_class n(digits.empty() ? "0" : digits);
  mpq_class q(n);
  long pow10 = exponent - frac_digits;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(pow10)));
  if (pow10 >= 0)
    q *= mpq_class(scale);
  else
    q /= mpq_class(scale);
  if (neg) q = -q;
  q.canonicalize();
  return q;
}

struct Term {
  bool imaginary = false;
  std::string number;  // may be empty for a bare "i"
  int sign = 1;
};

// Splits "a+b*i" style input into one or two signed terms. Top-level +/- are
// separators except when they follow an exponent marker.
std::vector<Term> split_terms(const std::string& text) {
  std::vector<Term> terms;
  size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
      ++i;
  };
  skip_ws();
  while (i < text.size()) {
    Term t;
    if (text[i] == '+' || text[i] == '-') {
      t.sign = text[i] == '-' ? -1 : 1;
      ++i;
      skip_ws();
    } else if (!terms.empty()) {
      throw std::invalid_argument("expected '+' or '-' in complex literal");
    }
    std::string body;
    bool prev_exp = false;
    while (i < text.size()) {
      char c = text[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      if ((c == '+' || c == '-') && !prev_exp) break;
      prev_exp = (c == 'e' || c == 'E') && !body.empty() &&
                 std::isdigit(static_cast<unsigned char>(body.back()));
      body += c;
      ++i;
    }
    if (body.empty()) throw std::invalid_argument("dangling sign in complex literal");
    if (body.back() == 'i' || body.back() == 'I') {
      t.imaginary = true;
      body.pop_back();
      if (!body.empty() && body.back() == '*') body.pop_back();
    }
    t.number = body;
    terms.push_back(std::move(t));
    skip_ws();
  }
  if (terms.empty()) throw std::invalid_argument("empty complex literal");
  if (terms.size() > 2)
    throw std::invalid_argument("too many terms in complex literal");
  return terms;
}

}  // namespace

mpq_class parse_rational(const std::string& text) {
  std::string trimmed;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) trimmed += c;
  return rational_from_token(trimmed);
}

Scalar parse_scalar(const std::string& text, Backend backend) {
  auto terms = split_terms(text);
  bool seen_re = false, seen_im = false;
  mpq_class re = 0, im = 0;
  double fre = 0, fim = 0;
  for (const auto& t : terms) {
    if (t.imaginary) {
      if (seen_im) throw std::invalid_argument("repeated imaginary part");
      seen_im = true;
    } else {
      if (seen_re) throw std::invalid_argument("repeated real part");
      seen_re = true;
    }
    if (backend == Backend::kExact) {
      mpq_class v = t.number.empty() ? mpq_class(1) : rational_from_token(t.number);
      if (t.sign < 0) v = -v;
      (t.imaginary ? im : re) += v;
    } else {
      double v = 1.0;
      if (!t.number.empty()) {
        char* end = nullptr;
        v = std::strtod(t.number.c_str(), &end);
        if (end == nullptr || *end != '\0')
          throw std::invalid_argument("malformed number '" + t.number + "'");
      }
      if (t.sign < 0) v = -v;
      (t.imaginary ? fim : fre) += v;
    }
    if (!t.imaginary && t.number.empty())
      throw std::invalid_argument("bare sign is not a number");
  }
  if (backend == Backend::kExact) return Scalar::exact(re, im);
  return Scalar::floating(fre, fim);
}

bool scalar_equals_int(const Scalar& s, long re, long im, double tol) {
  if (s.backend() == Backend::kExact) {
    const ExactComplex& v = s.exact_value();
    return v.re == re && v.im == im;
  }
  return std::abs(s.to_complex() -
                  std::complex<double>(static_cast<double>(re),
                                       static_cast<double>(im))) <= tol;
}

Theta make_theta(const Scalar& value, double tol) {
  Theta t;
  t.value = value;
  if (value.backend() == Backend::kExact) {
    if (value.is_exactly_zero())
      throw std::invalid_argument("theta must be nonzero");
    t.on_unit_circle = value.abs2().is_one();
  } else {
    if (value.abs() <= tol) throw std::invalid_argument("theta must be nonzero");
    t.on_unit_circle = std::fabs(value.abs() - 1.0) <= tol;
  }
  return t;
}

namespace {

// "exp(i*pi*p/q)" with optional sign on i and optional "*p" / "/q".
std::complex<double> parse_exp_form(const std::string& inner) {
  size_t i = 0;
  auto skip_ws = [&] {
    while (i < inner.size() && std::isspace(static_cast<unsigned char>(inner[i])))
      ++i;
  };
  skip_ws();
  int sign = 1;
  if (i < inner.size() && (inner[i] == '+' || inner[i] == '-')) {
    sign = inner[i] == '-' ? -1 : 1;
    ++i;
    skip_ws();
  }
  if (i >= inner.size() || (inner[i] != 'i' && inner[i] != 'I'))
    throw std::invalid_argument("exp form must look like exp(i*pi*p/q)");
  ++i;
  skip_ws();
  if (i >= inner.size() || inner[i] != '*')
    throw std::invalid_argument("exp form must look like exp(i*pi*p/q)");
  ++i;
  skip_ws();
  if (inner.compare(i, 2, "pi") != 0)
    throw std::invalid_argument("exp form must look like exp(i*pi*p/q)");
  i += 2;
  skip_ws();
  mpq_class ratio = 1;
  if (i < inner.size() && inner[i] == '*') {
    ++i;
    std::string rest = inner.substr(i);
    ratio = parse_rational(rest);
    i = inner.size();
  } else if (i < inner.size() && inner[i] == '/') {
    ++i;
    std::string rest = inner.substr(i);
    mpq_class den = parse_rational(rest);
    if (den == 0) throw std::invalid_argument("zero denominator in exp form");
    ratio = mpq_class(1) / den;
    i = inner.size();
  } else if (i < inner.size()) {
    throw std::invalid_argument("exp form must look like exp(i*pi*p/q)");
  }
  double angle = sign * kPi * ratio.get_d();
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace

Theta parse_theta(const std::string& text, Backend backend, double tol) {
  std::string trimmed;
  size_t a = text.find_first_not_of(" \t");
  size_t b = text.find_last_not_of(" \t");
  if (a == std::string::npos) throw std::invalid_argument("empty theta");
  trimmed = text.substr(a, b - a + 1);

  if (trimmed.rfind("exp(", 0) == 0) {
    if (trimmed.back() != ')')
      throw std::invalid_argument("unterminated exp form");
    if (backend == Backend::kExact)
      throw std::invalid_argument("exact backend requires Gaussian-rational theta");
    std::string inner = trimmed.substr(4, trimmed.size() - 5);
    return make_theta(Scalar::floating(parse_exp_form(inner)), tol);
  }
  return make_theta(parse_scalar(trimmed, backend), tol);
}

}  // namespace opgraph
