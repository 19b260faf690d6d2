#include "opgraph/expr.hpp"

#include <cctype>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace opgraph::cli {

namespace {

[[noreturn]] void fail(size_t pos, const std::string& message) {
  throw std::invalid_argument("syntax error at column " +
                              std::to_string(pos + 1) + ": " + message);
}

constexpr long kMaxExponent = 64;

fp::FPElement generator_power(const fp::FPPresentation& pres, char sym,
                              long power) {
  fp::FPElement base = fp::fp_generator(pres, sym);
  if (power < 0) {
    if (sym == 'g') {
      if (pres.regime == fp::Regime::kClifford) {
        // g^2 = -1.
        base = fp::fp_scale(base, -Scalar::one(pres.backend()));
      } else {
        // sigma caches the coefficients of g^{-1} in the g-power basis.
        base = fp::fp_zero(pres);
        for (int k = 0; k < 4; ++k) base.coeffs[k] = pres.sigma[1][k];
      }
    }
    // x, y, z are involutions.
    power = -power;
  }
  fp::FPElement acc = fp::fp_one(pres);
  for (long k = 0; k < power; ++k) acc = fp::fp_multiply(acc, base, pres);
  return acc;
}

}  // namespace

fp::FPElement parse_element(const std::string& text,
                            const fp::FPPresentation& pres) {
  const Backend be = pres.backend();
  size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
  };

  skip();
  if (pos == text.size()) fail(pos, "empty expression");

  fp::FPElement total = fp::fp_zero(pres);
  bool first_term = true;
  while (true) {
    skip();
    if (pos == text.size()) break;

    Scalar sign = Scalar::one(be);
    if (text[pos] == '+' || text[pos] == '-') {
      if (text[pos] == '-') sign = -sign;
      ++pos;
      skip();
      if (pos == text.size()) fail(pos, "dangling sign");
    } else if (!first_term) {
      fail(pos, std::string("expected '+' or '-' before '") + text[pos] + "'");
    }

    fp::FPElement term = fp::fp_scale(fp::fp_one(pres), sign);
    bool got_factor = false;
    while (pos < text.size()) {
      skip();
      if (pos == text.size()) break;
      char c = text[pos];
      if (c == '+' || c == '-') break;
      if (c == '*') {
        if (!got_factor) fail(pos, "'*' without a left factor");
        ++pos;
        skip();
        if (pos == text.size()) fail(pos, "dangling '*'");
        c = text[pos];
      }

      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' ||
          c == 'i') {
        const size_t start = pos;
        while (pos < text.size() &&
               (std::isdigit(static_cast<unsigned char>(text[pos])) ||
                text[pos] == '/' || text[pos] == '.')) {
          ++pos;
        }
        if (pos < text.size() && text[pos] == 'i') ++pos;
        const std::string token = text.substr(start, pos - start);
        Scalar value;
        try {
          value = parse_scalar(token, be);
        } catch (const std::invalid_argument&) {
          fail(start, "bad coefficient '" + token + "'");
        }
        term = fp::fp_scale(term, value);
        got_factor = true;
        continue;
      }

      if (std::isalpha(static_cast<unsigned char>(c))) {
        if (c != 'x' && c != 'y' && c != 'z' && c != 'g') {
          throw std::invalid_argument(std::string("unknown symbol '") + c +
                                      "' at column " + std::to_string(pos + 1));
        }
        ++pos;
        long power = 1;
        if (pos < text.size() && text[pos] == '^') {
          ++pos;
          skip();
          bool negative = false;
          if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
            negative = text[pos] == '-';
            ++pos;
          }
          const size_t digits = pos;
          while (pos < text.size() &&
                 std::isdigit(static_cast<unsigned char>(text[pos]))) {
            ++pos;
          }
          if (digits == pos) fail(pos, "expected an integer exponent");
          power = std::strtol(text.substr(digits, pos - digits).c_str(),
                              nullptr, 10);
          if (negative) power = -power;
          if (power > kMaxExponent || power < -kMaxExponent) {
            fail(digits, "exponent out of range");
          }
        }
        term = fp::fp_multiply(term, generator_power(pres, c, power), pres);
        got_factor = true;
        continue;
      }

      fail(pos, std::string("unexpected character '") + c + "'");
    }
    if (!got_factor) fail(pos, "empty term");
    total = fp::fp_add(total, term);
    first_term = false;
  }
  return total;
}

}  // namespace opgraph::cli
