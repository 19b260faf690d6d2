#include "opgraph/exactpoly.hpp"

#include <algorithm>
#include <stdexcept>

#include "opgraph/subspace.hpp"

namespace opgraph {

namespace {

// ---- Z[i] arithmetic ------------------------------------------------------

struct GInt {
  mpz_class re, im;
};

bool gzero(const GInt& a) { return a.re == 0 && a.im == 0; }

GInt gmul(const GInt& a, const GInt& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

GInt gconj(const GInt& a) { return {a.re, -a.im}; }

mpz_class gnorm(const GInt& a) { return a.re * a.re + a.im * a.im; }

// Nearest-integer rounding of p/q.
mpz_class round_quotient(const mpz_class& p, const mpz_class& q) {
  mpz_class r;
  mpz_class two_p = 2 * p + q;
  mpz_fdiv_q(r.get_mpz_t(), two_p.get_mpz_t(), mpz_class(2 * q).get_mpz_t());
  return r;
}

// d | a in Z[i]?
bool gdivides(const GInt& d, const GInt& a) {
  mpz_class n = gnorm(d);
  if (n == 0) return gzero(a);
  GInt t = gmul(a, gconj(d));
  return mpz_divisible_p(t.re.get_mpz_t(), n.get_mpz_t()) &&
         mpz_divisible_p(t.im.get_mpz_t(), n.get_mpz_t());
}

GInt gdiv_exact(const GInt& a, const GInt& d) {
  mpz_class n = gnorm(d);
  GInt t = gmul(a, gconj(d));
  return {t.re / n, t.im / n};
}

GInt ggcd(GInt a, GInt b) {
  while (!gzero(b)) {
    mpz_class n = gnorm(b);
    GInt t = gmul(a, gconj(b));
    GInt q{round_quotient(t.re, n), round_quotient(t.im, n)};
    GInt r{a.re - (q.re * b.re - q.im * b.im),
           a.im - (q.re * b.im + q.im * b.re)};
    a = b;
    b = r;
  }
  return a;
}

// ---- integer factorization of norms ---------------------------------------

struct NormFactors {
  std::vector<std::pair<mpz_class, int>> primes;
  bool complete = true;
};

NormFactors factor_positive(mpz_class n) {
  NormFactors out;
  if (n <= 1) return out;
  auto strip = [&](const mpz_class& p) {
    int e = 0;
    while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
      n /= p;
      ++e;
    }
    if (e > 0) out.primes.emplace_back(p, e);
  };
  strip(2);
  mpz_class p = 3;
  while (p <= 1000000 && p * p <= n) {
    strip(p);
    p += 2;
  }
  if (n > 1) {
    if (mpz_probab_prime_p(n.get_mpz_t(), 30)) {
      out.primes.emplace_back(n, 1);
    } else {
      out.complete = false;
    }
  }
  return out;
}

// A Gaussian prime above the rational prime p.
GInt prime_above(const mpz_class& p) {
  if (p == 2) return {1, 1};
  if (mpz_class(p % 4) == 3) return {p, 0};
  // p = 1 mod 4: find z with z^2 = -1 mod p, then gcd(p, z + i).
  mpz_class exp = (p - 1) / 4;
  for (mpz_class c = 2;; ++c) {
    mpz_class z;
    mpz_powm(z.get_mpz_t(), c.get_mpz_t(), exp.get_mpz_t(), p.get_mpz_t());
    mpz_class z2 = (z * z) % p;
    if (z2 == p - 1) {
      GInt g = ggcd(GInt{p, 0}, GInt{z, 1});
      return g;
    }
  }
}

struct GaussianFactors {
  std::vector<std::pair<GInt, int>> primes;
  bool complete = true;
};

GaussianFactors gaussian_factors(const GInt& g) {
  GaussianFactors out;
  mpz_class n = gnorm(g);
  NormFactors nf = factor_positive(n);
  out.complete = nf.complete;
  GInt rest = g;
  for (const auto& [p, e] : nf.primes) {
    (void)e;
    std::vector<GInt> candidates;
    GInt pi = prime_above(p);
    candidates.push_back(pi);
    if (p != 2 && mpz_class(p % 4) == 1) candidates.push_back(gconj(pi));
    for (const GInt& q : candidates) {
      int mult = 0;
      while (gdivides(q, rest)) {
        rest = gdiv_exact(rest, q);
        ++mult;
      }
      if (mult > 0) out.primes.emplace_back(q, mult);
    }
  }
  return out;
}

std::vector<GInt> divisors_of(const GInt& g, bool* enum_ok) {
  std::vector<GInt> divs{GInt{1, 0}};
  GaussianFactors gf = gaussian_factors(g);
  if (!gf.complete) *enum_ok = false;
  for (const auto& [pi, e] : gf.primes) {
    std::vector<GInt> next;
    for (const GInt& d : divs) {
      GInt cur = d;
      next.push_back(cur);
      for (int k = 0; k < e; ++k) {
        cur = gmul(cur, pi);
        next.push_back(cur);
      }
    }
    divs = std::move(next);
    if (divs.size() > 20000) {
      *enum_ok = false;
      break;
    }
  }
  return divs;
}

// ---- rational square roots -------------------------------------------------

std::optional<mpq_class> rational_sqrt(const mpq_class& q) {
  if (q < 0) return std::nullopt;
  mpz_class num = q.get_num(), den = q.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) ||
      !mpz_perfect_square_p(den.get_mpz_t())) {
    return std::nullopt;
  }
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  mpq_class r(rn, rd);
  r.canonicalize();
  return r;
}

Scalar scalar_from_gint(const GInt& g) {
  return Scalar::exact(mpq_class(g.re), mpq_class(g.im));
}

bool scalar_in(const std::vector<Scalar>& xs, const Scalar& s) {
  return std::any_of(xs.begin(), xs.end(),
                     [&](const Scalar& x) { return x == s; });
}

std::vector<Scalar> poly_deflate(const std::vector<Scalar>& c,
                                 const Scalar& root) {
  // c has degree d >= 1; returns the quotient by (t - root).
  const size_t d = c.size() - 1;
  std::vector<Scalar> q(d, Scalar::zero(Backend::kExact));
  q[d - 1] = c[d];
  for (size_t k = d - 1; k >= 1; --k) q[k - 1] = c[k] + root * q[k];
  return q;
}

int true_degree(const std::vector<Scalar>& c) {
  for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k) {
    if (!c[k].is_exactly_zero()) return k;
  }
  return -1;
}

}  // namespace

int Poly::degree() const { return true_degree(coeff); }

Scalar Poly::eval(const Scalar& t) const {
  Scalar acc = Scalar::zero(backend);
  for (int k = static_cast<int>(coeff.size()) - 1; k >= 0; --k) {
    acc = acc * t + coeff[k];
  }
  return acc;
}

std::string Poly::str(const std::string& var) const {
  const int d = degree();
  if (d < 0) return "0";
  std::string out;
  for (int k = d; k >= 0; --k) {
    const Scalar& c = coeff[k];
    if (c.is_exactly_zero()) continue;
    Scalar disp = c;
    std::string sign;
    if (out.empty()) {
      sign = "";
    } else {
      sign = " + ";
    }
    std::string cs = disp.str();
    if (!out.empty() && !cs.empty() && cs[0] == '-') {
      sign = " - ";
      cs = (-disp).str();
    }
    bool unit = disp.is_one() || (-disp).is_one();
    std::string term;
    if (k == 0) {
      term = cs;
    } else {
      std::string power = (k == 1) ? var : var + "^" + std::to_string(k);
      if (unit) {
        term = power;
        if (out.empty() && (-disp).is_one()) term = "-" + term;
      } else {
        bool needs_parens = cs.find('+') != std::string::npos ||
                            cs.find('-', 1) != std::string::npos;
        term = (needs_parens ? "(" + cs + ")" : cs) + "*" + power;
      }
    }
    out += sign + term;
  }
  return out;
}

Poly minimal_polynomial(const CMatrix& m, double tol) {
  if (!m.is_square()) {
    throw std::invalid_argument("minimal polynomial requires a square matrix");
  }
  const int n = m.rows();
  RowSpan powers(n * n, m.backend(), tol, true);
  CMatrix p = CMatrix::identity(n, m.backend());
  for (int k = 0; k <= n; ++k) {
    if (!powers.add(p.flatten())) {
      ScalarVec combo = powers.represent(p.flatten());
      Poly out;
      out.backend = m.backend();
      out.coeff.assign(k + 1, Scalar::zero(m.backend()));
      for (int j = 0; j < k; ++j) out.coeff[j] = -combo[j];
      out.coeff[k] = Scalar::one(m.backend());
      return out;
    }
    p = p * m;
  }
  throw std::runtime_error("minimal polynomial search exceeded matrix order");
}

std::optional<Scalar> exact_sqrt(const Scalar& s) {
  if (s.backend() != Backend::kExact) {
    throw std::invalid_argument("exact_sqrt requires the exact backend");
  }
  const ExactComplex& v = s.exact_value();
  if (v.im == 0) {
    if (v.re == 0) return Scalar::exact_int(0);
    if (v.re > 0) {
      auto r = rational_sqrt(v.re);
      if (!r) return std::nullopt;
      return Scalar::exact(*r);
    }
    auto r = rational_sqrt(mpq_class(-v.re));
    if (!r) return std::nullopt;
    return Scalar::exact(mpq_class(0), *r);
  }
  auto n = rational_sqrt(v.re * v.re + v.im * v.im);
  if (!n) return std::nullopt;
  auto x = rational_sqrt((v.re + *n) / 2);
  if (!x || *x == 0) return std::nullopt;
  mpq_class y = v.im / (2 * (*x));
  return Scalar::exact(*x, y);
}

RootSearch gaussian_rational_roots(const Poly& p) {
  if (p.backend != Backend::kExact) {
    throw std::invalid_argument("exact root search requires the exact backend");
  }
  std::vector<Scalar> cur = p.coeff;
  if (true_degree(cur) < 0) {
    throw std::invalid_argument("zero polynomial has no finite root set");
  }
  cur.resize(true_degree(cur) + 1, Scalar::zero(Backend::kExact));

  RootSearch out;
  const Scalar kUnits[4] = {Scalar::exact_int(1), Scalar::exact_int(0, 1),
                            Scalar::exact_int(-1), Scalar::exact_int(0, -1)};

  auto add_root = [&](const Scalar& r) {
    if (!scalar_in(out.roots, r)) out.roots.push_back(r);
  };

  while (true) {
    int d = true_degree(cur);
    cur.resize(d + 1, Scalar::zero(Backend::kExact));
    if (d <= 0) {
      out.complete = true;
      return out;
    }
    if (d == 1) {
      add_root(-(cur[0] / cur[1]));
      out.complete = true;
      return out;
    }
    if (cur[0].is_exactly_zero()) {
      add_root(Scalar::exact_int(0));
      cur.erase(cur.begin());
      continue;
    }
    if (d == 2) {
      Scalar disc = cur[1] * cur[1] - Scalar::exact_int(4) * cur[2] * cur[0];
      auto s = exact_sqrt(disc);
      if (!s) return out;
      Scalar two_a = Scalar::exact_int(2) * cur[2];
      add_root((-cur[1] + *s) / two_a);
      add_root((-cur[1] - *s) / two_a);
      out.complete = true;
      return out;
    }

    // Degree three and above: divisor search over Z[i] after clearing
    // denominators.
    mpz_class lcm(1);
    for (const Scalar& c : cur) {
      const ExactComplex& v = c.exact_value();
      mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), v.re.get_den().get_mpz_t());
      mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), v.im.get_den().get_mpz_t());
    }
    auto as_gint = [&](const Scalar& c) {
      const ExactComplex& v = c.exact_value();
      mpq_class re = v.re * lcm, im = v.im * lcm;
      return GInt{re.get_num(), im.get_num()};
    };
    bool enum_ok = true;
    std::vector<GInt> nums = divisors_of(as_gint(cur[0]), &enum_ok);
    std::vector<GInt> dens = divisors_of(as_gint(cur[d]), &enum_ok);

    Poly probe{Backend::kExact, cur};
    std::optional<Scalar> found;
    for (const GInt& u : nums) {
      for (const GInt& v : dens) {
        Scalar base = scalar_from_gint(u) / scalar_from_gint(v);
        for (const Scalar& unit : kUnits) {
          Scalar cand = base * unit;
          if (probe.eval(cand).is_exactly_zero()) {
            found = cand;
            break;
          }
        }
        if (found) break;
      }
      if (found) break;
    }
    if (!found) {
      // No Q(i) root among the candidates; with a full enumeration that is
      // a proof this factor has no linear part.
      out.complete = false;
      return out;
    }
    add_root(*found);
    cur = poly_deflate(cur, *found);
  }
}

}  // namespace opgraph
