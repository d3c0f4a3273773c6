#pragma once

#include <algorithm>
#include <vector>

#include "fpa/rational.hpp"

namespace fpa {

// Dense univariate polynomial with rational coefficients, c[k] is the z^k coefficient.
struct RPoly {
  std::vector<Rat> c;

  RPoly() = default;
  explicit RPoly(std::vector<Rat> coeffs) : c(std::move(coeffs)) { trim(); }

  void trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }
  bool is_zero() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; }

  Rat eval(const Rat& x) const {
    Rat v(0);
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
    return v;
  }

  RPoly derivative() const {
    if (c.size() <= 1) return RPoly{};
    std::vector<Rat> d(c.size() - 1);
    for (size_t k = 1; k < c.size(); ++k) d[k - 1] = c[k] * Rat(static_cast<long>(k));
    return RPoly(std::move(d));
  }
};

inline RPoly operator+(const RPoly& a, const RPoly& b) {
  std::vector<Rat> r(std::max(a.c.size(), b.c.size()), Rat(0));
  for (size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) r[i] += b.c[i];
  return RPoly(std::move(r));
}

inline RPoly operator-(const RPoly& a, const RPoly& b) {
  std::vector<Rat> r(std::max(a.c.size(), b.c.size()), Rat(0));
  for (size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) r[i] -= b.c[i];
  return RPoly(std::move(r));
}

inline RPoly operator*(const RPoly& a, const RPoly& b) {
  if (a.is_zero() || b.is_zero()) return RPoly{};
  std::vector<Rat> r(a.c.size() + b.c.size() - 1, Rat(0));
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
  return RPoly(std::move(r));
}

inline RPoly operator*(const Rat& s, const RPoly& a) {
  std::vector<Rat> r(a.c);
  for (auto& x : r) x *= s;
  return RPoly(std::move(r));
}

// Remainder of a / b under exact rational division.
inline RPoly poly_rem(RPoly a, const RPoly& b) {
  if (b.is_zero()) throw std::domain_error("poly_rem: division by zero polynomial");
  while (!a.is_zero() && a.degree() >= b.degree()) {
    Rat q = a.c.back() / b.c.back();
    int shift = a.degree() - b.degree();
    for (size_t i = 0; i < b.c.size(); ++i) a.c[i + shift] -= q * b.c[i];
    a.c.pop_back();
    a.trim();
  }
  return a;
}

inline RPoly poly_monic(RPoly a) {
  if (a.is_zero()) return a;
  Rat lead = a.c.back();
  for (auto& x : a.c) x /= lead;
  return a;
}

inline RPoly poly_gcd(RPoly a, RPoly b) {
  a = poly_monic(std::move(a));
  b = poly_monic(std::move(b));
  while (!b.is_zero()) {
    RPoly r = poly_monic(poly_rem(a, b));
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// Signed remainder sequence s0=f, s1=g, s_{k+1} = -rem(s_{k-1}, s_k).
inline std::vector<RPoly> sturm_chain(RPoly f, RPoly g) {
  std::vector<RPoly> chain;
  chain.push_back(std::move(f));
  if (g.is_zero()) return chain;
  chain.push_back(std::move(g));
  while (!chain.back().is_zero()) {
    RPoly r = Rat(-1) * poly_rem(chain[chain.size() - 2], chain.back());
    if (r.is_zero()) break;
    chain.push_back(std::move(r));
  }
  return chain;
}

// Sign of p just to the right of a: first nonvanishing Taylor coefficient at a.
inline int sign_at_right(const RPoly& p, const Rat& a) {
  RPoly q = p;
  while (!q.is_zero()) {
    int s = rat_sign(q.eval(a));
    if (s != 0) return s;
    q = q.derivative();
  }
  return 0;
}

// Sign of p just to the left of b: k-th derivative picks up a (-1)^k factor.
inline int sign_at_left(const RPoly& p, const Rat& b) {
  RPoly q = p;
  int parity = 1;
  while (!q.is_zero()) {
    int s = rat_sign(q.eval(b));
    if (s != 0) return s * parity;
    q = q.derivative();
    parity = -parity;
  }
  return 0;
}

inline int sign_variations(const std::vector<int>& signs) {
  int var = 0, prev = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++var;
    prev = s;
  }
  return var;
}

namespace detail {
inline int chain_variation_drop(const std::vector<RPoly>& chain, const Rat& a, const Rat& b) {
  std::vector<int> sa, sb;
  sa.reserve(chain.size());
  sb.reserve(chain.size());
  for (const auto& p : chain) {
    sa.push_back(sign_at_right(p, a));
    sb.push_back(sign_at_left(p, b));
  }
  return sign_variations(sa) - sign_variations(sb);
}
}  // namespace detail

// Number of distinct real roots of p in the open interval (a, b).
inline int count_distinct_roots_open(const RPoly& p, const Rat& a, const Rat& b) {
  if (p.is_zero()) throw std::domain_error("count_distinct_roots_open: zero polynomial");
  if (!(a < b)) return 0;
  if (p.degree() == 0) return 0;
  return detail::chain_variation_drop(sturm_chain(p, p.derivative()), a, b);
}

// Sum of sign(q(x)) over the distinct real roots x of p in (a, b).
inline int tarski_query_open(const RPoly& p, const RPoly& q, const Rat& a, const Rat& b) {
  if (p.is_zero()) throw std::domain_error("tarski_query_open: zero polynomial");
  if (!(a < b) || p.degree() == 0) return 0;
  return detail::chain_variation_drop(sturm_chain(p, p.derivative() * q), a, b);
}

// Exact decision of p(z) >= 0 for all z in [a, b].  The minimum of p on [a, b] sits at an
// endpoint or at an interior critical point, so it suffices to rule out a critical point
// with negative value; that count comes from root counting plus a Tarski query.
inline bool nonneg_on_closed(const RPoly& p, const Rat& a, const Rat& b) {
  if (p.is_zero()) return true;
  if (a > b) throw std::domain_error("nonneg_on_closed: empty interval");
  if (p.eval(a) < 0 || p.eval(b) < 0) return false;
  RPoly d = p.derivative();
  if (d.is_zero()) return true;
  int critical = count_distinct_roots_open(d, a, b);
  if (critical == 0) return true;
  int query = tarski_query_open(d, p, a, b);
  RPoly g = poly_gcd(p, d);
  int shared = g.degree() >= 1 ? count_distinct_roots_open(g, a, b) : 0;
  int negative_critical = (critical - shared - query) / 2;
  return negative_critical == 0;
}

}  // namespace fpa
