#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <vector>

#include "fpa/rational.hpp"

namespace fpa::solver_enum {

// Sparse multivariate polynomial over T with a fixed variable count.  Terms are
// keyed by exponent vectors; zero coefficients are dropped eagerly, so
// operator== is structural equality of the term maps.
template <class T>
class MultiPoly {
 public:
  using Key = std::vector<int>;

  explicit MultiPoly(int nvars = 0) : nvars_(nvars) {}

  static MultiPoly constant(int nvars, const T& c) {
    MultiPoly p(nvars);
    p.add_term(Key(nvars, 0), c);
    return p;
  }

  static MultiPoly var(int nvars, int idx) {
    MultiPoly p(nvars);
    Key k(nvars, 0);
    k.at(idx) = 1;
    p.add_term(k, T(1));
    return p;
  }

  // sum_k coeffs[k] * x_idx^k: a one-variable polynomial (e.g. a CDF piece)
  // read as a polynomial in system variable idx.
  static MultiPoly univariate(int nvars, int idx, const std::vector<T>& coeffs) {
    MultiPoly p(nvars);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      Key key(nvars, 0);
      key.at(idx) = static_cast<int>(k);
      p.add_term(key, coeffs[k]);
    }
    return p;
  }

  int nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Key, T>& terms() const { return terms_; }

  int total_degree() const {
    int d = 0;
    for (const auto& [k, c] : terms_) {
      int s = 0;
      for (int e : k) s += e;
      d = std::max(d, s);
    }
    return d;
  }

  void add_term(const Key& k, const T& c) {
    if (static_cast<int>(k.size()) != nvars_)
      throw std::invalid_argument("multipoly: exponent vector size");
    auto it = terms_.find(k);
    if (it == terms_.end()) {
      if (!(c == T(0))) terms_.emplace(k, c);
    } else {
      it->second += c;
      if (it->second == T(0)) terms_.erase(it);
    }
  }

  MultiPoly& operator+=(const MultiPoly& o) {
    check(o);
    for (const auto& [k, c] : o.terms_) add_term(k, c);
    return *this;
  }

  MultiPoly& operator-=(const MultiPoly& o) {
    check(o);
    for (const auto& [k, c] : o.terms_) add_term(k, T(-c));
    return *this;
  }

  MultiPoly& operator*=(const T& s) {
    if (s == T(0)) {
      terms_.clear();
      return *this;
    }
    for (auto& [k, c] : terms_) c = T(c * s);
    return *this;
  }

  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(MultiPoly a, const T& s) { return a *= s; }

  MultiPoly operator-() const {
    MultiPoly r = *this;
    for (auto& [k, c] : r.terms_) c = T(-c);
    return r;
  }

  MultiPoly operator*(const MultiPoly& o) const {
    check(o);
    MultiPoly r(nvars_);
    for (const auto& [ka, ca] : terms_)
      for (const auto& [kb, cb] : o.terms_) {
        Key k(nvars_);
        for (int v = 0; v < nvars_; ++v) k[v] = ka[v] + kb[v];
        r.add_term(k, T(ca * cb));
      }
    return r;
  }

  MultiPoly derivative(int v) const {
    MultiPoly r(nvars_);
    for (const auto& [k, c] : terms_) {
      if (k.at(v) == 0) continue;
      Key dk = k;
      --dk[v];
      r.add_term(dk, T(c * k[v]));
    }
    return r;
  }

  T eval(const std::vector<T>& x) const {
    if (static_cast<int>(x.size()) != nvars_) throw std::invalid_argument("multipoly: point size");
    T s(0);
    for (const auto& [k, c] : terms_) {
      T m = c;
      for (int v = 0; v < nvars_; ++v)
        for (int e = 0; e < k[v]; ++e) m = T(m * x[v]);
      s += m;
    }
    return s;
  }

  bool operator==(const MultiPoly& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }
  bool operator!=(const MultiPoly& o) const { return !(*this == o); }

 private:
  void check(const MultiPoly& o) const {
    if (nvars_ != o.nvars_) throw std::invalid_argument("multipoly: variable count mismatch");
  }

  int nvars_ = 0;
  std::map<Key, T> terms_;
};

// Double-precision view of a rational polynomial for the numeric inner loops.
struct CompiledPoly {
  int nvars = 0;
  std::vector<double> coeff;
  std::vector<std::vector<int>> expo;

  double eval(const std::vector<double>& x) const {
    double s = 0.0;
    for (std::size_t t = 0; t < coeff.size(); ++t) {
      double m = coeff[t];
      const auto& e = expo[t];
      for (int v = 0; v < nvars; ++v)
        for (int k = 0; k < e[v]; ++k) m *= x[v];
      s += m;
    }
    return s;
  }
};

inline CompiledPoly compile(const MultiPoly<Rat>& p) {
  CompiledPoly c;
  c.nvars = p.nvars();
  for (const auto& [k, v] : p.terms()) {
    c.coeff.push_back(to_double(v));
    c.expo.push_back(k);
  }
  return c;
}

}  // namespace fpa::solver_enum
