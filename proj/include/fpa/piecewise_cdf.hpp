#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "fpa/polynomial.hpp"
#include "fpa/rational.hpp"

namespace fpa::distributions {

struct CdfPiece {
  Rat lo, hi;
  std::vector<Rat> coeffs;  // F(z) = sum_k coeffs[k] z^k on [lo, hi], global coordinate
};

struct DensityBlock {
  Rat lo, hi;
  Rat volume;
};

// A CDF on [0,1] given as contiguous polynomial pieces with exact rational data.
// Structural shape (pieces tile [0,1]) is enforced at construction; the semantic
// conditions (normalization, continuity, monotone pieces) live in validate().
class PiecewiseCdf {
 public:
  PiecewiseCdf() = default;

  static PiecewiseCdf from_pieces(std::vector<CdfPiece> pieces) {
    if (pieces.empty()) throw validation_error("cdf: empty piece list");
    std::sort(pieces.begin(), pieces.end(),
              [](const CdfPiece& a, const CdfPiece& b) { return a.lo < b.lo; });
    PiecewiseCdf f;
    if (pieces.front().lo != 0) throw validation_error("cdf: pieces must start at 0");
    f.breaks_.push_back(Rat(0));
    for (const auto& p : pieces) {
      if (!(p.lo < p.hi)) throw validation_error("cdf: piece with empty interval");
      if (p.lo != f.breaks_.back()) throw validation_error("cdf: pieces must tile [0,1]");
      f.breaks_.push_back(p.hi);
      f.coeffs_.push_back(p.coeffs);
    }
    if (f.breaks_.back() != 1) throw validation_error("cdf: pieces must end at 1");
    f.build_cache();
    return f;
  }

  // Piecewise-constant density given as (interval, volume) blocks; gaps get zero density.
  static PiecewiseCdf from_blocks(const std::vector<DensityBlock>& blocks_in) {
    std::vector<DensityBlock> blocks = blocks_in;
    std::sort(blocks.begin(), blocks.end(),
              [](const DensityBlock& a, const DensityBlock& b) { return a.lo < b.lo; });
    std::vector<CdfPiece> pieces;
    Rat cum(0), x(0);
    for (const auto& b : blocks) {
      if (b.lo < 0 || b.hi > 1 || !(b.lo < b.hi)) throw validation_error("cdf blocks: bad interval");
      if (b.lo < x) throw validation_error("cdf blocks: overlapping blocks");
      if (!(b.volume > 0)) throw validation_error("cdf blocks: volume must be positive");
      if (b.lo > x) pieces.push_back({x, b.lo, {cum}});
      Rat h = b.volume / (b.hi - b.lo);
      pieces.push_back({b.lo, b.hi, {cum - h * b.lo, h}});
      cum += b.volume;
      x = b.hi;
    }
    if (x < 1) pieces.push_back({x, Rat(1), {cum}});
    return from_pieces(std::move(pieces));
  }

  static PiecewiseCdf uniform() { return from_blocks({{Rat(0), Rat(1), Rat(1)}}); }

  std::size_t piece_count() const { return coeffs_.size(); }
  const std::vector<Rat>& piece_coeffs(std::size_t l) const { return coeffs_.at(l); }
  std::pair<Rat, Rat> piece_interval(std::size_t l) const {
    return {breaks_.at(l), breaks_.at(l + 1)};
  }
  const std::vector<Rat>& breakpoints() const { return breaks_; }

  Rat eval(const Rat& x) const {
    if (x < 0 || x > 1) throw std::domain_error("cdf_eval: x outside [0,1]");
    return eval_piece(find_piece(x), x);
  }

  double eval(double x) const {
    if (x < 0.0 || x > 1.0) throw std::domain_error("cdf_eval: x outside [0,1]");
    std::size_t l = std::lower_bound(breaks_d_.begin() + 1, breaks_d_.end() - 1, x) -
                    (breaks_d_.begin() + 1);
    double v = 0.0;
    const auto& c = coeffs_d_[l];
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
    return v;
  }

  Rat eval_piece(std::size_t l, const Rat& x) const {
    Rat v(0);
    const auto& c = coeffs_.at(l);
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
    return v;
  }

  double eval_piece(std::size_t l, double x) const {
    double v = 0.0;
    const auto& c = coeffs_d_.at(l);
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
    return v;
  }

  std::size_t find_piece(const Rat& x) const {
    std::size_t l = std::lower_bound(breaks_.begin() + 1, breaks_.end() - 1, x) -
                    (breaks_.begin() + 1);
    return l;
  }

  int max_degree() const {
    std::size_t d = 1;
    for (const auto& c : coeffs_) d = std::max(d, c.size());
    return static_cast<int>(d) - 1;
  }

 private:
  void build_cache() {
    breaks_d_.clear();
    coeffs_d_.clear();
    for (const auto& b : breaks_) breaks_d_.push_back(to_double(b));
    for (const auto& c : coeffs_) {
      std::vector<double> cd;
      for (const auto& a : c) cd.push_back(to_double(a));
      coeffs_d_.push_back(std::move(cd));
    }
  }

  std::vector<Rat> breaks_;                 // 0 = x_0 < ... < x_K = 1
  std::vector<std::vector<Rat>> coeffs_;    // per piece, ascending powers
  std::vector<double> breaks_d_;
  std::vector<std::vector<double>> coeffs_d_;
};

inline Rat cdf_eval(const PiecewiseCdf& f, const Rat& x) { return f.eval(x); }
inline double cdf_eval(const PiecewiseCdf& f, double x) { return f.eval(x); }

struct CdfIssue {
  std::size_t piece;  // 1-based piece index
  std::string message;
};

struct CdfValidation {
  bool ok = true;
  std::vector<CdfIssue> issues;
};

inline CdfValidation validate_cdf(const PiecewiseCdf& f) {
  CdfValidation rep;
  auto flag = [&](std::size_t piece, std::string msg) {
    rep.ok = false;
    rep.issues.push_back({piece, std::move(msg)});
  };
  std::size_t K = f.piece_count();
  Rat at0 = f.eval_piece(0, Rat(0));
  if (at0 < 0) flag(1, "F(0) = " + format_rational(at0) + " < 0");
  Rat at1 = f.eval_piece(K - 1, Rat(1));
  if (at1 != 1) flag(K, "F(1) = " + format_rational(at1) + " != 1");
  for (std::size_t l = 0; l + 1 < K; ++l) {
    Rat x = f.piece_interval(l).second;
    if (f.eval_piece(l, x) != f.eval_piece(l + 1, x))
      flag(l + 1, "discontinuity at breakpoint " + format_rational(x));
  }
  for (std::size_t l = 0; l < K; ++l) {
    auto [lo, hi] = f.piece_interval(l);
    RPoly deriv = RPoly(f.piece_coeffs(l)).derivative();
    if (!nonneg_on_closed(deriv, lo, hi)) flag(l + 1, "decreasing on piece " + std::to_string(l + 1));
  }
  return rep;
}

// Max over pieces of sum_k k|a_k|, a sound slope bound on [0,1] in the global coordinate.
inline Rat lipschitz_bound(const PiecewiseCdf& f) {
  Rat best(0);
  for (std::size_t l = 0; l < f.piece_count(); ++l) {
    const auto& c = f.piece_coeffs(l);
    Rat s(0);
    for (std::size_t k = 1; k < c.size(); ++k) s += Rat(static_cast<long>(k)) * rat_abs(c[k]);
    best = std::max(best, s);
  }
  return best;
}

}  // namespace fpa::distributions
