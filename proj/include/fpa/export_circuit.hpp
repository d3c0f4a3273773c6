#pragma once

#include <vector>

#include "fpa/auction.hpp"
#include "fpa/circuit.hpp"

namespace fpa::brouwer {

// The circuit works on the free coordinates only: bidder i's jump at bid j < m sits at
// index i*m + j, and the pinned top jump enters as the constant 1.
template <class T>
std::vector<T> flatten_point(const AuctionInstance& a, const JumpProfile<T>& p) {
  std::vector<T> x;
  x.reserve(static_cast<std::size_t>(a.n) * a.num_jumps());
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.num_jumps(); ++j) x.push_back(p.at(i, j));
  return x;
}

template <class T>
JumpProfile<T> unflatten_point(const AuctionInstance& a, const std::vector<T>& x) {
  int m = a.num_jumps();
  JumpProfile<T> p;
  p.jumps.assign(a.n, std::vector<T>(m + 1, T(1)));
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < m; ++j) p.jumps[i][j] = x.at(i * m + j);
  return p;
}

// Unrolls one application of the fixed-point map into a straight-line program: CDF values
// by clamping into each piece and telescoping the increments, the tie-counting recurrence
// bid by bid, then gap, shift and truncation per coordinate.  Division never appears.
inline CircuitDag export_circuit(const AuctionInstance& a, std::size_t node_budget = 2000000) {
  auction::validate_instance(a);
  int m = a.num_jumps();
  int nb = a.num_bids();
  CircuitBuilder cb(node_budget);
  int one = cb.constant(Rat(1));

  // F(t) = P_1(clamp(t into piece 1)) + sum_l [P_l(clamp(t into piece l)) - P_l(left end)]
  auto cdf_at = [&](const distributions::PiecewiseCdf& F, int t) -> int {
    int acc = -1;
    for (std::size_t l = 0; l < F.piece_count(); ++l) {
      auto [lo, hi] = F.piece_interval(l);
      int cl = cb.clamp(t, cb.constant(lo), cb.constant(hi));
      int val = cb.polynomial(F.piece_coeffs(l), cl);
      if (l == 0)
        acc = val;
      else
        acc = cb.add(acc, cb.sub(val, cb.constant(F.eval_piece(l, lo))));
    }
    return acc;
  };

  for (int i = 0; i < a.n; ++i) {
    // ev[o][j] = F_{i,o}(alpha_o(b_j)); at0[o] = F_{i,o}(0)
    std::vector<std::vector<int>> ev(a.n);
    std::vector<int> at0(a.n, -1);
    for (int o = 0; o < a.n; ++o) {
      if (o == i) continue;
      const auto& F = a.prior(i, o);
      at0[o] = cb.constant(F.eval(Rat(0)));
      ev[o].assign(nb, one);
      for (int j = 0; j + 1 < nb; ++j) ev[o][j] = cdf_at(F, cb.input(o * m + j));
    }

    std::vector<int> H(nb);
    for (int j = 0; j < nb; ++j) {
      std::vector<int> row{one};
      for (int o = 0; o < a.n; ++o) {
        if (o == i) continue;
        int G = j == 0 ? at0[o] : ev[o][j - 1];
        int g = cb.sub(ev[o][j], G);
        std::vector<int> next(row.size() + 1);
        for (std::size_t k = 0; k < next.size(); ++k) {
          int acc = -1;
          if (k < row.size()) acc = cb.mul(row[k], G);
          if (k > 0) {
            int t = cb.mul(row[k - 1], g);
            acc = acc < 0 ? t : cb.add(acc, t);
          }
          next[k] = acc;
        }
        row = std::move(next);
      }
      int h = cb.constant(Rat(0));
      for (std::size_t k = 0; k < row.size(); ++k)
        h = cb.add(h, cb.mul(row[k], cb.constant(Rat(1, static_cast<int>(k) + 1))));
      H[j] = h;
    }

    int prev = -1;
    for (int j = 1; j < nb; ++j) {
      int v = cb.input(i * m + (j - 1));
      auto u = [&](int l) { return cb.mul(cb.sub(v, cb.constant(a.bids[l])), H[l]); };
      int best = u(j);
      for (int l = j + 1; l < nb; ++l) best = cb.max2(best, u(l));
      int x = cb.add(v, cb.sub(u(j - 1), best));
      int lo = cb.constant(a.bids[j]);
      if (prev >= 0) lo = cb.max2(lo, prev);
      int out = cb.min2(one, cb.max2(lo, x));
      cb.mark_output(out);
      prev = out;
    }
  }
  return cb.take();
}

}  // namespace fpa::brouwer
