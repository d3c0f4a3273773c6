#pragma once

#include <optional>
#include <vector>

#include "fpa/win_prob.hpp"

namespace fpa::auction {

// Indifference value between bidding b_j and the higher b_j2 against win probabilities H:
// the value v where (v-b_j)H_j = (v-b_j2)H_j2.  nullopt encodes +infinity (the lower bid
// is weakly better at every value, so the switch never happens).
template <class T>
std::optional<T> switch_value(const AuctionInstance& a, const std::vector<T>& H, int j, int j2) {
  T dH = H[j2] - H[j];
  if (dH == T(0)) return std::nullopt;
  return (bid_value<T>(a, j2) * H[j2] - bid_value<T>(a, j) * H[j]) / dH;
}

// Exact best response of bidder i against the others' strategies: the jump vector realizing
// the upper envelope of the value-utility lines, via alpha(b_j) = max over lower bids of the
// min over higher bids of the pairwise switch values.  Envelope ties resolve to the lower
// bid, matching the left-continuous bid-interval convention.
template <class T>
std::vector<T> best_response(const AuctionInstance& a, const JumpProfile<T>& p, int i) {
  int nb = a.num_bids();
  std::vector<T> H = win_prob_all(a, p, i);
  std::vector<T> out(nb);
  out[nb - 1] = T(1);
  bool outer_inf = false;
  T outer(0);
  bool outer_set = false;
  for (int j = 0; j + 1 < nb; ++j) {
    // min over switch values from bid j to any higher bid; nullopt = +infinity
    bool inner_inf = true;
    T inner(0);
    for (int j2 = j + 1; j2 < nb; ++j2) {
      auto t = switch_value(a, H, j, j2);
      if (!t) continue;
      if (inner_inf || *t < inner) {
        inner = *t;
        inner_inf = false;
      }
    }
    if (inner_inf) {
      outer_inf = true;
    } else if (!outer_set || (!outer_inf && inner > outer)) {
      outer = inner;
      outer_set = true;
    }
    T lo = j == 0 ? bid_value<T>(a, 1) : std::max(bid_value<T>(a, j + 1), out[j - 1]);
    T raw = outer_inf ? T(1) : std::min(T(1), outer);
    out[j] = std::max(lo, raw);
  }
  return out;
}

}  // namespace fpa::auction
