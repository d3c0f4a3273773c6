#pragma once

#include <vector>

#include "fpa/auction.hpp"

namespace fpa::auction {

// Perceived bid-distribution pair for one opponent at one bid: G = probability the
// opponent bids strictly below, g = probability of an exact tie, both under i's prior.
template <class T>
struct PerceivedBid {
  T below;  // G_{o,b-}
  T tie;    // g_{o,b}
};

template <class T>
PerceivedBid<T> perceived_bid(const AuctionInstance& a, const JumpProfile<T>& p, int i, int o,
                              int bid_idx) {
  const auto& F = a.prior(i, o);
  T G = F.eval(p.prev(o, bid_idx));
  T g = F.eval(p.at(o, bid_idx)) - G;
  return {G, g};
}

// Tie-table DP over opponents: row[k] after processing opponents 1..l is the probability
// that all of them bid <= b with exactly k ties at b.  Returns the final row, k = 0..n-1.
template <class T>
std::vector<T> tie_table(const AuctionInstance& a, const JumpProfile<T>& p, int i, int bid_idx) {
  if (bid_idx < 0 || bid_idx >= a.num_bids()) throw std::domain_error("tie_table: bid index");
  std::vector<T> row{T(1)};
  for (int o = 0; o < a.n; ++o) {
    if (o == i) continue;
    auto [G, g] = perceived_bid(a, p, i, o, bid_idx);
    std::vector<T> next(row.size() + 1, T(0));
    for (std::size_t k = 0; k < row.size(); ++k) {
      next[k] += row[k] * G;
      next[k + 1] += row[k] * g;
    }
    row = std::move(next);
  }
  row.resize(a.n, T(0));
  return row;
}

template <class T>
T win_prob_from_row(const std::vector<T>& row) {
  T h(0);
  for (std::size_t k = 0; k < row.size(); ++k) h += row[k] / T(static_cast<int>(k) + 1);
  return h;
}

template <class T>
T win_prob(const AuctionInstance& a, const JumpProfile<T>& p, int i, int bid_idx) {
  return win_prob_from_row(tie_table(a, p, i, bid_idx));
}

// Win probabilities for bidder i at every bid, sharing CDF evaluations across bids.
template <class T>
std::vector<T> win_prob_all(const AuctionInstance& a, const JumpProfile<T>& p, int i) {
  int nb = a.num_bids();
  // evals[o][j] = F_{i,o}(alpha_o(b_j)); at0[o] = F_{i,o}(0)
  std::vector<std::vector<T>> evals(a.n);
  std::vector<T> at0(a.n, T(0));
  for (int o = 0; o < a.n; ++o) {
    if (o == i) continue;
    const auto& F = a.prior(i, o);
    at0[o] = F.eval(T(0));
    evals[o].reserve(nb);
    for (int j = 0; j < nb; ++j) evals[o].push_back(F.eval(p.at(o, j)));
  }
  std::vector<T> H(nb);
  std::vector<T> row;
  for (int j = 0; j < nb; ++j) {
    row.assign(1, T(1));
    for (int o = 0; o < a.n; ++o) {
      if (o == i) continue;
      T G = j == 0 ? at0[o] : evals[o][j - 1];
      T g = evals[o][j] - G;
      std::vector<T> next(row.size() + 1, T(0));
      for (std::size_t k = 0; k < row.size(); ++k) {
        next[k] += row[k] * G;
        next[k + 1] += row[k] * g;
      }
      row = std::move(next);
    }
    H[j] = win_prob_from_row(row);
  }
  return H;
}

// Subset-sum oracle for the DP; exponential in n on purpose.
template <class T>
T brute_force_win_prob(const AuctionInstance& a, const JumpProfile<T>& p, int i, int bid_idx) {
  if (a.n > 16) throw resource_error("brute_force_win_prob: too many bidders");
  std::vector<PerceivedBid<T>> pb;
  for (int o = 0; o < a.n; ++o)
    if (o != i) pb.push_back(perceived_bid(a, p, i, o, bid_idx));
  int nm1 = static_cast<int>(pb.size());
  T h(0);
  for (unsigned s = 0; s < (1u << nm1); ++s) {
    T term(1);
    int ties = 0;
    for (int o = 0; o < nm1; ++o) {
      if (s & (1u << o)) {
        term *= pb[o].tie;
        ++ties;
      } else {
        term *= pb[o].below;
      }
    }
    h += term / T(ties + 1);
  }
  return h;
}

template <class T>
T utility(const AuctionInstance& a, const JumpProfile<T>& p, int i, int bid_idx, const T& v) {
  return (v - bid_value<T>(a, bid_idx)) * win_prob(a, p, i, bid_idx);
}

}  // namespace fpa::auction
