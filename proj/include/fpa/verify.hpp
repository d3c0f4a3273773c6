#pragma once

#include <optional>
#include <vector>

#include "fpa/win_prob.hpp"

namespace fpa::auction {

template <class T>
struct RegretWitness {
  int bidder = -1;
  int bid = -1;        // bid index the strategy uses
  int deviation = -1;  // bid index of the profitable deviation
  T value_at{};        // value v at which the regret is measured
  T regret{};
};

template <class T>
struct VerifyReport {
  bool is_eq = true;
  T max_regret{};
  std::optional<RegretWitness<T>> worst;
  std::vector<RegretWitness<T>> witnesses;  // every violation beyond eps
};

// Equilibrium check through the jump-point characterization: for each bid b whose value
// interval (alpha(b-), alpha(b)] is non-empty, no lower bid may beat b at the interval's
// bottom value and no higher bid may beat b at its top value.  Regret versus lower bids is
// nonincreasing in v and versus higher bids nondecreasing, so these endpoint checks bound
// the regret at every value.  An empty `bidders` list means all bidders.
template <class T>
VerifyReport<T> verify_epsilon_bne(const AuctionInstance& a, const JumpProfile<T>& p, const T& eps,
                                   const std::vector<int>& bidders = {}) {
  if (auto v = profile_violation(a, p)) throw validation_error("verify: " + *v);
  std::vector<int> who = bidders;
  if (who.empty())
    for (int i = 0; i < a.n; ++i) who.push_back(i);

  VerifyReport<T> rep;
  rep.max_regret = T(0);
  int nb = a.num_bids();
  for (int i : who) {
    std::vector<T> H = win_prob_all(a, p, i);
    auto u = [&](int j, const T& v) { return (v - bid_value<T>(a, j)) * H[j]; };
    auto consider = [&](int j, int j2, const T& v) {
      T reg = u(j2, v) - u(j, v);
      if (reg <= 0) return;
      RegretWitness<T> w{i, j, j2, v, reg};
      if (!rep.worst || reg > rep.worst->regret) rep.worst = w;
      if (reg > rep.max_regret) rep.max_regret = reg;
      if (reg > eps) rep.witnesses.push_back(std::move(w));
    };
    for (int j = 0; j < nb; ++j) {
      T lo = p.prev(i, j), hi = p.at(i, j);
      if (!(lo < hi)) continue;
      for (int j2 = 0; j2 < j; ++j2) consider(j, j2, lo);
      for (int j2 = j + 1; j2 < nb; ++j2) consider(j, j2, hi);
    }
  }
  rep.is_eq = !(rep.max_regret > eps);
  return rep;
}

// Direct definition-level check on a dense value grid: at each v, compare the utility of
// the bid the profile assigns with the best utility over all bids.  Used as an oracle for
// the endpoint-based verifier; accurate to one grid step.
template <class T>
T grid_regret(const AuctionInstance& a, const JumpProfile<T>& p, int grid,
              const std::vector<int>& bidders = {}) {
  std::vector<int> who = bidders;
  if (who.empty())
    for (int i = 0; i < a.n; ++i) who.push_back(i);
  int nb = a.num_bids();
  T worst(0);
  for (int i : who) {
    std::vector<T> H = win_prob_all(a, p, i);
    for (int t = 0; t <= grid; ++t) {
      T v = T(t) / T(grid);
      int used = nb - 1;
      for (int j = 0; j < nb; ++j)
        if (!(p.at(i, j) < v)) {
          used = j;
          break;
        }
      T uv = (v - bid_value<T>(a, used)) * H[used];
      for (int j = 0; j < nb; ++j) {
        T reg = (v - bid_value<T>(a, j)) * H[j] - uv;
        if (reg > worst) worst = reg;
      }
    }
  }
  return worst;
}

}  // namespace fpa::auction
