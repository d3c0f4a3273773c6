#pragma once

#include <random>
#include <vector>

#include "fpa/auction.hpp"
#include "fpa/best_response.hpp"
#include "fpa/verify.hpp"
#include "fpa/win_prob.hpp"

namespace fpatest {

using fpa::Rat;
using fpa::auction::AuctionInstance;
using fpa::auction::JumpProfile;
using fpa::auction::Profile;
using fpa::auction::RatProfile;
using fpa::distributions::DensityBlock;
using fpa::distributions::PiecewiseCdf;

// 3 bidders, bids {0, 1/2}, common uniform priors.  The unique symmetric equilibrium has
// every jump at the positive root of a^2 + a - 1.
inline AuctionInstance golden_instance() {
  AuctionInstance a;
  a.n = 3;
  a.bids = {Rat(0), Rat(1, 2)};
  a.priors.assign(3, std::vector<std::optional<PiecewiseCdf>>(3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) a.priors[i][j] = PiecewiseCdf::uniform();
  a.build_cache();
  return a;
}

// First 60 digits of (-1+sqrt(5))/2.
inline const char* kGoldenJump60 =
    "0.618033988749894848204586834365638117720309179805762862135449";

inline AuctionInstance uniform_instance(int n, std::vector<Rat> bids) {
  AuctionInstance a;
  a.n = n;
  a.bids = std::move(bids);
  a.priors.assign(n, std::vector<std::optional<PiecewiseCdf>>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) a.priors[i][j] = PiecewiseCdf::uniform();
  a.build_cache();
  return a;
}

inline Rat random_rat01(std::mt19937_64& rng, long max_den = 64) {
  long den = 1 + static_cast<long>(rng() % max_den);
  long num = static_cast<long>(rng() % (den + 1));
  return Rat(num, den);
}

inline PiecewiseCdf random_cdf(std::mt19937_64& rng) {
  switch (rng() % 3) {
    case 0:
      return PiecewiseCdf::uniform();
    case 1: {
      // 1-3 density blocks with rational endpoints on a 1/12 lattice, volumes summing to 1.
      int nblocks = 1 + static_cast<int>(rng() % 3);
      std::vector<int> cuts;
      while (static_cast<int>(cuts.size()) < 2 * nblocks) {
        int c = static_cast<int>(rng() % 13);
        bool dup = false;
        for (int x : cuts) dup |= (x == c);
        if (!dup) cuts.push_back(c);
      }
      std::sort(cuts.begin(), cuts.end());
      std::vector<Rat> vols(nblocks);
      Rat left(1);
      for (int b = 0; b + 1 < nblocks; ++b) {
        long den = 4 + static_cast<long>(rng() % 4);
        Rat v = Rat(1 + static_cast<long>(rng() % den), 2 * den);
        if (v > left) v = left / 2;
        vols[b] = v;
        left -= v;
      }
      vols[nblocks - 1] = left;
      std::vector<DensityBlock> blocks;
      for (int b = 0; b < nblocks; ++b)
        if (vols[b] > 0) blocks.push_back({Rat(cuts[2 * b], 12), Rat(cuts[2 * b + 1], 12), vols[b]});
      return PiecewiseCdf::from_blocks(blocks);
    }
    default: {
      // F(z) = (1-w) z + w z^2, valid for any w in [0,1].
      Rat w = random_rat01(rng, 16);
      return PiecewiseCdf::from_pieces({{Rat(0), Rat(1), {Rat(0), Rat(1) - w, w}}});
    }
  }
}

inline std::vector<Rat> random_bids(std::mt19937_64& rng, int max_extra = 3) {
  std::vector<int> cuts;
  int extra = 1 + static_cast<int>(rng() % max_extra);
  while (static_cast<int>(cuts.size()) < extra) {
    int c = 1 + static_cast<int>(rng() % 10);
    bool dup = false;
    for (int x : cuts) dup |= (x == c);
    if (!dup) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<Rat> bids{Rat(0)};
  for (int c : cuts) bids.emplace_back(c, 11);
  return bids;
}

inline AuctionInstance random_instance(std::mt19937_64& rng, int n, std::vector<Rat> bids) {
  AuctionInstance a;
  a.n = n;
  a.bids = std::move(bids);
  a.priors.assign(n, std::vector<std::optional<PiecewiseCdf>>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) a.priors[i][j] = random_cdf(rng);
  a.build_cache();
  return a;
}

inline RatProfile random_rat_profile(std::mt19937_64& rng, const AuctionInstance& a) {
  RatProfile p;
  int nb = a.num_bids();
  p.jumps.assign(a.n, std::vector<Rat>(nb));
  for (int i = 0; i < a.n; ++i) {
    Rat lo(0);
    for (int j = 0; j < nb; ++j) {
      if (j + 1 < nb) lo = std::max(lo, a.bids[j + 1]);
      p.jumps[i][j] = lo + (Rat(1) - lo) * random_rat01(rng, 32);
      lo = p.jumps[i][j];
    }
    p.jumps[i][nb - 1] = Rat(1);
  }
  return p;
}

}  // namespace fpatest
