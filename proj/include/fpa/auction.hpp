#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fpa/piecewise_cdf.hpp"
#include "fpa/rational.hpp"

namespace fpa::auction {

using distributions::PiecewiseCdf;

// First-price auction with discrete bids and subjective priors: priors[i][j] is
// bidder i's belief about bidder j's value (diagonal unused).
struct AuctionInstance {
  int n = 0;
  std::vector<Rat> bids;  // sorted, bids[0] == 0, all in [0,1]
  std::vector<std::vector<std::optional<PiecewiseCdf>>> priors;
  std::vector<double> bids_d;

  int num_bids() const { return static_cast<int>(bids.size()); }
  int num_jumps() const { return num_bids() - 1; }  // free jump coordinates per bidder

  const PiecewiseCdf& prior(int i, int j) const {
    const auto& p = priors.at(i).at(j);
    if (!p) throw validation_error("instance: missing prior F_{" + std::to_string(i) + "," +
                                   std::to_string(j) + "}");
    return *p;
  }

  void build_cache() {
    bids_d.clear();
    for (const auto& b : bids) bids_d.push_back(to_double(b));
  }
};

inline void validate_instance(const AuctionInstance& a) {
  if (a.n < 2) throw validation_error("instance: need at least 2 bidders");
  if (a.bids.empty() || a.bids.front() != 0)
    throw validation_error("instance: bid list must start with 0");
  for (size_t j = 1; j < a.bids.size(); ++j)
    if (!(a.bids[j - 1] < a.bids[j])) throw validation_error("instance: bids must be strictly increasing");
  if (a.bids.back() > 1) throw validation_error("instance: bids must lie in [0,1]");
  if (static_cast<int>(a.priors.size()) != a.n) throw validation_error("instance: prior matrix shape");
  for (int i = 0; i < a.n; ++i) {
    if (static_cast<int>(a.priors[i].size()) != a.n)
      throw validation_error("instance: prior matrix shape");
    for (int j = 0; j < a.n; ++j) {
      if (i == j) continue;
      const auto& p = a.priors[i][j];
      if (!p) throw validation_error("instance: missing prior F_{" + std::to_string(i) + "," +
                                     std::to_string(j) + "}");
      auto rep = distributions::validate_cdf(*p);
      if (!rep.ok)
        throw validation_error("instance: prior F_{" + std::to_string(i) + "," + std::to_string(j) +
                               "} invalid: " + rep.issues.front().message);
    }
  }
}

// Jump-point strategy representation: jumps[i][j] = alpha_i(b_j), bidder i bids b_j on the
// value interval (alpha_i(b_{j-1}), alpha_i(b_j)], with alpha_i(b_{-1}) := 0 and the last
// coordinate pinned to 1.
template <class T>
struct JumpProfile {
  std::vector<std::vector<T>> jumps;

  const T& at(int i, int j) const { return jumps.at(i).at(j); }
  T& at(int i, int j) { return jumps.at(i).at(j); }

  // alpha_i(b_j -) = alpha_i(b_{j-1}), with the j=0 convention of 0.
  T prev(int i, int j) const { return j == 0 ? T(0) : jumps.at(i).at(j - 1); }
};

using Profile = JumpProfile<double>;
using RatProfile = JumpProfile<Rat>;

inline Profile to_double_profile(const RatProfile& p) {
  Profile q;
  for (const auto& row : p.jumps) {
    std::vector<double> r;
    for (const auto& v : row) r.push_back(to_double(v));
    q.jumps.push_back(std::move(r));
  }
  return q;
}

inline RatProfile to_rat_profile(const Profile& p) {
  RatProfile q;
  for (const auto& row : p.jumps) {
    std::vector<Rat> r;
    for (double v : row) r.push_back(rat_from_double(v));
    q.jumps.push_back(std::move(r));
  }
  return q;
}

template <class T>
T bid_value(const AuctionInstance& a, int j) {
  if constexpr (std::is_same_v<T, double>)
    return a.bids_d.at(j);
  else
    return a.bids.at(j);
}

// Checks the strategy-profile invariants for bidder i: monotone jumps in [0,1],
// alpha_i(b_{j-1}) >= b_j (no overbidding), last jump exactly 1.
template <class T>
std::optional<std::string> profile_violation(const AuctionInstance& a, const JumpProfile<T>& p,
                                             int i) {
  const auto& row = p.jumps.at(i);
  int m1 = a.num_bids();
  if (static_cast<int>(row.size()) != m1) return "bidder " + std::to_string(i) + ": jump count";
  for (int j = 0; j < m1; ++j) {
    if (row[j] < T(0) || row[j] > T(1))
      return "bidder " + std::to_string(i) + ": jump outside [0,1]";
    if (j > 0 && row[j] < row[j - 1])
      return "bidder " + std::to_string(i) + ": jumps not monotone";
    if (j + 1 < m1 && row[j] < bid_value<T>(a, j + 1))
      return "bidder " + std::to_string(i) + ": overbidding (alpha(b_" + std::to_string(j) +
             ") < b_" + std::to_string(j + 1) + ")";
  }
  if (row.back() != T(1)) return "bidder " + std::to_string(i) + ": last jump must be 1";
  return std::nullopt;
}

template <class T>
std::optional<std::string> profile_violation(const AuctionInstance& a, const JumpProfile<T>& p) {
  if (static_cast<int>(p.jumps.size()) != a.n) return std::string("profile: bidder count");
  for (int i = 0; i < a.n; ++i)
    if (auto v = profile_violation(a, p, i)) return v;
  return std::nullopt;
}

template <class T>
bool in_domain(const AuctionInstance& a, const JumpProfile<T>& p) {
  return !profile_violation(a, p).has_value();
}

// Clamp an arbitrary jump vector into the domain: sweep up enforcing the
// no-overbidding floor and monotonicity, pin the top to 1.
template <class T>
void clamp_to_domain(const AuctionInstance& a, JumpProfile<T>& p) {
  int m1 = a.num_bids();
  for (auto& row : p.jumps) {
    T lo(0);
    for (int j = 0; j < m1; ++j) {
      if (j + 1 < m1) lo = std::max(lo, bid_value<T>(a, j + 1));
      row[j] = std::min(T(1), std::max(row[j], lo));
      lo = row[j];
    }
    row[m1 - 1] = T(1);
  }
}

inline Profile random_domain_profile(const AuctionInstance& a, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Profile p;
  p.jumps.assign(a.n, std::vector<double>(a.num_bids(), 0.0));
  for (auto& row : p.jumps)
    for (auto& x : row) x = u(rng);
  for (auto& row : p.jumps) std::sort(row.begin(), row.end());
  clamp_to_domain(a, p);
  return p;
}

}  // namespace fpa::auction

namespace fpa::distributions {

// Jump-perturbation modulus: moving every jump by at most delta changes every CDF value by
// at most eps/2^{n+1}, which the tie-table aggregation turns into a <= eps utility change.
inline Rat continuity_delta(const auction::AuctionInstance& a, const Rat& eps) {
  if (!(eps > 0)) throw std::domain_error("continuity_delta: eps must be positive");
  Rat lmax(0);
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j)
      if (i != j) lmax = std::max(lmax, lipschitz_bound(a.prior(i, j)));
  Rat delta = lmax > 0 ? Rat(eps / (rat_pow2(a.n + 1) * lmax)) : Rat(1);
  return std::min(delta, Rat(1));
}

}  // namespace fpa::distributions
