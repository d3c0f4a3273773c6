#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "fpa/multipoly.hpp"
#include "fpa/verify.hpp"

namespace fpa::solver_enum {

using auction::AuctionInstance;
using auction::JumpProfile;
using auction::Profile;

// Common refinement of every prior's breakpoints.  Inside one refinement cell
// every CDF of the instance is a single polynomial piece, so a jump point
// confined to a cell makes all CDF evaluations at it polynomial.
inline std::vector<Rat> refined_breakpoints(const AuctionInstance& a) {
  std::vector<Rat> out{Rat(0), Rat(1)};
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) {
      if (i == j) continue;
      const auto& b = a.prior(i, j).breakpoints();
      out.insert(out.end(), b.begin(), b.end());
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// A guess fixes, per bidder, which jump coordinates are effective (strictly
// interior and pairwise distinct) and which refinement cell each effective
// jump lies in.  Indexing convention: jump index k in {1, ..., |B|-1} names
// the point where the strategy moves from bid b_{k-1} to b_k, i.e. profile
// coordinate alpha_i(b_{k-1}).  mu[i] is a strictly increasing subsequence of
// those indices; an empty mu[i] means bidder i bids 0 everywhere.  The
// effective jump values z_{i,1} < ... < z_{i,|mu[i]|} sit strictly between
// z_{i,0} = 0 and z_{i,m_i} = 1, and the bid used on [z_{i,j}, z_{i,j+1}) is
// b_{mu[i][j-1]} (bid 0 for j = 0).  cell[i][j-1] places z_{i,j} inside
// [breaks[c], breaks[c+1]] of the refined partition.
struct Guess {
  std::vector<std::vector<int>> mu;
  std::vector<std::vector<int>> cell;

  int effective_total() const {
    int s = 0;
    for (const auto& m : mu) s += static_cast<int>(m.size());
    return s;
  }
};

// Total number of guesses for an instance: each of the n*(|B|-1) jump
// coordinates is either dropped or kept-in-one-of-K cells independently.
inline double guess_count(const AuctionInstance& a) {
  double K = static_cast<double>(refined_breakpoints(a).size()) - 1.0;
  return std::pow(K + 1.0, static_cast<double>(a.n) * (a.num_bids() - 1));
}

// Materializes every (effective subsequence x cell assignment) pair, ordered
// by total effective-jump count (cheapest systems first), ties broken by the
// generation order, which is deterministic.
inline std::vector<Guess> enumerate_guesses(const AuctionInstance& a, long long budget = 100000) {
  double total = guess_count(a);
  if (total > static_cast<double>(budget)) {
    std::string count = total > 1e18 ? "more than 1e18"
                                     : std::to_string(static_cast<long long>(total));
    throw resource_error("enumerate_guesses: " + count + " guesses exceed budget " +
                         std::to_string(budget));
  }

  int nb = a.num_bids();
  int K = static_cast<int>(refined_breakpoints(a).size()) - 1;

  // Per-bidder options: subsequences by size then lexicographic, cells
  // lexicographic within each subsequence.
  std::vector<std::pair<std::vector<int>, std::vector<int>>> opts;
  for (int sz = 0; sz <= nb - 1; ++sz) {
    std::vector<int> pick(sz);
    for (int t = 0; t < sz; ++t) pick[t] = t + 1;
    while (true) {
      std::vector<int> cells(sz, 0);
      while (true) {
        opts.emplace_back(pick, cells);
        int t = sz - 1;
        while (t >= 0 && cells[t] == K - 1) cells[t--] = 0;
        if (t < 0) break;
        ++cells[t];
      }
      // next size-sz combination of {1, ..., nb-1}
      int t = sz - 1;
      while (t >= 0 && pick[t] == nb - 1 - (sz - 1 - t)) --t;
      if (t < 0) break;
      ++pick[t];
      for (int u = t + 1; u < sz; ++u) pick[u] = pick[u - 1] + 1;
    }
  }

  std::vector<Guess> out;
  std::vector<std::size_t> odo(a.n, 0);
  while (true) {
    Guess g;
    g.mu.resize(a.n);
    g.cell.resize(a.n);
    for (int i = 0; i < a.n; ++i) {
      g.mu[i] = opts[odo[i]].first;
      g.cell[i] = opts[odo[i]].second;
    }
    out.push_back(std::move(g));
    int i = a.n - 1;
    while (i >= 0 && odo[i] + 1 == opts.size()) odo[i--] = 0;
    if (i < 0) break;
    ++odo[i];
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Guess& x, const Guess& y) { return x.effective_total() < y.effective_total(); });
  return out;
}

struct VarRef {
  int bidder = -1;
  int idx = -1;  // effective interior index j >= 1; the variable is z_{bidder, idx}
};

// One polynomial constraint: satisfied when poly >= 0; strict ones additionally
// demand poly > 0 and are enforced numerically with a margin.
struct PolyConstraint {
  MultiPoly<Rat> poly;
  bool strict = false;
  std::string label;
};

struct PolySystem {
  int nvars = 0;
  std::vector<VarRef> vars;
  std::vector<Rat> lo, hi;  // per-variable cell bounds tightened by the bid floor
  std::vector<PolyConstraint> constraints;
  int max_degree = 0;
};

// Assembles the constraint system of a guess: strict ordering of the effective
// jumps, cell membership, bid floors, and the endpoint best-response
// inequalities (each region's bid beats every lower bid at the region's bottom
// value and every higher bid at its top value), with all win probabilities
// expanded through the tie DP using the guessed cell's piece polynomials.
inline PolySystem build_system(const AuctionInstance& a, const Guess& g) {
  int nb = a.num_bids();
  std::vector<Rat> breaks = refined_breakpoints(a);
  int K = static_cast<int>(breaks.size()) - 1;

  if (static_cast<int>(g.mu.size()) != a.n || static_cast<int>(g.cell.size()) != a.n)
    throw validation_error("build_system: guess shape does not match the instance");
  for (int i = 0; i < a.n; ++i) {
    const auto& m = g.mu[i];
    if (g.cell[i].size() != m.size())
      throw validation_error("build_system: cell count differs from effective-jump count");
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (m[j] < 1 || m[j] > nb - 1)
        throw validation_error("build_system: effective jump index out of range");
      if (j > 0 && m[j] <= m[j - 1])
        throw validation_error("build_system: effective jump indices must increase");
      if (g.cell[i][j] < 0 || g.cell[i][j] >= K)
        throw validation_error("build_system: cell index out of range");
      if (j > 0 && g.cell[i][j] < g.cell[i][j - 1])
        throw validation_error("build_system: cell order contradicts the effective subsequence");
    }
  }

  PolySystem sys;
  std::vector<std::vector<int>> var_of(a.n);  // var_of[i][j-1] for z_{i,j}
  for (int i = 0; i < a.n; ++i) {
    var_of[i].resize(g.mu[i].size());
    for (std::size_t j = 0; j < g.mu[i].size(); ++j) {
      var_of[i][j] = sys.nvars++;
      sys.vars.push_back({i, static_cast<int>(j) + 1});
      sys.lo.push_back(std::max(breaks[g.cell[i][j]], a.bids[g.mu[i][j]]));
      sys.hi.push_back(breaks[g.cell[i][j] + 1]);
    }
  }
  int nv = sys.nvars;

  auto zpoly = [&](int i, int j) -> MultiPoly<Rat> {
    int mi = static_cast<int>(g.mu[i].size()) + 1;
    if (j == 0) return MultiPoly<Rat>(nv);
    if (j == mi) return MultiPoly<Rat>::constant(nv, Rat(1));
    return MultiPoly<Rat>::var(nv, var_of[i][j - 1]);
  };

  // F_{viewer,o} evaluated at z_{o,j}: a constant at the pinned endpoints,
  // otherwise the piece polynomial of the cell guessed for that jump.
  auto cdf_at = [&](int viewer, int o, int j) -> MultiPoly<Rat> {
    const auto& F = a.prior(viewer, o);
    int mo = static_cast<int>(g.mu[o].size()) + 1;
    if (j == 0) return MultiPoly<Rat>::constant(nv, F.eval(Rat(0)));
    if (j == mo) return MultiPoly<Rat>::constant(nv, F.eval(Rat(1)));
    int c = g.cell[o][j - 1];
    Rat mid = Rat((breaks[c] + breaks[c + 1]) / 2);
    std::size_t l = F.find_piece(mid);
    return MultiPoly<Rat>::univariate(nv, var_of[o][j - 1], F.piece_coeffs(l));
  };

  // Perceived-bid pair of opponent o at full bid index k: G = P[o bids below
  // b_k], tie = P[o bids exactly b_k], as polynomials in the z variables.
  auto level = [&](int viewer, int o, int k) -> std::pair<MultiPoly<Rat>, MultiPoly<Rat>> {
    const auto& m = g.mu[o];
    int j = 0;
    while (j < static_cast<int>(m.size()) && m[j] <= k) ++j;
    int ej = j == 0 ? 0 : m[j - 1];
    if (ej == k) {  // b_k is one of o's effective bids, used on [z_j, z_{j+1})
      MultiPoly<Rat> G = cdf_at(viewer, o, j);
      MultiPoly<Rat> t = cdf_at(viewer, o, j + 1);
      t -= G;
      return {std::move(G), std::move(t)};
    }
    // Skipped bid: never played, and everything at or below the region's bid
    // stays below it, so "below" reaches the top of region j.
    return {cdf_at(viewer, o, j + 1), MultiPoly<Rat>(nv)};
  };

  // Win probability of bidder i at full bid index k through the tie DP.
  std::vector<std::vector<std::optional<MultiPoly<Rat>>>> hcache(
      a.n, std::vector<std::optional<MultiPoly<Rat>>>(nb));
  auto win_poly = [&](int i, int k) -> const MultiPoly<Rat>& {
    auto& slot = hcache[i][k];
    if (slot) return *slot;
    std::vector<MultiPoly<Rat>> row{MultiPoly<Rat>::constant(nv, Rat(1))};
    for (int o = 0; o < a.n; ++o) {
      if (o == i) continue;
      auto [G, t] = level(i, o, k);
      std::vector<MultiPoly<Rat>> next(row.size() + 1, MultiPoly<Rat>(nv));
      for (std::size_t s = 0; s < row.size(); ++s) {
        next[s] += row[s] * G;
        next[s + 1] += row[s] * t;
      }
      row = std::move(next);
    }
    MultiPoly<Rat> H(nv);
    for (std::size_t s = 0; s < row.size(); ++s) {
      row[s] *= Rat(1, static_cast<long>(s) + 1);
      H += row[s];
    }
    slot = std::move(H);
    return *slot;
  };

  auto upoly = [&](int i, int k, const MultiPoly<Rat>& value) -> MultiPoly<Rat> {
    MultiPoly<Rat> d = value;
    d -= MultiPoly<Rat>::constant(nv, a.bids[k]);
    return d * win_poly(i, k);
  };

  auto tag = [](const char* what, int i, int j) {
    return std::string(what) + " i=" + std::to_string(i) + " j=" + std::to_string(j);
  };

  for (int i = 0; i < a.n; ++i) {
    int mi = static_cast<int>(g.mu[i].size()) + 1;
    for (int j = 1; j <= mi; ++j) {
      MultiPoly<Rat> c = zpoly(i, j);
      c -= zpoly(i, j - 1);
      sys.constraints.push_back({std::move(c), true, tag("order", i, j)});
    }
    for (int j = 1; j < mi; ++j) {
      int v = var_of[i][j - 1];
      int c = g.cell[i][j - 1];
      MultiPoly<Rat> zlo = zpoly(i, j);
      zlo -= MultiPoly<Rat>::constant(nv, breaks[c]);
      sys.constraints.push_back({std::move(zlo), false, tag("cell-lo", i, j)});
      MultiPoly<Rat> zhi = MultiPoly<Rat>::constant(nv, breaks[c + 1]);
      zhi -= MultiPoly<Rat>::var(nv, v);
      sys.constraints.push_back({std::move(zhi), false, tag("cell-hi", i, j)});
      MultiPoly<Rat> fl = zpoly(i, j);
      fl -= MultiPoly<Rat>::constant(nv, a.bids[g.mu[i][j - 1]]);
      sys.constraints.push_back({std::move(fl), false, tag("floor", i, j)});
    }
    // At the bottom of each region the region's bid beats every lower bid.
    for (int j = 1; j < mi; ++j) {
      int bj = g.mu[i][j - 1];
      MultiPoly<Rat> value = zpoly(i, j);
      for (int k = 0; k < bj; ++k) {
        MultiPoly<Rat> c = upoly(i, bj, value);
        c -= upoly(i, k, value);
        sys.constraints.push_back(
            {std::move(c), false, tag("beats-lower", i, j) + " b=" + std::to_string(k)});
      }
    }
    // At the top of each region the region's bid beats every higher bid.
    for (int j = 1; j <= mi; ++j) {
      int bprev = j == 1 ? 0 : g.mu[i][j - 2];
      MultiPoly<Rat> value = zpoly(i, j);
      for (int k = bprev + 1; k < nb; ++k) {
        MultiPoly<Rat> c = upoly(i, bprev, value);
        c -= upoly(i, k, value);
        sys.constraints.push_back(
            {std::move(c), false, tag("beats-higher", i, j) + " b=" + std::to_string(k)});
      }
    }
  }
  for (const auto& c : sys.constraints) sys.max_degree = std::max(sys.max_degree, c.poly.total_degree());
  return sys;
}

struct NumericConfig {
  int restarts = 12;
  int descent_iters = 250;
  int polish_iters = 60;
  double tau = 1e-9;  // margin enforcing strict inequalities
  std::uint64_t seed = 271828;
};

struct NumericResult {
  bool feasible = false;
  std::vector<double> point;
  double residual = std::numeric_limits<double>::infinity();
};

namespace detail {

// Solves (J^T J + lambda I) d = J^T r in place; A is row-major square.
inline std::vector<double> solve_normal(std::vector<std::vector<double>> A, std::vector<double> b) {
  int n = static_cast<int>(b.size());
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::fabs(A[r][c]) > std::fabs(A[piv][c])) piv = r;
    std::swap(A[c], A[piv]);
    std::swap(b[c], b[piv]);
    if (std::fabs(A[c][c]) < 1e-300) continue;
    for (int r = c + 1; r < n; ++r) {
      double f = A[r][c] / A[c][c];
      for (int k = c; k < n; ++k) A[r][k] -= f * A[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n, 0.0);
  for (int c = n - 1; c >= 0; --c) {
    double s = b[c];
    for (int k = c + 1; k < n; ++k) s -= A[c][k] * x[k];
    x[c] = std::fabs(A[c][c]) < 1e-300 ? 0.0 : s / A[c][c];
  }
  return x;
}

}  // namespace detail

// Multi-start projected residual minimization inside the guessed boxes:
// gradient descent on the sum of squared hinge violations, then a
// Levenberg-style least-squares polish on the active constraints.  Declares
// infeasibility only once the restart budget is spent or a box is empty.
inline NumericResult solve_system_numeric(const PolySystem& s, double delta,
                                          const NumericConfig& cfg = {}) {
  if (!(delta > 0)) throw std::domain_error("solve_system_numeric: delta must be positive");
  NumericResult best;
  for (int v = 0; v < s.nvars; ++v)
    if (s.lo[v] > s.hi[v]) return best;  // empty box: infeasible immediately

  struct CC {
    CompiledPoly p;
    std::vector<CompiledPoly> grad;
    double target;
  };
  std::vector<CC> cons;
  cons.reserve(s.constraints.size());
  for (const auto& c : s.constraints) {
    CC cc;
    cc.p = compile(c.poly);
    for (int v = 0; v < s.nvars; ++v) cc.grad.push_back(compile(c.poly.derivative(v)));
    cc.target = c.strict ? cfg.tau : 0.0;
    cons.push_back(std::move(cc));
  }

  auto viol = [&](const std::vector<double>& x, std::size_t c) {
    double v = cons[c].target - cons[c].p.eval(x);
    return v > 0.0 ? v : 0.0;
  };
  auto max_viol = [&](const std::vector<double>& x) {
    double m = 0.0;
    for (std::size_t c = 0; c < cons.size(); ++c) m = std::max(m, viol(x, c));
    return m;
  };
  auto obj = [&](const std::vector<double>& x) {
    double f = 0.0;
    for (std::size_t c = 0; c < cons.size(); ++c) {
      double v = viol(x, c);
      f += v * v;
    }
    return f;
  };

  if (s.nvars == 0) {
    best.point = {};
    best.residual = max_viol({});
    best.feasible = best.residual <= delta;
    return best;
  }

  std::vector<double> lo(s.nvars), hi(s.nvars);
  for (int v = 0; v < s.nvars; ++v) {
    lo[v] = to_double(s.lo[v]);
    hi[v] = to_double(s.hi[v]);
  }
  auto clampx = [&](std::vector<double>& x) {
    for (int v = 0; v < s.nvars; ++v) x[v] = std::min(hi[v], std::max(lo[v], x[v]));
  };

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  for (int r = 0; r < std::max(1, cfg.restarts); ++r) {
    std::vector<double> x(s.nvars);
    for (int v = 0; v < s.nvars; ++v)
      x[v] = r == 0 ? 0.5 * (lo[v] + hi[v]) : lo[v] + (hi[v] - lo[v]) * u01(rng);

    for (int it = 0; it < cfg.descent_iters; ++it) {
      std::vector<double> grad(s.nvars, 0.0);
      double worst = 0.0;
      for (std::size_t c = 0; c < cons.size(); ++c) {
        double v = viol(x, c);
        if (v <= 0.0) continue;
        worst = std::max(worst, v);
        for (int k = 0; k < s.nvars; ++k) grad[k] -= 2.0 * v * cons[c].grad[k].eval(x);
      }
      if (worst <= 1e-15) break;
      double gn = 0.0;
      for (double gv : grad) gn += gv * gv;
      if (gn <= 1e-30) break;
      double f0 = obj(x);
      double t = 0.5;
      bool moved = false;
      for (int h = 0; h < 24; ++h, t *= 0.5) {
        std::vector<double> xt(x);
        for (int k = 0; k < s.nvars; ++k) xt[k] -= t * grad[k];
        clampx(xt);
        if (obj(xt) < f0) {
          x = std::move(xt);
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }

    double lambda = 1e-10;
    for (int it = 0; it < cfg.polish_iters; ++it) {
      std::vector<std::size_t> act;
      for (std::size_t c = 0; c < cons.size(); ++c)
        if (viol(x, c) > 0.0) act.push_back(c);
      if (act.empty()) break;
      std::vector<std::vector<double>> J(act.size(), std::vector<double>(s.nvars));
      std::vector<double> rres(act.size());
      for (std::size_t t = 0; t < act.size(); ++t) {
        rres[t] = viol(x, act[t]);
        for (int k = 0; k < s.nvars; ++k) J[t][k] = -cons[act[t]].grad[k].eval(x);
      }
      std::vector<std::vector<double>> A(s.nvars, std::vector<double>(s.nvars, 0.0));
      std::vector<double> b(s.nvars, 0.0);
      for (std::size_t t = 0; t < act.size(); ++t)
        for (int p = 0; p < s.nvars; ++p) {
          b[p] -= J[t][p] * rres[t];
          for (int q = 0; q < s.nvars; ++q) A[p][q] += J[t][p] * J[t][q];
        }
      for (int p = 0; p < s.nvars; ++p) A[p][p] += lambda;
      std::vector<double> dx = detail::solve_normal(A, b);
      std::vector<double> xt(x);
      for (int k = 0; k < s.nvars; ++k) xt[k] += dx[k];
      clampx(xt);
      if (obj(xt) < obj(x)) {
        x = std::move(xt);
        lambda = std::max(lambda * 0.3, 1e-12);
      } else {
        lambda *= 10.0;
        if (lambda > 1e8) break;
      }
    }

    double mv = max_viol(x);
    if (mv < best.residual) {
      best.residual = mv;
      best.point = x;
    }
    if (best.residual <= 1e-14) break;
  }
  best.feasible = best.residual <= delta;
  return best;
}

// Maps a numeric point onto an exact strategy profile: sweep each bidder's
// effective jumps upward clamping into [max(bid floor, previous jump), 1],
// then expand to full jump rows (skipped bids collapse onto the next kept
// jump, trailing coordinates pin to 1).  The result satisfies the profile
// invariants exactly and moves no coordinate further than the clamp requires.
inline Profile project_to_domain(const AuctionInstance& a, const Guess& g,
                                 const std::vector<double>& point) {
  int nb = a.num_bids();
  int need = 0;
  for (const auto& m : g.mu) need += static_cast<int>(m.size());
  if (static_cast<int>(point.size()) != need)
    throw validation_error("project_to_domain: point size does not match the guess");

  Profile p;
  p.jumps.assign(a.n, std::vector<double>(nb, 1.0));
  int v = 0;
  for (int i = 0; i < a.n; ++i) {
    const auto& m = g.mu[i];
    std::vector<double> zt(m.size() + 1);
    zt[0] = 0.0;
    for (std::size_t j = 1; j <= m.size(); ++j) {
      double floor = std::max(a.bids_d[m[j - 1]], zt[j - 1]);
      zt[j] = std::min(1.0, std::max(floor, point[v++]));
    }
    for (int k = 1; k <= nb; ++k) {
      std::size_t t = 0;
      while (t < m.size() && m[t] < k) ++t;
      p.jumps[i][k - 1] = t < m.size() ? zt[t + 1] : 1.0;
    }
  }
  return p;
}

struct GuessOutcome {
  int guess_index = -1;
  bool built = false;      // false when the guess was internally inconsistent
  bool feasible = false;   // numeric residual within delta
  bool certified = false;  // projected profile passed the equilibrium check
  double residual = std::numeric_limits<double>::infinity();
  double max_regret = std::numeric_limits<double>::infinity();
};

struct EnumSolveResult {
  bool certified = false;
  Profile profile;
  double max_regret = std::numeric_limits<double>::infinity();
  int winning_guess = -1;
  std::vector<GuessOutcome> log;
};

struct EnumConfig {
  int max_bidders = 4;
  int max_bids = 5;
  long long guess_budget = 100000;
  NumericConfig numeric;
};

// End-to-end constant-size solver: enumerate guesses cheapest first, solve
// each system numerically with delta sized so that the projection's
// perturbation costs at most half the allowed regret, project, and accept the
// first profile the equilibrium verifier certifies at eps.  When nothing
// certifies the log still carries the best residual seen for every guess.
inline EnumSolveResult solve_constant_size(const AuctionInstance& a, const Rat& eps,
                                           const EnumConfig& cfg = {}) {
  if (!(eps > 0)) throw std::domain_error("solve_constant_size: eps must be positive");
  if (a.n > cfg.max_bidders)
    throw validation_error("solve_constant_size: bidder count exceeds the enumeration cap");
  if (a.num_bids() > cfg.max_bids)
    throw validation_error("solve_constant_size: bid count exceeds the enumeration cap");

  Rat drat = distributions::continuity_delta(a, Rat(eps / 2));
  double delta = std::max(to_double(drat), 1e-12);
  double eps_d = to_double(eps);

  std::vector<Guess> guesses = enumerate_guesses(a, cfg.guess_budget);
  EnumSolveResult out;
  for (std::size_t gi = 0; gi < guesses.size(); ++gi) {
    GuessOutcome oc;
    oc.guess_index = static_cast<int>(gi);
    PolySystem sys;
    try {
      sys = build_system(a, guesses[gi]);
      oc.built = true;
    } catch (const validation_error&) {
      out.log.push_back(oc);
      continue;
    }
    NumericResult nr = solve_system_numeric(sys, delta, cfg.numeric);
    oc.feasible = nr.feasible;
    oc.residual = nr.residual;
    if (static_cast<int>(nr.point.size()) == sys.nvars &&
        nr.residual < std::numeric_limits<double>::infinity()) {
      Profile p = project_to_domain(a, guesses[gi], nr.point);
      auto rep = auction::verify_epsilon_bne(a, p, eps_d);
      oc.max_regret = rep.max_regret;
      oc.certified = rep.is_eq;
      if (rep.is_eq) {
        out.certified = true;
        out.profile = std::move(p);
        out.max_regret = rep.max_regret;
        out.winning_guess = static_cast<int>(gi);
        out.log.push_back(oc);
        break;
      }
    }
    out.log.push_back(oc);
  }
  return out;
}

}  // namespace fpa::solver_enum
