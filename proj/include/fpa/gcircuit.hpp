#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fpa/rational.hpp"

namespace fpa::gcircuit {

// Gate universe for circuits whose node values live in [0,1].  Arithmetic that
// could leave the interval is truncated back into it (Plus, Minus, Times2).
enum class GateType {
  One,        // constant 1
  Plus,       // trunc(x + y)
  Minus,      // trunc(x - y)
  Comp,       // 1 - x
  Times2,     // trunc(2x)
  Mul,        // x * y
  Square,     // x^2
  Phi,        // (x+1)(y+1)/4
  Copy,       // x
  Half,       // x/2
  TimesZeta,  // zeta * x
  Inv,        // -1 + 4/(2+x)
  Max,        // max(x, y)
  Min,        // min(x, y)
  ConstZeta,  // constant zeta
};

constexpr GateType kAllGateTypes[] = {
    GateType::One,  GateType::Plus,      GateType::Minus, GateType::Comp,
    GateType::Times2, GateType::Mul,     GateType::Square, GateType::Phi,
    GateType::Copy, GateType::Half,      GateType::TimesZeta, GateType::Inv,
    GateType::Max,  GateType::Min,       GateType::ConstZeta,
};

inline int gate_arity(GateType t) {
  switch (t) {
    case GateType::One:
    case GateType::ConstZeta: return 0;
    case GateType::Comp:
    case GateType::Times2:
    case GateType::Square:
    case GateType::Copy:
    case GateType::Half:
    case GateType::TimesZeta:
    case GateType::Inv: return 1;
    default: return 2;
  }
}

inline bool gate_has_param(GateType t) {
  return t == GateType::TimesZeta || t == GateType::ConstZeta;
}

inline const char* gate_name(GateType t) {
  switch (t) {
    case GateType::One: return "ONE";
    case GateType::Plus: return "PLUS";
    case GateType::Minus: return "MINUS";
    case GateType::Comp: return "COMP";
    case GateType::Times2: return "TIMES2";
    case GateType::Mul: return "MUL";
    case GateType::Square: return "SQUARE";
    case GateType::Phi: return "PHI";
    case GateType::Copy: return "COPY";
    case GateType::Half: return "HALF";
    case GateType::TimesZeta: return "TIMESZETA";
    case GateType::Inv: return "INV";
    case GateType::Max: return "MAX";
    case GateType::Min: return "MIN";
    case GateType::ConstZeta: return "CONST";
  }
  return "?";
}

inline std::optional<GateType> gate_from_name(const std::string& s) {
  for (GateType t : kAllGateTypes)
    if (s == gate_name(t)) return t;
  return std::nullopt;
}

// Gate i computes a function of the values at nodes j (and k for binary
// types).  Nullary gates use neither; unary gates ignore k.
struct Gate {
  GateType type = GateType::One;
  int j = -1;
  int k = -1;
  Rat zeta = Rat(0);
};

struct GeneralizedCircuit {
  std::vector<Gate> gates;
  // Declared universe; empty means unrestricted.
  std::vector<GateType> gate_set;

  int size() const { return static_cast<int>(gates.size()); }
};

inline void validate_circuit(const GeneralizedCircuit& c) {
  auto fail = [](int i, const std::string& what) {
    throw validation_error("gate " + std::to_string(i) + ": " + what);
  };
  int nu = c.size();
  for (int i = 0; i < nu; ++i) {
    const Gate& g = c.gates[i];
    int arity = gate_arity(g.type);
    if (arity >= 1) {
      if (g.j < 0 || g.j >= nu) fail(i, "input j out of range");
      if (g.j == i) fail(i, "gate reads its own output");
    }
    if (arity == 2) {
      if (g.k < 0 || g.k >= nu) fail(i, "input k out of range");
      if (g.k == i) fail(i, "gate reads its own output");
      if (g.k == g.j) fail(i, "binary gate needs two distinct inputs");
    }
    if (gate_has_param(g.type) && (g.zeta < 0 || g.zeta > 1))
      fail(i, "zeta outside [0,1]");
    if (!c.gate_set.empty() &&
        std::find(c.gate_set.begin(), c.gate_set.end(), g.type) == c.gate_set.end())
      fail(i, std::string("type ") + gate_name(g.type) + " not in declared gate set");
  }
}

namespace detail {
template <class T>
T rat_as(const Rat& r) {
  if constexpr (std::is_same_v<T, double>)
    return to_double(r);
  else
    return T(r);
}

template <class T>
T trunc01(const T& x) {
  if (x < T(0)) return T(0);
  if (x > T(1)) return T(1);
  return x;
}
}  // namespace detail

template <class T>
T gate_eval(GateType t, const std::vector<T>& args, const Rat& zeta = Rat(0)) {
  if (static_cast<int>(args.size()) != gate_arity(t))
    throw std::invalid_argument(std::string("gate_eval: ") + gate_name(t) + " takes " +
                                std::to_string(gate_arity(t)) + " inputs");
  using detail::rat_as;
  using detail::trunc01;
  switch (t) {
    case GateType::One: return T(1);
    case GateType::Plus: return trunc01(T(args[0] + args[1]));
    case GateType::Minus: return trunc01(T(args[0] - args[1]));
    case GateType::Comp: return T(1) - args[0];
    case GateType::Times2: return trunc01(T(args[0] + args[0]));
    case GateType::Mul: return args[0] * args[1];
    case GateType::Square: return args[0] * args[0];
    case GateType::Phi: return (args[0] + T(1)) * (args[1] + T(1)) / T(4);
    case GateType::Copy: return args[0];
    case GateType::Half: return args[0] / T(2);
    case GateType::TimesZeta: return rat_as<T>(zeta) * args[0];
    case GateType::Inv: return T(4) / (T(2) + args[0]) - T(1);
    case GateType::Max: return std::max(args[0], args[1]);
    case GateType::Min: return std::min(args[0], args[1]);
    case GateType::ConstZeta: return rat_as<T>(zeta);
  }
  throw std::invalid_argument("gate_eval: unknown type");
}

template <class T>
T gate_eval(GateType t, const T& x) {
  return gate_eval(t, std::vector<T>{x});
}

template <class T>
T gate_eval(GateType t, const T& x, const T& y) {
  return gate_eval(t, std::vector<T>{x, y});
}

// Target value of gate i under the node values v.
template <class T>
T eval_gate(const GeneralizedCircuit& c, int i, const std::vector<T>& v) {
  const Gate& g = c.gates[i];
  std::vector<T> args;
  int arity = gate_arity(g.type);
  if (arity >= 1) args.push_back(v[g.j]);
  if (arity == 2) args.push_back(v[g.k]);
  return gate_eval(g.type, args, g.zeta);
}

namespace detail {
// Allocation-free double kernel for the solvers' inner loops.
struct DGate {
  GateType t;
  int j, k;
  double zeta;
};

inline std::vector<DGate> compile_gates(const GeneralizedCircuit& c) {
  std::vector<DGate> out;
  out.reserve(c.gates.size());
  for (const Gate& g : c.gates) out.push_back({g.type, g.j, g.k, to_double(g.zeta)});
  return out;
}

inline double eval_dgate(const DGate& g, const std::vector<double>& v) {
  auto clip = [](double x) { return x < 0 ? 0.0 : (x > 1 ? 1.0 : x); };
  switch (g.t) {
    case GateType::One: return 1.0;
    case GateType::Plus: return clip(v[g.j] + v[g.k]);
    case GateType::Minus: return clip(v[g.j] - v[g.k]);
    case GateType::Comp: return 1.0 - v[g.j];
    case GateType::Times2: return clip(2.0 * v[g.j]);
    case GateType::Mul: return v[g.j] * v[g.k];
    case GateType::Square: return v[g.j] * v[g.j];
    case GateType::Phi: return (v[g.j] + 1.0) * (v[g.k] + 1.0) / 4.0;
    case GateType::Copy: return v[g.j];
    case GateType::Half: return v[g.j] / 2.0;
    case GateType::TimesZeta: return g.zeta * v[g.j];
    case GateType::Inv: return 4.0 / (2.0 + v[g.j]) - 1.0;
    case GateType::Max: return std::max(v[g.j], v[g.k]);
    case GateType::Min: return std::min(v[g.j], v[g.k]);
    case GateType::ConstZeta: return g.zeta;
  }
  return 0.0;
}
}  // namespace detail

template <class T>
struct CheckReport {
  bool satisfied = true;
  T max_violation = T(0);
  std::vector<T> violations;
  int worst_gate = -1;
};

template <class T>
CheckReport<T> check_assignment(const GeneralizedCircuit& c, const std::vector<T>& v,
                                const T& eps) {
  validate_circuit(c);
  if (static_cast<int>(v.size()) != c.size())
    throw validation_error("assignment must cover every gate");
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] < T(0) || v[i] > T(1))
      throw validation_error("assignment value " + std::to_string(i) + " outside [0,1]");

  CheckReport<T> rep;
  rep.violations.reserve(v.size());
  for (int i = 0; i < c.size(); ++i) {
    T target = eval_gate(c, i, v);
    T d = v[i] - target;
    if (d < T(0)) d = -d;
    rep.violations.push_back(d);
    if (d > rep.max_violation) {
      rep.max_violation = d;
      rep.worst_gate = i;
    }
  }
  rep.satisfied = !(rep.max_violation > eps);
  return rep;
}

struct BruteForceResult {
  std::vector<double> assignment;
  double violation = 0;
};

// Exhaustive scan of the grid {0, h, 2h, ..., 1}^nu for the assignment with the
// smallest maximum violation.  Intended as an oracle for desk-size circuits.
inline BruteForceResult brute_force_solve(const GeneralizedCircuit& c, const Rat& h) {
  validate_circuit(c);
  if (h <= 0 || h > 1) throw std::domain_error("brute_force_solve: need 0 < h <= 1");
  int nu = c.size();
  if (nu == 0) return {};

  long steps = static_cast<long>(to_double(Rat(1) / h) + 0.5);
  if (steps < 1) steps = 1;
  double points = std::pow(static_cast<double>(steps + 1), nu);
  constexpr double kPointBudget = 1.2e8;
  if (points > kPointBudget)
    throw resource_error("brute_force_solve: grid has ~" + std::to_string(points) +
                         " points, budget is " + std::to_string(kPointBudget));

  std::vector<double> grid(steps + 1);
  for (long s = 0; s <= steps; ++s) grid[s] = static_cast<double>(s) / steps;

  auto gates = detail::compile_gates(c);
  std::vector<long> idx(nu, 0);
  std::vector<double> v(nu, 0.0), best;
  double best_viol = std::numeric_limits<double>::infinity();
  while (true) {
    double viol = 0;
    for (int i = 0; i < nu && viol < best_viol; ++i) {
      double d = std::abs(v[i] - detail::eval_dgate(gates[i], v));
      if (d > viol) viol = d;
    }
    if (viol < best_viol) {
      best_viol = viol;
      best = v;
      if (best_viol == 0) break;
    }
    int pos = nu - 1;
    while (pos >= 0 && idx[pos] == steps) {
      idx[pos] = 0;
      v[pos] = grid[0];
      --pos;
    }
    if (pos < 0) break;
    ++idx[pos];
    v[pos] = grid[idx[pos]];
  }
  return {best, best_viol};
}

struct IterateConfig {
  double damping = 0.5;
  long max_iters = 100000;
  int restarts = 8;
  std::uint64_t seed = 20240501;
};

struct IterateResult {
  std::vector<double> assignment;
  double max_violation = 0;
  bool satisfied = false;
  long iterations = 0;
};

namespace detail {
// Iterative Tarjan; returns strongly connected components in dependency order
// (every component is listed after the components it reads from).
inline std::vector<std::vector<int>> scc_components(const GeneralizedCircuit& c) {
  int n = c.size();
  std::vector<std::vector<int>> deps(n);
  for (int i = 0; i < n; ++i) {
    const Gate& g = c.gates[i];
    int arity = gate_arity(g.type);
    if (arity >= 1) deps[i].push_back(g.j);
    if (arity == 2) deps[i].push_back(g.k);
  }

  std::vector<int> index(n, -1), low(n, 0), stack;
  std::vector<char> on_stack(n, 0);
  std::vector<std::vector<int>> comps;
  int next_index = 0;

  struct Frame {
    int node;
    std::size_t child;
  };
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.child < deps[f.node].size()) {
        int w = deps[f.node][f.child++];
        if (index[w] == -1) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.node] = std::min(low[f.node], index[w]);
        }
      } else {
        int node = f.node;
        call.pop_back();
        if (low[node] == index[node]) {
          std::vector<int> comp;
          while (true) {
            int w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            comp.push_back(w);
            if (w == node) break;
          }
          comps.push_back(std::move(comp));
        }
        if (!call.empty()) low[call.back().node] = std::min(low[call.back().node], low[node]);
      }
    }
  }
  return comps;
}
}  // namespace detail

// Damped fixed-point iteration of the map x_i -> gate_i(x).  Acyclic regions
// are evaluated exactly in dependency order; each cycle is iterated with
// restarts, polished well below eps so the final check passes with margin.
// Exhausting the budget returns the best assignment found, unsatisfied.
inline IterateResult iterate_solve(const GeneralizedCircuit& c, double eps,
                                   const IterateConfig& cfg = {}) {
  validate_circuit(c);
  if (!(eps > 0)) throw std::domain_error("iterate_solve: eps must be positive");

  int n = c.size();
  IterateResult res;
  res.assignment.assign(n, 0.0);
  std::vector<double>& v = res.assignment;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto gates = detail::compile_gates(c);
  double target_res = eps / 16;
  long per_restart = std::max<long>(1, cfg.max_iters / std::max(1, cfg.restarts));

  for (const auto& comp : detail::scc_components(c)) {
    if (comp.size() == 1) {
      int i = comp[0];
      v[i] = detail::eval_dgate(gates[i], v);
      continue;
    }
    std::vector<double> best_local;
    double best_res = std::numeric_limits<double>::infinity();
    std::vector<double> f(comp.size());
    bool done = false;
    for (int r = 0; r < std::max(1, cfg.restarts) && !done; ++r) {
      for (int i : comp) v[i] = (r == 0) ? 0.0 : unit(rng);
      for (long it = 0; it < per_restart; ++it) {
        double local = 0;
        for (std::size_t s = 0; s < comp.size(); ++s) {
          f[s] = detail::eval_dgate(gates[comp[s]], v);
          local = std::max(local, std::abs(f[s] - v[comp[s]]));
        }
        if (local < best_res) {
          best_res = local;
          best_local.clear();
          for (int i : comp) best_local.push_back(v[i]);
        }
        if (local <= target_res) {
          done = true;
          break;
        }
        for (std::size_t s = 0; s < comp.size(); ++s)
          v[comp[s]] += cfg.damping * (f[s] - v[comp[s]]);
        ++res.iterations;
      }
    }
    for (std::size_t s = 0; s < comp.size(); ++s) v[comp[s]] = best_local[s];
  }

  auto rep = check_assignment<double>(c, v, eps);
  res.max_violation = rep.max_violation;
  res.satisfied = rep.satisfied;
  return res;
}

// Text format: one gate per line, "i TYPE j [k] [zeta=num/den]".
inline std::string serialize_circuit(const GeneralizedCircuit& c) {
  std::ostringstream out;
  for (int i = 0; i < c.size(); ++i) {
    const Gate& g = c.gates[i];
    out << i << ' ' << gate_name(g.type);
    int arity = gate_arity(g.type);
    if (arity >= 1) out << ' ' << g.j;
    if (arity == 2) out << ' ' << g.k;
    if (gate_has_param(g.type)) out << " zeta=" << format_rational(g.zeta);
    out << '\n';
  }
  return out.str();
}

inline GeneralizedCircuit parse_circuit(const std::string& text) {
  GeneralizedCircuit c;
  std::istringstream in(text);
  std::string line;
  int expect = 0;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw validation_error("circuit line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    std::string t;
    while (ls >> t) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok.size() < 2) fail("expected 'i TYPE ...'");
    long id = -1;
    try {
      id = std::stol(tok[0]);
    } catch (...) {
      fail("bad gate id '" + tok[0] + "'");
    }
    if (id != expect) fail("gate ids must be consecutive from 0");
    auto type = gate_from_name(tok[1]);
    if (!type) fail("unknown gate type '" + tok[1] + "'");
    Gate g;
    g.type = *type;
    std::size_t pos = 2;
    int arity = gate_arity(g.type);
    auto read_index = [&](const char* which) {
      if (pos >= tok.size()) fail(std::string("missing input ") + which);
      const std::string& word = tok[pos++];
      try {
        return static_cast<int>(std::stol(word));
      } catch (...) {
        fail("bad input index '" + word + "'");
      }
      return -1;
    };
    if (arity >= 1) g.j = read_index("j");
    if (arity == 2) g.k = read_index("k");
    if (gate_has_param(g.type)) {
      if (pos >= tok.size() || tok[pos].rfind("zeta=", 0) != 0) fail("missing zeta=");
      try {
        g.zeta = parse_rational(tok[pos].substr(5));
      } catch (const std::invalid_argument&) {
        fail("bad zeta '" + tok[pos] + "'");
      }
      ++pos;
    }
    if (pos != tok.size()) fail("unexpected token '" + tok[pos] + "'");
    c.gates.push_back(g);
    ++expect;
  }
  validate_circuit(c);
  return c;
}

// Assignment text: one "i value" line per gate, values as rationals or decimals.
inline std::string serialize_assignment(const std::vector<double>& v) {
  std::ostringstream out;
  out << std::setprecision(17);
  for (std::size_t i = 0; i < v.size(); ++i) out << i << ' ' << v[i] << '\n';
  return out.str();
}

inline std::vector<Rat> parse_assignment(const std::string& text) {
  std::vector<Rat> v;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw validation_error("assignment line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    std::string t;
    while (ls >> t) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok.size() != 2) fail("expected 'i value'");
    long id = -1;
    try {
      id = std::stol(tok[0]);
    } catch (...) {
      fail("bad index '" + tok[0] + "'");
    }
    if (id != static_cast<long>(v.size())) fail("indices must be consecutive from 0");
    try {
      v.push_back(parse_rational(tok[1]));
    } catch (const std::invalid_argument&) {
      fail("bad value '" + tok[1] + "'");
    }
  }
  return v;
}

}  // namespace fpa::gcircuit
