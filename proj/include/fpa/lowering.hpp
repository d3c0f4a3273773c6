#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fpa/gcircuit.hpp"
#include "fpa/rational.hpp"

namespace fpa::gcircuit {

// Rewrites a circuit so that it only uses one of three restricted gate sets.
// Node i of the source keeps index i in the output (index_map is the
// identity); helper gates are appended after the original indices.
//
// Soundness contract: if an assignment of the lowered circuit is
// eps-satisfying, then reading it back through index_map satisfies every
// source gate to error_multiplier * eps (plus zeta_error for gates whose
// rational parameter had to be approximated by a dyadic).  Each rewrite rule
// carries an error constant; constants compose affinely through a derivation,
// with input deviations scaled by the Lipschitz constant of the implemented
// function.  The per-source-gate multiplier is the constant of its rule, and
// the reported multiplier is the maximum over the source gates.
struct LoweredCircuit {
  GeneralizedCircuit circuit;
  Rat error_multiplier = Rat(0);
  std::vector<int> index_map;
  // Largest eps for which the multiplier is claimed; empty means unrestricted.
  // Exact-only rules (products) force it to zero.
  std::optional<Rat> eps_valid;
  // Worst |zeta - approximation| introduced by binary-expansion rewrites.
  Rat zeta_error = Rat(0);
};

inline const std::vector<GateType> kTargetPlusComp{GateType::Plus, GateType::Comp};
inline const std::vector<GateType> kTargetOneMinus{GateType::One, GateType::Minus};
inline const std::vector<GateType> kTargetTimes2CompPhi{GateType::Times2, GateType::Comp,
                                                        GateType::Phi};

namespace detail {

enum class Target { PlusComp, OneMinus, Times2CompPhi };

inline Target classify_target(std::vector<GateType> set) {
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  auto is = [&](std::vector<GateType> want) {
    std::sort(want.begin(), want.end());
    return set == want;
  };
  if (is(kTargetPlusComp)) return Target::PlusComp;
  if (is(kTargetOneMinus)) return Target::OneMinus;
  if (is(kTargetTimes2CompPhi)) return Target::Times2CompPhi;
  throw validation_error("unsupported target gate set");
}

// A lowered node together with its accumulated error constant (in units of
// the lowered circuit's eps).
struct NodeRef {
  int idx = -1;
  Rat err = Rat(0);
};

class Emitter {
 public:
  Emitter(int source_size, Target target, const Rat& eps_budget)
      : nu_(source_size), target_(target), eps_budget_(eps_budget) {
    out_.gates.resize(nu_);
  }

  NodeRef lower_gate(const Gate& g, int dest) {
    NodeRef x{g.j, Rat(0)}, y{g.k, Rat(0)};
    switch (g.type) {
      case GateType::One: return one(dest);
      case GateType::Plus: return plus(x, y, dest);
      case GateType::Minus: return minus(x, y, dest);
      case GateType::Comp: return comp(x, dest);
      case GateType::Times2: return times2(x, dest);
      case GateType::Mul: return mul(x, y, dest);
      case GateType::Square: return square(x, dest);
      case GateType::Phi:
        if (target_ != Target::Times2CompPhi) unsupported(g.type);
        return prim2(GateType::Phi, x, y, dest);
      case GateType::Copy: return copy(x, dest);
      case GateType::Half: return half(x, dest);
      case GateType::TimesZeta: return times_zeta(x, g.zeta, dest);
      case GateType::Inv: return inv(x, dest);
      case GateType::Max: return max(x, y, dest);
      case GateType::Min: return min(x, y, dest);
      case GateType::ConstZeta: return const_zeta(g.zeta, dest);
    }
    throw std::logic_error("lower_gate: unknown type");
  }

  GeneralizedCircuit take() && { return std::move(out_); }
  const std::optional<Rat>& eps_valid() const { return eps_valid_; }
  const Rat& zeta_error() const { return zeta_error_; }

 private:
  [[noreturn]] void unsupported(GateType t) {
    throw validation_error(std::string("cannot lower gate type ") + gate_name(t) +
                           " to the requested target set");
  }

  void constrain(const Rat& bound) {
    if (!eps_valid_ || *eps_valid_ > bound) eps_valid_ = bound;
  }

  int put(Gate g, int dest) {
    if (dest >= 0) {
      out_.gates[dest] = g;
      return dest;
    }
    out_.gates.push_back(g);
    return static_cast<int>(out_.gates.size()) - 1;
  }

  int reserve() {
    out_.gates.push_back(Gate{});
    return static_cast<int>(out_.gates.size()) - 1;
  }

  NodeRef prim0(GateType t, int dest) { return {put({t}, dest), Rat(1)}; }

  NodeRef prim1(GateType t, NodeRef x, int dest) {
    Rat lip = (t == GateType::Times2) ? Rat(2) : Rat(1);
    return {put({t, x.idx}, dest), Rat(1) + lip * x.err};
  }

  NodeRef prim2(GateType t, NodeRef x, NodeRef y, int dest) {
    if (x.idx == y.idx) throw std::logic_error("lowering produced a twin-input gate");
    Rat lip = (t == GateType::Phi) ? Rat(1, 2) : Rat(1);
    return {put({t, x.idx, y.idx}, dest), Rat(1) + lip * (x.err + y.err)};
  }

  // Constant 1.  In the additive targets, x + (1-x) pins the value; in the
  // product target, three doublings of a phi output (always >= 1/4) saturate.
  NodeRef one(int dest) {
    if (dest < 0 && one_cache_) return *one_cache_;
    NodeRef r;
    switch (target_) {
      case Target::PlusComp: {
        int a = reserve();
        int b = put({GateType::Comp, a}, -1);
        out_.gates[a] = {GateType::Comp, b};
        r = {put({GateType::Plus, a, b}, dest), Rat(2)};
        break;
      }
      case Target::OneMinus:
        r = prim0(GateType::One, dest);
        break;
      case Target::Times2CompPhi: {
        int a = reserve();
        int b = put({GateType::Times2, a}, -1);
        int c = put({GateType::Times2, b}, -1);
        out_.gates[a] = {GateType::Phi, b, c};
        r = {put({GateType::Times2, c}, dest), Rat(1)};
        constrain(Rat(1, 14));
        break;
      }
    }
    if (dest < 0) one_cache_ = r;
    return r;
  }

  NodeRef comp(NodeRef x, int dest) {
    if (target_ == Target::OneMinus) {
      // Two cached constants so 1 - x stays expressible when x is itself the
      // cached constant.
      NodeRef o = one(-1);
      if (o.idx == x.idx) {
        if (!one_alt_) one_alt_ = prim0(GateType::One, -1);
        o = *one_alt_;
      }
      return prim2(GateType::Minus, o, x, dest);
    }
    return prim1(GateType::Comp, x, dest);
  }

  NodeRef copy(NodeRef x, int dest) { return comp(comp(x, -1), dest); }

  NodeRef plus(NodeRef x, NodeRef y, int dest) {
    if (target_ == Target::PlusComp) return prim2(GateType::Plus, x, y, dest);
    // trunc(x+y) = 1 - trunc((1-x) - y)
    return comp(minus(comp(x, -1), y, -1), dest);
  }

  NodeRef minus(NodeRef x, NodeRef y, int dest) {
    switch (target_) {
      case Target::OneMinus:
        return prim2(GateType::Minus, x, y, dest);
      case Target::PlusComp:
        // trunc(x-y) = 1 - trunc((1-x) + y)
        return comp(plus(comp(x, -1), y, -1), dest);
      case Target::Times2CompPhi: {
        // phi(phi(-1 + 4/(2+y), 1-x), y/2) = 1/2 + (y-x)/8, then undo the
        // affine map with a doubling, a complement and two more doublings.
        NodeRef g3 = inv(y, -1);
        NodeRef g4 = comp(x, -1);
        NodeRef g5 = prim2(GateType::Phi, g3, g4, -1);
        NodeRef g6 = half(y, -1);
        NodeRef g7 = prim2(GateType::Phi, g5, g6, -1);
        NodeRef g8 = prim1(GateType::Times2, g7, -1);
        NodeRef g9 = comp(g8, -1);
        NodeRef g10 = prim1(GateType::Times2, g9, -1);
        NodeRef r = prim1(GateType::Times2, g10, dest);
        // The chain's own constant: 99 units, inputs propagated at slope 1.
        r.err = Rat(99) + x.err + y.err;
        return r;
      }
    }
    throw std::logic_error("minus: unreachable");
  }

  NodeRef half(NodeRef x, int dest) {
    if (target_ == Target::Times2CompPhi) {
      // 1 - phi(1-x, 1) = x/2
      NodeRef c = comp(x, -1);
      NodeRef p = prim2(GateType::Phi, c, one(-1), -1);
      return comp(p, dest);
    }
    // Feedback pin: r = trunc(x - r) forces r = x/2.
    int r_idx = (dest >= 0) ? dest : reserve();
    NodeRef fwd{r_idx, Rat(0)};
    NodeRef m = minus(x, fwd, -1);
    NodeRef r = copy(m, r_idx);
    // Fixed-point deviation: the loop slack moves r one-for-one, but a shift
    // of x only moves the solution x/2 by half.
    r.err -= x.err / 2;
    return r;
  }

  NodeRef times2(NodeRef x, int dest) {
    if (target_ == Target::Times2CompPhi) return prim1(GateType::Times2, x, dest);
    return plus(x, copy(x, -1), dest);
  }

  // -1 + 4/(2+x) via the loop r = phi(1-x, r): the unique fixed point of
  // t = (2-x)(t+1)/4 is (2-x)/(2+x).
  NodeRef inv(NodeRef x, int dest) {
    if (target_ != Target::Times2CompPhi) unsupported(GateType::Inv);
    NodeRef g2 = comp(x, -1);
    int r_idx = (dest >= 0) ? dest : reserve();
    NodeRef p = prim2(GateType::Phi, g2, NodeRef{r_idx, Rat(0)}, -1);
    NodeRef mid = comp(p, -1);
    NodeRef r = comp(mid, r_idx);
    r.err = Rat(8) + x.err;
    constrain(Rat(1, 14));
    return r;
  }

  NodeRef max(NodeRef x, NodeRef y, int dest) {
    // max(x,y) = trunc(x + trunc(y-x))
    return plus(x, minus(y, x, -1), dest);
  }

  NodeRef min(NodeRef x, NodeRef y, int dest) {
    // min(x,y) = trunc(x - trunc(x-y))
    return minus(x, minus(x, y, -1), dest);
  }

  // Exact-only: xy = 4*(phi(x,y) - 1/4 - x/4 - y/4), arranged so no
  // intermediate truncation can bite.
  NodeRef mul(NodeRef x, NodeRef y, int dest) {
    if (target_ != Target::Times2CompPhi) unsupported(GateType::Mul);
    constrain(Rat(0));
    NodeRef p = prim2(GateType::Phi, x, y, -1);
    NodeRef quarter = half(half(one(-1), -1), -1);
    NodeRef d1 = minus(p, quarter, -1);
    NodeRef d2 = minus(d1, half(half(x, -1), -1), -1);
    NodeRef d3 = minus(d2, half(half(y, -1), -1), -1);
    NodeRef r = prim1(GateType::Times2, prim1(GateType::Times2, d3, -1), dest);
    // Chain constant at exact inputs; the product's unit slopes carry input
    // deviations through.
    r.err = Rat(1250) + x.err + y.err;
    return r;
  }

  NodeRef square(NodeRef x, int dest) {
    if (target_ != Target::Times2CompPhi) unsupported(GateType::Square);
    return mul(x, copy(x, -1), dest);
  }

  // zeta * x with zeta rounded to a/2^k; the k halving-and-adding steps keep
  // every partial sum below its inputs, so no truncation bites.
  NodeRef times_zeta(NodeRef x, const Rat& zeta, int dest) {
    if (zeta == 1) return copy(x, dest);
    if (zeta == 0) return comp(one(-1), dest);
    int k = pick_k();
    Rat scaled = zeta * rat_pow2(k) + Rat(1, 2);
    BigInt a = boost::multiprecision::numerator(scaled) /
               boost::multiprecision::denominator(scaled);
    note_zeta(zeta, Rat(a) / rat_pow2(k));
    if (a == 0) return comp(one(-1), dest);
    if (a == (BigInt(1) << static_cast<unsigned>(k))) return copy(x, dest);
    while ((a & 1) == 0) {
      a >>= 1;
      --k;
    }
    // Low bit first: cur after bit q holds (a mod 2^{q+1}) * x / 2^{q+1}.
    NodeRef xhalf = half(x, k == 1 ? dest : -1);
    NodeRef cur = xhalf;
    for (int q = 1; q < k; ++q) {
      int d = (q == k - 1) ? dest : -1;
      if (boost::multiprecision::bit_test(a, static_cast<unsigned>(q)))
        cur = plus(half(cur, -1), xhalf, d);
      else
        cur = half(cur, d);
    }
    return cur;
  }

  NodeRef const_zeta(const Rat& zeta, int dest) {
    if (zeta == 1) return one(dest);
    if (zeta == 0) return comp(one(-1), dest);
    return times_zeta(one(-1), zeta, dest);
  }

  int pick_k() const {
    if (eps_budget_ <= 0) return 64;
    int k = 1;
    while (k < 64 && rat_pow2(-k) > eps_budget_) ++k;
    return k;
  }

  void note_zeta(const Rat& want, const Rat& got) {
    Rat d = rat_abs(want - got);
    if (d > zeta_error_) zeta_error_ = d;
  }

  int nu_;
  Target target_;
  Rat eps_budget_;
  GeneralizedCircuit out_;
  std::optional<NodeRef> one_cache_;
  std::optional<NodeRef> one_alt_;
  std::optional<Rat> eps_valid_;
  Rat zeta_error_ = Rat(0);
};

}  // namespace detail

inline LoweredCircuit lower_circuit(const GeneralizedCircuit& src,
                                    const std::vector<GateType>& target,
                                    const Rat& eps_budget = Rat(0)) {
  validate_circuit(src);
  detail::Target tgt = detail::classify_target(target);

  detail::Emitter em(src.size(), tgt, eps_budget);
  LoweredCircuit out;
  out.index_map.reserve(src.size());
  for (int i = 0; i < src.size(); ++i) {
    detail::NodeRef r = em.lower_gate(src.gates[i], i);
    if (r.idx != i) throw std::logic_error("lower_circuit: slot placement failed");
    out.index_map.push_back(i);
    if (r.err > out.error_multiplier) out.error_multiplier = r.err;
  }
  out.eps_valid = em.eps_valid();
  out.zeta_error = em.zeta_error();
  out.circuit = std::move(em).take();
  out.circuit.gate_set = target;
  validate_circuit(out.circuit);
  return out;
}

// Readback helper: restrict a lowered assignment to the source indices.
template <class T>
std::vector<T> restrict_assignment(const LoweredCircuit& lc, const std::vector<T>& v) {
  std::vector<T> out;
  out.reserve(lc.index_map.size());
  for (int idx : lc.index_map) out.push_back(v.at(idx));
  return out;
}

}  // namespace fpa::gcircuit
