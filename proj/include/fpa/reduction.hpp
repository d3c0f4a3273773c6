#pragma once

#include <algorithm>
#include <iterator>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fpa/gcircuit.hpp"
#include "fpa/verify.hpp"

namespace fpa::reduction {

using auction::AuctionInstance;
using auction::JumpProfile;
using distributions::DensityBlock;
using distributions::PiecewiseCdf;

// Compiles circuits over the doubling / complement / product-form gate set into
// first-price auctions with five bids, ten bidders per gate.  The construction
// works internally on the value space [0,5] with bids {0,1,2,3,4}; emission
// divides every block endpoint and bid by 5.  In any eps-equilibrium of the
// emitted auction, the second jump point of each gate-bidder encodes the gate's
// value, recoverable through an affine map, and the decoded vector satisfies
// the circuit to 500*eps.

enum class BidderRole { Gate, Auxiliary, Padding };

struct DecodeScale {
  // v = trunc_{[0,1]}(mul * alpha_i(b_1) - sub) with alpha on the emitted scale.
  Rat mul = Rat(15);
  Rat sub = Rat(7);
};

struct ReductionOutput {
  AuctionInstance auction;
  std::vector<BidderRole> roles;
  int num_gates = 0;
  DecodeScale decode;
  // Internal construction scale; emitted endpoints are these divided by it,
  // and error guarantees on the internal scale shrink by the same factor.
  Rat working_scale = Rat(5);
};

enum class GadgetKind { Base, Projection, Times2, Complement, Phi };

// Shape of a base-gadget prior: volume gamma_l on [3/2,7/4], volume
// 1-gamma_l-gamma_r on [2+l,2+r], volume gamma_r on [13/4,7/2].
struct GadgetParams {
  Rat gamma_l, gamma_r, l, r;
};

inline const GadgetParams kStandardBase{Rat(1, 3), Rat(1, 3), Rat(1, 3), Rat(2, 3)};

// One belief row on the working scale: bidder `owner` models `about`'s value
// by the given density blocks.
struct PriorRow {
  int owner = -1;
  int about = -1;
  std::vector<DensityBlock> blocks;
};

namespace detail {

inline std::vector<DensityBlock> base_blocks(const GadgetParams& g) {
  for (const Rat& v : {g.gamma_l, g.gamma_r, g.l, g.r})
    if (v < 0 || v > 1) throw validation_error("gadget: parameters must lie in [0,1]");
  if (!(g.gamma_l + g.gamma_r < 1))
    throw validation_error("gadget: side volumes must sum below 1");
  if (!(g.l < g.r)) throw validation_error("gadget: need l < r");
  std::vector<DensityBlock> b;
  if (g.gamma_l > 0) b.push_back({Rat(3, 2), Rat(7, 4), g.gamma_l});
  b.push_back({Rat(2) + g.l, Rat(2) + g.r, Rat(1) - g.gamma_l - g.gamma_r});
  if (g.gamma_r > 0) b.push_back({Rat(13, 4), Rat(7, 2), g.gamma_r});
  return b;
}

inline void append_base(std::vector<PriorRow>& out, int in, int to, const GadgetParams& g) {
  out.push_back({to, in, base_blocks(g)});
}

inline void append_projection(std::vector<PriorRow>& out, int in, int to, int k, int kp) {
  append_base(out, in, k, kStandardBase);
  append_base(out, k, kp, kStandardBase);
  append_base(out, kp, to, kStandardBase);
}

inline void append_complement(std::vector<PriorRow>& out, int in, int to, int k1, int k2,
                              int k3, int k4, int k5) {
  append_base(out, in, k1, {Rat(1, 6), Rat(2, 3), Rat(1, 3), Rat(2, 3)});
  // The second link reads the input's *third* jump point: its belief row puts
  // the moving mass on [4,5], where that jump lives.
  out.push_back({k2, k1, {{Rat(3, 2), Rat(7, 4), Rat(2, 3)}, {Rat(4), Rat(5), Rat(1, 3)}}});
  append_base(out, k2, k3, {Rat(1, 3), Rat(1, 3), Rat(2, 3), Rat(5, 6)});
  append_projection(out, k3, to, k4, k5);
}

}  // namespace detail

// Emits the working-scale belief rows of one gadget.  `params` applies only to
// the free-standing base kind; the composite kinds have fixed parameters.
// Auxiliary consumption order: times2 {base output, projection k, projection
// k'}; complement {k1, k2, k3, projection k, projection k'}; phi {k1, k2, k3,
// then the complement's five}.
inline std::vector<PriorRow> emit_gadget(GadgetKind kind,
                                         const std::optional<GadgetParams>& params,
                                         const std::vector<int>& inputs, int output,
                                         const std::vector<int>& aux) {
  std::size_t want_inputs = (kind == GadgetKind::Phi) ? 2 : 1;
  std::size_t want_aux = 0;
  switch (kind) {
    case GadgetKind::Base: want_aux = 0; break;
    case GadgetKind::Projection: want_aux = 2; break;
    case GadgetKind::Times2: want_aux = 3; break;
    case GadgetKind::Complement: want_aux = 5; break;
    case GadgetKind::Phi: want_aux = 8; break;
  }
  if (inputs.size() != want_inputs) throw validation_error("gadget: wrong input count");
  if (aux.size() != want_aux) throw validation_error("gadget: wrong auxiliary count");
  if (params.has_value() != (kind == GadgetKind::Base))
    throw validation_error("gadget: parameters apply exactly to the base kind");

  std::vector<int> ids = inputs;
  ids.push_back(output);
  ids.insert(ids.end(), aux.begin(), aux.end());
  for (std::size_t a = 0; a < ids.size(); ++a) {
    if (ids[a] < 0) throw validation_error("gadget: negative bidder id");
    for (std::size_t b = a + 1; b < ids.size(); ++b)
      if (ids[a] == ids[b])
        throw validation_error("gadget: bidder id " + std::to_string(ids[a]) + " used twice");
  }

  std::vector<PriorRow> rows;
  switch (kind) {
    case GadgetKind::Base:
      detail::append_base(rows, inputs[0], output, *params);
      break;
    case GadgetKind::Projection:
      detail::append_projection(rows, inputs[0], output, aux[0], aux[1]);
      break;
    case GadgetKind::Times2:
      detail::append_base(rows, inputs[0], aux[0], {Rat(1, 3), Rat(1, 3), Rat(1, 3), Rat(1, 2)});
      detail::append_projection(rows, aux[0], output, aux[1], aux[2]);
      break;
    case GadgetKind::Complement:
      detail::append_complement(rows, inputs[0], output, aux[0], aux[1], aux[2], aux[3], aux[4]);
      break;
    case GadgetKind::Phi: {
      GadgetParams in_shape{Rat(1, 20), Rat(8, 20), Rat(1, 3), Rat(2, 3)};
      // One auxiliary reads both inputs; its jump points aggregate them.
      rows.push_back({aux[0], inputs[0], detail::base_blocks(in_shape)});
      rows.push_back({aux[0], inputs[1], detail::base_blocks(in_shape)});
      rows.push_back({aux[1], aux[0],
                      {{Rat(3, 2), Rat(7, 4), Rat(1, 2)}, {Rat(7, 2), Rat(5), Rat(1, 2)}}});
      detail::append_base(rows, aux[1], aux[2],
                          {Rat(1, 3), Rat(5, 12), Rat(104, 200), Rat(779, 800)});
      detail::append_complement(rows, aux[2], output, aux[3], aux[4], aux[5], aux[6], aux[7]);
      break;
    }
  }
  return rows;
}

// Builds the auction on bids {0,1/5,2/5,3/5,4/5} from working-scale rows.
// Bidder pairs without an explicit row get the null belief: all mass below the
// lowest positive bid, so the owner expects a sure bid of 0.
inline AuctionInstance assemble_instance(int m, const std::vector<PriorRow>& rows) {
  if (m < 2) throw validation_error("reduction: need at least 2 bidders");
  std::vector<std::vector<const std::vector<DensityBlock>*>> at(
      m, std::vector<const std::vector<DensityBlock>*>(m, nullptr));
  for (const auto& row : rows) {
    if (row.owner < 0 || row.owner >= m || row.about < 0 || row.about >= m)
      throw validation_error("reduction: prior row out of range");
    if (row.owner == row.about) throw validation_error("reduction: self-directed prior row");
    if (at[row.owner][row.about])
      throw validation_error("reduction: duplicate prior row " + std::to_string(row.owner) +
                             "," + std::to_string(row.about));
    at[row.owner][row.about] = &row.blocks;
  }

  static const std::vector<DensityBlock> null_row{{Rat(0), Rat(1), Rat(1)}};
  AuctionInstance a;
  a.n = m;
  a.bids = {Rat(0), Rat(1, 5), Rat(2, 5), Rat(3, 5), Rat(4, 5)};
  a.priors.assign(m, std::vector<std::optional<PiecewiseCdf>>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      const auto& src = at[i][j] ? *at[i][j] : null_row;
      std::vector<DensityBlock> scaled;
      scaled.reserve(src.size());
      for (const auto& b : src) scaled.push_back({b.lo / 5, b.hi / 5, b.volume});
      a.priors[i][j] = PiecewiseCdf::from_blocks(scaled);
    }
  a.build_cache();
  auction::validate_instance(a);
  return a;
}

inline ReductionOutput build_auction(const gcircuit::GeneralizedCircuit& c) {
  gcircuit::validate_circuit(c);
  const int nu = c.size();
  if (nu == 0) throw validation_error("reduction: empty circuit");
  for (const auto& g : c.gates)
    if (g.type != gcircuit::GateType::Times2 && g.type != gcircuit::GateType::Comp &&
        g.type != gcircuit::GateType::Phi)
      throw validation_error(std::string("reduction: gate type ") + gcircuit::gate_name(g.type) +
                             " not supported; rewrite the circuit to the doubling/complement/"
                             "product-form gate set first");

  const int m = std::max(10 * nu, 24);
  std::vector<PriorRow> rows;
  for (int i = 0; i < nu; ++i) {
    const auto& g = c.gates[i];
    const int pool = nu + 9 * i;  // nine private auxiliary ids per gate-bidder
    std::vector<PriorRow> part;
    switch (g.type) {
      case gcircuit::GateType::Times2:
        part = emit_gadget(GadgetKind::Times2, std::nullopt, {g.j}, i,
                           {pool, pool + 1, pool + 2});
        break;
      case gcircuit::GateType::Comp:
        part = emit_gadget(GadgetKind::Complement, std::nullopt, {g.j}, i,
                           {pool, pool + 1, pool + 2, pool + 3, pool + 4});
        break;
      default:
        part = emit_gadget(GadgetKind::Phi, std::nullopt, {g.j, g.k}, i,
                           {pool, pool + 1, pool + 2, pool + 3, pool + 4, pool + 5, pool + 6,
                            pool + 7});
        break;
    }
    rows.insert(rows.end(), std::make_move_iterator(part.begin()),
                std::make_move_iterator(part.end()));
  }

  ReductionOutput out;
  out.auction = assemble_instance(m, rows);
  out.num_gates = nu;
  out.roles.assign(m, BidderRole::Padding);
  for (int i = 0; i < m; ++i)
    out.roles[i] = i < nu            ? BidderRole::Gate
                   : i < 10 * nu     ? BidderRole::Auxiliary
                                     : BidderRole::Padding;
  return out;
}

struct Validity {
  bool valid = false;
  bool almost_valid = false;
};

// Validity windows on the working scale: the first jump in [1,3/2], the second
// near [2+1/3, 2+2/3] (within 2*eps), the third in [3+1/2, 5], the fourth
// pinned at 5.  Almost-valid relaxes the second window to [2,3].
template <class T>
Validity is_valid_bidder(const JumpProfile<T>& p, int i, const T& eps) {
  const T w0 = T(5) * p.at(i, 0);
  const T w1 = T(5) * p.at(i, 1);
  const T w2 = T(5) * p.at(i, 2);
  const T w3 = T(5) * p.at(i, 3);
  const T ew = T(5) * eps;
  const bool frame =
      w0 >= T(1) && T(2) * w0 <= T(3) && T(2) * w2 >= T(7) && w2 <= T(5) && w3 == T(5);
  Validity out;
  out.almost_valid = frame && w1 >= T(2) && w1 <= T(3);
  out.valid = frame && T(3) * w1 >= T(7) - T(6) * ew && T(3) * w1 <= T(8) + T(6) * ew;
  return out;
}

template <class T>
std::vector<std::optional<T>> decode_assignment(const ReductionOutput& ro,
                                                const JumpProfile<T>& p, const T& eps) {
  const T mul = gcircuit::detail::rat_as<T>(ro.decode.mul);
  const T sub = gcircuit::detail::rat_as<T>(ro.decode.sub);
  std::vector<std::optional<T>> out(ro.auction.n);
  for (int i = 0; i < ro.auction.n; ++i)
    if (is_valid_bidder(p, i, eps).valid)
      out[i] = gcircuit::detail::trunc01(T(mul * p.at(i, 1) - sub));
  return out;
}

template <class T>
struct ReductionReport {
  bool ok = false;
  T max_regret{};
  std::vector<T> values;                // decoded gate-bidder assignment
  gcircuit::CheckReport<T> gates;       // circuit check at 500*eps
};

template <class T>
ReductionReport<T> verify_reduction(const gcircuit::GeneralizedCircuit& c,
                                    const ReductionOutput& ro, const JumpProfile<T>& p,
                                    const T& eps) {
  if (!(eps >= T(0)) || eps > T(1) / T(100000))
    throw validation_error("verify_reduction: eps must lie in [0, 1/100000]");
  if (c.size() != ro.num_gates)
    throw validation_error("verify_reduction: circuit and instance disagree on gate count");
  auto bne = auction::verify_epsilon_bne(ro.auction, p, eps);
  if (!bne.is_eq)
    throw validation_error("verify_reduction: profile is not an eps-equilibrium");

  ReductionReport<T> rep;
  rep.max_regret = bne.max_regret;
  auto decoded = decode_assignment(ro, p, eps);
  for (int i = 0; i < ro.num_gates; ++i) {
    if (!decoded[i])
      throw validation_error("verify_reduction: gate-bidder " + std::to_string(i) +
                             " is not valid; the construction is falsified");
    rep.values.push_back(*decoded[i]);
  }
  rep.gates = gcircuit::check_assignment(c, rep.values, T(500) * eps);
  rep.ok = rep.gates.satisfied;
  return rep;
}

}  // namespace fpa::reduction
