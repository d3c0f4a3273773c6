#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fpa/auction.hpp"
#include "fpa/piecewise_cdf.hpp"
#include "fpa/rational.hpp"

// JSON file formats for auction instances and jump-point strategies.  Every
// numeric payload is a rational rendered as a "num/den" string, so files
// round-trip bit-exactly and goldens stay stable across platforms.  Loading
// always normalizes to the canonical shape (priors as polynomial pieces), so
// parse -> serialize -> parse is the identity on serialized output.

namespace fpa::io {

using json = nlohmann::ordered_json;
using auction::AuctionInstance;
using auction::Profile;
using auction::RatProfile;
using distributions::CdfPiece;
using distributions::DensityBlock;
using distributions::PiecewiseCdf;

// Structural problems with a document: malformed text, missing or mistyped
// fields.  Semantic problems (a prior that is not a CDF, bids out of order)
// surface as validation_error instead.
struct syntax_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // nlohmann's message already carries the line and column.
    throw syntax_error(e.what());
  }
}

inline const json& field(const json& j, const char* key) {
  if (!j.is_object())
    throw syntax_error("expected an object with a '" + std::string(key) + "' field");
  auto it = j.find(key);
  if (it == j.end()) throw syntax_error("missing '" + std::string(key) + "' field");
  return *it;
}

inline Rat rat_from_json(const json& j, const std::string& what) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rat(j.get<long long>());
  } catch (const std::invalid_argument& e) {
    throw syntax_error(what + ": " + e.what());
  }
  // Floats are rejected on purpose: files carry exact rationals only.
  throw syntax_error(what + ": expected a rational string like \"3/4\"");
}

inline json rat_to_json(const Rat& r) { return json(format_rational(r)); }

inline json cdf_to_json(const PiecewiseCdf& f) {
  json pieces = json::array();
  for (std::size_t l = 0; l < f.piece_count(); ++l) {
    auto [lo, hi] = f.piece_interval(l);
    json coeffs = json::array();
    for (const auto& c : f.piece_coeffs(l)) coeffs.push_back(rat_to_json(c));
    pieces.push_back(json{{"interval", json::array({rat_to_json(lo), rat_to_json(hi)})},
                          {"coeffs", std::move(coeffs)}});
  }
  return json{{"pieces", std::move(pieces)}};
}

inline std::pair<Rat, Rat> interval_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2)
    throw syntax_error(what + ": 'interval' must be a [lo, hi] pair");
  return {rat_from_json(j[0], what + " interval lo"), rat_from_json(j[1], what + " interval hi")};
}

// Accepts either {"pieces": [{"interval": [..], "coeffs": [..]}, ..]} or the
// density shorthand {"blocks": [{"interval": [..], "volume": ".."}, ..]};
// blocks are converted to pieces on load.
inline PiecewiseCdf cdf_from_json(const json& j, const std::string& what) {
  if (!j.is_object()) throw syntax_error(what + ": expected an object with 'pieces' or 'blocks'");
  if (auto it = j.find("pieces"); it != j.end()) {
    if (!it->is_array()) throw syntax_error(what + ": 'pieces' must be an array");
    std::vector<CdfPiece> pieces;
    int l = 0;
    for (const auto& pj : *it) {
      std::string where = what + " piece " + std::to_string(l++);
      CdfPiece p;
      std::tie(p.lo, p.hi) = interval_from_json(field(pj, "interval"), where);
      const json& cj = field(pj, "coeffs");
      if (!cj.is_array()) throw syntax_error(where + ": 'coeffs' must be an array");
      for (const auto& c : cj) p.coeffs.push_back(rat_from_json(c, where + " coeff"));
      pieces.push_back(std::move(p));
    }
    return PiecewiseCdf::from_pieces(std::move(pieces));
  }
  if (auto it = j.find("blocks"); it != j.end()) {
    if (!it->is_array()) throw syntax_error(what + ": 'blocks' must be an array");
    std::vector<DensityBlock> blocks;
    int l = 0;
    for (const auto& bj : *it) {
      std::string where = what + " block " + std::to_string(l++);
      DensityBlock b;
      std::tie(b.lo, b.hi) = interval_from_json(field(bj, "interval"), where);
      b.volume = rat_from_json(field(bj, "volume"), where + " volume");
      blocks.push_back(std::move(b));
    }
    return PiecewiseCdf::from_blocks(blocks);
  }
  throw syntax_error(what + ": expected 'pieces' or 'blocks'");
}

inline json instance_to_json(const AuctionInstance& a) {
  json bids = json::array();
  for (const auto& b : a.bids) bids.push_back(rat_to_json(b));
  json priors = json::array();
  for (int i = 0; i < a.n; ++i) {
    json row = json::array();
    for (int j = 0; j < a.n; ++j) {
      const auto& cell = a.priors.at(i).at(j);
      row.push_back(i == j || !cell ? json(nullptr) : cdf_to_json(*cell));
    }
    priors.push_back(std::move(row));
  }
  return json{{"bidders", a.n}, {"bids", std::move(bids)}, {"priors", std::move(priors)}};
}

inline std::string serialize_instance(const AuctionInstance& a) {
  return instance_to_json(a).dump(2) + "\n";
}

// Structural load only; run instance_violations / validate_instance afterwards.
inline AuctionInstance instance_from_json(const json& j) {
  AuctionInstance a;
  const json& nb = field(j, "bidders");
  if (!nb.is_number_integer()) throw syntax_error("'bidders' must be an integer");
  a.n = nb.get<int>();
  const json& bids = field(j, "bids");
  if (!bids.is_array()) throw syntax_error("'bids' must be an array");
  for (const auto& b : bids) a.bids.push_back(rat_from_json(b, "bid"));
  const json& priors = field(j, "priors");
  if (!priors.is_array()) throw syntax_error("'priors' must be an array of arrays");
  int i = 0;
  for (const auto& row : priors) {
    if (!row.is_array()) throw syntax_error("'priors' must be an array of arrays");
    std::vector<std::optional<PiecewiseCdf>> out_row;
    int k = 0;
    for (const auto& cell : row) {
      std::string what = "prior F_{" + std::to_string(i) + "," + std::to_string(k) + "}";
      if (cell.is_null())
        out_row.emplace_back(std::nullopt);
      else
        out_row.emplace_back(cdf_from_json(cell, what));
      ++k;
    }
    a.priors.push_back(std::move(out_row));
    ++i;
  }
  return a;
}

// Collects every violation instead of stopping at the first, for error reports.
inline std::vector<std::string> instance_violations(const AuctionInstance& a) {
  std::vector<std::string> out;
  if (a.n < 2) out.push_back("need at least 2 bidders");
  if (a.bids.empty() || a.bids.front() != 0) out.push_back("bid list must start with 0");
  for (std::size_t j = 1; j < a.bids.size(); ++j)
    if (!(a.bids[j - 1] < a.bids[j])) {
      out.push_back("bids must be strictly increasing");
      break;
    }
  if (!a.bids.empty() && a.bids.back() > 1) out.push_back("bids must lie in [0,1]");
  if (static_cast<int>(a.priors.size()) != a.n) {
    out.push_back("prior matrix must be " + std::to_string(a.n) + " x " + std::to_string(a.n));
    return out;
  }
  for (int i = 0; i < a.n; ++i) {
    if (static_cast<int>(a.priors[i].size()) != a.n) {
      out.push_back("prior matrix must be " + std::to_string(a.n) + " x " + std::to_string(a.n));
      return out;
    }
    for (int j = 0; j < a.n; ++j) {
      if (i == j) continue;
      std::string who = "F_{" + std::to_string(i) + "," + std::to_string(j) + "}";
      if (!a.priors[i][j]) {
        out.push_back(who + " is missing");
        continue;
      }
      auto rep = distributions::validate_cdf(*a.priors[i][j]);
      for (const auto& iss : rep.issues)
        out.push_back(who + " piece " + std::to_string(iss.piece) + ": " + iss.message);
    }
  }
  return out;
}

inline AuctionInstance parse_instance(const std::string& text) {
  AuctionInstance a = instance_from_json(parse_document(text));
  auto problems = instance_violations(a);
  if (!problems.empty()) {
    std::string msg = "instance validation failed:";
    for (const auto& p : problems) msg += "\n  - " + p;
    throw validation_error(msg);
  }
  auction::validate_instance(a);
  a.build_cache();
  return a;
}

inline json profile_to_json(const RatProfile& p) {
  json rows = json::array();
  for (const auto& row : p.jumps) {
    json r = json::array();
    for (const auto& v : row) r.push_back(rat_to_json(v));
    rows.push_back(std::move(r));
  }
  return json{{"jumps", std::move(rows)}};
}

inline std::string serialize_profile(const RatProfile& p) {
  return profile_to_json(p).dump(2) + "\n";
}

// Doubles become exact dyadic rationals, so the file reproduces the same
// doubles on the way back in.
inline std::string serialize_profile(const Profile& p) {
  return serialize_profile(auction::to_rat_profile(p));
}

inline RatProfile parse_profile(const std::string& text) {
  json j = parse_document(text);
  const json& rows = field(j, "jumps");
  if (!rows.is_array()) throw syntax_error("'jumps' must be an array of arrays");
  RatProfile p;
  for (const auto& row : rows) {
    if (!row.is_array()) throw syntax_error("'jumps' must be an array of arrays");
    std::vector<Rat> r;
    for (const auto& v : row) r.push_back(rat_from_json(v, "jump"));
    p.jumps.push_back(std::move(r));
  }
  return p;
}

// Shape and domain check of a parsed strategy against its instance.
template <class T>
void require_profile(const AuctionInstance& a, const auction::JumpProfile<T>& p) {
  if (static_cast<int>(p.jumps.size()) != a.n)
    throw validation_error("strategy: expected " + std::to_string(a.n) + " rows, got " +
                           std::to_string(p.jumps.size()));
  for (int i = 0; i < a.n; ++i)
    if (static_cast<int>(p.jumps[i].size()) != a.num_bids())
      throw validation_error("strategy: row " + std::to_string(i) + " needs " +
                             std::to_string(a.num_bids()) + " jump values");
  if (auto v = auction::profile_violation(a, p)) throw validation_error("strategy: " + *v);
}

}  // namespace fpa::io
