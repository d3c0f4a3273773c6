#pragma once

#include <cstdint>
#include <string>

#include "fpa/rational.hpp"

// Run configuration shared by the command-line driver and its tests.  The
// driver fills this from flags and environment overrides; solver modules only
// ever see the already-validated values.

namespace fpa::cli {

enum class Method { Brouwer, Enumerate };
enum class Precision { Float64, Rational };

struct RunConfig {
  Rat eps = Rat(1, 1000000);
  Method method = Method::Brouwer;
  std::uint64_t seed = 20240501;
  long max_iters = 100000;
  int restarts = 32;
  long long guess_budget = 100000;
  long long node_budget = 2000000;
  Precision precision = Precision::Float64;
};

inline Method method_from_name(const std::string& s) {
  if (s == "brouwer") return Method::Brouwer;
  if (s == "enumerate") return Method::Enumerate;
  throw validation_error("unknown method '" + s + "' (expected brouwer or enumerate)");
}

inline Precision precision_from_name(const std::string& s) {
  if (s == "float64") return Precision::Float64;
  if (s == "rational") return Precision::Rational;
  throw validation_error("unknown precision '" + s + "' (expected float64 or rational)");
}

// Solve-side requirements; verification alone tolerates eps == 0.
inline void validate_run_config(const RunConfig& c) {
  if (!(c.eps > 0)) throw validation_error("eps must be positive");
  if (c.max_iters <= 0) throw validation_error("iteration budget must be positive");
  if (c.restarts <= 0) throw validation_error("restart budget must be positive");
  if (c.guess_budget <= 0) throw validation_error("guess budget must be positive");
  if (c.node_budget <= 0) throw validation_error("node budget must be positive");
}

}  // namespace fpa::cli
