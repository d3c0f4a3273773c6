// Command-line driver: solve, verify, best-response, reduce, circuit
// check/solve/lower, export-circuit.  Artifacts go to files or stdout, logs to
// stderr.  Exit codes: 0 success or certified, 1 not certified, 2 usage,
// 3 validation or malformed input, 4 resource budget exhausted.

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fpa/auction.hpp"
#include "fpa/best_response.hpp"
#include "fpa/brouwer.hpp"
#include "fpa/circuit.hpp"
#include "fpa/cli.hpp"
#include "fpa/export_circuit.hpp"
#include "fpa/gcircuit.hpp"
#include "fpa/io_json.hpp"
#include "fpa/lowering.hpp"
#include "fpa/rational.hpp"
#include "fpa/reduction.hpp"
#include "fpa/solver_enum.hpp"
#include "fpa/verify.hpp"

namespace {

using fpa::Rat;
namespace auction = fpa::auction;
namespace brouwer = fpa::brouwer;
namespace cli = fpa::cli;
namespace gc = fpa::gcircuit;
namespace io = fpa::io;
namespace red = fpa::reduction;
namespace se = fpa::solver_enum;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw fpa::validation_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_artifact(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw fpa::validation_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw fpa::validation_error("write failed for '" + path + "'");
}

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Rat parse_eps(const std::string& text, bool allow_zero) {
  Rat eps;
  try {
    eps = fpa::parse_rational(text);
  } catch (const std::invalid_argument& e) {
    throw fpa::validation_error(e.what());
  }
  if (eps < 0 || (!allow_zero && eps == 0))
    throw fpa::validation_error(std::string("eps must be ") +
                                (allow_zero ? "nonnegative" : "positive"));
  return eps;
}

struct SolveOpts {
  std::string instance, eps = "1/1000000", method = "brouwer";
  std::string out = "-", report, trace;
  std::uint64_t seed = 20240501;
  long max_iters = 100000;
  int restarts = 32;
  long long guess_budget = 100000;
};

int run_solve(const SolveOpts& o) {
  auction::AuctionInstance a = io::parse_instance(read_file(o.instance));
  cli::RunConfig rc;
  rc.eps = parse_eps(o.eps, false);
  rc.method = cli::method_from_name(o.method);
  rc.seed = o.seed;
  rc.max_iters = o.max_iters;
  rc.restarts = o.restarts;
  rc.guess_budget = o.guess_budget;
  cli::validate_run_config(rc);

  auction::Profile prof;
  io::json report;
  report["method"] = o.method;
  report["eps"] = fpa::format_rational(rc.eps);
  report["seed"] = rc.seed;

  if (rc.method == cli::Method::Brouwer) {
    brouwer::SolveConfig sc;
    sc.max_iters = rc.max_iters;
    sc.restarts = rc.restarts;
    sc.seed = rc.seed;
    std::ostringstream trace;
    if (!o.trace.empty()) {
      trace << "restart,iter,residual\n";
      sc.on_step = [&](int r, long it, double res) {
        trace << r << ',' << it << ',' << fmt17(res) << '\n';
      };
    }
    brouwer::SolveResult sr = brouwer::solve_fixed_point(a, rc.eps, sc);
    prof = sr.profile;
    report["iterations"] = sr.iterations;
    report["restarts_used"] = sr.restarts_used;
    report["residual"] = fmt17(sr.residual);
    if (!o.trace.empty()) write_artifact(o.trace, trace.str());
  } else {
    se::EnumConfig ec;
    ec.guess_budget = rc.guess_budget;
    ec.numeric.seed = rc.seed;
    se::EnumSolveResult er = se::solve_constant_size(a, rc.eps, ec);
    prof = er.profile;
    report["winning_guess"] = er.winning_guess;
    report["guesses_tried"] = static_cast<long long>(er.log.size());
    std::ostringstream trace;
    trace << "guess,built,feasible,certified,residual,max_regret\n";
    for (const auto& g : er.log) {
      trace << g.guess_index << ',' << g.built << ',' << g.feasible << ',' << g.certified << ','
            << fmt17(g.residual) << ',' << fmt17(g.max_regret) << '\n';
      std::cerr << "guess " << g.guess_index << ": "
                << (g.certified   ? "certified"
                    : g.feasible  ? "feasible"
                    : g.built     ? "searched"
                                  : "skipped")
                << " residual=" << fmt17(g.residual) << " max_regret=" << fmt17(g.max_regret)
                << '\n';
    }
    if (!o.trace.empty()) write_artifact(o.trace, trace.str());
  }

  // The written strategy is exact dyadic, so this check is what any later
  // verify run on the artifact will reproduce.
  auto rep = auction::verify_epsilon_bne(a, prof, fpa::to_double(rc.eps));
  report["certified"] = rep.is_eq;
  report["max_regret"] = fpa::format_rational(fpa::rat_from_double(rep.max_regret));
  report["max_regret_decimal"] = fmt17(rep.max_regret);

  write_artifact(o.out, io::serialize_profile(prof));
  if (!o.report.empty()) write_artifact(o.report, report.dump(2) + "\n");
  std::cerr << (rep.is_eq ? "certified" : "not certified")
            << ", max_regret = " << fmt17(rep.max_regret) << '\n';
  return rep.is_eq ? 0 : 1;
}

struct VerifyOpts {
  std::string instance, strategy, eps = "0", precision = "float64";
};

int run_verify(const VerifyOpts& o) {
  auction::AuctionInstance a = io::parse_instance(read_file(o.instance));
  auction::RatProfile pr = io::parse_profile(read_file(o.strategy));
  Rat eps = parse_eps(o.eps, true);
  bool certified = false;
  double shown = 0;
  if (cli::precision_from_name(o.precision) == cli::Precision::Rational) {
    io::require_profile(a, pr);
    auto rep = auction::verify_epsilon_bne(a, pr, eps);
    certified = rep.is_eq;
    shown = fpa::to_double(rep.max_regret);
  } else {
    auction::Profile pd = auction::to_double_profile(pr);
    io::require_profile(a, pd);
    auto rep = auction::verify_epsilon_bne(a, pd, fpa::to_double(eps));
    certified = rep.is_eq;
    shown = rep.max_regret;
  }
  std::cout << "max_regret = " << fmt17(shown) << '\n'
            << "certified = " << (certified ? "true" : "false") << '\n';
  return certified ? 0 : 1;
}

struct BestResponseOpts {
  std::string instance, strategy, out = "-";
  int bidder = 0;
};

int run_best_response(const BestResponseOpts& o) {
  auction::AuctionInstance a = io::parse_instance(read_file(o.instance));
  auction::RatProfile pr = io::parse_profile(read_file(o.strategy));
  io::require_profile(a, pr);
  if (o.bidder < 0 || o.bidder >= a.n)
    throw fpa::validation_error("bidder index out of range [0, " + std::to_string(a.n) + ")");
  pr.jumps[o.bidder] = auction::best_response(a, pr, o.bidder);
  write_artifact(o.out, io::serialize_profile(pr));
  return 0;
}

struct ReduceOpts {
  std::string circuit, out, sidecar;
};

const char* role_name(red::BidderRole r) {
  switch (r) {
    case red::BidderRole::Gate: return "gate";
    case red::BidderRole::Auxiliary: return "auxiliary";
    default: return "padding";
  }
}

int run_reduce(const ReduceOpts& o) {
  gc::GeneralizedCircuit c = gc::parse_circuit(read_file(o.circuit));
  red::ReductionOutput ro = red::build_auction(c);
  write_artifact(o.out, io::serialize_instance(ro.auction));
  std::ostringstream side;
  side << "bidders " << ro.auction.n << '\n'
       << "gates " << ro.num_gates << '\n'
       << "working_scale " << fpa::format_rational(ro.working_scale) << '\n'
       << "decode_mul " << fpa::format_rational(ro.decode.mul) << '\n'
       << "decode_sub " << fpa::format_rational(ro.decode.sub) << '\n';
  for (int i = 0; i < ro.auction.n; ++i)
    side << "role " << i << ' ' << role_name(ro.roles[i]) << '\n';
  std::string sidecar = o.sidecar;
  if (sidecar.empty()) sidecar = o.out == "-" ? std::string("-") : o.out + ".decode";
  write_artifact(sidecar, side.str());
  std::cerr << "reduced " << ro.num_gates << " gates to " << ro.auction.n << " bidders\n";
  return 0;
}

struct CircuitCheckOpts {
  std::string circuit, assignment, eps = "0";
};

int run_circuit_check(const CircuitCheckOpts& o) {
  gc::GeneralizedCircuit c = gc::parse_circuit(read_file(o.circuit));
  std::vector<Rat> v = gc::parse_assignment(read_file(o.assignment));
  Rat eps = parse_eps(o.eps, true);
  auto rep = gc::check_assignment<Rat>(c, v, eps);
  std::cout << "max_violation = " << fmt17(fpa::to_double(rep.max_violation)) << '\n'
            << "satisfied = " << (rep.satisfied ? "true" : "false") << '\n';
  if (!rep.satisfied) std::cerr << "worst gate: " << rep.worst_gate << '\n';
  return rep.satisfied ? 0 : 1;
}

struct CircuitSolveOpts {
  std::string circuit, eps = "1/1000000", out = "-";
  std::uint64_t seed = 20240501;
  long max_iters = 100000;
  int restarts = 8;
};

int run_circuit_solve(const CircuitSolveOpts& o) {
  gc::GeneralizedCircuit c = gc::parse_circuit(read_file(o.circuit));
  Rat eps = parse_eps(o.eps, false);
  gc::IterateConfig ic;
  ic.max_iters = o.max_iters;
  ic.restarts = o.restarts;
  ic.seed = o.seed;
  if (ic.max_iters <= 0 || ic.restarts <= 0)
    throw fpa::validation_error("budgets must be positive");
  gc::IterateResult r = gc::iterate_solve(c, fpa::to_double(eps), ic);
  write_artifact(o.out, gc::serialize_assignment(r.assignment));
  std::cerr << "max_violation = " << fmt17(r.max_violation) << ", "
            << (r.satisfied ? "satisfied" : "not satisfied") << '\n';
  return r.satisfied ? 0 : 1;
}

struct CircuitLowerOpts {
  std::string circuit, target, eps_budget = "0", out = "-", map;
};

int run_circuit_lower(const CircuitLowerOpts& o) {
  gc::GeneralizedCircuit c = gc::parse_circuit(read_file(o.circuit));
  const std::vector<gc::GateType>* target = nullptr;
  if (o.target == "plus-comp")
    target = &gc::kTargetPlusComp;
  else if (o.target == "one-minus")
    target = &gc::kTargetOneMinus;
  else if (o.target == "times2-comp-phi")
    target = &gc::kTargetTimes2CompPhi;
  else
    throw fpa::validation_error("unknown target '" + o.target +
                                "' (expected plus-comp, one-minus, or times2-comp-phi)");
  Rat budget = parse_eps(o.eps_budget, true);
  gc::LoweredCircuit lc = gc::lower_circuit(c, *target, budget);
  write_artifact(o.out, gc::serialize_circuit(lc.circuit));
  // Keep stdout parseable: metadata joins it only when the circuit went to a file.
  std::ostream& meta = (o.out.empty() || o.out == "-") ? std::cerr : std::cout;
  meta << "multiplier = " << fpa::format_rational(lc.error_multiplier) << '\n'
       << "zeta_error = " << fpa::format_rational(lc.zeta_error) << '\n';
  if (lc.eps_valid) meta << "eps_valid = " << fpa::format_rational(*lc.eps_valid) << '\n';
  if (!o.map.empty()) {
    std::ostringstream ms;
    for (std::size_t i = 0; i < lc.index_map.size(); ++i)
      ms << i << ' ' << lc.index_map[i] << '\n';
    write_artifact(o.map, ms.str());
  }
  return 0;
}

struct ExportOpts {
  std::string instance, out = "-";
  long long node_budget = 2000000;
};

int run_export(const ExportOpts& o) {
  auction::AuctionInstance a = io::parse_instance(read_file(o.instance));
  if (o.node_budget <= 0) throw fpa::validation_error("node budget must be positive");
  brouwer::CircuitDag dag = brouwer::export_circuit(a, static_cast<std::size_t>(o.node_budget));
  write_artifact(o.out, brouwer::serialize_circuit(dag));
  std::cerr << "exported " << dag.nodes.size() << " nodes\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"first-price auction equilibrium toolkit"};
  app.require_subcommand(1);

  SolveOpts so;
  CLI::App* solve = app.add_subcommand("solve", "compute a certified eps-equilibrium");
  solve->add_option("--instance", so.instance, "auction instance (JSON)")->required();
  solve->add_option("--eps", so.eps, "tolerance, rational or scientific literal");
  solve->add_option("--method", so.method, "brouwer or enumerate")
      ->check(CLI::IsMember({"brouwer", "enumerate"}));
  solve->add_option("--seed", so.seed, "random seed");
  solve->add_option("--max-iters", so.max_iters, "iteration cap per restart")
      ->envname("FPA_MAX_ITERS");
  solve->add_option("--restarts", so.restarts, "restart cap")->envname("FPA_RESTARTS");
  solve->add_option("--guess-budget", so.guess_budget, "enumeration cap")
      ->envname("FPA_GUESS_BUDGET");
  solve->add_option("--out", so.out, "strategy output path, '-' for stdout");
  solve->add_option("--report", so.report, "certification report path (JSON)");
  solve->add_option("--trace", so.trace, "per-step residual trace path (CSV)");

  VerifyOpts vo;
  CLI::App* verify = app.add_subcommand("verify", "check a strategy file");
  verify->add_option("--instance", vo.instance, "auction instance (JSON)")->required();
  verify->add_option("--strategy", vo.strategy, "strategy file (JSON)")->required();
  verify->add_option("--eps", vo.eps, "tolerance, rational or scientific literal");
  verify->add_option("--precision", vo.precision, "float64 or rational")
      ->check(CLI::IsMember({"float64", "rational"}));

  BestResponseOpts bo;
  CLI::App* best = app.add_subcommand("best-response", "replace one bidder by a best response");
  best->add_option("--instance", bo.instance, "auction instance (JSON)")->required();
  best->add_option("--strategy", bo.strategy, "strategy file (JSON)")->required();
  best->add_option("--bidder", bo.bidder, "bidder index")->required();
  best->add_option("--out", bo.out, "strategy output path, '-' for stdout");

  ReduceOpts ro;
  CLI::App* reduce = app.add_subcommand("reduce", "compile a circuit into an auction");
  reduce->add_option("--circuit", ro.circuit, "circuit file")->required();
  reduce->add_option("--out", ro.out, "instance output path")->required();
  reduce->add_option("--sidecar", ro.sidecar, "decode sidecar path (default <out>.decode)");

  CLI::App* circuit = app.add_subcommand("circuit", "generalized circuit tools");
  circuit->require_subcommand(1);

  CircuitCheckOpts co;
  CLI::App* ccheck = circuit->add_subcommand("check", "check an assignment exactly");
  ccheck->add_option("--circuit", co.circuit, "circuit file")->required();
  ccheck->add_option("--assignment", co.assignment, "assignment file")->required();
  ccheck->add_option("--eps", co.eps, "tolerance, rational or scientific literal");

  CircuitSolveOpts cso;
  CLI::App* csolve = circuit->add_subcommand("solve", "search for an eps-satisfying assignment");
  csolve->add_option("--circuit", cso.circuit, "circuit file")->required();
  csolve->add_option("--eps", cso.eps, "tolerance, rational or scientific literal");
  csolve->add_option("--seed", cso.seed, "random seed");
  csolve->add_option("--max-iters", cso.max_iters, "iteration cap")->envname("FPA_MAX_ITERS");
  csolve->add_option("--restarts", cso.restarts, "restart cap")->envname("FPA_RESTARTS");
  csolve->add_option("--out", cso.out, "assignment output path, '-' for stdout");

  CircuitLowerOpts clo;
  CLI::App* clower = circuit->add_subcommand("lower", "rewrite onto a smaller gate set");
  clower->add_option("--circuit", clo.circuit, "circuit file")->required();
  clower->add_option("--target", clo.target, "plus-comp, one-minus, or times2-comp-phi")
      ->required();
  clower->add_option("--eps-budget", clo.eps_budget, "accuracy the rewrite must support");
  clower->add_option("--out", clo.out, "lowered circuit output path, '-' for stdout");
  clower->add_option("--map", clo.map, "gate index map output path");

  ExportOpts eo;
  CLI::App* exp = app.add_subcommand("export-circuit", "unroll the fixed-point map");
  exp->add_option("--instance", eo.instance, "auction instance (JSON)")->required();
  exp->add_option("--node-budget", eo.node_budget, "node cap")->envname("FPA_NODE_BUDGET");
  exp->add_option("--out", eo.out, "circuit output path, '-' for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*solve) return run_solve(so);
    if (*verify) return run_verify(vo);
    if (*best) return run_best_response(bo);
    if (*reduce) return run_reduce(ro);
    if (*ccheck) return run_circuit_check(co);
    if (*csolve) return run_circuit_solve(cso);
    if (*clower) return run_circuit_lower(clo);
    if (*exp) return run_export(eo);
  } catch (const fpa::resource_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const io::syntax_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
