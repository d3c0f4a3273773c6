#pragma once

#include <array>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fpa/rational.hpp"

namespace fpa::brouwer {

enum class CircuitOp { Add, Sub, Mul, Div, Max, Min, Const, Input };

inline const char* op_name(CircuitOp op) {
  switch (op) {
    case CircuitOp::Add: return "add";
    case CircuitOp::Sub: return "sub";
    case CircuitOp::Mul: return "mul";
    case CircuitOp::Div: return "div";
    case CircuitOp::Max: return "max";
    case CircuitOp::Min: return "min";
    case CircuitOp::Const: return "const";
    case CircuitOp::Input: return "input";
  }
  return "?";
}

struct CircuitNode {
  CircuitOp op;
  int a = -1;  // first operand id, or input index for Input
  int b = -1;  // second operand id
  Rat value;   // Const payload
};

// Straight-line arithmetic program over {+, -, *, /, max, min} with rational constants.
// Nodes are stored in topological order: operands always precede their node.
struct CircuitDag {
  std::vector<CircuitNode> nodes;
  std::vector<int> outputs;
  int num_inputs = 0;

  std::size_t size() const { return nodes.size(); }
};

template <class T>
std::vector<T> eval_circuit(const CircuitDag& c, const std::vector<T>& inputs) {
  if (static_cast<int>(inputs.size()) != c.num_inputs)
    throw std::invalid_argument("eval_circuit: wrong input count");
  std::vector<T> val(c.nodes.size());
  for (std::size_t id = 0; id < c.nodes.size(); ++id) {
    const auto& nd = c.nodes[id];
    switch (nd.op) {
      case CircuitOp::Const:
        if constexpr (std::is_same_v<T, double>)
          val[id] = to_double(nd.value);
        else
          val[id] = nd.value;
        break;
      case CircuitOp::Input: val[id] = inputs.at(nd.a); break;
      case CircuitOp::Add: val[id] = val[nd.a] + val[nd.b]; break;
      case CircuitOp::Sub: val[id] = val[nd.a] - val[nd.b]; break;
      case CircuitOp::Mul: val[id] = val[nd.a] * val[nd.b]; break;
      case CircuitOp::Div:
        if (val[nd.b] == T(0)) throw std::domain_error("eval_circuit: division by zero");
        val[id] = val[nd.a] / val[nd.b];
        break;
      case CircuitOp::Max: val[id] = std::max(val[nd.a], val[nd.b]); break;
      case CircuitOp::Min: val[id] = std::min(val[nd.a], val[nd.b]); break;
    }
  }
  std::vector<T> out;
  out.reserve(c.outputs.size());
  for (int id : c.outputs) out.push_back(val.at(id));
  return out;
}

// Appends nodes with value numbering (identical subexpressions are shared) and sound local
// simplifications; throws once the node budget is exhausted.
class CircuitBuilder {
 public:
  explicit CircuitBuilder(std::size_t node_budget = 2000000) : budget_(node_budget) {}

  int input(int index) {
    auto it = inputs_.find(index);
    if (it != inputs_.end()) return it->second;
    int id = append({CircuitOp::Input, index, -1, Rat(0)});
    dag_.num_inputs = std::max(dag_.num_inputs, index + 1);
    inputs_[index] = id;
    return id;
  }

  int constant(const Rat& v) {
    auto it = consts_.find(v);
    if (it != consts_.end()) return it->second;
    int id = append({CircuitOp::Const, -1, -1, v});
    consts_[v] = id;
    return id;
  }

  int add(int x, int y) {
    if (is_const(x, 0)) return y;
    if (is_const(y, 0)) return x;
    return binary(CircuitOp::Add, x, y, true);
  }
  int sub(int x, int y) {
    if (is_const(y, 0)) return x;
    return binary(CircuitOp::Sub, x, y, false);
  }
  int mul(int x, int y) {
    if (is_const(x, 1)) return y;
    if (is_const(y, 1)) return x;
    if (is_const(x, 0) || is_const(y, 0)) return constant(Rat(0));
    return binary(CircuitOp::Mul, x, y, true);
  }
  int div(int x, int y) { return binary(CircuitOp::Div, x, y, false); }
  int max2(int x, int y) {
    if (x == y) return x;
    return binary(CircuitOp::Max, x, y, true);
  }
  int min2(int x, int y) {
    if (x == y) return x;
    return binary(CircuitOp::Min, x, y, true);
  }

  // min(hi, max(lo, x))
  int clamp(int x, int lo, int hi) { return min2(hi, max2(lo, x)); }

  // Horner evaluation of a polynomial with rational coefficients (constant term first).
  int polynomial(const std::vector<Rat>& coeffs, int x) {
    if (coeffs.empty()) return constant(Rat(0));
    int acc = constant(coeffs.back());
    for (int k = static_cast<int>(coeffs.size()) - 2; k >= 0; --k)
      acc = add(constant(coeffs[k]), mul(acc, x));
    return acc;
  }

  void mark_output(int id) { dag_.outputs.push_back(id); }
  const CircuitDag& dag() const { return dag_; }
  CircuitDag take() { return std::move(dag_); }

 private:
  bool is_const(int id, int v) const {
    const auto& nd = dag_.nodes[id];
    return nd.op == CircuitOp::Const && nd.value == v;
  }

  int binary(CircuitOp op, int x, int y, bool commutative) {
    if (commutative && x > y) std::swap(x, y);
    const auto& nx = dag_.nodes[x];
    const auto& ny = dag_.nodes[y];
    if (nx.op == CircuitOp::Const && ny.op == CircuitOp::Const) {
      switch (op) {
        case CircuitOp::Add: return constant(nx.value + ny.value);
        case CircuitOp::Sub: return constant(nx.value - ny.value);
        case CircuitOp::Mul: return constant(nx.value * ny.value);
        case CircuitOp::Div:
          if (ny.value == 0) throw std::domain_error("circuit: division by zero constant");
          return constant(nx.value / ny.value);
        case CircuitOp::Max: return constant(std::max(nx.value, ny.value));
        case CircuitOp::Min: return constant(std::min(nx.value, ny.value));
        default: break;
      }
    }
    std::array<int, 3> key{static_cast<int>(op), x, y};
    auto it = cse_.find(key);
    if (it != cse_.end()) return it->second;
    int id = append({op, x, y, Rat(0)});
    cse_[key] = id;
    return id;
  }

  int append(CircuitNode nd) {
    if (dag_.nodes.size() >= budget_)
      throw resource_error("circuit: node budget of " + std::to_string(budget_) + " exhausted");
    dag_.nodes.push_back(std::move(nd));
    return static_cast<int>(dag_.nodes.size()) - 1;
  }

  CircuitDag dag_;
  std::size_t budget_;
  std::map<int, int> inputs_;
  std::map<Rat, int> consts_;
  std::map<std::array<int, 3>, int> cse_;
};

// Line format: one node per line as "id op operands", constants carry their value and input
// nodes their coordinate index; a final "outputs:" line lists the output node ids.
inline std::string serialize_circuit(const CircuitDag& c) {
  std::ostringstream os;
  for (std::size_t id = 0; id < c.nodes.size(); ++id) {
    const auto& nd = c.nodes[id];
    os << id << ' ' << op_name(nd.op);
    switch (nd.op) {
      case CircuitOp::Const: os << ' ' << format_rational(nd.value); break;
      case CircuitOp::Input: os << ' ' << nd.a; break;
      default: os << ' ' << nd.a << ' ' << nd.b; break;
    }
    os << '\n';
  }
  os << "outputs:";
  for (int id : c.outputs) os << ' ' << id;
  os << '\n';
  return os.str();
}

inline CircuitDag parse_circuit(const std::string& text) {
  CircuitDag c;
  std::istringstream is(text);
  std::string line;
  bool saw_outputs = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string first;
    ls >> first;
    if (first == "outputs:") {
      int id;
      while (ls >> id) {
        if (id < 0 || id >= static_cast<int>(c.nodes.size()))
          throw validation_error("circuit: output id out of range");
        c.outputs.push_back(id);
      }
      saw_outputs = true;
      break;
    }
    int id = -1;
    try {
      id = std::stoi(first);
    } catch (const std::exception&) {
      throw validation_error("circuit: bad node id '" + first + "'");
    }
    if (id != static_cast<int>(c.nodes.size()))
      throw validation_error("circuit: node ids must be consecutive from 0");
    std::string opname;
    ls >> opname;
    CircuitNode nd;
    auto need_operands = [&](CircuitOp op) {
      nd.op = op;
      if (!(ls >> nd.a >> nd.b)) throw validation_error("circuit: missing operands");
      if (nd.a < 0 || nd.a >= id || nd.b < 0 || nd.b >= id)
        throw validation_error("circuit: operands must reference earlier nodes");
    };
    if (opname == "add") need_operands(CircuitOp::Add);
    else if (opname == "sub") need_operands(CircuitOp::Sub);
    else if (opname == "mul") need_operands(CircuitOp::Mul);
    else if (opname == "div") need_operands(CircuitOp::Div);
    else if (opname == "max") need_operands(CircuitOp::Max);
    else if (opname == "min") need_operands(CircuitOp::Min);
    else if (opname == "const") {
      nd.op = CircuitOp::Const;
      std::string v;
      if (!(ls >> v)) throw validation_error("circuit: missing constant");
      try {
        nd.value = parse_rational(v);
      } catch (const std::exception&) {
        throw validation_error("circuit: bad constant '" + v + "'");
      }
    } else if (opname == "input") {
      nd.op = CircuitOp::Input;
      if (!(ls >> nd.a) || nd.a < 0) throw validation_error("circuit: bad input index");
      c.num_inputs = std::max(c.num_inputs, nd.a + 1);
    } else {
      throw validation_error("circuit: unknown op '" + opname + "'");
    }
    c.nodes.push_back(std::move(nd));
  }
  if (!saw_outputs) throw validation_error("circuit: missing outputs line");
  return c;
}

}  // namespace fpa::brouwer
