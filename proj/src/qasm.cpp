#include "ionroute/circuit.hpp"
#include "ionroute/errors.hpp"
#include "ionroute/log.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

namespace ionroute {

namespace {

struct GateInfo {
  std::string_view name;
  int params;
  int qubits;
};

constexpr GateInfo kGates[] = {
    {"u1", 1, 1}, {"u2", 2, 1}, {"u3", 3, 1},  {"rz", 1, 1},  {"rx", 1, 1},
    {"ry", 1, 1}, {"h", 0, 1},  {"x", 0, 1},   {"y", 0, 1},   {"z", 0, 1},
    {"sx", 0, 1}, {"t", 0, 1},  {"tdg", 0, 1}, {"s", 0, 1},   {"sdg", 0, 1},
    {"cx", 0, 2}, {"cz", 0, 2}, {"rzz", 1, 2}, {"swap", 0, 2},
};

const GateInfo* find_gate(std::string_view name) {
  for (const auto& g : kGates) {
    if (g.name == name) {
      return &g;
    }
  }
  return nullptr;
}

enum class Tok { Ident, Number, String, Symbol, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 0;
  std::size_t col = 0;
};

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_space();
    Token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= src_.size()) {
      return t;
    }
    const char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = Tok::Ident;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        t.text += advance();
      }
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      t.kind = Tok::Number;
      while (pos_ < src_.size() &&
             (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) {
        t.text += advance();
      }
      if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
        t.text += advance();
        if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) {
          t.text += advance();
        }
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          t.text += advance();
        }
      }
    } else if (c == '"') {
      t.kind = Tok::String;
      advance();
      while (pos_ < src_.size() && src_[pos_] != '"') {
        t.text += advance();
      }
      if (pos_ >= src_.size()) {
        throw ParseError("unterminated string", t.line, t.col);
      }
      advance();
    } else if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
      t.kind = Tok::Symbol;
      t.text = "->";
      advance();
      advance();
    } else if (std::string_view("; ,()[]{}+-*/^").find(c) != std::string_view::npos) {
      t.kind = Tok::Symbol;
      t.text = std::string(1, advance());
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", t.line, t.col);
    }
    return t;
  }

private:
  char advance() {
    const char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') {
          advance();
        }
      } else {
        return;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

struct Operand {
  std::string reg;
  std::optional<int> index;
  Token at;
};

class Parser {
public:
  explicit Parser(std::string_view src) : lex_(src) { tok_ = lex_.next(); }

  Circuit run() {
    while (tok_.kind != Tok::End) {
      statement();
    }
    if (!qreg_) {
      // A program without a quantum register is an empty circuit.
      circuit_.num_qubits = 0;
    }
    return std::move(circuit_);
  }

private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, tok_.line, tok_.col);
  }

  bool is_symbol(std::string_view s) const {
    return tok_.kind == Tok::Symbol && tok_.text == s;
  }

  void expect_symbol(std::string_view s) {
    if (!is_symbol(s)) {
      fail("expected '" + std::string(s) + "', found '" + tok_.text + "'");
    }
    tok_ = lex_.next();
  }

  std::string expect_ident() {
    if (tok_.kind != Tok::Ident) {
      fail("expected identifier, found '" + tok_.text + "'");
    }
    std::string s = tok_.text;
    tok_ = lex_.next();
    return s;
  }

  int expect_int() {
    if (tok_.kind != Tok::Number) {
      fail("expected integer, found '" + tok_.text + "'");
    }
    int v = 0;
    const auto* first = tok_.text.data();
    const auto* last = first + tok_.text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || v < 0) {
      fail("expected non-negative integer, found '" + tok_.text + "'");
    }
    tok_ = lex_.next();
    return v;
  }

  void statement() {
    const Token start = tok_;
    if (tok_.kind != Tok::Ident) {
      fail("expected statement, found '" + tok_.text + "'");
    }
    const std::string word = tok_.text;
    if (word == "OPENQASM") {
      tok_ = lex_.next();
      if (tok_.kind != Tok::Number || tok_.text.rfind("2", 0) != 0) {
        fail("only OpenQASM 2 is supported");
      }
      tok_ = lex_.next();
      expect_symbol(";");
    } else if (word == "include") {
      tok_ = lex_.next();
      if (tok_.kind != Tok::String) {
        fail("expected include file name");
      }
      tok_ = lex_.next();
      expect_symbol(";");
    } else if (word == "qreg") {
      tok_ = lex_.next();
      if (qreg_) {
        throw ParseError("only one qreg is supported", start.line, start.col);
      }
      qreg_ = expect_ident();
      expect_symbol("[");
      circuit_.num_qubits = expect_int();
      expect_symbol("]");
      expect_symbol(";");
    } else if (word == "creg") {
      tok_ = lex_.next();
      expect_ident();
      expect_symbol("[");
      expect_int();
      expect_symbol("]");
      expect_symbol(";");
    } else if (word == "measure" || word == "barrier") {
      logger()->warn("line {}: ignoring '{}'", start.line, word);
      while (tok_.kind != Tok::End && !is_symbol(";")) {
        tok_ = lex_.next();
      }
      expect_symbol(";");
    } else {
      gate_application();
    }
  }

  double expr() {
    double v = term();
    while (is_symbol("+") || is_symbol("-")) {
      const bool plus = tok_.text == "+";
      tok_ = lex_.next();
      const double rhs = term();
      v = plus ? v + rhs : v - rhs;
    }
    return v;
  }

  double term() {
    double v = power();
    while (is_symbol("*") || is_symbol("/")) {
      const bool mul = tok_.text == "*";
      tok_ = lex_.next();
      const double rhs = power();
      v = mul ? v * rhs : v / rhs;
    }
    return v;
  }

  double power() {
    const double base = unary();
    if (is_symbol("^")) {
      tok_ = lex_.next();
      return std::pow(base, power());
    }
    return base;
  }

  double unary() {
    if (is_symbol("-")) {
      tok_ = lex_.next();
      return -unary();
    }
    if (is_symbol("+")) {
      tok_ = lex_.next();
      return unary();
    }
    return primary();
  }

  double primary() {
    if (tok_.kind == Tok::Number) {
      double v = 0.0;
      const auto* first = tok_.text.data();
      const auto* last = first + tok_.text.size();
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec != std::errc() || ptr != last) {
        fail("malformed number '" + tok_.text + "'");
      }
      tok_ = lex_.next();
      return v;
    }
    if (is_symbol("(")) {
      tok_ = lex_.next();
      const double v = expr();
      expect_symbol(")");
      return v;
    }
    if (tok_.kind == Tok::Ident) {
      const std::string name = tok_.text;
      if (name == "pi") {
        tok_ = lex_.next();
        return std::numbers::pi;
      }
      double (*fn)(double) = nullptr;
      if (name == "sin") {
        fn = [](double x) { return std::sin(x); };
      } else if (name == "cos") {
        fn = [](double x) { return std::cos(x); };
      } else if (name == "tan") {
        fn = [](double x) { return std::tan(x); };
      } else if (name == "exp") {
        fn = [](double x) { return std::exp(x); };
      } else if (name == "ln") {
        fn = [](double x) { return std::log(x); };
      } else if (name == "sqrt") {
        fn = [](double x) { return std::sqrt(x); };
      }
      if (fn != nullptr) {
        tok_ = lex_.next();
        expect_symbol("(");
        const double v = expr();
        expect_symbol(")");
        return fn(v);
      }
    }
    fail("unexpected '" + tok_.text + "' in parameter expression");
  }

  Operand operand() {
    Operand op;
    op.at = tok_;
    op.reg = expect_ident();
    if (is_symbol("[")) {
      tok_ = lex_.next();
      op.index = expect_int();
      expect_symbol("]");
    }
    if (!qreg_ || op.reg != *qreg_) {
      throw ParseError("unknown quantum register '" + op.reg + "'", op.at.line,
                       op.at.col);
    }
    if (op.index && *op.index >= circuit_.num_qubits) {
      throw ParseError("qubit index " + std::to_string(*op.index) + " out of range",
                       op.at.line, op.at.col);
    }
    return op;
  }

  void gate_application() {
    const Token start = tok_;
    const std::string name = expect_ident();
    const GateInfo* info = find_gate(name);
    if (info == nullptr) {
      throw ParseError("unsupported gate '" + name + "'", start.line, start.col);
    }
    std::vector<double> params;
    if (is_symbol("(")) {
      tok_ = lex_.next();
      if (!is_symbol(")")) {
        params.push_back(expr());
        while (is_symbol(",")) {
          tok_ = lex_.next();
          params.push_back(expr());
        }
      }
      expect_symbol(")");
    }
    if (static_cast<int>(params.size()) != info->params) {
      throw ParseError("gate '" + name + "' takes " + std::to_string(info->params) +
                           " parameter(s)",
                       start.line, start.col);
    }
    std::vector<Operand> ops{operand()};
    while (is_symbol(",")) {
      tok_ = lex_.next();
      ops.push_back(operand());
    }
    expect_symbol(";");
    if (static_cast<int>(ops.size()) != info->qubits) {
      throw ParseError("gate '" + name + "' takes " + std::to_string(info->qubits) +
                           " qubit(s)",
                       start.line, start.col);
    }

    // Whole-register operands broadcast across the register.
    const bool broadcast =
        std::any_of(ops.begin(), ops.end(), [](const Operand& o) { return !o.index; });
    const int reps = broadcast ? circuit_.num_qubits : 1;
    for (int r = 0; r < reps; ++r) {
      std::vector<QubitId> qubits;
      for (const auto& o : ops) {
        qubits.push_back(o.index ? *o.index : r);
      }
      if (qubits.size() == 2 && qubits[0] == qubits[1]) {
        throw ParseError("gate '" + name + "' has identical operands", start.line,
                         start.col);
      }
      if (name == "swap") {
        const QubitId a = qubits[0];
        const QubitId b = qubits[1];
        circuit_.gates.push_back({"cx", {}, {a, b}});
        circuit_.gates.push_back({"cx", {}, {b, a}});
        circuit_.gates.push_back({"cx", {}, {a, b}});
      } else {
        circuit_.gates.push_back({name, params, std::move(qubits)});
      }
    }
  }

  Lexer lex_;
  Token tok_;
  std::optional<std::string> qreg_;
  Circuit circuit_;
};

void append_double(std::string& out, double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

} // namespace

const std::vector<std::string>& supported_gates() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& g : kGates) {
      out.emplace_back(g.name);
    }
    return out;
  }();
  return names;
}

void Circuit::validate() const {
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const auto& g = gates[i];
    if (g.qubits.empty() || g.qubits.size() > 2) {
      throw ParseError("gate " + std::to_string(i) + " must act on 1 or 2 qubits");
    }
    for (QubitId q : g.qubits) {
      if (q < 0 || q >= num_qubits) {
        throw ParseError("gate " + std::to_string(i) + " operand out of range");
      }
    }
    if (g.two_qubit() && g.qubits[0] == g.qubits[1]) {
      throw ParseError("gate " + std::to_string(i) + " has identical operands");
    }
  }
}

std::size_t Circuit::two_qubit_gate_count() const {
  return static_cast<std::size_t>(
      std::count_if(gates.begin(), gates.end(), [](const Gate& g) { return g.two_qubit(); }));
}

Circuit parse_qasm(std::string_view text) {
  Circuit c = Parser(text).run();
  c.validate();
  return c;
}

std::string emit_qasm(const Circuit& c) {
  std::string out = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
  out += "qreg q[" + std::to_string(c.num_qubits) + "];\n";
  for (const auto& g : c.gates) {
    out += g.name;
    if (!g.params.empty()) {
      out += '(';
      for (std::size_t i = 0; i < g.params.size(); ++i) {
        if (i != 0) {
          out += ',';
        }
        append_double(out, g.params[i]);
      }
      out += ')';
    }
    out += ' ';
    for (std::size_t i = 0; i < g.qubits.size(); ++i) {
      if (i != 0) {
        out += ',';
      }
      out += "q[" + std::to_string(g.qubits[i]) + "]";
    }
    out += ";\n";
  }
  return out;
}

} // namespace ionroute
