#include "bdsim/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstring>
#include <functional>

namespace bdsim {

namespace {

using Fn = double (*)(double);
struct NamedFn {
  const char* name;
  Fn fn;
};
const NamedFn kFns[] = {
    {"sin", std::sin},   {"cos", std::cos},   {"tan", std::tan},  {"exp", std::exp},
    {"log", std::log},   {"sqrt", std::sqrt}, {"sinh", std::sinh}, {"cosh", std::cosh},
    {"tanh", std::tanh}, {"atan", std::atan}, {"abs", std::fabs},
};
constexpr int kNumFns = sizeof(kFns) / sizeof(kFns[0]);

struct Parser {
  const std::string& s;
  size_t pos = 0;
  const std::vector<std::string>& vars;
  std::vector<Expression>* unused = nullptr;

  explicit Parser(const std::string& text, const std::vector<std::string>& variables)
      : s(text), vars(variables) {}

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw StructuralError("expression parse error at position " + std::to_string(pos) + " in \"" +
                          s + "\": " + what);
  }
};

struct Compiler {
  Parser p;
  std::vector<char> out_ops;  // staging not needed; emit directly
  std::vector<std::pair<int, double>> dummy;
  std::vector<std::tuple<int, double, int>> prog;  // (op, value, index)

  Compiler(const std::string& text, const std::vector<std::string>& vars) : p(text, vars) {}

  void emit(int op, double v = 0.0, int idx = 0) { prog.emplace_back(op, v, idx); }

  // grammar: expr := term (('+'|'-') term)*
  //          term := factor (('*'|'/') factor)*
  //          factor := '-' factor | power
  //          power := atom ('^' factor)?          (right associative)
  //          atom := number | name | name '(' expr ')' | '(' expr ')'
  void expr() {
    term();
    for (;;) {
      if (p.eat('+')) {
        term();
        emit(2);
      } else if (p.eat('-')) {
        term();
        emit(3);
      } else
        break;
    }
  }
  void term() {
    factor();
    for (;;) {
      if (p.eat('*')) {
        factor();
        emit(4);
      } else if (p.eat('/')) {
        factor();
        emit(5);
      } else
        break;
    }
  }
  void factor() {
    if (p.eat('-')) {
      factor();
      emit(7);
      return;
    }
    power();
  }
  void power() {
    atom();
    if (p.eat('^')) {
      factor();
      emit(6);
    }
  }
  void atom() {
    p.skip();
    if (p.pos >= p.s.size()) p.fail("unexpected end of input");
    char c = p.s[p.pos];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      char* end = nullptr;
      double v = std::strtod(p.s.c_str() + p.pos, &end);
      if (end == p.s.c_str() + p.pos) p.fail("bad number");
      p.pos = end - p.s.c_str();
      emit(0, v);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = p.pos;
      while (p.pos < p.s.size() &&
             (std::isalnum(static_cast<unsigned char>(p.s[p.pos])) || p.s[p.pos] == '_'))
        ++p.pos;
      std::string name = p.s.substr(start, p.pos - start);
      if (p.eat('(')) {
        int id = -1;
        for (int k = 0; k < kNumFns; ++k)
          if (name == kFns[k].name) id = k;
        if (id < 0) p.fail("unknown function '" + name + "'");
        expr();
        if (!p.eat(')')) p.fail("expected ')'");
        emit(8, 0.0, id);
        return;
      }
      if (name == "pi") {
        emit(0, M_PI);
        return;
      }
      for (size_t k = 0; k < p.vars.size(); ++k)
        if (name == p.vars[k]) {
          emit(1, 0.0, static_cast<int>(k));
          return;
        }
      p.fail("unknown variable '" + name + "'");
    }
    if (p.eat('(')) {
      expr();
      if (!p.eat(')')) p.fail("expected ')'");
      return;
    }
    p.fail(std::string("unexpected character '") + c + "'");
  }
};

}  // namespace

Expression Expression::parse(const std::string& text, const std::vector<std::string>& variables) {
  Compiler c(text, variables);
  c.expr();
  c.p.skip();
  if (c.p.pos != c.p.s.size()) c.p.fail("trailing input");
  Expression e;
  e.text_ = text;
  e.n_vars_ = static_cast<int>(variables.size());
  for (auto& [op, v, idx] : c.prog) e.prog_.push_back({static_cast<Op>(op), v, idx});
  return e;
}

Expression Expression::constant(double value) {
  Expression e;
  e.text_ = std::to_string(value);
  e.prog_.push_back({Op::Push, value, 0});
  return e;
}

double Expression::eval(const double* vars, int n_vars) const {
  if (n_vars < n_vars_) throw DomainError("expression: too few variable values supplied");
  double stack[64];
  int top = 0;
  for (const auto& in : prog_) {
    switch (in.op) {
      case Op::Push: stack[top++] = in.value; break;
      case Op::Load: stack[top++] = vars[in.index]; break;
      case Op::Add: --top; stack[top - 1] += stack[top]; break;
      case Op::Sub: --top; stack[top - 1] -= stack[top]; break;
      case Op::Mul: --top; stack[top - 1] *= stack[top]; break;
      case Op::Div: --top; stack[top - 1] /= stack[top]; break;
      case Op::Pow: --top; stack[top - 1] = std::pow(stack[top - 1], stack[top]); break;
      case Op::Neg: stack[top - 1] = -stack[top - 1]; break;
      case Op::Fun: stack[top - 1] = kFns[in.index].fn(stack[top - 1]); break;
    }
  }
  return stack[0];
}

}  // namespace bdsim
