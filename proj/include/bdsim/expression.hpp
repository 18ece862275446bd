#pragma once

#include <string>
#include <vector>

#include "bdsim/linalg.hpp"

namespace bdsim {

// Scalar expression compiled to a postfix program. Supports + - * / ^,
// unary minus, parentheses, the constant pi, functions sin cos tan exp log
// sqrt sinh cosh tanh atan abs, and the variables declared at parse time.
// Parse errors throw StructuralError; evaluation is allocation-free.
class Expression {
 public:
  static Expression parse(const std::string& text, const std::vector<std::string>& variables);
  static Expression constant(double value);

  double eval(const double* vars, int n_vars) const;
  double eval(const Vec& vars) const { return eval(vars.data(), static_cast<int>(vars.size())); }
  const std::string& text() const { return text_; }

 private:
  enum class Op : int { Push, Load, Add, Sub, Mul, Div, Pow, Neg, Fun };
  struct Instr {
    Op op;
    double value = 0.0;  // Push
    int index = 0;       // Load variable slot or Fun id
  };
  std::vector<Instr> prog_;
  std::string text_;
  int n_vars_ = 0;
};

}  // namespace bdsim
