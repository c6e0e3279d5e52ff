#pragma once

#include <memory>
#include <string>
#include <vector>

#include "nlslab/common.hpp"

namespace nlslab::expr {

// Grammar (lowest to highest binding):
//   + -      binary, left associative
//   * /      binary, left associative
//   + -      unary prefix
//   ^        binary, right associative (-x^2 == -(x^2))
// Atoms: numbers (1, 2.5, 1e-3), x1 x2 x3, pi, i, calls f(expr) with
// f in {sin, cos, exp, tanh, sech, sqrt}, parenthesized expressions.
// Arithmetic is complex throughout.

enum class Op : unsigned char { Const, Var, Neg, Add, Sub, Mul, Div, Pow, PowInt, Sin, Cos, Exp, Tanh, Sech, Sqrt };

struct Instr {
  Op op;
  int arg = 0;  // variable index, constant index or integer exponent
};

class Program {
 public:
  cplx eval(double x1, double x2, double x3) const;
  bool is_constant() const { return code_.size() == 1 && code_[0].op == Op::Const; }
  cplx constant_value() const { return consts_.at(0); }
  const std::vector<Instr>& code() const { return code_; }
  const std::string& source() const { return source_; }

 private:
  friend Program compile(const std::string& text);
  std::vector<Instr> code_;
  std::vector<cplx> consts_;
  int max_depth_ = 0;
  std::string source_;
};

// Throws ParseError with the byte offset of the offending token.
Program compile(const std::string& text);

}  // namespace nlslab::expr
