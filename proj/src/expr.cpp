#include "nlslab/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace nlslab::expr {
namespace {

enum class Tok { Num, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok kind;
  std::size_t offset;
  std::string text;
  double value = 0;
};

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char ch = s[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      const char* begin = s.c_str() + i;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) throw ParseError("malformed number", i);
      out.push_back({Tok::Num, i, std::string(begin, static_cast<const char*>(end)), v});
      i += static_cast<std::size_t>(end - begin);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Tok::Ident, i, s.substr(i, j - i)});
      i = j;
      continue;
    }
    Tok k;
    switch (ch) {
      case '+': k = Tok::Plus; break;
      case '-': k = Tok::Minus; break;
      case '*': k = Tok::Star; break;
      case '/': k = Tok::Slash; break;
      case '^': k = Tok::Caret; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      default: throw ParseError(std::string("unexpected character '") + ch + "'", i);
    }
    out.push_back({k, i, std::string(1, ch)});
    ++i;
  }
  out.push_back({Tok::End, s.size(), ""});
  return out;
}

struct Node {
  Op op;
  cplx value{};
  int var = 0;
  std::unique_ptr<Node> a, b;
};
using NodeP = std::unique_ptr<Node>;

NodeP make(Op op, NodeP a = nullptr, NodeP b = nullptr) {
  auto n = std::make_unique<Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodeP make_const(cplx v) {
  auto n = make(Op::Const);
  n->value = v;
  return n;
}

int infix_power(Tok t) {
  switch (t) {
    case Tok::Plus:
    case Tok::Minus: return 10;
    case Tok::Star:
    case Tok::Slash: return 20;
    case Tok::Caret: return 40;
    default: return -1;
  }
}

constexpr int kPrefixPower = 30;

class Parser {
 public:
  explicit Parser(const std::string& s) : toks_(lex(s)) {}

  NodeP parse() {
    if (peek().kind == Tok::End) throw ParseError("empty expression", 0);
    NodeP n = expression(0, nullptr);
    if (peek().kind != Tok::End) {
      const Token& t = peek();
      throw ParseError(t.kind == Tok::RParen ? "unmatched ')'" : "unexpected token '" + t.text + "'", t.offset);
    }
    return n;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  // `owner` is the operator token that demanded this operand; a missing
  // operand is reported at its offset.
  NodeP expression(int min_power, const Token* owner) {
    NodeP lhs = prefix(owner);
    for (;;) {
      const Token& t = peek();
      const int p = infix_power(t.kind);
      if (p < 0 || p < min_power) break;
      const Token& op = next();
      // '^' is right associative: the right operand may contain another '^'.
      NodeP rhs = expression(op.kind == Tok::Caret ? p : p + 1, &op);
      Op o = Op::Add;
      switch (op.kind) {
        case Tok::Plus: o = Op::Add; break;
        case Tok::Minus: o = Op::Sub; break;
        case Tok::Star: o = Op::Mul; break;
        case Tok::Slash: o = Op::Div; break;
        case Tok::Caret: o = Op::Pow; break;
        default: break;
      }
      lhs = make(o, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  NodeP prefix(const Token* owner) {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::End:
        if (owner) throw ParseError("missing operand after '" + owner->text + "'", owner->offset);
        throw ParseError("unexpected end of expression", t.offset);
      case Tok::Num:
        next();
        return make_const(t.value);
      case Tok::Minus:
      case Tok::Plus: {
        const Token& op = next();
        NodeP operand = expression(kPrefixPower, &op);
        return op.kind == Tok::Minus ? make(Op::Neg, std::move(operand)) : std::move(operand);
      }
      case Tok::LParen: {
        const Token& open = next();
        NodeP inner = expression(0, &open);
        if (peek().kind != Tok::RParen) {
          if (peek().kind == Tok::End) throw ParseError("unclosed '('", open.offset);
          throw ParseError("expected ')'", peek().offset);
        }
        next();
        return inner;
      }
      case Tok::Ident: return identifier();
      default:
        throw ParseError("unexpected token '" + t.text + "'", t.offset);
    }
  }

  NodeP identifier() {
    const Token& t = next();
    const std::string& s = t.text;
    if (s == "x1" || s == "x2" || s == "x3") {
      auto n = make(Op::Var);
      n->var = s[1] - '1';
      return n;
    }
    if (s == "pi") return make_const(3.14159265358979323846);
    if (s == "i") return make_const(cplx(0, 1));
    static const std::pair<const char*, Op> funcs[] = {{"sin", Op::Sin},   {"cos", Op::Cos},
                                                       {"exp", Op::Exp},   {"tanh", Op::Tanh},
                                                       {"sech", Op::Sech}, {"sqrt", Op::Sqrt}};
    for (const auto& [name, op] : funcs) {
      if (s != name) continue;
      if (peek().kind != Tok::LParen) throw ParseError("expected '(' after " + s, peek().offset);
      const Token& open = next();
      NodeP arg = expression(0, &open);
      if (peek().kind != Tok::RParen) {
        if (peek().kind == Tok::End) throw ParseError("unclosed '('", open.offset);
        throw ParseError("expected ')'", peek().offset);
      }
      next();
      return make(op, std::move(arg));
    }
    throw ParseError("unknown identifier '" + s + "'", t.offset);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

cplx apply_unary(Op op, cplx a) {
  switch (op) {
    case Op::Neg: return -a;
    case Op::Sin: return a.imag() == 0 ? cplx(std::sin(a.real())) : std::sin(a);
    case Op::Cos: return a.imag() == 0 ? cplx(std::cos(a.real())) : std::cos(a);
    case Op::Exp: return a.imag() == 0 ? cplx(std::exp(a.real())) : std::exp(a);
    case Op::Tanh: return a.imag() == 0 ? cplx(std::tanh(a.real())) : std::tanh(a);
    case Op::Sech: return a.imag() == 0 ? cplx(1.0 / std::cosh(a.real())) : 1.0 / std::cosh(a);
    case Op::Sqrt:
      return (a.imag() == 0 && a.real() >= 0) ? cplx(std::sqrt(a.real())) : std::sqrt(a);
    default: return a;
  }
}

cplx int_pow(cplx a, int n) {
  bool inv = n < 0;
  unsigned e = static_cast<unsigned>(inv ? -n : n);
  cplx r = 1.0, base = a;
  while (e) {
    if (e & 1u) r *= base;
    base *= base;
    e >>= 1u;
  }
  return inv ? 1.0 / r : r;
}

bool small_int(cplx v, int& n) {
  if (v.imag() != 0 || std::abs(v.real()) > 64 || std::round(v.real()) != v.real()) return false;
  n = static_cast<int>(v.real());
  return true;
}

cplx apply_binary(Op op, cplx a, cplx b) {
  switch (op) {
    case Op::Add: return a + b;
    case Op::Sub: return a - b;
    case Op::Mul: return a * b;
    case Op::Div: return a / b;
    case Op::Pow: {
      int n;
      if (small_int(b, n)) return int_pow(a, n);
      if (a.imag() == 0 && b.imag() == 0 && a.real() >= 0) return std::pow(a.real(), b.real());
      return std::pow(a, b);
    }
    default: return a;
  }
}

bool is_binary(Op op) {
  return op == Op::Add || op == Op::Sub || op == Op::Mul || op == Op::Div || op == Op::Pow;
}

void fold(NodeP& n) {
  if (n->a) fold(n->a);
  if (n->b) fold(n->b);
  const bool ca = n->a && n->a->op == Op::Const;
  const bool cb = n->b && n->b->op == Op::Const;
  if (is_binary(n->op)) {
    if (ca && cb) {
      // A literal division by zero stays in the code so that it surfaces as an
      // evaluation error.
      if (n->op == Op::Div && n->b->value == cplx(0)) return;
      n = make_const(apply_binary(n->op, n->a->value, n->b->value));
    }
    return;
  }
  if (n->op != Op::Const && n->op != Op::Var && ca) n = make_const(apply_unary(n->op, n->a->value));
}

}  // namespace

Program compile(const std::string& text) {
  Parser p(text);
  NodeP root = p.parse();
  fold(root);
  Program prog;
  prog.source_ = text;
  int depth = 0;
  // Post-order emission.
  auto emit = [&](auto&& self, const Node& n) -> void {
    switch (n.op) {
      case Op::Const:
        prog.code_.push_back({Op::Const, static_cast<int>(prog.consts_.size())});
        prog.consts_.push_back(n.value);
        prog.max_depth_ = std::max(prog.max_depth_, ++depth);
        return;
      case Op::Var:
        prog.code_.push_back({Op::Var, n.var});
        prog.max_depth_ = std::max(prog.max_depth_, ++depth);
        return;
      default: break;
    }
    if (n.op == Op::Pow && n.b->op == Op::Const) {
      int e;
      if (small_int(n.b->value, e)) {
        self(self, *n.a);
        prog.code_.push_back({Op::PowInt, e});
        return;
      }
    }
    self(self, *n.a);
    if (n.b) {
      self(self, *n.b);
      --depth;
    }
    prog.code_.push_back({n.op, 0});
  };
  emit(emit, *root);
  return prog;
}

cplx Program::eval(double x1, double x2, double x3) const {
  constexpr int kInline = 32;
  cplx inline_stack[kInline];
  std::vector<cplx> heap;
  cplx* st = inline_stack;
  if (max_depth_ > kInline) {
    heap.resize(max_depth_);
    st = heap.data();
  }
  const double vars[3] = {x1, x2, x3};
  int sp = 0;
  for (const Instr& in : code_) {
    switch (in.op) {
      case Op::Const: st[sp++] = consts_[in.arg]; break;
      case Op::Var: st[sp++] = vars[in.arg]; break;
      case Op::PowInt: st[sp - 1] = int_pow(st[sp - 1], in.arg); break;
      case Op::Add:
      case Op::Sub:
      case Op::Mul:
      case Op::Pow:
        --sp;
        st[sp - 1] = apply_binary(in.op, st[sp - 1], st[sp]);
        break;
      case Op::Div:
        --sp;
        if (st[sp] == cplx(0)) {
          std::ostringstream os;
          os << "division by zero evaluating '" << source_ << "' at (" << x1 << ", " << x2 << ", "
             << x3 << ")";
          throw EvaluationError(os.str());
        }
        st[sp - 1] /= st[sp];
        break;
      default: st[sp - 1] = apply_unary(in.op, st[sp - 1]); break;
    }
  }
  return st[0];
}

}  // namespace nlslab::expr
