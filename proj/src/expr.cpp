#include "prering/expr.hpp"

#include <cctype>
#include <functional>

#include "prering/decimal.hpp"
#include "prering/errors.hpp"

namespace prering {

enum class Op {
  kConst,
  kVar,  // index 0 or 1
  kPi,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kPow,  // integer exponent
  kNeg,
  kAbs,
  kSqrt,
  kSin,
  kCos,
  kMin,
  kMax,
};

struct Expr::Node {
  Op op;
  Rat value;     // kConst
  int var = 0;   // kVar
  unsigned exponent = 0;  // kPow
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

}  // namespace

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != s_.size()) err("trailing input");
    return e;
  }

 private:
  const std::string& s_;
  size_t pos_ = 0;

  [[noreturn]] void err(const std::string& what) {
    fail(ErrorCode::BadInput, "expression '" + s_ + "' at position " +
                                  std::to_string(pos_) + ": " + what);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  static NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<Expr::Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
  }

  NodePtr expr() {
    NodePtr acc = term();
    for (;;) {
      if (eat('+')) {
        acc = make(Op::kAdd, acc, term());
      } else if (eat('-')) {
        acc = make(Op::kSub, acc, term());
      } else {
        return acc;
      }
    }
  }

  NodePtr term() {
    NodePtr acc = factor();
    for (;;) {
      if (eat('*')) {
        acc = make(Op::kMul, acc, factor());
      } else if (eat('/')) {
        acc = make(Op::kDiv, acc, factor());
      } else {
        return acc;
      }
    }
  }

  NodePtr factor() {
    NodePtr base = unary();
    if (eat('^')) {
      skip_ws();
      size_t start = pos_;
      unsigned long e = 0;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        e = e * 10 + static_cast<unsigned long>(s_[pos_] - '0');
        if (e > 64) err("exponent too large");
        ++pos_;
      }
      if (pos_ == start) err("expected integer exponent");
      auto n = std::make_shared<Expr::Node>();
      n->op = Op::kPow;
      n->exponent = static_cast<unsigned>(e);
      n->a = base;
      return n;
    }
    return base;
  }

  NodePtr unary() {
    if (eat('-')) return make(Op::kNeg, unary());
    return primary();
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= s_.size()) err("unexpected end of input");
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) return number();
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!eat(')')) err("expected ')'");
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) return ident();
    err("unexpected character");
  }

  NodePtr number() {
    // Accumulate digit-by-digit: Int's string constructor would read a
    // leading zero as an octal prefix.
    auto digits = [&](Int* out) {
      bool any = false;
      Int v = 0;
      while (pos_ < s_.size() &&
             std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        v = v * 10 + (s_[pos_++] - '0');
        any = true;
      }
      *out = v;
      return any;
    };
    Int ip;
    digits(&ip);
    Rat v;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      size_t frac_start = pos_;
      Int fp;
      if (!digits(&fp)) err("expected fractional digits");
      unsigned places = static_cast<unsigned>(pos_ - frac_start);
      v = Rat(ip * pow10(places) + fp, pow10(places));
    } else if (pos_ < s_.size() && s_[pos_] == '/') {
      // Only treat '/' as part of the literal when followed by digits with
      // no intervening space; otherwise it is the division operator.
      size_t save = pos_;
      ++pos_;
      Int qi;
      if (pos_ < s_.size() &&
          std::isdigit(static_cast<unsigned char>(s_[pos_])) && digits(&qi)) {
        if (qi == 0) err("zero denominator in literal");
        v = Rat(ip, qi);
      } else {
        pos_ = save;
        v = Rat(ip);
      }
    } else {
      v = Rat(ip);
    }
    auto n = std::make_shared<Expr::Node>();
    n->op = Op::kConst;
    n->value = v;
    return n;
  }

  NodePtr ident() {
    std::string name;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])))) {
      name += s_[pos_++];
    }
    if (name == "x" || name == "x1") {
      auto n = std::make_shared<Expr::Node>();
      n->op = Op::kVar;
      n->var = 0;
      return n;
    }
    if (name == "x2") {
      auto n = std::make_shared<Expr::Node>();
      n->op = Op::kVar;
      n->var = 1;
      return n;
    }
    if (name == "pi") return make(Op::kPi);
    Op op;
    if (name == "abs") {
      op = Op::kAbs;
    } else if (name == "sqrt") {
      op = Op::kSqrt;
    } else if (name == "sin") {
      op = Op::kSin;
    } else if (name == "cos") {
      op = Op::kCos;
    } else if (name == "min") {
      op = Op::kMin;
    } else if (name == "max") {
      op = Op::kMax;
    } else {
      err("unknown identifier '" + name + "'");
    }
    if (!eat('(')) err("expected '(' after function name");
    NodePtr a = expr();
    NodePtr b;
    if (op == Op::kMin || op == Op::kMax) {
      if (!eat(',')) err("expected ',' in min/max");
      b = expr();
    }
    if (!eat(')')) err("expected ')'");
    return make(op, a, b);
  }
};

bool node_exact(const Expr::Node* n) {
  if (!n) return true;
  switch (n->op) {
    case Op::kPi:
    case Op::kSqrt:
    case Op::kSin:
    case Op::kCos:
      return false;
    default:
      return node_exact(n->a.get()) && node_exact(n->b.get());
  }
}

int node_arity(const Expr::Node* n) {
  if (!n) return 0;
  if (n->op == Op::kVar) return n->var + 1;
  return std::max(node_arity(n->a.get()), node_arity(n->b.get()));
}

Rat eval_exact_node(const Expr::Node* n, const std::vector<Rat>& args) {
  switch (n->op) {
    case Op::kConst: return n->value;
    case Op::kVar:
      if (n->var >= static_cast<int>(args.size()))
        fail(ErrorCode::OracleFailure, "missing argument for variable");
      return args[n->var];
    case Op::kAdd: return eval_exact_node(n->a.get(), args) + eval_exact_node(n->b.get(), args);
    case Op::kSub: return eval_exact_node(n->a.get(), args) - eval_exact_node(n->b.get(), args);
    case Op::kMul: return eval_exact_node(n->a.get(), args) * eval_exact_node(n->b.get(), args);
    case Op::kDiv: {
      Rat d = eval_exact_node(n->b.get(), args);
      if (d == 0) fail(ErrorCode::OracleFailure, "division by zero");
      return eval_exact_node(n->a.get(), args) / d;
    }
    case Op::kPow: return pow_rat(eval_exact_node(n->a.get(), args), n->exponent);
    case Op::kNeg: return -eval_exact_node(n->a.get(), args);
    case Op::kAbs: return abs_rat(eval_exact_node(n->a.get(), args));
    case Op::kMin: {
      Rat a = eval_exact_node(n->a.get(), args), b = eval_exact_node(n->b.get(), args);
      return a < b ? a : b;
    }
    case Op::kMax: {
      Rat a = eval_exact_node(n->a.get(), args), b = eval_exact_node(n->b.get(), args);
      return a > b ? a : b;
    }
    default:
      fail(ErrorCode::OracleFailure, "non-exact node in exact evaluation");
  }
}

// Decimal-mode evaluation; `digits` carries a per-depth guard so the
// final absolute error stays below 10^-target.
Rat eval_dec_node(const Expr::Node* n, const std::vector<Rat>& args,
                  unsigned digits) {
  switch (n->op) {
    case Op::kConst: return n->value;
    case Op::kVar:
      if (n->var >= static_cast<int>(args.size()))
        fail(ErrorCode::OracleFailure, "missing argument for variable");
      return args[n->var];
    case Op::kPi: return pi_dec(digits);
    case Op::kAdd: return eval_dec_node(n->a.get(), args, digits + 1) +
                          eval_dec_node(n->b.get(), args, digits + 1);
    case Op::kSub: return eval_dec_node(n->a.get(), args, digits + 1) -
                          eval_dec_node(n->b.get(), args, digits + 1);
    case Op::kMul: {
      // |ab - a'b'| <= (|a| + |b| + 1) * 10^-(digits+k). A first pass at
      // k = 2 covers operands with |a| + |b| <= 9; larger magnitudes get a
      // second pass with k sized from the observed bound.
      Rat a = eval_dec_node(n->a.get(), args, digits + 2);
      Rat b = eval_dec_node(n->b.get(), args, digits + 2);
      Rat mag = abs_rat(a) + abs_rat(b) + 1;
      if (mag <= 10) return a * b;
      unsigned extra = 0;
      for (Int bound(10); Rat(bound) < mag + 1; bound *= 10) ++extra;
      a = eval_dec_node(n->a.get(), args, digits + 2 + extra);
      b = eval_dec_node(n->b.get(), args, digits + 2 + extra);
      return a * b;
    }
    case Op::kDiv: {
      Rat d = eval_dec_node(n->b.get(), args, digits + 8);
      if (d == 0) fail(ErrorCode::OracleFailure, "division by zero");
      return eval_dec_node(n->a.get(), args, digits + 8) / d;
    }
    case Op::kPow: {
      Rat b = eval_dec_node(n->a.get(), args, digits + 8);
      return pow_rat(b, n->exponent);
    }
    case Op::kNeg: return -eval_dec_node(n->a.get(), args, digits);
    case Op::kAbs: return abs_rat(eval_dec_node(n->a.get(), args, digits));
    case Op::kSqrt: {
      Rat a = eval_dec_node(n->a.get(), args, digits + 4);
      if (a < 0) fail(ErrorCode::OracleFailure, "sqrt of negative value");
      return sqrt_down(a, digits + 2);
    }
    case Op::kSin: return sin_dec(eval_dec_node(n->a.get(), args, digits + 4), digits + 2);
    case Op::kCos: return cos_dec(eval_dec_node(n->a.get(), args, digits + 4), digits + 2);
    case Op::kMin: {
      Rat a = eval_dec_node(n->a.get(), args, digits);
      Rat b = eval_dec_node(n->b.get(), args, digits);
      return a < b ? a : b;
    }
    case Op::kMax: {
      Rat a = eval_dec_node(n->a.get(), args, digits);
      Rat b = eval_dec_node(n->b.get(), args, digits);
      return a > b ? a : b;
    }
  }
  fail(ErrorCode::OracleFailure, "unreachable expression node");
}

// Optional interval restriction for sign decisions; nullptr means the
// extraction is global and abs/min/max are always rejected.
struct PolyRange {
  Rat lo, hi;
};

std::optional<std::vector<Rat>> poly_node(const Expr::Node* n,
                                          const PolyRange* range);

std::optional<std::vector<Rat>> poly_mul(const std::vector<Rat>& a,
                                         const std::vector<Rat>& b) {
  if (a.size() + b.size() > 66) return std::nullopt;  // degree cap
  std::vector<Rat> out(a.size() + b.size() - 1, Rat(0));
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

void poly_trim(std::vector<Rat>& p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
}

// Sign of an affine polynomial on [lo, hi]: +1 when nonnegative
// throughout, -1 when nonpositive, nullopt when it changes sign or the
// degree exceeds 1. Affine extremes sit at the endpoints, so two exact
// evaluations decide.
std::optional<int> affine_sign_on(std::vector<Rat> p, const PolyRange& r) {
  poly_trim(p);
  if (p.size() > 2) return std::nullopt;
  Rat vlo = p[0], vhi = p[0];
  if (p.size() == 2) {
    vlo += p[1] * r.lo;
    vhi += p[1] * r.hi;
  }
  if (vlo >= 0 && vhi >= 0) return 1;
  if (vlo <= 0 && vhi <= 0) return -1;
  return std::nullopt;
}

std::optional<std::vector<Rat>> poly_node(const Expr::Node* n,
                                          const PolyRange* range) {
  switch (n->op) {
    case Op::kConst: return std::vector<Rat>{n->value};
    case Op::kVar:
      if (n->var != 0) return std::nullopt;
      return std::vector<Rat>{Rat(0), Rat(1)};
    case Op::kAdd:
    case Op::kSub: {
      auto a = poly_node(n->a.get(), range), b = poly_node(n->b.get(), range);
      if (!a || !b) return std::nullopt;
      std::vector<Rat>& out = *a;
      if (out.size() < b->size()) out.resize(b->size(), Rat(0));
      for (size_t i = 0; i < b->size(); ++i) {
        if (n->op == Op::kAdd)
          out[i] += (*b)[i];
        else
          out[i] -= (*b)[i];
      }
      return out;
    }
    case Op::kMul: {
      auto a = poly_node(n->a.get(), range), b = poly_node(n->b.get(), range);
      if (!a || !b) return std::nullopt;
      return poly_mul(*a, *b);
    }
    case Op::kDiv: {
      auto a = poly_node(n->a.get(), range), b = poly_node(n->b.get(), range);
      if (!a || !b) return std::nullopt;
      if (b->size() != 1 || (*b)[0] == 0) return std::nullopt;
      for (Rat& c : *a) c /= (*b)[0];
      return a;
    }
    case Op::kPow: {
      auto a = poly_node(n->a.get(), range);
      if (!a) return std::nullopt;
      std::vector<Rat> acc{Rat(1)};
      for (unsigned i = 0; i < n->exponent; ++i) {
        auto next = poly_mul(acc, *a);
        if (!next) return std::nullopt;
        acc = std::move(*next);
      }
      return acc;
    }
    case Op::kNeg: {
      auto a = poly_node(n->a.get(), range);
      if (!a) return std::nullopt;
      for (Rat& c : *a) c = -c;
      return a;
    }
    case Op::kAbs: {
      if (!range) return std::nullopt;
      auto a = poly_node(n->a.get(), range);
      if (!a) return std::nullopt;
      auto sign = affine_sign_on(*a, *range);
      if (!sign) return std::nullopt;
      if (*sign < 0)
        for (Rat& c : *a) c = -c;
      return a;
    }
    case Op::kMin:
    case Op::kMax: {
      if (!range) return std::nullopt;
      auto a = poly_node(n->a.get(), range), b = poly_node(n->b.get(), range);
      if (!a || !b) return std::nullopt;
      std::vector<Rat> diff = *a;
      if (diff.size() < b->size()) diff.resize(b->size(), Rat(0));
      for (size_t i = 0; i < b->size(); ++i) diff[i] -= (*b)[i];
      auto sign = affine_sign_on(diff, *range);
      if (!sign) return std::nullopt;
      // a >= b throughout: min is b, max is a; and symmetrically.
      bool take_a = (n->op == Op::kMax) == (*sign > 0);
      return take_a ? a : b;
    }
    default:
      return std::nullopt;
  }
}

}  // namespace

Expr Expr::parse(const std::string& source) {
  Parser p(source);
  Expr e;
  e.root_ = p.parse();
  e.source_ = source;
  return e;
}

bool Expr::exact() const { return node_exact(root_.get()); }

int Expr::arity() const { return node_arity(root_.get()); }

Rat Expr::eval_exact(const std::vector<Rat>& args) const {
  return eval_exact_node(root_.get(), args);
}

Rat Expr::eval_dec(const std::vector<Rat>& args, unsigned digits) const {
  return eval_dec_node(root_.get(), args, digits);
}

Rat Expr::eval(const std::vector<Rat>& args, unsigned digits) const {
  if (exact()) return eval_exact(args);
  return eval_dec(args, digits);
}

std::optional<std::vector<Rat>> Expr::polynomial() const {
  auto p = poly_node(root_.get(), nullptr);
  if (!p) return std::nullopt;
  poly_trim(*p);
  return p;
}

std::optional<std::vector<Rat>> Expr::polynomial_on(const Rat& lo,
                                                    const Rat& hi) const {
  PolyRange range{lo, hi};
  auto p = poly_node(root_.get(), &range);
  if (!p) return std::nullopt;
  poly_trim(*p);
  return p;
}

}  // namespace prering
