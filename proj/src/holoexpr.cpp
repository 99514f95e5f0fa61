#include "ribaucour/holoexpr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace ribaucour {

namespace {

std::shared_ptr<const ExprNode> make_node(NodeKind kind, std::vector<HoloExpr> children = {},
                                          cplx value = {}, int exponent = 0) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->value = value;
  n->exponent = exponent;
  n->children = std::move(children);
  return n;
}

bool is_function(NodeKind k) {
  switch (k) {
    case NodeKind::exp:
    case NodeKind::log:
    case NodeKind::sin:
    case NodeKind::cos:
    case NodeKind::sinh:
    case NodeKind::cosh:
      return true;
    default:
      return false;
  }
}

const char* function_name(NodeKind k) {
  switch (k) {
    case NodeKind::exp: return "exp";
    case NodeKind::log: return "log";
    case NodeKind::sin: return "sin";
    case NodeKind::cos: return "cos";
    case NodeKind::sinh: return "sinh";
    case NodeKind::cosh: return "cosh";
    default: return "?";
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Construction

HoloExpr::HoloExpr() : node_(make_node(NodeKind::variable)) {}

HoloExpr HoloExpr::variable() { return HoloExpr(); }

HoloExpr HoloExpr::constant(cplx value) {
  return HoloExpr(make_node(NodeKind::constant, {}, value));
}

HoloExpr HoloExpr::sum(HoloExpr a, HoloExpr b) {
  return HoloExpr(make_node(NodeKind::sum, {std::move(a), std::move(b)}));
}
HoloExpr HoloExpr::difference(HoloExpr a, HoloExpr b) {
  return HoloExpr(make_node(NodeKind::difference, {std::move(a), std::move(b)}));
}
HoloExpr HoloExpr::product(HoloExpr a, HoloExpr b) {
  return HoloExpr(make_node(NodeKind::product, {std::move(a), std::move(b)}));
}
HoloExpr HoloExpr::quotient(HoloExpr a, HoloExpr b) {
  return HoloExpr(make_node(NodeKind::quotient, {std::move(a), std::move(b)}));
}
HoloExpr HoloExpr::power(HoloExpr base, int exponent) {
  return HoloExpr(make_node(NodeKind::power, {std::move(base)}, {}, exponent));
}
HoloExpr HoloExpr::negation(HoloExpr a) {
  return HoloExpr(make_node(NodeKind::negation, {std::move(a)}));
}
HoloExpr HoloExpr::apply(NodeKind func, HoloExpr a) {
  if (!is_function(func)) throw std::invalid_argument("apply: not a function kind");
  return HoloExpr(make_node(func, {std::move(a)}));
}

NodeKind HoloExpr::kind() const { return node_->kind; }
cplx HoloExpr::constant_value() const { return node_->value; }
int HoloExpr::exponent() const { return node_->exponent; }
const std::vector<HoloExpr>& HoloExpr::children() const { return node_->children; }

bool HoloExpr::is_constant(cplx value) const {
  return node_->kind == NodeKind::constant && node_->value == value;
}

bool HoloExpr::operator==(const HoloExpr& other) const {
  if (node_ == other.node_) return true;
  if (node_->kind != other.node_->kind) return false;
  if (node_->kind == NodeKind::constant) return node_->value == other.node_->value;
  if (node_->kind == NodeKind::power && node_->exponent != other.node_->exponent) return false;
  const auto& a = node_->children;
  const auto& b = other.node_->children;
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (!(a[k] == b[k])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  HoloExpr run() {
    HoloExpr e = expr();
    skip_ws();
    if (pos_ != s_.size()) throw ParseError(pos_, "unexpected character '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  void expect(char c) {
    if (!peek(c)) {
      if (pos_ >= s_.size()) throw ParseError(pos_, std::string("expected '") + c + "' before end of input");
      throw ParseError(pos_, std::string("expected '") + c + "'");
    }
    ++pos_;
  }

  HoloExpr expr() {
    HoloExpr lhs = term();
    for (;;) {
      if (peek('+')) {
        ++pos_;
        lhs = HoloExpr::sum(lhs, term());
      } else if (peek('-')) {
        ++pos_;
        lhs = HoloExpr::difference(lhs, term());
      } else {
        return lhs;
      }
    }
  }

  HoloExpr term() {
    HoloExpr lhs = factor();
    for (;;) {
      if (peek('*')) {
        ++pos_;
        lhs = HoloExpr::product(lhs, factor());
      } else if (peek('/')) {
        ++pos_;
        lhs = HoloExpr::quotient(lhs, factor());
      } else {
        return lhs;
      }
    }
  }

  HoloExpr factor() {
    HoloExpr base = atom();
    if (peek('^')) {
      ++pos_;
      return HoloExpr::power(base, integer_exponent());
    }
    return base;
  }

  int integer_exponent() {
    skip_ws();
    const std::size_t start = pos_;
    bool negative = false;
    if (pos_ < s_.size() && s_[pos_] == '-') {
      negative = true;
      ++pos_;
      skip_ws();
    }
    const std::size_t digits_start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == digits_start) throw ParseError(start, "non-integer exponent");
    if (pos_ < s_.size() && (s_[pos_] == '.' || s_[pos_] == 'e' || s_[pos_] == 'E'))
      throw ParseError(start, "non-integer exponent");
    int value = 0;
    auto [ptr, ec] = std::from_chars(s_.data() + digits_start, s_.data() + pos_, value);
    if (ec != std::errc()) throw ParseError(digits_start, "exponent out of range");
    (void)ptr;
    return negative ? -value : value;
  }

  HoloExpr atom() {
    skip_ws();
    if (pos_ >= s_.size()) throw ParseError(pos_, "unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      HoloExpr e = expr();
      expect(')');
      return e;
    }
    if (c == '-') {
      ++pos_;
      return HoloExpr::negation(atom());
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    throw ParseError(pos_, std::string("unexpected character '") + c + "'");
  }

  HoloExpr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      const std::size_t from = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return pos_ - from;
    };
    std::size_t n = digits();
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) throw ParseError(start, "malformed number");
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      const std::size_t save = pos_;
      ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (digits() == 0) pos_ = save;  // 'e' belongs to whatever follows
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, value);
    if (ec != std::errc() || ptr != s_.data() + pos_) throw ParseError(start, "malformed number");
    return HoloExpr::constant(value);
  }

  HoloExpr identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    const std::string_view name = s_.substr(start, pos_ - start);
    if (name == "z") return HoloExpr::variable();
    if (name == "i") return HoloExpr::constant(cplx(0.0, 1.0));
    static constexpr struct {
      std::string_view name;
      NodeKind kind;
    } kFunctions[] = {{"exp", NodeKind::exp},   {"log", NodeKind::log},   {"sin", NodeKind::sin},
                      {"cos", NodeKind::cos},   {"sinh", NodeKind::sinh}, {"cosh", NodeKind::cosh}};
    for (const auto& f : kFunctions) {
      if (f.name == name) {
        expect('(');
        HoloExpr arg = expr();
        expect(')');
        return HoloExpr::apply(f.kind, arg);
      }
    }
    throw ParseError(start, "unknown identifier '" + std::string(name) + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

HoloExpr parse(std::string_view text) { return Parser(text).run(); }

// ---------------------------------------------------------------------------
// Printing

namespace {

// Binding levels: 0 expr, 1 term, 2 factor, 3 atom.
int level_of(const HoloExpr& e) {
  switch (e.kind()) {
    case NodeKind::sum:
    case NodeKind::difference:
      return 0;
    case NodeKind::product:
    case NodeKind::quotient:
      return 1;
    case NodeKind::power:
      return 2;
    default:
      return 3;
  }
}

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string print(const HoloExpr& e, int min_level);

std::string print_constant(cplx c) {
  if (c.imag() == 0.0) {
    // -0.0 prints as "-0", which parses back to negation(0) == 0.
    return format_real(c.real());
  }
  std::string im = c.imag() == 1.0 ? "i" : "(" + format_real(c.imag()) + ")*i";
  if (c.real() == 0.0) return c.imag() == 1.0 ? "i" : "(" + im + ")";
  return "(" + format_real(c.real()) + "+" + im + ")";
}

std::string print(const HoloExpr& e, int min_level) {
  std::string out;
  const auto& ch = e.children();
  switch (e.kind()) {
    case NodeKind::variable:
      out = "z";
      break;
    case NodeKind::constant:
      out = print_constant(e.constant_value());
      break;
    case NodeKind::sum:
      out = print(ch[0], 0) + " + " + print(ch[1], 1);
      break;
    case NodeKind::difference:
      out = print(ch[0], 0) + " - " + print(ch[1], 1);
      break;
    case NodeKind::product:
      out = print(ch[0], 1) + "*" + print(ch[1], 2);
      break;
    case NodeKind::quotient:
      out = print(ch[0], 1) + "/" + print(ch[1], 2);
      break;
    case NodeKind::power:
      out = print(ch[0], 3) + "^" + std::to_string(e.exponent());
      break;
    case NodeKind::negation:
      out = "-" + print(ch[0], 3);
      break;
    default:
      out = std::string(function_name(e.kind())) + "(" + print(ch[0], 0) + ")";
      break;
  }
  // Negative reals and negations are atoms in the grammar; a leading minus
  // after an operator still parses, so no parentheses are needed for them.
  if (level_of(e) < min_level) return "(" + out + ")";
  return out;
}

}  // namespace

std::string to_string(const HoloExpr& e) { return print(e, 0); }

// ---------------------------------------------------------------------------
// Differentiation

namespace {

HoloExpr add(const HoloExpr& a, const HoloExpr& b) {
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  if (a.kind() == NodeKind::constant && b.kind() == NodeKind::constant)
    return HoloExpr::constant(a.constant_value() + b.constant_value());
  return HoloExpr::sum(a, b);
}

HoloExpr sub(const HoloExpr& a, const HoloExpr& b) {
  if (b.is_constant(0.0)) return a;
  if (a.kind() == NodeKind::constant && b.kind() == NodeKind::constant)
    return HoloExpr::constant(a.constant_value() - b.constant_value());
  if (a.is_constant(0.0)) return HoloExpr::negation(b);
  return HoloExpr::difference(a, b);
}

HoloExpr mul(const HoloExpr& a, const HoloExpr& b) {
  if (a.is_constant(0.0) || b.is_constant(0.0)) return HoloExpr::constant(0.0);
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  if (a.kind() == NodeKind::constant && b.kind() == NodeKind::constant)
    return HoloExpr::constant(a.constant_value() * b.constant_value());
  return HoloExpr::product(a, b);
}

HoloExpr div(const HoloExpr& a, const HoloExpr& b) {
  if (a.is_constant(0.0)) return HoloExpr::constant(0.0);
  if (b.is_constant(1.0)) return a;
  return HoloExpr::quotient(a, b);
}

HoloExpr pow(const HoloExpr& base, int n) {
  if (n == 0) return HoloExpr::constant(1.0);
  if (n == 1) return base;
  return HoloExpr::power(base, n);
}

HoloExpr neg(const HoloExpr& a) {
  if (a.kind() == NodeKind::constant) return HoloExpr::constant(-a.constant_value());
  if (a.kind() == NodeKind::negation) return a.children()[0];
  return HoloExpr::negation(a);
}

}  // namespace

HoloExpr differentiate(const HoloExpr& e) {
  const auto& ch = e.children();
  switch (e.kind()) {
    case NodeKind::variable:
      return HoloExpr::constant(1.0);
    case NodeKind::constant:
      return HoloExpr::constant(0.0);
    case NodeKind::sum:
      return add(differentiate(ch[0]), differentiate(ch[1]));
    case NodeKind::difference:
      return sub(differentiate(ch[0]), differentiate(ch[1]));
    case NodeKind::product:
      return add(mul(differentiate(ch[0]), ch[1]), mul(ch[0], differentiate(ch[1])));
    case NodeKind::quotient: {
      const HoloExpr num = sub(mul(differentiate(ch[0]), ch[1]), mul(ch[0], differentiate(ch[1])));
      return div(num, pow(ch[1], 2));
    }
    case NodeKind::power: {
      const int n = e.exponent();
      if (n == 0) return HoloExpr::constant(0.0);
      return mul(mul(HoloExpr::constant(static_cast<double>(n)), pow(ch[0], n - 1)),
                 differentiate(ch[0]));
    }
    case NodeKind::negation:
      return neg(differentiate(ch[0]));
    case NodeKind::exp:
      return mul(e, differentiate(ch[0]));
    case NodeKind::log:
      return div(differentiate(ch[0]), ch[0]);
    case NodeKind::sin:
      return mul(HoloExpr::apply(NodeKind::cos, ch[0]), differentiate(ch[0]));
    case NodeKind::cos:
      return mul(neg(HoloExpr::apply(NodeKind::sin, ch[0])), differentiate(ch[0]));
    case NodeKind::sinh:
      return mul(HoloExpr::apply(NodeKind::cosh, ch[0]), differentiate(ch[0]));
    case NodeKind::cosh:
      return mul(HoloExpr::apply(NodeKind::sinh, ch[0]), differentiate(ch[0]));
  }
  throw std::logic_error("differentiate: unknown node kind");
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

bool finite(cplx x) { return std::isfinite(x.real()) && std::isfinite(x.imag()); }

std::optional<cplx> eval_node(const HoloExpr& e, cplx z) {
  const auto& ch = e.children();
  auto arg = [&](std::size_t k) { return eval_node(ch[k], z); };
  std::optional<cplx> a, b;
  cplx r;
  switch (e.kind()) {
    case NodeKind::variable:
      return z;
    case NodeKind::constant:
      r = e.constant_value();
      break;
    case NodeKind::sum:
    case NodeKind::difference:
    case NodeKind::product:
    case NodeKind::quotient:
      if (!(a = arg(0)) || !(b = arg(1))) return std::nullopt;
      if (e.kind() == NodeKind::sum) r = *a + *b;
      else if (e.kind() == NodeKind::difference) r = *a - *b;
      else if (e.kind() == NodeKind::product) r = *a * *b;
      else {
        if (*b == cplx(0.0)) return std::nullopt;
        r = *a / *b;
      }
      break;
    case NodeKind::power: {
      if (!(a = arg(0))) return std::nullopt;
      const int n = e.exponent();
      if (n < 0 && *a == cplx(0.0)) return std::nullopt;
      // repeated squaring keeps integer powers exact for small Gaussian integers
      cplx base = n < 0 ? cplx(1.0) / *a : *a;
      unsigned m = static_cast<unsigned>(n < 0 ? -static_cast<long>(n) : n);
      r = cplx(1.0);
      while (m) {
        if (m & 1u) r *= base;
        base *= base;
        m >>= 1u;
      }
      break;
    }
    case NodeKind::negation:
      if (!(a = arg(0))) return std::nullopt;
      r = -*a;
      break;
    case NodeKind::exp:
      if (!(a = arg(0))) return std::nullopt;
      r = std::exp(*a);
      break;
    case NodeKind::log:
      if (!(a = arg(0))) return std::nullopt;
      if (*a == cplx(0.0)) return std::nullopt;
      r = std::log(*a);
      break;
    case NodeKind::sin:
      if (!(a = arg(0))) return std::nullopt;
      r = std::sin(*a);
      break;
    case NodeKind::cos:
      if (!(a = arg(0))) return std::nullopt;
      r = std::cos(*a);
      break;
    case NodeKind::sinh:
      if (!(a = arg(0))) return std::nullopt;
      r = std::sinh(*a);
      break;
    case NodeKind::cosh:
      if (!(a = arg(0))) return std::nullopt;
      r = std::cosh(*a);
      break;
  }
  if (!finite(r)) return std::nullopt;
  return r;
}

}  // namespace

std::optional<cplx> try_evaluate(const HoloExpr& e, cplx z) { return eval_node(e, z); }

cplx evaluate(const HoloExpr& e, cplx z) {
  auto v = try_evaluate(e, z);
  if (!v) throw EvalError("singular evaluation of " + to_string(e));
  return *v;
}

CJet eval_jet(const HoloExpr& e, cplx z, int order) {
  return HoloFunction(e, order).jet(z, order);
}

HoloFunction::HoloFunction(HoloExpr e, int order) {
  if (order < 0 || order > kMaxJetOrder) throw std::invalid_argument("jet order must be in [0, 3]");
  derivs_.push_back(std::move(e));
  for (int k = 1; k <= order; ++k) derivs_.push_back(differentiate(derivs_.back()));
}

HoloFunction HoloFunction::from_string(std::string_view text, int order) {
  return HoloFunction(parse(text), order);
}

std::optional<CJet> HoloFunction::try_jet(cplx z, int order) const {
  if (order < 0 || order > max_order()) throw std::invalid_argument("jet order out of range");
  CJet j{z, {}};
  j.values.reserve(static_cast<std::size_t>(order + 1));
  for (int k = 0; k <= order; ++k) {
    auto v = try_evaluate(derivs_[static_cast<std::size_t>(k)], z);
    if (!v) return std::nullopt;
    j.values.push_back(*v);
  }
  return j;
}

CJet HoloFunction::jet(cplx z, int order) const {
  auto j = try_jet(z, order);
  if (!j) throw EvalError("singular jet of " + text());
  return *j;
}

}  // namespace ribaucour
