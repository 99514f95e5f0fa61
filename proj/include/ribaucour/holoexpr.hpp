#pragma once

// Holomorphic expressions in one complex variable z.
//
// Grammar (whitespace insignificant):
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := atom ('^' integer)?
//   atom   := 'z' | number | 'i' | func '(' expr ')' | '(' expr ')' | '-' atom
//   func   := exp | log | sin | cos | sinh | cosh
//
// Integers after '^' may carry a leading '-'.  Trees are immutable and shared.

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ribaucour {

using cplx = std::complex<double>;

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, const std::string& what)
      : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class NodeKind {
  variable,
  constant,
  sum,
  difference,
  product,
  quotient,
  power,
  negation,
  exp,
  log,
  sin,
  cos,
  sinh,
  cosh,
};

struct ExprNode;

class HoloExpr {
 public:
  HoloExpr();  // the variable z

  static HoloExpr variable();
  static HoloExpr constant(cplx value);
  static HoloExpr sum(HoloExpr a, HoloExpr b);
  static HoloExpr difference(HoloExpr a, HoloExpr b);
  static HoloExpr product(HoloExpr a, HoloExpr b);
  static HoloExpr quotient(HoloExpr a, HoloExpr b);
  static HoloExpr power(HoloExpr base, int exponent);
  static HoloExpr negation(HoloExpr a);
  static HoloExpr apply(NodeKind func, HoloExpr a);

  NodeKind kind() const;
  cplx constant_value() const;  // constant nodes only
  int exponent() const;         // power nodes only
  const std::vector<HoloExpr>& children() const;

  bool is_constant(cplx value) const;

  bool operator==(const HoloExpr& other) const;  // structural

 private:
  explicit HoloExpr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const ExprNode> node_;
};

struct ExprNode {
  NodeKind kind = NodeKind::variable;
  cplx value{};
  int exponent = 0;
  std::vector<HoloExpr> children;
};

HoloExpr parse(std::string_view text);
std::string to_string(const HoloExpr& e);

// Exact symbolic derivative d/dz.  Only trivial identities (0*x, 1*x, x+0)
// are folded while building the result.
HoloExpr differentiate(const HoloExpr& e);

// Value at z, or nullopt on division by zero, log(0) or a non-finite result.
std::optional<cplx> try_evaluate(const HoloExpr& e, cplx z);
cplx evaluate(const HoloExpr& e, cplx z);

inline constexpr int kMaxJetOrder = 3;

struct CJet {
  cplx z;
  std::vector<cplx> values;  // f, f', f'', ... up to the requested order

  int order() const { return static_cast<int>(values.size()) - 1; }
  const cplx& operator[](std::size_t k) const { return values[k]; }
};

// Throws EvalError at a singularity, std::invalid_argument if order > 3.
CJet eval_jet(const HoloExpr& e, cplx z, int order);

// An expression with its derivative trees built once up front, so that jets
// at many points do not re-differentiate.
class HoloFunction {
 public:
  explicit HoloFunction(HoloExpr e, int order = kMaxJetOrder);
  static HoloFunction from_string(std::string_view text, int order = kMaxJetOrder);

  const HoloExpr& expr() const { return derivs_.front(); }
  const HoloExpr& derivative(int k) const { return derivs_.at(static_cast<std::size_t>(k)); }
  int max_order() const { return static_cast<int>(derivs_.size()) - 1; }
  std::string text() const { return to_string(expr()); }

  std::optional<CJet> try_jet(cplx z, int order) const;
  CJet jet(cplx z, int order) const;

 private:
  std::vector<HoloExpr> derivs_;
};

}  // namespace ribaucour
