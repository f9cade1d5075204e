#pragma once

// Scalar coordinate expressions: parse, print, bind names, evaluate to jets.
//
// Grammar (whitespace insignificant):
//   expr   := term (("+"|"-") term)* ;
//   term   := factor (("*"|"/") factor)* ;
//   factor := ("-" factor) | power ;
//   power  := atom ("^" factor)? ;
//   atom   := NUMBER | IDENT | IDENT "(" expr ")" | "(" expr ")" ;
// so "^" is right-associative and binds tighter than unary minus: -x^2 == -(x^2).
// Identifiers are resolved to coordinates or parameters when an expression is bound.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "solitonlab/errors.hpp"
#include "solitonlab/jets.hpp"

namespace solitonlab {

enum class BinaryOp { kAdd, kSub, kMul, kDiv, kPow };
enum class Function { kExp, kLog, kSin, kCos, kSqrt };

inline const char* function_name(Function f) {
  switch (f) {
    case Function::kExp: return "exp";
    case Function::kLog: return "log";
    case Function::kSin: return "sin";
    case Function::kCos: return "cos";
    case Function::kSqrt: return "sqrt";
  }
  return "?";
}

inline std::optional<Function> function_from_name(std::string_view name) {
  if (name == "exp") return Function::kExp;
  if (name == "log") return Function::kLog;
  if (name == "sin") return Function::kSin;
  if (name == "cos") return Function::kCos;
  if (name == "sqrt") return Function::kSqrt;
  return std::nullopt;
}

/// Immutable expression tree with shared nodes.
class Expr {
 public:
  struct Number;
  struct Symbol;
  struct Negate;
  struct Binary;
  struct Call;
  using Node = std::variant<Number, Symbol, Negate, Binary, Call>;

  Expr();

  static Expr number(double v);
  static Expr symbol(std::string name);
  static Expr negate(Expr e);
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs);
  static Expr call(Function fn, Expr arg);

  const Node& node() const;

  template <class T>
  const T* as() const;

  /// Every identifier that appears in the tree.
  std::set<std::string> symbols() const {
    std::set<std::string> out;
    collect(out);
    return out;
  }

  friend bool operator==(const Expr& a, const Expr& b);

  friend Expr operator+(Expr a, Expr b) { return binary(BinaryOp::kAdd, std::move(a), std::move(b)); }
  friend Expr operator-(Expr a, Expr b) { return binary(BinaryOp::kSub, std::move(a), std::move(b)); }
  friend Expr operator*(Expr a, Expr b) { return binary(BinaryOp::kMul, std::move(a), std::move(b)); }
  friend Expr operator/(Expr a, Expr b) { return binary(BinaryOp::kDiv, std::move(a), std::move(b)); }

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  void collect(std::set<std::string>& out) const;

  std::shared_ptr<const Node> node_;
};

struct Expr::Number { double value; };
struct Expr::Symbol { std::string name; };
struct Expr::Negate { Expr operand; };
struct Expr::Binary { BinaryOp op; Expr lhs; Expr rhs; };
struct Expr::Call { Function fn; Expr arg; };

inline Expr::Expr() : Expr(number(0.0)) {}
inline const Expr::Node& Expr::node() const { return *node_; }
template <class T>
const T* Expr::as() const {
  return std::get_if<T>(node_.get());
}
inline Expr Expr::number(double v) { return Expr(std::make_shared<const Node>(Number{v})); }
inline Expr Expr::symbol(std::string name) { return Expr(std::make_shared<const Node>(Symbol{std::move(name)})); }
inline Expr Expr::negate(Expr e) { return Expr(std::make_shared<const Node>(Negate{std::move(e)})); }
inline Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) { return Expr(std::make_shared<const Node>(Binary{op, std::move(lhs), std::move(rhs)})); }
inline Expr Expr::call(Function fn, Expr arg) { return Expr(std::make_shared<const Node>(Call{fn, std::move(arg)})); }

inline bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->index() != b.node_->index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(*b.node_);
        if constexpr (std::is_same_v<T, Expr::Number>) return x.value == y.value;
        else if constexpr (std::is_same_v<T, Expr::Symbol>) return x.name == y.name;
        else if constexpr (std::is_same_v<T, Expr::Negate>) return x.operand == y.operand;
        else if constexpr (std::is_same_v<T, Expr::Binary>) return x.op == y.op && x.lhs == y.lhs && x.rhs == y.rhs;
        else return x.fn == y.fn && x.arg == y.arg;
      },
      *a.node_);
}

inline void Expr::collect(std::set<std::string>& out) const {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Symbol>) out.insert(x.name);
        else if constexpr (std::is_same_v<T, Negate>) x.operand.collect(out);
        else if constexpr (std::is_same_v<T, Binary>) {
          x.lhs.collect(out);
          x.rhs.collect(out);
        } else if constexpr (std::is_same_v<T, Call>) x.arg.collect(out);
      },
      *node_);
}

namespace detail {

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : text_(text) {}

  Expr parse() {
    if (text_.find_first_not_of(" \t\r\n") == std::string_view::npos)
      throw ParseError(1, {"expression"}, "empty expression");
    advance();
    Expr e = expr();
    if (tok_.kind != Kind::kEnd) fail({"+", "-", "*", "/", "^", "end of input"});
    return e;
  }

 private:
  enum class Kind { kNumber, kIdent, kPlus, kMinus, kStar, kSlash, kCaret, kLParen, kRParen, kEnd };
  struct Token {
    Kind kind = Kind::kEnd;
    std::size_t offset = 0;  // 1-based
    std::string_view text;
    double number = 0.0;
  };

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    std::string found = tok_.kind == Kind::kEnd ? "end of input" : "'" + std::string(tok_.text) + "'";
    std::string list;
    for (const auto& e : expected) list += (list.empty() ? "" : ", ") + e;
    throw ParseError(tok_.offset, std::move(expected), "expected one of {" + list + "}, found " + found);
  }

  void advance() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r' || text_[pos_] == '\n')) ++pos_;
    tok_ = Token{};
    tok_.offset = pos_ + 1;
    if (pos_ >= text_.size()) return;
    const char c = text_[pos_];
    const std::size_t start = pos_;
    auto single = [&](Kind k) {
      tok_.kind = k;
      tok_.text = text_.substr(start, 1);
      ++pos_;
    };
    switch (c) {
      case '+': return single(Kind::kPlus);
      case '-': return single(Kind::kMinus);
      case '*': return single(Kind::kStar);
      case '/': return single(Kind::kSlash);
      case '^': return single(Kind::kCaret);
      case '(': return single(Kind::kLParen);
      case ')': return single(Kind::kRParen);
      default: break;
    }
    auto digit = [&](std::size_t i) { return i < text_.size() && text_[i] >= '0' && text_[i] <= '9'; };
    if (digit(pos_) || (c == '.' && digit(pos_ + 1))) {
      while (digit(pos_)) ++pos_;
      if (pos_ < text_.size() && text_[pos_] == '.') {
        ++pos_;
        while (digit(pos_)) ++pos_;
      }
      if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
        std::size_t p = pos_ + 1;
        if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
        if (!digit(p)) {
          tok_.offset = p + 1;
          throw ParseError(p + 1, {"exponent digits"}, "malformed number exponent");
        }
        pos_ = p;
        while (digit(pos_)) ++pos_;
      }
      tok_.kind = Kind::kNumber;
      tok_.text = text_.substr(start, pos_ - start);
      const auto res = std::from_chars(tok_.text.data(), tok_.text.data() + tok_.text.size(), tok_.number);
      if (res.ec != std::errc()) throw ParseError(tok_.offset, {"number"}, "number out of range");
      return;
    }
    auto ident_start = [](char ch) { return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || ch == '_'; };
    auto ident_char = [&](char ch) { return ident_start(ch) || (ch >= '0' && ch <= '9'); };
    if (ident_start(c)) {
      while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
      tok_.kind = Kind::kIdent;
      tok_.text = text_.substr(start, pos_ - start);
      return;
    }
    throw ParseError(tok_.offset, {"number", "identifier", "operator", "("}, std::string("unexpected character '") + c + "'");
  }

  Expr expr() {
    Expr lhs = term();
    while (tok_.kind == Kind::kPlus || tok_.kind == Kind::kMinus) {
      const BinaryOp op = tok_.kind == Kind::kPlus ? BinaryOp::kAdd : BinaryOp::kSub;
      advance();
      lhs = Expr::binary(op, std::move(lhs), term());
    }
    return lhs;
  }

  Expr term() {
    Expr lhs = factor();
    while (tok_.kind == Kind::kStar || tok_.kind == Kind::kSlash) {
      const BinaryOp op = tok_.kind == Kind::kStar ? BinaryOp::kMul : BinaryOp::kDiv;
      advance();
      lhs = Expr::binary(op, std::move(lhs), factor());
    }
    return lhs;
  }

  Expr factor() {
    if (tok_.kind == Kind::kMinus) {
      advance();
      return Expr::negate(factor());
    }
    return power();
  }

  Expr power() {
    Expr base = atom();
    if (tok_.kind == Kind::kCaret) {
      advance();
      return Expr::binary(BinaryOp::kPow, std::move(base), factor());
    }
    return base;
  }

  Expr atom() {
    switch (tok_.kind) {
      case Kind::kNumber: {
        const double v = tok_.number;
        advance();
        return Expr::number(v);
      }
      case Kind::kIdent: {
        const Token name = tok_;
        advance();
        if (tok_.kind != Kind::kLParen) return Expr::symbol(std::string(name.text));
        const auto fn = function_from_name(name.text);
        if (!fn)
          throw ParseError(name.offset, {"exp", "log", "sin", "cos", "sqrt"},
                           "unknown function '" + std::string(name.text) + "'");
        advance();
        Expr arg = expr();
        if (tok_.kind != Kind::kRParen) fail({")"});
        advance();
        return Expr::call(*fn, std::move(arg));
      }
      case Kind::kLParen: {
        advance();
        Expr inner = expr();
        if (tok_.kind != Kind::kRParen) fail({")"});
        advance();
        return inner;
      }
      default:
        fail({"number", "identifier", "(", "-"});
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Token tok_;
};

}  // namespace detail

inline Expr parse(std::string_view text) { return detail::ExprParser(text).parse(); }

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

// Precedence levels of the grammar: 1 expr, 2 term, 3 factor, 4 atom.
inline int print_level(const Expr& e) {
  if (const auto* n = e.as<Expr::Number>()) return n->value < 0 ? 3 : 4;
  if (e.as<Expr::Negate>()) return 3;
  if (const auto* b = e.as<Expr::Binary>()) {
    switch (b->op) {
      case BinaryOp::kAdd:
      case BinaryOp::kSub: return 1;
      case BinaryOp::kMul:
      case BinaryOp::kDiv: return 2;
      case BinaryOp::kPow: return 3;
    }
  }
  return 4;
}

inline std::string print_at(const Expr& e, int required);

inline std::string print_node(const Expr& e) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Expr::Number>) return x.value < 0 ? "-" + format_number(-x.value) : format_number(x.value);
        else if constexpr (std::is_same_v<T, Expr::Symbol>) return x.name;
        else if constexpr (std::is_same_v<T, Expr::Negate>) return "-" + print_at(x.operand, 3);
        else if constexpr (std::is_same_v<T, Expr::Call>) return std::string(function_name(x.fn)) + "(" + print_at(x.arg, 1) + ")";
        else {
          switch (x.op) {
            case BinaryOp::kAdd: return print_at(x.lhs, 1) + " + " + print_at(x.rhs, 2);
            case BinaryOp::kSub: return print_at(x.lhs, 1) + " - " + print_at(x.rhs, 2);
            case BinaryOp::kMul: return print_at(x.lhs, 2) + "*" + print_at(x.rhs, 3);
            case BinaryOp::kDiv: return print_at(x.lhs, 2) + "/" + print_at(x.rhs, 3);
            case BinaryOp::kPow: return print_at(x.lhs, 4) + "^" + print_at(x.rhs, 3);
          }
          return "";
        }
      },
      e.node());
}

inline std::string print_at(const Expr& e, int required) {
  std::string s = print_node(e);
  // A negative literal prints as "-c", which re-parses as a negation; keep it grouped.
  const bool negative_literal = e.as<Expr::Number>() && e.as<Expr::Number>()->value < 0;
  if (print_level(e) < required || (negative_literal && required > 1)) return "(" + s + ")";
  return s;
}

}  // namespace detail

/// Text that parses back to a structurally equal tree (for trees produced by `parse`).
inline std::string to_string(const Expr& e) { return detail::print_at(e, 1); }

using ParamTable = std::map<std::string, double>;

/// Name resolution context: coordinate names (in order) and parameter values.
struct Bindings {
  std::vector<std::string> coords;
  ParamTable params;
};

/// Expression with names resolved, flattened to a postfix program for repeated evaluation.
class CompiledExpr {
 public:
  CompiledExpr() = default;

  CompiledExpr(const Expr& e, const Bindings& bindings) : dim_(static_cast<int>(bindings.coords.size())), source_(e) {
    for (const auto& name : e.symbols()) {
      const bool is_coord = std::find(bindings.coords.begin(), bindings.coords.end(), name) != bindings.coords.end();
      const bool is_param = bindings.params.count(name) > 0;
      if (is_coord && is_param) throw ArgumentError("name '" + name + "' is both a coordinate and a parameter");
      if (!is_coord && !is_param) throw ArgumentError("unbound name '" + name + "' in expression '" + to_string(e) + "'");
    }
    emit(e, bindings);
  }

  int dim() const noexcept { return dim_; }
  const Expr& source() const noexcept { return source_; }

  Jet jet(std::span<const double> point, int order) const {
    if (static_cast<int>(point.size()) != dim_) throw ArgumentError("point dimension does not match the bound coordinates");
    std::vector<Jet> stack;
    stack.reserve(8);
    for (const auto& ins : program_) {
      switch (ins.code) {
        case Code::kConst: stack.push_back(Jet::constant(dim_, order, ins.value)); break;
        case Code::kVar: stack.push_back(Jet::variable(dim_, order, ins.index, point[static_cast<std::size_t>(ins.index)])); break;
        case Code::kNeg: stack.back() = -stack.back(); break;
        case Code::kCall: stack.back() = apply(static_cast<Function>(ins.index), stack.back()); break;
        case Code::kPowInt: stack.back() = pow(stack.back(), ins.index); break;
        case Code::kPowReal: stack.back() = pow(stack.back(), ins.value); break;
        default: {
          Jet rhs = std::move(stack.back());
          stack.pop_back();
          Jet& lhs = stack.back();
          switch (ins.code) {
            case Code::kAdd: lhs += rhs; break;
            case Code::kSub: lhs -= rhs; break;
            case Code::kMul: lhs = lhs * rhs; break;
            case Code::kDiv: lhs = lhs / rhs; break;
            default: lhs = pow(lhs, rhs); break;
          }
        }
      }
    }
    return std::move(stack.back());
  }

  double value(std::span<const double> point) const { return jet(point, 0).value(); }

 private:
  enum class Code { kConst, kVar, kNeg, kAdd, kSub, kMul, kDiv, kPow, kPowInt, kPowReal, kCall };
  struct Instruction {
    Code code;
    int index = 0;
    double value = 0.0;
  };

  static Jet apply(Function fn, const Jet& x) {
    switch (fn) {
      case Function::kExp: return exp(x);
      case Function::kLog: return log(x);
      case Function::kSin: return sin(x);
      case Function::kCos: return cos(x);
      case Function::kSqrt: return sqrt(x);
    }
    return x;
  }

  // Value of a coordinate-free subtree, if it has one and evaluates cleanly.
  static std::optional<double> constant_value(const Expr& e, const Bindings& b) {
    for (const auto& name : e.symbols())
      if (std::find(b.coords.begin(), b.coords.end(), name) != b.coords.end()) return std::nullopt;
    try {
      CompiledExpr c(e, Bindings{{}, b.params});
      c.dim_ = 1;
      const std::array<double, 1> dummy{0.0};
      return c.value(dummy);
    } catch (const Error&) {
      return std::nullopt;
    }
  }

  void emit(const Expr& e, const Bindings& b) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Expr::Number>) {
            program_.push_back({Code::kConst, 0, x.value});
          } else if constexpr (std::is_same_v<T, Expr::Symbol>) {
            const auto it = std::find(b.coords.begin(), b.coords.end(), x.name);
            if (it != b.coords.end()) program_.push_back({Code::kVar, static_cast<int>(it - b.coords.begin()), 0.0});
            else program_.push_back({Code::kConst, 0, b.params.at(x.name)});
          } else if constexpr (std::is_same_v<T, Expr::Negate>) {
            emit(x.operand, b);
            program_.push_back({Code::kNeg});
          } else if constexpr (std::is_same_v<T, Expr::Call>) {
            emit(x.arg, b);
            program_.push_back({Code::kCall, static_cast<int>(x.fn)});
          } else {
            emit(x.lhs, b);
            if (x.op == BinaryOp::kPow) {
              if (const auto c = constant_value(x.rhs, b)) {
                if (std::abs(*c) <= 64 && *c == std::round(*c)) program_.push_back({Code::kPowInt, static_cast<int>(*c)});
                else program_.push_back({Code::kPowReal, 0, *c});
                return;
              }
            }
            emit(x.rhs, b);
            switch (x.op) {
              case BinaryOp::kAdd: program_.push_back({Code::kAdd}); break;
              case BinaryOp::kSub: program_.push_back({Code::kSub}); break;
              case BinaryOp::kMul: program_.push_back({Code::kMul}); break;
              case BinaryOp::kDiv: program_.push_back({Code::kDiv}); break;
              case BinaryOp::kPow: program_.push_back({Code::kPow}); break;
            }
          }
        },
        e.node());
  }

  int dim_ = 0;
  Expr source_;
  std::vector<Instruction> program_;
};

/// Jet of `e` at `point`, exact to `order`.
inline Jet eval_jet(const Expr& e, const Bindings& bindings, std::span<const double> point, int order) {
  return CompiledExpr(e, bindings).jet(point, order);
}

/// Plain floating-point evaluation by direct tree walk (independent of the jet path).
inline double evaluate(const Expr& e, const Bindings& b, std::span<const double> point) {
  return std::visit(
      [&](const auto& x) -> double {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Expr::Number>) {
          return x.value;
        } else if constexpr (std::is_same_v<T, Expr::Symbol>) {
          const auto it = std::find(b.coords.begin(), b.coords.end(), x.name);
          if (it != b.coords.end()) return point[static_cast<std::size_t>(it - b.coords.begin())];
          const auto p = b.params.find(x.name);
          if (p == b.params.end()) throw ArgumentError("unbound name '" + x.name + "'");
          return p->second;
        } else if constexpr (std::is_same_v<T, Expr::Negate>) {
          return -evaluate(x.operand, b, point);
        } else if constexpr (std::is_same_v<T, Expr::Call>) {
          const double a = evaluate(x.arg, b, point);
          switch (x.fn) {
            case Function::kExp: return std::exp(a);
            case Function::kLog:
              if (!(a > 0)) throw DomainError("log", "argument is not positive");
              return std::log(a);
            case Function::kSin: return std::sin(a);
            case Function::kCos: return std::cos(a);
            case Function::kSqrt:
              if (!(a > 0)) throw DomainError("sqrt", "argument is not positive");
              return std::sqrt(a);
          }
          return 0.0;
        } else {
          const double l = evaluate(x.lhs, b, point);
          const double r = evaluate(x.rhs, b, point);
          switch (x.op) {
            case BinaryOp::kAdd: return l + r;
            case BinaryOp::kSub: return l - r;
            case BinaryOp::kMul: return l * r;
            case BinaryOp::kDiv:
              if (r == 0.0) throw DomainError("div", "denominator value is zero");
              return l / r;
            case BinaryOp::kPow: return std::pow(l, r);
          }
          return 0.0;
        }
      },
      e.node());
}

}  // namespace solitonlab
