#pragma once
// Limit-state expressions: a recursive-descent parser producing a small tree
// that is evaluated against bound variable slots.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | '+' unary | power
//   power   := primary ('^' unary)?
//   primary := number | identifier | '(' expr ')'
//
// Power binds tighter than unary minus (-x^2 is -(x^2)) and associates to the
// right (a^b^c is a^(b^c)).

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "ncvx/error.hpp"

namespace ncvx {

class LimitState {
 public:
  enum class Kind { Number, Variable, Negate, Add, Subtract, Multiply, Divide, Power };

  struct Node {
    Kind kind;
    double value = 0.0;
    std::string name;
    std::size_t slot = 0;
    std::unique_ptr<Node> left;
    std::unique_ptr<Node> right;
  };

  LimitState(std::string text, std::unique_ptr<Node> root) : text_(std::move(text)), root_(std::move(root)) {
    collect(*root_);
  }

  const std::string& text() const noexcept { return text_; }

  /// Distinct identifiers in the expression, sorted.
  const std::set<std::string>& variables() const noexcept { return variables_; }

  /// Assigns every identifier a slot in `order` (lookup by name) or a fixed
  /// value from `constants`. Throws UnboundVariable for names found in neither.
  /// Names in `order` take precedence over constants.
  void bind(const std::vector<std::string>& order, const std::map<std::string, double>& constants) {
    std::vector<std::string> missing;
    for (const auto& v : variables_) {
      bool found = std::find(order.begin(), order.end(), v) != order.end() || constants.count(v) != 0;
      if (!found) missing.push_back(v);
    }
    if (!missing.empty()) {
      std::string list;
      for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
      throw Error(Errc::UnboundVariable, list);
    }
    arity_ = order.size();
    bind_node(*root_, order, constants);
    bound_ = true;
  }

  bool bound() const noexcept { return bound_; }

  double evaluate(std::span<const double> slots) const {
    if (!bound_) throw Error(Errc::UnboundVariable, "expression has not been bound");
    if (slots.size() != arity_) throw Error(Errc::DimensionMismatch, "expression expects " + std::to_string(arity_) + " values");
    return eval(*root_, slots);
  }

  /// One-shot evaluation with every identifier taken from `values`.
  double evaluate(const std::map<std::string, double>& values) const {
    LimitState copy = clone();
    copy.bind({}, values);
    return copy.evaluate(std::span<const double>());
  }

  LimitState clone() const { return LimitState(text_, copy_node(*root_)); }

 private:
  void collect(const Node& node) {
    if (node.kind == Kind::Variable) variables_.insert(node.name);
    if (node.left) collect(*node.left);
    if (node.right) collect(*node.right);
  }

  static void bind_node(Node& node, const std::vector<std::string>& order, const std::map<std::string, double>& constants) {
    if (node.kind == Kind::Variable) {
      const auto it = std::find(order.begin(), order.end(), node.name);
      if (it != order.end()) {
        node.slot = static_cast<std::size_t>(it - order.begin());
      } else {
        node.slot = static_cast<std::size_t>(-1);
        node.value = constants.at(node.name);
      }
    }
    if (node.left) bind_node(*node.left, order, constants);
    if (node.right) bind_node(*node.right, order, constants);
  }

  static std::unique_ptr<Node> copy_node(const Node& node) {
    auto out = std::make_unique<Node>(Node{node.kind, node.value, node.name, node.slot, nullptr, nullptr});
    if (node.left) out->left = copy_node(*node.left);
    if (node.right) out->right = copy_node(*node.right);
    return out;
  }

  static double eval(const Node& node, std::span<const double> slots) {
    switch (node.kind) {
      case Kind::Number: return node.value;
      case Kind::Variable: return node.slot == static_cast<std::size_t>(-1) ? node.value : slots[node.slot];
      case Kind::Negate: return -eval(*node.left, slots);
      case Kind::Add: return eval(*node.left, slots) + eval(*node.right, slots);
      case Kind::Subtract: return eval(*node.left, slots) - eval(*node.right, slots);
      case Kind::Multiply: return eval(*node.left, slots) * eval(*node.right, slots);
      case Kind::Divide: return eval(*node.left, slots) / eval(*node.right, slots);
      case Kind::Power: return std::pow(eval(*node.left, slots), eval(*node.right, slots));
    }
    return std::nan("");
  }

  std::string text_;
  std::unique_ptr<Node> root_;
  std::set<std::string> variables_;
  std::size_t arity_ = 0;
  bool bound_ = false;
};

namespace detail {

class ExpressionParser {
 public:
  explicit ExpressionParser(std::string_view text) : text_(text) {}

  std::unique_ptr<LimitState::Node> parse() {
    skip_space();
    if (pos_ == text_.size()) fail("empty expression");
    auto node = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return node;
  }

 private:
  using NodePtr = std::unique_ptr<LimitState::Node>;
  using Kind = LimitState::Kind;

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(Errc::SyntaxError, what, pos_);
  }

  static bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
  static bool is_digit(char c) { return c >= '0' && c <= '9'; }

  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' || text_[pos_] == '\r'))
      ++pos_;
  }

  /// Next significant character, or '\0' at the end. Rejects characters
  /// outside the grammar's alphabet.
  char peek() {
    skip_space();
    if (pos_ >= text_.size()) return '\0';
    const char c = text_[pos_];
    static constexpr std::string_view kOperators = "+-*/^()";
    if (kOperators.find(c) == std::string_view::npos && !is_digit(c) && c != '.' && !is_ident_start(c)) {
      throw Error(Errc::UnknownCharacter, "'" + std::string(1, c) + "'", pos_);
    }
    return c;
  }

  static NodePtr binary(Kind kind, NodePtr left, NodePtr right) {
    auto node = std::make_unique<LimitState::Node>();
    node->kind = kind;
    node->left = std::move(left);
    node->right = std::move(right);
    return node;
  }

  NodePtr expr() {
    NodePtr left = term();
    for (char c = peek(); c == '+' || c == '-'; c = peek()) {
      ++pos_;
      left = binary(c == '+' ? Kind::Add : Kind::Subtract, std::move(left), term());
    }
    return left;
  }

  NodePtr term() {
    NodePtr left = unary();
    for (char c = peek(); c == '*' || c == '/'; c = peek()) {
      ++pos_;
      left = binary(c == '*' ? Kind::Multiply : Kind::Divide, std::move(left), unary());
    }
    return left;
  }

  NodePtr unary() {
    const char c = peek();
    if (c == '-') {
      ++pos_;
      return binary(Kind::Negate, unary(), nullptr);
    }
    if (c == '+') {
      ++pos_;
      return unary();
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (peek() == '^') {
      ++pos_;
      return binary(Kind::Power, std::move(base), unary());
    }
    return base;
  }

  NodePtr primary() {
    const char c = peek();
    if (c == '\0') fail("unexpected end of expression");
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return inner;
    }
    if (is_digit(c) || c == '.') return number();
    if (is_ident_start(c)) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
      auto node = std::make_unique<LimitState::Node>();
      node->kind = Kind::Variable;
      node->name = std::string(text_.substr(start, pos_ - start));
      return node;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && is_digit(text_[look])) {
        pos_ = look;
        while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
      }
    }
    auto node = std::make_unique<LimitState::Node>();
    node->kind = Kind::Number;
    const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, node->value);
    if (ec != std::errc() || ptr != text_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    return node;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline LimitState parse_limit_state(std::string_view text) {
  return LimitState(std::string(text), detail::ExpressionParser(text).parse());
}

}  // namespace ncvx
