#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "frames.hpp"
#include "heyting.hpp"
#include "modal_frame.hpp"

namespace imcoalg {

/// An IPC_□ formula. Immutable; subformulas are shared.
///
/// Negation is not a node: `~a` is built as `a -> F`.
class Formula {
 public:
  enum class Kind { Var, Top, Bot, And, Or, Impl, Box };

  static Formula var(std::string name) { return Formula(Node{Kind::Var, std::move(name), {}, {}}); }
  static Formula top() { return Formula(Node{Kind::Top, {}, {}, {}}); }
  static Formula bot() { return Formula(Node{Kind::Bot, {}, {}, {}}); }
  static Formula conj(Formula a, Formula b) { return binary(Kind::And, std::move(a), std::move(b)); }
  static Formula disj(Formula a, Formula b) { return binary(Kind::Or, std::move(a), std::move(b)); }
  static Formula impl(Formula a, Formula b) { return binary(Kind::Impl, std::move(a), std::move(b)); }
  static Formula box(Formula a) { return Formula(Node{Kind::Box, {}, std::move(a.node_), {}}); }
  static Formula neg(Formula a) { return impl(std::move(a), bot()); }
  static Formula iff(const Formula& a, const Formula& b) { return conj(impl(a, b), impl(b, a)); }

  Kind kind() const { return node_->kind; }
  const std::string& name() const { return node_->name; }
  Formula left() const { return Formula(node_->left); }
  Formula right() const { return Formula(node_->right); }
  Formula operand() const { return Formula(node_->left); }
  bool is_binary() const { return kind() == Kind::And || kind() == Kind::Or || kind() == Kind::Impl; }

  /// Nesting depth of connectives; atoms have depth 0.
  std::size_t depth() const {
    switch (kind()) {
      case Kind::Var:
      case Kind::Top:
      case Kind::Bot: return 0;
      case Kind::Box: return 1 + operand().depth();
      default: return 1 + std::max(left().depth(), right().depth());
    }
  }

  void collect_letters(std::vector<std::string>& out) const {
    if (kind() == Kind::Var) {
      if (std::find(out.begin(), out.end(), name()) == out.end()) out.push_back(name());
    } else if (kind() == Kind::Box) {
      operand().collect_letters(out);
    } else if (is_binary()) {
      left().collect_letters(out);
      right().collect_letters(out);
    }
  }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
      case Kind::Var: return a.name() == b.name();
      case Kind::Top:
      case Kind::Bot: return true;
      case Kind::Box: return a.operand() == b.operand();
      default: return a.left() == b.left() && a.right() == b.right();
    }
  }

 private:
  struct Node {
    Kind kind;
    std::string name;
    std::shared_ptr<const Node> left;
    std::shared_ptr<const Node> right;
  };

  explicit Formula(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula binary(Kind k, Formula a, Formula b) {
    return Formula(Node{k, {}, std::move(a.node_), std::move(b.node_)});
  }

  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Printing and parsing.
//
//   impl  := or ("->" impl)?          right associative, loosest
//   or    := and ("|" and)*
//   and   := unary ("&" unary)*
//   unary := "[]" unary | "~" unary | atom
//   atom  := identifier | "T" | "F" | "(" impl ")"

namespace detail {

inline int precedence(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Impl: return 1;
    case Formula::Kind::Or: return 2;
    case Formula::Kind::And: return 3;
    default: return 4;
  }
}

inline void print_into(const Formula& f, int min_prec, std::string& out) {
  const int prec = precedence(f);
  const bool parens = prec < min_prec;
  if (parens) out += "(";
  switch (f.kind()) {
    case Formula::Kind::Var: out += f.name(); break;
    case Formula::Kind::Top: out += "T"; break;
    case Formula::Kind::Bot: out += "F"; break;
    case Formula::Kind::Box:
      out += "[]";
      print_into(f.operand(), 4, out);
      break;
    case Formula::Kind::Impl:
      print_into(f.left(), 2, out);
      out += " -> ";
      print_into(f.right(), 1, out);
      break;
    case Formula::Kind::Or:
      print_into(f.left(), 2, out);
      out += " | ";
      print_into(f.right(), 3, out);
      break;
    case Formula::Kind::And:
      print_into(f.left(), 3, out);
      out += " & ";
      print_into(f.right(), 4, out);
      break;
  }
  if (parens) out += ")";
}

class FormulaParser {
 public:
  explicit FormulaParser(std::string_view text) : text_(text) {}

  Formula parse() {
    skip_space();
    if (pos_ == text_.size()) fail(ErrorKind::SyntaxError, "empty formula");
    Formula f = parse_impl();
    skip_space();
    if (pos_ != text_.size()) fail(ErrorKind::SyntaxError, "unexpected input");
    return f;
  }

 private:
  [[noreturn]] void fail(ErrorKind kind, const std::string& what) const {
    throw SourceError(kind, what, 1, pos_ + 1, pos_);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view tok) {
    skip_space();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  // Rejects characters that cannot begin any token.
  void check_token() {
    skip_space();
    if (pos_ >= text_.size()) return;
    const char c = text_[pos_];
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '(' || c == ')' || c == '&' || c == '|' ||
        c == '~')
      return;
    if (text_.substr(pos_, 2) == "[]" || text_.substr(pos_, 2) == "->") return;
    fail(ErrorKind::UnknownToken, std::string("unknown token '") + c + "'");
  }

  Formula parse_impl() {
    Formula lhs = parse_or();
    check_token();
    if (accept("->")) return Formula::impl(std::move(lhs), parse_impl());
    return lhs;
  }

  Formula parse_or() {
    Formula lhs = parse_and();
    check_token();
    while (accept("|")) {
      lhs = Formula::disj(std::move(lhs), parse_and());
      check_token();
    }
    return lhs;
  }

  Formula parse_and() {
    Formula lhs = parse_unary();
    check_token();
    while (accept("&")) {
      lhs = Formula::conj(std::move(lhs), parse_unary());
      check_token();
    }
    return lhs;
  }

  Formula parse_unary() {
    check_token();
    if (accept("[]")) return Formula::box(parse_unary());
    if (accept("~")) return Formula::neg(parse_unary());
    return parse_atom();
  }

  Formula parse_atom() {
    check_token();
    if (pos_ == text_.size()) fail(ErrorKind::SyntaxError, "unexpected end of formula");
    if (accept("(")) {
      Formula f = parse_impl();
      check_token();
      if (!accept(")")) fail(ErrorKind::SyntaxError, "expected ')'");
      return f;
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    if (start == pos_) fail(ErrorKind::SyntaxError, "expected a formula");
    const std::string_view word = text_.substr(start, pos_ - start);
    if (word == "T") return Formula::top();
    if (word == "F") return Formula::bot();
    if (std::isdigit(static_cast<unsigned char>(word.front()))) {
      pos_ = start;
      fail(ErrorKind::SyntaxError, "letters must not start with a digit");
    }
    return Formula::var(std::string(word));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Prints with the minimal parentheses the grammar needs; parse(print(f)) == f.
inline std::string print(const Formula& f) {
  std::string out;
  detail::print_into(f, 1, out);
  return out;
}

inline Formula parse(std::string_view text) { return detail::FormulaParser(text).parse(); }

// ---------------------------------------------------------------------------
// Models and truth.

/// A modal frame with an upset-valued valuation.
class Model {
 public:
  Model(ModalFrame frame, std::map<std::string, Subset> valuation)
      : frame_(std::move(frame)), valuation_(std::move(valuation)) {
    for (const auto& [letter, set] : valuation_)
      if (set.universe() != frame_.size() || !is_upset(frame_.poset(), set))
        throw Error(ErrorKind::ValueNotUpset, "valuation of " + letter + " is not an upset");
  }

  const ModalFrame& frame() const { return frame_; }
  const std::map<std::string, Subset>& valuation() const { return valuation_; }
  const Subset& value(const std::string& letter) const {
    auto it = valuation_.find(letter);
    if (it == valuation_.end()) throw Error(ErrorKind::UndeclaredLetter, letter);
    return it->second;
  }

 private:
  ModalFrame frame_;
  std::map<std::string, Subset> valuation_;
};

/// {x : M, x ⊨ φ}.
inline Subset truth_set(const Model& m, const Formula& f) {
  const Poset& p = m.frame().poset();
  switch (f.kind()) {
    case Formula::Kind::Var: return m.value(f.name());
    case Formula::Kind::Top: return Subset::full(p.size());
    case Formula::Kind::Bot: return Subset(p.size());
    case Formula::Kind::And: return truth_set(m, f.left()) & truth_set(m, f.right());
    case Formula::Kind::Or: return truth_set(m, f.left()) | truth_set(m, f.right());
    case Formula::Kind::Impl: return heyting_impl(p, truth_set(m, f.left()), truth_set(m, f.right()));
    case Formula::Kind::Box: return box_op(m.frame(), truth_set(m, f.operand()));
  }
  return Subset(p.size());
}

inline bool valid_on_model(const Model& m, const Formula& f) { return truth_set(m, f).count() == m.frame().size(); }

// ---------------------------------------------------------------------------
// Formula enumeration.

/// Every formula of connective depth at most `max_depth` over the letters, in a
/// fixed order: atoms (letters, T, F), then for each depth d: boxes, then the
/// binary connectives &, |, -> over all pairs reaching depth exactly d.
inline std::vector<Formula> enumerate_formulas(const std::vector<std::string>& letters, std::size_t max_depth,
                                               std::size_t cap = 2'000'000) {
  std::vector<Formula> all;
  for (const auto& l : letters) all.push_back(Formula::var(l));
  all.push_back(Formula::top());
  all.push_back(Formula::bot());
  std::size_t prev_end = 0;  // formulas [prev_end, all.size()) have the previous depth
  for (std::size_t d = 1; d <= max_depth; ++d) {
    const std::size_t lo = prev_end;
    const std::size_t hi = all.size();
    const double next = static_cast<double>(hi - lo) + 3.0 * (static_cast<double>(hi) * hi - static_cast<double>(lo) * lo);
    if (static_cast<double>(all.size()) + next > static_cast<double>(cap))
      throw Error(ErrorKind::EnumerationTooLarge, "formula enumeration exceeds the cap");
    for (std::size_t i = lo; i < hi; ++i) all.push_back(Formula::box(all[i]));
    for (Formula::Kind k : {Formula::Kind::And, Formula::Kind::Or, Formula::Kind::Impl}) {
      for (std::size_t i = 0; i < hi; ++i)
        for (std::size_t j = 0; j < hi; ++j) {
          if (i < lo && j < lo) continue;
          Formula a = all[i];
          Formula b = all[j];
          all.push_back(k == Formula::Kind::And  ? Formula::conj(a, b)
                        : k == Formula::Kind::Or ? Formula::disj(a, b)
                                                 : Formula::impl(a, b));
        }
    }
    prev_end = hi;
  }
  return all;
}

template <class Rng>
Formula random_formula(const std::vector<std::string>& letters, std::size_t max_depth, Rng& rng) {
  std::uniform_int_distribution<int> pick(0, max_depth == 0 ? 0 : 6);
  const int choice = pick(rng);
  if (max_depth == 0 || choice == 0) {
    std::uniform_int_distribution<std::size_t> atom(0, letters.size() + 1);
    const std::size_t a = atom(rng);
    if (a < letters.size()) return Formula::var(letters[a]);
    return a == letters.size() ? Formula::top() : Formula::bot();
  }
  if (choice == 1 || choice == 2) return Formula::box(random_formula(letters, max_depth - 1, rng));
  Formula l = random_formula(letters, max_depth - 1, rng);
  Formula r = random_formula(letters, max_depth - 1, rng);
  if (choice == 3) return Formula::conj(std::move(l), std::move(r));
  if (choice == 4) return Formula::disj(std::move(l), std::move(r));
  return Formula::impl(std::move(l), std::move(r));
}

template <class Rng>
Model random_model(const ModalFrame& frame, const std::vector<std::string>& letters, Rng& rng) {
  std::map<std::string, Subset> val;
  for (const auto& l : letters) val.emplace(l, random_upset(frame.poset(), rng, 0.35));
  return Model(frame, std::move(val));
}

}  // namespace imcoalg
