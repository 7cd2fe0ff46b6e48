#pragma once

#include <cctype>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "error.hpp"
#include "frames.hpp"
#include "modal_frame.hpp"
#include "poset.hpp"

namespace imcoalg {

/// A frame written by hand:
///
///     # comment
///     [elements]
///     a b c
///     [order]
///     a < b < c
///     [modal]
///     a R b
///     [val]
///     p : b c
///     [nbhd]
///     a : {b c} {}
///
/// Only [elements] is required. Order lines give covers; the order is their
/// reflexive-transitive closure.
struct FrameFile {
  PosetRef poset;
  ModalFrame frame;
  std::map<std::string, Subset> valuation;
  std::vector<std::vector<Subset>> nbhd;  // empty unless an [nbhd] section is present
  bool has_nbhd = false;
  std::vector<std::string> closed_letters;  // letters whose value was closed upward while parsing
};

struct FrameFileOptions {
  bool close_valuations = false;
};

namespace detail {

struct Token {
  std::string text;
  std::size_t column;  // 1-based
};

inline bool is_delimiter(char c) { return c == '{' || c == '}' || c == ':' || c == '<'; }

inline std::vector<Token> tokenize_line(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == '#') break;
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (is_delimiter(c)) {
      out.push_back({std::string(1, c), i + 1});
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != '#' &&
           !is_delimiter(line[i]))
      ++i;
    out.push_back({std::string(line.substr(start, i - start)), start + 1});
  }
  return out;
}

class FrameFileParser {
 public:
  FrameFileParser(std::string_view text, FrameFileOptions options) : text_(text), options_(options) {}

  FrameFile parse() {
    enum class Section { none, elements, order, modal, val, nbhd };
    Section section = Section::none;
    bool seen_elements = false;
    std::size_t line_no = 0, offset = 0;
    while (offset <= text_.size()) {
      std::size_t end = text_.find('\n', offset);
      if (end == std::string_view::npos) end = text_.size();
      ++line_no;
      line_ = line_no;
      line_offset_ = offset;
      std::string_view line = text_.substr(offset, end - offset);
      offset = end + 1;

      std::size_t first = line.find_first_not_of(" \t\r");
      if (first != std::string_view::npos && line[first] == '[') {
        std::size_t close = line.find(']', first);
        if (close == std::string_view::npos) fail(ErrorKind::ParseError, "unterminated section header", first + 1);
        std::string name(line.substr(first + 1, close - first - 1));
        auto rest = tokenize_line(line.substr(close + 1));
        if (!rest.empty()) fail(ErrorKind::ParseError, "text after section header", close + 1 + rest[0].column);
        if (name == "elements") {
          section = Section::elements;
          seen_elements = true;
        } else if (name == "order") {
          section = Section::order;
        } else if (name == "modal") {
          section = Section::modal;
        } else if (name == "val") {
          section = Section::val;
        } else if (name == "nbhd") {
          section = Section::nbhd;
          has_nbhd_ = true;
        } else {
          fail(ErrorKind::ParseError, "unknown section [" + name + "]", first + 1);
        }
        continue;
      }
      auto tokens = tokenize_line(line);
      if (tokens.empty()) continue;
      switch (section) {
        case Section::none: fail(ErrorKind::ParseError, "content before any section", tokens[0].column); break;
        case Section::elements: elements_line(tokens); break;
        case Section::order: order_line(tokens); break;
        case Section::modal: modal_line(tokens); break;
        case Section::val: val_line(tokens); break;
        case Section::nbhd: nbhd_line(tokens); break;
      }
    }
    if (!seen_elements || labels_.empty()) {
      line_ = 1;
      line_offset_ = 0;
      fail(ErrorKind::ParseError, "missing [elements]", 1);
    }
    return finish();
  }

 private:
  struct Located {
    Index index;
    std::size_t line, column, offset;
  };

  [[noreturn]] void fail(ErrorKind kind, const std::string& msg, std::size_t column) const {
    throw SourceError(kind, msg, line_, column, line_offset_ + column - 1);
  }
  [[noreturn]] void fail_at(ErrorKind kind, const std::string& msg, std::size_t line, std::size_t column,
                            std::size_t offset) const {
    throw SourceError(kind, msg, line, column, offset);
  }

  Index label(const Token& t) {
    if (t.text.size() == 1 && is_delimiter(t.text[0])) fail(ErrorKind::ParseError, "expected a label, found '" + t.text + "'", t.column);
    auto it = index_.find(t.text);
    if (it == index_.end()) fail(ErrorKind::UnknownLabel, "undeclared element '" + t.text + "'", t.column);
    return it->second;
  }

  void elements_line(const std::vector<Token>& tokens) {
    for (const auto& t : tokens) {
      if (t.text.size() == 1 && is_delimiter(t.text[0])) fail(ErrorKind::ParseError, "unexpected '" + t.text + "'", t.column);
      if (!index_.emplace(t.text, labels_.size()).second)
        fail(ErrorKind::DuplicateLabel, "element '" + t.text + "' declared twice", t.column);
      labels_.push_back(t.text);
    }
  }

  void order_line(const std::vector<Token>& tokens) {
    if (tokens.size() < 3 || tokens.size() % 2 == 0)
      fail(ErrorKind::ParseError, "expected 'a < b'", tokens[0].column);
    for (std::size_t k = 1; k < tokens.size(); k += 2)
      if (tokens[k].text != "<") fail(ErrorKind::ParseError, "expected '<'", tokens[k].column);
    for (std::size_t k = 0; k + 2 < tokens.size(); k += 2) {
      Index a = label(tokens[k]);
      Index b = label(tokens[k + 2]);
      if (a == b) fail(ErrorKind::ParseError, "'" + tokens[k].text + " < " + tokens[k].text + "' is not strict", tokens[k].column);
      order_.push_back({a, line_, tokens[k].column, line_offset_ + tokens[k].column - 1});
      order_targets_.push_back(b);
    }
  }

  void modal_line(const std::vector<Token>& tokens) {
    if (tokens.size() != 3 || tokens[1].text != "R")
      fail(ErrorKind::ParseError, "expected 'a R b'", tokens[0].column);
    modal_.emplace_back(label(tokens[0]), label(tokens[2]));
  }

  void val_line(const std::vector<Token>& tokens) {
    if (tokens.size() < 2 || tokens[1].text != ":") fail(ErrorKind::ParseError, "expected 'letter : elements'", tokens[0].column);
    const Token& letter = tokens[0];
    if (letter.text == "T" || letter.text == "F" || letter.text == "R" || !std::isalpha(static_cast<unsigned char>(letter.text[0])))
      fail(ErrorKind::ParseError, "'" + letter.text + "' is not a letter name", letter.column);
    for (char c : letter.text)
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
        fail(ErrorKind::ParseError, "'" + letter.text + "' is not a letter name", letter.column);
    if (val_.count(letter.text)) fail(ErrorKind::ParseError, "letter '" + letter.text + "' valued twice", letter.column);
    std::vector<Index> members;
    for (std::size_t k = 2; k < tokens.size(); ++k) members.push_back(label(tokens[k]));
    val_.emplace(letter.text, std::make_pair(members, Located{0, line_, letter.column, line_offset_ + letter.column - 1}));
  }

  void nbhd_line(const std::vector<Token>& tokens) {
    if (tokens.size() < 2 || tokens[1].text != ":") fail(ErrorKind::ParseError, "expected 'e : {..} {..}'", tokens[0].column);
    Index e = label(tokens[0]);
    if (nbhd_.count(e)) fail(ErrorKind::ParseError, "neighbourhoods of '" + tokens[0].text + "' given twice", tokens[0].column);
    std::vector<std::vector<Index>> sets;
    std::size_t k = 2;
    while (k < tokens.size()) {
      if (tokens[k].text != "{") fail(ErrorKind::ParseError, "expected '{'", tokens[k].column);
      ++k;
      std::vector<Index> s;
      while (k < tokens.size() && tokens[k].text != "}") s.push_back(label(tokens[k++]));
      if (k == tokens.size()) fail(ErrorKind::ParseError, "unterminated '{'", tokens.back().column);
      ++k;
      sets.push_back(std::move(s));
    }
    nbhd_.emplace(e, std::make_pair(std::move(sets), Located{e, line_, tokens[0].column, line_offset_ + tokens[0].column - 1}));
  }

  FrameFile finish() {
    const std::size_t n = labels_.size();
    std::vector<Subset> up(n, Subset(n));
    for (Index i = 0; i < n; ++i) up[i].insert(i);
    for (std::size_t k = 0; k < order_.size(); ++k) up[order_[k].index].insert(order_targets_[k]);
    for (Index k = 0; k < n; ++k)
      for (Index i = 0; i < n; ++i)
        if (up[i].contains(k)) up[i] |= up[k];
    for (const auto& o : order_)
      for (Index j : up[o.index])
        if (j != o.index && up[j].contains(o.index))
          fail_at(ErrorKind::ParseError, "order has a cycle through '" + labels_[o.index] + "'", o.line, o.column, o.offset);

    FrameFile f;
    f.poset = share(Poset::from_rows(labels_, std::move(up)));
    std::vector<Subset> rows(n, Subset(n));
    for (auto [a, b] : modal_) rows[a].insert(b);
    f.frame = ModalFrame(f.poset, std::move(rows));

    for (const auto& [letter, entry] : val_) {
      Subset v(n);
      for (Index i : entry.first) v.insert(i);
      if (!is_upset(*f.poset, v)) {
        if (!options_.close_valuations)
          fail_at(ErrorKind::ValueNotUpset, "value of '" + letter + "' is not upward closed " + format_subset(*f.poset, v),
                  entry.second.line, entry.second.column, entry.second.offset);
        v = up_closure(*f.poset, v);
        f.closed_letters.push_back(letter);
      }
      f.valuation.emplace(letter, std::move(v));
    }

    f.has_nbhd = has_nbhd_;
    if (has_nbhd_) {
      f.nbhd.assign(n, {});
      for (const auto& [e, entry] : nbhd_) {
        for (const auto& members : entry.first) {
          Subset s(n);
          for (Index i : members) s.insert(i);
          if (!is_upset(*f.poset, s))
            fail_at(ErrorKind::ValueNotUpset, "neighbourhood " + format_subset(*f.poset, s) + " is not upward closed",
                    entry.second.line, entry.second.column, entry.second.offset);
          f.nbhd[e].push_back(std::move(s));
        }
      }
    }
    return f;
  }

  std::string_view text_;
  FrameFileOptions options_;
  std::size_t line_ = 0;
  std::size_t line_offset_ = 0;
  std::vector<std::string> labels_;
  std::map<std::string, Index> index_;
  std::vector<Located> order_;
  std::vector<Index> order_targets_;
  std::vector<std::pair<Index, Index>> modal_;
  std::map<std::string, std::pair<std::vector<Index>, Located>> val_;
  std::map<Index, std::pair<std::vector<std::vector<Index>>, Located>> nbhd_;
  bool has_nbhd_ = false;
};

inline std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

/// Throws SourceError (ParseError, UnknownLabel, DuplicateLabel,
/// ValueNotUpset) with the line and column of the offending token.
inline FrameFile parse_frame_file(std::string_view text, FrameFileOptions options = {}) {
  return detail::FrameFileParser(text, options).parse();
}

/// Covers as solid edges from low to high, R as dashed edges.
inline std::string to_dot(const ModalFrame& f) {
  const Poset& p = f.poset();
  std::ostringstream out;
  out << "digraph frame {\n";
  for (Index i = 0; i < p.size(); ++i) out << "  " << detail::dot_quote(p.label(i)) << ";\n";
  for (auto [a, b] : p.covers()) out << "  " << detail::dot_quote(p.label(a)) << " -> " << detail::dot_quote(p.label(b)) << ";\n";
  for (Index a = 0; a < f.size(); ++a)
    for (Index b : f.successors(a))
      out << "  " << detail::dot_quote(p.label(a)) << " -> " << detail::dot_quote(p.label(b)) << " [style=dashed];\n";
  out << "}\n";
  return out.str();
}

/// The frame back in the text format: covers only, sections in fixed order.
inline std::string to_frame_text(const FrameFile& f) {
  const Poset& p = *f.poset;
  std::ostringstream out;
  out << "[elements]\n";
  for (Index i = 0; i < p.size(); ++i) out << (i ? " " : "") << p.label(i);
  out << "\n";
  auto covers = p.covers();
  if (!covers.empty()) {
    out << "[order]\n";
    for (auto [a, b] : covers) out << p.label(a) << " < " << p.label(b) << "\n";
  }
  bool any_r = false;
  for (Index a = 0; a < p.size(); ++a) any_r = any_r || !f.frame.successors(a).empty();
  if (any_r) {
    out << "[modal]\n";
    for (Index a = 0; a < p.size(); ++a)
      for (Index b : f.frame.successors(a)) out << p.label(a) << " R " << p.label(b) << "\n";
  }
  if (!f.valuation.empty()) {
    out << "[val]\n";
    for (const auto& [letter, v] : f.valuation) {
      out << letter << " :";
      for (Index i : v) out << " " << p.label(i);
      out << "\n";
    }
  }
  if (f.has_nbhd) {
    out << "[nbhd]\n";
    for (Index a = 0; a < p.size(); ++a) {
      out << p.label(a) << " :";
      for (const Subset& s : f.nbhd[a]) {
        out << " {";
        bool first = true;
        for (Index i : s) {
          out << (first ? "" : " ") << p.label(i);
          first = false;
        }
        out << "}";
      }
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace imcoalg
