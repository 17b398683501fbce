#pragma once

// Reader and printer for the expression language:
//   (finite <group-json>)
//   (dp e1 e2 ...)
//   (wr e)
//   (cons :y0 [labels] :parts [<group-json> ...] :h <group-json>)
// ';' starts a comment that runs to the end of the line.

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hcell/error.hpp"
#include "hcell/expr.hpp"
#include "hcell/json_io.hpp"

namespace hcell {

namespace detail {

class ExprReader {
 public:
  ExprReader(std::string_view text, std::size_t elem_cap) : text_(text), cap_(elem_cap) {}

  GroupExpr read_document() {
    skip_space();
    GroupExpr e = read_expr();
    skip_space();
    if (pos_ < text_.size()) error({"end of input"}, "trailing input");
    return e;
  }

 private:
  [[noreturn]] void error(std::vector<std::string> expected, const std::string& message) const {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string msg = message + " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) msg += (i ? " | " : "") + expected[i];
    msg += pos_ >= text_.size() ? ", found end of input)" : ")";
    throw ParseError(line, column, std::move(expected), msg);
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  void expect_char(char c) {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != c) error({std::string("'") + c + "'"}, "unexpected token");
    ++pos_;
  }

  std::string read_symbol() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == ':' || c == '_' || c == '-') {
        ++pos_;
      } else {
        break;
      }
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  // Scans one balanced JSON array/object, honouring string literals.
  Json read_json() {
    skip_space();
    if (pos_ >= text_.size() || (text_[pos_] != '{' && text_[pos_] != '[')) {
      error({"JSON object", "JSON array"}, "expected embedded JSON");
    }
    const std::size_t start = pos_;
    int depth = 0;
    bool in_string = false;
    for (; pos_ < text_.size(); ++pos_) {
      const char c = text_[pos_];
      if (in_string) {
        if (c == '\\') {
          ++pos_;
        } else if (c == '"') {
          in_string = false;
        }
        continue;
      }
      if (c == '"') in_string = true;
      if (c == '{' || c == '[') ++depth;
      if (c == '}' || c == ']') {
        if (--depth == 0) {
          ++pos_;
          break;
        }
      }
    }
    if (depth != 0) error({"'}'", "']'"}, "unterminated JSON value");
    const std::string_view body = text_.substr(start, pos_ - start);
    Json j = Json::parse(body, nullptr, false);
    if (j.is_discarded()) {
      pos_ = start;
      error({"valid JSON"}, "malformed JSON value");
    }
    return j;
  }

  FinPermGroup read_group() {
    const std::size_t at = pos_;
    Json j = read_json();
    try {
      return group_from_json(j, cap_);
    } catch (const Error& e) {
      pos_ = at;
      skip_space();
      error({"group object {domain, gens}"}, e.what());
    }
  }

  GroupExpr read_expr() {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != '(') error({"'('"}, "expected an expression");
    ++pos_;
    const std::size_t head_at = pos_;
    const std::string head = read_symbol();
    if (head == "finite") {
      FinPermGroup g = read_group();
      expect_char(')');
      return GroupExpr::finite(std::move(g));
    }
    if (head == "wr") {
      GroupExpr inner = read_expr();
      expect_char(')');
      return GroupExpr::wreath_omega(std::move(inner));
    }
    if (head == "dp") {
      std::vector<GroupExpr> parts;
      while (true) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == ')') break;
        if (pos_ >= text_.size()) error({"'('", "')'"}, "unterminated dp");
        parts.push_back(read_expr());
      }
      ++pos_;
      if (parts.empty()) error({"'('"}, "dp needs at least one part");
      return GroupExpr::direct_product(std::move(parts));
    }
    if (head == "cons") return read_cons();
    pos_ = head_at;
    error({"finite", "dp", "wr", "cons"}, "unknown expression head");
  }

  GroupExpr read_cons() {
    expect_keyword(":y0");
    const std::size_t y0_at = pos_;
    Json y0j = read_json();
    std::vector<PointLabel> y0;
    try {
      y0 = labels_from_json(y0j);
    } catch (const Error& e) {
      pos_ = y0_at;
      skip_space();
      error({"array of label strings"}, e.what());
    }
    expect_keyword(":parts");
    skip_space();
    const std::size_t parts_at = pos_;
    Json pj = read_json();
    if (!pj.is_array()) {
      pos_ = parts_at;
      error({"array of group objects"}, "parts must be an array");
    }
    std::vector<FinPermGroup> parts;
    try {
      for (const Json& g : pj) parts.push_back(group_from_json(g, cap_));
    } catch (const Error& e) {
      pos_ = parts_at;
      error({"group object {domain, gens}"}, e.what());
    }
    expect_keyword(":h");
    FinPermGroup h = read_group();
    expect_char(')');
    return GroupExpr::cons(std::move(y0), std::move(parts), std::move(h));
  }

  void expect_keyword(const std::string& kw) {
    skip_space();
    const std::size_t at = pos_;
    if (read_symbol() != kw) {
      pos_ = at;
      error({kw}, "missing keyword");
    }
  }

  std::string_view text_;
  std::size_t cap_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline GroupExpr parse_expr(std::string_view text, std::size_t elem_cap = kDefaultElemCap) {
  return detail::ExprReader(text, elem_cap).read_document();
}

inline std::string print_expr(const GroupExpr& e) {
  if (const auto* f = e.as<FiniteNode>()) return "(finite " + group_to_json(f->g).dump() + ")";
  if (const auto* dp = e.as<DirectProductNode>()) {
    std::string out = "(dp";
    for (const GroupExpr& p : dp->parts) out += " " + print_expr(p);
    return out + ")";
  }
  if (const auto* w = e.as<WreathOmegaNode>()) return "(wr " + print_expr(*w->inner) + ")";
  const auto& c = *e.as<ConsNode>();
  Json parts = Json::array();
  for (const FinPermGroup& p : c.parts) parts.push_back(group_to_json(p));
  return "(cons :y0 " + labels_to_json(c.y0).dump() + " :parts " + parts.dump() + " :h " +
         group_to_json(c.h).dump() + ")";
}

}  // namespace hcell
