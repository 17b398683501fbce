#pragma once

// Command-line front end: argument parsing, input loading, dispatch and
// report rendering. Exit codes: 0 success, 1 counterexample or failed
// check, 2 error (reported as a JSON object on stdout).

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hcell/analysis.hpp"
#include "hcell/construct.hpp"
#include "hcell/error.hpp"
#include "hcell/expr.hpp"
#include "hcell/json_io.hpp"
#include "hcell/reducts.hpp"
#include "hcell/sexpr.hpp"
#include "hcell/structures.hpp"
#include "hcell/verify.hpp"

namespace hcell::cli {

enum class Output { kTable, kJson, kDot };

struct RunConfig {
  std::string command;
  std::string expr_path;
  std::string struct_path;
  std::string group_path;
  std::string b_path;  // merge: the reduct B
  std::string c_path;  // merge: the candidate C
  std::string forb_path;
  std::vector<std::string> fixture_paths;
  std::size_t t = 3;
  bool t_given = false;
  std::size_t n_max = 4;
  std::size_t m = 2;
  std::size_t elem_cap = kDefaultElemCap;
  std::size_t s = 4;
  Output output = Output::kTable;
  std::size_t jobs = 1;
  std::string filter;
  std::string corrupt;
  bool timing = false;
  bool widths = false;
  std::string perm;
  std::vector<std::string> marked;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitCounterexample = 1;
inline constexpr int kExitError = 2;

// ---------------------------------------------------------------------------
// Input

using Input = std::variant<GroupExpr, RelStruct>;

inline Input parse_input(std::string_view text, std::size_t elem_cap = kDefaultElemCap) {
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    } else if (text[i] == ';') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else {
      break;
    }
  }
  if (i < text.size() && text[i] == '{') {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::parse_error& e) {
      fail(ErrorKind::kParseError, std::string("structure JSON: ") + e.what());
    }
    return struct_from_json(j);
  }
  return parse_expr(text, elem_cap);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kInvalidArgument, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline GroupExpr load_expr(const std::string& path, std::size_t cap) {
  Input in = parse_input(read_file(path), cap);
  if (auto* e = std::get_if<GroupExpr>(&in)) return std::move(*e);
  fail(ErrorKind::kInvalidArgument, "'" + path + "' holds a structure, not an expression");
}

inline RelStruct load_struct(const std::string& path) {
  Input in = parse_input(read_file(path));
  if (auto* a = std::get_if<RelStruct>(&in)) return std::move(*a);
  fail(ErrorKind::kInvalidArgument, "'" + path + "' holds an expression, not a structure");
}

inline FinPermGroup load_group(const std::string& path, std::size_t cap) {
  try {
    return group_from_json(Json::parse(read_file(path)), cap);
  } catch (const Json::exception& e) {
    fail(ErrorKind::kParseError, std::string("group JSON: ") + e.what());
  }
}

// The group under study: --group as given, --struct via Aut, --expr via its
// truncation at t.
inline FinPermGroup load_any_group(const RunConfig& cfg) {
  if (!cfg.group_path.empty()) return load_group(cfg.group_path, cfg.elem_cap);
  if (!cfg.struct_path.empty()) return aut_group(load_struct(cfg.struct_path), cfg.elem_cap);
  if (!cfg.expr_path.empty()) return truncate(load_expr(cfg.expr_path, cfg.elem_cap), cfg.t).group;
  fail(ErrorKind::kInvalidArgument, "one of --group, --struct or --expr is required");
}

inline GroupExpr load_any_expr(const RunConfig& cfg) {
  if (!cfg.expr_path.empty()) return load_expr(cfg.expr_path, cfg.elem_cap);
  if (!cfg.group_path.empty()) return GroupExpr::finite(load_group(cfg.group_path, cfg.elem_cap));
  fail(ErrorKind::kInvalidArgument, "--expr or --group is required");
}

// ---------------------------------------------------------------------------
// Rendering

// Columns are right-aligned except the first and any marked left.
class Table {
 public:
  void row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }
  void left(std::size_t col) { left_.push_back(col); }

  void print(std::ostream& out) const {
    std::vector<std::size_t> w;
    for (const auto& r : rows_) {
      if (w.size() < r.size()) w.resize(r.size(), 0);
      for (std::size_t i = 0; i < r.size(); ++i) w[i] = std::max(w[i], r[i].size());
    }
    for (const auto& r : rows_) {
      std::string line;
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (i > 0) line += "  ";
        const std::string pad(w[i] - r[i].size(), ' ');
        const bool is_left = i == 0 || std::find(left_.begin(), left_.end(), i) != left_.end();
        line += is_left ? r[i] + (i + 1 < r.size() ? pad : "") : pad + r[i];
      }
      out << line << '\n';
    }
  }

 private:
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::size_t> left_;
};

inline std::string join_labels(const std::vector<PointLabel>& ls, const std::string& sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < ls.size(); ++i) out += (i ? sep : "") + ls[i].str();
  return out;
}

inline std::string partition_str(const Partition& p, const std::vector<PointLabel>& dom) {
  std::string out;
  for (const auto& c : p.classes()) {
    out += "{";
    for (std::size_t i = 0; i < c.size(); ++i) out += (i ? "," : "") + dom[c[i]].str();
    out += "}";
  }
  return out;
}

inline std::string yes_no(bool b) { return b ? "yes" : "no"; }

inline void emit(std::ostream& out, const OrderedJson& j) { out << j.dump(2) << '\n'; }

inline std::vector<PointLabel> point_labels(const FinPermGroup& g, const std::vector<Point>& pts) {
  std::vector<PointLabel> out;
  for (Point x : pts) out.push_back(g.domain()[x]);
  return out;
}

inline OrderedJson group_json(const FinPermGroup& g) {
  OrderedJson j;
  j["domain"] = labels_to_json(g.domain());
  j["gens"] = OrderedJson::array();
  for (const Perm& s : g.gens()) j["gens"].push_back(s.image());
  return j;
}

inline OrderedJson error_json(const std::string& kind, const std::string& message) {
  OrderedJson e;
  e["kind"] = kind;
  e["message"] = message;
  OrderedJson j;
  j["error"] = e;
  return j;
}

// ---------------------------------------------------------------------------
// Commands

inline int cmd_profile(const RunConfig& cfg, std::ostream& out) {
  const GroupExpr e = load_any_expr(cfg);
  const bool stable = !cfg.t_given;
  const OrbitProfile p = stable ? stable_profile(e, cfg.n_max) : orbit_profile(truncate(e, cfg.t).group, cfg.n_max);
  if (cfg.output == Output::kJson) {
    OrderedJson j;
    j["mode"] = stable ? "stable" : "truncation";
    if (!stable) j["t"] = cfg.t;
    j["rows"] = OrderedJson::array();
    for (const OrbitCounts& c : p) {
      j["rows"].push_back({{"n", c.n}, {"o", c.o}, {"oi", c.oi}, {"os", c.os}, {"chain_holds", chain_holds(c)}});
    }
    emit(out, j);
    return kExitOk;
  }
  Table t;
  std::vector<std::string> rn{"n"}, ro{"o"}, roi{"oi"}, ros{"os"};
  for (const OrbitCounts& c : p) {
    rn.push_back(std::to_string(c.n));
    ro.push_back(std::to_string(c.o));
    roi.push_back(std::to_string(c.oi));
    ros.push_back(std::to_string(c.os));
  }
  for (auto* r : {&rn, &ro, &roi, &ros}) t.row(*r);
  out << (stable ? "stable profile (t = n and n + 1)\n" : "profile at t = " + std::to_string(cfg.t) + "\n");
  t.print(out);
  return kExitOk;
}

inline int cmd_rank(const RunConfig& cfg, std::ostream& out) {
  const RankReport r = rank_upper(load_any_expr(cfg));
  if (cfg.output == Output::kJson) {
    emit(out, OrderedJson{{"rank_upper", r.rank_upper}});
  } else {
    out << "rank_upper  " << r.rank_upper << '\n';
  }
  return kExitOk;
}

inline int cmd_width(const RunConfig& cfg, std::ostream& out) {
  const GroupExpr e = load_any_expr(cfg);
  const WidthReport r = width(e, cfg.t);
  const std::vector<PointLabel> dom = truncate(e, cfg.t).group.domain();
  if (cfg.output == Output::kJson) {
    OrderedJson j;
    j["t"] = r.t;
    j["width"] = r.width;
    j["surrogate"] = "stable acl over truncations t and t+1";
    j["skipped"] = r.skipped;
    j["witnesses"] = OrderedJson::array();
    for (const WidthWitness& w : r.witnesses) {
      j["witnesses"].push_back({{"x", w.x.str()}, {"congruence", partition_to_json(w.e, dom)}, {"acl", w.acl}});
    }
    emit(out, j);
    return kExitOk;
  }
  out << "width  " << r.width << "  (stable-acl surrogate, t = " << r.t << ")\n";
  out << "skipped congruences  " << r.skipped << '\n';
  Table t;
  t.left(2);
  t.row({"x", "acl", "congruence"});
  for (const WidthWitness& w : r.witnesses) t.row({w.x.str(), std::to_string(w.acl), partition_str(w.e, dom)});
  t.print(out);
  return kExitOk;
}

inline int cmd_congruences(const RunConfig& cfg, std::ostream& out) {
  const FinPermGroup g = load_any_group(cfg);
  const std::vector<Partition> cs = congruences(g);
  if (cfg.output == Output::kJson) {
    OrderedJson j;
    j["domain"] = labels_to_json(g.domain());
    j["congruences"] = OrderedJson::array();
    for (const Partition& p : cs) j["congruences"].push_back(OrderedJson(partition_to_json(p, g.domain())));
    emit(out, j);
    return kExitOk;
  }
  out << cs.size() << " congruences\n";
  for (const Partition& p : cs) out << partition_str(p, g.domain()) << '\n';
  return kExitOk;
}

inline OrderedJson partition_report_json(const PartitionReport& r) {
  return {{"c1", r.c1}, {"c2", r.c2}, {"c3", r.c3}, {"c4", r.c4}, {"c5", r.c5},
          {"nabla_classes", r.nabla_classes}, {"delta_per_nabla", r.delta_per_nabla}, {"failure", r.failure}};
}

inline int cmd_omega_partition(const RunConfig& cfg, std::ostream& out) {
  std::optional<Truncation> tr;
  FinPermGroup g;
  if (!cfg.expr_path.empty()) {
    tr = truncate(load_expr(cfg.expr_path, cfg.elem_cap), cfg.t);
    g = tr->group;
  } else {
    g = load_any_group(cfg);
  }
  const std::vector<OmegaCandidate> found = omega_partition_find(g, cfg.t);
  std::optional<PartitionReport> canon;
  if (tr) canon = omega_partition_check(g, cfg.t, canonical_candidate(tr->meta));
  if (cfg.output == Output::kJson) {
    OrderedJson j;
    j["t"] = cfg.t;
    if (canon) j["canonical"] = partition_report_json(*canon);
    j["candidates"] = OrderedJson::array();
    for (const OmegaCandidate& c : found) {
      j["candidates"].push_back({{"k", labels_to_json(point_labels(g, c.k))},
                                 {"nabla", partition_to_json(c.nabla, g.domain())},
                                 {"delta", partition_to_json(c.delta, g.domain())}});
    }
    emit(out, j);
    return kExitOk;
  }
  if (canon) {
    out << "canonical candidate: " << (canon->ok() ? "passes" : "fails " + canon->failure) << '\n';
    Table t;
    t.row({"condition", "1", "2", "3", "4", "5"});
    t.row({"holds", yes_no(canon->c1), yes_no(canon->c2), yes_no(canon->c3), yes_no(canon->c4), yes_no(canon->c5)});
    t.print(out);
  }
  out << found.size() << " passing candidates\n";
  for (const OmegaCandidate& c : found) {
    out << "K = {" << join_labels(point_labels(g, c.k), ",") << "}  nabla = " << partition_str(c.nabla, g.domain())
        << "  delta = " << partition_str(c.delta, g.domain()) << '\n';
  }
  return kExitOk;
}

inline int cmd_truncate(const RunConfig& cfg, std::ostream& out) {
  const Truncation tr = truncate(load_expr(cfg.expr_path, cfg.elem_cap), cfg.t);
  if (cfg.output == Output::kJson) {
    OrderedJson j;
    j["group"] = group_json(tr.group);
    j["order"] = group_order(tr.group);
    j["meta"] = meta_to_json(tr.meta, tr.group.domain());
    emit(out, j);
    return kExitOk;
  }
  Table t;
  t.row({"t", std::to_string(cfg.t)});
  t.row({"degree", std::to_string(tr.group.degree())});
  t.row({"order", std::to_string(group_order(tr.group))});
  t.row({"generators", std::to_string(tr.group.gens().size())});
  t.row({"blocks", std::to_string(tr.meta.k)});
  t.print(out);
  out << "domain  " << join_labels(tr.group.domain()) << '\n';
  return kExitOk;
}

inline const ConsNode& require_cons(const GroupExpr& e) {
  const ConsNode* c = e.as<ConsNode>();
  if (!c) fail(ErrorKind::kInvalidArgument, "expression must be a cons node");
  return *c;
}

inline void print_decomposition(const ConsDecomposition& d, const TruncationMeta& m, std::ostream& out) {
  Table t;
  std::vector<std::string> phi{"phi"};
  for (Point i = 0; i < d.phi.degree(); ++i) phi.push_back(std::to_string(d.phi[i]));
  t.row(phi);
  for (std::size_t i = 1; i < d.psi.size(); ++i) {
    std::vector<std::string> row{"psi_" + std::to_string(i)};
    for (std::size_t c : d.psi[i]) row.push_back(std::to_string(c));
    t.row(row);
  }
  t.print(out);
  Table r;
  for (std::size_t idx = 0; idx < d.rho.size(); ++idx) {
    std::string v;
    for (std::size_t x : m.vector_at(idx)) v += std::to_string(x);
    r.row({"rho[" + v + "]", d.rho[idx].str()});
  }
  r.print(out);
}

inline int cmd_membership(const RunConfig& cfg, std::ostream& out) {
  const GroupExpr e = load_expr(cfg.expr_path, cfg.elem_cap);
  const ConsNode& c = require_cons(e);
  const Truncation tr = truncate(e, cfg.t);
  std::vector<Perm> perms;
  if (!cfg.perm.empty()) {
    Json j;
    try {
      j = Json::parse(cfg.perm);
    } catch (const Json::exception& ex) {
      fail(ErrorKind::kParseError, std::string("--perm: ") + ex.what());
    }
    perms.push_back(perm_from_json(j));
    if (perms.back().degree() != tr.group.degree()) fail(ErrorKind::kInvalidArgument, "--perm has the wrong degree");
  } else {
    perms = tr.group.gens();
  }
  const MembershipOracle oracle(c, tr.meta);
  bool all = true;
  OrderedJson rows = OrderedJson::array();
  Table t;
  t.row({"perm", "a", "b", "c", "d", "member"});
  for (const Perm& s : perms) {
    const MembershipVerdict v = oracle(s);
    all = all && v.ok();
    OrderedJson row{{"perm", s.image()}, {"a", v.a}, {"b", v.b}, {"c", v.c}, {"d", v.d}, {"member", v.ok()}};
    if (v.failing_vector) row["failing_vector"] = *v.failing_vector;
    rows.push_back(row);
    t.row({s.str(), yes_no(v.a), yes_no(v.b), yes_no(v.c), yes_no(v.d), yes_no(v.ok())});
  }
  if (cfg.output == Output::kJson) {
    emit(out, OrderedJson{{"t", cfg.t}, {"domain", labels_to_json(tr.group.domain())}, {"verdicts", rows}});
  } else {
    out << "domain  " << join_labels(tr.group.domain()) << '\n';
    t.print(out);
    if (perms.size() == 1 && check_block_respecting(perms[0], tr.meta).preserves_relations &&
        check_block_respecting(perms[0], tr.meta).fixes_y0) {
      print_decomposition(decompose(perms[0], tr.meta), tr.meta, out);
    }
  }
  return all ? kExitOk : kExitCounterexample;
}

inline int cmd_recover(const RunConfig& cfg, std::ostream& out) {
  const GroupExpr e = load_expr(cfg.expr_path, cfg.elem_cap);
  const ConsNode& c = require_cons(e);
  const Truncation tr = truncate(e, cfg.t);
  const RecoveredBase rb = recover_base(tr.group, tr.meta);
  const bool h_ok = same_group(rb.h, c.h);
  const bool n_ok = !rb.n_checked || same_group(rb.n, cons_normal_part(c));
  if (cfg.output == Output::kJson) {
    OrderedJson j;
    j["t"] = cfg.t;
    j["h"] = group_json(rb.h);
    j["h_matches"] = h_ok;
    if (rb.n_checked) {
      j["n"] = group_json(rb.n);
      j["n_matches"] = n_ok;
      j["n_normal_in_h"] = rb.contains_n && rb.normalizes_n;
    }
    emit(out, j);
  } else {
    Table t;
    t.row({"|H| recovered", std::to_string(group_order(rb.h))});
    t.row({"H matches input", yes_no(h_ok)});
    if (rb.n_checked) {
      t.row({"|N| recovered", std::to_string(group_order(rb.n))});
      t.row({"N matches input", yes_no(n_ok)});
      t.row({"N normal in H", yes_no(rb.contains_n && rb.normalizes_n)});
    } else {
      t.row({"N", "not determined at t = 1"});
    }
    t.print(out);
  }
  return h_ok && n_ok ? kExitOk : kExitCounterexample;
}

inline int cmd_homog(const RunConfig& cfg, std::ostream& out) {
  const RelStruct a = load_struct(cfg.struct_path);
  const HomogResult r = homog_check(a, cfg.m, cfg.n_max, cfg.elem_cap);
  if (cfg.output == Output::kJson) {
    OrderedJson j{{"m", cfg.m}, {"n_max", cfg.n_max}, {"ok", r.ok}};
    if (!r.ok) {
      j["n"] = r.n;
      j["u"] = labels_to_json(r.u);
      j["v"] = labels_to_json(r.v);
    }
    emit(out, j);
  } else if (r.ok) {
    out << "homogenizable at m = " << cfg.m << " up to n = " << cfg.n_max << '\n';
  } else {
    out << "counterexample at n = " << r.n << ": tuples agree on every " << cfg.m
        << "-projection but lie in different orbits\n";
    out << "u  " << join_labels(r.u) << "\nv  " << join_labels(r.v) << '\n';
  }
  return r.ok ? kExitOk : kExitCounterexample;
}

inline int cmd_delta_m(const RunConfig& cfg, std::ostream& out) {
  const RelStruct d = delta_m(load_struct(cfg.struct_path), cfg.m, cfg.elem_cap);
  if (cfg.output == Output::kJson) {
    emit(out, struct_to_json(d));
    return kExitOk;
  }
  Table t;
  t.row({"relation", "arity", "tuples"});
  for (const RelSymbol& r : d.sig) t.row({r.name, std::to_string(r.arity), std::to_string(d.rels.at(r.name).size())});
  t.print(out);
  return kExitOk;
}

inline int cmd_bounds(const RunConfig& cfg, std::ostream& out) {
  const BoundsReport r = boundedness_scan(load_struct(cfg.struct_path), cfg.s);
  if (cfg.output == Output::kJson) {
    OrderedJson j{{"s", cfg.s}, {"m_a", r.m_a}, {"b_a", r.b_a}, {"complete", r.complete}};
    j["minimal_obstructions"] = OrderedJson::array();
    for (const RelStruct& x : r.minimal_obstructions) j["minimal_obstructions"].push_back(struct_to_json(x));
    emit(out, j);
    return kExitOk;
  }
  Table t;
  t.row({"horizon", std::to_string(cfg.s)});
  t.row({"m(A)", std::to_string(r.m_a)});
  t.row({"b(A)", std::to_string(r.b_a)});
  t.row({"obstructions", std::to_string(r.minimal_obstructions.size())});
  t.row({"complete", yes_no(r.complete)});
  t.print(out);
  for (const RelStruct& x : r.minimal_obstructions) out << struct_to_json(x).dump() << '\n';
  return kExitOk;
}

inline int cmd_forb(const RunConfig& cfg, std::ostream& out) {
  const RelStruct a = load_struct(cfg.struct_path);
  if (cfg.forb_path.empty()) fail(ErrorKind::kInvalidArgument, "--forb is required");
  Json list;
  try {
    list = Json::parse(read_file(cfg.forb_path));
  } catch (const Json::exception& e) {
    fail(ErrorKind::kParseError, std::string("forbidden family: ") + e.what());
  }
  if (!list.is_array()) fail(ErrorKind::kInvalidArgument, "forbidden family must be a JSON array");
  std::vector<RelStruct> family;
  for (const Json& j : list) family.push_back(struct_from_json(j));
  const ForbResult r = forb_check(a, family, cfg.s);
  if (cfg.output == Output::kJson) {
    OrderedJson j{{"s", cfg.s}, {"agree", r.agree}};
    if (r.witness) {
      j["witness"] = struct_to_json(*r.witness);
      j["witness_in_age"] = r.witness_in_age;
    }
    emit(out, j);
  } else {
    out << (r.agree ? "Age(A) and Forb(F) agree" : "Age(A) and Forb(F) differ") << " up to size " << cfg.s << '\n';
    if (r.witness) {
      out << "witness (" << (r.witness_in_age ? "in Age(A)" : "not in Age(A)") << ")  "
          << struct_to_json(*r.witness).dump() << '\n';
    }
  }
  return r.agree ? kExitOk : kExitCounterexample;
}

inline int cmd_merge(const RunConfig& cfg, std::ostream& out) {
  const RelStruct a = load_struct(cfg.struct_path);
  if (cfg.b_path.empty() || cfg.c_path.empty()) fail(ErrorKind::kInvalidArgument, "--b and --c are required");
  const RelStruct b = load_struct(cfg.b_path);
  const RelStruct c = load_struct(cfg.c_path);
  std::vector<PointLabel> marked;
  for (const std::string& s : cfg.marked) marked.push_back(label(s));
  const MergeReport r = merge_expansions_check(b, a, c, marked, cfg.s);
  if (cfg.output == Output::kJson) {
    emit(out, OrderedJson{{"b_a", r.b_a}, {"applicable", r.applicable}, {"lhs", r.lhs}, {"rhs", r.rhs},
                          {"agree", r.agree()}});
  } else {
    Table t;
    t.row({"b(A)", std::to_string(r.b_a)});
    t.row({"applicable", yes_no(r.applicable)});
    t.row({"C embeds in B", yes_no(r.lhs)});
    t.row({"compatible expansions", yes_no(r.rhs)});
    t.row({"agree", yes_no(r.agree())});
    t.print(out);
  }
  return r.agree() ? kExitOk : kExitCounterexample;
}

inline void print_monotonicity(const MonotonicityReport& m, std::ostream& out) {
  Table t;
  t.row({"id", "order", "width(H)", "width(wr H)", "skipped"});
  for (const WidthRow& r : m.rows) {
    t.row({std::to_string(r.id), std::to_string(r.order), std::to_string(r.finite_width),
           std::to_string(r.wreath_width), std::to_string(r.skipped)});
  }
  t.print(out);
  out << "monotone along edges  " << yes_no(m.monotone()) << '\n';
  for (const auto& [key, count] : m.histogram) {
    out << "rank " << key.first << ", width " << key.second << ": " << count << " groups\n";
  }
}

inline OrderedJson monotonicity_json(const MonotonicityReport& m) {
  OrderedJson j;
  j["t"] = m.t;
  j["monotone"] = m.monotone();
  j["rows"] = OrderedJson::array();
  for (const WidthRow& r : m.rows) {
    j["rows"].push_back({{"id", r.id}, {"order", r.order}, {"finite_width", r.finite_width},
                         {"wreath_width", r.wreath_width}, {"skipped", r.skipped}});
  }
  j["violations"] = OrderedJson::array();
  for (const auto& [lo, hi] : m.violations) j["violations"].push_back({lo, hi});
  j["histogram"] = OrderedJson::array();
  for (const auto& [key, count] : m.histogram) {
    j["histogram"].push_back({{"rank", key.first}, {"width", key.second}, {"groups", count}});
  }
  return j;
}

inline int cmd_lattice(const RunConfig& cfg, std::ostream& out) {
  const LatticeReport lat = intermediate_groups(load_any_group(cfg), {cfg.jobs});
  std::optional<MonotonicityReport> mono;
  if (cfg.widths) mono = width_monotonicity_report(lat, std::max<std::size_t>(2, cfg.t_given ? cfg.t : 2));
  if (cfg.output == Output::kDot) {
    out << lattice_to_dot(lat);
    return kExitOk;
  }
  if (cfg.output == Output::kJson) {
    OrderedJson j = lattice_to_json(lat);
    if (mono) j["widths"] = monotonicity_json(*mono);
    emit(out, j);
    return mono && !mono->monotone() ? kExitCounterexample : kExitOk;
  }
  out << lat.count() << " intermediate groups, " << lat.edges.size() << " cover edges\n";
  Table t;
  t.row({"id", "order", "covers"});
  for (std::size_t i = 0; i < lat.groups.size(); ++i) {
    std::string covers;
    for (const auto& [lo, hi] : lat.edges) {
      if (hi == i) covers += (covers.empty() ? "" : ",") + std::to_string(lo);
    }
    t.row({std::to_string(i), std::to_string(group_order(lat.groups[i])), covers.empty() ? "-" : covers});
  }
  t.print(out);
  if (mono) print_monotonicity(*mono, out);
  return mono && !mono->monotone() ? kExitCounterexample : kExitOk;
}

inline int cmd_reducts(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.expr_path.empty()) {
    const std::vector<ReductCountRow> rows = reduct_counts(load_expr(cfg.expr_path, cfg.elem_cap), cfg.t, {cfg.jobs});
    if (cfg.output == Output::kJson) {
      OrderedJson j = OrderedJson::array();
      for (const ReductCountRow& r : rows) {
        OrderedJson row{{"t", r.t}};
        if (r.count) {
          row["count"] = *r.count;
        } else {
          row["error"] = r.error;
        }
        j.push_back(row);
      }
      emit(out, OrderedJson{{"truncations", j}});
      return kExitOk;
    }
    Table t;
    t.row({"t", "intermediate groups"});
    for (const ReductCountRow& r : rows) t.row({std::to_string(r.t), r.count ? std::to_string(*r.count) : "over cap"});
    t.print(out);
    return kExitOk;
  }
  const LatticeReport lat = intermediate_groups(load_any_group(cfg), {cfg.jobs});
  std::optional<MonotonicityReport> mono;
  if (cfg.widths) mono = width_monotonicity_report(lat);
  if (cfg.output == Output::kJson) {
    OrderedJson j{{"reducts", lat.count()}};
    if (mono) j["widths"] = monotonicity_json(*mono);
    emit(out, j);
  } else {
    out << "reducts up to interdefinability  " << lat.count() << '\n';
    if (mono) print_monotonicity(*mono, out);
  }
  return mono && !mono->monotone() ? kExitCounterexample : kExitOk;
}

// ---------------------------------------------------------------------------
// Verify

int run(const RunConfig& cfg, std::ostream& out);

// One entry per module invariant, each naming the check that covers it.
inline const std::vector<std::string>& invariant_checks() {
  static const std::vector<std::string> names{
      "permcore.closure", "permcore.wreath_order", "permcore.restrict_inner", "permcore.quotient_hom",
      "permcore.orbit_monotonicity", "expr.rank_wreath", "expr.rank_product", "expr.validate",
      "construct.oracle_equivalence", "construct.index_identity", "construct.recover_base",
      "construct.decompose_reassemble", "construct.rho_product", "analysis.chain",
      "analysis.profile_monotonicity", "analysis.width_monotonicity", "analysis.width_product",
      "analysis.hstar_closure", "analysis.congruences", "structures.aut_union", "structures.aut_copies",
      "structures.aut_en_family", "structures.delta_m_homog", "structures.finite_index_homog",
      "structures.type_count", "reducts.closed", "reducts.order_insensitive", "reducts.side_by_side",
      "cli.deterministic", "cli.check_registry"};
  return names;
}

inline std::vector<Check> all_checks();

inline CheckOutcome cli_deterministic(const CheckContext&) {
  std::vector<RunConfig> cfgs;
  const std::string dir = std::filesystem::temp_directory_path().string();
  const std::string group = dir + "/hcell_verify_group.json";
  {
    std::ofstream f(group);
    f << group_to_json(fixtures::four_point_bases()[0]).dump();
  }
  const std::string expr = dir + "/hcell_verify_expr.sexp";
  {
    std::ofstream f(expr);
    f << print_expr(fixtures::e2());
  }
  for (Output o : {Output::kTable, Output::kJson, Output::kDot}) {
    RunConfig c;
    c.command = "lattice";
    c.group_path = group;
    c.output = o;
    cfgs.push_back(c);
  }
  RunConfig p;
  p.command = "profile";
  p.expr_path = expr;
  p.n_max = 3;
  cfgs.push_back(p);
  RunConfig w = p;
  w.command = "width";
  cfgs.push_back(w);
  for (RunConfig c : cfgs) {
    std::ostringstream a, b;
    c.jobs = 1;
    run(c, a);
    c.jobs = 3;
    run(c, b);
    std::ostringstream again;
    c.jobs = 1;
    run(c, again);
    if (a.str() != b.str() || a.str() != again.str()) return verify::failed(c.command + " output varies");
  }
  std::filesystem::remove(group);
  std::filesystem::remove(expr);
  return verify::pass(std::to_string(cfgs.size()) + " reports byte-identical across runs and job counts");
}

inline CheckOutcome cli_check_registry(const CheckContext&) {
  std::vector<std::string> names;
  for (const Check& c : all_checks()) names.push_back(c.name);
  for (const std::string& inv : invariant_checks()) {
    if (std::count(names.begin(), names.end(), inv) != 1) return verify::failed("no unique check named " + inv);
  }
  std::sort(names.begin(), names.end());
  if (std::adjacent_find(names.begin(), names.end()) != names.end()) return verify::failed("duplicate check names");
  return verify::pass(std::to_string(invariant_checks().size()) + " invariants, " + std::to_string(names.size()) +
                      " checks");
}

inline std::vector<Check> all_checks() {
  std::vector<Check> checks = module_checks();
  checks.push_back({"cli.check_registry", "every invariant has one named check", cli_check_registry});
  checks.push_back({"cli.deterministic", "reports are byte-identical", cli_deterministic});
  return checks;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  CheckContext ctx;
  ctx.jobs = cfg.jobs;
  if (!cfg.corrupt.empty()) {
    if (cfg.corrupt != "rho-table") fail(ErrorKind::kInvalidArgument, "unknown corruption '" + cfg.corrupt + "'");
    ctx.corrupt_rho_table = true;
  }
  for (const std::string& path : cfg.fixture_paths) {
    ctx.extra_exprs.push_back({std::filesystem::path(path).filename().string(), load_expr(path, cfg.elem_cap)});
  }
  const SuiteReport rep = run_checks(all_checks(), cfg.filter, ctx);
  if (rep.results.empty()) fail(ErrorKind::kInvalidArgument, "filter '" + cfg.filter + "' matches no check");
  if (cfg.output == Output::kJson) {
    OrderedJson j;
    j["checks"] = OrderedJson::array();
    for (const CheckResult& r : rep.results) {
      OrderedJson row{{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}};
      if (cfg.timing) row["millis"] = std::round(r.millis * 10) / 10;
      j["checks"].push_back(row);
    }
    j["passed"] = rep.results.size() - rep.failures();
    j["failed"] = rep.failures();
    emit(out, j);
  } else {
    Table t;
    t.left(1);
    t.left(cfg.timing ? 3 : 2);
    for (const CheckResult& r : rep.results) {
      std::vector<std::string> row{r.pass ? "PASS" : "FAIL", r.name};
      if (cfg.timing) {
        std::ostringstream ms;
        ms << std::fixed << std::setprecision(1) << r.millis << " ms";
        row.push_back(ms.str());
      }
      row.push_back(r.detail);
      t.row(row);
    }
    t.print(out);
    out << rep.results.size() - rep.failures() << " passed, " << rep.failures() << " failed\n";
  }
  return rep.ok() ? kExitOk : kExitCounterexample;
}

// ---------------------------------------------------------------------------
// Dispatch

inline int run(const RunConfig& cfg, std::ostream& out) {
  try {
    if (cfg.t == 0) fail(ErrorKind::kInvalidArgument, "t must be at least 1");
    if (cfg.n_max == 0) fail(ErrorKind::kInvalidArgument, "n must be at least 1");
    if (cfg.elem_cap == 0) fail(ErrorKind::kInvalidArgument, "elem-cap must be positive");
    if (cfg.output == Output::kDot && cfg.command != "lattice") {
      fail(ErrorKind::kInvalidArgument, "dot output is only available for lattice");
    }
    const std::string& c = cfg.command;
    if (c == "profile") return cmd_profile(cfg, out);
    if (c == "rank") return cmd_rank(cfg, out);
    if (c == "width") return cmd_width(cfg, out);
    if (c == "congruences") return cmd_congruences(cfg, out);
    if (c == "omega-partition") return cmd_omega_partition(cfg, out);
    if (c == "truncate") return cmd_truncate(cfg, out);
    if (c == "membership") return cmd_membership(cfg, out);
    if (c == "recover") return cmd_recover(cfg, out);
    if (c == "homog") return cmd_homog(cfg, out);
    if (c == "delta-m") return cmd_delta_m(cfg, out);
    if (c == "bounds") return cmd_bounds(cfg, out);
    if (c == "forb") return cmd_forb(cfg, out);
    if (c == "merge") return cmd_merge(cfg, out);
    if (c == "lattice") return cmd_lattice(cfg, out);
    if (c == "reducts") return cmd_reducts(cfg, out);
    if (c == "verify") return cmd_verify(cfg, out);
    fail(ErrorKind::kInvalidArgument, "unknown command '" + c + "'");
  } catch (const ParseError& e) {
    OrderedJson j = error_json("ParseError", e.what());
    j["error"]["line"] = e.line();
    j["error"]["column"] = e.column();
    j["error"]["expected"] = e.expected();
    emit(out, j);
  } catch (const Error& e) {
    emit(out, error_json(std::string(to_string(e.kind())), e.what()));
  } catch (const std::exception& e) {
    emit(out, error_json("InternalError", e.what()));
  }
  return kExitError;
}

// Builds a RunConfig from argv and runs it.
inline int main_entry(int argc, const char* const* argv, std::ostream& out) {
  RunConfig cfg;
  CLI::App app{"Permutation group toolkit: truncations, orbit growth, width, structures and reducts"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");
  std::string output = "table";

  auto output_opt = [&](CLI::App* sub, bool dot) {
    std::vector<std::string> allowed{"table", "json"};
    if (dot) allowed.push_back("dot");
    sub->add_option("-o,--output", output, "Report format")->check(CLI::IsMember(allowed));
    sub->add_flag_callback("--json", [&] { output = "json"; }, "Same as --output json");
  };
  auto expr_opt = [&](CLI::App* sub, bool required) {
    auto* o = sub->add_option("--expr", cfg.expr_path, "Expression file (s-expression)");
    if (required) o->required();
  };
  auto t_opt = [&](CLI::App* sub) {
    sub->add_option("-t,--t", cfg.t, "Truncation size")->check(CLI::PositiveNumber)->each([&](const std::string&) {
      cfg.t_given = true;
    });
  };
  auto cap_opt = [&](CLI::App* sub) {
    sub->add_option("--elem-cap", cfg.elem_cap, "Largest group enumerated")->check(CLI::PositiveNumber);
  };
  auto jobs_opt = [&](CLI::App* sub) {
    sub->add_option("-j,--jobs", cfg.jobs, "Worker threads")->check(CLI::PositiveNumber);
  };
  auto group_sources = [&](CLI::App* sub) {
    sub->add_option("--group", cfg.group_path, "Group JSON file");
    sub->add_option("--struct", cfg.struct_path, "Structure JSON file (uses its automorphism group)");
    expr_opt(sub, false);
  };

  auto* profile = app.add_subcommand("profile", "Orbit counts o, oi, os for n = 1..N");
  expr_opt(profile, false);
  profile->add_option("--group", cfg.group_path, "Group JSON file (treated as finite)");
  profile->add_option("-n,--n", cfg.n_max, "Largest tuple length")->check(CLI::PositiveNumber);
  t_opt(profile);
  cap_opt(profile);
  output_opt(profile, false);

  auto* rank = app.add_subcommand("rank", "Upper bound on the rank of an expression");
  expr_opt(rank, true);
  output_opt(rank, false);

  auto* width_cmd = app.add_subcommand("width", "Stable-acl width surrogate at truncation t");
  expr_opt(width_cmd, false);
  width_cmd->add_option("--group", cfg.group_path, "Group JSON file (treated as finite)");
  t_opt(width_cmd);
  cap_opt(width_cmd);
  output_opt(width_cmd, false);

  auto* cong = app.add_subcommand("congruences", "All congruences of a group");
  group_sources(cong);
  t_opt(cong);
  cap_opt(cong);
  output_opt(cong, false);

  auto* omega = app.add_subcommand("omega-partition", "Check and search omega-partition candidates");
  group_sources(omega);
  t_opt(omega);
  cap_opt(omega);
  output_opt(omega, false);

  auto* trunc = app.add_subcommand("truncate", "Finite truncation and its block metadata");
  expr_opt(trunc, true);
  t_opt(trunc);
  cap_opt(trunc);
  output_opt(trunc, false);

  auto* member = app.add_subcommand("membership", "Conditions (a)-(d) for a permutation of a cons truncation");
  expr_opt(member, true);
  t_opt(member);
  member->add_option("--perm", cfg.perm, "Image list over the sorted truncated domain, as JSON");
  cap_opt(member);
  output_opt(member, false);

  auto* recover = app.add_subcommand("recover", "Recover H and N from a cons truncation");
  expr_opt(recover, true);
  t_opt(recover);
  cap_opt(recover);
  output_opt(recover, false);

  auto* homog = app.add_subcommand("homog", "Homogenizability by m-projections up to tuple length n");
  homog->add_option("--struct", cfg.struct_path, "Structure JSON file")->required();
  homog->add_option("-m,--m", cfg.m, "Projection arity")->check(CLI::PositiveNumber);
  homog->add_option("-n,--n", cfg.n_max, "Largest tuple length")->check(CLI::PositiveNumber);
  cap_opt(homog);
  output_opt(homog, false);

  auto* delta = app.add_subcommand("delta-m", "Expand a structure by its m-type relations");
  delta->add_option("--struct", cfg.struct_path, "Structure JSON file")->required();
  delta->add_option("-m,--m", cfg.m, "Type arity")->check(CLI::PositiveNumber);
  cap_opt(delta);
  output_opt(delta, false);

  auto* bounds = app.add_subcommand("bounds", "Minimal obstructions up to size s");
  bounds->add_option("--struct", cfg.struct_path, "Structure JSON file")->required();
  bounds->add_option("-s,--s", cfg.s, "Scan horizon");
  output_opt(bounds, false);

  auto* forb = app.add_subcommand("forb", "Compare Age(A) with Forb(F) up to size s");
  forb->add_option("--struct", cfg.struct_path, "Structure JSON file")->required();
  forb->add_option("--forb", cfg.forb_path, "JSON array of forbidden structures")->required();
  forb->add_option("-s,--s", cfg.s, "Scan horizon");
  output_opt(forb, false);

  auto* merge = app.add_subcommand("merge", "Merge check for compatible expansions");
  merge->add_option("--struct", cfg.struct_path, "Structure A JSON file")->required();
  merge->add_option("--b", cfg.b_path, "Reduct B JSON file")->required();
  merge->add_option("--c", cfg.c_path, "Candidate C JSON file")->required();
  merge->add_option("--marked", cfg.marked, "Marked points of C")->delimiter(',');
  merge->add_option("-s,--s", cfg.s, "Scan horizon");
  output_opt(merge, false);

  auto* lattice = app.add_subcommand("lattice", "Intermediate groups up to the full symmetric group");
  group_sources(lattice);
  t_opt(lattice);
  cap_opt(lattice);
  jobs_opt(lattice);
  lattice->add_flag("--widths", cfg.widths, "Add the width monotonicity table");
  output_opt(lattice, true);

  auto* reducts = app.add_subcommand("reducts", "Count reducts via intermediate groups");
  group_sources(reducts);
  t_opt(reducts);
  cap_opt(reducts);
  jobs_opt(reducts);
  reducts->add_flag("--widths", cfg.widths, "Add the width monotonicity table");
  output_opt(reducts, false);

  auto* verify_cmd = app.add_subcommand("verify", "Run the named invariant checks");
  verify_cmd->add_option("--filter", cfg.filter, "Only checks whose name contains this text");
  verify_cmd->add_option("--fixture", cfg.fixture_paths, "Extra expression fixture (repeatable)");
  verify_cmd->add_option("--corrupt", cfg.corrupt, "Negative control")->check(CLI::IsMember({"rho-table"}));
  jobs_opt(verify_cmd);
  verify_cmd->add_flag("--timing", cfg.timing, "Show per-check timing");
  cap_opt(verify_cmd);
  output_opt(verify_cmd, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    emit(out, error_json("UsageError", e.what()));
    return kExitError;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  cfg.output = output == "json" ? Output::kJson : output == "dot" ? Output::kDot : Output::kTable;
  return run(cfg, out);
}

}  // namespace hcell::cli
