// Acceptance suite: one PASS/FAIL line per criterion. Exit status is 0 only
// when every criterion passes.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hcell/cli.hpp"
#include "hcell/fixtures.hpp"

namespace {

using namespace hcell;

// Wall-clock budgets in seconds.
constexpr double kOracleBudget = 60.0;
constexpr double kProfileBudget = 120.0;
constexpr double kSuiteBudget = 300.0;

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

class Suite {
 public:
  explicit Suite(const SuiteReport& rep) {
    for (const CheckResult& r : rep.results) by_name_[r.name] = r;
  }

  // Folds named check results into v; returns their summed runtime in seconds.
  double fold(Verdict& v, const std::vector<std::string>& names) const {
    double secs = 0;
    for (const std::string& n : names) {
      const auto it = by_name_.find(n);
      if (it == by_name_.end()) {
        v.require(false, n + " missing");
        continue;
      }
      secs += it->second.millis / 1000.0;
      v.require(it->second.pass, n + ": " + it->second.detail);
    }
    return secs;
  }

 private:
  std::map<std::string, CheckResult> by_name_;
};

int run_cli(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::vector<const char*> argv{"hcell"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream os;
  const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), os);
  if (out) *out = os.str();
  return code;
}

std::string fx(const std::string& name) { return std::string(HCELL_FIXTURE_DIR) + "/" + name; }
std::string test_fx(const std::string& name) { return std::string(HCELL_TEST_FIXTURE_DIR) + "/" + name; }

std::string secs(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1fs", s);
  return buf;
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  const SuiteReport all = run_checks(cli::all_checks(), "", CheckContext{});
  const double suite_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const Suite suite(all);

  std::vector<std::pair<std::string, Verdict>> rows;
  auto record = [&](const std::string& id, Verdict v, const std::string& note) {
    if (v.pass) v.detail = note;
    rows.push_back({id, v});
  };

  {
    Verdict v;
    std::size_t cons = 0;
    for (const auto& f : fixtures::cons_fixtures()) cons += f.expr.as<ConsNode>() != nullptr;
    v.require(cons >= 5, "fewer than 5 cons fixtures");
    const double t = suite.fold(v, {"construct.oracle_equivalence"});
    v.require(t <= kOracleBudget, "runtime " + secs(t));
    record("AC1", v, std::to_string(cons) + " cons fixtures, t = 1..3, " + secs(t));
  }
  {
    Verdict v;
    suite.fold(v, {"construct.index_identity"});
    record("AC2", v, "index identity exact on every fixture truncation");
  }
  {
    Verdict v;
    suite.fold(v, {"construct.rho_product"});
    CheckContext bad;
    bad.corrupt_rho_table = true;
    const SuiteReport neg = run_checks(cli::all_checks(), "construct.rho_product", bad);
    v.require(!neg.ok(), "corrupted rho table accepted");
    record("AC3", v, "identities exact; corrupted table rejected");
  }
  {
    Verdict v;
    suite.fold(v, {"construct.recover_base"});
    record("AC4", v, "H recovered as an element set on every fixture");
  }
  {
    Verdict v;
    const double t = suite.fold(v, {"analysis.stable_profile", "analysis.chain"});
    v.require(t <= kProfileBudget, "runtime " + secs(t));
    record("AC5", v, "pure set o = 1,2,5,15,52, os = 1; E2 os = 1,2,3,5,7; chain holds; " + secs(t));
  }
  {
    Verdict v;
    suite.fold(v, {"structures.aut_union", "structures.aut_copies", "structures.aut_en_family"});
    record("AC6", v, "union, copies and E_n family mirrors exact");
  }
  {
    Verdict v;
    suite.fold(v, {"expr.rank_en"});
    for (std::size_t n = 0; n <= 4; ++n) {
      v.require(rank_upper(e_n_expr(n)).rank_upper == n, "rank of E_" + std::to_string(n));
    }
    record("AC7", v, "rank_upper(E_n) = n for n = 0..4");
  }
  {
    Verdict v;
    suite.fold(v, {"analysis.omega_partition"});
    record("AC8", v, "canonical candidates pass; corrupted candidates fail conditions 4 and 5");
  }
  {
    Verdict v;
    suite.fold(v, {"analysis.width_pure_set", "analysis.width_monotonicity", "analysis.width_product",
                   "analysis.estar_lift"});
    v.require(width(e_n_expr(1), 3).width == 2 && width(e_n_expr(1), 4).width == 2, "pure set width");
    record("AC9", v, "pure set width 2 at t = 3, 4; product bound, monotonicity and lift hold");
  }
  {
    Verdict v;
    suite.fold(v, {"structures.homog_examples", "structures.delta_m_aut"});
    record("AC10", v, "equivalence passes, C8 counterexample found, delta_m keeps Aut");
  }
  {
    Verdict v;
    suite.fold(v, {"structures.boundedness", "structures.forb_roundtrip", "structures.merge"});
    record("AC11", v, "one obstruction of size 6, b = 6; forb round trip; merge agrees");
  }
  {
    Verdict v;
    suite.fold(v, {"reducts.examples", "reducts.order_insensitive", "cli.deterministic"});
    v.require(intermediate_groups(fixtures::trivial({"a", "b", "c"})).count() == 6, "trivial(3) lattice");
    v.require(intermediate_groups(fixtures::generated({"a", "b", "c"}, {{{"a", "b", "c"}}})).count() == 2,
              "3-cycle lattice");
    record("AC12", v, "6 and 2 intermediate groups; identical across runs and job counts");
  }
  {
    Verdict v;
    v.require(all.ok(), std::to_string(all.failures()) + " of " + std::to_string(all.results.size()) +
                            " checks fail");
    v.require(suite_secs <= kSuiteBudget, "suite runtime " + secs(suite_secs));
    v.require(run_cli({"verify", "--filter", "rho", "--corrupt", "rho-table"}) != 0, "corrupt rho-table exits 0");
    v.require(run_cli({"verify", "--filter", "expr.validate", "--fixture", test_fx("corrupt_cons.sexp")}) != 0,
              "corrupt cons fixture exits 0");
    v.require(run_cli({"rank", "--expr", test_fx("truncated.sexp")}) != 0, "parse error exits 0");
    v.require(run_cli({"homog", "--struct", fx("a4_ternary.json"), "--m", "2", "--n", "3"}) != 0,
              "non-homogenizable structure exits 0");
    record("AC13", v, std::to_string(all.results.size()) + " checks pass in " + secs(suite_secs) +
                          "; 4 negative controls exit nonzero");
  }

  bool ok = true;
  for (const auto& [id, v] : rows) {
    std::cout << (v.pass ? "PASS " : "FAIL ") << id << "  " << v.detail << '\n';
    ok = ok && v.pass;
  }
  return ok ? 0 : 1;
}
