#pragma once

#include <cstdint>
#include <vector>

#include "hcell/analysis.hpp"
#include "hcell/construct.hpp"
#include "hcell/expr.hpp"

namespace hcell {

// Invariant vector of an expression: (degree, order) of the truncations for
// t = 1..n_max, then the orbit counts (o, oi, os) of the t = n_max truncation
// for n = 1..n_max. Equal vectors only mean "indistinguishable at n_max".
inline std::vector<std::uint64_t> profile_signature(const GroupExpr& e, std::size_t n_max) {
  if (n_max == 0) fail(ErrorKind::kInvalidArgument, "n_max must be at least 1");
  std::vector<std::uint64_t> out;
  for (std::size_t t = 1; t <= n_max; ++t) {
    const Truncation tr = truncate(e, t);
    out.push_back(tr.group.degree());
    out.push_back(group_order(tr.group));
  }
  const Truncation top = truncate(e, n_max);
  for (const OrbitCounts& c : orbit_profile(top.group, n_max)) {
    out.push_back(c.o);
    out.push_back(c.oi);
    out.push_back(c.os);
  }
  return out;
}

}  // namespace hcell
