#pragma once

// Exhaustive enumeration of Aut(Ω; K, ∇, Δ) on a truncated domain, used as a
// reference set when checking truncations against conditions (a)-(d).

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <vector>

#include "hcell/construct.hpp"
#include "hcell/perm.hpp"

namespace hcell {

namespace detail {

inline std::vector<std::vector<Point>> all_arrangements(std::size_t n) {
  std::vector<Point> p(n);
  std::iota(p.begin(), p.end(), Point{0});
  std::vector<std::vector<Point>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace detail

// Calls `visit` once per permutation that fixes K setwise and preserves ∇ and
// Δ. Choices: φ on blocks, ψ_i on copies, and one bijection per Δ-class.
inline void for_each_block_respecting(const TruncationMeta& m,
                                      const std::function<void(const Perm&)>& visit) {
  std::vector<std::vector<Point>> block(m.k + 1);
  for (std::size_t i = 0; i <= m.k; ++i) block[i] = m.block_base(i);

  std::vector<std::vector<Point>> phis;
  {
    std::vector<Point> p(m.k);
    std::iota(p.begin(), p.end(), Point{1});
    do {
      bool ok = true;
      for (std::size_t i = 0; i < m.k; ++i) ok &= block[i + 1].size() == block[p[i]].size();
      if (ok) phis.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
  }
  const auto copy_perms = detail::all_arrangements(m.t);
  const auto k_perms = detail::all_arrangements(block[0].size());

  // Slots: K bijection, then for each block its ψ_i, then one bijection per
  // (block, copy).
  std::vector<std::size_t> radix;
  std::vector<const std::vector<std::vector<Point>>*> choice_sets;
  std::vector<std::vector<std::vector<Point>>> class_perms(m.k + 1);
  for (std::size_t i = 1; i <= m.k; ++i) class_perms[i] = detail::all_arrangements(block[i].size());
  choice_sets.push_back(&k_perms);
  for (std::size_t i = 1; i <= m.k; ++i) choice_sets.push_back(&copy_perms);
  for (std::size_t i = 1; i <= m.k; ++i) {
    for (std::size_t n = 0; n < m.t; ++n) choice_sets.push_back(&class_perms[i]);
  }
  for (const auto* s : choice_sets) radix.push_back(s->size());

  std::vector<Point> image(m.degree());
  for (const std::vector<Point>& phi : phis) {
    std::vector<std::size_t> digit(radix.size(), 0);
    while (true) {
      const auto& kp = (*choice_sets[0])[digit[0]];
      for (std::size_t j = 0; j < block[0].size(); ++j) {
        image[m.point_at(block[0][j], 0)] = m.point_at(block[0][kp[j]], 0);
      }
      std::size_t slot = 1 + m.k;
      for (std::size_t i = 1; i <= m.k; ++i) {
        const auto& psi = (*choice_sets[i])[digit[i]];
        const std::vector<Point>& target = block[phi[i - 1]];
        for (std::size_t n = 0; n < m.t; ++n, ++slot) {
          const auto& bij = (*choice_sets[slot])[digit[slot]];
          for (std::size_t j = 0; j < block[i].size(); ++j) {
            image[m.point_at(block[i][j], n)] = m.point_at(target[bij[j]], psi[n]);
          }
        }
      }
      visit(Perm::unchecked(image));
      std::size_t pos = 0;
      while (pos < radix.size() && ++digit[pos] == radix[pos]) digit[pos++] = 0;
      if (pos == radix.size()) break;
    }
  }
}

}  // namespace hcell
