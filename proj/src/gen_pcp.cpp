#include "avass/gen_pcp.hpp"

#include <functional>

#include "avass/errors.hpp"

namespace avass {

std::optional<std::vector<int>> solve_pcp_bounded(const PcpInstance& inst,
                                                  int max_tiles) {
  if (max_tiles < 1) throw precondition_error("solve_pcp_bounded: max_tiles < 1");
  if (inst.tiles.empty()) throw precondition_error("solve_pcp_bounded: no tiles");

  std::vector<int> seq;
  std::string top, bottom;
  std::optional<std::vector<int>> found;

  std::function<bool(int)> dfs = [&](int budget) {
    if (!seq.empty() && top == bottom) {
      found = seq;
      return true;
    }
    if (budget == 0) return false;
    for (int k = 0; k < static_cast<int>(inst.tiles.size()); ++k) {
      const auto& [a, b] = inst.tiles[static_cast<std::size_t>(k)];
      std::size_t keep_top = top.size(), keep_bottom = bottom.size();
      top += a;
      bottom += b;
      bool prefix = top.compare(0, std::min(top.size(), bottom.size()), bottom, 0,
                                std::min(top.size(), bottom.size())) == 0;
      if (prefix) {
        seq.push_back(k + 1);
        if (dfs(budget - 1)) return true;
        seq.pop_back();
      }
      top.resize(keep_top);
      bottom.resize(keep_bottom);
    }
    return false;
  };

  // iterative deepening: shortest solution first, lexicographic within a length
  for (int depth = 1; depth <= max_tiles; ++depth)
    if (dfs(depth)) return found;
  return std::nullopt;
}

GeneratedInstance gen_pcp(const PcpInstance& inst) {
  if (inst.tiles.empty()) throw precondition_error("gen_pcp: no tiles");
  for (const auto& [a, b] : inst.tiles) {
    if (a.empty() || b.empty()) throw precondition_error("gen_pcp: empty tile string");
    for (char c : a + b)
      if (c != '0' && c != '1')
        throw precondition_error("gen_pcp: tiles must be over {0,1}");
  }

  // doubling gadgets per Fig 7: copy the tracked counter into the scratch
  // cell, then transfer it back on top of itself plus the appended bit
  const IntMatrix copy1 =
      IntMatrix::from_rows({{1, 0, 0}, {0, 1, 0}, {1, 0, 0}});
  const IntMatrix transfer1 =
      IntMatrix::from_rows({{1, 0, 1}, {0, 1, 0}, {0, 0, 0}});
  const IntMatrix copy2 =
      IntMatrix::from_rows({{1, 0, 0}, {0, 1, 0}, {0, 1, 0}});
  const IntMatrix transfer2 =
      IntMatrix::from_rows({{1, 0, 0}, {0, 1, 1}, {0, 0, 0}});

  AffineVass v(3);
  StateId s0 = v.add_state("s0");
  StateId sel = v.add_state("sel");
  StateId sf = v.add_state("sf");

  for (std::size_t k = 0; k < inst.tiles.size(); ++k) {
    const auto& [a, b] = inst.tiles[k];
    StateId entry = v.add_state("tile" + std::to_string(k + 1));
    // the artificial leading 1 on both words, paid on entering the first tile
    v.add_transition(s0, entry, IntVector{1, 1, 0});
    v.add_transition(sel, entry, IntVector::zero(3));

    StateId cur = entry;
    int piece = 0;
    auto fresh = [&]() {
      return v.add_state("tile" + std::to_string(k + 1) + "_" +
                         std::to_string(piece++));
    };
    for (char bit : a) {
      StateId mid = fresh();
      v.add_transition(cur, mid, copy1, IntVector::zero(3));
      StateId next = fresh();
      v.add_transition(mid, next, transfer1, IntVector{bit == '1' ? 1 : 0, 0, 0});
      cur = next;
    }
    for (std::size_t bi = 0; bi < b.size(); ++bi) {
      char bit = b[bi];
      StateId mid = fresh();
      v.add_transition(cur, mid, copy2, IntVector::zero(3));
      StateId next = bi + 1 == b.size() ? sel : fresh();
      v.add_transition(mid, next, transfer2, IntVector{0, bit == '1' ? 1 : 0, 0});
      cur = next;
    }
  }

  v.add_transition(sel, sf, IntVector::zero(3));
  v.add_transition(sf, sf, IntVector{-1, -1, 0});

  GeneratedInstance out;
  out.query = ReachQuery{s0, IntVector::zero(3), sf, IntVector::zero(3)};
  out.vass = std::move(v);
  return out;
}

}  // namespace avass
