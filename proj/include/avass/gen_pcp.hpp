// gen_pcp.hpp -- Post correspondence instances and their 3-counter encoding
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "avass/gen_lba.hpp"

namespace avass {

struct PcpInstance {
  std::vector<std::pair<std::string, std::string>> tiles;  // bit strings over 0/1
};

/// Exhaustive search over tile sequences of length <= max_tiles with
/// prefix pruning; returns the shortest solution (1-based tile indices),
/// lexicographically smallest among those.
std::optional<std::vector<int>> solve_pcp_bounded(const PcpInstance& inst,
                                                  int max_tiles);

/// Three counters holding the binary values of the two assembled words (with
/// an artificial leading 1) plus a scratch cell; appending a bit runs a
/// copy-then-transfer doubling gadget; the final state drains both counters
/// in lockstep, so the target (0,0,0) is hit iff the words agree after at
/// least one tile.
GeneratedInstance gen_pcp(const PcpInstance& inst);

}  // namespace avass
