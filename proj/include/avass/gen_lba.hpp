// gen_lba.hpp -- linear bounded automata and their permutation-system encoding
#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "avass/vass.hpp"

namespace avass {

/// Deterministic LBA; a missing delta entry means the machine halts rejecting.
struct Lba {
  std::vector<std::string> states;
  std::string input_alphabet;
  std::string tape_alphabet;  // superset of the input alphabet
  int initial = -1;
  int accept = -1;
  int reject = -1;
  // (state, read) -> (state, write, move right?)
  std::map<std::pair<int, char>, std::tuple<int, char, bool>> delta;

  int add_state(const std::string& name) {
    states.push_back(name);
    return static_cast<int>(states.size()) - 1;
  }
  void validate() const;
};

enum class LbaOutcome { accept, reject };

/// Direct simulation with a visited set; loops, stuck configurations, the
/// reject state and the head leaving the input cells all reject.
LbaOutcome simulate_lba(const Lba& lba, const std::string& word);

struct GeneratedInstance {
  AffineVass vass;
  ReachQuery query;
};

/// Counters x_{i,a} plus a budget counter y; simulation transitions swap the
/// (i, read) and (i, write) counters and pay one unit into both the written
/// cell and y, and the final gadget drains one guessed letter per cell.
/// The machine accepts the word iff the query holds; every matrix is a
/// permutation matrix and all runs keep y equal to the sum of the x counters.
GeneratedInstance gen_lba(const Lba& lba, const std::string& word);

/// Counter index of x_{i,a} in the generated system (i is 1-based).
int lba_counter(const Lba& lba, int n, int i, char a);

}  // namespace avass
