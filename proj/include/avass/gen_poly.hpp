// gen_poly.hpp -- Diophantine polynomials, counter programs, and the
// monogenic lowering
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "avass/gen_lba.hpp"

namespace avass {

struct Polynomial {
  struct Mono {
    Int coeff;
    std::vector<int> exp;  // one exponent per variable
  };
  int nvars = 0;
  std::vector<Mono> monomials;
};

/// Integer coefficients, variables x1..xk, operators + - * ^ with the usual
/// precedence and parentheses.
Polynomial parse_polynomial(const std::string& text);

/// Macro-level IR. Loops repeat their body; driven loops drain their driver
/// counter to zero in steps of driver_step, init loops guess a variable
/// value. add_affine is the square-macro step z += 2y + 1; every add_affine
/// instance registers its (z, y) pair for the shared lowering matrix.
struct CounterProgram {
  struct Instr {
    enum class Kind { add, add_affine, zero_test, loop_begin, loop_end };
    Kind kind;
    int counter = -1;   // add/zero_test target, add_affine z
    Int amount;         // add
    int y_counter = -1; // add_affine
    int driver = -1;    // loop_begin; -1 = init loop
    Int driver_step;    // loop_begin (1 or 2)
    int var_index = -1; // loop_begin of an init loop
    int match = -1;     // matching loop_begin/loop_end position
    std::string tag;    // macro provenance: init/transfer/remove/square/mult/...
  };
  std::vector<std::string> counters;
  std::vector<Instr> code;
  std::vector<std::pair<int, int>> affine_pairs;  // (z, y) per square instance
  std::vector<int> copies_per_var;                // n_i
};

/// Guess loops filling the variable copies, monomial evaluation by recursive
/// splitting (squares consume two copies of their operand, general products
/// four), sign-separated accumulation, and terminal zero tests.
CounterProgram compile_poly(const Polynomial& p);

struct IrResult {
  bool ok = false;
  std::string failure;
  std::vector<Int> final_values;
};

/// Deterministic execution: init loops run the assigned values, driven loops
/// drain their driver; zero tests assert. fuel caps the total step count.
IrResult run_ir(const CounterProgram& cp, const std::vector<Int>& assignment,
                long fuel = 1000000);

struct LoweredProgram {
  AffineVass vass;
  ReachQuery query;                        // start(0) ->* end(0)
  std::map<int, int> zero_test_counter;    // transition index -> tested counter
  IntMatrix shared_matrix;                 // the single non-identity matrix
  bool uses_shared_matrix = false;
};

/// Control flow becomes states, loops become control cycles, and every
/// add_affine step applies the one shared matrix I + sum of 2·E_{z_j,y_j}
/// with vector +e_z, so the output is monogenic.
LoweredProgram lower_ir(const CounterProgram& cp);

/// Replay-based validation of a witness: after a run crosses a zero-test
/// marker, the tested counter must never change value again.
bool audit_zero_tests(const LoweredProgram& lp, const Run& run);

}  // namespace avass
