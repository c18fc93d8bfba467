#pragma once

#include <string>
#include <vector>

#include "hermes/r1cs/builder.hpp"

namespace hermes::r1cs::gadgets {

/// Which comparator operands get an explicit range check.
enum class RangeCheck { kNone, kLeft, kRight, kBoth };

/// b * (b - 1) = 0.
void assert_boolean(Builder& b, const LC& x, const std::string& label = "bool");

/// Bit wires of x, low bit first, each boolean, with sum b_i 2^i = x.
/// Unsatisfiable when x >= 2^bits. Costs bits + 1 constraints.
std::vector<Var> bit_decompose(Builder& b, const LC& x, unsigned bits, const std::string& label = "bits");

/// 1 iff x == y, using an inverse-or-zero hint. Costs 2 constraints.
Var is_equal(Builder& b, const LC& x, const LC& y, const std::string& label = "is_equal");

/// 1 iff x >= y as integers, for x, y < 2^bits. Operands selected by `range` are
/// bit-decomposed first; the others must already be known to fit. Constant operands
/// are checked at build time instead.
Var geq(Builder& b, const LC& x, const LC& y, unsigned bits, RangeCheck range = RangeCheck::kBoth,
        const std::string& label = "geq");

Var and_gate(Builder& b, const LC& x, const LC& y, const std::string& label = "and");
Var or_gate(Builder& b, const LC& x, const LC& y, const std::string& label = "or");
/// 1 - x; linear, so no constraint.
inline LC not_gate(const LC& x) { return LC::constant(1) - x; }
/// AND over any number of boolean inputs; the empty conjunction is 1.
LC and_all(Builder& b, const std::vector<LC>& xs, const std::string& label = "and_all");

/// x * y as a fresh wire. One constraint.
Var mul(Builder& b, const LC& x, const LC& y, const std::string& label = "mul");
/// cond ? x : y for boolean cond. One constraint.
Var select(Builder& b, const LC& cond, const LC& x, const LC& y, const std::string& label = "select");

/// Native helper shared with the test oracles.
inline bool fits_bits(const Fr& v, unsigned bits) { return v.to_int().num_bits() <= bits; }

}  // namespace hermes::r1cs::gadgets
