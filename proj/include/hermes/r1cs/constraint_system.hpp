#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hermes/r1cs/linear_combination.hpp"
#include "hermes/util/bytes.hpp"

namespace hermes::r1cs {

enum class Visibility : std::uint8_t { kConstantOne, kPublic, kPrivate };

struct Constraint {
  LC a, b, c;
};

/// Dense assignment w = (1, public..., private...).
struct Witness {
  std::vector<Fr> values;

  std::size_t size() const { return values.size(); }
  const Fr& operator[](std::size_t i) const { return values[i]; }
  Fr& operator[](std::size_t i) { return values[i]; }
};

class SolverContext;
using Solver = std::function<void(SolverContext&)>;

/// Step of witness generation, run in allocation order.
struct SolverStep {
  std::optional<Var> input;  // set: read this wire from the input map by its label
  Solver solve;
};

/// Input assignments keyed by wire label.
using Assignment = std::map<std::string, Fr>;

/// Finalized rank-1 constraint system. Wire 0 is the constant one, wires 1..l are public
/// and l+1..m are private.
class ConstraintSystem {
 public:
  ConstraintSystem() = default;

  std::size_t num_constraints() const { return constraints_.size(); }
  /// m + 1, counting the constant-one wire.
  std::size_t num_wires() const { return num_wires_; }
  /// l.
  std::size_t num_public() const { return num_public_; }
  std::size_t num_private() const { return num_wires_ - 1 - num_public_; }

  const std::vector<Constraint>& constraints() const { return constraints_; }
  const Constraint& constraint(std::size_t i) const { return constraints_[i]; }

  /// Final index of a builder handle.
  std::uint32_t index_of(Var v) const { return builder_to_wire_.at(v.id); }
  const std::string& wire_label(std::size_t wire) const;
  const std::string& constraint_label(std::size_t row) const;
  /// Final index of the unique wire carrying this label.
  std::uint32_t find_wire(const std::string& label) const;
  bool has_wire(const std::string& label) const;
  Visibility visibility(std::size_t wire) const;

  /// Total nonzero entries across A, B and C.
  std::size_t num_nonzero() const;

  /// Canonical binary form (labels and solvers are not part of it).
  Bytes serialize() const;
  static ConstraintSystem deserialize(ByteSpan data);
  /// SHA-256 of serialize(); the circuit identity bound into keys and packages.
  Digest hash() const;

  /// Runs the registered solvers. Wires whose label appears in `overrides` are pinned to
  /// the given value wherever a solver would set them. No satisfiability check.
  Witness solve(const Assignment& inputs, const Assignment& overrides = {}) const;

  /// Solves and checks: either a satisfying witness or InvalidWitness naming the
  /// first failing constraint.
  Witness generate_witness(const Assignment& inputs) const;

  /// Index of the first row with <a,w>*<b,w> != <c,w>.
  std::optional<std::size_t> first_unsatisfied(const Witness& w) const;
  bool is_satisfied(const Witness& w) const { return !first_unsatisfied(w).has_value(); }

  /// Public slice w[1..l].
  std::vector<Fr> public_inputs(const Witness& w) const;

 private:
  friend class Builder;

  void check_dimensions(const Witness& w) const;

  std::vector<Constraint> constraints_;
  std::vector<std::string> constraint_labels_;
  std::size_t num_wires_ = 1;
  std::size_t num_public_ = 0;
  std::vector<std::string> wire_labels_;         // final index
  std::vector<std::uint32_t> builder_to_wire_;   // builder id -> final index
  std::vector<std::string> builder_labels_;      // builder id
  std::vector<SolverStep> steps_;
  std::map<std::string, std::vector<std::uint32_t>> label_index_;  // label -> builder ids
};

bool is_satisfied(const ConstraintSystem& cs, const Witness& w);

}  // namespace hermes::r1cs
