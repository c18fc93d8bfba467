#pragma once

#include <string>
#include <vector>

#include "hermes/r1cs/constraint_system.hpp"

namespace hermes::r1cs {

/// View over the partially solved assignment handed to solver steps. Indices are builder ids.
class SolverContext {
 public:
  Fr get(Var v) const;
  Fr eval(const LC& lc) const;
  void set(Var v, const Fr& value);
  bool is_set(Var v) const { return assigned_[v.id] != 0; }

 private:
  friend class ConstraintSystem;
  SolverContext(const std::vector<std::string>& labels, std::size_t n);

  const std::vector<std::string>& labels_;
  std::vector<Fr> values_;
  std::vector<std::uint8_t> assigned_;
  std::vector<std::uint8_t> pinned_;
};

/// Incremental circuit builder. Wires get builder ids in allocation order; finalize()
/// reorders them publics-first and freezes the system.
class Builder {
 public:
  Builder();

  /// Input wires, assigned from the input map by label.
  Var alloc_public(const std::string& label);
  Var alloc_private(const std::string& label);
  /// Wire filled in by a later solver step.
  Var alloc(const std::string& label, Visibility vis = Visibility::kPrivate);
  /// Wire computed from already-solved wires.
  Var compute(const std::string& label, std::function<Fr(const SolverContext&)> fn,
              Visibility vis = Visibility::kPrivate);

  /// Public wire constrained equal to `value` and solved from it.
  Var output(const std::string& label, const LC& value);

  void add_solver(Solver solver);

  /// Appends <a,w> * <b,w> = <c,w>.
  void enforce(const LC& a, const LC& b, const LC& c, const std::string& label = {});
  void enforce_equal(const LC& x, const LC& y, const std::string& label = {}) {
    enforce(x - y, LC(kOne), LC(), label);
  }

  std::size_t num_constraints() const { return cs_.constraints_.size(); }
  std::size_t num_vars() const { return cs_.builder_labels_.size(); }
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// Label prefix applied to wires and constraints allocated inside a gadget.
  class Scope {
   public:
    Scope(Builder& b, const std::string& name) : b_(b), saved_(b.prefix_) { b.prefix_ += name + "/"; }
    ~Scope() { b_.prefix_ = saved_; }
    Scope(const Scope&) = delete;
    Scope& operator=(const Scope&) = delete;

   private:
    Builder& b_;
    std::string saved_;
  };

  ConstraintSystem finalize();
  bool finalized() const { return finalized_; }

 private:
  Var new_var(const std::string& label, Visibility vis);
  void check_open() const;

  ConstraintSystem cs_;
  std::vector<Visibility> vis_;
  std::vector<std::string> warnings_;
  std::string prefix_;
  bool finalized_ = false;
};

}  // namespace hermes::r1cs
