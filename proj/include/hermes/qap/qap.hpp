#pragma once

#include <vector>

#include "hermes/qap/polynomial.hpp"
#include "hermes/r1cs/constraint_system.hpp"

namespace hermes::qap {

/// Distinct interpolation points r_1..r_n.
class EvaluationDomain {
 public:
  /// r_i = i for i = 1..n.
  static EvaluationDomain consecutive(std::size_t n);
  /// Arbitrary points; duplicates raise MathError.
  explicit EvaluationDomain(std::vector<Fr> points);

  std::size_t size() const { return points_.size(); }
  const std::vector<Fr>& points() const { return points_; }
  bool is_consecutive() const { return consecutive_; }

  /// Barycentric weights w_i = 1 / prod_{j != i} (r_i - r_j).
  const std::vector<Fr>& weights() const { return weights_; }

  /// t(x) = prod (x - r_i).
  Polynomial vanishing() const;
  Fr vanishing_at(const Fr& x) const;

  /// L_1(x)..L_n(x) at a point; a domain point yields the matching unit vector.
  std::vector<Fr> lagrange_at(const Fr& x) const;

  /// Coefficients of the degree < n polynomial taking `values` on the domain.
  Polynomial interpolate(const std::vector<Fr>& values) const;

  bool contains(const Fr& x) const;

 private:
  EvaluationDomain() = default;

  std::vector<Fr> points_;
  std::vector<Fr> weights_;
  bool consecutive_ = false;
};

Polynomial vanishing_poly(const EvaluationDomain& d);

enum class Matrix { kA, kB, kC };

/// Column view of an R1CS over an evaluation domain: A_j(x) = sum_i A[i][j] L_i(x).
class QapInstance {
 public:
  QapInstance(const r1cs::ConstraintSystem& cs, EvaluationDomain domain);

  const r1cs::ConstraintSystem& system() const { return *cs_; }
  const EvaluationDomain& domain() const { return domain_; }
  const Polynomial& target() const { return t_; }
  std::size_t num_wires() const { return cs_->num_wires(); }

  /// Interpolated column polynomial for one wire.
  Polynomial column(Matrix m, std::size_t wire) const;

  struct Evaluation {
    std::vector<Fr> a, b, c;  // per wire
    Fr t;
  };
  /// All column polynomials at x in O(n + nnz).
  Evaluation evaluate_at(const Fr& x) const;

  /// Row evaluations <a_i, w>, <b_i, w>, <c_i, w>, i.e. A(r_i), B(r_i), C(r_i).
  void row_values(const r1cs::Witness& w, std::vector<Fr>& a, std::vector<Fr>& b, std::vector<Fr>& c) const;

 private:
  const r1cs::ConstraintSystem* cs_;
  EvaluationDomain domain_;
  Polynomial t_;
};

QapInstance r1cs_to_qap(const r1cs::ConstraintSystem& cs);

/// H(x) with A(x)B(x) - C(x) = H(x) t(x); InvalidWitness on a nonzero remainder.
Polynomial compute_quotient(const QapInstance& qap, const r1cs::Witness& w);

/// Values f(n+1)..f(n+count) of the degree < n polynomial with f(i) = values[i-1].
std::vector<Fr> extrapolate_consecutive(const std::vector<Fr>& values, std::size_t count);

/// H evaluated at n+1..2n-1 (the quotient's Lagrange basis used by the proving key).
/// Requires a consecutive domain. InvalidWitness if some row is violated.
std::vector<Fr> quotient_evaluations(const QapInstance& qap, const r1cs::Witness& w);

/// Weights of the consecutive domain {1..n}: (-1)^(n-i) / ((i-1)! (n-i)!).
std::vector<Fr> consecutive_weights(std::size_t n);

}  // namespace hermes::qap
