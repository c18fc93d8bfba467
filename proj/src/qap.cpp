#include "hermes/qap/qap.hpp"

#include <algorithm>

#include "hermes/field/batch.hpp"
#include "hermes/qap/ntt.hpp"

namespace hermes::qap {

namespace {

std::vector<Fr> factorials(std::size_t n) {
  std::vector<Fr> f(n + 1);
  f[0] = Fr::one();
  for (std::size_t i = 1; i <= n; ++i) f[i] = f[i - 1] * Fr::from_u64(i);
  return f;
}

Polynomial product_tree(const std::vector<Fr>& roots, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return Polynomial::linear_root(roots[lo]);
  std::size_t mid = lo + (hi - lo) / 2;
  return product_tree(roots, lo, mid) * product_tree(roots, mid, hi);
}

}  // namespace

std::vector<Fr> consecutive_weights(std::size_t n) {
  std::vector<Fr> fact = factorials(n);
  std::vector<Fr> w(n);
  for (std::size_t i = 1; i <= n; ++i) w[i - 1] = fact[i - 1] * fact[n - i];
  field::batch_inverse<Fr>(w);
  for (std::size_t i = 1; i <= n; ++i)
    if ((n - i) % 2 == 1) w[i - 1] = -w[i - 1];
  return w;
}

// ---- EvaluationDomain ----

EvaluationDomain EvaluationDomain::consecutive(std::size_t n) {
  if (n == 0) throw UsageError("evaluation domain must be non-empty");
  EvaluationDomain d;
  d.points_.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) d.points_.push_back(Fr::from_u64(i));
  d.weights_ = consecutive_weights(n);
  d.consecutive_ = true;
  return d;
}

EvaluationDomain::EvaluationDomain(std::vector<Fr> points) : points_(std::move(points)) {
  if (points_.empty()) throw UsageError("evaluation domain must be non-empty");
  std::vector<std::uint64_t> sorted;
  for (const auto& p : points_) sorted.push_back(p.to_u64());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw MathError("duplicate domain point");
  const std::size_t n = points_.size();
  weights_.assign(n, Fr::one());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) weights_[i] *= points_[i] - points_[j];
  field::batch_inverse<Fr>(weights_);
  consecutive_ = true;
  for (std::size_t i = 0; i < n && consecutive_; ++i) consecutive_ = points_[i] == Fr::from_u64(i + 1);
}

Polynomial EvaluationDomain::vanishing() const { return product_tree(points_, 0, points_.size()); }

Fr EvaluationDomain::vanishing_at(const Fr& x) const {
  Fr acc = Fr::one();
  for (const auto& r : points_) acc *= x - r;
  return acc;
}

bool EvaluationDomain::contains(const Fr& x) const {
  if (consecutive_) {
    std::uint64_t v = x.to_u64();
    return v >= 1 && v <= points_.size();
  }
  return std::find(points_.begin(), points_.end(), x) != points_.end();
}

std::vector<Fr> EvaluationDomain::lagrange_at(const Fr& x) const {
  const std::size_t n = points_.size();
  std::vector<Fr> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (points_[i] == x) {
      out[i] = Fr::one();
      return out;
    }
  }
  std::vector<Fr> diffs(n);
  for (std::size_t i = 0; i < n; ++i) diffs[i] = x - points_[i];
  Fr t = Fr::one();
  for (const auto& d : diffs) t *= d;
  field::batch_inverse<Fr>(diffs);
  for (std::size_t i = 0; i < n; ++i) out[i] = t * weights_[i] * diffs[i];
  return out;
}

Polynomial EvaluationDomain::interpolate(const std::vector<Fr>& values) const {
  if (values.size() != points_.size()) throw UsageError("interpolation needs one value per domain point");
  Polynomial t = vanishing();
  Polynomial acc;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i].is_zero()) continue;
    acc += t.divide_by_linear(points_[i]) * (values[i] * weights_[i]);
  }
  return acc;
}

Polynomial vanishing_poly(const EvaluationDomain& d) { return d.vanishing(); }

// ---- QapInstance ----

QapInstance::QapInstance(const r1cs::ConstraintSystem& cs, EvaluationDomain domain)
    : cs_(&cs), domain_(std::move(domain)), t_(domain_.vanishing()) {
  if (domain_.size() != cs.num_constraints()) throw UsageError("domain size must equal the constraint count");
}

QapInstance r1cs_to_qap(const r1cs::ConstraintSystem& cs) {
  return QapInstance(cs, EvaluationDomain::consecutive(cs.num_constraints()));
}

namespace {

const r1cs::LC& row_of(const r1cs::Constraint& c, Matrix m) {
  return m == Matrix::kA ? c.a : m == Matrix::kB ? c.b : c.c;
}

}  // namespace

Polynomial QapInstance::column(Matrix m, std::size_t wire) const {
  std::vector<Fr> values(domain_.size());
  for (std::size_t i = 0; i < cs_->num_constraints(); ++i) {
    for (const auto& term : row_of(cs_->constraint(i), m).terms()) {
      if (term.wire == wire) values[i] = term.coeff;
    }
  }
  return domain_.interpolate(values);
}

QapInstance::Evaluation QapInstance::evaluate_at(const Fr& x) const {
  Evaluation e;
  const std::size_t m = cs_->num_wires();
  e.a.assign(m, Fr::zero());
  e.b.assign(m, Fr::zero());
  e.c.assign(m, Fr::zero());
  e.t = domain_.vanishing_at(x);
  std::vector<Fr> lag = domain_.lagrange_at(x);
  for (std::size_t i = 0; i < cs_->num_constraints(); ++i) {
    const auto& con = cs_->constraint(i);
    for (const auto& term : con.a.terms()) e.a[term.wire] += term.coeff * lag[i];
    for (const auto& term : con.b.terms()) e.b[term.wire] += term.coeff * lag[i];
    for (const auto& term : con.c.terms()) e.c[term.wire] += term.coeff * lag[i];
  }
  return e;
}

void QapInstance::row_values(const r1cs::Witness& w, std::vector<Fr>& a, std::vector<Fr>& b,
                             std::vector<Fr>& c) const {
  if (w.size() != cs_->num_wires()) throw UsageError("witness length does not match the system");
  const std::size_t n = cs_->num_constraints();
  a.resize(n);
  b.resize(n);
  c.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& con = cs_->constraint(i);
    a[i] = con.a.evaluate(w.values);
    b[i] = con.b.evaluate(w.values);
    c[i] = con.c.evaluate(w.values);
  }
}

Polynomial compute_quotient(const QapInstance& qap, const r1cs::Witness& w) {
  std::vector<Fr> a, b, c;
  qap.row_values(w, a, b, c);
  const auto& d = qap.domain();
  Polynomial p = d.interpolate(a) * d.interpolate(b) - d.interpolate(c);
  auto [h, rem] = Polynomial::div_rem(p, qap.target());
  if (!rem.is_zero()) throw InvalidWitness("A(x)B(x) - C(x) is not divisible by t(x): witness is unsatisfying");
  return h;
}

std::vector<Fr> extrapolate_consecutive(const std::vector<Fr>& values, std::size_t count) {
  const std::size_t n = values.size();
  if (n == 0) throw UsageError("nothing to extrapolate");
  if (count == 0) return {};
  // f(n+k) = t(n+k) * sum_i w_i y_i / (n+k-i), a convolution of (w_i y_i) with 1/d.
  std::vector<Fr> w = consecutive_weights(n);
  std::vector<Fr> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = w[i] * values[i];
  const std::size_t len = n + count - 1;
  std::vector<Fr> recip(len);
  for (std::size_t e = 0; e < len; ++e) recip[e] = Fr::from_u64(e + 1);
  field::batch_inverse<Fr>(recip);
  std::vector<Fr> conv = convolve(u, recip);
  // t(n+k) = (n+k-1)! / (k-1)!
  std::vector<Fr> fact = factorials(n + count);
  std::vector<Fr> denom(count);
  for (std::size_t k = 1; k <= count; ++k) denom[k - 1] = fact[k - 1];
  field::batch_inverse<Fr>(denom);
  std::vector<Fr> out(count);
  for (std::size_t k = 1; k <= count; ++k) out[k - 1] = fact[n + k - 1] * denom[k - 1] * conv[n + k - 2];
  return out;
}

std::vector<Fr> quotient_evaluations(const QapInstance& qap, const r1cs::Witness& w) {
  if (!qap.domain().is_consecutive()) throw UsageError("quotient evaluations need the consecutive domain");
  std::vector<Fr> a, b, c;
  qap.row_values(w, a, b, c);
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!(a[i] * b[i] == c[i])) {
      throw InvalidWitness("witness violates constraint " + std::to_string(i) + " '" +
                           qap.system().constraint_label(i) + "'");
    }
  }
  if (n == 1) return {};
  const std::size_t count = n - 1;
  std::vector<Fr> ea = extrapolate_consecutive(a, count);
  std::vector<Fr> eb = extrapolate_consecutive(b, count);
  std::vector<Fr> ec = extrapolate_consecutive(c, count);
  std::vector<Fr> fact = factorials(n + count);
  std::vector<Fr> t(count);
  for (std::size_t k = 1; k <= count; ++k) t[k - 1] = fact[n + k - 1];
  field::batch_inverse<Fr>(t);
  std::vector<Fr> h(count);
  for (std::size_t k = 1; k <= count; ++k) h[k - 1] = (ea[k - 1] * eb[k - 1] - ec[k - 1]) * t[k - 1] * fact[k - 1];
  return h;
}

}  // namespace hermes::qap
