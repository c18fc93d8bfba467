#include <algorithm>

#include "hermes/r1cs/builder.hpp"
#include "hermes/util/sha256.hpp"

namespace hermes::r1cs {

namespace {

constexpr char kMagic[4] = {'H', 'S', 'R', '1'};
constexpr std::uint32_t kVersion = 1;

const std::string kEmpty;

}  // namespace

// ---- SolverContext ----

SolverContext::SolverContext(const std::vector<std::string>& labels, std::size_t n)
    : labels_(labels), values_(n), assigned_(n, 0), pinned_(n, 0) {}

Fr SolverContext::get(Var v) const {
  if (!assigned_[v.id]) throw InvalidWitness("wire '" + labels_[v.id] + "' read before it was solved");
  return values_[v.id];
}

Fr SolverContext::eval(const LC& lc) const {
  Fr acc;
  for (const auto& t : lc.terms()) acc += t.coeff * get(Var{t.wire});
  return acc;
}

void SolverContext::set(Var v, const Fr& value) {
  if (pinned_[v.id]) return;
  values_[v.id] = value;
  assigned_[v.id] = 1;
}

// ---- ConstraintSystem ----

const std::string& ConstraintSystem::wire_label(std::size_t wire) const {
  return wire < wire_labels_.size() ? wire_labels_[wire] : kEmpty;
}

const std::string& ConstraintSystem::constraint_label(std::size_t row) const {
  return row < constraint_labels_.size() ? constraint_labels_[row] : kEmpty;
}

bool ConstraintSystem::has_wire(const std::string& label) const { return label_index_.contains(label); }

std::uint32_t ConstraintSystem::find_wire(const std::string& label) const {
  auto it = label_index_.find(label);
  if (it == label_index_.end()) throw UsageError("no wire labelled '" + label + "'");
  if (it->second.size() != 1) throw UsageError("wire label '" + label + "' is ambiguous");
  return builder_to_wire_[it->second.front()];
}

Visibility ConstraintSystem::visibility(std::size_t wire) const {
  if (wire == 0) return Visibility::kConstantOne;
  return wire <= num_public_ ? Visibility::kPublic : Visibility::kPrivate;
}

std::size_t ConstraintSystem::num_nonzero() const {
  std::size_t total = 0;
  for (const auto& c : constraints_) total += c.a.terms().size() + c.b.terms().size() + c.c.terms().size();
  return total;
}

Bytes ConstraintSystem::serialize() const {
  Bytes out;
  out.insert(out.end(), kMagic, kMagic + 4);
  put_le(out, kVersion);
  out.push_back(Fr::profile_id());
  put_le(out, static_cast<std::uint32_t>(constraints_.size()));
  put_le(out, static_cast<std::uint32_t>(num_wires_));
  put_le(out, static_cast<std::uint32_t>(num_public_));
  for (int m = 0; m < 3; ++m) {
    std::uint64_t count = 0;
    for (const auto& c : constraints_) count += (m == 0 ? c.a : m == 1 ? c.b : c.c).terms().size();
    put_le(out, count);
    for (std::size_t row = 0; row < constraints_.size(); ++row) {
      const LC& lc = m == 0 ? constraints_[row].a : m == 1 ? constraints_[row].b : constraints_[row].c;
      for (const auto& t : lc.terms()) {
        put_le(out, static_cast<std::uint32_t>(row));
        put_le(out, t.wire);
        t.coeff.write_bytes(out);
      }
    }
  }
  return out;
}

ConstraintSystem ConstraintSystem::deserialize(ByteSpan data) {
  ByteReader r(data);
  ByteSpan magic = r.take(4);
  if (!std::equal(magic.begin(), magic.end(), kMagic)) throw ParseError("not an R1CS file (bad magic)");
  if (r.u32() != kVersion) throw ParseError("unsupported R1CS version");
  if (r.u8() != Fr::profile_id()) throw ParseError("R1CS file uses a different field profile");
  ConstraintSystem cs;
  std::uint32_t n = r.u32();
  cs.num_wires_ = r.u32();
  cs.num_public_ = r.u32();
  if (cs.num_wires_ == 0 || cs.num_public_ >= cs.num_wires_) throw ParseError("inconsistent R1CS wire counts");
  // Each record needs at least 9 bytes, which bounds n against hostile headers.
  if (n > data.size()) throw ParseError("constraint count exceeds file size");
  cs.constraints_.resize(n);
  for (int m = 0; m < 3; ++m) {
    std::uint64_t count = r.u64();
    if (count > r.remaining()) throw ParseError("record count exceeds file size");
    std::uint64_t prev_row = 0, prev_wire = 0;
    for (std::uint64_t k = 0; k < count; ++k) {
      std::uint32_t row = r.u32();
      std::uint32_t wire = r.u32();
      Fr coeff = Fr::from_bytes(r.take(Fr::kByteWidth));
      if (row >= n || wire >= cs.num_wires_) throw ParseError("R1CS record index out of range");
      if (coeff.is_zero()) throw ParseError("R1CS record with zero coefficient");
      if (k > 0 && (row < prev_row || (row == prev_row && wire <= prev_wire))) {
        throw ParseError("R1CS records are not in canonical order");
      }
      prev_row = row;
      prev_wire = wire;
      Constraint& c = cs.constraints_[row];
      (m == 0 ? c.a : m == 1 ? c.b : c.c).add_term(wire, coeff);
    }
  }
  r.expect_done();
  return cs;
}

Digest ConstraintSystem::hash() const { return sha256(serialize()); }

Witness ConstraintSystem::solve(const Assignment& inputs, const Assignment& overrides) const {
  const std::size_t n = builder_labels_.size();
  if (n != num_wires_ || (steps_.empty() && num_wires_ > 1)) {
    throw UsageError("constraint system carries no solvers (loaded from file?)");
  }
  SolverContext ctx(builder_labels_, n);
  ctx.set(kOne, Fr::one());
  for (const auto& [label, value] : overrides) {
    auto it = label_index_.find(label);
    if (it == label_index_.end()) throw UsageError("override for unknown wire '" + label + "'");
    for (std::uint32_t id : it->second) {
      ctx.set(Var{id}, value);
      ctx.pinned_[id] = 1;
    }
  }
  for (const auto& step : steps_) {
    if (step.input) {
      const std::string& label = builder_labels_[step.input->id];
      auto it = inputs.find(label);
      if (it == inputs.end()) {
        if (ctx.pinned_[step.input->id]) continue;
        throw UsageError("missing input '" + label + "'");
      }
      ctx.set(*step.input, it->second);
    } else {
      step.solve(ctx);
    }
  }
  Witness w;
  w.values.resize(num_wires_);
  for (std::size_t id = 0; id < n; ++id) {
    if (!ctx.assigned_[id]) throw InvalidWitness("wire '" + builder_labels_[id] + "' was never solved");
    w.values[builder_to_wire_[id]] = ctx.values_[id];
  }
  return w;
}

Witness ConstraintSystem::generate_witness(const Assignment& inputs) const {
  Witness w = solve(inputs);
  if (auto row = first_unsatisfied(w)) {
    throw InvalidWitness("witness violates constraint " + std::to_string(*row) + " '" + constraint_label(*row) +
                         "'");
  }
  return w;
}

void ConstraintSystem::check_dimensions(const Witness& w) const {
  if (w.size() != num_wires_) {
    throw UsageError("witness has " + std::to_string(w.size()) + " entries, system has " +
                     std::to_string(num_wires_) + " wires");
  }
}

std::optional<std::size_t> ConstraintSystem::first_unsatisfied(const Witness& w) const {
  check_dimensions(w);
  if (!(w[0] == Fr::one())) return 0;
  for (std::size_t i = 0; i < constraints_.size(); ++i) {
    const Constraint& c = constraints_[i];
    if (!(c.a.evaluate(w.values) * c.b.evaluate(w.values) == c.c.evaluate(w.values))) return i;
  }
  return std::nullopt;
}

std::vector<Fr> ConstraintSystem::public_inputs(const Witness& w) const {
  check_dimensions(w);
  return {w.values.begin() + 1, w.values.begin() + 1 + static_cast<std::ptrdiff_t>(num_public_)};
}

bool is_satisfied(const ConstraintSystem& cs, const Witness& w) { return cs.is_satisfied(w); }

// ---- Builder ----

Builder::Builder() {
  cs_.builder_labels_.push_back("one");
  vis_.push_back(Visibility::kConstantOne);
}

void Builder::check_open() const {
  if (finalized_) throw UsageError("constraint system already finalized");
}

Var Builder::new_var(const std::string& label, Visibility vis) {
  check_open();
  if (vis == Visibility::kConstantOne) throw UsageError("only wire 0 is the constant one");
  std::string full = prefix_ + label;
  auto& ids = cs_.label_index_[full];
  if (!ids.empty()) warnings_.push_back("duplicate wire label '" + full + "'");
  Var v{static_cast<std::uint32_t>(cs_.builder_labels_.size())};
  ids.push_back(v.id);
  cs_.builder_labels_.push_back(std::move(full));
  vis_.push_back(vis);
  return v;
}

Var Builder::alloc_public(const std::string& label) {
  Var v = new_var(label, Visibility::kPublic);
  cs_.steps_.push_back({v, {}});
  return v;
}

Var Builder::alloc_private(const std::string& label) {
  Var v = new_var(label, Visibility::kPrivate);
  cs_.steps_.push_back({v, {}});
  return v;
}

Var Builder::alloc(const std::string& label, Visibility vis) { return new_var(label, vis); }

Var Builder::compute(const std::string& label, std::function<Fr(const SolverContext&)> fn, Visibility vis) {
  Var v = new_var(label, vis);
  cs_.steps_.push_back({std::nullopt, [v, fn = std::move(fn)](SolverContext& ctx) { ctx.set(v, fn(ctx)); }});
  return v;
}

Var Builder::output(const std::string& label, const LC& value) {
  Var v = compute(label, [value](const SolverContext& ctx) { return ctx.eval(value); }, Visibility::kPublic);
  enforce_equal(v, value, label);
  return v;
}

void Builder::add_solver(Solver solver) {
  check_open();
  cs_.steps_.push_back({std::nullopt, std::move(solver)});
}

void Builder::enforce(const LC& a, const LC& b, const LC& c, const std::string& label) {
  check_open();
  const std::uint32_t limit = static_cast<std::uint32_t>(cs_.builder_labels_.size());
  for (const LC* lc : {&a, &b, &c}) {
    if (lc->max_wire() >= limit) throw UsageError("constraint references an unallocated wire");
  }
  cs_.constraints_.push_back({a, b, c});
  cs_.constraint_labels_.push_back(prefix_ + label);
}

ConstraintSystem Builder::finalize() {
  check_open();
  finalized_ = true;
  const std::size_t n = cs_.builder_labels_.size();
  std::vector<std::uint32_t> map(n);
  std::uint32_t next = 1;
  for (std::size_t id = 1; id < n; ++id)
    if (vis_[id] == Visibility::kPublic) map[id] = next++;
  cs_.num_public_ = next - 1;
  for (std::size_t id = 1; id < n; ++id)
    if (vis_[id] == Visibility::kPrivate) map[id] = next++;
  cs_.num_wires_ = n;
  cs_.builder_to_wire_ = map;
  cs_.wire_labels_.assign(n, {});
  for (std::size_t id = 0; id < n; ++id) cs_.wire_labels_[map[id]] = cs_.builder_labels_[id];
  for (auto& c : cs_.constraints_) {
    c.a = c.a.remapped(map);
    c.b = c.b.remapped(map);
    c.c = c.c.remapped(map);
  }
  // Input-consistency rows x_i * 0 = 0 for the one-wire and every public wire. Each gives
  // its column a private Lagrange component, so the verifier's IC terms stay linearly
  // independent even for publics that no other constraint touches.
  for (std::uint32_t w = 0; w <= cs_.num_public_; ++w) {
    cs_.constraints_.push_back({LC(Var{w}), LC(), LC()});
    cs_.constraint_labels_.push_back("public/" + cs_.wire_labels_[w]);
  }
  return std::move(cs_);
}

}  // namespace hermes::r1cs
