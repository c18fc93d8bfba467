#include "hermes/r1cs/gadgets.hpp"

namespace hermes::r1cs::gadgets {

void assert_boolean(Builder& b, const LC& x, const std::string& label) {
  b.enforce(x, x - LC::constant(1), LC(), label);
}

std::vector<Var> bit_decompose(Builder& b, const LC& x, unsigned bits, const std::string& label) {
  if (bits == 0 || bits > Fr::kCapacityBits) throw UsageError("bit width outside the field capacity");
  Builder::Scope scope(b, label);
  std::vector<Var> out;
  out.reserve(bits);
  for (unsigned i = 0; i < bits; ++i) out.push_back(b.alloc("b" + std::to_string(i)));
  b.add_solver([out, x](SolverContext& ctx) {
    auto v = ctx.eval(x).to_int();
    for (std::size_t i = 0; i < out.size(); ++i) ctx.set(out[i], v.bit(i) ? Fr::one() : Fr::zero());
  });
  LC sum;
  Fr weight = Fr::one();
  for (unsigned i = 0; i < bits; ++i) {
    assert_boolean(b, out[i], "bool" + std::to_string(i));
    sum += LC(out[i], weight);
    weight = weight.dbl();
  }
  b.enforce(sum, LC(kOne), x, "recompose");
  return out;
}

Var is_equal(Builder& b, const LC& x, const LC& y, const std::string& label) {
  Builder::Scope scope(b, label);
  LC d = x - y;
  Var inv = b.compute("inv", [d](const SolverContext& ctx) {
    Fr v = ctx.eval(d);
    return v.is_zero() ? Fr::zero() : v.inverse();
  });
  Var out = b.compute("out", [d](const SolverContext& ctx) { return ctx.eval(d).is_zero() ? Fr::one() : Fr::zero(); });
  // d * inv = 1 - out forces out = 0 when d != 0; d * out = 0 forces out = 0 or d = 0.
  b.enforce(d, inv, LC::constant(1) - out, "inverse");
  b.enforce(d, out, LC(), "zero");
  return out;
}

namespace {

void check_constant_fits(const LC& v, unsigned bits) {
  if (!fits_bits(v.constant_value(), bits)) throw UsageError("comparator constant exceeds its bit width");
}

}  // namespace

Var geq(Builder& b, const LC& x, const LC& y, unsigned bits, RangeCheck range, const std::string& label) {
  if (bits == 0 || bits + 2 > Fr::kCapacityBits) throw UsageError("comparator width exceeds field capacity");
  Builder::Scope scope(b, label);
  const bool check_x = range == RangeCheck::kLeft || range == RangeCheck::kBoth;
  const bool check_y = range == RangeCheck::kRight || range == RangeCheck::kBoth;
  if (check_x) {
    if (x.is_constant()) check_constant_fits(x, bits);
    else bit_decompose(b, x, bits, "range_x");
  }
  if (check_y) {
    if (y.is_constant()) check_constant_fits(y, bits);
    else bit_decompose(b, y, bits, "range_y");
  }
  // x - y + 2^bits lies in [1, 2^(bits+1)); its top bit is exactly [x >= y].
  LC shifted = x - y + LC::constant(Fr::from_u64(2).pow(std::uint64_t{bits}));
  auto diff_bits = bit_decompose(b, shifted, bits + 1, "diff");
  return diff_bits.back();
}

Var and_gate(Builder& b, const LC& x, const LC& y, const std::string& label) { return mul(b, x, y, label); }

Var or_gate(Builder& b, const LC& x, const LC& y, const std::string& label) {
  Builder::Scope scope(b, label);
  Var out = b.compute("out", [x, y](const SolverContext& ctx) {
    Fr a = ctx.eval(x), c = ctx.eval(y);
    return a + c - a * c;
  });
  b.enforce(x, y, x + y - out, "or");
  return out;
}

LC and_all(Builder& b, const std::vector<LC>& xs, const std::string& label) {
  if (xs.empty()) return LC::constant(1);
  LC acc = xs.front();
  for (std::size_t i = 1; i < xs.size(); ++i) acc = and_gate(b, acc, xs[i], label + std::to_string(i));
  return acc;
}

Var mul(Builder& b, const LC& x, const LC& y, const std::string& label) {
  Var out = b.compute(label, [x, y](const SolverContext& ctx) { return ctx.eval(x) * ctx.eval(y); });
  b.enforce(x, y, out, label);
  return out;
}

Var select(Builder& b, const LC& cond, const LC& x, const LC& y, const std::string& label) {
  // out = y + cond * (x - y)
  LC diff = x - y;
  Var out = b.compute(label, [cond, x, y](const SolverContext& ctx) {
    return ctx.eval(cond).is_zero() ? ctx.eval(y) : ctx.eval(x);
  });
  b.enforce(cond, diff, LC(out) - y, label);
  return out;
}

}  // namespace hermes::r1cs::gadgets
