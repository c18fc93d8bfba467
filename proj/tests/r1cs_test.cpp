#include "doctest.h"
#include "hermes/r1cs/gadgets.hpp"

using namespace hermes;
using namespace hermes::r1cs;
namespace g = hermes::r1cs::gadgets;

namespace {

Fr f(std::uint64_t v) { return Fr::from_u64(v); }

// Hadamard identity evaluated directly on dense matrices, independent of LinearCombination::evaluate.
bool hadamard_oracle(const ConstraintSystem& cs, const Witness& w) {
  const std::size_t m = cs.num_wires();
  for (const auto& c : cs.constraints()) {
    std::vector<Fr> ra(m), rb(m), rc(m);
    for (const auto& t : c.a.terms()) ra[t.wire] = t.coeff;
    for (const auto& t : c.b.terms()) rb[t.wire] = t.coeff;
    for (const auto& t : c.c.terms()) rc[t.wire] = t.coeff;
    Fr a, b, cc;
    for (std::size_t j = 0; j < m; ++j) {
      a += ra[j] * w[j];
      b += rb[j] * w[j];
      cc += rc[j] * w[j];
    }
    if (!(a * b == cc)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("linear combinations merge, cancel and drop zeros") {
  LC a = LC(Var{3}, f(2)) + LC(Var{1}, f(5));
  REQUIRE(a.terms().size() == 2);
  CHECK(a.terms()[0].wire == 1);
  LC z = a - a;
  CHECK(z.is_zero());
  LC c = LC::constant(7) + LC(Var{2});
  CHECK(c.constant_value() == f(7));
  CHECK(!c.is_constant());
  std::vector<Fr> vals{f(1), f(10), f(20), f(30)};
  CHECK(a.evaluate(vals) == f(110));
  CHECK((a * Fr::zero()).is_zero());
}

TEST_CASE("layout is publics first after finalize") {
  Builder b;
  Var p1 = b.alloc_private("secret");
  Var x = b.alloc_public("x");
  Var p2 = b.alloc_private("other");
  Var y = b.alloc_public("y");
  b.enforce(p1, p2, x + y);
  ConstraintSystem cs = b.finalize();
  CHECK(cs.index_of(x) == 1);
  CHECK(cs.index_of(y) == 2);
  CHECK(cs.index_of(p1) == 3);
  CHECK(cs.index_of(p2) == 4);
  CHECK(cs.num_public() == 2);
  CHECK(cs.num_wires() == 5);
  CHECK(cs.visibility(0) == Visibility::kConstantOne);
  CHECK(cs.visibility(2) == Visibility::kPublic);
  CHECK(cs.visibility(3) == Visibility::kPrivate);
  CHECK(cs.wire_label(3) == "secret");

  CHECK_THROWS_AS(b.alloc_public("late"), UsageError);
  CHECK_THROWS_AS(b.enforce(kOne, kOne, kOne), UsageError);
}

TEST_CASE("enforce and is_satisfied") {
  Builder b;
  Var x = b.alloc_private("x");
  Var y = b.alloc_private("y");
  Var z = b.alloc_public("z");
  b.enforce(x, y, z, "xyz");
  CHECK_THROWS_AS(b.enforce(Var{99}, x, y), UsageError);
  ConstraintSystem cs = b.finalize();

  Witness w = cs.generate_witness({{"x", f(3)}, {"y", f(4)}, {"z", f(12)}});
  CHECK(cs.is_satisfied(w));
  CHECK(cs.public_inputs(w) == std::vector<Fr>{f(12)});
  Witness bad = cs.solve({{"x", f(3)}, {"y", f(4)}, {"z", f(11)}});
  CHECK(!cs.is_satisfied(bad));
  CHECK(cs.first_unsatisfied(bad) == std::optional<std::size_t>(0));
  CHECK_THROWS_WITH_AS(cs.generate_witness({{"x", f(3)}, {"y", f(4)}, {"z", f(11)}}), doctest::Contains("xyz"),
                       InvalidWitness);
  CHECK_THROWS_WITH_AS(cs.solve({{"x", f(3)}, {"z", f(11)}}), doctest::Contains("'y'"), UsageError);
  Witness short_w;
  short_w.values.resize(2);
  CHECK_THROWS_AS(cs.is_satisfied(short_w), UsageError);
}

TEST_CASE("boolean constraint accepts exactly 0 and 1") {
  Builder b;
  Var x = b.alloc_private("x");
  g::assert_boolean(b, x);
  ConstraintSystem cs = b.finalize();
  for (std::uint64_t v = 0; v < 16; ++v) {
    CHECK(cs.is_satisfied(cs.solve({{"x", f(v)}})) == (v <= 1));
  }
  CHECK(!cs.is_satisfied(cs.solve({{"x", Fr::from_i64(-1)}})));
}

TEST_CASE("duplicate labels are allowed with a warning") {
  Builder b;
  b.alloc_private("dup");
  b.alloc_private("dup");
  CHECK(b.warnings().size() == 1);
}

TEST_CASE("is_equal exhaustive over 4-bit pairs") {
  Builder b;
  Var x = b.alloc_private("x");
  Var y = b.alloc_private("y");
  Var out = g::is_equal(b, x, y);
  b.output("out", out);
  CHECK(b.num_constraints() == 3);
  ConstraintSystem cs = b.finalize();
  const std::uint32_t out_wire = cs.find_wire("out");
  const std::uint32_t inv_wire = cs.find_wire("is_equal/inv");
  Rng rng(1);
  for (std::uint64_t i = 0; i < 16; ++i) {
    for (std::uint64_t j = 0; j < 16; ++j) {
      Witness w = cs.generate_witness({{"x", f(i)}, {"y", f(j)}});
      CHECK(w[out_wire] == (i == j ? Fr::one() : Fr::zero()));
      // The contradicting output fails for every hint value tried, including the ones
      // that would satisfy each constraint individually.
      Witness forged = w;
      Fr wrong = i == j ? Fr::zero() : Fr::one();
      forged[out_wire] = wrong;
      forged[cs.find_wire("is_equal/out")] = wrong;
      std::vector<Fr> hints{Fr::zero(), Fr::one(), Fr::random(rng)};
      if (i != j) hints.push_back((f(i) - f(j)).inverse());
      for (const Fr& h : hints) {
        forged[inv_wire] = h;
        CHECK(!cs.is_satisfied(forged));
      }
    }
  }
  // Worked example: identifier 11 against the stop-sign class 11.
  Witness w = cs.generate_witness({{"x", f(11)}, {"y", f(11)}});
  CHECK(w[out_wire] == Fr::one());
  CHECK(cs.generate_witness({{"x", f(11)}, {"y", f(12)}})[out_wire] == Fr::zero());
}

TEST_CASE("bit decomposition") {
  Builder b;
  Var x = b.alloc_private("x");
  auto bits = g::bit_decompose(b, x, 4);
  CHECK(b.num_constraints() == 5);
  ConstraintSystem cs = b.finalize();
  Witness w = cs.generate_witness({{"x", f(5)}});
  std::vector<Fr> got;
  for (Var v : bits) got.push_back(w[cs.index_of(v)]);
  CHECK(got == std::vector<Fr>{f(1), f(0), f(1), f(0)});
  Witness zero = cs.generate_witness({{"x", f(0)}});
  for (Var v : bits) CHECK(zero[cs.index_of(v)].is_zero());
  CHECK_THROWS_WITH_AS(cs.generate_witness({{"x", f(16)}}), doctest::Contains("bits/recompose"), InvalidWitness);

  Builder b2;
  Var y = b2.alloc_private("y");
  auto bits2 = g::bit_decompose(b2, y, 40);
  ConstraintSystem cs2 = b2.finalize();
  Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    std::uint64_t v = rng.next_u64() >> 24;
    Witness wv = cs2.generate_witness({{"y", f(v)}});
    std::uint64_t back = 0;
    for (std::size_t k = 0; k < bits2.size(); ++k) back |= wv[cs2.index_of(bits2[k])].to_u64() << k;
    CHECK(back == v);
  }
}

TEST_CASE("geq exhaustive over 6-bit pairs, including forged difference bits") {
  constexpr unsigned kBits = 6;
  Builder b;
  Var x = b.alloc_private("x");
  Var y = b.alloc_private("y");
  Var out = g::geq(b, x, y, kBits);
  Var pub = b.output("out", out);
  CHECK(b.num_constraints() == 3 * kBits + 4 + 1);
  ConstraintSystem cs = b.finalize();
  std::vector<std::uint32_t> diff_wires;
  for (unsigned k = 0; k <= kBits; ++k) diff_wires.push_back(cs.find_wire("geq/diff/b" + std::to_string(k)));
  const std::uint32_t out_wire = cs.index_of(pub);

  for (std::uint64_t i = 0; i < 64; ++i) {
    for (std::uint64_t j = 0; j < 64; ++j) {
      Witness w = cs.generate_witness({{"x", f(i)}, {"y", f(j)}});
      CHECK(w[out_wire] == (i >= j ? Fr::one() : Fr::zero()));
      // Every assignment of the difference bits: any satisfying one yields the true output.
      for (std::uint32_t mask = 0; mask < (1u << (kBits + 1)); ++mask) {
        Witness t = w;
        for (unsigned k = 0; k <= kBits; ++k) t[diff_wires[k]] = f((mask >> k) & 1);
        t[out_wire] = t[diff_wires[kBits]];
        if (cs.is_satisfied(t)) CHECK(t[out_wire] == (i >= j ? Fr::one() : Fr::zero()));
      }
    }
  }
  CHECK(cs.generate_witness({{"x", f(20)}, {"y", f(25)}})[out_wire] == Fr::zero());
  // Out-of-range operands are rejected by the range checks.
  CHECK_THROWS_AS(cs.generate_witness({{"x", f(64)}, {"y", f(1)}}), InvalidWitness);
}

TEST_CASE("geq against a constant and the stop-sign comparator example") {
  Builder b;
  Var x = b.alloc_private("x");
  Var out = g::geq(b, x, LC::constant(75), 8);
  b.output("out", out);
  CHECK_THROWS_AS(g::geq(b, x, LC::constant(300), 8), UsageError);
  ConstraintSystem cs = b.finalize();
  CHECK(cs.generate_witness({{"x", f(80)}})[cs.find_wire("out")] == Fr::one());
  CHECK(cs.generate_witness({{"x", f(75)}})[cs.find_wire("out")] == Fr::one());
  CHECK(cs.generate_witness({{"x", f(74)}})[cs.find_wire("out")] == Fr::zero());
}

TEST_CASE("boolean gates follow their truth tables and reject forged outputs") {
  Builder b;
  Var x = b.alloc_private("x");
  Var y = b.alloc_private("y");
  g::assert_boolean(b, x);
  g::assert_boolean(b, y);
  Var a = g::and_gate(b, x, y);
  Var o = g::or_gate(b, x, y);
  Var on = g::or_gate(b, g::not_gate(x), y, "or_not");
  ConstraintSystem cs = b.finalize();
  for (std::uint64_t i = 0; i < 2; ++i) {
    for (std::uint64_t j = 0; j < 2; ++j) {
      Witness w = cs.generate_witness({{"x", f(i)}, {"y", f(j)}});
      CHECK(w[cs.index_of(a)] == f(i & j));
      CHECK(w[cs.index_of(o)] == f(i | j));
      CHECK(w[cs.index_of(on)] == f((1 - i) | j));
      for (Var gate : {a, o, on}) {
        Witness t = w;
        t[cs.index_of(gate)] = Fr::one() - t[cs.index_of(gate)];
        CHECK(!cs.is_satisfied(t));
      }
    }
  }
}

TEST_CASE("overrides pin wires and the first failing row is reported") {
  Builder b;
  Var x = b.alloc_private("x");
  Var y = b.alloc_private("y");
  Var eq = g::is_equal(b, x, y, "eq");
  Var out = b.compute("out", [eq](const SolverContext& c) { return c.get(eq); }, Visibility::kPublic);
  b.enforce_equal(out, eq, "copy");
  ConstraintSystem cs = b.finalize();
  Witness honest = cs.generate_witness({{"x", f(4)}, {"y", f(4)}});
  CHECK(honest[cs.find_wire("out")] == Fr::one());
  Witness pinned = cs.solve({{"x", f(4)}, {"y", f(4)}}, {{"out", Fr::zero()}});
  CHECK(pinned[cs.find_wire("out")] == Fr::zero());
  CHECK(cs.first_unsatisfied(pinned) == std::optional<std::size_t>(2));
  CHECK_THROWS_AS(cs.solve({{"x", f(4)}, {"y", f(4)}}, {{"nope", Fr::zero()}}), UsageError);
}

TEST_CASE("select and mul") {
  Builder b;
  Var c = b.alloc_private("c");
  Var x = b.alloc_private("x");
  Var y = b.alloc_private("y");
  Var s = g::select(b, c, x, y);
  Var p = g::mul(b, x, y);
  ConstraintSystem cs = b.finalize();
  Witness w1 = cs.generate_witness({{"c", f(1)}, {"x", f(7)}, {"y", f(9)}});
  CHECK(w1[cs.index_of(s)] == f(7));
  CHECK(w1[cs.index_of(p)] == f(63));
  Witness w0 = cs.generate_witness({{"c", f(0)}, {"x", f(7)}, {"y", f(9)}});
  CHECK(w0[cs.index_of(s)] == f(9));
}

TEST_CASE("random gadget systems satisfy the Hadamard oracle") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    Builder b;
    std::vector<LC> vals;
    for (int i = 0; i < 4; ++i) vals.push_back(b.alloc_private("in" + std::to_string(i)));
    for (int k = 0; k < 12; ++k) {
      const LC& u = vals[rng.uniform(vals.size())];
      const LC& v = vals[rng.uniform(vals.size())];
      switch (rng.uniform(4)) {
        case 0: vals.push_back(g::mul(b, u, v, "m" + std::to_string(k))); break;
        case 1: vals.push_back(g::is_equal(b, u, v, "e" + std::to_string(k))); break;
        case 2: vals.push_back(u + v * Fr::random(rng)); break;
        default: vals.push_back(g::select(b, g::is_equal(b, u, v, "c" + std::to_string(k)), u, v,
                                          "s" + std::to_string(k)));
      }
    }
    ConstraintSystem cs = b.finalize();
    Assignment in;
    for (int i = 0; i < 4; ++i) in["in" + std::to_string(i)] = f(rng.uniform(3));
    Witness w = cs.generate_witness(in);
    CHECK(hadamard_oracle(cs, w));
    if (cs.num_wires() > 5) {
      std::size_t idx = 5 + rng.uniform(cs.num_wires() - 5);
      Witness t = w;
      t[idx] += Fr::one();
      CHECK(cs.is_satisfied(t) == hadamard_oracle(cs, t));
    }
  }
}

TEST_CASE("R1CS file roundtrip and hash stability") {
  Builder b;
  Var x = b.alloc_public("x");
  Var y = b.alloc_private("y");
  g::geq(b, x, y, 8);
  g::is_equal(b, x, LC::constant(11));
  ConstraintSystem cs = b.finalize();
  Bytes bytes = cs.serialize();
  CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "HSR1");
  ConstraintSystem back = ConstraintSystem::deserialize(bytes);
  CHECK(back.num_constraints() == cs.num_constraints());
  CHECK(back.num_wires() == cs.num_wires());
  CHECK(back.num_public() == cs.num_public());
  CHECK(back.serialize() == bytes);
  CHECK(back.hash() == cs.hash());
  for (std::size_t i = 0; i < cs.num_constraints(); ++i) {
    CHECK(back.constraint(i).a == cs.constraint(i).a);
    CHECK(back.constraint(i).c == cs.constraint(i).c);
  }
  Witness w = cs.generate_witness({{"x", f(9)}, {"y", f(3)}});
  CHECK(back.is_satisfied(w));
  CHECK_THROWS_AS(back.solve({}), UsageError);

  Bytes truncated(bytes.begin(), bytes.end() - 1);
  CHECK_THROWS_AS(ConstraintSystem::deserialize(truncated), ParseError);
  Bytes bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_AS(ConstraintSystem::deserialize(bad), ParseError);
}

TEST_CASE("gadget constraint counts are pinned") {
  auto count = [](auto&& fn) {
    Builder b;
    Var x = b.alloc_private("x");
    Var y = b.alloc_private("y");
    fn(b, x, y);
    return b.num_constraints();
  };
  CHECK(count([](Builder& b, Var x, Var y) { g::is_equal(b, x, y); }) == 2);
  CHECK(count([](Builder& b, Var x, Var y) { g::geq(b, x, y, 16); }) == 52);
  CHECK(count([](Builder& b, Var x, Var y) { g::geq(b, x, y, 32, g::RangeCheck::kNone); }) == 34);
  CHECK(count([](Builder& b, Var x, Var) { g::geq(b, x, LC::constant(75), 16); }) == 35);
  CHECK(count([](Builder& b, Var x, Var y) { g::or_gate(b, x, y); }) == 1);
  CHECK(count([](Builder& b, Var x, Var) { g::bit_decompose(b, x, 32); }) == 33);
}
