#include "hermes/commitment/sponge_gadget.hpp"

#include "hermes/r1cs/gadgets.hpp"

namespace hermes::commitment {

using r1cs::Builder;
using r1cs::LC;

namespace {

unsigned sbox_cost(unsigned alpha) {
  unsigned cost = 0;
  for (unsigned e = alpha; e > 1; e >>= 1) cost += (e & 1) ? 2 : 1;
  return cost;
}

LC sbox_gadget(Builder& b, const LC& x, unsigned alpha, const std::string& label) {
  // Left-to-right square-and-multiply; the top bit of alpha starts the chain at x.
  unsigned top = 31 - static_cast<unsigned>(__builtin_clz(alpha));
  LC acc = x;
  for (unsigned i = top; i-- > 0;) {
    acc = r1cs::gadgets::mul(b, acc, acc, label + "/sq" + std::to_string(i));
    if ((alpha >> i) & 1) acc = r1cs::gadgets::mul(b, acc, x, label + "/mul" + std::to_string(i));
  }
  return acc;
}

void permute_gadget(Builder& b, std::array<LC, kWidth>& s, const SpongeParams<Fr>& p, const std::string& label) {
  for (unsigned r = 0; r < p.total_rounds(); ++r) {
    for (std::size_t i = 0; i < kWidth; ++i) s[i] += LC::constant(p.round_constants[r][i]);
    const std::string round = label + "/r" + std::to_string(r);
    if (p.is_full_round(r)) {
      for (std::size_t i = 0; i < kWidth; ++i) s[i] = sbox_gadget(b, s[i], p.alpha, round + "/s" + std::to_string(i));
    } else {
      s[0] = sbox_gadget(b, s[0], p.alpha, round + "/s0");
    }
    std::array<LC, kWidth> t;
    for (std::size_t i = 0; i < kWidth; ++i)
      for (std::size_t j = 0; j < kWidth; ++j) t[i] += s[j] * p.mds[i][j];
    s = t;
  }
}

std::size_t permutations(std::size_t num_inputs) { return num_inputs == 0 ? 1 : (num_inputs + kRate - 1) / kRate; }

}  // namespace

LC sponge_gadget(Builder& b, const std::vector<LC>& inputs, const std::string& label) {
  const auto& p = SpongeParams<Fr>::standard();
  std::array<LC, kWidth> s{LC::constant(capacity_pad<Fr>(inputs.size())), LC(), LC()};
  std::size_t i = 0, block = 0;
  do {
    for (std::size_t k = 0; k < kRate && i < inputs.size(); ++k, ++i) s[1 + k] += inputs[i];
    permute_gadget(b, s, p, label + "/p" + std::to_string(block++));
  } while (i < inputs.size());
  return s[1];
}

std::size_t sponge_gadget_cost(std::size_t num_inputs) {
  const auto& p = SpongeParams<Fr>::standard();
  std::size_t per_round_full = kWidth * sbox_cost(p.alpha);
  std::size_t per_perm = p.full_rounds * per_round_full + p.partial_rounds * sbox_cost(p.alpha);
  return permutations(num_inputs) * per_perm;
}

}  // namespace hermes::commitment
