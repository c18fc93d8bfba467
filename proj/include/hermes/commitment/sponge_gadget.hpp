#pragma once

#include <string>
#include <vector>

#include "hermes/commitment/sponge.hpp"
#include "hermes/r1cs/builder.hpp"

namespace hermes::commitment {

/// In-circuit sponge over the active field. Returns the hash as a linear combination of
/// S-box output wires; every S-box costs one constraint per multiplication in its
/// square-and-multiply chain (two for x^3, three for x^5).
r1cs::LC sponge_gadget(r1cs::Builder& b, const std::vector<r1cs::LC>& inputs, const std::string& label = "sponge");

/// Constraints added by one sponge_gadget call on `num_inputs` elements.
std::size_t sponge_gadget_cost(std::size_t num_inputs);

}  // namespace hermes::commitment
