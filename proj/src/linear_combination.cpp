#include <algorithm>

#include "hermes/r1cs/linear_combination.hpp"

namespace hermes::r1cs {

void LinearCombination::add_term(std::uint32_t wire, const Fr& coeff) {
  if (coeff.is_zero()) return;
  if (terms_.empty() || terms_.back().wire < wire) {
    terms_.push_back({wire, coeff});
    return;
  }
  *this += LinearCombination(Var{wire}, coeff);
}

LinearCombination LinearCombination::merged(const LinearCombination& o, const Fr& scale) const {
  LinearCombination out;
  out.terms_.reserve(terms_.size() + o.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < terms_.size() || j < o.terms_.size()) {
    if (j == o.terms_.size() || (i < terms_.size() && terms_[i].wire < o.terms_[j].wire)) {
      out.terms_.push_back(terms_[i++]);
    } else if (i == terms_.size() || o.terms_[j].wire < terms_[i].wire) {
      out.terms_.push_back({o.terms_[j].wire, o.terms_[j].coeff * scale});
      ++j;
    } else {
      Fr c = terms_[i].coeff + o.terms_[j].coeff * scale;
      if (!c.is_zero()) out.terms_.push_back({terms_[i].wire, c});
      ++i;
      ++j;
    }
  }
  return out;
}

LinearCombination& LinearCombination::operator+=(const LinearCombination& o) {
  return *this = merged(o, Fr::one());
}

LinearCombination& LinearCombination::operator-=(const LinearCombination& o) {
  return *this = merged(o, -Fr::one());
}

LinearCombination& LinearCombination::operator*=(const Fr& s) {
  if (s.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coeff *= s;
  return *this;
}

LinearCombination LinearCombination::remapped(std::span<const std::uint32_t> map) const {
  LinearCombination out;
  out.terms_.reserve(terms_.size());
  for (const auto& t : terms_) out.terms_.push_back({map[t.wire], t.coeff});
  std::sort(out.terms_.begin(), out.terms_.end(), [](const Term& a, const Term& b) { return a.wire < b.wire; });
  return out;
}

bool LinearCombination::operator==(const LinearCombination& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].wire != o.terms_[i].wire || !(terms_[i].coeff == o.terms_[i].coeff)) return false;
  }
  return true;
}

}  // namespace hermes::r1cs
