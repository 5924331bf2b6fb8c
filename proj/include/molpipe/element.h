#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace molpipe {

struct Element {
  std::uint8_t number;
  std::string_view symbol;
  // IUPAC 2021 abridged standard atomic weight (conventional value for
  // interval elements).
  double weight;
  // Allowed neutral valences, ascending. Empty means "not checked" (metals,
  // noble gases).
  std::span<const std::uint8_t> valences;
};

constexpr int kDummyElement = 0;

// Element 0 is the dummy atom '*'.
const Element &element(int number);
const Element *find_element(std::string_view symbol);
int element_count() noexcept;

// Members of the SMILES organic subset may appear without brackets.
bool is_organic_subset(int number) noexcept;
// Elements that may be written as lowercase aromatic symbols.
bool is_aromatic_capable(int number) noexcept;

// Allowed valences after accounting for formal charge. Empty when the
// element is not valence-checked.
struct ValenceSet {
  std::uint8_t values[4] = {};
  std::uint8_t size = 0;
  bool checked = false;

  int max() const noexcept { return size == 0 ? -1 : values[size - 1]; }
  // Smallest allowed valence >= v, or -1.
  int at_least(int v) const noexcept;
};

ValenceSet allowed_valences(int number, int formal_charge);

}  // namespace molpipe
