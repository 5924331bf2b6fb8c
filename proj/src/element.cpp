#include "molpipe/element.h"

#include <array>
#include <cstdlib>
#include <string>
#include <unordered_map>

namespace molpipe {
namespace {

constexpr std::uint8_t kV0[] = { 0 };
constexpr std::uint8_t kV1[] = { 1 };
constexpr std::uint8_t kV2[] = { 2 };
constexpr std::uint8_t kV3[] = { 3 };
constexpr std::uint8_t kV4[] = { 4 };
constexpr std::uint8_t kV35[] = { 3, 5 };
constexpr std::uint8_t kV246[] = { 2, 4, 6 };
constexpr std::uint8_t kV135[] = { 1, 3, 5 };

using V = std::span<const std::uint8_t>;

const std::array<Element, 87> kTable = { {
  { 0, "*", 0.0, V {} },
  { 1, "H", 1.008, kV1 },
  { 2, "He", 4.0026, V(kV0) },
  { 3, "Li", 6.94, V {} },
  { 4, "Be", 9.0122, V {} },
  { 5, "B", 10.81, kV3 },
  { 6, "C", 12.011, kV4 },
  { 7, "N", 14.007, kV3 },
  { 8, "O", 15.999, kV2 },
  { 9, "F", 18.998, kV1 },
  { 10, "Ne", 20.180, V(kV0) },
  { 11, "Na", 22.990, V {} },
  { 12, "Mg", 24.305, V {} },
  { 13, "Al", 26.982, V {} },
  { 14, "Si", 28.085, kV4 },
  { 15, "P", 30.974, kV35 },
  { 16, "S", 32.06, kV246 },
  { 17, "Cl", 35.45, kV1 },
  { 18, "Ar", 39.95, V(kV0) },
  { 19, "K", 39.098, V {} },
  { 20, "Ca", 40.078, V {} },
  { 21, "Sc", 44.956, V {} },
  { 22, "Ti", 47.867, V {} },
  { 23, "V", 50.942, V {} },
  { 24, "Cr", 51.996, V {} },
  { 25, "Mn", 54.938, V {} },
  { 26, "Fe", 55.845, V {} },
  { 27, "Co", 58.933, V {} },
  { 28, "Ni", 58.693, V {} },
  { 29, "Cu", 63.546, V {} },
  { 30, "Zn", 65.38, V {} },
  { 31, "Ga", 69.723, V {} },
  { 32, "Ge", 72.630, kV4 },
  { 33, "As", 74.922, kV35 },
  { 34, "Se", 78.971, kV246 },
  { 35, "Br", 79.904, kV1 },
  { 36, "Kr", 83.798, V(kV0) },
  { 37, "Rb", 85.468, V {} },
  { 38, "Sr", 87.62, V {} },
  { 39, "Y", 88.906, V {} },
  { 40, "Zr", 91.224, V {} },
  { 41, "Nb", 92.906, V {} },
  { 42, "Mo", 95.95, V {} },
  { 43, "Tc", 97.0, V {} },
  { 44, "Ru", 101.07, V {} },
  { 45, "Rh", 102.91, V {} },
  { 46, "Pd", 106.42, V {} },
  { 47, "Ag", 107.87, V {} },
  { 48, "Cd", 112.41, V {} },
  { 49, "In", 114.82, V {} },
  { 50, "Sn", 118.71, V {} },
  { 51, "Sb", 121.76, kV35 },
  { 52, "Te", 127.60, kV246 },
  { 53, "I", 126.90, kV135 },
  { 54, "Xe", 131.29, V(kV0) },
  { 55, "Cs", 132.91, V {} },
  { 56, "Ba", 137.33, V {} },
  { 57, "La", 138.91, V {} },
  { 58, "Ce", 140.12, V {} },
  { 59, "Pr", 140.91, V {} },
  { 60, "Nd", 144.24, V {} },
  { 61, "Pm", 145.0, V {} },
  { 62, "Sm", 150.36, V {} },
  { 63, "Eu", 151.96, V {} },
  { 64, "Gd", 157.25, V {} },
  { 65, "Tb", 158.93, V {} },
  { 66, "Dy", 162.50, V {} },
  { 67, "Ho", 164.93, V {} },
  { 68, "Er", 167.26, V {} },
  { 69, "Tm", 168.93, V {} },
  { 70, "Yb", 173.05, V {} },
  { 71, "Lu", 174.97, V {} },
  { 72, "Hf", 178.49, V {} },
  { 73, "Ta", 180.95, V {} },
  { 74, "W", 183.84, V {} },
  { 75, "Re", 186.21, V {} },
  { 76, "Os", 190.23, V {} },
  { 77, "Ir", 192.22, V {} },
  { 78, "Pt", 195.08, V {} },
  { 79, "Au", 196.97, V {} },
  { 80, "Hg", 200.59, V {} },
  { 81, "Tl", 204.38, V {} },
  { 82, "Pb", 207.2, V {} },
  { 83, "Bi", 208.98, V {} },
  { 84, "Po", 209.0, V {} },
  { 85, "At", 210.0, V {} },
  { 86, "Rn", 222.0, V(kV0) },
} };

int group_of(int number) {
  switch (number) {
  case 5: case 13: case 31: case 49:
    return 13;
  case 6: case 14: case 32: case 50:
    return 14;
  case 7: case 15: case 33: case 51:
    return 15;
  case 8: case 16: case 34: case 52:
    return 16;
  case 9: case 17: case 35: case 53:
    return 17;
  case 1:
    return 1;
  default:
    return 0;
  }
}

}  // namespace

const Element &element(int number) {
  if (number < 0 || number >= static_cast<int>(kTable.size()))
    std::abort();
  return kTable[number];
}

const Element *find_element(std::string_view symbol) {
  static const std::unordered_map<std::string_view, const Element *> index =
      [] {
        std::unordered_map<std::string_view, const Element *> m;
        for (const Element &e: kTable)
          m.emplace(e.symbol, &e);
        return m;
      }();
  auto it = index.find(symbol);
  return it == index.end() ? nullptr : it->second;
}

int element_count() noexcept {
  return static_cast<int>(kTable.size());
}

bool is_organic_subset(int number) noexcept {
  switch (number) {
  case 0: case 5: case 6: case 7: case 8: case 9:
  case 15: case 16: case 17: case 35: case 53:
    return true;
  default:
    return false;
  }
}

bool is_aromatic_capable(int number) noexcept {
  switch (number) {
  case 5: case 6: case 7: case 8: case 15: case 16:
  case 33: case 34: case 52:
    return true;
  default:
    return false;
  }
}

int ValenceSet::at_least(int v) const noexcept {
  for (int i = 0; i < size; ++i)
    if (values[i] >= v)
      return values[i];
  return -1;
}

ValenceSet allowed_valences(int number, int formal_charge) {
  ValenceSet out;
  const Element &e = element(number);
  if (e.valences.empty())
    return out;
  out.checked = true;

  const int q = formal_charge;
  for (std::uint8_t base: e.valences) {
    int v = base;
    switch (group_of(number)) {
    case 13:
      v = base - q;
      break;
    case 14:
    case 1:
      v = base - std::abs(q);
      break;
    case 15:
    case 16:
    case 17:
      v = base + q;
      break;
    default:
      v = base;
      break;
    }
    if (v < 0 || out.size == 4)
      continue;
    out.values[out.size++] = static_cast<std::uint8_t>(v);
  }
  return out;
}

}  // namespace molpipe
