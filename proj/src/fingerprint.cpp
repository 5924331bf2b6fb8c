#include "molpipe/fingerprint.h"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <string>

#include "molpipe/element.h"
#include "molpipe/error.h"
#include "molpipe/hash.h"
#include "molpipe/molgraph.h"
#include "molpipe/resources.h"
#include "molpipe/simd/bitops.h"
#include "molpipe/smarts.h"
#include "molpipe/smiles.h"

namespace molpipe {
namespace {

constexpr int kMorganRadius = 2;
constexpr int kMaxPathBonds = 7;

std::uint64_t bond_code(BondOrder order) {
  return static_cast<std::uint64_t>(order);
}

std::uint64_t morgan_invariant(const Molecule &mol, int i) {
  const Atom &a = mol.atom(i);
  std::uint64_t h = 0x6d6f7267616eULL;
  h = hash_combine(h, a.element);
  h = hash_combine(h, static_cast<std::uint64_t>(mol.degree(i)));
  h = hash_combine(h, a.hydrogens);
  h = hash_combine(h, static_cast<std::uint64_t>(a.formal_charge + 128));
  h = hash_combine(h, mol.atom_in_ring(i) ? 1 : 0);
  h = hash_combine(h, a.isotope);
  h = hash_combine(h, a.link_label);
  return hash_combine(h, a.aromatic ? 1 : 0);
}

void morgan(const Molecule &mol, FingerprintBitset &fp) {
  const int n = mol.num_atoms();
  std::vector<std::uint64_t> ids(n), next(n);
  for (int i = 0; i < n; ++i) {
    ids[i] = morgan_invariant(mol, i);
    fp.set(ids[i]);
  }
  std::vector<std::pair<std::uint64_t, std::uint64_t>> env;
  for (int r = 1; r <= kMorganRadius; ++r) {
    for (int i = 0; i < n; ++i) {
      env.clear();
      for (const Neighbor &nb: mol.neighbors(i))
        env.emplace_back(bond_code(mol.bond(nb.bond).order), ids[nb.atom]);
      std::sort(env.begin(), env.end());
      std::uint64_t h = hash_combine(static_cast<std::uint64_t>(r), ids[i]);
      for (const auto &[b, id]: env)
        h = hash_combine(hash_combine(h, b), id);
      next[i] = h;
      fp.set(h);
    }
    ids.swap(next);
  }
}

std::uint64_t path_atom(const Molecule &mol, int i) {
  const Atom &a = mol.atom(i);
  return (static_cast<std::uint64_t>(a.element) << 8)
         | (a.aromatic ? 1u : 0u) | (static_cast<std::uint64_t>(a.link_label) << 1);
}

std::uint64_t hash_sequence(const std::vector<std::uint64_t> &seq) {
  std::uint64_t h = 0x70617468ULL;
  for (std::uint64_t v: seq)
    h = hash_combine(h, v);
  return h;
}

// seq alternates atom, bond, atom, ...; a path and its reverse hash alike.
std::uint64_t path_hash(std::vector<std::uint64_t> &seq,
                        std::vector<std::uint64_t> &scratch) {
  scratch.assign(seq.rbegin(), seq.rend());
  return std::min(hash_sequence(seq), hash_sequence(scratch));
}

void path(const Molecule &mol, FingerprintBitset &fp) {
  const int n = mol.num_atoms();
  std::vector<char> on_path(n, 0);
  std::vector<std::uint64_t> seq, scratch;
  auto dfs = [&](auto &&self, int atom, int bonds) -> void {
    if (bonds > 0)
      fp.set(path_hash(seq, scratch));
    if (bonds == kMaxPathBonds)
      return;
    for (const Neighbor &nb: mol.neighbors(atom)) {
      if (on_path[nb.atom])
        continue;
      on_path[nb.atom] = 1;
      seq.push_back(bond_code(mol.bond(nb.bond).order) | 0x100000ULL);
      seq.push_back(path_atom(mol, nb.atom));
      self(self, nb.atom, bonds + 1);
      seq.resize(seq.size() - 2);
      on_path[nb.atom] = 0;
    }
  };
  for (int i = 0; i < n; ++i) {
    on_path[i] = 1;
    seq.assign(1, path_atom(mol, i));
    dfs(dfs, i, 0);
    on_path[i] = 0;
  }
}

struct StructuralKey {
  enum class Kind { kElement, kRing, kAromaticRings, kSmarts } kind;
  int element = 0;
  int ring_size = 0;
  SmartsPattern pattern;
  int min = 1;
};

int parse_int(std::string_view text, int line) {
  int v = 0;
  const auto [p, ec] =
      std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size() || v < 1)
    throw FormatError("structural keys line " + std::to_string(line)
                      + ": bad count '" + std::string(text) + "'");
  return v;
}

std::vector<StructuralKey> parse_keys(std::string_view text) {
  std::vector<StructuralKey> keys;
  std::istringstream in { std::string(text) };
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r')
      raw.pop_back();
    if (raw.empty() || raw.front() == '#')
      continue;
    std::vector<std::string> cols;
    std::istringstream fields(raw);
    for (std::string f; std::getline(fields, f, '\t');)
      cols.push_back(f);
    if (cols.size() != 3)
      throw FormatError("structural keys line " + std::to_string(line_no)
                        + ": expected 3 columns");
    StructuralKey key;
    key.min = parse_int(cols[2], line_no);
    if (cols[0] == "element") {
      key.kind = StructuralKey::Kind::kElement;
      const Element *e = find_element(cols[1]);
      if (!e)
        throw FormatError("structural keys line " + std::to_string(line_no)
                          + ": unknown element " + cols[1]);
      key.element = e->number;
    } else if (cols[0] == "ring") {
      key.kind = StructuralKey::Kind::kRing;
      key.ring_size = parse_int(cols[1], line_no);
    } else if (cols[0] == "aromatic_rings") {
      key.kind = StructuralKey::Kind::kAromaticRings;
    } else if (cols[0] == "smarts") {
      key.kind = StructuralKey::Kind::kSmarts;
      try {
        key.pattern = SmartsPattern::compile(cols[1]);
      } catch (const SyntaxError &e) {
        throw FormatError("structural keys line " + std::to_string(line_no)
                          + ": " + e.what());
      }
    } else {
      throw FormatError("structural keys line " + std::to_string(line_no)
                        + ": unknown key kind " + cols[0]);
    }
    keys.push_back(std::move(key));
  }
  return keys;
}

const std::vector<StructuralKey> &builtin_keys() {
  static const std::vector<StructuralKey> keys =
      parse_keys(resources::structural_keys());
  return keys;
}

void keys(const Molecule &input, FingerprintBitset &fp) {
  const auto &table = builtin_keys();
  if (static_cast<int>(table.size()) > fp.width())
    throw DomainError("structural key table is wider than the fingerprint");
  // Ring sets depend on atom order, so count on the canonical numbering.
  const Molecule mol = input.renumbered(canonical_form(input).atom_order);
  std::vector<int> element_counts(256, 0);
  for (const Atom &a: mol.atoms()) {
    ++element_counts[a.element];
    if (a.hydrogens)
      element_counts[1] += a.hydrogens;
  }
  int aromatic_rings = 0;
  for (const auto &ring: mol.rings())
    if (std::all_of(ring.begin(), ring.end(),
                    [&](int i) { return mol.atom(i).aromatic; }))
      ++aromatic_rings;

  for (std::size_t k = 0; k < table.size(); ++k) {
    const StructuralKey &key = table[k];
    bool on = false;
    switch (key.kind) {
      case StructuralKey::Kind::kElement:
        on = element_counts[key.element] >= key.min;
        break;
      case StructuralKey::Kind::kRing:
        on = std::count_if(mol.rings().begin(), mol.rings().end(),
                           [&](const auto &r) {
                             return static_cast<int>(r.size()) == key.ring_size;
                           })
             >= key.min;
        break;
      case StructuralKey::Kind::kAromaticRings:
        on = aromatic_rings >= key.min;
        break;
      case StructuralKey::Kind::kSmarts:
        on = key.pattern.count_unique(mol, key.min) >= key.min;
        break;
    }
    if (on)
      fp.set(k);
  }
}

}  // namespace

std::string_view to_string(FingerprintScheme s) {
  switch (s) {
    case FingerprintScheme::kMorgan: return "morgan";
    case FingerprintScheme::kPath: return "path";
    case FingerprintScheme::kKeys: return "keys";
  }
  return "?";
}

FingerprintScheme parse_fingerprint_scheme(std::string_view text) {
  if (text == "morgan")
    return FingerprintScheme::kMorgan;
  if (text == "path")
    return FingerprintScheme::kPath;
  if (text == "keys")
    return FingerprintScheme::kKeys;
  throw DomainError("unknown fingerprint scheme '" + std::string(text) + "'");
}

FingerprintBitset::FingerprintBitset(FingerprintScheme scheme, int width)
    : scheme_(scheme), width_(width) {
  if (width <= 0 || (width & (width - 1)) != 0)
    throw DomainError("fingerprint width must be a positive power of two, got "
                      + std::to_string(width));
  words_.assign((static_cast<std::size_t>(width) + 63) / 64, 0);
}

void FingerprintBitset::set(std::uint64_t bit) {
  bit &= static_cast<std::uint64_t>(width_ - 1);
  words_[bit / 64] |= std::uint64_t { 1 } << (bit % 64);
}

bool FingerprintBitset::test(int bit) const {
  if (bit < 0 || bit >= width_)
    return false;
  return (words_[bit / 64] >> (bit % 64)) & 1;
}

int FingerprintBitset::count() const {
  return static_cast<int>(simd::popcount(words_.data(), words_.size()));
}

FingerprintBitset fingerprint(const Molecule &mol, FingerprintScheme scheme,
                              int width) {
  FingerprintBitset fp(scheme, width);
  const ValidityReport report = validate(mol);
  if (!report.valid)
    throw DomainError("cannot fingerprint an invalid molecule: atom "
                      + std::to_string(report.failures.front().atom) + " "
                      + report.failures.front().reason);
  switch (scheme) {
    case FingerprintScheme::kMorgan: morgan(mol, fp); break;
    case FingerprintScheme::kPath: path(mol, fp); break;
    case FingerprintScheme::kKeys: keys(mol, fp); break;
  }
  return fp;
}

double tanimoto(const FingerprintBitset &a, const FingerprintBitset &b) {
  if (a.scheme() != b.scheme() || a.width() != b.width())
    throw DomainError("tanimoto: fingerprints differ in scheme or width");
  const simd::BitCounts c =
      simd::and_or(a.words().data(), b.words().data(), a.words().size());
  if (c.either == 0)
    return 1.0;
  return static_cast<double>(c.both) / static_cast<double>(c.either);
}

int structural_key_count() {
  return static_cast<int>(builtin_keys().size());
}

}  // namespace molpipe
