#include <array>
#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "aromaticity.h"
#include "molpipe/element.h"
#include "molpipe/error.h"
#include "molpipe/smiles.h"

namespace molpipe {

int organic_implicit_hydrogens(int element_number, bool aromatic,
                               int bond_sum) {
  if (element_number == kDummyElement)
    return 0;
  const ValenceSet allowed = allowed_valences(element_number, 0);
  if (!allowed.checked)
    return 0;
  const bool pi = aromatic
                  && (element_number == 5 || element_number == 6
                      || element_number == 7 || element_number == 15
                      || element_number == 33);
  const int need = bond_sum + (pi ? 1 : 0);
  const int v = allowed.at_least(need);
  return v < 0 ? 0 : v - need;
}

namespace {

struct PendingBond {
  bool set = false;
  BondOrder order = BondOrder::kSingle;
  char direction = 0;
};

struct RawBond {
  Bond bond;
  bool implicit;
};

struct RingOpening {
  int atom = -1;
  PendingBond bond;
  std::size_t offset = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view text): text_(text) { }

  Molecule run();

 private:
  [[noreturn]] void fail(const std::string &message, std::size_t offset) const {
    throw SyntaxError(message, offset);
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  void add_atom(Atom atom, bool bracket, std::size_t offset);
  void parse_organic();
  void parse_bracket();
  void parse_ring_bond();
  void parse_bond_symbol();

  std::string_view text_;
  std::size_t pos_ = 0;

  std::vector<Atom> atoms_;
  std::vector<char> bracket_;
  std::vector<RawBond> bonds_;
  std::vector<std::pair<int, std::size_t>> branches_;
  std::array<RingOpening, 100> rings_ {};
  PendingBond pending_;
  std::size_t pending_offset_ = 0;
  int prev_ = -1;
};

void Parser::add_atom(Atom atom, bool bracket, std::size_t offset) {
  const int idx = static_cast<int>(atoms_.size());
  atoms_.push_back(std::move(atom));
  bracket_.push_back(bracket ? 1 : 0);
  if (prev_ >= 0) {
    Bond b { prev_, idx, pending_.order, pending_.direction };
    bonds_.push_back({ b, !pending_.set });
  } else if (pending_.set) {
    fail("bond symbol without a preceding atom", pending_offset_);
  }
  (void)offset;
  pending_ = {};
  prev_ = idx;
}

void Parser::parse_organic() {
  const std::size_t start = pos_;
  const char c = peek();
  Atom atom;
  atom.hydrogens = 0;
  int z = -1;
  switch (c) {
  case 'B':
    if (peek(1) == 'r') {
      z = 35;
      ++pos_;
    } else {
      z = 5;
    }
    break;
  case 'C':
    if (peek(1) == 'l') {
      z = 17;
      ++pos_;
    } else {
      z = 6;
    }
    break;
  case 'N': z = 7; break;
  case 'O': z = 8; break;
  case 'P': z = 15; break;
  case 'S': z = 16; break;
  case 'F': z = 9; break;
  case 'I': z = 53; break;
  case '*': z = 0; break;
  case 'b': z = 5; atom.aromatic = true; break;
  case 'c': z = 6; atom.aromatic = true; break;
  case 'n': z = 7; atom.aromatic = true; break;
  case 'o': z = 8; atom.aromatic = true; break;
  case 'p': z = 15; atom.aromatic = true; break;
  case 's': z = 16; atom.aromatic = true; break;
  default:
    fail(std::string("unknown organic-subset element '") + c + "'", start);
  }
  ++pos_;
  atom.element = static_cast<std::uint8_t>(z);
  add_atom(std::move(atom), false, start);
}

void Parser::parse_bracket() {
  const std::size_t start = pos_;
  ++pos_;  // '['
  Atom atom;

  int isotope = -1;
  while (std::isdigit(static_cast<unsigned char>(peek()))) {
    isotope = (isotope < 0 ? 0 : isotope * 10) + (peek() - '0');
    if (isotope > 999)
      fail("isotope too large", pos_);
    ++pos_;
  }

  const std::size_t sym_start = pos_;
  const char c0 = peek();
  if (c0 == '*') {
    atom.element = 0;
    ++pos_;
  } else if (std::islower(static_cast<unsigned char>(c0))) {
    // Aromatic symbols: two-letter forms first.
    const std::string two { c0, peek(1) };
    if (two == "se" || two == "as" || two == "te") {
      atom.element = static_cast<std::uint8_t>(two == "se"   ? 34
                                               : two == "as" ? 33
                                                             : 52);
      pos_ += 2;
    } else if (c0 == 'b' || c0 == 'c' || c0 == 'n' || c0 == 'o' || c0 == 'p'
               || c0 == 's') {
      const std::string one(1, static_cast<char>(std::toupper(c0)));
      atom.element = find_element(one)->number;
      ++pos_;
    } else {
      fail("unknown aromatic element in bracket atom", sym_start);
    }
    atom.aromatic = true;
  } else if (std::isupper(static_cast<unsigned char>(c0))) {
    const Element *e = nullptr;
    if (std::islower(static_cast<unsigned char>(peek(1)))) {
      e = find_element(text_.substr(pos_, 2));
      if (e != nullptr)
        pos_ += 2;
    }
    if (e == nullptr) {
      e = find_element(text_.substr(pos_, 1));
      if (e == nullptr)
        fail("unknown element in bracket atom", sym_start);
      ++pos_;
    }
    atom.element = e->number;
  } else {
    fail("bracket atom without element symbol", sym_start);
  }

  if (peek() == '@') {
    const std::size_t cs = pos_;
    ++pos_;
    if (peek() == '@') {
      ++pos_;
    } else if (std::isupper(static_cast<unsigned char>(peek()))
               && std::isupper(static_cast<unsigned char>(peek(1)))) {
      pos_ += 2;
      if (!std::isdigit(static_cast<unsigned char>(peek())))
        fail("malformed chirality class", cs);
      while (std::isdigit(static_cast<unsigned char>(peek())))
        ++pos_;
    }
    atom.chirality = std::string(text_.substr(cs, pos_ - cs));
  }

  if (peek() == 'H') {
    ++pos_;
    int h = 1;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      h = peek() - '0';
      ++pos_;
    }
    atom.hydrogens = static_cast<std::uint8_t>(h);
  }

  if (peek() == '+' || peek() == '-') {
    const char sign = peek();
    ++pos_;
    int magnitude = 1;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      magnitude = 0;
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        magnitude = magnitude * 10 + (peek() - '0');
        ++pos_;
      }
    } else {
      while (peek() == sign) {
        ++magnitude;
        ++pos_;
      }
    }
    if (magnitude > 15)
      fail("formal charge out of range", pos_);
    atom.formal_charge =
        static_cast<std::int8_t>(sign == '+' ? magnitude : -magnitude);
  }

  if (peek() == ':') {
    ++pos_;
    if (!std::isdigit(static_cast<unsigned char>(peek())))
      fail("atom class without digits", pos_);
    int cls = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      cls = cls * 10 + (peek() - '0');
      if (cls > 65535)
        fail("atom class too large", pos_);
      ++pos_;
    }
    atom.atom_map = static_cast<std::uint16_t>(cls);
  }

  if (peek() != ']')
    fail("unterminated or malformed bracket atom", start);
  ++pos_;

  if (isotope >= 0) {
    if (atom.is_dummy() && isotope >= 1 && isotope <= 16)
      atom.link_label = static_cast<std::uint8_t>(isotope);
    else
      atom.isotope = static_cast<std::uint16_t>(isotope);
  }
  add_atom(std::move(atom), true, start);
}

void Parser::parse_bond_symbol() {
  if (pending_.set)
    fail("consecutive bond symbols", pos_);
  if (prev_ < 0)
    fail("bond symbol without a preceding atom", pos_);
  pending_offset_ = pos_;
  pending_.set = true;
  switch (peek()) {
  case '-': pending_.order = BondOrder::kSingle; break;
  case '=': pending_.order = BondOrder::kDouble; break;
  case '#': pending_.order = BondOrder::kTriple; break;
  case '$': pending_.order = BondOrder::kQuadruple; break;
  case ':': pending_.order = BondOrder::kAromatic; break;
  case '/':
  case '\\':
    pending_.order = BondOrder::kSingle;
    pending_.direction = peek();
    break;
  default:
    fail("unexpected bond symbol", pos_);
  }
  ++pos_;
}

void Parser::parse_ring_bond() {
  const std::size_t start = pos_;
  if (prev_ < 0)
    fail("ring closure without a preceding atom", start);
  int number;
  if (peek() == '%') {
    if (!std::isdigit(static_cast<unsigned char>(peek(1)))
        || !std::isdigit(static_cast<unsigned char>(peek(2))))
      fail("'%' must be followed by two digits", start);
    number = (peek(1) - '0') * 10 + (peek(2) - '0');
    pos_ += 3;
  } else {
    number = peek() - '0';
    ++pos_;
  }

  RingOpening &slot = rings_[number];
  if (slot.atom < 0) {
    slot.atom = prev_;
    slot.bond = pending_;
    slot.offset = start;
    pending_ = {};
    return;
  }

  const int other = slot.atom;
  if (other == prev_)
    fail("ring closure " + std::to_string(number) + " joins an atom to itself",
         start);
  for (const RawBond &rb: bonds_) {
    if ((rb.bond.begin == other && rb.bond.end == prev_)
        || (rb.bond.begin == prev_ && rb.bond.end == other))
      fail("ring closure " + std::to_string(number)
               + " duplicates an existing bond",
           start);
  }
  PendingBond spec = slot.bond;
  if (pending_.set) {
    if (spec.set && spec.order != pending_.order)
      fail("conflicting bond symbols on ring closure "
               + std::to_string(number),
           start);
    if (!spec.set)
      spec = pending_;
  }
  Bond b { other, prev_, spec.order, spec.direction };
  bonds_.push_back({ b, !spec.set });
  slot = RingOpening {};
  pending_ = {};
}

Molecule Parser::run() {
  if (text_.empty())
    fail("empty SMILES", 0);

  while (!at_end()) {
    const char c = peek();
    if (c == '[') {
      parse_bracket();
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '*') {
      parse_organic();
    } else if (c == '(') {
      if (prev_ < 0)
        fail("branch without a preceding atom", pos_);
      if (pending_.set)
        fail("bond symbol before branch", pending_offset_);
      branches_.emplace_back(prev_, pos_);
      ++pos_;
      if (peek() == ')')
        fail("empty branch", pos_);
    } else if (c == ')') {
      if (branches_.empty())
        fail("unbalanced ')'", pos_);
      if (pending_.set)
        fail("dangling bond at end of branch", pending_offset_);
      prev_ = branches_.back().first;
      branches_.pop_back();
      ++pos_;
    } else if (c == '.') {
      if (pending_.set)
        fail("bond symbol before '.'", pending_offset_);
      prev_ = -1;
      ++pos_;
    } else if (c == '-' || c == '=' || c == '#' || c == '$' || c == ':'
               || c == '/' || c == '\\') {
      parse_bond_symbol();
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '%') {
      parse_ring_bond();
    } else {
      fail(std::string("unexpected character '") + c + "'", pos_);
    }
  }

  if (pending_.set)
    fail("dangling bond at end of input", pending_offset_);
  if (!branches_.empty())
    fail("unclosed branch", branches_.back().second);
  for (std::size_t i = 0; i < rings_.size(); ++i)
    if (rings_[i].atom >= 0)
      fail("unmatched ring closure " + std::to_string(i), rings_[i].offset);

  std::vector<Bond> bonds;
  bonds.reserve(bonds_.size());
  for (const RawBond &rb: bonds_) {
    Bond b = rb.bond;
    if (rb.implicit) {
      b.order = atoms_[b.begin].aromatic && atoms_[b.end].aromatic
                    ? BondOrder::kAromatic
                    : BondOrder::kSingle;
    }
    bonds.push_back(b);
  }

  std::vector<int> bond_sum(atoms_.size(), 0);
  for (const Bond &b: bonds) {
    bond_sum[b.begin] += valence_contribution(b.order);
    bond_sum[b.end] += valence_contribution(b.order);
  }
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (!bracket_[i])
      atoms_[i].hydrogens = static_cast<std::uint8_t>(
          organic_implicit_hydrogens(atoms_[i].element, atoms_[i].aromatic,
                                     bond_sum[i]));
  }

  Molecule mol(atoms_, bonds, std::string(text_));

  // Implicit aromatic bonds outside rings (biaryl links) are single bonds.
  bool demoted = false;
  for (std::size_t i = 0; i < bonds.size(); ++i) {
    if (bonds_[i].implicit && bonds[i].order == BondOrder::kAromatic
        && !mol.bond_in_ring(static_cast<int>(i))) {
      bonds[i].order = BondOrder::kSingle;
      demoted = true;
    }
  }
  if (demoted)
    mol = Molecule(std::move(atoms_), std::move(bonds), std::string(text_));

  return detail::perceive_aromaticity(mol);
}

}  // namespace

Molecule parse_smiles(std::string_view text) {
  return Parser(text).run();
}

}  // namespace molpipe
