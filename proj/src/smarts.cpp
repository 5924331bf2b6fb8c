#include "molpipe/smarts.h"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <string>

#include "molpipe/element.h"
#include "molpipe/error.h"

namespace molpipe {
namespace {

enum class Op : std::uint8_t { kLeaf, kNot, kAnd, kOr };

enum class AtomKind : std::uint8_t {
  kAny,
  kElement,  // value = Z, arg = -1 any, 0 aliphatic, 1 aromatic
  kAromatic,
  kAliphatic,
  kDegree,
  kTotalH,
  kConnectivity,
  kValence,
  kRingCount,  // value < 0: any ring membership
  kRingSize,   // value < 0: any ring membership
  kCharge,
  kIsotope,
  kRecursive,  // value = index into recursive patterns
};

enum class BondKind : std::uint8_t {
  kAny,
  kSingle,
  kDouble,
  kTriple,
  kAromatic,
  kRing,
  kDefault,  // single or aromatic
};

template <class Kind>
struct Node {
  Op op = Op::kLeaf;
  Kind kind {};
  int value = 0;
  int arg = 0;
  int lhs = -1;
  int rhs = -1;
};

using AtomNode = Node<AtomKind>;
using BondNode = Node<BondKind>;

struct PatternBond {
  int a;
  int b;
  int expr;  // root in bond_nodes
};

}  // namespace

struct SmartsPattern::Impl {
  std::string text;
  std::vector<AtomNode> atom_nodes;
  std::vector<BondNode> bond_nodes;
  std::vector<int> atom_expr;  // root per pattern atom
  std::vector<PatternBond> bonds;
  // For atom i > 0, the bond (index into bonds) linking it to an earlier
  // atom; matching extends along these.
  std::vector<int> parent_bond;
  std::vector<SmartsPattern> recursive;

  bool atom_ok(const Molecule &mol, int node, int atom) const;
  bool bond_ok(const Molecule &mol, int node, int bond) const;
  bool extend(const Molecule &mol, std::vector<int> &map,
              std::vector<char> &used, int next,
              const std::function<bool()> &on_match) const;
  bool search(const Molecule &mol, int start,
              const std::function<bool()> &on_match,
              std::vector<int> &map) const;
};

namespace {

int element_number(std::string_view symbol) {
  const Element *e = find_element(symbol);
  return e ? e->number : 0;
}

int explicit_h_neighbors(const Molecule &mol, int atom) {
  int n = 0;
  for (const Neighbor &nb: mol.neighbors(atom))
    if (mol.atom(nb.atom).element == 1)
      ++n;
  return n;
}

class Parser {
 public:
  Parser(std::string_view text, SmartsPattern::Impl &impl)
      : text_(text), impl_(impl) { }

  void parse() {
    if (text_.empty())
      throw SyntaxError("empty SMARTS", 0);
    int prev = -1;
    int pending_bond = -1;
    std::vector<int> branch_stack;
    std::vector<std::pair<int, int>> open_rings(100, { -1, -1 });
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '(') {
        if (prev < 0)
          fail("branch without a preceding atom");
        branch_stack.push_back(prev);
        ++pos_;
      } else if (c == ')') {
        if (branch_stack.empty())
          fail("unbalanced ')'");
        if (pending_bond >= 0)
          fail("dangling bond");
        prev = branch_stack.back();
        branch_stack.pop_back();
        ++pos_;
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '%') {
        if (prev < 0)
          fail("ring closure without a preceding atom");
        const int digit = ring_digit();
        auto &slot = open_rings[digit];
        if (slot.first < 0) {
          slot = { prev, pending_bond };
        } else {
          if (slot.first == prev)
            fail("ring closure to the same atom");
          int expr = pending_bond >= 0 ? pending_bond : slot.second;
          if (expr < 0)
            expr = leaf_bond(BondKind::kDefault);
          impl_.bonds.push_back({ slot.first, prev, expr });
          slot = { -1, -1 };
        }
        pending_bond = -1;
      } else if (is_bond_char(c)) {
        if (pending_bond >= 0)
          fail("two bond expressions in a row");
        pending_bond = bond_expression();
      } else if (c == '.') {
        fail("disconnected patterns are not supported");
      } else {
        const int atom = atom_expression();
        if (prev >= 0) {
          const int expr =
              pending_bond >= 0 ? pending_bond : leaf_bond(BondKind::kDefault);
          impl_.bonds.push_back({ prev, atom, expr });
          impl_.parent_bond[atom] = static_cast<int>(impl_.bonds.size()) - 1;
        } else if (atom != 0) {
          fail("disconnected patterns are not supported");
        }
        pending_bond = -1;
        prev = atom;
      }
    }
    if (!branch_stack.empty())
      fail("unclosed branch");
    if (pending_bond >= 0)
      fail("dangling bond");
    for (int d = 0; d < 100; ++d)
      if (open_rings[d].first >= 0)
        throw SyntaxError("unmatched ring closure " + std::to_string(d),
                          text_.size());
  }

 private:
  [[noreturn]] void fail(const std::string &what) const {
    throw SyntaxError(what, pos_);
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  static bool is_bond_char(char c) {
    return c == '-' || c == '=' || c == '#' || c == ':' || c == '~'
           || c == '@' || c == '/' || c == '\\' || c == '!';
  }

  int number(int fallback) {
    if (!std::isdigit(static_cast<unsigned char>(peek())))
      return fallback;
    int v = 0;
    while (std::isdigit(static_cast<unsigned char>(peek())))
      v = v * 10 + (text_[pos_++] - '0');
    return v;
  }

  int ring_digit() {
    if (peek() == '%') {
      ++pos_;
      if (pos_ + 2 > text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))
          || !std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))
        fail("bad %nn ring closure");
      const int d = (text_[pos_] - '0') * 10 + (text_[pos_ + 1] - '0');
      pos_ += 2;
      return d;
    }
    return text_[pos_++] - '0';
  }

  // -- bonds ---------------------------------------------------------------

  int leaf_bond(BondKind kind) {
    BondNode n;
    n.kind = kind;
    impl_.bond_nodes.push_back(n);
    return static_cast<int>(impl_.bond_nodes.size()) - 1;
  }

  template <class N>
  static int combine(std::vector<N> &nodes, Op op, int lhs, int rhs) {
    N n;
    n.op = op;
    n.lhs = lhs;
    n.rhs = rhs;
    nodes.push_back(n);
    return static_cast<int>(nodes.size()) - 1;
  }

  int bond_expression() { return bond_low_and(); }

  int bond_low_and() {
    int lhs = bond_or();
    while (peek() == ';') {
      ++pos_;
      lhs = combine(impl_.bond_nodes, Op::kAnd, lhs, bond_or());
    }
    return lhs;
  }

  int bond_or() {
    int lhs = bond_high_and();
    while (peek() == ',') {
      ++pos_;
      lhs = combine(impl_.bond_nodes, Op::kOr, lhs, bond_high_and());
    }
    return lhs;
  }

  int bond_high_and() {
    int lhs = bond_not();
    while (true) {
      if (peek() == '&') {
        ++pos_;
        lhs = combine(impl_.bond_nodes, Op::kAnd, lhs, bond_not());
      } else if (is_bond_char(peek())) {
        lhs = combine(impl_.bond_nodes, Op::kAnd, lhs, bond_not());
      } else {
        return lhs;
      }
    }
  }

  int bond_not() {
    if (peek() == '!') {
      ++pos_;
      return combine(impl_.bond_nodes, Op::kNot, bond_not(), -1);
    }
    const char c = peek();
    ++pos_;
    switch (c) {
    case '-':
    case '/':
    case '\\':
      return leaf_bond(BondKind::kSingle);
    case '=':
      return leaf_bond(BondKind::kDouble);
    case '#':
      return leaf_bond(BondKind::kTriple);
    case ':':
      return leaf_bond(BondKind::kAromatic);
    case '~':
      return leaf_bond(BondKind::kAny);
    case '@':
      return leaf_bond(BondKind::kRing);
    default:
      --pos_;
      fail("expected a bond primitive");
    }
  }

  // -- atoms ---------------------------------------------------------------

  int leaf_atom(AtomKind kind, int value = 0, int arg = 0) {
    AtomNode n;
    n.kind = kind;
    n.value = value;
    n.arg = arg;
    impl_.atom_nodes.push_back(n);
    return static_cast<int>(impl_.atom_nodes.size()) - 1;
  }

  int add_atom(int expr) {
    impl_.atom_expr.push_back(expr);
    impl_.parent_bond.push_back(-1);
    return static_cast<int>(impl_.atom_expr.size()) - 1;
  }

  int atom_expression() {
    const char c = peek();
    if (c == '[') {
      ++pos_;
      bracket_start_ = true;
      const int expr = atom_low_and();
      if (peek() != ']')
        fail("expected ']'");
      ++pos_;
      return add_atom(expr);
    }
    if (c == '*') {
      ++pos_;
      return add_atom(leaf_atom(AtomKind::kAny));
    }
    if (c == 'a' || c == 'A') {
      ++pos_;
      return add_atom(leaf_atom(c == 'a' ? AtomKind::kAromatic
                                         : AtomKind::kAliphatic));
    }
    const int expr = element_symbol(true);
    if (expr < 0)
      fail("unexpected character");
    return add_atom(expr);
  }

  // Organic-subset or bracket element symbol; -1 when none matches here.
  int element_symbol(bool organic_only) {
    const char c = peek();
    if (std::isupper(static_cast<unsigned char>(c))) {
      if (pos_ + 1 < text_.size()
          && std::islower(static_cast<unsigned char>(text_[pos_ + 1]))) {
        const std::string two { c, text_[pos_ + 1] };
        const bool allowed = organic_only ? (two == "Cl" || two == "Br")
                                          : element_number(two) > 0;
        if (allowed) {
          pos_ += 2;
          return leaf_atom(AtomKind::kElement, element_number(two), 0);
        }
      }
      const int z = element_number(std::string(1, c));
      if (z > 0 && (!organic_only || is_organic_subset(z))) {
        ++pos_;
        return leaf_atom(AtomKind::kElement, z, 0);
      }
      return -1;
    }
    if (std::islower(static_cast<unsigned char>(c))) {
      static constexpr std::string_view kTwo[] = { "se", "as", "te" };
      for (std::string_view t: kTwo) {
        if (!organic_only && text_.substr(pos_, 2) == t) {
          pos_ += 2;
          std::string sym(t);
          sym[0] = static_cast<char>(std::toupper(sym[0]));
          return leaf_atom(AtomKind::kElement, element_number(sym), 1);
        }
      }
      static constexpr std::string_view kOne = "bcnops";
      if (kOne.find(c) != std::string_view::npos) {
        ++pos_;
        const std::string sym(1, static_cast<char>(std::toupper(c)));
        return leaf_atom(AtomKind::kElement, element_number(sym), 1);
      }
    }
    return -1;
  }

  int atom_low_and() {
    int lhs = atom_or();
    while (peek() == ';') {
      ++pos_;
      lhs = combine(impl_.atom_nodes, Op::kAnd, lhs, atom_or());
    }
    return lhs;
  }

  int atom_or() {
    int lhs = atom_high_and();
    while (peek() == ',') {
      ++pos_;
      lhs = combine(impl_.atom_nodes, Op::kOr, lhs, atom_high_and());
    }
    return lhs;
  }

  int atom_high_and() {
    int lhs = atom_not();
    while (true) {
      const char c = peek();
      if (c == '&') {
        ++pos_;
        lhs = combine(impl_.atom_nodes, Op::kAnd, lhs, atom_not());
      } else if (c == ']' || c == ';' || c == ',' || c == '\0') {
        return lhs;
      } else {
        lhs = combine(impl_.atom_nodes, Op::kAnd, lhs, atom_not());
      }
    }
  }

  int atom_not() {
    if (peek() == '!') {
      ++pos_;
      bracket_start_ = false;
      return combine(impl_.atom_nodes, Op::kNot, atom_not(), -1);
    }
    const bool first = bracket_start_;
    bracket_start_ = false;
    return atom_primitive(first);
  }

  int atom_primitive(bool first) {
    const char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c)))
      return leaf_atom(AtomKind::kIsotope, number(0));
    switch (c) {
    case '*':
      ++pos_;
      return leaf_atom(AtomKind::kAny);
    case 'a':
      ++pos_;
      return leaf_atom(AtomKind::kAromatic);
    case 'A':
      ++pos_;
      return leaf_atom(AtomKind::kAliphatic);
    case '#': {
      ++pos_;
      if (!std::isdigit(static_cast<unsigned char>(peek())))
        fail("expected atomic number after '#'");
      return leaf_atom(AtomKind::kElement, number(0), -1);
    }
    case 'D':
      ++pos_;
      return leaf_atom(AtomKind::kDegree, number(1));
    case 'X':
      ++pos_;
      return leaf_atom(AtomKind::kConnectivity, number(1));
    case 'v':
      ++pos_;
      return leaf_atom(AtomKind::kValence, number(1));
    case 'R':
      ++pos_;
      return leaf_atom(AtomKind::kRingCount, number(-1));
    case 'r':
      ++pos_;
      return leaf_atom(AtomKind::kRingSize, number(-1));
    case 'H': {
      const char next = pos_ + 1 < text_.size() ? text_[pos_ + 1] : '\0';
      if (first && (next == ']' || next == '+' || next == '-' || next == ';'
                    || next == ',' || next == '&')) {
        ++pos_;
        return leaf_atom(AtomKind::kElement, 1, -1);
      }
      ++pos_;
      return leaf_atom(AtomKind::kTotalH, number(1));
    }
    case '+':
    case '-': {
      ++pos_;
      int mag = 1;
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        mag = number(1);
      } else {
        while (peek() == c) {
          ++pos_;
          ++mag;
        }
      }
      return leaf_atom(AtomKind::kCharge, c == '+' ? mag : -mag);
    }
    case '@': {
      // Chirality is accepted and ignored.
      while (peek() == '@')
        ++pos_;
      return leaf_atom(AtomKind::kAny);
    }
    case '$': {
      ++pos_;
      if (peek() != '(')
        fail("expected '(' after '$'");
      const std::size_t open = ++pos_;
      int depth = 1;
      while (!at_end() && depth > 0) {
        if (text_[pos_] == '(')
          ++depth;
        else if (text_[pos_] == ')')
          --depth;
        ++pos_;
      }
      if (depth != 0)
        fail("unterminated recursive SMARTS");
      const std::string_view inner = text_.substr(open, pos_ - 1 - open);
      try {
        impl_.recursive.push_back(SmartsPattern::compile(inner));
      } catch (const SyntaxError &e) {
        throw SyntaxError(std::string("in recursive SMARTS: ") + e.what(),
                          open + e.offset());
      }
      return leaf_atom(AtomKind::kRecursive,
                       static_cast<int>(impl_.recursive.size()) - 1);
    }
    default:
      break;
    }
    const int expr = element_symbol(false);
    if (expr < 0)
      fail("unknown atom primitive");
    return expr;
  }

  std::string_view text_;
  SmartsPattern::Impl &impl_;
  std::size_t pos_ = 0;
  bool bracket_start_ = false;
};

}  // namespace

bool SmartsPattern::Impl::atom_ok(const Molecule &mol, int node,
                                  int atom) const {
  const AtomNode &n = atom_nodes[node];
  switch (n.op) {
  case Op::kNot:
    return !atom_ok(mol, n.lhs, atom);
  case Op::kAnd:
    return atom_ok(mol, n.lhs, atom) && atom_ok(mol, n.rhs, atom);
  case Op::kOr:
    return atom_ok(mol, n.lhs, atom) || atom_ok(mol, n.rhs, atom);
  case Op::kLeaf:
    break;
  }
  const Atom &a = mol.atom(atom);
  switch (n.kind) {
  case AtomKind::kAny:
    return true;
  case AtomKind::kElement:
    if (a.element != n.value)
      return false;
    return n.arg < 0 || (n.arg == 1) == a.aromatic;
  case AtomKind::kAromatic:
    return a.aromatic;
  case AtomKind::kAliphatic:
    return !a.aromatic;
  case AtomKind::kDegree:
    return mol.degree(atom) == n.value;
  case AtomKind::kTotalH:
    return a.hydrogens + explicit_h_neighbors(mol, atom) == n.value;
  case AtomKind::kConnectivity:
    return mol.degree(atom) + a.hydrogens == n.value;
  case AtomKind::kValence: {
    int v = a.hydrogens;
    int aromatic = 0;
    for (const Neighbor &nb: mol.neighbors(atom)) {
      const BondOrder o = mol.bond(nb.bond).order;
      if (o == BondOrder::kAromatic)
        ++aromatic;
      else
        v += static_cast<int>(o);
    }
    // Aromatic bonds count 1.5 each, rounded down in pairs.
    v += aromatic + aromatic / 2;
    return v == n.value;
  }
  case AtomKind::kRingCount:
    return n.value < 0 ? mol.atom_in_ring(atom)
                       : mol.ring_count(atom) == n.value;
  case AtomKind::kRingSize:
    return n.value < 0 ? mol.atom_in_ring(atom)
                       : mol.atom_in_ring_of_size(atom, n.value);
  case AtomKind::kCharge:
    return a.formal_charge == n.value;
  case AtomKind::kIsotope:
    return a.isotope == n.value;
  case AtomKind::kRecursive:
    return recursive[n.value].matches_at(mol, atom);
  }
  return false;
}

bool SmartsPattern::Impl::bond_ok(const Molecule &mol, int node,
                                  int bond) const {
  const BondNode &n = bond_nodes[node];
  switch (n.op) {
  case Op::kNot:
    return !bond_ok(mol, n.lhs, bond);
  case Op::kAnd:
    return bond_ok(mol, n.lhs, bond) && bond_ok(mol, n.rhs, bond);
  case Op::kOr:
    return bond_ok(mol, n.lhs, bond) || bond_ok(mol, n.rhs, bond);
  case Op::kLeaf:
    break;
  }
  const BondOrder o = mol.bond(bond).order;
  switch (n.kind) {
  case BondKind::kAny:
    return true;
  case BondKind::kSingle:
    return o == BondOrder::kSingle;
  case BondKind::kDouble:
    return o == BondOrder::kDouble;
  case BondKind::kTriple:
    return o == BondOrder::kTriple;
  case BondKind::kAromatic:
    return o == BondOrder::kAromatic;
  case BondKind::kRing:
    return mol.bond_in_ring(bond);
  case BondKind::kDefault:
    return o == BondOrder::kSingle || o == BondOrder::kAromatic;
  }
  return false;
}

bool SmartsPattern::Impl::extend(const Molecule &mol, std::vector<int> &map,
                                 std::vector<char> &used, int next,
                                 const std::function<bool()> &on_match) const {
  const int n = static_cast<int>(atom_expr.size());
  if (next == n)
    return on_match();
  const PatternBond &link = bonds[parent_bond[next]];
  const int anchor = map[link.a == next ? link.b : link.a];
  for (const Neighbor &nb: mol.neighbors(anchor)) {
    if (used[nb.atom] || !bond_ok(mol, link.expr, nb.bond)
        || !atom_ok(mol, atom_expr[next], nb.atom))
      continue;
    map[next] = nb.atom;
    bool closures_ok = true;
    for (const PatternBond &pb: bonds) {
      if (&pb == &link)
        continue;
      int other = -1;
      if (pb.a == next && pb.b < next)
        other = pb.b;
      else if (pb.b == next && pb.a < next)
        other = pb.a;
      if (other < 0)
        continue;
      const int bond = mol.bond_between(nb.atom, map[other]);
      if (bond < 0 || !bond_ok(mol, pb.expr, bond)) {
        closures_ok = false;
        break;
      }
    }
    if (!closures_ok)
      continue;
    used[nb.atom] = 1;
    const bool stop = extend(mol, map, used, next + 1, on_match);
    used[nb.atom] = 0;
    if (stop)
      return true;
  }
  map[next] = -1;
  return false;
}

bool SmartsPattern::Impl::search(const Molecule &mol, int start,
                                 const std::function<bool()> &on_match,
                                 std::vector<int> &map) const {
  if (atom_expr.empty() || !atom_ok(mol, atom_expr[0], start))
    return false;
  map.assign(atom_expr.size(), -1);
  std::vector<char> used(mol.num_atoms(), 0);
  map[0] = start;
  used[start] = 1;
  return extend(mol, map, used, 1, on_match);
}

SmartsPattern::SmartsPattern() : impl_(std::make_unique<Impl>()) { }
SmartsPattern::SmartsPattern(const SmartsPattern &other)
    : impl_(std::make_unique<Impl>(*other.impl_)) { }
SmartsPattern::SmartsPattern(SmartsPattern &&) noexcept = default;
SmartsPattern &SmartsPattern::operator=(const SmartsPattern &other) {
  if (this != &other)
    impl_ = std::make_unique<Impl>(*other.impl_);
  return *this;
}
SmartsPattern &SmartsPattern::operator=(SmartsPattern &&) noexcept = default;
SmartsPattern::~SmartsPattern() = default;

SmartsPattern SmartsPattern::compile(std::string_view text) {
  SmartsPattern p;
  p.impl_->text = std::string(text);
  Parser(p.impl_->text, *p.impl_).parse();
  return p;
}

const std::string &SmartsPattern::text() const noexcept {
  return impl_->text;
}

int SmartsPattern::num_atoms() const noexcept {
  return static_cast<int>(impl_->atom_expr.size());
}

bool SmartsPattern::matches_at(const Molecule &mol, int atom) const {
  std::vector<int> map;
  return impl_->search(mol, atom, [] { return true; }, map);
}

bool SmartsPattern::matches(const Molecule &mol) const {
  for (int a = 0; a < mol.num_atoms(); ++a)
    if (matches_at(mol, a))
      return true;
  return false;
}

int SmartsPattern::count_unique(const Molecule &mol, int limit) const {
  std::set<std::vector<int>> seen;
  std::vector<int> map;
  for (int a = 0; a < mol.num_atoms(); ++a) {
    const bool stop = impl_->search(mol, a, [&] {
      std::vector<int> key(map);
      std::sort(key.begin(), key.end());
      seen.insert(std::move(key));
      return static_cast<int>(seen.size()) >= limit;
    }, map);
    if (stop)
      break;
  }
  return static_cast<int>(seen.size());
}

}  // namespace molpipe
