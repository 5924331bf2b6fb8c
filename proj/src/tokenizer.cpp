#include "molpipe/tokenizer.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include "molpipe/element.h"
#include "molpipe/error.h"
#include "molpipe/resources.h"

namespace molpipe {
namespace {

constexpr std::string_view kSpecials[] = { "<BOF>", "<EOF>", "<BOM>",
                                           "<EOM>" };

// Bracket atoms frequent enough in drug-like SMILES to deserve one token.
constexpr std::string_view kCommonBrackets[] = {
  "[nH]",  "[NH+]",  "[NH2+]", "[NH3+]", "[N+]",   "[N-]",  "[n+]",
  "[n-]",  "[nH+]",  "[O-]",   "[O+]",   "[o+]",   "[S-]",  "[S+]",
  "[s+]",  "[C@H]",  "[C@@H]", "[C@]",   "[C@@]",  "[NH-]", "[CH-]",
  "[CH2-]", "[C-]",  "[P+]",   "[B-]",   "[Si]",   "[Se]",  "[se]",
  "[2H]",  "[13C]",  "[Na+]",  "[K+]",   "[Li+]",  "[Cl-]", "[Br-]",
  "[I-]",  "[H]",    "[S@]",   "[S@@]",  "[N@]",   "[N@@]", "[N@+]",
  "[N@@+]", "[P@]",  "[P@@]",  "[Sn]",   "[Zn]",   "[Mg]",  "[Cu]",
};

constexpr std::string_view kChiralClasses[] = { "TH", "AL", "SP", "TB",
                                                "OH" };

constexpr std::string_view kAromaticTwoLetter[] = { "se", "as", "te" };

bool is_organic_piece_start(char c) {
  switch (c) {
  case 'B': case 'C': case 'N': case 'O': case 'P': case 'S': case 'F':
  case 'I': case 'b': case 'c': case 'n': case 'o': case 'p': case 's':
  case '*':
    return true;
  default:
    return false;
  }
}

bool is_symbol_piece(char c) {
  switch (c) {
  case '-': case '=': case '#': case '$': case ':': case '/': case '\\':
  case '~': case '(': case ')': case '.':
    return true;
  default:
    return false;
  }
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
    ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
    --e;
  return std::string(s.substr(b, e - b));
}

// Splits a bracket atom into base-token-sized parts.
std::vector<std::string_view> split_bracket(std::string_view piece,
                                            std::size_t offset) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  auto take = [&](std::size_t n) {
    out.push_back(piece.substr(i, n));
    i += n;
  };
  auto fail = [&]() -> void {
    throw TokenizeError("cannot tokenize bracket atom '" + std::string(piece)
                        + "' at offset " + std::to_string(offset + i));
  };
  take(1);  // '['
  while (i < piece.size() && std::isdigit(static_cast<unsigned char>(piece[i])))
    take(1);
  // element symbol
  bool found = false;
  if (i < piece.size() && piece[i] == '*') {
    take(1);
    found = true;
  }
  if (!found && i + 1 < piece.size()) {
    const std::string_view two = piece.substr(i, 2);
    const bool known =
        (std::isupper(static_cast<unsigned char>(two[0]))
         && std::islower(static_cast<unsigned char>(two[1]))
         && find_element(two) != nullptr)
        || std::find(std::begin(kAromaticTwoLetter),
                     std::end(kAromaticTwoLetter), two)
               != std::end(kAromaticTwoLetter);
    if (known) {
      take(2);
      found = true;
    }
  }
  if (!found && i < piece.size()) {
    const char c = piece[i];
    const std::string one(1, c);
    if ((std::isupper(static_cast<unsigned char>(c))
         && find_element(one) != nullptr)
        || std::string_view("bcnops").find(c) != std::string_view::npos) {
      take(1);
      found = true;
    }
  }
  if (!found)
    fail();
  while (i < piece.size()) {
    const char c = piece[i];
    if (c == '@' || c == 'H' || c == '+' || c == '-' || c == ':' || c == ']'
        || std::isdigit(static_cast<unsigned char>(c))) {
      take(1);
      continue;
    }
    const std::string_view two = piece.substr(i, 2);
    if (std::find(std::begin(kChiralClasses), std::end(kChiralClasses), two)
        != std::end(kChiralClasses)) {
      take(2);
      continue;
    }
    fail();
  }
  return out;
}

std::vector<std::string> parse_group_lines(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in { std::string(text) };
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    // '#' is also the triple bond; only a leading '#' starts a comment.
    std::string entry = trim(raw);
    if (entry.empty() || entry.front() == '#')
      continue;
    int paren = 0;
    bool bad = false;
    for (char c: entry) {
      if (c == '(')
        ++paren;
      else if (c == ')' && --paren < 0)
        bad = true;
    }
    if (bad || paren != 0)
      throw FormatError("group line " + std::to_string(line_no)
                        + ": unbalanced parentheses in '" + entry + "'");
    if (entry.find('.') != std::string::npos)
      throw FormatError("group line " + std::to_string(line_no)
                        + ": groups may not contain '.'");
    try {
      pre_tokenize(entry);
    } catch (const TokenizeError &e) {
      throw FormatError("group line " + std::to_string(line_no) + ": "
                        + e.what());
    }
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace

std::string_view to_string(TokenClass c) {
  switch (c) {
  case TokenClass::kBase:
    return "base";
  case TokenClass::kDummy:
    return "dummy";
  case TokenClass::kGroup:
    return "group";
  case TokenClass::kSpecial:
    return "special";
  }
  return "base";
}

SpecialPairing parse_special_pairing(std::string_view text) {
  if (text == "mnemonic")
    return SpecialPairing::kMnemonic;
  if (text == "swapped")
    return SpecialPairing::kSwapped;
  throw FormatError("special_pairing must be 'mnemonic' or 'swapped', got '"
                    + std::string(text) + "'");
}

std::string_view to_string(SpecialPairing p) {
  return p == SpecialPairing::kSwapped ? "swapped" : "mnemonic";
}

std::vector<std::string_view> pre_tokenize(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    std::size_t n = 0;
    if (c == '[') {
      const std::size_t close = text.find(']', i);
      if (close == std::string_view::npos)
        throw TokenizeError("unterminated bracket atom at offset "
                            + std::to_string(i));
      n = close - i + 1;
    } else if (c == '%') {
      if (i + 2 >= text.size()
          || !std::isdigit(static_cast<unsigned char>(text[i + 1]))
          || !std::isdigit(static_cast<unsigned char>(text[i + 2])))
        throw TokenizeError("bad ring label at offset " + std::to_string(i));
      n = 3;
    } else if ((c == 'C' && i + 1 < text.size() && text[i + 1] == 'l')
               || (c == 'B' && i + 1 < text.size() && text[i + 1] == 'r')) {
      n = 2;
    } else if (is_organic_piece_start(c) || is_symbol_piece(c)
               || std::isdigit(static_cast<unsigned char>(c))) {
      n = 1;
    } else {
      throw TokenizeError(std::string("untokenizable character '") + c
                          + "' at offset " + std::to_string(i));
    }
    out.push_back(text.substr(i, n));
    i += n;
  }
  return out;
}

void Vocab::add(std::string token, TokenClass cls) {
  if (index_.count(token))
    throw FormatError("duplicate vocabulary token '" + token + "'");
  index_.emplace(token, static_cast<int>(entries_.size()));
  entries_.push_back({ std::move(token), cls });
}

void Vocab::finish() {
  max_group_pieces_ = 1;
  int dummies = 0, specials = 0;
  for (const VocabEntry &e: entries_) {
    if (e.cls == TokenClass::kDummy)
      ++dummies;
    if (e.cls == TokenClass::kSpecial)
      ++specials;
    if (e.cls == TokenClass::kGroup)
      max_group_pieces_ =
          std::max(max_group_pieces_, pre_tokenize(e.token).size());
  }
  if (dummies != kDummyCount || specials != kSpecialCount)
    throw FormatError("vocabulary must hold 16 dummy and 4 special tokens");
  for (std::string_view s: kSpecials)
    if (find(s) < 0 || entry(find(s)).cls != TokenClass::kSpecial)
      throw FormatError("vocabulary is missing special token "
                        + std::string(s));
  for (int l = 1; l <= kDummyCount; ++l) {
    const std::string d = "[" + std::to_string(l) + "*]";
    if (find(d) < 0 || entry(find(d)).cls != TokenClass::kDummy)
      throw FormatError("vocabulary is missing dummy token " + d);
  }
}

Vocab Vocab::build(std::string_view group_text) {
  Vocab v;
  for (std::string_view s: kSpecials)
    v.add(std::string(s), TokenClass::kSpecial);
  for (int l = 1; l <= kDummyCount; ++l)
    v.add("[" + std::to_string(l) + "*]", TokenClass::kDummy);

  for (std::string_view s: { "B", "C", "N", "O", "P", "S", "F", "Cl", "Br",
                             "I", "b", "c", "n", "o", "p", "s", "*" })
    v.add(std::string(s), TokenClass::kBase);
  for (std::string_view s: { "-", "=", "#", "$", ":", "/", "\\", "~", "(",
                             ")", ".", "[", "]", "@", "+", "H" })
    v.add(std::string(s), TokenClass::kBase);
  for (int d = 0; d <= 9; ++d)
    v.add(std::to_string(d), TokenClass::kBase);
  for (int d = 10; d <= 99; ++d)
    v.add("%" + std::to_string(d), TokenClass::kBase);
  for (int z = 1; z < element_count(); ++z) {
    const std::string sym(element(z).symbol);
    if (v.find(sym) < 0)
      v.add(sym, TokenClass::kBase);
  }
  for (std::string_view s: kAromaticTwoLetter)
    v.add(std::string(s), TokenClass::kBase);
  for (std::string_view s: kChiralClasses)
    if (v.find(s) < 0)
      v.add(std::string(s), TokenClass::kBase);
  for (std::string_view s: kCommonBrackets)
    if (v.find(s) < 0)
      v.add(std::string(s), TokenClass::kBase);

  for (std::string &g: parse_group_lines(group_text))
    v.add(std::move(g), TokenClass::kGroup);
  v.finish();
  return v;
}

Vocab Vocab::build_default() {
  return build(resources::functional_groups());
}

Vocab Vocab::load(std::string_view text) {
  Vocab v;
  std::istringstream in { std::string(text) };
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r')
      raw.pop_back();
    if (raw.empty())
      continue;
    const std::size_t t1 = raw.find('\t');
    const std::size_t t2 =
        t1 == std::string::npos ? t1 : raw.find('\t', t1 + 1);
    if (t2 == std::string::npos)
      throw FormatError("vocab line " + std::to_string(line_no)
                        + ": expected id<TAB>class<TAB>token");
    int id = -1;
    const auto [p, ec] = std::from_chars(raw.data(), raw.data() + t1, id);
    if (ec != std::errc() || p != raw.data() + t1
        || id != static_cast<int>(v.entries_.size()))
      throw FormatError("vocab line " + std::to_string(line_no)
                        + ": ids must be dense and ascending from 0");
    const std::string cls = raw.substr(t1 + 1, t2 - t1 - 1);
    TokenClass c;
    if (cls == "base")
      c = TokenClass::kBase;
    else if (cls == "dummy")
      c = TokenClass::kDummy;
    else if (cls == "group")
      c = TokenClass::kGroup;
    else if (cls == "special")
      c = TokenClass::kSpecial;
    else
      throw FormatError("vocab line " + std::to_string(line_no)
                        + ": unknown class '" + cls + "'");
    std::string token = raw.substr(t2 + 1);
    if (token.empty())
      throw FormatError("vocab line " + std::to_string(line_no)
                        + ": empty token");
    v.add(std::move(token), c);
  }
  v.finish();
  return v;
}

std::string Vocab::save() const {
  std::string out;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    out += std::to_string(i);
    out += '\t';
    out += to_string(entries_[i].cls);
    out += '\t';
    out += entries_[i].token;
    out += '\n';
  }
  return out;
}

const VocabEntry &Vocab::entry(int id) const {
  if (id < 0 || id >= size())
    throw TokenizeError("unknown token id " + std::to_string(id));
  return entries_[id];
}

int Vocab::find(std::string_view token) const {
  const auto it = index_.find(std::string(token));
  return it == index_.end() ? -1 : it->second;
}

int Vocab::count(TokenClass c) const {
  return static_cast<int>(std::count_if(
      entries_.begin(), entries_.end(),
      [c](const VocabEntry &e) { return e.cls == c; }));
}

int Vocab::begin_id(SourceKind kind, SpecialPairing pairing) const {
  const bool molecule_uses_m = pairing == SpecialPairing::kMnemonic;
  const bool use_m = (kind == SourceKind::kMolecule) == molecule_uses_m;
  return find(use_m ? "<BOM>" : "<BOF>");
}

int Vocab::end_id(SourceKind kind, SpecialPairing pairing) const {
  const bool molecule_uses_m = pairing == SpecialPairing::kMnemonic;
  const bool use_m = (kind == SourceKind::kMolecule) == molecule_uses_m;
  return find(use_m ? "<EOM>" : "<EOF>");
}

bool Vocab::is_special(int id) const {
  return entry(id).cls == TokenClass::kSpecial;
}

TokenStream tokenize(std::string_view text, const Vocab &vocab,
                     SourceKind kind, SpecialPairing pairing) {
  TokenStream ts;
  ts.kind = kind;
  const int open = vocab.begin_id(kind, pairing);
  const int close = vocab.end_id(kind, pairing);

  std::size_t start = 0;
  while (true) {
    const std::size_t dot = text.find('.', start);
    const std::string_view comp = text.substr(start, dot - start);
    ts.ids.push_back(open);

    const auto pieces = pre_tokenize(comp);
    const std::size_t max_span = vocab.max_group_pieces();
    std::size_t i = 0;
    std::string joined;
    while (i < pieces.size()) {
      int best = -1;
      std::size_t best_span = 0;
      const std::size_t limit = std::min(max_span, pieces.size() - i);
      for (std::size_t span = limit; span >= 2 && best < 0; --span) {
        joined.clear();
        for (std::size_t k = 0; k < span; ++k)
          joined += pieces[i + k];
        const int id = vocab.find(joined);
        if (id >= 0 && vocab.entry(id).cls != TokenClass::kBase) {
          best = id;
          best_span = span;
        }
      }
      if (best >= 0) {
        ts.ids.push_back(best);
        i += best_span;
        continue;
      }
      const std::string_view piece = pieces[i];
      const int id = vocab.find(piece);
      if (id >= 0) {
        ts.ids.push_back(id);
      } else {
        const std::size_t offset =
            static_cast<std::size_t>(piece.data() - text.data());
        for (std::string_view part: split_bracket(piece, offset)) {
          const int pid = vocab.find(part);
          if (pid < 0)
            throw TokenizeError("no vocabulary entry for '"
                                + std::string(part) + "' at offset "
                                + std::to_string(offset));
          ts.ids.push_back(pid);
        }
      }
      ++i;
    }

    ts.ids.push_back(close);
    if (dot == std::string_view::npos)
      break;
    start = dot + 1;
  }
  return ts;
}

std::string detokenize(const TokenStream &ts, const Vocab &vocab) {
  std::string out;
  bool seen_component = false;
  for (int id: ts.ids) {
    const VocabEntry &e = vocab.entry(id);
    if (e.cls != TokenClass::kSpecial) {
      out += e.token;
      continue;
    }
    const bool is_begin = e.token == "<BOM>" || e.token == "<BOF>";
    if (is_begin) {
      if (seen_component)
        out += '.';
      seen_component = true;
    }
  }
  return out;
}

std::size_t payload_length(const TokenStream &ts, const Vocab &vocab) {
  std::size_t n = 0;
  for (int id: ts.ids)
    if (!vocab.is_special(id))
      ++n;
  return n;
}

}  // namespace molpipe
