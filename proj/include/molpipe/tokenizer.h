#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace molpipe {

enum class TokenClass { kBase, kDummy, kGroup, kSpecial };

std::string_view to_string(TokenClass c);

enum class SourceKind { kMolecule, kFragmentSet };

// Which special pair frames which kind of payload. kMnemonic: BOM/EOM wrap
// molecules and BOF/EOF wrap fragment sets. kSwapped swaps them.
enum class SpecialPairing { kMnemonic, kSwapped };

SpecialPairing parse_special_pairing(std::string_view text);
std::string_view to_string(SpecialPairing p);

struct VocabEntry {
  std::string token;
  TokenClass cls;
};

class Vocab {
 public:
  static constexpr int kDummyCount = 16;
  static constexpr int kSpecialCount = 4;

  // Specials, dummies and the base inventory followed by the given groups
  // (one SMILES substring per line, '#' comments). Throws FormatError for a
  // malformed group and for any duplicate token.
  static Vocab build(std::string_view group_text);
  // The shipped functional-group list.
  static Vocab build_default();

  // "id<TAB>class<TAB>token" per line. Throws FormatError.
  static Vocab load(std::string_view text);
  std::string save() const;

  int size() const noexcept { return static_cast<int>(entries_.size()); }
  const VocabEntry &entry(int id) const;
  // -1 when absent.
  int find(std::string_view token) const;
  int count(TokenClass c) const;

  int begin_id(SourceKind kind, SpecialPairing pairing) const;
  int end_id(SourceKind kind, SpecialPairing pairing) const;
  bool is_special(int id) const;

  // Longest group entry measured in atom-level pieces.
  std::size_t max_group_pieces() const noexcept { return max_group_pieces_; }

 private:
  void add(std::string token, TokenClass cls);
  void finish();

  std::vector<VocabEntry> entries_;
  std::unordered_map<std::string, int> index_;
  std::size_t max_group_pieces_ = 1;
};

struct TokenStream {
  std::vector<int> ids;
  SourceKind kind = SourceKind::kMolecule;
};

// Splits SMILES text into atom-level pieces (bracket atoms, two-letter
// halogens, ring labels, bond and branch symbols, dots). Throws
// TokenizeError with the offending byte position.
std::vector<std::string_view> pre_tokenize(std::string_view text);

// Greedy longest match over the vocabulary; each dot-separated component is
// framed by the kind's begin/end tokens and the dots themselves are dropped.
TokenStream tokenize(std::string_view text, const Vocab &vocab,
                     SourceKind kind,
                     SpecialPairing pairing = SpecialPairing::kMnemonic);

// Inverse of tokenize. Throws TokenizeError for ids outside the vocabulary.
std::string detokenize(const TokenStream &ts, const Vocab &vocab);

// Tokens excluding framing specials.
std::size_t payload_length(const TokenStream &ts, const Vocab &vocab);

}  // namespace molpipe
