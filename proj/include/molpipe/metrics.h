#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace molpipe {

// 1 when both strings parse and share a canonical SMILES, else 0.
int exact_match(std::string_view pred, std::string_view ref);

// Unit-cost edit distance. levenshtein() runs the bit-parallel kernel;
// levenshtein_dp() is the two-row dynamic program it is checked against.
std::size_t levenshtein(std::string_view a, std::string_view b);
std::size_t levenshtein_dp(std::string_view a, std::string_view b);

// Character-level BLEU-4 with brevity penalty. Unigram precision is used as
// is, higher orders get add-one smoothing, and orders the prediction is too
// short to contain are left out of the geometric mean. Empty pred scores 0.
double bleu(std::string_view pred, std::string_view ref);

// Fraction of samples whose reference exactly matches one of the first k
// predictions. Throws DomainError for k < 1 or mismatched lengths.
double topk_accuracy(const std::vector<std::vector<std::string>> &ranked,
                     const std::vector<std::string> &refs, int k);

struct EvalOptions {
  // Score fingerprint similarity of invalid pairs as 0 instead of skipping.
  bool invalid_as_zero = false;
  unsigned threads = 1;
};

struct EvalReport {
  double exact = 0.0;
  double bleu = 0.0;
  double levenshtein = 0.0;
  std::optional<double> fts_path;
  std::optional<double> fts_keys;
  std::optional<double> fts_morgan;
  double validity = 0.0;
  std::size_t n = 0;
  std::size_t fts_pairs = 0;
  std::size_t fts_skipped = 0;
};

// Throws DomainError when the lists differ in length.
EvalReport evaluate(const std::vector<std::string> &preds,
                    const std::vector<std::string> &refs,
                    const EvalOptions &options = {});

std::string to_json(const EvalReport &report);
// Aligned plain-text table, one header row and one value row.
std::string to_table(const EvalReport &report);

}  // namespace molpipe
