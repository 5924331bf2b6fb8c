#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "molpipe/metrics.h"

namespace molpipe {
namespace {

constexpr int kMaxOrder = 4;

std::map<std::string_view, int> ngram_counts(std::string_view s, int n) {
  std::map<std::string_view, int> counts;
  if (static_cast<int>(s.size()) < n)
    return counts;
  for (std::size_t i = 0; i + n <= s.size(); ++i)
    ++counts[s.substr(i, n)];
  return counts;
}

}  // namespace

double bleu(std::string_view pred, std::string_view ref) {
  if (pred.empty())
    return 0.0;
  const int orders =
      std::min<int>(kMaxOrder, static_cast<int>(pred.size()));
  double log_sum = 0.0;
  for (int n = 1; n <= orders; ++n) {
    const auto hyp = ngram_counts(pred, n);
    const auto refc = ngram_counts(ref, n);
    long matched = 0, total = 0;
    for (const auto &[gram, count]: hyp) {
      total += count;
      const auto it = refc.find(gram);
      if (it != refc.end())
        matched += std::min(count, it->second);
    }
    if (n == 1) {
      if (matched == 0)
        return 0.0;
      log_sum += std::log(static_cast<double>(matched) / total);
    } else {
      log_sum += std::log(static_cast<double>(matched + 1) / (total + 1));
    }
  }
  const double hyp_len = static_cast<double>(pred.size());
  const double ref_len = static_cast<double>(ref.size());
  const double bp = hyp_len > ref_len ? 1.0 : std::exp(1.0 - ref_len / hyp_len);
  return bp * std::exp(log_sum / orders);
}

}  // namespace molpipe
