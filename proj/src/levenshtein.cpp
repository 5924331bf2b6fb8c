#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "molpipe/metrics.h"

namespace molpipe {

std::size_t levenshtein_dp(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t { 0 });
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({ prev[j] + 1, cur[j - 1] + 1, sub });
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

// Myers' bit-vector algorithm in its multi-word form: the pattern is split
// into 64-row blocks and each text column is swept block by block, passing
// the horizontal delta at the block boundary downwards.
std::size_t levenshtein(std::string_view a, std::string_view b) {
  if (a.size() > b.size())
    std::swap(a, b);
  const std::size_t m = a.size();
  if (m == 0)
    return b.size();

  const std::size_t words = (m + 63) / 64;
  std::vector<std::uint64_t> peq(256 * words, 0);
  for (std::size_t i = 0; i < m; ++i) {
    const unsigned char c = static_cast<unsigned char>(a[i]);
    peq[c * words + i / 64] |= std::uint64_t { 1 } << (i % 64);
  }
  std::vector<std::uint64_t> pv(words, ~std::uint64_t { 0 });
  std::vector<std::uint64_t> mv(words, 0);
  const unsigned last = static_cast<unsigned>((m - 1) % 64);
  constexpr unsigned kHigh = 63;

  std::size_t score = m;
  for (const char ch: b) {
    const std::uint64_t *eq_row =
        &peq[static_cast<unsigned char>(ch) * words];
    int hin = 1;  // top boundary: D[0][j] = j
    for (std::size_t w = 0; w < words; ++w) {
      std::uint64_t eq = eq_row[w];
      const std::uint64_t p = pv[w];
      const std::uint64_t n = mv[w];
      const std::uint64_t hin_neg = hin < 0 ? 1 : 0;
      const std::uint64_t xv = eq | n;
      eq |= hin_neg;
      const std::uint64_t xh = (((eq & p) + p) ^ p) | eq;
      std::uint64_t ph = n | ~(xh | p);
      std::uint64_t mh = p & xh;
      if (w + 1 == words) {
        score += (ph >> last) & 1;
        score -= (mh >> last) & 1;
      }
      const int hout = static_cast<int>((ph >> kHigh) & 1)
                       - static_cast<int>((mh >> kHigh) & 1);
      ph <<= 1;
      mh <<= 1;
      mh |= hin_neg;
      ph |= hin > 0 ? 1 : 0;
      pv[w] = mh | ~(xv | ph);
      mv[w] = ph & xv;
      hin = hout;
    }
  }
  return score;
}

}  // namespace molpipe
