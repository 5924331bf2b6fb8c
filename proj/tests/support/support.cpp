#include "support.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace testsupport {

using molpipe::Atom;
using molpipe::Molecule;

std::string fixture_path(const std::string &name) {
  return std::string(MOLPIPE_FIXTURE_DIR) + "/" + name;
}

std::vector<std::string> read_lines(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("missing fixture " + path);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);)
    if (!line.empty())
      out.push_back(line);
  return out;
}

std::vector<std::string> corpus() {
  static const std::vector<std::string> c = read_lines(fixture_path("corpus.smi"));
  return c;
}

std::vector<std::vector<std::string>> read_tsv(const std::string &path) {
  std::vector<std::vector<std::string>> rows;
  for (const std::string &line: read_lines(path)) {
    std::vector<std::string> cols;
    std::istringstream s(line);
    for (std::string f; std::getline(s, f, '\t');)
      cols.push_back(f);
    rows.push_back(cols);
  }
  return rows;
}

namespace {

bool same_atom(const Atom &x, const Atom &y) {
  return x.element == y.element && x.aromatic == y.aromatic
         && x.formal_charge == y.formal_charge && x.hydrogens == y.hydrogens
         && x.isotope == y.isotope && x.link_label == y.link_label;
}

struct Matcher {
  const Molecule &a, &b;
  std::vector<int> order;  // a atoms, each after one of its neighbours
  std::vector<int> map_ab, map_ba;

  int order_between(const Molecule &m, int x, int y) const {
    const int bond = m.bond_between(x, y);
    return bond < 0 ? -1 : static_cast<int>(m.bond(bond).order);
  }

  bool feasible(int x, int y) const {
    if (!same_atom(a.atom(x), b.atom(y)) || a.degree(x) != b.degree(y))
      return false;
    for (const auto &nb: a.neighbors(x)) {
      const int img = map_ab[nb.atom];
      if (img >= 0
          && order_between(b, y, img) != static_cast<int>(a.bond(nb.bond).order))
        return false;
    }
    for (const auto &nb: b.neighbors(y)) {
      const int pre = map_ba[nb.atom];
      if (pre >= 0 && a.bond_between(x, pre) < 0)
        return false;
    }
    return true;
  }

  bool extend(std::size_t depth) {
    if (depth == order.size())
      return true;
    const int x = order[depth];
    std::vector<int> candidates;
    int anchor = -1;
    for (const auto &nb: a.neighbors(x))
      if (map_ab[nb.atom] >= 0) {
        anchor = map_ab[nb.atom];
        break;
      }
    if (anchor >= 0) {
      for (const auto &nb: b.neighbors(anchor))
        candidates.push_back(nb.atom);
    } else {
      for (int y = 0; y < b.num_atoms(); ++y)
        candidates.push_back(y);
    }
    for (int y: candidates) {
      if (map_ba[y] >= 0 || !feasible(x, y))
        continue;
      map_ab[x] = y;
      map_ba[y] = x;
      if (extend(depth + 1))
        return true;
      map_ab[x] = -1;
      map_ba[y] = -1;
    }
    return false;
  }
};

}  // namespace

bool isomorphic(const Molecule &a, const Molecule &b) {
  if (a.num_atoms() != b.num_atoms() || a.num_bonds() != b.num_bonds())
    return false;
  Matcher m { a, b, {}, std::vector<int>(a.num_atoms(), -1),
              std::vector<int>(b.num_atoms(), -1) };
  std::vector<char> seen(a.num_atoms(), 0);
  for (int s = 0; s < a.num_atoms(); ++s) {
    if (seen[s])
      continue;
    std::deque<int> queue { s };
    seen[s] = 1;
    while (!queue.empty()) {
      const int x = queue.front();
      queue.pop_front();
      m.order.push_back(x);
      for (const auto &nb: a.neighbors(x))
        if (!seen[nb.atom]) {
          seen[nb.atom] = 1;
          queue.push_back(nb.atom);
        }
    }
  }
  return m.extend(0);
}

std::size_t edit_distance(const std::string &a, const std::string &b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1,
                                          std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i)
    d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j)
    d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i)
    for (std::size_t j = 1; j <= b.size(); ++j)
      d[i][j] = std::min({ d[i - 1][j] + 1, d[i][j - 1] + 1,
                           d[i - 1][j - 1] + (a[i - 1] != b[j - 1]) });
  return d[a.size()][b.size()];
}

std::int64_t cap_reference(std::int64_t L, double k, double alpha) {
  if (static_cast<double>(L) < k)
    return L;
  const double blocks = std::ceil(static_cast<double>(L) / k);
  const double powered = std::ceil(std::pow(blocks, alpha));
  if (powered >= static_cast<double>(L))
    return L;
  return static_cast<std::int64_t>(powered);
}

double tanimoto_reference(const std::vector<std::uint64_t> &a,
                          const std::vector<std::uint64_t> &b) {
  long both = 0, either = 0;
  for (std::size_t w = 0; w < a.size(); ++w)
    for (int bit = 0; bit < 64; ++bit) {
      const bool x = (a[w] >> bit) & 1, y = (b[w] >> bit) & 1;
      both += x && y;
      either += x || y;
    }
  return either == 0 ? 1.0 : static_cast<double>(both) / static_cast<double>(either);
}

std::string temp_dir(const std::string &tag) {
  std::random_device rd;
  const auto dir = std::filesystem::temp_directory_path()
                   / ("molpipe-" + tag + "-" + std::to_string(rd()));
  std::filesystem::create_directories(dir);
  return dir.string();
}

}  // namespace testsupport
