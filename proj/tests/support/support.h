#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "molpipe/molecule.h"

namespace testsupport {

std::string fixture_path(const std::string &name);
std::vector<std::string> read_lines(const std::string &path);
std::vector<std::string> corpus();
std::vector<std::vector<std::string>> read_tsv(const std::string &path);

// Backtracking graph isomorphism over atom attributes and bond orders.
// Written without the library's canonicalizer so it can check it.
bool isomorphic(const molpipe::Molecule &a, const molpipe::Molecule &b);

// Full-matrix edit distance.
std::size_t edit_distance(const std::string &a, const std::string &b);

// Adaptive cap written out directly from its definition.
std::int64_t cap_reference(std::int64_t L, double k, double alpha);

// Tanimoto on plain bool vectors.
double tanimoto_reference(const std::vector<std::uint64_t> &a,
                          const std::vector<std::uint64_t> &b);

std::string temp_dir(const std::string &tag);

}  // namespace testsupport
