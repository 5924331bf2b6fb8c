#include <algorithm>
#include <cstdio>

#include "json.hpp"
#include "molpipe/dataset.h"
#include "molpipe/error.h"
#include "molpipe/molgraph.h"
#include "molpipe/parallel.h"
#include "molpipe/smiles.h"

namespace molpipe {
namespace {

const char *const kFragmentLabels[] = { "1", "2", "3", "4", "5", "6",
                                        "7", "8", "9", "10", ">10" };
const char *const kBandLabels[] = { "<250", "250-320", "320-480", "480-500",
                                    ">=500" };

std::size_t band_of(double w) {
  if (w < 250)
    return 0;
  if (w < 320)
    return 1;
  if (w < 480)
    return 2;
  if (w < 500)
    return 3;
  return 4;
}

}  // namespace

void DistributionStats::add(std::size_t fragments, double weight) {
  ++molecules;
  ++fragment_counts[std::clamp<std::size_t>(fragments, 1, 11) - 1];
  ++weight_bands[band_of(weight)];
  if (weight >= 250 && weight < 500)
    ++weight_250_500;
}

std::size_t DistributionStats::modal_fragment_count() const {
  const auto it = std::max_element(fragment_counts.begin(), fragment_counts.end());
  return static_cast<std::size_t>(it - fragment_counts.begin()) + 1;
}

double DistributionStats::fraction_over_ten() const {
  return molecules == 0 ? 0.0
                        : static_cast<double>(fragment_counts[10])
                              / static_cast<double>(molecules);
}

std::string DistributionStats::to_json() const {
  nlohmann::ordered_json j;
  j["molecules"] = molecules;
  nlohmann::ordered_json frag = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < fragment_counts.size(); ++i)
    frag[kFragmentLabels[i]] = fragment_counts[i];
  j["fragment_counts"] = std::move(frag);
  nlohmann::ordered_json bands = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < weight_bands.size(); ++i)
    bands[kBandLabels[i]] = weight_bands[i];
  j["weight_bands"] = std::move(bands);
  j["weight_250_500"] = weight_250_500;
  j["fraction_over_10_fragments"] = fraction_over_ten();
  return j.dump(2);
}

std::string DistributionStats::to_table() const {
  auto pct = [&](std::size_t c) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%6.2f%%",
                  molecules ? 100.0 * static_cast<double>(c)
                                  / static_cast<double>(molecules)
                            : 0.0);
    return std::string(buf);
  };
  auto row = [&](const std::string &label, std::size_t c) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "  %-9s %8zu  %s\n", label.c_str(), c,
                  pct(c).c_str());
    return std::string(buf);
  };
  std::string out = "fragments per molecule\n";
  for (std::size_t i = 0; i < fragment_counts.size(); ++i)
    out += row(kFragmentLabels[i], fragment_counts[i]);
  out += "molecular weight (g/mol)\n";
  for (std::size_t i = 0; i < weight_bands.size(); ++i)
    out += row(kBandLabels[i], weight_bands[i]);
  out += row("250-500", weight_250_500);
  out += "molecules " + std::to_string(molecules) + "\n";
  return out;
}

DistributionStats library_stats(const MoleculeLibrary &lib,
                                const FragmentParams &params,
                                unsigned threads) {
  std::vector<std::pair<std::size_t, double>> rows(lib.records.size());
  parallel_for(rows.size(), threads, [&](std::size_t i) {
    const Molecule mol = parse_smiles(lib.records[i].smiles);
    const std::size_t n =
        mol.connected() ? fragment(mol, params).fragments.size()
                        : mol.components().size();
    rows[i] = { n, molecular_weight(mol) };
  });
  DistributionStats st;
  for (const auto &[n, w]: rows)
    st.add(n, w);
  return st;
}

DistributionStats dataset_stats(const std::vector<InstructionRecord> &records) {
  DistributionStats st;
  for (const InstructionRecord &r: records) {
    if (r.task != Task::kFragmentation)
      continue;
    const std::size_t n =
        static_cast<std::size_t>(std::count(r.output.begin(), r.output.end(), '.'))
        + 1;
    double w = 0.0;
    try {
      w = molecular_weight(parse_smiles(r.input));
    } catch (const SyntaxError &e) {
      throw FormatError("record " + r.id + ": " + e.what());
    }
    st.add(n, w);
  }
  return st;
}

}  // namespace molpipe
