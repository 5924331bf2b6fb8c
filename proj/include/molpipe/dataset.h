#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "molpipe/brics.h"
#include "molpipe/tokenizer.h"

namespace molpipe {

constexpr double kMaxWeight = 1000.0;
constexpr std::size_t kMaxTokens = 512;

struct LibraryRecord {
  std::string smiles;  // canonical
  double weight = 0.0;
  std::size_t token_length = 0;
};

struct PreprocessStats {
  std::size_t lines = 0;
  std::size_t blank = 0;
  std::size_t unreadable = 0;
  std::size_t duplicates = 0;
  std::size_t invalid = 0;
  std::size_t weight_rejections = 0;
  std::size_t length_rejections = 0;
  std::size_t accepted = 0;
};

struct MoleculeLibrary {
  std::vector<LibraryRecord> records;  // sorted by smiles, unique
  PreprocessStats stats;
  // Mean canonical SMILES length; absent for an empty library.
  std::optional<double> k;
};

struct PreprocessOptions {
  double max_weight = kMaxWeight;
  std::size_t max_tokens = kMaxTokens;
  unsigned threads = 1;
};

// Reads one SMILES per line (anything after the first whitespace is
// ignored). Stages, in order: canonical dedup, validity, weight, token
// length. Unparseable lines are counted, never fatal.
MoleculeLibrary preprocess(std::istream &corpus, const Vocab &vocab,
                           const PreprocessOptions &options = {});

// "smiles<TAB>weight<TAB>tokens" lines. read_library recomputes k and
// throws FormatError on malformed lines.
void write_library(std::ostream &out, const MoleculeLibrary &lib);
MoleculeLibrary read_library(std::istream &in);
std::string stats_json(const MoleculeLibrary &lib);

enum class Task { kFragmentation, kRecombination, kRetrosynthesis, kReaction };
enum class Direction { kForward, kBackward };

std::string_view to_string(Task t);
std::string_view to_string(Direction d);
Task parse_task(std::string_view text);
Direction direction_of(Task t);

struct InstructionRecord {
  std::string id;
  Task task = Task::kFragmentation;
  Direction direction = Direction::kForward;
  std::string instruction;
  std::string input;
  std::string output;
  std::vector<std::pair<std::string, std::string>> meta;  // in emission order
};

// One JSON object, keys id, task, direction, instruction, input, output,
// meta.
std::string to_jsonl(const InstructionRecord &r);
InstructionRecord parse_jsonl(std::string_view line);

class TemplateSet {
 public:
  // "task<TAB>template" lines, '#' comments. Throws FormatError for unknown
  // tasks, duplicates and missing tasks.
  static TemplateSet parse(std::string_view text);
  static const TemplateSet &builtin();

  const std::string &get(Task t) const;

 private:
  std::map<Task, std::string> templates_;
};

// Replaces {input} with the payload and {name} with meta values. Throws
// TemplateError when a slot has no value or a brace is unbalanced.
std::string fill_template(
    const TemplateSet &templates, Task task, std::string_view payload,
    const std::vector<std::pair<std::string, std::string>> &meta = {});

using RecordSink = std::function<void(const InstructionRecord &)>;

struct PairOptions {
  FragmentParams fragment;
  SpecialPairing pairing = SpecialPairing::kMnemonic;
  std::size_t max_tokens = kMaxTokens;
  double max_weight = kMaxWeight;
  unsigned threads = 1;
};

struct PairStats {
  std::size_t inputs = 0;
  std::size_t pairs = 0;
  std::size_t no_brics_bond = 0;
  std::size_t unparseable = 0;
  std::size_t empty = 0;
  std::size_t too_long = 0;
  std::size_t too_heavy = 0;
  std::size_t duplicates = 0;
  std::size_t disconnected = 0;
};

// Two records (fragmentation forward, recombination backward) per library
// molecule with at least one BRICS bond, in library order.
PairStats make_pretrain_pairs(const MoleculeLibrary &lib,
                              const PairOptions &options,
                              const TemplateSet &templates, const Vocab &vocab,
                              const RecordSink &sink);

struct Reaction {
  std::vector<std::string> reactants;
  std::string product;
  std::string reaction_type;
};

// "reactants_dot_joined<TAB>product<TAB>reaction_type"; blank lines and
// '#' comments skipped. Lines with fewer than two columns come back with an
// empty product so the pair builder can count them.
std::vector<Reaction> read_reactions(std::istream &in);

// Two records (retrosynthesis forward, reaction backward) per reaction, in
// input order.
PairStats make_finetune_pairs(const std::vector<Reaction> &reactions,
                              const PairOptions &options,
                              const TemplateSet &templates, const Vocab &vocab,
                              const RecordSink &sink);

struct ShardInfo {
  std::string path;  // relative to the output directory
  std::size_t records = 0;
  std::string sha256;
};

struct Manifest {
  std::vector<ShardInfo> shards;
  std::size_t records = 0;
  std::vector<std::pair<std::string, std::string>> config;

  std::string to_json() const;
};

// Streams records into shard-00000.jsonl, shard-00001.jsonl, ... with at
// most shard_size records each, then writes manifest.json. If the writer is
// destroyed before finish() (an exception, say) every file it created is
// removed. Throws IoError.
class JsonlWriter {
 public:
  JsonlWriter(std::filesystem::path out_dir, std::size_t shard_size,
              std::vector<std::pair<std::string, std::string>> config = {});
  ~JsonlWriter();
  JsonlWriter(const JsonlWriter &) = delete;
  JsonlWriter &operator=(const JsonlWriter &) = delete;

  void write(const InstructionRecord &r);
  Manifest finish();

 private:
  void close_shard();
  void cleanup() noexcept;

  struct State;
  State *state_;
};

Manifest emit_jsonl(const std::vector<InstructionRecord> &records,
                    std::size_t shard_size,
                    const std::filesystem::path &out_dir,
                    std::vector<std::pair<std::string, std::string>> config = {});

// Reads every shard listed in dir/manifest.json, checking digests. Throws
// IoError or FormatError.
std::vector<InstructionRecord> read_dataset(const std::filesystem::path &dir);

// Fragment-count buckets 1..10 and >10; weight bands <250, 250-320,
// 320-480, 480-500, >=500, plus the 250-500 aggregate.
struct DistributionStats {
  std::size_t molecules = 0;
  std::vector<std::size_t> fragment_counts = std::vector<std::size_t>(11, 0);
  std::vector<std::size_t> weight_bands = std::vector<std::size_t>(5, 0);
  std::size_t weight_250_500 = 0;

  void add(std::size_t fragments, double weight);
  std::size_t modal_fragment_count() const;
  double fraction_over_ten() const;
  std::string to_json() const;
  std::string to_table() const;
};

DistributionStats library_stats(const MoleculeLibrary &lib,
                                const FragmentParams &params,
                                unsigned threads = 1);
DistributionStats dataset_stats(const std::vector<InstructionRecord> &records);

}  // namespace molpipe
