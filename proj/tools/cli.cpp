#include "cli.h"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "molpipe/brics.h"
#include "molpipe/config.h"
#include "molpipe/dataset.h"
#include "molpipe/error.h"
#include "molpipe/metrics.h"
#include "molpipe/recombine.h"
#include "molpipe/resources.h"
#include "molpipe/smiles.h"
#include "molpipe/tokenizer.h"

namespace molpipe::cli {
namespace {

namespace fs = std::filesystem;

struct UsageError : Error {
  using Error::Error;
};

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> read_lines(const std::string &path) {
  std::istringstream in(read_file(path));
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    out.push_back(std::move(line));
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

Vocab load_vocab(const Config &c) {
  if (!c.vocab.empty())
    return Vocab::load(read_file(c.vocab));
  if (!c.groups.empty())
    return Vocab::build(read_file(c.groups));
  return Vocab::build_default();
}

TemplateSet load_templates(const Config &c) {
  if (!c.templates.empty())
    return TemplateSet::parse(read_file(c.templates));
  return TemplateSet::builtin();
}

FragmentParams fragment_params(const Config &c, std::optional<double> lib_k) {
  FragmentParams p;
  p.k = c.k ? *c.k : lib_k.value_or(kFallbackK);
  p.alpha = c.alpha;
  p.seed = c.seed;
  return p;
}

struct Flags {
  std::optional<std::string> config, seed, k, alpha, shards, out, vocab,
      groups, templates, special_pairing, threads;
  bool invalid_as_zero = false;
};

Config resolve_config(const Flags &f) {
  Config c;
  std::optional<std::string> path = f.config;
  if (!path)
    if (const char *env = std::getenv("MOLPIPE_CONFIG"))
      path = env;
  if (path)
    c.load_file(*path);
  c.load_env([](const char *name) { return std::getenv(name); });
  const std::pair<const std::optional<std::string> *, const char *> flags[] = {
    { &f.seed, "seed" },
    { &f.k, "k" },
    { &f.alpha, "alpha" },
    { &f.shards, "shard_size" },
    { &f.out, "out" },
    { &f.vocab, "vocab" },
    { &f.groups, "groups" },
    { &f.templates, "templates" },
    { &f.special_pairing, "special_pairing" },
    { &f.threads, "threads" },
  };
  for (const auto &[value, key]: flags)
    if (*value)
      c.set(key, **value);
  if (f.invalid_as_zero)
    c.invalid_as_zero = true;
  return c;
}

int cmd_preprocess(const Config &c, const std::string &corpus,
                   std::ostream &out) {
  const Vocab vocab = load_vocab(c);
  PreprocessOptions opt;
  opt.threads = c.threads;
  MoleculeLibrary lib;
  if (corpus == "-") {
    lib = preprocess(std::cin, vocab, opt);
  } else {
    std::ifstream in(corpus, std::ios::binary);
    if (!in)
      throw IoError("cannot read " + corpus);
    lib = preprocess(in, vocab, opt);
  }
  const std::string path = c.out.empty() ? "library.tsv" : c.out;
  std::ofstream lf(path, std::ios::binary | std::ios::trunc);
  if (!lf)
    throw IoError("cannot write " + path);
  write_library(lf, lib);
  lf.close();
  if (!lf)
    throw IoError("failed writing " + path);
  out << stats_json(lib) << "\n";
  return kOk;
}

int cmd_fragment(const Config &c, const std::string &arg, bool cap_carbon,
                 std::ostream &out, std::ostream &err) {
  std::vector<std::string> inputs;
  std::error_code ec;
  if (fs::is_regular_file(arg, ec)) {
    for (std::string &line: read_lines(arg))
      if (!line.empty())
        inputs.push_back(std::move(line));
  } else {
    inputs.push_back(arg);
  }
  const FragmentParams params = fragment_params(c, std::nullopt);
  int failures = 0;
  for (const std::string &s: inputs) {
    try {
      const FragmentSet fs = fragment(parse_smiles(s), params);
      if (inputs.size() > 1)
        out << "# " << s << "\n";
      out << "cap " << fs.cap << " (L=" << fs.parent_canonical.size()
          << ", k=" << fmt(params.k) << ", alpha=" << fmt(params.alpha)
          << ") eligible " << fs.eligible << " cut " << fs.cleaved.size()
          << "\n";
      for (const Molecule &f: fs.fragments)
        out << (cap_carbon ? canonical_smiles(carbon_cap(f))
                           : canonical_smiles(f))
            << "\n";
    } catch (const Error &e) {
      ++failures;
      err << "molpipe: data error: " << s << ": " << e.what() << "\n";
    }
  }
  return failures ? kData : kOk;
}

int cmd_build(const Config &c, const std::string &library,
              const std::string &reactions, std::ostream &out) {
  if (library.empty() && reactions.empty())
    throw UsageError("build needs --library and/or --reactions");
  const Vocab vocab = load_vocab(c);
  const TemplateSet templates = load_templates(c);
  const std::string dir = c.out.empty() ? "dataset" : c.out;

  MoleculeLibrary lib;
  if (!library.empty()) {
    std::ifstream in(library, std::ios::binary);
    if (!in)
      throw IoError("cannot read " + library);
    lib = read_library(in);
  }
  PairOptions opt;
  opt.fragment = fragment_params(c, lib.k);
  opt.pairing = c.special_pairing;
  opt.threads = c.threads;

  std::vector<std::pair<std::string, std::string>> echo = {
    { "seed", c.get("seed") },
    { "k", fmt(opt.fragment.k) },
    { "alpha", c.get("alpha") },
    { "shard_size", c.get("shard_size") },
    { "special_pairing", c.get("special_pairing") },
    { "max_tokens", std::to_string(opt.max_tokens) },
    { "max_weight", fmt(opt.max_weight) },
  };
  JsonlWriter writer(dir, c.shard_size, echo);
  const RecordSink sink = [&](const InstructionRecord &r) { writer.write(r); };
  auto report = [&](const char *name, const PairStats &st) {
    out << name << ": inputs " << st.inputs << ", pairs " << st.pairs
        << ", skipped no-brics " << st.no_brics_bond << " unparseable "
        << st.unparseable << " empty " << st.empty << " too-long "
        << st.too_long << " too-heavy " << st.too_heavy << " duplicate "
        << st.duplicates << " disconnected " << st.disconnected << "\n";
  };
  if (!library.empty())
    report("pretrain", make_pretrain_pairs(lib, opt, templates, vocab, sink));
  if (!reactions.empty()) {
    std::ifstream in(reactions, std::ios::binary);
    if (!in)
      throw IoError("cannot read " + reactions);
    report("finetune",
           make_finetune_pairs(read_reactions(in), opt, templates, vocab, sink));
  }
  const Manifest m = writer.finish();
  out << "wrote " << m.records << " records in " << m.shards.size()
      << " shards to " << dir << "\n";
  for (const ShardInfo &s: m.shards)
    out << "  " << s.path << " " << s.records << " " << s.sha256 << "\n";
  return kOk;
}

int cmd_tokenize(const Config &c, const std::string &text,
                 const std::string &kind, bool show_tokens, std::ostream &out) {
  const Vocab vocab = load_vocab(c);
  SourceKind k;
  if (kind == "molecule")
    k = SourceKind::kMolecule;
  else if (kind == "fragments")
    k = SourceKind::kFragmentSet;
  else
    throw UsageError("--kind must be molecule or fragments");
  const TokenStream ts = tokenize(text, vocab, k, c.special_pairing);
  for (std::size_t i = 0; i < ts.ids.size(); ++i) {
    out << (i ? " " : "");
    if (show_tokens)
      out << vocab.entry(ts.ids[i]).token;
    else
      out << ts.ids[i];
  }
  out << "\n";
  return kOk;
}

int cmd_vocab(const Config &c, std::ostream &out) {
  const Vocab vocab = load_vocab(c);
  if (c.out.empty()) {
    out << vocab.save();
    return kOk;
  }
  std::ofstream f(c.out, std::ios::binary | std::ios::trunc);
  f << vocab.save();
  f.close();
  if (!f)
    throw IoError("failed writing " + c.out);
  out << "wrote " << vocab.size() << " tokens to " << c.out << "\n";
  return kOk;
}

std::vector<InstructionRecord> read_records(const std::string &path) {
  std::error_code ec;
  if (fs::is_directory(path, ec))
    return read_dataset(path);
  std::vector<InstructionRecord> out;
  for (const std::string &line: read_lines(path))
    if (!line.empty())
      out.push_back(parse_jsonl(line));
  return out;
}

bool is_dataset(const std::string &path) {
  std::error_code ec;
  return fs::is_directory(path, ec)
         || (path.size() > 6 && path.substr(path.size() - 6) == ".jsonl");
}

int cmd_eval(const Config &c, const std::string &preds_path,
             const std::string &refs_path, bool json, std::ostream &out) {
  std::vector<std::string> preds, refs;
  if (is_dataset(refs_path)) {
    std::map<std::string, std::string> by_id;
    for (const std::string &line: read_lines(preds_path)) {
      if (line.empty())
        continue;
      const auto tab = line.find('\t');
      if (tab == std::string::npos)
        throw FormatError("prediction lines must be id<TAB>smiles");
      by_id[line.substr(0, tab)] = line.substr(tab + 1);
    }
    for (const InstructionRecord &r: read_records(refs_path)) {
      refs.push_back(r.output);
      const auto it = by_id.find(r.id);
      preds.push_back(it == by_id.end() ? std::string() : it->second);
    }
  } else {
    preds = read_lines(preds_path);
    refs = read_lines(refs_path);
  }
  EvalOptions opt;
  opt.invalid_as_zero = c.invalid_as_zero;
  opt.threads = c.threads;
  const EvalReport rep = evaluate(preds, refs, opt);
  out << (json ? to_json(rep) + "\n" : to_table(rep));
  return kOk;
}

int cmd_stats(const Config &c, const std::string &path, bool json,
              std::ostream &out) {
  DistributionStats st;
  if (is_dataset(path)) {
    st = dataset_stats(read_records(path));
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in)
      throw IoError("cannot read " + path);
    const MoleculeLibrary lib = read_library(in);
    st = library_stats(lib, fragment_params(c, lib.k), c.threads);
  }
  out << (json ? st.to_json() + "\n" : st.to_table());
  return kOk;
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err) {
  CLI::App app { "Molecule fragmentation and instruction dataset toolkit",
                 "molpipe" };
  app.require_subcommand(1);
  app.fallthrough();

  Flags f;
  app.add_option("--config", f.config, "key = value config file");
  app.add_option("--seed", f.seed, "Seed for cut sampling");
  app.add_option("--k", f.k, "Average SMILES length override");
  app.add_option("--alpha", f.alpha, "Fragment cap elasticity");
  app.add_option("--shards", f.shards, "Records per shard");
  app.add_option("--out", f.out, "Output path");
  app.add_option("--vocab", f.vocab, "Vocabulary file");
  app.add_option("--groups", f.groups, "Functional group list");
  app.add_option("--templates", f.templates, "Instruction template file");
  app.add_option("--special-pairing", f.special_pairing, "mnemonic or swapped");
  app.add_option("--threads", f.threads, "Worker threads, 0 for all cores");
  app.add_flag("--invalid-as-zero", f.invalid_as_zero,
               "Score fingerprint similarity of invalid pairs as 0");

  std::string corpus, smiles, library, reactions, text, kind = "molecule",
                                                      preds, refs, stats_in;
  bool carbon = false, show_tokens = false, json = false;

  auto *pre = app.add_subcommand("preprocess", "Corpus to molecule library");
  pre->add_option("corpus", corpus, "One SMILES per line, - for stdin")->required();

  auto *frag = app.add_subcommand("fragment", "BRICS-fragment a SMILES or file");
  frag->add_option("input", smiles, "SMILES string or file")->required();
  frag->add_flag("--carbon-cap", carbon, "Replace dummies with carbon");

  auto *build = app.add_subcommand("build", "Write instruction JSONL shards");
  build->add_option("--library", library, "Library TSV from preprocess");
  build->add_option("--reactions", reactions, "reactants<TAB>product<TAB>type");

  auto *tok = app.add_subcommand("tokenize", "Print token ids");
  tok->add_option("text", text, "SMILES or dot-joined fragments")->required();
  tok->add_option("--kind", kind, "molecule or fragments");
  tok->add_flag("--tokens", show_tokens, "Print token strings");

  auto *voc = app.add_subcommand("vocab", "Write the vocabulary file");

  auto *ev = app.add_subcommand("eval", "Score predictions");
  ev->add_option("preds", preds, "Predictions file")->required();
  ev->add_option("refs", refs, "References file or dataset")->required();
  ev->add_flag("--json", json, "JSON output");

  auto *st = app.add_subcommand("stats", "Fragment and weight histograms");
  st->add_option("input", stats_in, "Library TSV or dataset")->required();
  st->add_flag("--json", json, "JSON output");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError &e) {
    err << "molpipe: usage error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    const Config c = resolve_config(f);
    if (pre->parsed())
      return cmd_preprocess(c, corpus, out);
    if (frag->parsed())
      return cmd_fragment(c, smiles, carbon, out, err);
    if (build->parsed())
      return cmd_build(c, library, reactions, out);
    if (tok->parsed())
      return cmd_tokenize(c, text, kind, show_tokens, out);
    if (voc->parsed())
      return cmd_vocab(c, out);
    if (ev->parsed())
      return cmd_eval(c, preds, refs, json, out);
    if (st->parsed())
      return cmd_stats(c, stats_in, json, out);
    return kUsage;
  } catch (const UsageError &e) {
    err << "molpipe: usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError &e) {
    err << "molpipe: io error: " << e.what() << "\n";
    return kIo;
  } catch (const ConfigError &e) {
    err << "molpipe: config error: " << e.what() << "\n";
    return kConfig;
  } catch (const Error &e) {
    err << "molpipe: data error: " << e.what() << "\n";
    return kData;
  } catch (const std::exception &e) {
    err << "molpipe: error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace molpipe::cli
