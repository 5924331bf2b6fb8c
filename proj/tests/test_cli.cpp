#include "doctest.h"
#include "support.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.h"

namespace fs = std::filesystem;
using molpipe::cli::run;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(const std::vector<std::string> &args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return { code, out.str(), err.str() };
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write(const fs::path &p, const std::string &text) {
  std::ofstream(p, std::ios::binary) << text;
}

}  // namespace

TEST_CASE("fragment prints the fragments and the cap") {
  const Result r = call({ "fragment", "OCCCN1CCOCC1" });
  CHECK(r.code == 0);
  CHECK(r.out.find("cap 12 (L=12, k=48, alpha=1.5)") == 0);
  CHECK(r.out.find("[4*]CCCO\n") != std::string::npos);
  CHECK(r.out.find("[5*]N1CCOCC1\n") != std::string::npos);

  const Result capped = call({ "fragment", "OCCCN1CCOCC1", "--carbon-cap" });
  CHECK(capped.out.find("CN1CCOCC1\n") != std::string::npos);

  const Result k = call({ "--k", "4", "--alpha", "1", "fragment", "OCCCN1CCOCC1" });
  CHECK(k.out.find("cap 3 (L=12, k=4, alpha=1)") == 0);
}

TEST_CASE("fragment reads files and reports bad lines") {
  const fs::path dir = testsupport::temp_dir("cli");
  write(dir / "in.smi", "OCCCN1CCOCC1\nC1CC\nC\n");
  const Result r = call({ "fragment", (dir / "in.smi").string() });
  CHECK(r.code == molpipe::cli::kData);
  CHECK(r.out.find("# OCCCN1CCOCC1") != std::string::npos);
  CHECK(r.out.find("# C\n") != std::string::npos);
  CHECK(r.err.find("C1CC") != std::string::npos);
}

TEST_CASE("preprocess, build, stats and eval") {
  const fs::path dir = testsupport::temp_dir("cli");
  std::string corpus;
  const auto lines = testsupport::corpus();
  for (std::size_t i = 0; i < 300; ++i)
    corpus += lines[i] + "\n";
  write(dir / "corpus.smi", corpus + lines[0] + "\n");
  const std::string lib = (dir / "lib.tsv").string();

  const Result pre = call({ "preprocess", (dir / "corpus.smi").string(), "--out", lib });
  REQUIRE(pre.code == 0);
  CHECK(pre.out.find("\"duplicates\": 1") != std::string::npos);
  CHECK(fs::exists(lib));

  const std::string rx = testsupport::fixture_path("reactions.tsv");
  const std::vector<std::string> common { "--library", lib, "--reactions", rx,
                                          "--seed", "4", "--shards", "128" };
  auto build_into = [&](const std::string &out, const std::string &threads) {
    std::vector<std::string> args { "build", "--out", out, "--threads", threads };
    args.insert(args.end(), common.begin(), common.end());
    return call(args);
  };
  const Result b1 = build_into((dir / "ds1").string(), "1");
  REQUIRE(b1.code == 0);
  const Result b2 = build_into((dir / "ds2").string(), "3");
  REQUIRE(b2.code == 0);
  CHECK(slurp(dir / "ds1" / "manifest.json") == slurp(dir / "ds2" / "manifest.json"));
  for (const auto &entry: fs::directory_iterator(dir / "ds1"))
    CHECK(slurp(entry.path()) == slurp(dir / "ds2" / entry.path().filename()));
  CHECK(slurp(dir / "ds1" / "manifest.json").find("\"seed\": \"4\"") != std::string::npos);

  const Result other_seed = call({ "build", "--out", (dir / "ds3").string(), "--library", lib,
                                   "--seed", "5", "--k", "10" });
  REQUIRE(other_seed.code == 0);
  CHECK(slurp(dir / "ds1" / "manifest.json") != slurp(dir / "ds3" / "manifest.json"));

  const Result st = call({ "stats", lib });
  CHECK(st.code == 0);
  CHECK(st.out.find(">10") != std::string::npos);
  CHECK(st.out.find("250-500") != std::string::npos);
  const Result dst = call({ "stats", (dir / "ds1").string(), "--json" });
  CHECK(dst.code == 0);
  CHECK(dst.out.find("\"fragment_counts\"") != std::string::npos);

  // identical prediction and reference files
  std::string refs;
  for (std::size_t i = 0; i < 50; ++i)
    refs += lines[i] + "\n";
  write(dir / "preds.txt", refs);
  write(dir / "refs.txt", refs);
  const Result ev = call({ "eval", (dir / "preds.txt").string(), (dir / "refs.txt").string(),
                           "--json" });
  CHECK(ev.code == 0);
  CHECK(ev.out.find("\"exact\": 1.0") != std::string::npos);
  CHECK(ev.out.find("\"validity\": 1.0") != std::string::npos);
  const Result table = call({ "eval", (dir / "preds.txt").string(), (dir / "refs.txt").string() });
  CHECK(table.out.find("EXACT") == 0);

  // scoring against the dataset by record id
  std::string keyed;
  for (const auto &entry: fs::directory_iterator(dir / "ds1")) {
    if (entry.path().extension() != ".jsonl")
      continue;
    std::istringstream in(slurp(entry.path()));
    for (std::string line; std::getline(in, line);) {
      const auto id_at = line.find("\"id\":\"") + 6;
      const auto out_at = line.find("\"output\":\"") + 10;
      keyed += line.substr(id_at, line.find('"', id_at) - id_at) + "\t"
               + line.substr(out_at, line.find('"', out_at) - out_at) + "\n";
    }
  }
  write(dir / "keyed.tsv", keyed);
  const Result dev = call({ "eval", (dir / "keyed.tsv").string(), (dir / "ds1").string(), "--json" });
  CHECK(dev.code == 0);
  CHECK(dev.out.find("\"exact\": 1.0") != std::string::npos);
}

TEST_CASE("tokenize and vocab") {
  const Result ids = call({ "tokenize", "[1*]CCO", "--kind", "fragments", "--tokens" });
  CHECK(ids.code == 0);
  CHECK(ids.out == "<BOF> [1*] C C O <EOF>\n");
  const Result swapped = call({ "tokenize", "[1*]CCO", "--kind", "fragments", "--tokens",
                              "--special-pairing", "swapped" });
  CHECK(swapped.out == "<BOM> [1*] C C O <EOM>\n");
  const Result num = call({ "tokenize", "CCO" });
  CHECK(num.out.rfind("2 ", 0) == 0);

  const fs::path dir = testsupport::temp_dir("cli");
  const std::string vf = (dir / "vocab.tsv").string();
  CHECK(call({ "vocab", "--out", vf }).code == 0);
  const Result again = call({ "--vocab", vf, "tokenize", "[1*]CCO", "--kind", "fragments" });
  CHECK(again.out == call({ "tokenize", "[1*]CCO", "--kind", "fragments" }).out);
  write(dir / "groups.txt", "CCO\n");
  const Result g = call({ "--groups", (dir / "groups.txt").string(), "tokenize", "CCO", "--tokens" });
  CHECK(g.out == "<BOM> CCO <EOM>\n");
  CHECK(call({ "tokenize", "CCO", "--kind", "nope" }).code == molpipe::cli::kUsage);
}

TEST_CASE("configuration precedence") {
  const fs::path dir = testsupport::temp_dir("cli");
  write(dir / "run.conf", "alpha = 1\nk = 4\n");
  const std::string conf = (dir / "run.conf").string();
  CHECK(call({ "--config", conf, "fragment", "OCCCN1CCOCC1" }).out.find("k=4, alpha=1)")
        != std::string::npos);
  setenv("MOLPIPE_ALPHA", "2", 1);
  CHECK(call({ "--config", conf, "fragment", "OCCCN1CCOCC1" }).out.find("k=4, alpha=2)")
        != std::string::npos);
  CHECK(call({ "--config", conf, "fragment", "OCCCN1CCOCC1", "--alpha", "3" })
            .out.find("k=4, alpha=3)")
        != std::string::npos);
  unsetenv("MOLPIPE_ALPHA");
}

TEST_CASE("exit codes") {
  CHECK(call({}).code == molpipe::cli::kUsage);
  CHECK(call({ "frobnicate" }).code == molpipe::cli::kUsage);
  const Result flag = call({ "fragment", "C", "--bogus" });
  CHECK(flag.code == molpipe::cli::kUsage);
  CHECK(flag.err.find("usage error") != std::string::npos);
  CHECK(call({ "build" }).code == molpipe::cli::kUsage);
  CHECK(call({ "--help" }).code == 0);

  const Result io = call({ "eval", "/nonexistent/a", "/nonexistent/b" });
  CHECK(io.code == molpipe::cli::kIo);
  CHECK(io.err.find("io error") != std::string::npos);
  CHECK(call({ "--config", "/nonexistent/x.conf", "fragment", "C" }).code == molpipe::cli::kIo);

  const fs::path dir = testsupport::temp_dir("cli");
  write(dir / "bad.conf", "alpha = -2\n");
  const Result cfg = call({ "--config", (dir / "bad.conf").string(), "fragment", "C" });
  CHECK(cfg.code == molpipe::cli::kConfig);
  CHECK(cfg.err.find("config error") != std::string::npos);
  CHECK(call({ "--alpha", "zero", "fragment", "C" }).code == molpipe::cli::kConfig);

  const Result data = call({ "fragment", "C1CC" });
  CHECK(data.code == molpipe::cli::kData);
  write(dir / "a.txt", "C\nN\n");
  write(dir / "b.txt", "C\n");
  CHECK(call({ "eval", (dir / "a.txt").string(), (dir / "b.txt").string() }).code
        == molpipe::cli::kData);
}
