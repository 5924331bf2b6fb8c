#include "doctest.h"
#include "support.h"

#include <cmath>
#include <random>

#include "molpipe/error.h"
#include "molpipe/fingerprint.h"
#include "molpipe/metrics.h"
#include "molpipe/recombine.h"
#include "molpipe/smiles.h"

using namespace molpipe;

namespace {

std::string random_string(std::mt19937_64 &rng, std::size_t max_len,
                          const std::string &alphabet) {
  std::string s(rng() % (max_len + 1), ' ');
  for (char &c: s)
    c = alphabet[rng() % alphabet.size()];
  return s;
}

constexpr FingerprintScheme kSchemes[] = { FingerprintScheme::kMorgan,
                                           FingerprintScheme::kPath,
                                           FingerprintScheme::kKeys };

}  // namespace

TEST_CASE("exact match") {
  CHECK(exact_match("c1ccccc1", "C1=CC=CC=C1") == 1);
  CHECK(exact_match("CCO", "OCC") == 1);
  CHECK(exact_match("CCO", "CCN") == 0);
  CHECK(exact_match("not-smiles", "CCO") == 0);
  CHECK(exact_match("CCO", "not-smiles") == 0);
  CHECK(exact_match("", "") == 0);
  for (const std::string &s: testsupport::corpus()) {
    CHECK(exact_match(s, s) == 1);
  }
}

TEST_CASE("levenshtein examples") {
  CHECK(levenshtein("kitten", "sitting") == 3);
  CHECK(levenshtein("", "abc") == 3);
  CHECK(levenshtein("abc", "") == 3);
  CHECK(levenshtein("", "") == 0);
  CHECK(levenshtein("CCO", "CCO") == 0);
  CHECK(levenshtein("flaw", "lawn") == 2);
  CHECK(levenshtein_dp("kitten", "sitting") == 3);
}

TEST_CASE("levenshtein kernels agree with a full-matrix oracle") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1500; ++i) {
    // lengths straddle the 64-character block boundary
    const std::size_t max_len = i % 3 == 0 ? 200 : 70;
    const std::string a = random_string(rng, max_len, i % 2 ? "CNO" : "CNOc1()=[]");
    const std::string b = random_string(rng, max_len, i % 2 ? "CNO" : "CNOc1()=[]");
    const std::size_t want = testsupport::edit_distance(a, b);
    CHECK(levenshtein(a, b) == want);
    CHECK(levenshtein_dp(a, b) == want);
  }
  const std::string x(64, 'C'), y(128, 'C');
  CHECK(levenshtein(x, y) == 64);
  CHECK(levenshtein(x + "N", x + "O") == 1);
}

TEST_CASE("levenshtein symmetry and triangle inequality") {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 500; ++i) {
    const std::string a = random_string(rng, 90, "ab"),
                      b = random_string(rng, 90, "ab"),
                      c = random_string(rng, 90, "ab");
    CHECK(levenshtein(a, b) == levenshtein(b, a));
    CHECK(levenshtein(a, c) <= levenshtein(a, b) + levenshtein(b, c));
  }
}

TEST_CASE("bleu hand values") {
  CHECK(bleu("CCO", "CCO") == doctest::Approx(1.0));
  CHECK(bleu("OCCCN1CCOCC1", "OCCCN1CCOCC1") == doctest::Approx(1.0));
  CHECK(bleu("", "CCO") == 0.0);
  CHECK(bleu("N", "CCO") == 0.0);
  // unigrams 3/3, bigrams (1+1)/(2+1), trigrams (0+1)/(1+1)
  CHECK(bleu("CCO", "OCC") == doctest::Approx(std::cbrt(1.0 / 3.0)).epsilon(1e-12));
  // unigrams 2/3, bigrams (1+1)/(2+1), trigrams (0+1)/(1+1)
  CHECK(bleu("CCO", "CCN") == doctest::Approx(std::cbrt(2.0 / 3 * 2.0 / 3 * 0.5)).epsilon(1e-12));
  // shorter hypothesis: brevity penalty exp(1 - 3/2)
  CHECK(bleu("CC", "CCC") == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
}

TEST_CASE("bleu matches the reference implementation") {
  const auto rows = testsupport::read_tsv(testsupport::fixture_path("bleu_pairs.tsv"));
  REQUIRE(rows.size() == 100);
  for (const auto &r: rows) {
    CAPTURE(r[0]);
    CHECK(std::fabs(bleu(r[0], r[1]) - std::stod(r[2])) <= 1e-9);
  }
}

TEST_CASE("fingerprint basics") {
  const Molecule methane = parse_smiles("C");
  const FingerprintBitset fp = fingerprint(methane, FingerprintScheme::kMorgan);
  CHECK(fp.count() >= 1);
  CHECK(fp.count() <= 3);
  CHECK(fp.width() == kDefaultFingerprintWidth);
  CHECK(fingerprint(methane, FingerprintScheme::kPath).count() == 0);
  for (const auto s: kSchemes) {
    const Molecule m = parse_smiles("OCCCN1CCOCC1");
    CHECK(fingerprint(m, s) == fingerprint(m, s));
    CHECK(fingerprint(m, s, 256).width() == 256);
  }
  CHECK_THROWS_AS(FingerprintBitset(FingerprintScheme::kPath, 1000), DomainError);
  CHECK_THROWS_AS(FingerprintBitset(FingerprintScheme::kPath, 0), DomainError);
  CHECK_THROWS_AS(fingerprint(parse_smiles("CC(C)(C)(C)C"), FingerprintScheme::kMorgan),
                  DomainError);
  CHECK_THROWS_AS(fingerprint(methane, FingerprintScheme::kKeys, 64), DomainError);
  CHECK(structural_key_count() > 100);
  CHECK(parse_fingerprint_scheme("keys") == FingerprintScheme::kKeys);
  CHECK_THROWS_AS(parse_fingerprint_scheme("maccs"), DomainError);
}

TEST_CASE("structural keys fire where expected") {
  const FingerprintBitset benzene = fingerprint(parse_smiles("c1ccccc1"), FingerprintScheme::kKeys);
  const FingerprintBitset hexane = fingerprint(parse_smiles("CCCCCC"), FingerprintScheme::kKeys);
  CHECK(benzene.count() > 0);
  CHECK_FALSE(benzene == hexane);
  CHECK(benzene.test(0));  // at least one carbon
  CHECK(hexane.test(0));
}

TEST_CASE("fingerprints ignore atom order") {
  const Molecule benzene = parse_smiles("c1ccccc1");
  for (std::uint64_t seed = 0; seed < 10; ++seed)
    CHECK(fingerprint(parse_smiles(random_smiles(benzene, seed)), FingerprintScheme::kPath)
          == fingerprint(benzene, FingerprintScheme::kPath));
  const auto corpus = testsupport::corpus();
  for (std::size_t i = 0; i < corpus.size(); i += 20) {
    const Molecule m = parse_smiles(corpus[i]);
    const Molecule r = parse_smiles(random_smiles(m, i));
    for (const auto s: kSchemes)
      CHECK(fingerprint(m, s) == fingerprint(r, s));
  }
}

TEST_CASE("tanimoto") {
  FingerprintBitset a(FingerprintScheme::kPath, 128), b(FingerprintScheme::kPath, 128);
  CHECK(tanimoto(a, b) == 1.0);
  a.set(1);
  a.set(70);
  CHECK(tanimoto(a, a) == 1.0);
  b.set(2);
  CHECK(tanimoto(a, b) == 0.0);
  b.set(70);
  CHECK(tanimoto(a, b) == doctest::Approx(1.0 / 3.0));
  CHECK(tanimoto(a, b) == tanimoto(b, a));
  CHECK_THROWS_AS(tanimoto(a, FingerprintBitset(FingerprintScheme::kMorgan, 128)), DomainError);
  CHECK_THROWS_AS(tanimoto(a, FingerprintBitset(FingerprintScheme::kPath, 256)), DomainError);

  std::mt19937_64 rng(8);
  for (int i = 0; i < 300; ++i) {
    FingerprintBitset x(FingerprintScheme::kMorgan, 1024), y(FingerprintScheme::kMorgan, 1024);
    const int nx = rng() % 200, ny = rng() % 200;
    for (int j = 0; j < nx; ++j)
      x.set(rng());
    for (int j = 0; j < ny; ++j)
      y.set(rng());
    const double t = tanimoto(x, y);
    CHECK(t >= 0.0);
    CHECK(t <= 1.0);
    CHECK(t == doctest::Approx(testsupport::tanimoto_reference(x.words(), y.words())));
  }
}

TEST_CASE("fragments resemble their parent more than a stranger") {
  const auto corpus = testsupport::corpus();
  int wins = 0, n = 0;
  for (std::size_t i = 0; i < 400; ++i) {
    const Molecule m = parse_smiles(corpus[i]);
    const Molecule other = parse_smiles(corpus[(i + 997) % corpus.size()]);
    std::string capped;
    for (const Molecule &f: fragment(m, {}).fragments)
      capped += (capped.empty() ? "" : ".") + canonical_smiles(carbon_cap(f));
    const auto fc = fingerprint(parse_smiles(capped), FingerprintScheme::kMorgan);
    wins += tanimoto(fc, fingerprint(m, FingerprintScheme::kMorgan))
            > tanimoto(fc, fingerprint(other, FingerprintScheme::kMorgan));
    ++n;
  }
  CHECK(wins * 100 >= n * 95);
}

TEST_CASE("top-k accuracy") {
  const std::vector<std::vector<std::string>> ranked {
    { "CCN", "CCC", "OCC" },
    { "c1ccccc1" },
    {},
  };
  const std::vector<std::string> refs { "CCO", "C1=CC=CC=C1", "CCO" };
  CHECK(topk_accuracy(ranked, refs, 1) == doctest::Approx(1.0 / 3));
  CHECK(topk_accuracy(ranked, refs, 2) == doctest::Approx(1.0 / 3));
  CHECK(topk_accuracy(ranked, refs, 3) == doctest::Approx(2.0 / 3));
  CHECK(topk_accuracy(ranked, refs, 50) == doctest::Approx(2.0 / 3));
  double prev = 0;
  for (int k = 1; k < 6; ++k) {
    const double v = topk_accuracy(ranked, refs, k);
    CHECK(v >= prev);
    prev = v;
  }
  CHECK(topk_accuracy({ {}, {} }, { "C", "N" }, 3) == 0.0);
  CHECK_THROWS_AS(topk_accuracy(ranked, refs, 0), DomainError);
  CHECK_THROWS_AS(topk_accuracy(ranked, { "C" }, 1), DomainError);
}

TEST_CASE("evaluate identity and degenerate inputs") {
  const auto corpus = testsupport::corpus();
  const std::vector<std::string> refs(corpus.begin(), corpus.begin() + 200);
  EvalOptions opt;
  opt.threads = 3;
  const EvalReport id = evaluate(refs, refs, opt);
  CHECK(id.n == 200);
  CHECK(id.exact == 1.0);
  CHECK(id.bleu == doctest::Approx(1.0));
  CHECK(id.levenshtein == 0.0);
  CHECK(*id.fts_path == 1.0);
  CHECK(*id.fts_keys == 1.0);
  CHECK(*id.fts_morgan == 1.0);
  CHECK(id.validity == 1.0);

  const std::vector<std::string> junk(refs.size(), "((");
  const EvalReport bad = evaluate(junk, refs);
  CHECK(bad.validity == 0.0);
  CHECK(bad.exact == 0.0);
  CHECK_FALSE(bad.fts_morgan.has_value());
  CHECK(bad.fts_skipped == refs.size());
  opt.invalid_as_zero = true;
  const EvalReport zero = evaluate(junk, refs, opt);
  CHECK(*zero.fts_morgan == 0.0);
  CHECK(zero.fts_pairs == refs.size());

  CHECK_THROWS_AS(evaluate({ "C" }, {}), DomainError);
  CHECK(evaluate({}, {}).n == 0);
}

TEST_CASE("evaluate on five hand-scored pairs") {
  const std::vector<std::string> preds { "CCO", "CCN", "xyz", "CC", "O" };
  const std::vector<std::string> refs { "OCC", "CCN", "CCC", "CCC", "N" };
  const EvalReport r = evaluate(preds, refs);
  CHECK(r.n == 5);
  CHECK(r.exact == doctest::Approx(2.0 / 5));
  CHECK(r.levenshtein == doctest::Approx((2 + 0 + 3 + 1 + 1) / 5.0));
  CHECK(r.bleu == doctest::Approx((std::cbrt(1.0 / 3) + 1 + 0 + std::exp(-0.5) + 0) / 5));
  CHECK(r.validity == doctest::Approx(4.0 / 5));
  CHECK(r.fts_pairs == 4);
  CHECK(r.fts_skipped == 1);
  // ethane shares only the methyl environment with propane (1 of 8 bits);
  // water and ammonia share nothing
  CHECK(*r.fts_morgan == doctest::Approx((1 + 1 + 0.125 + 0) / 4));
  CHECK(*r.fts_path >= 0.5);
  CHECK(*r.fts_path <= 1.0);

  const std::string json = to_json(r);
  CHECK(json.find("\"exact\": 0.4") != std::string::npos);
  CHECK(json.find("\"fts_skipped\": 1") != std::string::npos);
  const std::string table = to_table(r);
  CHECK(table.find("EXACT") == 0);
  CHECK(table.find("MORGAN FTS") != std::string::npos);
  CHECK(table.find("0.400") != std::string::npos);
}
