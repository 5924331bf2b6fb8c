#include "doctest.h"
#include "support.h"

#include "molpipe/error.h"
#include "molpipe/molgraph.h"
#include "molpipe/smiles.h"

using namespace molpipe;
using testsupport::isomorphic;

TEST_CASE("parse morpholine propanol") {
  const Molecule m = parse_smiles("OCCCN1CCOCC1");
  // ten heavy atoms; the string itself is twelve characters long
  CHECK(m.num_atoms() == 10);
  CHECK(m.num_bonds() == 10);
  REQUIRE(m.rings().size() == 1);
  const auto &ring = m.rings()[0];
  CHECK(ring.size() == 6);
  int n = 0, o = 0;
  for (int i: ring) {
    n += m.atom(i).element == 7;
    o += m.atom(i).element == 8;
  }
  CHECK(n == 1);
  CHECK(o == 1);
}

TEST_CASE("single carbon") {
  const Molecule m = parse_smiles("C");
  CHECK(m.num_atoms() == 1);
  CHECK(m.num_bonds() == 0);
  CHECK(m.atom(0).hydrogens == 4);
}

TEST_CASE("syntax errors carry offsets") {
  try {
    parse_smiles("C1CC");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError &e) {
    CHECK(e.offset() == 1);
  }
  CHECK_THROWS_AS(parse_smiles(""), SyntaxError);
  CHECK_THROWS_AS(parse_smiles("C[Xx]"), SyntaxError);
  CHECK_THROWS_AS(parse_smiles("C(C"), SyntaxError);
  CHECK_THROWS_AS(parse_smiles("CC)"), SyntaxError);
  CHECK_THROWS_AS(parse_smiles("C[C"), SyntaxError);
  CHECK_THROWS_AS(parse_smiles("C%1"), SyntaxError);
}

TEST_CASE("ring closures, charges, isotopes, stereo") {
  const Molecule pct = parse_smiles("C%10CC%10");
  CHECK(pct.num_bonds() == 3);
  CHECK(pct.rings().size() == 1);

  const Molecule ion = parse_smiles("[NH4+].[Cl-]");
  CHECK(ion.atom(0).formal_charge == 1);
  CHECK(ion.atom(0).hydrogens == 4);
  CHECK(ion.atom(1).formal_charge == -1);

  const Molecule iso = parse_smiles("[13CH4]");
  CHECK(iso.atom(0).isotope == 13);

  const Molecule chiral = parse_smiles("N[C@@H](C)C(=O)O");
  CHECK(chiral.atom(1).chirality == "@@");
  const Molecule db = parse_smiles("F/C=C/F");
  CHECK(db.bond(0).direction == '/');

  const Molecule dummy = parse_smiles("[7*]CC");
  CHECK(dummy.atom(0).is_dummy());
  CHECK(dummy.atom(0).link_label == 7);
}

TEST_CASE("canonical forms of equivalent spellings agree") {
  const auto pairs = std::vector<std::pair<std::string, std::string>> {
    { "c1ccccc1", "C1=CC=CC=C1" },
    { "OCC", "CCO" },
    { "c1ccncc1", "C1=CN=CC=C1" },
    { "Cc1ccccc1O", "Oc1ccccc1C" },
    { "[1*]N1CCOCC1", "C1COCCN1[1*]" },
  };
  for (const auto &[x, y]: pairs) {
    CAPTURE(x);
    const Molecule a = parse_smiles(x), b = parse_smiles(y);
    CHECK(isomorphic(a, b));
    CHECK(canonical_smiles(a) == canonical_smiles(b));
  }
  CHECK(canonical_smiles(parse_smiles("CCO"))
        != canonical_smiles(parse_smiles("CCN")));
}

TEST_CASE("canonical round trip on the corpus") {
  for (const std::string &s: testsupport::corpus()) {
    CAPTURE(s);
    const Molecule m = parse_smiles(s);
    const std::string c = canonical_smiles(m);
    const Molecule back = parse_smiles(c);
    CHECK(isomorphic(m, back));
    CHECK(canonical_smiles(back) == c);
    CHECK(canonical_smiles(m) == c);
  }
}

TEST_CASE("random serializations canonicalize alike") {
  const auto corpus = testsupport::corpus();
  for (std::size_t i = 0; i < corpus.size(); i += 7) {
    const Molecule m = parse_smiles(corpus[i]);
    const std::string c = canonical_smiles(m);
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      const std::string r = random_smiles(m, seed * 1000 + i);
      CAPTURE(r);
      const Molecule mr = parse_smiles(r);
      CHECK(isomorphic(m, mr));
      CHECK(canonical_smiles(mr) == c);
    }
  }
}

TEST_CASE("molecular weight") {
  CHECK(molecular_weight(parse_smiles("O")) == doctest::Approx(2 * 1.008 + 15.999).epsilon(1e-4));
  CHECK(molecular_weight(parse_smiles("O")) == doctest::Approx(18.02).epsilon(0.0006));
  CHECK(molecular_weight(parse_smiles("c1ccccc1")) == doctest::Approx(78.11).epsilon(0.0002));
  CHECK(molecular_weight(parse_smiles("[1*]CCO"))
        == doctest::Approx(2 * 12.011 + 5 * 1.008 + 15.999));
  CHECK(molecular_weight(parse_smiles("[1*]CCO"))
        < molecular_weight(parse_smiles("CCO")));
}

TEST_CASE("weight never drops when an atom is added") {
  for (const std::string &s: testsupport::corpus()) {
    const double w = molecular_weight(parse_smiles(s));
    CHECK(molecular_weight(parse_smiles(s + ".C")) > w);
    CHECK(molecular_weight(parse_smiles(s + ".[Cl-]")) > w);
  }
  std::string chain = "C";
  double prev = molecular_weight(parse_smiles(chain));
  for (int i = 0; i < 30; ++i) {
    chain += "C";
    const double w = molecular_weight(parse_smiles(chain));
    CHECK(w > prev);
    prev = w;
  }
}

TEST_CASE("validate") {
  const ValidityReport five = validate(parse_smiles("CC(C)(C)(C)C"));
  CHECK_FALSE(five.valid);
  REQUIRE(five.failures.size() == 1);
  CHECK(five.failures[0].atom == 1);

  CHECK(validate(parse_smiles("OCCCN1CCOCC1")).valid);
  CHECK(validate(parse_smiles("[1*]N1CCOCC1")).valid);
  CHECK(validate(parse_smiles("C[N+](C)(C)C")).valid);
  CHECK_FALSE(validate(parse_smiles("CN(C)(C)C")).valid);
  CHECK_FALSE(validate(parse_smiles("O(C)(C)C")).valid);
  CHECK_FALSE(validate(parse_smiles("c1cccc1")).valid);
  CHECK(validate(parse_smiles("c1cc[nH]c1")).valid);
  CHECK(is_valid_smiles("CCO"));
  CHECK_FALSE(is_valid_smiles("C1CC"));
  for (const std::string &s: testsupport::corpus())
    CHECK(validate(parse_smiles(s)).valid);
}
