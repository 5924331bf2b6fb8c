#include "doctest.h"
#include "support.h"

#include "molpipe/error.h"
#include "molpipe/molgraph.h"
#include "molpipe/recombine.h"
#include "molpipe/smiles.h"

using namespace molpipe;
using testsupport::isomorphic;

namespace {
std::string canon(const std::string &s) { return canonical_smiles(parse_smiles(s)); }
}  // namespace

TEST_CASE("rejoin restores the morpholine example") {
  const FragmentSet fs = fragment(parse_smiles("OCCCN1CCOCC1"), {});
  const Molecule back = rejoin(fs);
  CHECK(canonical_smiles(back) == canon("OCCCN1CCOCC1"));
  CHECK(isomorphic(back, parse_smiles("OCCCN1CCOCC1")));
}

TEST_CASE("rejoin of a single fragment is the fragment") {
  const FragmentSet fs = fragment(parse_smiles("c1ccccc1"), {});
  CHECK(canonical_smiles(rejoin(fs)) == canon("c1ccccc1"));
  CHECK(canonical_smiles(rejoin_smiles("CCO")) == canon("CCO"));
}

TEST_CASE("rejoin round trip on the corpus") {
  for (const double k: { 48.0, 10.0 }) {
    FragmentParams p;
    p.k = k;
    for (const std::string &s: testsupport::corpus()) {
      CAPTURE(s);
      const Molecule m = parse_smiles(s);
      const FragmentSet fs = fragment(m, p);
      const Molecule back = rejoin(fs);
      CHECK(canonical_smiles(back) == fs.parent_canonical);
      CHECK(isomorphic(back, m));
    }
  }
}

TEST_CASE("provenance-free rejoin") {
  CHECK(canonical_smiles(rejoin_smiles("[4*]CCCO.[5*]N1CCOCC1")) == canon("OCCCN1CCOCC1"));
  CHECK(canonical_smiles(rejoin_smiles("[5*]N1CCOCC1.[4*]CCCO")) == canon("OCCCN1CCOCC1"));
  // symmetric centre: both pairings give the same molecule
  CHECK(canonical_smiles(rejoin_smiles("[4*]CC[4*].[5*]N1CCOCC1.[5*]N1CCOCC1"))
        == canon("C(CN1CCOCC1)N1CCOCC1"));
  CHECK_THROWS_AS(rejoin_smiles("[4*]CCCO"), UnpairedLabelError);
  CHECK_THROWS_AS(rejoin_smiles("[4*]CCCO.[4*]CCN"), UnpairedLabelError);
  CHECK_THROWS_AS(rejoin_smiles("[4*]CCO.[4*]CCN.[5*]N1CCN([5*])C(C)C1"), AmbiguityError);

  // fragment sets stripped of their links still rejoin when unambiguous
  FragmentSet fs = fragment(parse_smiles("OCCCN1CCOCC1"), {});
  fs.links.clear();
  CHECK(canonical_smiles(rejoin(fs)) == canon("OCCCN1CCOCC1"));
}

TEST_CASE("carbon cap") {
  CHECK(canonical_smiles(carbon_cap(parse_smiles("[1*]N1CCOCC1"))) == canon("CN1CCOCC1"));
  CHECK(canonical_smiles(carbon_cap(parse_smiles("[3*]O[3*]"))) == canon("COC"));
  CHECK(canonical_smiles(carbon_cap(parse_smiles("CCO"))) == canon("CCO"));
  const Molecule capped = carbon_cap(parse_smiles("[16*]c1ccccc1"));
  CHECK(canonical_smiles(capped) == canon("Cc1ccccc1"));
  CHECK(validate(capped).valid);
}

TEST_CASE("carbon cap keeps atom counts and validity across corpus fragments") {
  const auto corpus = testsupport::corpus();
  for (std::size_t i = 0; i < corpus.size(); i += 3) {
    for (const Molecule &f: fragment(parse_smiles(corpus[i]), {}).fragments) {
      const Molecule c = carbon_cap(f);
      CHECK(c.num_atoms() == f.num_atoms());
      CHECK(c.num_bonds() == f.num_bonds());
      CHECK(validate(c).valid);
      for (int a = 0; a < f.num_atoms(); ++a) {
        if (f.atom(a).is_dummy())
          CHECK(c.atom(a).element == 6);
        else
          CHECK(c.atom(a).element == f.atom(a).element);
      }
    }
  }
}
