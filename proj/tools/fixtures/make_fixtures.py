#!/usr/bin/env python3
"""Regenerates the bundled test fixtures.

Not part of the build. Requires rdkit and nltk, plus the MOSES test split
(moses/dataset/data/test.csv.gz from the `molsets` wheel).

    python3 tools/fixtures/make_fixtures.py --moses test.csv.gz --out tests/fixtures

Outputs:
  corpus.smi      2000 drug-like SMILES sampled from the MOSES test split
  reactions.tsv   100 single-step reactions (reactants<TAB>product<TAB>type)
                  obtained by applying retro templates to corpus molecules
  bleu_pairs.tsv  100 prediction/reference pairs with NLTK sentence BLEU
                  (character tokens, smoothing method2)
"""

import argparse
import gzip
import random
import warnings
from pathlib import Path

from rdkit import Chem, RDLogger
from rdkit.Chem import AllChem

warnings.filterwarnings("ignore")
RDLogger.DisableLog("rdApp.*")

RETRO = [
    ("amide_coupling",
     "[#6:4][C:1](=[O:2])-!@[N;!$(N-[!#6;!#1]):3]>>[#6:4][C:1](=[O:2])O.[N:3]"),
    ("esterification",
     "[#6:4][C:1](=[O:2])-!@[O:3][#6:5]>>[#6:4][C:1](=[O:2])O.[O:3][#6:5]"),
    ("sulfonylation",
     "[#6:4][S:1](=[O:2])(=[O:5])-!@[N:3]>>[#6:4][S:1](=[O:2])(=[O:5])Cl.[N:3]"),
    ("urea_formation",
     "[N:1]-!@[C:2](=[O:3])-!@[N;H1:4][c:5]>>[N:1].[O:3]=[C:2]=[N:4][c:5]"),
    ("suzuki_coupling", "[c:1]-!@[c:2]>>[c:1]Br.OB(O)[c:2]"),
    ("buchwald_hartwig",
     "[c:1]-!@[N;!$(N-C=O);!$(N-S);!$(N-a-a);!$([N;H2]):2]>>[c:1]Br.[N:2]"),
    ("williamson_ether", "[c:1]-!@[O:2]-!@[CH2:3][#6:4]>>[c:1][O:2].Br[CH2:3][#6:4]"),
    ("reductive_amination",
     "[N;!$(N-C=O);!$(N-a);!$(N-S):1]-!@[CH2;!R:2][c:3]>>[N:1].O=[CH1:2][c:3]"),
]


def canon(smiles):
    mol = Chem.MolFromSmiles(smiles)
    return None if mol is None else Chem.MolToSmiles(mol, isomericSmiles=False)


def retro(smiles, rxn):
    mol = Chem.MolFromSmiles(smiles)
    outcomes = rxn.RunReactants((mol,))
    for products in outcomes:
        parts = []
        ok = True
        for p in products:
            try:
                Chem.SanitizeMol(p)
            except Exception:
                ok = False
                break
            parts.append(Chem.MolToSmiles(p, isomericSmiles=False))
        if ok and all(canon(s) for s in parts):
            return ".".join(parts)
    return None


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--moses", required=True)
    ap.add_argument("--out", required=True)
    ap.add_argument("--seed", type=int, default=20240917)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    with gzip.open(args.moses, "rt") as fh:
        rows = [line.strip().split(",")[0] for line in fh][1:]
    rng = random.Random(args.seed)
    rng.shuffle(rows)

    corpus = []
    for smi in rows:
        c = canon(smi)
        if c and c not in corpus:
            corpus.append(c)
        if len(corpus) == 2000:
            break
    (out / "corpus.smi").write_text("\n".join(corpus) + "\n")

    templates = [(name, AllChem.ReactionFromSmarts(sma)) for name, sma in RETRO]
    per_type = {name: 0 for name, _ in RETRO}
    reactions = []
    pool = rows[5000:]
    for smi in pool:
        if len(reactions) == 100:
            break
        product = canon(smi)
        if not product:
            continue
        order = list(templates)
        rng.shuffle(order)
        for name, rxn in order:
            if per_type[name] >= 13:
                continue
            reactants = retro(product, rxn)
            if reactants:
                reactions.append((reactants, product, name))
                per_type[name] += 1
                break
    with open(out / "reactions.tsv", "w") as fh:
        for r, p, t in reactions:
            fh.write(f"{r}\t{p}\t{t}\n")

    from nltk.translate.bleu_score import SmoothingFunction, sentence_bleu

    smooth = SmoothingFunction().method2
    with open(out / "bleu_pairs.tsv", "w") as fh:
        for i in range(100):
            ref = corpus[i]
            if i % 4 == 0:
                hyp = corpus[i + 1000]
            else:
                chars = list(ref)
                for _ in range(rng.randint(1, 6)):
                    pos = rng.randrange(len(chars))
                    op = rng.randrange(3)
                    if op == 0:
                        chars[pos] = rng.choice("CNOc()=1")
                    elif op == 1 and len(chars) > 5:
                        del chars[pos]
                    else:
                        chars.insert(pos, rng.choice("CNOc()=1"))
                hyp = "".join(chars)
            score = sentence_bleu([list(ref)], list(hyp), smoothing_function=smooth)
            fh.write(f"{hyp}\t{ref}\t{score:.17g}\n")

    # Reference BRICS single-bond cuts (atom indices follow the input SMILES).
    from rdkit.Chem import BRICS

    with open(out / "brics_reference.tsv", "w") as fh:
        for smi in corpus:
            mol = Chem.MolFromSmiles(smi)
            cuts = []
            for (i, j), (a, b) in BRICS.FindBRICSBonds(mol):
                if a.startswith("7"):
                    continue
                cuts.append(f"{i}-{j}:{a}-{b}")
            fh.write(smi + "\t" + " ".join(cuts) + "\n")


if __name__ == "__main__":
    main()
