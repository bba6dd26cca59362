"""Regenerate the bundled synthetic corpus (src/impsum/data/fixture_corpus.jsonl).

Responses are sampled from per-document topics, each with several
paraphrases, so that different students describe the same idea with
different bigrams. Output is deterministic for a given seed.
"""

import argparse
import json
import random
from pathlib import Path

FRAMES = {
    "interesting": [
        "I found {t} most interesting",
        "{t}",
        "the {t} was interesting",
        "learning about {t}",
        "{t} was really cool",
        "I liked {t}",
    ],
    "confusing": [
        "{t} was confusing",
        "I was confused about {t}",
        "{t}",
        "need more detail on {t}",
        "still unclear on {t}",
        "I did not understand {t}",
    ],
    "learning": [
        "I learn better with {t}",
        "{t} helps me learn",
        "{t}",
        "I learned that {t} helps",
        "doing {t} helped me",
    ],
}

FILLER = {
    "interesting": ["nothing stood out today", "everything was interesting", "the whole lecture"],
    "confusing": ["nothing was confusing", "no problems today", "it all made sense"],
    "learning": ["not sure yet", "I learn by myself", "nothing new"],
}

# lecture -> prompt -> topics; each topic is a list of paraphrases, first one used in references
TOPICS = {
    "L01": {
        "interesting": [
            ["bike parts activity", "bicycle parts activity", "parts of a bike activity", "bike elements activity"],
            ["group activity", "team exercise", "group work in class"],
            ["materials processing", "processing of materials", "how materials are manufactured"],
        ],
        "confusing": [
            ["course grading policy", "grading scheme for the course", "how grades are computed"],
            ["material classes", "classes of materials", "types of materials"],
            ["homework submission", "turning in homework", "homework upload process"],
        ],
        "learning": [
            ["hands-on activities", "hands-on exercises", "doing activities in class"],
            ["group discussion", "discussing in groups", "talking with classmates"],
            ["taking notes", "writing notes", "note taking"],
        ],
    },
    "L02": {
        "interesting": [
            ["atomic bonding", "bonding between atoms", "how atoms bond"],
            ["ionic bonds", "ionic bonding", "ionic bond examples"],
            ["bond energy curve", "energy versus distance curve", "bond energy graph"],
        ],
        "confusing": [
            ["bond energy curve", "energy versus distance graph", "the energy curve"],
            ["electronegativity values", "electronegativity table", "electronegativity differences"],
            ["van der waals forces", "secondary bonding", "van der waals bonding"],
        ],
        "learning": [
            ["worked examples", "example problems", "working through examples"],
            ["reading the textbook", "textbook reading", "reading chapters before class"],
            ["practice problems", "practicing problems", "extra practice questions"],
        ],
    },
    "L03": {
        "interesting": [
            ["unit cell drawing", "drawing unit cells", "sketching the unit cell"],
            ["crystal structure directions", "directions in crystals", "crystal directions"],
            ["real world examples", "examples from real life", "everyday examples"],
        ],
        "confusing": [
            ["miller indices", "indexing planes", "plane indices"],
            ["atomic packing factor", "packing factor calculation", "computing the apf"],
            ["cell direction notation", "direction notation", "notation for directions"],
        ],
        "learning": [
            ["drawing diagrams", "sketching diagrams", "making drawings"],
            ["3d models", "physical models", "ball and stick models"],
            ["asking questions", "asking the professor", "asking in office hours"],
        ],
    },
    "L04": {
        "interesting": [
            ["stress strain curves", "stress strain graph", "the tensile test curve"],
            ["tensile testing demo", "tensile test demonstration", "pulling the sample apart"],
            ["elastic deformation", "elastic behavior", "springy deformation"],
        ],
        "confusing": [
            ["yield strength", "finding the yield point", "offset yield method"],
            ["true stress", "true stress versus engineering stress", "engineering stress"],
            ["modulus of elasticity", "elastic modulus", "young's modulus"],
        ],
        "learning": [
            ["seeing demos", "live demonstrations", "watching demonstrations"],
            ["graphs", "plotting graphs", "looking at graphs"],
            ["working with friends", "studying with friends", "study groups"],
        ],
    },
    "L05": {
        "interesting": [
            ["phase diagrams", "phase diagram reading", "binary phase diagrams"],
            ["eutectic point", "the eutectic composition", "eutectic reaction"],
            ["solder alloys", "solder examples", "lead tin solder"],
        ],
        "confusing": [
            ["lever rule", "using the lever rule", "lever rule calculations"],
            ["two phase regions", "naming the phase regions", "phase region names"],
            ["tie lines", "drawing tie lines", "tie line compositions"],
        ],
        "learning": [
            ["step by step problems", "step by step examples", "going step by step"],
            ["reviewing slides", "looking over slides", "slides after class"],
            ["quizzes", "short quizzes", "in class quizzes"],
        ],
    },
    "L06": {
        "interesting": [
            ["corrosion examples", "rusting examples", "examples of corrosion"],
            ["tin pest story", "south pole explorers and tin", "tin at low temperature"],
            ["galvanic series", "galvanic corrosion", "metal pairs corroding"],
        ],
        "confusing": [
            ["oxidation reactions", "redox reactions", "oxidation and reduction"],
            ["corrosion rate formula", "corrosion rate equation", "calculating corrosion rate"],
            ["anode and cathode", "which metal is the anode", "anode versus cathode"],
        ],
        "learning": [
            ["real world stories", "stories from history", "real life stories"],
            ["repetition", "repeating material", "going over things again"],
            ["connecting to other classes", "links to chemistry class", "relating to chemistry"],
        ],
    },
    "L07": {
        "interesting": [
            ["polymer chains", "long polymer molecules", "chain molecules"],
            ["plastic recycling", "recycling plastics", "recycling codes"],
            ["rubber elasticity", "stretchy rubber", "rubber bands demo"],
        ],
        "confusing": [
            ["degree of polymerization", "polymerization degree", "number of repeat units"],
            ["molecular weight averages", "average molecular weight", "weight average"],
            ["crosslinking", "cross linked polymers", "crosslinked chains"],
        ],
        "learning": [
            ["videos", "watching videos", "short videos"],
            ["group activity", "group exercises", "working in teams"],
            ["office hours", "going to office hours", "office hour help"],
        ],
    },
}

ANNOTATED = ["L01", "L02", "L03", "L04", "L05", "L06"]


def sample_response(rng, prompt, topics):
    if rng.random() < 0.08:
        return rng.choice(FILLER[prompt])
    k = rng.choices(range(len(topics)), weights=[0.5, 0.3, 0.2])[0]
    text = rng.choice(FRAMES[prompt]).format(t=rng.choice(topics[k]))
    if rng.random() < 0.2:
        other = topics[(k + 1) % len(topics)]
        text += ". also " + rng.choice(other)
    return text


def generate(seed=7, per_document=9):
    rng = random.Random(seed)
    records = []
    for lecture, prompts in TOPICS.items():
        for prompt, topics in prompts.items():
            for s in range(per_document):
                records.append({"lecture": lecture, "prompt": prompt, "student": f"S{s + 1}",
                                "text": sample_response(rng, prompt, topics)})
            if lecture in ANNOTATED:
                records.append({"lecture": lecture, "prompt": prompt,
                                "reference": [t[0] for t in topics]})
    return records


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--per-document", type=int, default=9)
    parser.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "src/impsum/data/fixture_corpus.jsonl"))
    args = parser.parse_args()
    records = generate(args.seed, args.per_document)
    with open(args.out, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec) + "\n")
    print(f"wrote {len(records)} records to {args.out}")


if __name__ == "__main__":
    main()
