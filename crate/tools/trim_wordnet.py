#!/usr/bin/env python3
"""Cut a vocabulary-driven subset out of a Princeton WordNet database.

    python3 tools/trim_wordnet.py /path/to/wordnet/dict crates/core/resources/wordnet

Every noun/verb synset holding a vocabulary lemma is kept together with its
full hypernym closure. Pointers to dropped synsets are removed and synset
offsets are rewritten so they are true byte offsets into the new files.
"""
import csv
import glob
import os
import re
import sys

HERE = os.path.dirname(os.path.abspath(__file__))
ROOT = os.path.join(HERE, "..")

# Words a desk-scale analytics query is likely to use, beyond the fixtures.
COMMON = """
account activity address age agent aggregate airline airport album amount animal
annual answer apartment area army art article artist asset athlete attendance
attribute audience author average award balance band bank bar base battle
bedroom benefit bill bird birth block board body bonus book border box brand
budget building business buyer calorie campaign capacity capital car card
career cargo carrier case cash category cause cell center century chain champion
change channel chapter charge chart child church circulation citizen city claim
class client climate club coach code coffee collection college colour color
company competition complaint component concentration condition conference
consumer consumption contract contribution cost country county course court
coverage credit crime crop currency customer cycle damage data date day death
debt decade degree delay delivery demand density department deposit depth
design device diameter diet difference director discount disease distance
district division doctor dollar donation driver drug duration earning earnings
economy education efficiency election electricity emission employee employment
energy engine enrollment entity episode equipment estimate event expense
experience export factor factory family fare farm fee film flight food force
forecast frequency fuel fund funding game gender generation goal grade grant
gross group growth height hospital hour household house housing import income
index industry inflation injury insurance interest inventory investment item
job journey label land language layer league length level library life limit
line loan location loss machine magnitude manager manufacturer margin market
match measure medal member metric mileage minute mission model money month
mortality motor movie music name nation network number nutrient occupation
office order organization origin output owner page participant party passenger
patient payment percentage performance period person phone player point
police policy population port position post poverty power precipitation
premium price priority producer product production profit program project
property province purchase quality quantity quarter race rainfall rank ranking
rate rating ratio reaction record region release rent report resource
restaurant result return revenue reward risk road role room route salary sale
sales sample satisfaction scale school score season sector segment seller
series service session share ship shipment shipping shop size skill song
source species speed spending sport staff stage standard star state station
status stock store strength student study style subject subscriber supply
survey system tax teacher team temperature tenure term territory test ticket
time title total tourism trade traffic transaction trip type unemployment unit
university usage user value vehicle velocity version visit visitor volume
vote wage water wealth weather week weight width winner worker year yield
zone automobile motorcar person people man woman dog cat
make show visualize create display plot draw give compare correlate relate
sell buy earn spend grow increase decrease rise fall produce release rank
""".split()

TASK_AND_VIS = """
correlate correlation relationship relation relate related compare comparison
distribution range spread average mean sum total count maximum minimum max min
trend time year histogram bar chart graph line area scatter plot pie box
strip heat map table
""".split()


def vocabulary():
    words = set(COMMON) | set(TASK_AND_VIS)
    fx = os.path.join(ROOT, "fixtures")
    for path in glob.glob(os.path.join(fx, "*.csv")):
        with open(path) as f:
            header = next(csv.reader(f))
        for h in header:
            words.update(re.findall(r"[a-z]+", h.lower()))
    qpath = os.path.join(fx, "queries.tsv")
    if os.path.exists(qpath):
        for line in open(qpath):
            words.update(re.findall(r"[a-z]+", line.split("\t", 1)[-1].lower()))
    return words


MORPH = [("ies", "y"), ("ses", "s"), ("xes", "x"), ("zes", "z"), ("ches", "ch"),
         ("shes", "sh"), ("men", "man"), ("es", ""), ("es", "e"), ("s", ""),
         ("ed", ""), ("ed", "e"), ("ing", ""), ("ing", "e")]


def candidates(w):
    out = [w]
    for suf, rep in MORPH:
        if w.endswith(suf) and len(w) > len(suf) + 1:
            out.append(w[: -len(suf)] + rep)
    return out


def parse_data(path, pos):
    syn = {}
    for line in open(path, encoding="latin-1"):
        if line.startswith("  "):
            continue
        head, _, gloss = line.rstrip("\n").partition(" | ")
        f = head.split()
        off, lexfile, sstype, wc = f[0], f[1], f[2], int(f[3], 16)
        words = f[4 : 4 + 2 * wc]
        i = 4 + 2 * wc
        pc = int(f[i])
        i += 1
        ptrs = [tuple(f[i + 4 * k : i + 4 * k + 4]) for k in range(pc)]
        i += 4 * pc
        rest = f[i:]
        syn[off] = dict(lexfile=lexfile, sstype=sstype, words=words, ptrs=ptrs,
                        rest=rest, gloss=gloss, pos=pos)
    return syn


def parse_index(path):
    idx = {}
    for line in open(path, encoding="latin-1"):
        if line.startswith("  "):
            continue
        f = line.split()
        n = int(f[2])
        idx[f[0]] = f[-n:]
    return idx


def main(src, dst):
    vocab = vocabulary()
    data = {p: parse_data(os.path.join(src, "data." + p), p) for p in ("noun", "verb")}
    index = {p: parse_index(os.path.join(src, "index." + p)) for p in ("noun", "verb")}
    tag = {"noun": "n", "verb": "v"}
    keep = {p: set() for p in data}
    for w in vocab:
        for c in candidates(w):
            for p in data:
                keep[p].update(index[p].get(c, []))
    for p in data:
        stack = list(keep[p])
        while stack:
            o = stack.pop()
            for sym, tgt, tpos, _ in data[p][o]["ptrs"]:
                if sym in ("@", "@i") and tpos == tag[p] and tgt not in keep[p]:
                    keep[p].add(tgt)
                    stack.append(tgt)

    header = [
        "  1 This file is a trimmed subset of Princeton WordNet 3.1, distributed",
        "  2 under the WordNet License (see LICENSE in this directory).",
        "  3 Offsets index into this file; pointers to dropped synsets are removed.",
    ]
    os.makedirs(dst, exist_ok=True)
    newoff = {}
    for p in data:
        # First pass: fixed-width offsets mean line lengths do not depend on them.
        order = sorted(keep[p])
        pos_of = {}
        cursor = sum(len(h) + 1 for h in header)
        for o in order:
            pos_of[o] = cursor
            cursor += len(render(data[p][o], o, keep, tag, {})) + 1
        newoff[p] = {o: f"{v:08d}" for o, v in pos_of.items()}
    for p in data:
        lines = list(header)
        for o in sorted(keep[p]):
            lines.append(render(data[p][o], o, keep, tag, newoff))
        with open(os.path.join(dst, "data." + p), "w", encoding="latin-1") as f:
            f.write("\n".join(lines) + "\n")
        idx_lines = list(header)
        for lemma in sorted(index[p]):
            offs = [o for o in index[p][lemma] if o in keep[p]]
            if not offs:
                continue
            syms = sorted({s for o in offs for s, _, _, _ in kept_ptrs(data[p][o], keep, tag)})
            idx_lines.append(" ".join([lemma, tag[p], str(len(offs)), str(len(syms))] + syms
                                      + [str(len(offs)), "0"]
                                      + [newoff[p][o] for o in offs]) + "  ")
        with open(os.path.join(dst, "index." + p), "w", encoding="latin-1") as f:
            f.write("\n".join(idx_lines) + "\n")
        print(p, len(keep[p]), "synsets")


def kept_ptrs(s, keep, tag):
    back = {"n": "noun", "v": "verb"}
    return [pt for pt in s["ptrs"] if pt[2] in back and pt[1] in keep[back[pt[2]]]]


def render(s, off, keep, tag, newoff):
    back = {"n": "noun", "v": "verb"}
    ptrs = kept_ptrs(s, keep, tag)
    own = newoff.get(s["pos"], {}).get(off, off)
    parts = [own, s["lexfile"], s["sstype"], f"{len(s['words']) // 2:02x}"] + s["words"]
    parts.append(f"{len(ptrs):03d}")
    for sym, tgt, tpos, st in ptrs:
        parts += [sym, newoff.get(back[tpos], {}).get(tgt, tgt), tpos, st]
    parts += s["rest"]
    return " ".join(parts) + " | " + s["gloss"]


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
