#!/usr/bin/env python3
"""Regenerate the synthetic fixture corpus in this directory.

The output is deterministic (fixed seed). Two cells are shaped on purpose:

* Engineering (code 60000, level 1): U01 holds the maximum of every indicator.
* Chemistry (code 30000, level 1): U10 has exactly 5 papers, 3 of them in
  top-quartile journals.
"""

import csv
import math
import os
import random

HERE = os.path.dirname(os.path.abspath(__file__))
rng = random.Random(20130101)

DISCIPLINES = [
    ("Agricultural and Biological Sciences", [
        ("Agricultural and Biological Sciences (others)", ["Agronomy and Crop Science", "Animal Science and Zoology"]),
    ]),
    ("Biochemistry, Genetics and Molecular Biology", [
        ("Molecular Biology", ["Genetics", "Biochemistry"]),
    ]),
    ("Chemistry", [
        ("Chemistry (core)", ["Organic Chemistry", "Analytical Chemistry", "Inorganic Chemistry"]),
    ]),
    ("Computer Science", [
        ("Computing", ["Software", "Artificial Intelligence", "Computer Networks and Communications"]),
    ]),
    ("Earth and Planetary Sciences", [
        ("Geosciences", ["Geology", "Geophysics"]),
    ]),
    ("Engineering", [
        ("Electrical Engineering", ["Electrical and Electronic Engineering", "Control and Systems Engineering"]),
        ("Mechanical Engineering", ["Mechanical Engineering", "Industrial and Manufacturing Engineering"]),
        ("Civil Engineering", ["Civil and Structural Engineering", "Building and Construction"]),
    ]),
    ("Environmental Science", [
        ("Environmental Quality", ["Pollution", "Water Science and Technology"]),
    ]),
    ("Materials Science", [
        ("Materials", ["Ceramics and Composites", "Polymers and Plastics"]),
    ]),
    ("Mathematics", [
        ("Pure and Applied Mathematics", ["Applied Mathematics", "Algebra and Number Theory"]),
    ]),
    ("Medicine", [
        ("Clinical Medicine", ["Ophthalmology", "Cardiology", "Oncology"]),
    ]),
    ("Neuroscience", [
        ("Systems Neuroscience", ["Sensory Systems", "Cognitive Neuroscience"]),
    ]),
    ("Physics and Astronomy", [
        ("Physics", ["Condensed Matter Physics", "Nuclear and High Energy Physics"]),
    ]),
    ("Social Sciences", [
        ("Social Science (core)", ["Education", "Economics"]),
    ]),
    ("Energy", [
        ("Energy Systems", ["Renewable Energy", "Nuclear Energy and Engineering"]),
    ]),
    ("Chemical Engineering", [
        ("Process Engineering", ["Catalysis", "Process Chemistry and Technology"]),
    ]),
]

INSTITUTIONS = [
    ("U01", "Northfield Institute of Technology", "ICT"),
    ("U02", "Ravi Valley University", "PB"),
    ("U03", "Indus College of Engineering", "SD"),
    ("U04", "Margalla University", "ICT"),
    ("U05", "Khyber Polytechnic University", "KP"),
    ("U06", "Quetta School of Mines", "BL"),
    ("U07", "Chenab University of Agriculture", "PB"),
    ("U08", "Karakoram Medical College", "KP"),
    ("U09", "Thar Science University", "SD"),
    ("U10", "Lahore Institute of Sciences", "PB"),
    ("U11", "Makran Coastal University", "BL"),
    ("U12", "Potohar University", "ICT"),
]


def build_taxonomy():
    rows = []  # code, name, level, parent
    leaves = {}  # discipline index -> list of leaf codes
    names = {}
    for k, (disc, subs) in enumerate(DISCIPLINES, start=1):
        root = k * 10000
        rows.append((root, disc, 1, ""))
        names[root] = disc
        leaves[k] = []
        catch_all = root + 1
        rows.append((catch_all, f"{disc} (all)", 3, root))
        names[catch_all] = f"{disc} (all)"
        leaves[k].append(catch_all)
        for j, (l2, l3s) in enumerate(subs, start=1):
            c2 = root + j * 100
            rows.append((c2, l2, 2, root))
            names[c2] = l2
            for i, l3 in enumerate(l3s, start=1):
                c3 = c2 + i
                rows.append((c3, l3, 3, c2))
                names[c3] = l3
                leaves[k].append(c3)
    return rows, leaves, names


def code_by_name(names, name):
    # level-3 codes only; some level-2 nodes share a niche's name
    return next(c for c, n in names.items() if n == name and c % 100 != 0)


def build_journals(leaves, names):
    journals = []  # id, title, codes, snip or None
    counter = [0]

    def add(title, codes, snip):
        counter[0] += 1
        jid = f"J{counter[0]:03d}"
        journals.append((jid, title, codes, snip))
        return jid

    for k, leaf_codes in leaves.items():
        for leaf in leaf_codes:
            if leaf % 10000 == 1:
                add(f"Journal of {names[leaf].replace(' (all)', '')}", [leaf], round(rng.uniform(0.2, 2.5), 3))
                continue
            for n in range(3):
                prefix = ["Annals", "Letters", "Reviews"][n]
                add(f"{prefix} in {names[leaf]}", [leaf], round(rng.uniform(0.1, 3.0), 3))

    # multi-membership journals
    add("Vision Research", [code_by_name(names, "Ophthalmology"), code_by_name(names, "Sensory Systems")], 1.874)
    add("Transactions on Industrial Electronics",
        [code_by_name(names, "Electrical and Electronic Engineering"), code_by_name(names, "Control and Systems Engineering")], 3.412)
    add("Journal of Mechatronics",
        [code_by_name(names, "Control and Systems Engineering"), code_by_name(names, "Mechanical Engineering")], 1.105)
    add("Applied Catalysis", [code_by_name(names, "Catalysis"), code_by_name(names, "Inorganic Chemistry")], 2.731)

    # SNIP-absent journals
    for leaf_name in ["Geology", "Economics", "Oncology", "Building and Construction", "Software", "Organic Chemistry"]:
        add(f"Bulletin of {leaf_name}", [code_by_name(names, leaf_name)], None)
    return journals


def quartile_sets(journals):
    by_leaf = {}
    for jid, _, codes, snip in journals:
        if snip is None:
            continue
        for c in codes:
            by_leaf.setdefault(c, []).append((snip, jid))
    top = {}
    for leaf, items in by_leaf.items():
        items.sort(reverse=True)
        k = math.ceil(0.25 * len(items))
        cutoff = items[k - 1][0]
        top[leaf] = {jid for s, jid in items if s >= cutoff}
    return top


def main():
    tax_rows, leaves, names = build_taxonomy()
    journals = build_journals(leaves, names)
    top = quartile_sets(journals)

    eng = 6 * 10000
    chem = 3 * 10000

    def root_of(code):
        return (code // 10000) * 10000

    def roots(j):
        return {root_of(c) for c in j[2]}

    eng_journals = [j for j in journals if eng in roots(j)]
    eng_top = [j[0] for j in eng_journals if any(j[0] in top.get(c, set()) for c in j[2] if root_of(c) == eng)]
    chem_only = [j for j in journals if roots(j) == {chem}]
    chem_top = [j for j in chem_only if any(j[0] in top.get(c, set()) for c in j[2])]
    chem_rest = [j for j in chem_only if j not in chem_top]
    other = [j for j in journals if eng not in roots(j)]

    pubs = []

    def add_pub(inst, jid, cites):
        year = rng.randint(2008, 2013)
        pubs.append([inst, jid, year, cites])

    for _ in range(70):
        add_pub("U01", rng.choice(eng_top), rng.randint(12, 45))
    for inst, n, cmax in [("U02", 55, 20), ("U03", 48, 18), ("U04", 42, 15), ("U05", 25, 12), ("U06", 10, 10)]:
        for _ in range(n):
            add_pub(inst, rng.choice(eng_journals)[0], rng.randint(0, cmax))

    for j in rng.sample(chem_top, 3):
        add_pub("U10", j[0], rng.randint(2, 25))
    for j in rng.sample(chem_rest, 2):
        add_pub("U10", j[0], rng.randint(0, 8))

    chem_touch = {j[0] for j in journals if chem in roots(j)}
    insts = [i[0] for i in INSTITUTIONS]
    remaining = 500 - len(pubs)
    for n in range(remaining):
        inst = insts[n] if n < len(insts) else rng.choice(insts)
        pool = [j for j in other if not (inst == "U10" and j[0] in chem_touch)]
        add_pub(inst, rng.choice(pool)[0], int(rng.expovariate(1 / 6.0)))

    rng.shuffle(pubs)

    title_words = ["robust", "adaptive", "spectral", "novel", "efficient", "stochastic", "thermal", "regional"]
    with open(os.path.join(HERE, "publications.csv"), "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["pub_id", "institution_id", "journal_id", "year", "citations", "title"])
        for n, (inst, jid, year, cites) in enumerate(pubs, start=1):
            a, b = rng.sample(title_words, 2)
            if n % 37 == 0:
                title = f'On "{a}" methods, revisited'
            else:
                title = f"A {a} study of {b} systems {n}"
            w.writerow([f"P{n:04d}", inst, jid, year, cites, title])

    with open(os.path.join(HERE, "journals.csv"), "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["journal_id", "title", "asjc_codes"])
        for jid, title, codes, _ in journals:
            w.writerow([jid, title, ";".join(str(c) for c in codes)])

    with open(os.path.join(HERE, "snip.csv"), "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["journal_id", "snip_2010"])
        for jid, _, _, snip in journals:
            w.writerow([jid, "" if snip is None else f"{snip}"])

    with open(os.path.join(HERE, "institutions.csv"), "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["institution_id", "name", "region"])
        for row in INSTITUTIONS:
            w.writerow(row)

    with open(os.path.join(HERE, "taxonomy.csv"), "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["code", "name", "level", "parent_code"])
        for row in tax_rows:
            w.writerow(row)


if __name__ == "__main__":
    main()
