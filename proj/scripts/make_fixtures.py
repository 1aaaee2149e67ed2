#!/usr/bin/env python3
"""Regenerates the JSON fixtures in fixtures/.

The larger complexes are descendants of the boundary of the 5-simplex
under 1->5 and 2->4 moves. Coordinates are sampled from the unit ball and
accepted only when every simplex, and every simplex a legal 3->3 move would
create, has shape quality >= 0.05 (the library's random_realization floor).
"""

import itertools as it
import json
import math
import pathlib
import sys

import numpy as np

MIN_QUALITY = 0.05
REGULAR_VOLUME = math.sqrt(5.0) / 96.0
OUT = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


def perm_sign(t):
    s = 1
    for i in range(len(t)):
        for j in range(i + 1, len(t)):
            if t[i] > t[j]:
                s = -s
    return s


def boundary_of_5_simplex():
    out = []
    for i in range(6):
        t = [v for v in range(6) if v != i]
        if i % 2:
            t[0], t[1] = t[1], t[0]
        out.append(tuple(t))
    return out


def faces(simplices, k):
    return sorted({f for t in simplices for f in it.combinations(sorted(t), k)})


def star(simplices, f):
    return [i for i, t in enumerate(simplices) if set(f) <= set(t)]


def closed_and_consistent(simplices):
    signs = {}
    for t in simplices:
        for p in range(5):
            rest = [v for j, v in enumerate(t) if j != p]
            signs.setdefault(tuple(sorted(rest)), []).append((-1) ** p * perm_sign(rest))
    closed = all(len(v) == 2 for v in signs.values())
    return closed and all(sum(v) == 0 for v in signs.values())


def move_1_5(simplices, idx, new_vertex):
    t = simplices[idx]
    out = [s for i, s in enumerate(simplices) if i != idx]
    for p in range(5):
        nt = list(t)
        nt[p] = new_vertex
        out.append(tuple(nt))
    return out


def move_2_4(simplices, tet):
    st = star(simplices, tet)
    assert len(st) == 2
    apex = [[v for v in simplices[i] if v not in tet][0] for i in st]
    assert tuple(sorted(apex)) not in set(faces(simplices, 2))
    t = simplices[st[0]]
    p = t.index(apex[0])
    out = [s for i, s in enumerate(simplices) if i not in st]
    for q in range(5):
        if q != p:
            nt = list(t)
            nt[q] = apex[1]
            out.append(tuple(nt))
    return out


def movable_clusters(simplices):
    """Vertex sets of the clusters around triangles where 3->3 is legal."""
    triangles = set(faces(simplices, 3))
    out = []
    for f in sorted(triangles):
        st = star(simplices, f)
        if len(st) != 3:
            continue
        verts = set().union(*[set(simplices[i]) for i in st])
        if len(verts) == 6 and tuple(sorted(verts - set(f))) not in triangles:
            out.append(sorted(verts))
    return out


def quality(x):
    d = x[1:] - x[0]
    vol = abs(np.linalg.det(d)) / 24.0
    lmax = max(np.sum((a - b) ** 2) for a, b in it.combinations(x, 2))
    return vol / (lmax * lmax * REGULAR_VOLUME)


def place(simplices, seed):
    checked = [tuple(t) for t in simplices]
    for cluster in movable_clusters(simplices):
        checked += list(it.combinations(cluster, 5))
    verts = sorted({v for t in simplices for v in t})
    rng = np.random.default_rng(seed)
    while True:
        pts = {}
        for v in verts:
            while True:
                p = np.round(rng.uniform(-1.0, 1.0, 4), 12)
                if p @ p <= 1.0:
                    pts[v] = p
                    break
        if all(quality(np.array([pts[v] for v in t])) >= MIN_QUALITY for t in checked):
            return pts


def write(name, simplices, pts, metadata, overrides=None):
    assert closed_and_consistent(simplices), name
    lines = ['{', '  "format_version": "1.0",', '  "simplices": [']
    lines.append(",\n".join("    " + json.dumps(list(t)) for t in simplices))
    lines.append("  ],")
    lines.append('  "coords": {')
    lines.append(",\n".join(
        f'    "{v}": ' + json.dumps([float(c) for c in pts[v]]) for v in sorted(pts)))
    lines.append("  },")
    tail = '  "metadata": ' + json.dumps(metadata, sort_keys=True)
    if overrides:
        tail += ",\n  \"squared_length_overrides\": " + json.dumps(overrides, sort_keys=True)
    lines.append(tail)
    lines.append("}")
    (OUT / name).write_text("\n".join(lines) + "\n")


def main():
    OUT.mkdir(exist_ok=True)
    base = boundary_of_5_simplex()
    pts = place(base, 1)
    write("boundary_delta5.json", base, pts,
          {"name": "boundary of the 5-simplex", "seed": "1"})

    l01 = float(np.sum((pts[0] - pts[1]) ** 2))
    write("perturbed_delta5.json", base, pts,
          {"name": "boundary of the 5-simplex with one squared length raised by 0.1%"},
          {"0,1": l01 * 1.001})

    sub = move_2_4(move_1_5(base, 0, 6), (1, 2, 3, 4))
    write("subdivided.json", sub, place(sub, 2),
          {"name": "1->5 at the first simplex, then 2->4 at tetrahedron 1234",
           "seed": "2"})

    big = move_2_4(move_1_5(sub, 3, 7), (0, 1, 2, 3))
    write("subdivided_large.json", big, place(big, 3),
          {"name": "subdivided.json followed by 1->5 and 2->4", "seed": "3"})
    return 0


if __name__ == "__main__":
    sys.exit(main())
