#!/usr/bin/env python3
"""Regenerate the bundled category files in data/."""
import cmath
import itertools
import json
import math
import pathlib

OUT = pathlib.Path(__file__).resolve().parent.parent / "data"


def channels(N, a, b):
    return [c for (x, y, c) in N if x == a and y == b]


def f_entries(labels, N, special):
    rows = []
    for a, b, c, d in itertools.product(labels, repeat=4):
        lefts = [e for e in channels(N, a, b) if d in channels(N, e, c)]
        rights = [f for f in channels(N, b, c) if d in channels(N, a, f)]
        for e in lefts:
            for f in rights:
                v = special.get((a, b, c, d, e, f), 1.0)
                v = complex(v)
                rows.append([a, b, c, d, e, f, 0, 0, 0, 0, v.real, v.imag])
    return rows


def r_entries(labels, N, rfun):
    rows = []
    for a, b in itertools.product(labels, repeat=2):
        for c in channels(N, a, b):
            v = complex(rfun(a, b, c))
            rows.append([a, b, c, 0, 0, v.real, v.imag])
    return rows


def write(name, labels, dual, N, F, R, dims):
    doc = {
        "name": name,
        "labels": labels,
        "unit": labels[0],
        "dual": dual,
        "unitary": True,
        "N": [[a, b, c, 1] for (a, b, c) in N],
        "F": F,
        "dims": {k: [float(v), 0.0] for k, v in dims.items()},
        "tol": 1e-9,
    }
    if R is not None:
        doc["R"] = R
    path = OUT / f"{name}.json"
    parts = []
    for key, val in doc.items():
        if isinstance(val, list) and val and isinstance(val[0], list):
            rows = ",\n    ".join(json.dumps(r) for r in val)
            parts.append(f'  "{key}": [\n    {rows}\n  ]')
        else:
            parts.append(f"  {json.dumps(key)}: {json.dumps(val)}")
    path.write_text("{\n" + ",\n".join(parts) + "\n}\n")
    print("wrote", path)


def fibonacci():
    L = ["1", "tau"]
    N = [("1", "1", "1"), ("1", "tau", "tau"), ("tau", "1", "tau"),
         ("tau", "tau", "1"), ("tau", "tau", "tau")]
    phi = (1 + math.sqrt(5)) / 2
    t = "tau"
    sp = {
        (t, t, t, t, "1", "1"): 1 / phi,
        (t, t, t, t, "1", t): 1 / math.sqrt(phi),
        (t, t, t, t, t, "1"): 1 / math.sqrt(phi),
        (t, t, t, t, t, t): -1 / phi,
    }

    def r(a, b, c):
        if a == t and b == t:
            return cmath.exp(-4j * math.pi / 5) if c == "1" else cmath.exp(3j * math.pi / 5)
        return 1

    write("fibonacci", L, {"1": "1", t: t}, N, f_entries(L, N, sp),
          r_entries(L, N, r), {"1": 1, t: phi})


def ising():
    L = ["1", "sigma", "psi"]
    s, p = "sigma", "psi"
    N = [("1", x, x) for x in L] + [(x, "1", x) for x in L[1:]] + [
        (s, s, "1"), (s, s, p), (s, p, s), (p, s, s), (p, p, "1")]
    h = 1 / math.sqrt(2)
    sp = {
        (s, s, s, s, "1", "1"): h, (s, s, s, s, "1", p): h,
        (s, s, s, s, p, "1"): h, (s, s, s, s, p, p): -h,
        (s, p, s, p, s, s): -1, (p, s, p, s, s, s): -1,
    }
    table = {
        (s, s, "1"): cmath.exp(-1j * math.pi / 8),
        (s, s, p): cmath.exp(3j * math.pi / 8),
        (s, p, s): -1j, (p, s, s): -1j, (p, p, "1"): -1,
    }
    write("ising", L, {x: x for x in L}, N, f_entries(L, N, sp),
          r_entries(L, N, lambda a, b, c: table.get((a, b, c), 1)),
          {"1": 1, s: math.sqrt(2), p: 1})


def cyclic(n, name, labels, braided_phase):
    N = [(labels[i], labels[j], labels[(i + j) % n]) for i in range(n) for j in range(n)]
    dual = {labels[i]: labels[(-i) % n] for i in range(n)}
    idx = {x: i for i, x in enumerate(labels)}
    write(name, labels, dual, N, f_entries(labels, N, {}),
          r_entries(labels, N, lambda a, b, c: braided_phase(idx[a], idx[b])),
          {x: 1 for x in labels})


if __name__ == "__main__":
    fibonacci()
    ising()
    cyclic(2, "vec_z2", ["1", "e"], lambda a, b: 1)
    w = cmath.exp(2j * math.pi / 3)
    cyclic(3, "vec_z3", ["0", "1", "2"], lambda a, b: w ** (a * b))
