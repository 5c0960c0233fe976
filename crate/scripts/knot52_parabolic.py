"""Exact parabolic coloring of the 5_2 diagram in data/knot52.pd.

Arcs 0 and 2 are normalized to (1, 0) and (0, u); the crossing relations
C0<C2=C1, C1<C4=C2, C2<C0=C3, C3<C1=C4, C4<C3=C0 then force u to be a root of
an irreducible cubic. Writes data/knot52_parabolic.json.
"""
import json
import sys
from pathlib import Path

from sympy import Integer, Matrix, Poly, expand, rem, symbols

u = symbols("u")
MINPOLY = Poly(u**3 - u**2 + 2 * u - 1, u)


def op(p, q):
    a, b = p
    c, d = q
    m = Matrix([[1 + c * d, d**2], [-c**2, 1 - c * d]])
    r = Matrix([[a, b]]) * m
    return tuple(rem(expand(x), MINPOLY.as_expr(), u) for x in r)


def coeffs(x):
    p = Poly(x, u)
    c = [str(v) for v in reversed(p.all_coeffs())]
    return c or ["0"]


def same(p, q):
    return all(expand(rem(expand(x - y), MINPOLY.as_expr(), u)) == 0 for x, y in zip(p, q)) or all(
        expand(rem(expand(x + y), MINPOLY.as_expr(), u)) == 0 for x, y in zip(p, q)
    )


def main():
    c0 = (Integer(1), Integer(0))
    c2 = (Integer(0), u)
    c1 = op(c0, c2)
    c3 = op(c2, c0)
    c4 = op(c3, c1)
    assert same(op(c1, c4), c2) and same(op(c4, c3), c0)
    arcs = [c0, c1, c2, c3, c4]
    doc = {
        "field": {"minpoly": [str(v) for v in reversed(MINPOLY.all_coeffs())]},
        "arcs": [[coeffs(a), coeffs(b)] for a, b in arcs],
        "x0": [["1"], ["2"]],
    }
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).parent.parent / "data" / "knot52_parabolic.json"
    out.write_text(json.dumps(doc, indent=2) + "\n")


if __name__ == "__main__":
    main()
