"""Writes the small finite fixtures under data/ (S3 group, cocycles)."""
import itertools
import json
import random
from pathlib import Path

DATA = Path(__file__).resolve().parent.parent / "data"


def s3():
    perms = list(itertools.permutations(range(3)))
    idx = {p: i for i, p in enumerate(perms)}
    # (p*q)(x) = q(p(x)): act by p first
    mul = [[idx[tuple(q[p[x]] for x in range(3))] for q in perms] for p in perms]
    k = sorted({idx[(0, 1, 2)], idx[(1, 0, 2)]})
    a3 = sorted({idx[(0, 1, 2)], idx[(1, 2, 0)], idx[(2, 0, 1)]})
    labels = ["".join(map(str, p)) for p in perms]
    return mul, k, a3, labels


def main():
    mul, k, a3, labels = s3()
    n = len(mul)
    (DATA / "s3.json").write_text(json.dumps(
        {"size": n, "mul": mul, "labels": labels, "subgroups": {"K": k, "A3": a3}}, indent=1) + "\n")
    (DATA / "s3_malnormal.json").write_text(json.dumps(["K"]) + "\n")
    (DATA / "s3_not_malnormal.json").write_text(json.dumps(["A3"]) + "\n")

    rng = random.Random(11)
    f = [[rng.randrange(3) for _ in range(n)] for _ in range(n)]
    theta = []
    for a, b, c in itertools.product(range(n), repeat=3):
        v = (f[b][c] - f[mul[a][b]][c] + f[a][mul[b][c]] - f[a][b]) % 3
        if v:
            theta.append([a, b, c, v])
    eta = [[x, y, f[x][y]] for x in k for y in k if f[x][y]]
    good = {"modulus": 3, "families": [{"subgroup": "K", "theta": theta, "eta": eta}]}
    (DATA / "s3_coboundary.json").write_text(json.dumps(good) + "\n")
    bad = json.loads(json.dumps(good))
    t = bad["families"][0]["theta"]
    t[0][3] = (t[0][3] + 1) % 3
    (DATA / "s3_perturbed.json").write_text(json.dumps(bad) + "\n")

    # (x-y)(y-z)^2 z over F3, a 3-cocycle of R3
    vals = [((x - y) * (y - z) ** 2 * z) % 3 for x, y, z in itertools.product(range(3), repeat=3)]
    (DATA / "mochizuki3.json").write_text(json.dumps({"modulus": 3, "arity": 3, "values": vals}) + "\n")
    theta4 = [((k1 - x) * (y - z) ** 2 * w) % 3 for k1, x, y, z, w in
              [(a, b, c, d, d) for a, b, c, d in itertools.product(range(3), repeat=4)]]
    (DATA / "theta4_r3.json").write_text(json.dumps({"modulus": 3, "arity": 4, "values": theta4}) + "\n")

    (DATA / "alexander5.json").write_text(json.dumps({"kind": "alexander", "m": 5, "t": 2}) + "\n")
    (DATA / "not_a_quandle.json").write_text(json.dumps({"size": 2, "table": [[0, 0], [0, 1]]}) + "\n")


if __name__ == "__main__":
    main()
