"""Independent reference for the comb dendrite map and the walk fractions.

Applies f directly from the piecewise table with Fractions and counts
orbit distances to the fixed point (1, 0). Prints values frozen into the
Rust tests.
"""
from fractions import Fraction as F


def z(n, j):
    return F(j, 3 ** n)


def target(n, j):
    """Other endpoint of the psi range, as (level, index)."""
    if n % 2 == 1:
        if j == 3 ** n - 1:
            return n + 1, 3 ** (n + 1) - 1
        return (n, j + 1) if j % 3 == 1 else (n, j + 2)
    if j == 1:
        return n + 1, 1
    return (n, j - 1) if j % 3 == 2 else (n, j - 2)


def f(p):
    if p[0] == "spine":
        return p
    _, n, j, y = p
    h = F(1, 3 ** n)
    tn, tj = target(n, j)
    if y <= F(2, 3) * h:
        return ("spine", z(n, j) + (z(tn, tj) - z(n, j)) * y / (F(2, 3) * h))
    th = F(1, 3 ** tn)
    return ("spike", tn, tj, th * (y - F(2, 3) * h) / (h / 3))


def coords(p):
    if p[0] == "spine":
        return p[1], F(0)
    return z(p[1], p[2]), p[3]


def dist(p, q):
    (a, b), (c, d) = coords(p), coords(q)
    return max(abs(a - c), abs(b - d))


def walk_fractions(levels, deltas):
    """Per-level checkpoint fractions and the full indicator stream."""
    p = ("spike", 1, 1, F(1, 3))
    x = ("spine", F(1))
    total = 3 ** levels - 1
    ind = {d: [] for d in deltas}
    lv = []
    for _ in range(total):
        dd = dist(p, x)
        for d in deltas:
            ind[d].append(dd < d)
        lv.append(p[1])
        p = f(p)
    return ind, lv


def checkpoints(ind, lv, level, want):
    start = 3 ** (level - 1) - 1
    end = 3 ** level - 1
    seen_true = False
    for k in range(start, end):
        if want == "limsup":
            if ind[k]:
                seen_true = True
            elif seen_true:
                return k
        else:
            if ind[k]:
                return k
    return end


def frac(ind, n):
    return F(sum(ind[:n]), n)


if __name__ == "__main__":
    print("f(1/3,1/3) =", f(("spike", 1, 1, F(1, 3))))
    print("f(1/3,1/9) =", f(("spike", 1, 1, F(1, 9))))
    p = ("spike", 1, 1, F(1, 3))
    tops = []
    for _ in range(9):
        tops.append((p[1], p[2]))
        p = f(p)
    print("walk", tops)
    deltas = [F(1, 2), F(1, 4)]
    ind, lv = walk_fractions(12, deltas)
    for L in range(4, 13, 2):
        res = []
        for d in deltas:
            ks = checkpoints(ind[d], lv, L, "limsup")
            ki = checkpoints(ind[d], lv, L - 1, "liminf")
            res.append((str(d), ks, str(frac(ind[d], ks)), ki, str(frac(ind[d], ki))))
        print("L", L, res)
    for d in deltas:
        lo = 3 ** 10 - 1
        fr = [frac(ind[d], n) for n in range(lo + 1, 3 ** 12)]
        print("running", str(d), float(min(fr)), float(max(fr)))
