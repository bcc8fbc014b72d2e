"""Random projection cycles built from boxes, independent of the library code.

A box with opposite corners ``lo`` and ``hi`` (distinct in every coordinate)
carries the weight ``prod(+1 at lo, -1 at hi)`` at each of its 8 corners;
every axis plane through the box then holds two +1 and two -1 weights. Sums
of boxes are cycles, and every cycle on a tensor grid is such a sum.
"""

from collections import defaultdict
from fractions import Fraction
from itertools import product


def box(lo, hi, coef=Fraction(1)):
    out = {}
    for pick in product((0, 1), repeat=3):
        p = tuple(hi[k] if pick[k] else lo[k] for k in range(3))
        out[p] = coef * (-1) ** sum(pick)
    return out


def add(*cycles):
    acc = defaultdict(Fraction)
    for c in cycles:
        for p, w in c.items():
            acc[p] += w
    return dict(acc)


def nonzero(c):
    return {p: w for p, w in c.items() if w != 0}


def random_coord(rng, den=8):
    return Fraction(int(rng.integers(0, den + 1)), den)


def random_box(rng, den=8, max_coef=5):
    lo, hi = [], []
    for _ in range(3):
        a = b = 0
        while a == b:
            a, b = random_coord(rng, den), random_coord(rng, den)
        lo.append(float(min(a, b)))
        hi.append(float(max(a, b)))
    coef = Fraction(int(rng.integers(1, max_coef + 1)), int(rng.integers(1, 4)))
    if rng.random() < 0.5:
        coef = -coef
    return box(tuple(lo), tuple(hi), coef)


def random_cycle(rng, nboxes=3, den=8):
    return nonzero(add(*(random_box(rng, den) for _ in range(nboxes))))


def plane_sums(c):
    sums = defaultdict(Fraction)
    for p, w in c.items():
        for k in range(3):
            sums[(k, p[k])] += w
    return sums


def mass(c):
    return sum(abs(w) for w in c.values())
