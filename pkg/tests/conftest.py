"""Shared bundled examples used across the suite.

Each bundled example is a small parametric family with a known census;
the acceptance tests sweep all of them.
"""
from dataclasses import dataclass
from fractions import Fraction as Q

from fiberatlas.polycore import Ring, parse_polynomial


@dataclass(frozen=True)
class Bundled:
    name: str
    m: int
    n: int
    base_texts: tuple
    sigma: tuple  # sign vectors over the base family
    # False when the example has fiber features narrower than any fixed
    # grid resolution; the grid oracle is then checked at coarse probes
    grid_safe: bool = True
    coarse_probes: tuple = ()

    @property
    def ring(self):
        return Ring(self.m, self.n)

    @property
    def base(self):
        return tuple(parse_polynomial(t, self.ring) for t in self.base_texts)


BUNDLED = (
    Bundled("quadric", 1, 1, ("X1^2 + Y1 - 1",), ((0,),)),
    Bundled(
        "twolines", 1, 1,
        ("X1 - 1", "X1 - 2", "X1 - Y1"),
        # every sign vector satisfying ((P1 = 0) or (P2 = 0)) and P3 >= 0
        tuple(
            (s1, s2, s3)
            for s1 in (-1, 0, 1)
            for s2 in (-1, 0, 1)
            for s3 in (0, 1)
            if s1 == 0 or s2 == 0
        ),
        grid_safe=False,
        coarse_probes=(Q(1, 2), Q(3, 2), Q(5, 2)),
    ),
    Bundled("halfline", 1, 1, ("X1 - Y1",), ((0,), (1,))),
    Bundled("band", 1, 1, ("X1^2 + Y1 - 1",), ((0,), (-1,))),
)


def stratum_witnesses(example):
    """(member text, sign vector, witness point) triples: exact points on
    level-1 strata of the shifted families, with e standing for the shift."""
    if example.name == "quadric":
        return (
            ("X1^2 + Y1 - 1 - e", (Q(1), "e")),
            ("X1^2 + Y1 - 1 + e", (Q(0), "1-e")),
        )
    if example.name == "twolines":
        return (
            ("X1 - 1 - e", ("1+e", Q(0))),
            ("X1 - 2 + e", ("2-e", Q(0))),
            ("X1 - Y1 - e", ("e", Q(0))),
        )
    if example.name == "halfline":
        return (("X1 - Y1 + e", (Q(0), "e")),)
    if example.name == "band":
        return (("X1^2 + Y1 - 1 - e", (Q(1), "e")),)
    raise KeyError(example.name)


SLP_CORPUS = (
    "(X1+1)^3",
    "X1^5 * X2",
    "(X1+1)*(X1-1)",
    "X1",
    "7",
    "-3/2",
    "0",
    "X1 + 1",
    "X1 - 1",
    "2*X1 + 3*X1",
    "X1 - X1",
    "X1^2 + 2*X1 + 1",
    "(X1 + X2)^2",
    "(X1 - X2)^3",
    "X1*X2 + X2*X1",
    "(2*X1 + 1)^4",
    "(X1^2 + 1)*(X1^2 - 1)",
    "(X1 + 1)*(X2 + 1)",
    "3*(X1 + 2)^2",
    "-(X1 + 1)",
    "(X1 + 1)^2 - (X1 - 1)^2",
    "X1^3 - 3*X1^2 + 3*X1 - 1",
    "(1/2*X1 + 1/3)^2",
    "X1^2*X2^3 + 1",
    "(X1 + X2 + 1)^2",
    "5*X1^4 - 5*X1^4",
    "(X1*X2 + 1)^3",
    "((X1 + 1)^2 + 1)^2",
    "2^3 + X1",
    "(X1 + 1)*(X1 + 1)",
)
