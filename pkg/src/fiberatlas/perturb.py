"""Infinitesimal ladder and the closed replacement construction.

Infinitesimals are instantiated as powers of one small rational delta,
ordered exactly as the strictly descending chain
1 > eps(2s,1) > ... > eps(2s,s) > eps(2s-1,1) > ... > eps(1,s) > 0.
"For all sufficiently small" becomes a refinement loop delta -> delta^2.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction as Q

from .polycore import Polynomial, Ring
from .semialg import (
    And,
    Atom,
    FALSE,
    TRUE,
    Or,
    SignCondition,
    conj,
    disj,
    level,
    negate,
)


@dataclass(frozen=True)
class EpsilonLadder:
    """eps(i, j) = delta^((2s - i) * s + j) for 1 <= i <= 2s, 1 <= j <= s."""

    s: int
    delta: Q

    def __post_init__(self):
        if not (0 < self.delta < 1):
            raise ValueError("delta must lie strictly between 0 and 1")
        if self.s < 1:
            raise ValueError("family size must be positive")

    def exponent(self, i: int, j: int) -> int:
        if not (1 <= i <= 2 * self.s and 1 <= j <= self.s):
            raise IndexError(f"ladder index ({i}, {j}) out of range")
        return (2 * self.s - i) * self.s + j

    def value(self, i: int, j: int) -> Q:
        return self.delta ** self.exponent(i, j)

    def chain(self):
        """All 2s^2 values in descending order."""
        return [
            self.value(i, j)
            for i in range(2 * self.s, 0, -1)
            for j in range(1, self.s + 1)
        ]

    def refined(self) -> "EpsilonLadder":
        return EpsilonLadder(self.s, self.delta ** 2)


def build_ladder(s: int, delta) -> EpsilonLadder:
    return EpsilonLadder(s, Q(delta))


@dataclass(frozen=True)
class PerturbedFamily:
    """All shifted members P_j +/- eps(i, j).

    Both signs of every (i, j) pair are stored, giving 4s^2 members; the
    construction's own count of distinct shift magnitudes is 2s^2.
    """

    base: tuple  # tuple of Polynomial
    ladder: EpsilonLadder

    def __post_init__(self):
        if len(self.base) != self.ladder.s:
            raise ValueError("ladder size must match family size")

    def member(self, i: int, j: int, sign: int) -> Polynomial:
        """P_j - eps(i,j) for sign -1, P_j + eps(i,j) for sign +1.
        Indices i, j are 1-based as in the ladder."""
        if sign not in (-1, 1):
            raise ValueError("sign must be -1 or +1")
        return self.base[j - 1] + sign * self.ladder.value(i, j)

    def members(self):
        """All members with their (i, j, sign) labels, deterministic order."""
        out = []
        for j in range(1, self.ladder.s + 1):
            for i in range(1, 2 * self.ladder.s + 1):
                for sign in (-1, 1):
                    out.append(((i, j, sign), self.member(i, j, sign)))
        return out

    @property
    def member_count(self) -> int:
        return 4 * self.ladder.s ** 2

    @property
    def shift_count(self) -> int:
        """Distinct shift magnitudes: the 2s^2 of the construction."""
        return 2 * self.ladder.s ** 2


def perturb_family(base, ladder: EpsilonLadder) -> PerturbedFamily:
    return PerturbedFamily(tuple(base), ladder)


# -- the sigma_+ / sigma_- neighborhoods -------------------------------

def sigma_plus(sc: SignCondition, ladder: EpsilonLadder):
    """Closed thickening: two-sided eps(2l, i) bands around the zero-signed
    members, weak inequalities elsewhere."""
    ell = level(sc)
    parts = []
    for idx, (p, s) in enumerate(zip(sc.family, sc.signs), start=1):
        if s == 0:
            e = ladder.value(2 * ell, idx)
            parts.append(Atom(p + e, ">="))
            parts.append(Atom(p - e, "<="))
        elif s == 1:
            parts.append(Atom(p, ">="))
        elif s == -1:
            parts.append(Atom(p, "<="))
    return conj(parts)


def sigma_minus(sc: SignCondition, ladder: EpsilonLadder):
    """Open thickening: strict eps(2l-1, i) bands, strict inequalities
    elsewhere.  Level-0 conditions give pure strict sign conjunctions."""
    ell = level(sc)
    parts = []
    for idx, (p, s) in enumerate(zip(sc.family, sc.signs), start=1):
        if s == 0:
            e = ladder.value(2 * ell - 1, idx)
            parts.append(Atom(p + e, ">"))
            parts.append(Atom(p - e, "<"))
        elif s == 1:
            parts.append(Atom(p, ">"))
        elif s == -1:
            parts.append(Atom(p, "<"))
    return conj(parts)


# -- the inductive closed replacement ----------------------------------

@dataclass(frozen=True)
class ClosedSetDescription:
    formula: object
    ladder: EpsilonLadder


def all_sign_vectors(size: int, ell: int):
    """All sign vectors over `size` members with exactly `ell` zeros."""
    if ell > size:
        return
    from itertools import combinations, product

    for zeros in combinations(range(size), ell):
        zero_set = set(zeros)
        rest = [i for i in range(size) if i not in zero_set]
        for signs in product((-1, 1), repeat=len(rest)):
            vec = [0] * size
            for i, s in zip(rest, signs):
                vec[i] = s
            yield tuple(vec)


def construct_S_prime(sigma_set, base, ladder: EpsilonLadder) -> ClosedSetDescription:
    """Run the level induction and rewrite the result closed.

    The level-l step removes the open thickenings of all level-l sign
    conditions outside the input set and adds the closed thickenings of
    those inside it; the final formula replaces every bare inequality
    P_j >= 0 (P_j <= 0) by P_j >= eps(2,j) (P_j <= -eps(2,j)).
    """
    base = tuple(base)
    raw = construct_S_prime_raw(sigma_set, base, ladder)
    formula = simplify_shift_formula(_rewrite_closed(raw, base, ladder))
    return ClosedSetDescription(formula, ladder)


def _rewrite_closed(formula, base, ladder):
    """Closed rewrite of bare sign atoms on the base family."""
    base_index = {p: j for j, p in enumerate(base, start=1)}

    def rewrite(f):
        if isinstance(f, Atom):
            j = base_index.get(f.poly)
            if j is not None:
                e = ladder.value(2, j)
                if f.rel == ">=":
                    return Atom(f.poly - e, ">=")
                if f.rel == "<=":
                    return Atom(f.poly + e, "<=")
            return f
        if isinstance(f, And):
            return conj(rewrite(c) for c in f.children)
        if isinstance(f, Or):
            return disj(rewrite(c) for c in f.children)
        raise TypeError(f"not a formula: {f!r}")

    return rewrite(formula)


def construct_S_prime_raw(sigma_set, base, ladder: EpsilonLadder):
    """The induction result before the closed rewrite (for the rewrite
    equivalence checks)."""
    base = tuple(base)
    s = len(base)
    if ladder.s != s:
        raise ValueError("ladder size must match family size")
    sigma_set = list(sigma_set)
    for sc in sigma_set:
        if tuple(sc.family) != base:
            raise ValueError("sign condition over a different family")
    wanted = {tuple(sc.signs) for sc in sigma_set}
    formula = FALSE
    for ell in range(s + 1):
        removals = []
        additions = []
        for vec in all_sign_vectors(s, ell):
            sc = SignCondition(base, vec)
            if vec in wanted:
                additions.append(sigma_plus(sc, ladder))
            else:
                removals.append(negate(sigma_minus(sc, ladder)))
        formula = disj([conj([formula] + removals)] + additions)
    return formula


# -- interval pruning of shift formulas --------------------------------
#
# Every atom of an S' formula constrains the value of one base polynomial
# (atom polynomial = base + rational shift).  Within a conjunction the
# per-base constraints intersect to an interval; an empty interval kills
# the branch and dominated bounds are dropped.  This never changes the
# described set: constraints on distinct base polynomials are left alone.

class _Iv:
    __slots__ = ("lo", "lo_s", "hi", "hi_s", "lo_atom", "hi_atom")

    def __init__(self):
        self.lo = None
        self.lo_s = False
        self.hi = None
        self.hi_s = False
        self.lo_atom = None
        self.hi_atom = None

    def copy(self):
        c = _Iv()
        c.lo, c.lo_s, c.hi, c.hi_s = self.lo, self.lo_s, self.hi, self.hi_s
        c.lo_atom, c.hi_atom = self.lo_atom, self.hi_atom
        return c

    def tighten(self, rel, b, atom) -> bool:
        changed = False
        if rel in (">=", ">", "="):
            strict = rel == ">"
            if (self.lo is None or b > self.lo
                    or (b == self.lo and strict and not self.lo_s)):
                self.lo, self.lo_s, self.lo_atom = b, strict, atom
                changed = True
        if rel in ("<=", "<", "="):
            strict = rel == "<"
            if (self.hi is None or b < self.hi
                    or (b == self.hi and strict and not self.hi_s)):
                self.hi, self.hi_s, self.hi_atom = b, strict, atom
                changed = True
        return changed

    def empty(self) -> bool:
        if self.lo is None or self.hi is None:
            return False
        if self.lo > self.hi:
            return True
        return self.lo == self.hi and (self.lo_s or self.hi_s)


def _core_and_bound(atom: Atom):
    """Split the atom polynomial into base part and shift: p = core + k,
    so p REL 0 reads (value of core) REL -k."""
    p = atom.poly
    zero = (0,) * p.ring.nvars
    k = p.terms.get(zero, Q(0))
    core = p - k
    return core, -k


def _all_satisfy(iv: _Iv, rel, b) -> bool:
    if rel in (">=", ">"):
        if iv.lo is None:
            return False
        if iv.lo > b:
            return True
        if iv.lo == b:
            return rel == ">=" or iv.lo_s
        return False
    if rel in ("<=", "<"):
        if iv.hi is None:
            return False
        if iv.hi < b:
            return True
        if iv.hi == b:
            return rel == "<=" or iv.hi_s
        return False
    return (iv.lo == b and iv.hi == b
            and not iv.lo_s and not iv.hi_s)


def _none_satisfy(iv: _Iv, rel, b) -> bool:
    if rel in (">=", ">"):
        if iv.hi is None:
            return False
        if iv.hi < b:
            return True
        return iv.hi == b and (iv.hi_s or rel == ">")
    if rel in ("<=", "<"):
        if iv.lo is None:
            return False
        if iv.lo > b:
            return True
        return iv.lo == b and (iv.lo_s or rel == "<")
    below = iv.lo is not None and (b < iv.lo or (b == iv.lo and iv.lo_s))
    above = iv.hi is not None and (b > iv.hi or (b == iv.hi and iv.hi_s))
    return below or above


def simplify_shift_formula(formula, ctx=None):
    """Prune a formula whose atoms are shifts of base polynomials, using
    exact per-base interval reasoning.  Semantics-preserving."""
    if ctx is None:
        ctx = {}
    if isinstance(formula, Atom):
        core, b = _core_and_bound(formula)
        iv = ctx.get(core)
        if iv is not None:
            if _all_satisfy(iv, formula.rel, b):
                return TRUE
            if _none_satisfy(iv, formula.rel, b):
                return FALSE
        return formula
    if isinstance(formula, Or):
        return disj(simplify_shift_formula(c, ctx) for c in formula.children)
    if isinstance(formula, And):
        children = list(formula.children)
        for _ in range(4):
            local = {}
            merged = dict(ctx)
            others = []
            progressed = False
            for c in children:
                if isinstance(c, Atom):
                    core, b = _core_and_bound(c)
                    if core not in merged:
                        merged[core] = _Iv()
                    else:
                        merged[core] = merged[core].copy()
                    if merged[core].tighten(c.rel, b, c):
                        local[core] = merged[core]
                    elif core not in local:
                        # dominated by an inherited bound: drop
                        progressed = True
                else:
                    others.append(c)
            for iv in merged.values():
                if iv.empty():
                    return FALSE
            new_others = []
            for c in others:
                sc = simplify_shift_formula(c, merged)
                if sc == FALSE:
                    return FALSE
                if sc == TRUE:
                    progressed = True
                    continue
                if sc != c:
                    progressed = True
                new_others.append(sc)
            emitted = []
            for core, iv in local.items():
                inherited = ctx.get(core)
                if iv.lo_atom is not None and (
                    inherited is None
                    or (iv.lo, iv.lo_s) != (inherited.lo, inherited.lo_s)
                ):
                    emitted.append(iv.lo_atom)
                if iv.hi_atom is not None and iv.hi_atom is not iv.lo_atom and (
                    inherited is None
                    or (iv.hi, iv.hi_s) != (inherited.hi, inherited.hi_s)
                ):
                    emitted.append(iv.hi_atom)
            next_children = emitted + new_others
            if not progressed and all(
                isinstance(c, (Atom, Or)) for c in next_children
            ):
                return conj(next_children)
            # a nested And or a collapsed Or may expose new atoms
            flat = []
            for c in next_children:
                if isinstance(c, And):
                    flat.extend(c.children)
                else:
                    flat.append(c)
            children = flat
        return conj(children)
    raise TypeError(f"not a formula: {formula!r}")


# -- rank genericity spot checks ---------------------------------------

@dataclass
class GenericityReport:
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def rational_matrix_rank(rows) -> int:
    """Exact rank of a matrix of Fractions by Gaussian elimination."""
    a = [[Q(v) for v in row] for row in rows]
    rank = 0
    ncols = len(a[0]) if a else 0
    row = 0
    for col in range(ncols):
        pivot = next((r for r in range(row, len(a)) if a[r][col] != 0), None)
        if pivot is None:
            continue
        a[row], a[pivot] = a[pivot], a[row]
        pv = a[row][col]
        for r in range(row + 1, len(a)):
            if a[r][col] != 0:
                factor = a[r][col] / pv
                for c in range(col, ncols):
                    a[r][c] -= factor * a[row][c]
        row += 1
        rank += 1
        if row == len(a):
            break
    return rank


class WitnessError(ValueError):
    pass


def check_rank_genericity(sc: SignCondition, witnesses, ring: Ring) -> GenericityReport:
    """Check the maximal-rank property at witness points.

    Each witness must lie on the stratum (all zero-signed members vanish
    there exactly).  The Jacobian of the zero-signed members, taken over
    all m+n variables, must have rank equal to the level.
    """
    active = [p for p, s in zip(sc.family, sc.signs) if s == 0]
    ell = len(active)
    report = GenericityReport()
    grads = [[p.derivative(i) for i in range(ring.nvars)] for p in active]
    for w in witnesses:
        for p in active:
            if p.eval_at(w) != 0:
                raise WitnessError(f"witness {w} is not on the stratum")
        report.checked += 1
        if ell == 0:
            continue  # vacuous
        jac = [[g.eval_at(w) for g in row] for row in grads]
        rank = rational_matrix_rank(jac)
        if rank != ell:
            report.failures.append((tuple(w), rank, ell))
    return report
