"""Straight-line programs over additions.

An expression is decomposed into steps Q_j = a_j X^alpha ∏Q_i^gamma +
b_j X^beta ∏Q_i^delta, one per addition that cannot be absorbed into a
single scaled monomial product.  The step count is a witness upper bound
for additive complexity, not the minimum.  Each step can then be traded
for one new variable and one trinomial equation, giving a description of
the same set in a higher-dimensional space where every polynomial has at
most three terms.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction as Q

from .polycore import (
    EAdd, EMul, ENeg, ENum, EPow, ESub, EVar,
    ParseError,
    Polynomial,
    Ring,
    parse_expression,
)
from .semialg import And, Atom, Or, eval_formula


@dataclass(frozen=True)
class SLPStep:
    """One addition: Q_j = left + right, each side a scaled monomial
    product over X and earlier Q's (gamma/delta indexed by step, 1-based,
    entries for indices < j only)."""

    index: int
    left: tuple  # (scalar, alpha over X, gamma over prior Q's)
    right: tuple

    def __post_init__(self):
        for _, _, prior in (self.left, self.right):
            if len(prior) != self.index - 1:
                raise ValueError("step references a Q with index >= its own")


@dataclass(frozen=True)
class SLPProgram:
    m: int
    steps: tuple
    final: tuple  # (scalar, zeta over X, eta over Q's)

    @property
    def a(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class _Mono:
    """Scaled monomial product a * X^alpha * prod Q_i^gamma."""

    scalar: Q
    alpha: tuple
    gamma: tuple  # (step index, exponent) pairs, sorted

    def key(self):
        return (self.alpha, self.gamma)


def _mono_const(c, m):
    return _Mono(Q(c), (0,) * m, ())


def _mono_mul(u: _Mono, v: _Mono) -> _Mono:
    if u.scalar == 0 or v.scalar == 0:
        return _Mono(Q(0), u.alpha, ())
    alpha = tuple(x + y for x, y in zip(u.alpha, v.alpha))
    gamma = dict(u.gamma)
    for i, e in v.gamma:
        gamma[i] = gamma.get(i, 0) + e
    return _Mono(u.scalar * v.scalar, alpha, tuple(sorted(gamma.items())))


def _mono_pow(u: _Mono, k: int) -> _Mono:
    if k == 0:
        return _mono_const(1, len(u.alpha))
    if u.scalar == 0:
        return _Mono(Q(0), u.alpha, ())
    return _Mono(
        u.scalar ** k,
        tuple(e * k for e in u.alpha),
        tuple((i, e * k) for i, e in u.gamma),
    )


class _Builder:
    def __init__(self, m):
        self.m = m
        self.steps = []

    def _dense(self, gamma, upto):
        out = [0] * upto
        for i, e in gamma:
            out[i - 1] = e
        return tuple(out)

    def add(self, u: _Mono, v: _Mono, subtract: bool) -> _Mono:
        if subtract:
            v = _Mono(-v.scalar, v.alpha, v.gamma)
        if u.scalar == 0:
            return v
        if v.scalar == 0:
            return u
        if u.key() == v.key():
            s = u.scalar + v.scalar
            if s == 0:
                return _Mono(Q(0), (0,) * self.m, ())
            return _Mono(s, u.alpha, u.gamma)
        j = len(self.steps) + 1
        self.steps.append(SLPStep(
            j,
            (u.scalar, u.alpha, self._dense(u.gamma, j - 1)),
            (v.scalar, v.alpha, self._dense(v.gamma, j - 1)),
        ))
        return _Mono(Q(1), (0,) * self.m, ((j, 1),))

    def walk(self, node) -> _Mono:
        if isinstance(node, ENum):
            return _mono_const(node.value, self.m)
        if isinstance(node, EVar):
            if not node.name.startswith("X"):
                raise ParseError(f"only X variables allowed, got {node.name}", 0)
            idx = int(node.name[1:]) - 1
            alpha = tuple(1 if i == idx else 0 for i in range(self.m))
            return _Mono(Q(1), alpha, ())
        if isinstance(node, ENeg):
            u = self.walk(node.operand)
            return _Mono(-u.scalar, u.alpha, u.gamma)
        if isinstance(node, EMul):
            return _mono_mul(self.walk(node.left), self.walk(node.right))
        if isinstance(node, EPow):
            return _mono_pow(self.walk(node.base), node.exponent)
        if isinstance(node, (EAdd, ESub)):
            u = self.walk(node.left)
            v = self.walk(node.right)
            return self.add(u, v, isinstance(node, ESub))
        raise TypeError(f"unknown AST node {node!r}")


def _max_var(node) -> int:
    if isinstance(node, EVar):
        if not node.name.startswith("X") or not node.name[1:].isdigit():
            raise ParseError(f"only X variables allowed, got {node.name}", 0)
        return int(node.name[1:])
    if isinstance(node, (EAdd, ESub, EMul)):
        return max(_max_var(node.left), _max_var(node.right))
    if isinstance(node, EPow):
        return _max_var(node.base)
    if isinstance(node, ENeg):
        return _max_var(node.operand)
    return 0


def parse_slp(text: str, m: int = None) -> SLPProgram:
    """Parse an expression into a straight-line program.

    A sum whose two sides share the same monomial shape, or where one
    side vanishes, is absorbed without a step; every other addition or
    subtraction node becomes one step.
    """
    node = parse_expression(text)
    if m is None:
        m = max(_max_var(node), 1)
    builder = _Builder(m)
    top = builder.walk(node)
    eta = [0] * len(builder.steps)
    for i, e in top.gamma:
        eta[i - 1] = e
    return SLPProgram(m, tuple(builder.steps), (top.scalar, top.alpha, tuple(eta)))


def _side_poly(ring: Ring, scalar, alpha, exps, values):
    """Evaluate scalar * X^alpha * prod values[i]^exps[i] in ring."""
    p = Polynomial.constant(ring, scalar)
    for i, e in enumerate(alpha):
        if e:
            p = p * Polynomial.variable(ring, i) ** e
    for i, e in enumerate(exps):
        if e:
            p = p * values[i] ** e
    return p


def expand(prog: SLPProgram) -> Polynomial:
    """Full symbolic expansion of the program over the rationals."""
    ring = Ring(prog.m, 0)
    qs = []
    for st in prog.steps:
        left = _side_poly(ring, st.left[0], st.left[1], st.left[2], qs)
        right = _side_poly(ring, st.right[0], st.right[1], st.right[2], qs)
        qs.append(left + right)
    c, zeta, eta = prog.final
    return _side_poly(ring, c, zeta, eta, qs)


@dataclass(frozen=True)
class LiftedSystem:
    """Trinomial-equation description of a lifted set in dimension m + a.

    Lift variables are Y1..Ya in program order; names records the
    (program k, step j) origin of each."""

    equations: tuple
    rewritten_formula: object
    m: int
    a: int
    names: tuple  # (k, j, global Y name) per lift variable

    def to_json_dict(self):
        from .polycore import Polynomial as _P
        return {
            "m": self.m,
            "a": self.a,
            "variables": [
                {"program": k, "step": j, "name": nm} for k, j, nm in self.names
            ],
            "equations": [eq.to_text() + " = 0" for eq in self.equations],
        }


def _embed(p: Polynomial, ring: Ring) -> Polynomial:
    """Re-express a polynomial in fewer variables inside a larger ring;
    the shared variables must be a prefix."""
    pad = ring.nvars - p.ring.nvars
    return Polynomial(ring, {expo + (0,) * pad: c for expo, c in p.terms.items()})


def _ambient_mono(ring, scalar, alpha, exps, offset):
    """Monomial c * X^alpha * prod Y_{offset+i}^exps[i] in the ambient ring."""
    m = len(alpha)
    expo = [0] * ring.nvars
    for i, e in enumerate(alpha):
        expo[i] = e
    for i, e in enumerate(exps):
        expo[m + offset + i] = e
    if scalar == 0:
        return Polynomial.constant(ring, 0)
    return Polynomial(ring, {tuple(expo): Q(scalar)})


def lift(progs, formula) -> LiftedSystem:
    """Trade each program step for a lift variable and a trinomial
    equation; rewrite every atom as its final monomial form.

    The input formula lives over a ring with one X variable per program:
    an atom whose polynomial is exactly X_k refers to program k (1-based).
    """
    progs = list(progs)
    m = max((p.m for p in progs), default=1)
    offsets = []
    total = 0
    for p in progs:
        offsets.append(total)
        total += p.a
    ring = Ring(m, total)
    names = []
    equations = []
    for k, prog in enumerate(progs):
        off = offsets[k]
        for st in prog.steps:
            gname = ring.var_name(m + off + st.index - 1)
            names.append((k + 1, st.index, gname))
            y = Polynomial.variable(ring, m + off + st.index - 1)
            left = _ambient_mono(ring, st.left[0], st.left[1] + (0,) * (m - prog.m),
                                 st.left[2], off)
            right = _ambient_mono(ring, st.right[0], st.right[1] + (0,) * (m - prog.m),
                                  st.right[2], off)
            equations.append(y - left - right)

    def atom_program(poly):
        for k in range(len(progs)):
            if poly == Polynomial.variable(poly.ring, k):
                return k
        raise ValueError(f"atom references unknown program: {poly.to_text()}")

    def rewrite(f):
        if isinstance(f, Atom):
            k = atom_program(f.poly)
            c, zeta, eta = progs[k].final
            mono = _ambient_mono(ring, c, zeta + (0,) * (m - progs[k].m),
                                 eta, offsets[k])
            return Atom(mono, f.rel)
        if isinstance(f, And):
            return And(tuple(rewrite(g) for g in f.children))
        if isinstance(f, Or):
            return Or(tuple(rewrite(g) for g in f.children))
        raise TypeError(f"unknown formula node {f!r}")

    return LiftedSystem(tuple(equations), rewrite(formula), m, total, tuple(names))


@dataclass(frozen=True)
class LiftReport:
    symbolic_ok: bool
    sample_count: int
    sample_failures: tuple
    notes: tuple = ()

    @property
    def passed(self) -> bool:
        return self.symbolic_ok and not self.sample_failures


def _q_values(prog: SLPProgram, x):
    """Values of the intermediate quantities at a point; these determine
    the unique lift of x."""
    vals = []
    for st in prog.steps:
        total = Q(0)
        for scalar, alpha, exps in (st.left, st.right):
            v = Q(scalar)
            for i, e in enumerate(alpha):
                v *= Q(x[i]) ** e
            for i, e in enumerate(exps):
                v *= vals[i] ** e
            total += v
        vals.append(total)
    return vals


def verify_lift(ls: LiftedSystem, progs, formula, samples: int = 20,
                seed: int = 0) -> LiftReport:
    """Check the lift both symbolically and on sample points.

    Symbolic: substituting each lift variable by its expanded quantity
    turns every equation into zero and every rewritten atom back into the
    original program's expansion.  Samples: at random rational points the
    unique lift satisfies the rewritten formula exactly when the point
    satisfies the original; uniqueness is structural since each lift
    variable is an explicit function of the point and earlier ones.
    """
    progs = list(progs)
    ring = ls.equations[0].ring if ls.equations else Ring(ls.m, ls.a)
    m = ls.m
    offsets = []
    total = 0
    for p in progs:
        offsets.append(total)
        total += p.a

    assignment = {}
    for k, prog in enumerate(progs):
        qring = Ring(prog.m, 0)
        qs = []
        for st in prog.steps:
            left = _side_poly(qring, st.left[0], st.left[1], st.left[2], qs)
            right = _side_poly(qring, st.right[0], st.right[1], st.right[2], qs)
            qs.append(left + right)
        for j, qp in enumerate(qs):
            assignment[m + offsets[k] + j] = _embed(qp, ring)

    symbolic_ok = all(
        eq.substitute_poly(assignment).is_zero() for eq in ls.equations
    )

    def atoms(f):
        if isinstance(f, Atom):
            yield f
        elif isinstance(f, (And, Or)):
            for g in f.children:
                yield from atoms(g)

    lifted_atoms = list(atoms(ls.rewritten_formula))
    original_atoms = list(atoms(formula))
    if len(lifted_atoms) != len(original_atoms):
        symbolic_ok = False
    else:
        for la, oa in zip(lifted_atoms, original_atoms):
            if la.rel != oa.rel:
                symbolic_ok = False
                break
            for k in range(len(progs)):
                if oa.poly == Polynomial.variable(oa.poly.ring, k):
                    want = _embed(expand(progs[k]), ring)
                    if la.poly.substitute_poly(assignment) != want:
                        symbolic_ok = False
                    break
            else:
                symbolic_ok = False

    rng = random.Random(seed)
    failures = []
    for t in range(samples):
        x = [Q(rng.randint(-8, 8), rng.randint(1, 4)) for _ in range(m)]
        pvals = [expand(p).eval_at(tuple(x[:p.m])) for p in progs]
        yvals = []
        for p in progs:
            yvals.extend(_q_values(p, x))
        point = tuple(x) + tuple(yvals)
        if any(eq.eval_at(point) != 0 for eq in ls.equations):
            failures.append((t, tuple(x), "equation violated at lift"))
            continue
        orig = eval_formula(formula, tuple(pvals))
        lifted = eval_formula(ls.rewritten_formula, point)
        if orig != lifted:
            failures.append((t, tuple(x), "truth mismatch"))
    notes = ("lift uniqueness is structural: each lift variable is a "
             "function of the point and earlier lift variables",)
    return LiftReport(symbolic_ok, samples, tuple(failures), notes)
