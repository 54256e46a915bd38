"""Projection to the parameter line and discriminant assembly."""
import json
from fractions import Fraction as Q

import pytest

from fiberatlas.critical import enumerate_strata, systems_for_strata
from fiberatlas.eliminate import (
    DegenerateEliminationError,
    UnsupportedModeError,
    _combine_residuals,
    _eliminate_vars,
    assemble_G,
    project_system,
)
from fiberatlas.perturb import build_ladder, construct_S_prime
from fiberatlas.polycore import Ring, parse_polynomial
from fiberatlas.semialg import SignCondition, atoms_of

R = Ring(1, 1)


def P(text, ring=R):
    return parse_polynomial(text, ring)


def _quadric_systems(delta=Q(1, 64)):
    base = (P("X1^2 + Y1 - 1"),)
    ladder = build_ladder(1, delta)
    closed = construct_S_prime([SignCondition(base, (0,))], base, ladder)
    members = []
    for atom in atoms_of(closed.formula):
        if atom.poly not in members:
            members.append(atom.poly)
    strata = enumerate_strata(members, base, 2)
    return systems_for_strata(strata, 1), base[0].ring


def test_eliminate_vars_resultant_path():
    polys = [P("X1^2 + Y1 - 1"), P("2*X1")]
    residuals = _eliminate_vars(polys, 1)
    assert len(residuals) == 1
    assert residuals[0] == P("4*Y1 - 4")


def test_eliminate_single_holder_dropped():
    # only one polynomial carries X1: dropping it keeps a superset
    residuals = _eliminate_vars([P("X1^2 + Y1"), P("Y1 - 2")], 1)
    assert residuals == [P("Y1 - 2")]


def test_combine_residuals_gcd():
    ring = Ring(1, 1)
    residuals = [P("(Y1 - 1)*(Y1 - 2)"), P("(Y1 - 1)*(Y1 + 3)")]
    combined = _combine_residuals(residuals, ring, 1)
    assert combined is not None
    assert combined.eval_at((Q(0), Q(1))) == 0
    assert combined.total_degree() == 1


def test_combine_residuals_inconsistent():
    ring = Ring(1, 1)
    assert _combine_residuals([P("3")], ring, 1) is None
    assert _combine_residuals([P("Y1 - 1"), P("Y1 - 2")], ring, 1) is None


def test_combine_residuals_degenerate_raises():
    ring = Ring(1, 1)
    with pytest.raises(DegenerateEliminationError):
        _combine_residuals([P("0")], ring, 1)


def test_project_quadric_critical_value():
    systems, ring = _quadric_systems()
    projections = []
    for cs in systems:
        projections.extend(project_system(cs, 1, 1))
    roots = set()
    for p in projections:
        for y in (Q(63, 64), Q(65, 64)):
            if p.eval_at((Q(0), y)) == 0:
                roots.add(y)
    assert roots == {Q(63, 64), Q(65, 64)}


def test_project_rejects_unsupported_modes():
    systems, _ = _quadric_systems()
    with pytest.raises(UnsupportedModeError):
        project_system(systems[0], 1, 2)
    with pytest.raises(UnsupportedModeError):
        project_system(systems[0], 4, 1)


def test_assemble_quadric_discriminant():
    systems, ring = _quadric_systems()
    G = assemble_G(systems, ring, 1)
    assert G.mode == "exact-n1"
    assert len(G.roots) == 2
    (lo1, hi1, _), (lo2, hi2, _) = G.roots
    assert lo1 <= Q(63, 64) <= hi1
    assert lo2 <= Q(65, 64) <= hi2
    assert hi1 < lo2 or (hi1 == lo2 and lo1 == hi1 != lo2)


def test_assemble_empty_systems():
    G = assemble_G([], Ring(1, 1), 1)
    assert G.roots == ()
    assert G.defining == ()


def test_discriminant_json_round_trip():
    systems, ring = _quadric_systems()
    G = assemble_G(systems, ring, 1)
    data = json.loads(G.to_json())
    assert data["mode"] == "exact-n1"
    assert len(data["roots"]) == 2
    for r in data["roots"]:
        assert set(r) == {"lo", "hi", "poly"}


def test_roots_refer_to_vanishing_defining_polys():
    systems, ring = _quadric_systems()
    G = assemble_G(systems, ring, 1)
    for lo, hi, idx in G.roots:
        p = G.defining[idx]
        vals = [p.eval_at((Q(0), lo)), p.eval_at((Q(0), hi))]
        assert any(v == 0 for v in vals) or vals[0] * vals[1] < 0
