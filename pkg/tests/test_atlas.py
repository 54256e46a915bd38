"""Cells, fiber component counts, and the full census pipeline."""
import json
from fractions import Fraction as Q

import pytest

from fiberatlas.atlas import (
    ParameterCell,
    components_complement,
    fiber_b0,
    interior_points,
    run_atlas,
)
from fiberatlas.eliminate import DiscriminantSet
from fiberatlas.polycore import Ring, parse_polynomial
from fiberatlas.semialg import SignCondition, parse_formula

R = Ring(1, 1)


def P(text, ring=R):
    return parse_polynomial(text, ring)


def _disc(roots):
    return DiscriminantSet((), tuple(roots), "exact-n1")


def test_components_no_roots_single_cell():
    cells = components_complement(_disc([]))
    assert len(cells) == 1
    assert cells[0].left is None and cells[0].right is None
    assert cells[0].sample == 0


def test_components_two_roots_three_cells():
    cells = components_complement(
        _disc([(Q(1), Q(1), 0), (Q(2), Q(2), 0)]))
    assert len(cells) == 3
    assert cells[0].right == Q(1) and cells[1].left == Q(1)
    assert cells[1].sample == Q(3, 2)
    assert cells[0].sample < Q(1) < cells[1].sample < Q(2) < cells[2].sample


def test_components_interval_roots_use_hulls():
    cells = components_complement(
        _disc([(Q(0), Q(1, 2), 0), (Q(3), Q(4), 0)]))
    assert len(cells) == 3
    assert cells[1].left == Q(1, 2) and cells[1].right == Q(3)


def test_components_overlapping_roots_rejected():
    with pytest.raises(ValueError):
        components_complement(_disc([(Q(0), Q(2), 0), (Q(1), Q(3), 0)]))


def test_cell_contains():
    cell = ParameterCell(Q(0), Q(1), Q(1, 2))
    assert cell.contains(Q(1, 3))
    assert not cell.contains(Q(2))
    unbounded = ParameterCell(None, Q(1), Q(0))
    assert unbounded.contains(Q(-100))


def test_interior_points_stay_inside():
    for cell in (
        ParameterCell(Q(0), Q(1), Q(1, 2)),
        ParameterCell(None, Q(1), Q(0)),
        ParameterCell(Q(1), None, Q(2)),
    ):
        pts = interior_points(cell, 3)
        assert len(set(pts)) == 3
        for t in pts:
            assert cell.contains(t)


def test_fiber_b0_band_example():
    f = parse_formula("(X1^2 + Y1 - 3/4 >= 0) and (X1^2 + Y1 - 5/4 <= 0)", R)
    assert fiber_b0(f, Q(0), 1).b0 == 2
    assert fiber_b0(f, Q(1), 1).b0 == 1
    assert fiber_b0(f, Q(9, 4), 1).b0 == 0


def test_fiber_b0_grid_matches_exact_on_band():
    f = parse_formula("(X1^2 + Y1 - 3/4 >= 0) and (X1^2 + Y1 - 5/4 <= 0)", R)
    for y in (Q(0), Q(1), Q(9, 4), Q(-3)):
        exact = fiber_b0(f, y, 1).b0
        grid = fiber_b0(f, y, 1, mode="grid", resolution=Q(1, 1024)).b0
        assert exact == grid


def test_fiber_b0_isolated_points_counted():
    f = parse_formula("(X1 - 1)*(X1 - 2) = 0", R)
    rep = fiber_b0(f, Q(0), 1)
    assert rep.b0 == 2
    assert rep.method == "exact-univariate"


def test_fiber_b0_true_false_formulas():
    from fiberatlas.semialg import FALSE, TRUE

    assert fiber_b0(FALSE, Q(0), 1).b0 == 0
    assert fiber_b0(TRUE, Q(0), 1).b0 == 1


def test_fiber_b0_grid_two_fiber_vars():
    ring = Ring(2, 1)
    f = parse_formula("X1^2 + X2^2 + Y1 - 1 <= 0", ring)
    assert fiber_b0(f, Q(0), 2, mode="grid", resolution=Q(1, 8)).b0 == 1
    assert fiber_b0(f, Q(2), 2, mode="grid", resolution=Q(1, 8)).b0 == 0


def test_run_atlas_quadric_census():
    base = (P("X1^2 + Y1 - 1"),)
    report = run_atlas(base, [SignCondition(base, (0,))], 1)
    assert len(report.cells) == 3
    assert sorted(f.b0 for f in report.fibers) == [0, 1, 2]
    assert report.distinct_signatures == 3
    assert report.stabilization


def test_run_atlas_empty_sigma():
    base = (P("X1^2 + Y1 - 1"),)
    report = run_atlas(base, [], 1)
    assert len(report.cells) == 1
    assert report.fibers[0].b0 == 0


def test_run_atlas_empty_base_rejected():
    with pytest.raises(ValueError):
        run_atlas((), [], 1)


def test_report_json_shape():
    base = (P("X1^2 + Y1 - 1"),)
    report = run_atlas(base, [SignCondition(base, (0,))], 1)
    data = json.loads(report.to_json())
    assert data["stabilization"] is True
    assert len(data["cells"]) == len(data["fibers"]) == 3
    assert data["fibers"][0]["sample"].count("/") == 1
    table = report.to_table()
    assert "distinct signatures: 3" in table
