"""Exact census of fiber topology for semi-algebraic maps over a
one-dimensional parameter space, with bound evaluators and a trinomial
lifting toolchain.  All arithmetic is exact rational."""

from .polycore import (
    ParseError,
    PolyMatrix,
    Polynomial,
    Ring,
    RingMismatchError,
    determinant,
    isolate_real_roots,
    parse_polynomial,
    refine_interval,
    resultant,
    square_free_part,
)
from .semialg import (
    And,
    Atom,
    Or,
    SignCondition,
    eval_formula,
    formula_to_text,
    level,
    parse_formula,
    realization_formula,
    sample_sign_conditions,
)
from .perturb import (
    ClosedSetDescription,
    EpsilonLadder,
    PerturbedFamily,
    build_ladder,
    check_rank_genericity,
    construct_S_prime,
    perturb_family,
    sigma_minus,
    sigma_plus,
)
from .critical import CriticalSystem, critical_system, enumerate_strata, systems_for_strata
from .eliminate import (
    DegenerateEliminationError,
    DiscriminantSet,
    UnsupportedModeError,
    assemble_G,
    project_system,
)
from .atlas import (
    AtlasReport,
    FiberReport,
    ParameterCell,
    components_complement,
    fiber_b0,
    interior_points,
    run_atlas,
)
from .bounds import (
    bound_additive,
    bound_fewnomial,
    bound_lists,
    bound_main,
    bound_main_precise,
    bound_pfaffian,
    count_family,
    metric_radius,
)
from .slp import LiftedSystem, SLPProgram, SLPStep, expand, lift, parse_slp, verify_lift
from .cli import main

__version__ = "0.1.0"
