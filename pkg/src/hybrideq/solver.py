"""Outer hybrid shrinking-projection loop with per-iteration invariant auditing.

Each outer iteration blends the operator family into y_n, solves the
regularized equilibrium problem at y_n for u_n, rewrites the comparison
inequality between u_n and x_n as a halfspace cut, intersects it with the
accumulated feasible region, and retracts the *initial* anchor x_1 onto the
shrunken set.  Two modes:

* HILBERT_MAIN (p = 2): cuts live in the primal frame
  (phi(z, u_n) <= phi(z, x_n)) and the retraction is the Euclidean
  projection of the anchor.
* BANACH_MAIN2: cuts live in the dual frame via w = Jz
  (phi(u_n, z) <= phi(x_n, z)) and the retraction is the sunny generalized
  nonexpansive retraction computed in dual coordinates.

At p = 2 the two modes coincide step for step.

Every proof inequality of the convergence argument is evaluated each
iteration and its slack stored on the IterationRecord: anchor
phi-monotonicity, cut retention of a declared reference solution (the
Fejer property), feasibility of the new iterate against every accumulated
cut, the certified resolvent gap, and the retraction variational-inequality
residual.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .equilibrium import (
    MixedTerm,
    PerturbationMap,
    ResolventProblem,
    classify_problem,
    solve_resolvent_certified,
)
from .errors import NonConvergedError, UnsupportedCombinationError
from .operators import OperatorFamily
from .retraction import RetractionProblem, retraction_vi_residual, sunny_retract
from .sets import (
    ConstraintSet,
    Frame,
    Halfspace,
    add_cut,
    contains,
    project_intersection,
    worst_violation,
)
from .space import PrimalPoint, SpaceConfig, gauge_coords, phi_coords, pnorm


class Mode(enum.Enum):
    HILBERT_MAIN = "hilbert"
    BANACH_MAIN2 = "banach"


class StopReason(enum.Enum):
    CONVERGED = "converged"
    ITERATION_CAP = "iteration_cap"


@dataclass(frozen=True)
class SolverConfig:
    mode: Mode
    r_schedule: Callable[[int], float] | float = 1.0
    outer_tol: float = 1e-6
    max_outer: int = 200
    resolvent_tol: float = 1e-6
    retraction_tol: float = 1e-10
    reference_solution: Optional[PrimalPoint] = None
    seed: int = 7
    min_r: float = 1e-3
    cut_cap: int = 500
    audit_samples: int = 24
    dykstra_tol: float = 1e-12

    def __post_init__(self):
        if self.outer_tol <= 0 or self.resolvent_tol <= 0 or self.retraction_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.min_r <= 0:
            raise ValueError("min_r must be positive")
        if self.max_outer < 0:
            raise ValueError("max_outer must be nonnegative")

    def r_at(self, n: int) -> float:
        r = self.r_schedule(n) if callable(self.r_schedule) else float(self.r_schedule)
        if r < self.min_r:
            raise ValueError(f"r_schedule({n}) = {r} is below the floor {self.min_r}")
        return r


@dataclass(frozen=True)
class ProblemBundle:
    """Everything the outer loop needs: sets, operators, equilibrium data, anchor."""

    space: SpaceConfig
    omega: ConstraintSet
    omega_dual: ConstraintSet
    family: OperatorFamily
    bifunctions: tuple
    mixed: MixedTerm
    perturbation: PerturbationMap
    anchor: PrimalPoint

    def __post_init__(self):
        object.__setattr__(self, "bifunctions", tuple(self.bifunctions))
        if self.omega.frame != Frame.PRIMAL or self.omega_dual.frame != Frame.DUAL:
            raise ValueError("omega must be primal-frame and omega_dual dual-frame")
        if self.anchor.space != self.space:
            raise ValueError("anchor does not live in the bundle space")


@dataclass(frozen=True)
class IterationRecord:
    """Per-iteration trace: iterates plus the audited invariant slacks.

    x is the iterate entering iteration n; the retraction residual and
    feasibility violation refer to the iterate produced at the end of the
    iteration.  fejer slacks are None when no reference solution is
    declared.
    """

    n: int
    x: PrimalPoint
    y: PrimalPoint
    u: PrimalPoint
    phi_anchor: float
    gap_xu: float
    resolvent_gap_value: float
    retraction_vi_residual: float
    fejer_slack: Optional[float]
    fejer_slack_y: Optional[float]
    feasibility_violation: float
    cut_count: int
    displacement: float


@dataclass(frozen=True)
class SolverResult:
    x_star: PrimalPoint
    converged: bool
    history: tuple
    stop_reason: StopReason

    def __post_init__(self):
        object.__setattr__(self, "history", tuple(self.history))

    @property
    def iterations(self) -> int:
        return len(self.history)


def step_y(mode: Mode, family: OperatorFamily, x: PrimalPoint, n: int) -> PrimalPoint:
    """One blending step of the operator family.

    HILBERT_MAIN blends in the dual frame and pulls back through J^{-1};
    BANACH_MAIN2 pulls each member back first and blends in the primal
    frame.  At p = 2 the two coincide.
    """
    space = family.space
    weights = family.weights_at(n)
    q = space.conjugate
    if mode is Mode.HILBERT_MAIN:
        acc = weights[0] * gauge_coords(x.coords, space.exponent)
        for i, member in enumerate(family.members):
            acc = acc + weights[i + 1] * member.apply_at(n, x).coords
        return PrimalPoint(gauge_coords(acc, q), space)
    acc = weights[0] * x.coords
    for i, member in enumerate(family.members):
        acc = acc + weights[i + 1] * gauge_coords(member.apply_at(n, x).coords, q)
    return PrimalPoint(acc, space)


def make_comparison_halfspace(
    mode: Mode, u: PrimalPoint, x: PrimalPoint, space: SpaceConfig
) -> Optional[Halfspace]:
    """The comparison inequality between u_n and x_n as a linear cut.

    HILBERT_MAIN: phi(z, u) <= phi(z, x) becomes <z, 2(x - u)> <= |x|^2 - |u|^2
    in the primal frame.  BANACH_MAIN2: phi(u, z) <= phi(x, z) becomes
    <2(x - u), w> <= |x|^2 - |u|^2 for w = Jz in the dual frame.  Returns
    None for the degenerate u = x whole-space cut.
    """
    p = space.exponent
    diff = x.coords - u.coords
    if pnorm(diff, p) <= 1e-14:
        return None
    nx = pnorm(x.coords, p)
    nu = pnorm(u.coords, p)
    offset = nx * nx - nu * nu
    frame = Frame.PRIMAL if mode is Mode.HILBERT_MAIN else Frame.DUAL
    return Halfspace(2.0 * diff, offset, frame)


def _retag(hs: Halfspace, frame: Frame) -> Halfspace:
    return Halfspace(hs.normal, hs.offset, frame)


def run(bundle: ProblemBundle, config: SolverConfig) -> SolverResult:
    """Execute the outer loop; returns the full audited trace.

    Raises NonConvergedError / UnsupportedCombinationError from the
    submodules with the failing iteration prepended, and NonConvergedError
    when the accumulated cuts exceed the configured cap.
    """
    space = bundle.space
    if config.mode is Mode.HILBERT_MAIN and not space.is_hilbert:
        raise UnsupportedCombinationError("HILBERT_MAIN requires exponent p = 2")
    if not contains(bundle.omega, bundle.anchor.coords, 1e-9):
        raise ValueError("anchor x_1 must lie in Omega")
    # fail fast when the equilibrium data are outside the support matrix
    classify_problem(
        ResolventProblem(
            bundle.bifunctions,
            bundle.mixed,
            bundle.perturbation,
            bundle.omega,
            max(config.r_at(1), config.min_r),
            bundle.anchor,
            min_r=config.min_r,
        )
    )

    p = space.exponent
    reference = config.reference_solution
    primal_set = bundle.omega
    dual_set = bundle.omega_dual
    x = bundle.anchor
    anchor = bundle.anchor
    history = []
    stop_reason = StopReason.ITERATION_CAP
    converged = False

    for n in range(1, config.max_outer + 1):
        r_n = config.r_at(n)
        y = step_y(config.mode, bundle.family, x, n)
        problem = ResolventProblem(
            bundle.bifunctions,
            bundle.mixed,
            bundle.perturbation,
            bundle.omega,
            r_n,
            y,
            min_r=config.min_r,
        )
        try:
            u, resolvent_gap_value = solve_resolvent_certified(
                problem,
                tol=config.resolvent_tol,
                rng=np.random.default_rng([config.seed, n, 1]),
            )
        except (NonConvergedError, UnsupportedCombinationError) as exc:
            raise type(exc)(f"iteration {n}: {exc}") from exc

        cut = make_comparison_halfspace(config.mode, u, x, space)
        if cut is not None:
            if config.mode is Mode.HILBERT_MAIN:
                primal_set = add_cut(primal_set, cut)
                dual_set = add_cut(dual_set, _retag(cut, Frame.DUAL))
            else:
                dual_set = add_cut(dual_set, cut)
            if len(dual_set.cuts) > config.cut_cap:
                raise NonConvergedError(
                    f"iteration {n}: accumulated cuts exceed the cap {config.cut_cap}"
                )

        retraction_problem = RetractionProblem(space, dual_set, anchor)
        try:
            if config.mode is Mode.HILBERT_MAIN:
                # the sunny retraction reduces to the metric projection here
                x_next = PrimalPoint(
                    project_intersection(
                        primal_set, anchor.coords, tol=config.dykstra_tol, max_iter=200_000
                    ),
                    space,
                )
            else:
                # warm start from the current iterate's dual image; at n = 1
                # this equals the default initialization at the anchor
                x_next = sunny_retract(
                    retraction_problem,
                    tol=config.retraction_tol,
                    init=gauge_coords(x.coords, p),
                    dykstra_tol=config.dykstra_tol,
                    seed=config.seed,
                )
        except NonConvergedError as exc:
            raise NonConvergedError(f"iteration {n}: {exc}") from exc

        retraction_residual = retraction_vi_residual(
            retraction_problem,
            x_next,
            samples=config.audit_samples,
            rng=np.random.default_rng([config.seed, n, 2]),
        )
        if config.mode is Mode.HILBERT_MAIN:
            feasibility = worst_violation(primal_set, x_next.coords)
        else:
            feasibility = max(
                worst_violation(bundle.omega, x_next.coords),
                worst_violation(dual_set, gauge_coords(x_next.coords, p)),
            )

        fejer = fejer_y = None
        if reference is not None:
            rc, xc, uc, yc = reference.coords, x.coords, u.coords, y.coords
            if config.mode is Mode.HILBERT_MAIN:
                fejer = phi_coords(rc, uc, p) - phi_coords(rc, xc, p)
                fejer_y = phi_coords(rc, yc, p) - phi_coords(rc, xc, p)
            else:
                fejer = phi_coords(uc, rc, p) - phi_coords(xc, rc, p)
                fejer_y = phi_coords(yc, rc, p) - phi_coords(xc, rc, p)

        displacement = pnorm(x_next.coords - x.coords, p)
        history.append(
            IterationRecord(
                n=n,
                x=x,
                y=y,
                u=u,
                phi_anchor=phi_coords(anchor.coords, x.coords, p),
                gap_xu=pnorm(x.coords - u.coords, p),
                resolvent_gap_value=resolvent_gap_value,
                retraction_vi_residual=retraction_residual,
                fejer_slack=fejer,
                fejer_slack_y=fejer_y,
                feasibility_violation=feasibility,
                cut_count=len(dual_set.cuts),
                displacement=displacement,
            )
        )
        x = x_next
        if displacement <= config.outer_tol:
            stop_reason = StopReason.CONVERGED
            converged = True
            break

    return SolverResult(x, converged, tuple(history), stop_reason)


#: audit names and their tolerances; vanishing_gap is scaled by outer_tol.
AUDIT_TOLERANCES = {
    "anchor_monotonicity": 1e-8,
    "fejer_u": 1e-6,
    "fejer_y": 1e-6,
    "feasibility": 1e-6,
    "retraction_residual": 1e-6,
    "resolvent_gap": None,  # filled from config.resolvent_tol
    "vanishing_gap": None,  # filled as 10 * config.outer_tol, checked when converged
}


def audit_result(result: SolverResult, config: SolverConfig) -> dict:
    """Worst slack per audited invariant, with pass/fail at the stated tolerances.

    Returns {name: {"worst": float, "tolerance": float, "passed": bool}}; an
    invariant with nothing to check (no reference declared, no iterations)
    reports worst = 0.
    """
    hist = result.history
    out = {}

    anchor_drops = [
        hist[i].phi_anchor - hist[i + 1].phi_anchor for i in range(len(hist) - 1)
    ]
    if hist:
        final_phi = phi_coords(
            hist[0].x.coords, result.x_star.coords, hist[0].x.space.exponent
        )
        anchor_drops.append(hist[-1].phi_anchor - final_phi)
    out["anchor_monotonicity"] = max(anchor_drops, default=0.0)
    out["fejer_u"] = max(
        (r.fejer_slack for r in hist if r.fejer_slack is not None), default=0.0
    )
    out["fejer_y"] = max(
        (r.fejer_slack_y for r in hist if r.fejer_slack_y is not None), default=0.0
    )
    out["feasibility"] = max((r.feasibility_violation for r in hist), default=0.0)
    out["retraction_residual"] = max((r.retraction_vi_residual for r in hist), default=0.0)
    out["resolvent_gap"] = max((r.resolvent_gap_value for r in hist), default=0.0)
    out["vanishing_gap"] = hist[-1].gap_xu if (hist and result.converged) else 0.0

    tolerances = dict(AUDIT_TOLERANCES)
    tolerances["resolvent_gap"] = config.resolvent_tol
    tolerances["vanishing_gap"] = 10.0 * config.outer_tol
    return {
        name: {
            "worst": float(out[name]),
            "tolerance": float(tolerances[name]),
            "passed": bool(out[name] <= tolerances[name]),
        }
        for name in out
    }
