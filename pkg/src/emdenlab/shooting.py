"""Shooting solver for the radial initial value problem.

The trajectory of height beta solves

    v'' + (N - 1 + a)/r v' + r^(b-a) v^p = 0,   v(0) = beta, v'(0) = 0,

integrated outward until it either crosses zero or reaches the horizon
r_max.  The origin is a singular point of the ODE, so integration starts
from a short power-series hand-off at epsilon0 instead of r = 0.

Outcomes are the data of the existence dichotomy: subcritical trajectories
cross zero at a finite radius, critical and supercritical ones stay
positive (decaying like the bubble or spiralling toward the singular
power profile).  A scaling symmetry ties all heights together,

    v_beta(r) = beta * v_1(beta^((p-1)/sigma) r),

which the threshold search exploits: probing at large beta compresses huge
beta = 1 crossing radii into a modest window, so a fixed horizon loses
almost no resolution near the critical exponent.
"""

from __future__ import annotations

import csv
import logging
import math
import multiprocessing
from dataclasses import dataclass, field
from typing import ClassVar, Union

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from .errors import (
    BracketInvalid,
    EmdenLabError,
    InadmissibleWeights,
    RangeExceeded,
)
from .params import ProblemParams, derive, validate

log = logging.getLogger(__name__)

# The series hand-off never shrinks below this radius.
_EPS_FLOOR = 1e-12


@dataclass(frozen=True)
class ShootConfig:
    """Knobs of a single shot.

    epsilon0 = None means "1e-4 * min(1, sigma), then auto-shrunk until the
    next-order series term is below rel_tol".  nodes_per_decade controls the
    stored log-uniform grid; everything downstream that must be reproducible
    from a CSV (the integral identities in particular) uses only these nodes.
    """

    beta: float = 1.0
    r_max: float = 1e4
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    epsilon0: float | None = None
    nodes_per_decade: int = 160
    delta_fp: float = 0.05
    min_fit_radius: float = 10.0

    def __post_init__(self):
        if self.beta <= 0:
            raise ValueError(f"beta = {self.beta}, need it positive")
        if self.r_max < 1.0:
            raise ValueError(f"r_max = {self.r_max}, need r_max >= 1")
        for name in ("rel_tol", "abs_tol"):
            tol = getattr(self, name)
            if not 0.0 < tol <= 1e-3:
                raise ValueError(f"{name} = {tol}, need it in (0, 1e-3]")
        if self.epsilon0 is not None and not 0.0 < self.epsilon0 < 1.0:
            raise ValueError(f"epsilon0 = {self.epsilon0}, need it in (0, 1)")
        if self.nodes_per_decade < 4:
            raise ValueError("nodes_per_decade < 4 cannot support the spline")

    def to_dict(self) -> dict:
        return {
            "beta": self.beta,
            "r_max": self.r_max,
            "rel_tol": self.rel_tol,
            "abs_tol": self.abs_tol,
            "epsilon0": self.epsilon0,
            "nodes_per_decade": self.nodes_per_decade,
            "delta_fp": self.delta_fp,
            "min_fit_radius": self.min_fit_radius,
        }


@dataclass(frozen=True)
class CrossedZero:
    kind: ClassVar[str] = "crossed_zero"
    r0: float

    def to_dict(self) -> dict:
        return {"kind": self.kind, "r0": self.r0}


@dataclass(frozen=True)
class PositiveGlobal:
    kind: ClassVar[str] = "positive_global"
    r_reached: float
    decay_exponent_estimate: float

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "r_reached": self.r_reached,
            "decay_exponent_estimate": self.decay_exponent_estimate,
        }


@dataclass(frozen=True)
class ConvergedToSingular:
    kind: ClassVar[str] = "converged_to_singular"
    r_reached: float
    oscillation_count: int

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "r_reached": self.r_reached,
            "oscillation_count": self.oscillation_count,
        }


@dataclass(frozen=True)
class Inconclusive:
    kind: ClassVar[str] = "inconclusive"
    reason: str

    def to_dict(self) -> dict:
        return {"kind": self.kind, "reason": self.reason}


ShotOutcome = Union[CrossedZero, PositiveGlobal, ConvergedToSingular, Inconclusive]


@dataclass
class RadialTrajectory:
    """Sampled shot: log-uniform nodes (r, v, dv) plus the classified outcome.

    Nodes satisfy v > 0 except possibly the terminal crossing node, and
    dv < 0 throughout.  A trajectory re-read from CSV carries exactly the
    same node data, so node-based consumers reproduce their reports bit
    for bit.
    """

    params: ProblemParams
    r: np.ndarray
    v: np.ndarray
    dv: np.ndarray
    outcome: ShotOutcome | None = None
    config: ShootConfig | None = None
    _dense: object = field(default=None, repr=False)
    _splines: object = field(default=None, repr=False)

    def _node_splines(self):
        if self._splines is None:
            # splines in log r; exclude a terminal v <= 0 node from the
            # v-spline domain decision but keep it for root bracketing
            z = np.log(self.r)
            self._splines = (CubicSpline(z, self.v), CubicSpline(z, self.dv))
        return self._splines

    def eval(self, r):
        """(v, dv) at arbitrary radii inside [0, r[-1]].

        Below the first node the power-series start is used, which needs
        the shot's config; trajectories loaded from CSV only cover
        [r[0], r[-1]].
        """
        r_arr = np.atleast_1d(np.asarray(r, dtype=float))
        if np.any(r_arr < 0) or np.any(r_arr > self.r[-1] * (1 + 1e-12)):
            raise RangeExceeded(
                f"radii must lie in [0, {self.r[-1]}] for this trajectory"
            )
        below = r_arr < self.r[0]
        v = np.empty_like(r_arr)
        dv = np.empty_like(r_arr)
        inside = ~below
        if inside.any():
            ri = np.minimum(r_arr[inside], self.r[-1])
            if self._dense is not None:
                vi, dvi = self._dense(ri)
            else:
                sv, sdv = self._node_splines()
                z = np.log(ri)
                vi, dvi = sv(z), sdv(z)
            v[inside], dv[inside] = vi, dvi
        if below.any():
            if self.config is None:
                raise RangeExceeded(
                    "r below the first stored node needs the original config"
                )
            vb, dvb = _series_values(self.params, self.config.beta, r_arr[below])
            v[below], dv[below] = vb, dvb
        if np.isscalar(r) or np.ndim(r) == 0:
            return float(v[0]), float(dv[0])
        return v, dv


def _series_values(params: ProblemParams, beta: float, r):
    """Two-term start v = beta - beta^p r^sigma/(sigma(N+b)), dv its derivative."""
    d = derive(params)
    N, b, p = params.N, params.b, params.p
    sigma = d.sigma
    r_arr = np.asarray(r, dtype=float)
    v = beta - beta**p * r_arr**sigma / (sigma * (N + b))
    with np.errstate(divide="ignore", invalid="ignore"):
        dv = -(beta**p) * r_arr ** (sigma - 1.0) / (N + b)
    if sigma > 1.0:
        dv = np.where(r_arr == 0.0, 0.0, dv)
    return v, dv


def series_truncation_estimate(params: ProblemParams, beta: float, eps: float) -> float:
    """Relative size of the dropped next-order term, O(eps^(2 sigma)).

    The maximum of the v-correction (against beta) and the dv-correction
    (against the leading dv term); used to auto-shrink the hand-off radius.
    """
    d = derive(params)
    N, b, p = params.N, params.b, params.p
    sigma = d.sigma
    corr_v = (
        p
        * beta ** (2.0 * (p - 1.0))
        * eps ** (2.0 * sigma)
        / (2.0 * sigma**2 * (N + b) * (N + b + sigma))
    )
    corr_dv = p * beta ** (p - 1.0) * eps**sigma / (sigma * (N + b + sigma))
    return max(corr_v, corr_dv)


def _require_shootable(params: ProblemParams) -> None:
    validate(params)
    if params.N + params.b <= 0 or params.b <= params.a - 2:
        raise InadmissibleWeights(
            f"N+b = {params.N + params.b}, b-(a-2) = {params.b - params.a + 2}"
        )
    if params.p <= 1:
        raise ValueError(f"the shooter requires p > 1, got p = {params.p}")


def series_start(params: ProblemParams, config: ShootConfig = ShootConfig()):
    """Hand-off state (r, v, dv) at the series radius.

    Starts from config.epsilon0 (default 1e-4 * min(1, sigma)) and halves it
    until the next-order correction drops below rel_tol, never going under
    1e-12.
    """
    _require_shootable(params)
    d = derive(params)
    eps = config.epsilon0
    if eps is None:
        eps = 1e-4 * min(1.0, d.sigma)
    while eps > _EPS_FLOOR:
        est = series_truncation_estimate(params, config.beta, eps)
        if est <= config.rel_tol:
            break
        eps *= 0.5
    log.debug(
        "series hand-off at eps=%g, truncation estimate %g",
        eps,
        series_truncation_estimate(params, config.beta, eps),
    )
    v, dv = _series_values(params, config.beta, eps)
    return eps, float(v), float(dv)


def _make_rhs(params: ProblemParams):
    N, a, b, p = params.N, params.a, params.b, params.p
    coeff = N - 1.0 + a
    w = b - a

    def rhs(r, y):
        v, dv = y
        # odd extension keeps the vector field smooth through v = 0
        source = abs(v) ** p if v >= 0.0 else -(abs(v) ** p)
        return (dv, -coeff / r * dv - r**w * source)

    return rhs


def shoot(params: ProblemParams, config: ShootConfig = ShootConfig()) -> RadialTrajectory:
    """Integrate one trajectory and classify it.

    DOP853 with a terminal zero-crossing event; the crossing radius comes
    from scipy's root refinement on the dense output, accurate to far
    better than the 1e-8 relative contract.
    """
    _require_shootable(params)
    eps, v0, dv0 = series_start(params, config)
    if eps >= config.r_max:
        raise ValueError(f"epsilon0 = {eps} >= r_max = {config.r_max}")

    def crossing(r, y):
        return y[0]

    crossing.terminal = True
    crossing.direction = -1

    sol = solve_ivp(
        _make_rhs(params),
        (eps, config.r_max),
        (v0, dv0),
        method="DOP853",
        rtol=config.rel_tol,
        atol=config.abs_tol * max(1.0, config.beta),
        events=crossing,
        dense_output=True,
    )
    crossed = sol.t_events[0].size > 0
    r_end = float(sol.t[-1])

    n = max(2, math.ceil(config.nodes_per_decade * math.log10(r_end / eps)) + 1)
    nodes = np.geomspace(eps, r_end, n)
    nodes[0], nodes[-1] = eps, r_end
    vals = sol.sol(nodes)
    v, dv = np.array(vals[0]), np.array(vals[1])
    v[0], dv[0] = v0, dv0
    if crossed:
        # pin the terminal node to the refined crossing
        v[-1] = 0.0

    traj = RadialTrajectory(
        params=params, r=nodes, v=v, dv=dv, config=config, _dense=sol.sol
    )
    if sol.status == -1 and not crossed:
        traj.outcome = Inconclusive(f"integrator stopped at r = {r_end}: {sol.message}")
    else:
        traj.outcome = classify_trajectory(traj)
    return traj


def classify_trajectory(traj: RadialTrajectory) -> ShotOutcome:
    """Name the fate of a sampled trajectory.

    Crossing wins if any node reaches v <= 0 (the radius is refined on the
    node spline; shots place an exact v = 0 node there already).  Otherwise
    a positive trajectory needs at least a decade of far field beyond
    min_fit_radius for a stable decay fit; the cylinder picture decides
    between convergence to the singular profile and plain power decay.
    """
    config = traj.config if traj.config is not None else ShootConfig()
    r, v, dv = traj.r, traj.v, traj.dv

    nonpos = np.where(v <= 0.0)[0]
    if nonpos.size:
        i = int(nonpos[0])
        if i == 0:
            return Inconclusive("no positive segment to classify")
        if v[i] == 0.0:
            return CrossedZero(float(r[i]))
        sv, _ = traj._node_splines()
        z0 = brentq(sv, math.log(r[i - 1]), math.log(r[i]), xtol=1e-15)
        return CrossedZero(float(math.exp(z0)))

    r_end = float(r[-1])
    window = r >= r_end / 10.0
    if r_end < config.min_fit_radius or int(window.sum()) < 8:
        return Inconclusive("horizon too small for a decay fit")

    d = derive(traj.params)
    if traj.params.p > d.p_serrin:
        gamma = d.gamma
        w_star = d.lambda2 ** (1.0 / (traj.params.p - 1.0))
        rg = r**gamma
        w = rg * v
        dw = rg * (gamma * v + r * dv)
        dist = np.hypot(w[window] - w_star, dw[window])
        if float(dist.max()) <= config.delta_fp * w_star:
            s = np.sign(w - w_star)
            flips = int(np.sum(s[1:] * s[:-1] < 0))
            return ConvergedToSingular(r_end, flips // 2)

    z, y = np.log(r[window]), np.log(v[window])
    slope = float(np.polyfit(z, y, 1)[0])
    return PositiveGlobal(r_end, -slope)


def threshold_bisect(
    N: int,
    a: float,
    b: float,
    p_lo: float,
    p_hi: float,
    tol_p: float = 1e-3,
    config: ShootConfig = ShootConfig(),
) -> float:
    """Bisect the crossing/no-crossing boundary in p.

    Assumes the crossing property is monotone in p across the bracket (it
    is empirically; probes are logged so violations can be audited).  The
    lower endpoint must cross, the upper must not, else BracketInvalid.
    """
    if not p_lo < p_hi:
        raise BracketInvalid(f"need p_lo < p_hi, got [{p_lo}, {p_hi}]")
    if p_lo <= 1.0:
        raise BracketInvalid(f"p_lo = {p_lo}: the shooter requires p > 1")
    if tol_p <= 0:
        raise ValueError(f"tol_p = {tol_p}, need it positive")

    def crosses(p: float) -> bool:
        outcome = shoot(ProblemParams(N, a, b, p), config).outcome
        log.info("threshold probe p=%.17g -> %s", p, outcome)
        return isinstance(outcome, CrossedZero)

    if not crosses(p_lo):
        raise BracketInvalid(f"p_lo = {p_lo} does not cross within the horizon")
    if crosses(p_hi):
        raise BracketInvalid(f"p_hi = {p_hi} still crosses within the horizon")
    while p_hi - p_lo > tol_p:
        mid = 0.5 * (p_lo + p_hi)
        if crosses(mid):
            p_lo = mid
        else:
            p_hi = mid
    return 0.5 * (p_lo + p_hi)


def _sweep_worker(job):
    params, config = job
    try:
        return shoot(params, config).outcome
    except EmdenLabError as exc:
        # a bad row should not kill the batch; record why it failed
        return Inconclusive(f"rejected: {exc}")


def sweep_shoot(
    rows, config: ShootConfig = ShootConfig(), processes: int | None = None
):
    """Shoot a batch of parameter points, preserving input order.

    rows is an iterable of ProblemParams; returns the list of outcomes.
    processes = None uses every core, 1 runs serially.
    """
    jobs = [(p, config) for p in rows]
    if processes == 1 or len(jobs) <= 1:
        return [_sweep_worker(j) for j in jobs]
    with multiprocessing.Pool(processes=processes) as pool:
        return pool.map(_sweep_worker, jobs)


def trajectory_to_csv(traj: RadialTrajectory, path) -> None:
    """Write nodes as `r,v,dv` with shortest round-trip float text."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["r", "v", "dv"])
        for rr, vv, dd in zip(traj.r, traj.v, traj.dv):
            writer.writerow([repr(float(rr)), repr(float(vv)), repr(float(dd))])


def trajectory_from_csv(
    path, params: ProblemParams, config: ShootConfig | None = None
) -> RadialTrajectory:
    """Rebuild a trajectory from its CSV; node data round-trips exactly."""
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if [h.strip() for h in header] != ["r", "v", "dv"]:
            raise ValueError(f"unexpected trajectory header {header!r}")
        for line in reader:
            rows.append((float(line[0]), float(line[1]), float(line[2])))
    if len(rows) < 2:
        raise ValueError("trajectory CSV needs at least two nodes")
    arr = np.asarray(rows, dtype=float)
    traj = RadialTrajectory(
        params=params, r=arr[:, 0], v=arr[:, 1], dv=arr[:, 2], config=config
    )
    traj.outcome = classify_trajectory(traj)
    return traj
