"""Verification campaigns, monitoring sweeps, and extremal-slack search.

Campaigns evaluate a set of relations over random ensembles with a
deterministic per-trial stream layout: trial ``i`` of a campaign seeded
with ``s`` draws its state from stream ``(s, i, 0)``, its bases from
``(s, i, 1)`` and ``(s, i, 2)``, and its monitoring strength from
``(s, i, 3)``. Results are therefore identical for any worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial

import numpy as np
from scipy.optimize import minimize as scipy_minimize

from .channels import monitor
from .entropies import irreality, uncertainty
from .errors import BadDimension, ConfigError, InvariantViolation, OutOfRange, TheoremViolation
from ._rng import spawn_rng
from .relations import (
    DEFAULT_TOL,
    RELATIONS,
    Report,
    evaluate_relations,
    mu_bound,
    report_slack,
)
from .states import (
    BipartiteState,
    ObservableBasis,
    computational_basis,
    fourier_basis,
    haar_random_pure,
    random_basis,
    random_mixed,
    state_from_token,
)

HISTOGRAM_BINS = 64

# stream roles within one trial
_STATE, _BASIS_X, _BASIS_Y, _EPS = 0, 1, 2, 3


def _parse_ensemble(ensemble: str) -> tuple[str, str | None]:
    kind, _, arg = ensemble.partition(":")
    if kind == "haar-pure" and not arg:
        return kind, None
    if kind == "induced-mixed":
        if arg and (not arg.isdigit() or int(arg) < 1):
            raise ConfigError(f"bad environment rank in ensemble {ensemble!r}")
        return kind, arg or None
    if kind == "named" and arg:
        return kind, arg
    raise ConfigError(
        f"unknown ensemble {ensemble!r}; expected haar-pure, induced-mixed[:rank], or named:<token>"
    )


@dataclass(frozen=True)
class CampaignConfig:
    """Everything needed to reproduce a verification campaign."""

    dims: tuple[tuple[int, int], ...]
    trials: int
    seed: int
    relations: tuple[str, ...]
    ensemble: str = "haar-pure"
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if self.seed < 0:
            raise ConfigError(f"seed must be >= 0, got {self.seed}")
        if not self.tol > 0:
            raise ConfigError(f"tol must be positive, got {self.tol}")
        if not self.dims:
            raise ConfigError("dims must list at least one (dA, dB) pair")
        for d_a, d_b in self.dims:
            if d_a < 2 or d_b < 1:
                raise ConfigError(f"bad dims ({d_a}, {d_b}): need dA >= 2 and dB >= 1")
        if not self.relations:
            raise ConfigError("relations must name at least one relation")
        for name in self.relations:
            if name not in RELATIONS:
                raise ConfigError(f"unknown relation {name!r}; choices: {sorted(RELATIONS)}")
        kind, arg = _parse_ensemble(self.ensemble)
        if kind == "named":
            named = state_from_token(arg)
            if self.dims != ((named.d_a, named.d_b),):
                raise ConfigError(
                    f"named ensemble {arg!r} fixes dims to ({named.d_a}, {named.d_b})"
                )


@dataclass(frozen=True)
class TrialRecord:
    """Slacks of one evaluated configuration (identities as -residual)."""

    trial: int
    d_a: int
    d_b: int
    eps: float | None
    slacks: dict[str, float]


@dataclass(frozen=True)
class ArgminDescriptor:
    """Enough to regenerate the extremal trial: the stream key and dims."""

    seed: int
    trial: int
    d_a: int
    d_b: int


@dataclass(frozen=True)
class Histogram:
    """Fixed-bin slack histogram with explicit under/overflow counters."""

    edges: tuple[float, ...]
    counts: tuple[int, ...]
    underflow: int
    overflow: int


@dataclass(frozen=True)
class RelationSummary:
    name: str
    kind: str
    min_slack: float
    argmin: ArgminDescriptor
    violations: int
    histogram: Histogram


@dataclass(frozen=True)
class CampaignResult:
    config: CampaignConfig
    total_trials: int
    relations: dict[str, RelationSummary]

    @property
    def total_violations(self) -> int:
        return sum(s.violations for s in self.relations.values())


def _trial_inputs(cfg: CampaignConfig, index: int):
    d_a, d_b = cfg.dims[index % len(cfg.dims)]
    kind, arg = _parse_ensemble(cfg.ensemble)
    if kind == "named":
        state = state_from_token(arg)
        x = computational_basis(d_a)
        y = fourier_basis(d_a)
    else:
        if kind == "haar-pure":
            state = haar_random_pure(d_a, d_b, (cfg.seed, index, _STATE))
        else:
            rank = int(arg) if arg else d_a * d_b
            state = random_mixed(d_a, d_b, rank, (cfg.seed, index, _STATE))
        x = random_basis(d_a, (cfg.seed, index, _BASIS_X))
        y = random_basis(d_a, (cfg.seed, index, _BASIS_Y))
    eps = None
    if any(RELATIONS[name].needs_eps for name in cfg.relations):
        eps = float(spawn_rng(cfg.seed, index, _EPS).uniform(0.0, 1.0))
    return state, x, y, eps


def _trial_record(cfg: CampaignConfig, index: int) -> TrialRecord:
    state, x, y, eps = _trial_inputs(cfg, index)
    reports = evaluate_relations(cfg.relations, x, y, state, eps=eps, tol=cfg.tol)
    slacks = {name: report_slack(report) for name, report in reports.items()}
    return TrialRecord(index, state.d_a, state.d_b, eps, slacks)


def _histogram(values: np.ndarray, hi: float) -> Histogram:
    edges = np.linspace(0.0, hi, HISTOGRAM_BINS + 1)
    counts, _ = np.histogram(values[(values >= 0.0) & (values <= hi)], bins=edges)
    return Histogram(
        edges=tuple(float(e) for e in edges),
        counts=tuple(int(c) for c in counts),
        underflow=int((values < 0.0).sum()),
        overflow=int((values > hi).sum()),
    )


def run_campaign_records(
    cfg: CampaignConfig, workers: int = 1
) -> tuple[CampaignResult, list[TrialRecord]]:
    """Run a campaign and also return the per-trial records (for CSV dumps)."""
    if workers <= 1:
        records = [_trial_record(cfg, i) for i in range(cfg.trials)]
    else:
        chunk = max(1, cfg.trials // (workers * 8))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(partial(_trial_record, cfg), range(cfg.trials), chunksize=chunk))

    hist_hi = 4.0 * math.log(max(d_a for d_a, _ in cfg.dims))
    summaries: dict[str, RelationSummary] = {}
    for name in cfg.relations:
        values = np.array([rec.slacks[name] for rec in records])
        best = int(values.argmin())
        summaries[name] = RelationSummary(
            name=name,
            kind=RELATIONS[name].kind,
            min_slack=float(values[best]),
            argmin=ArgminDescriptor(
                cfg.seed, records[best].trial, records[best].d_a, records[best].d_b
            ),
            violations=int((values < -cfg.tol).sum()),
            histogram=_histogram(values, hist_hi),
        )
    result = CampaignResult(config=cfg, total_trials=cfg.trials, relations=summaries)
    return result, records


def run_campaign(cfg: CampaignConfig, workers: int = 1) -> CampaignResult:
    """Evaluate every configured relation over the campaign's random ensemble."""
    result, _ = run_campaign_records(cfg, workers=workers)
    return result


@dataclass(frozen=True, eq=False)
class SweepTrace:
    """Monitoring sweep over a strength grid.

    The contract requires ``irreality_x`` non-increasing and
    ``uncertainty_y`` constant along the grid, both enforced at 1e-9.
    Configurations exist where monitoring a skew observable genuinely
    raises irr(X) (see README notes); those are rejected here rather than
    returned as invalid traces.
    """

    eps_grid: np.ndarray
    irreality_x: np.ndarray
    uncertainty_y: np.ndarray
    bound_q: float

    def __post_init__(self):
        if not (len(self.eps_grid) == len(self.irreality_x) == len(self.uncertainty_y)):
            raise InvariantViolation("sweep trace columns have unequal lengths")
        rises = np.diff(self.irreality_x)
        if rises.size and float(rises.max()) > 1e-9:
            raise InvariantViolation(f"irreality increased by {rises.max():.3e} along the sweep")
        spread = float(self.uncertainty_y.max() - self.uncertainty_y.min())
        if spread > 1e-9:
            raise InvariantViolation(f"monitored-observable uncertainty drifted by {spread:.3e}")

    def bound_slack(self) -> np.ndarray:
        return self.irreality_x + self.uncertainty_y - self.bound_q


def monitoring_sweep(
    x: ObservableBasis, y: ObservableBasis, rho: BipartiteState, grid
) -> SweepTrace:
    """Track irr(X) and H(Y|B) while monitoring by Y at each grid strength."""
    eps_grid = np.asarray(grid, dtype=float)
    if eps_grid.ndim != 1 or eps_grid.size == 0:
        raise OutOfRange("grid must be a nonempty vector")
    if eps_grid.min() < 0.0 or eps_grid.max() > 1.0:
        raise OutOfRange("grid values must lie in [0, 1]")
    if np.any(np.diff(eps_grid) < 0.0):
        raise OutOfRange("grid values must be ascending")
    irr = np.empty_like(eps_grid)
    unc = np.empty_like(eps_grid)
    for k, eps in enumerate(eps_grid):
        monitored = monitor(y, float(eps), rho)
        irr[k] = irreality(x, monitored)
        unc[k] = uncertainty(y, monitored)
    return SweepTrace(eps_grid, irr, unc, mu_bound(x, y))


def evaluate_point(
    relation: str,
    x: ObservableBasis,
    y: ObservableBasis,
    rho: BipartiteState,
    eps: float | None = None,
    tol: float = DEFAULT_TOL,
) -> Report:
    """Evaluate a single relation on a fully specified configuration."""
    return evaluate_relations([relation], x, y, rho, eps=eps, tol=tol)[relation]


@dataclass(frozen=True, eq=False)
class MinimizeResult:
    """Best configuration found by the slack search, replayable as-is."""

    relation: str
    d_a: int
    d_b: int
    seed: int
    best_slack: float
    state: BipartiteState
    x: ObservableBasis
    y: ObservableBasis
    eps: float | None
    evaluations: int
    restarts_used: int


def _decode_state(vec: np.ndarray, d_a: int, d_b: int) -> BipartiteState | None:
    n = d_a * d_b
    z = vec[:n] + 1j * vec[n:]
    nrm = np.linalg.norm(z)
    if nrm < 1e-12:
        return None
    psi = z / nrm
    return BipartiteState(d_a, d_b, np.outer(psi, psi.conj()))


def _decode_basis(vec: np.ndarray, d: int) -> ObservableBasis | None:
    z = (vec[: d * d] + 1j * vec[d * d :]).reshape(d, d)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    if np.any(np.abs(diag) < 1e-12):
        return None
    return ObservableBasis(d, q * (diag / np.abs(diag)))


def minimize_slack(
    relation: str,
    d_a: int,
    d_b: int,
    restarts: int,
    seed: int,
    tol: float = DEFAULT_TOL,
    target: float | None = None,
    max_evals: int = 5000,
) -> MinimizeResult:
    """Search for the configuration minimizing an inequality's slack.

    Derivative-free simplex descent (classical reflection/expansion/
    contraction coefficients 1, 2, 0.5, 0.5) over a real parametrization:
    a pure state as 2*dA*dB reals, each basis as 2*dA^2 reals pushed
    through a QR retraction, plus one strength parameter for relations
    that monitor. Restarts draw independent start points from streams
    ``(seed, restart)``; the search stops early once ``target`` is reached.

    Raises ``TheoremViolation`` if the best slack falls below ``-tol``.
    """
    info = RELATIONS.get(relation)
    if info is None:
        raise ConfigError(f"unknown relation {relation!r}; choices: {sorted(RELATIONS)}")
    if info.kind != "inequality":
        raise ConfigError(f"relation {relation!r} is an identity; nothing to minimize")
    if d_a < 2 or d_b < 1:
        raise BadDimension(f"need d_a >= 2 and d_b >= 1, got ({d_a}, {d_b})")
    if restarts < 1:
        raise ConfigError(f"restarts must be >= 1, got {restarts}")

    n_state = 2 * d_a * d_b
    n_basis = 2 * d_a * d_a
    n_params = n_state + 2 * n_basis + (1 if info.needs_eps else 0)

    def decode(theta: np.ndarray):
        state = _decode_state(theta[:n_state], d_a, d_b)
        x = _decode_basis(theta[n_state : n_state + n_basis], d_a)
        y = _decode_basis(theta[n_state + n_basis : n_state + 2 * n_basis], d_a)
        if state is None or x is None or y is None:
            return None
        eps = None
        if info.needs_eps:
            eps = 0.5 * (1.0 + math.tanh(theta[-1]))
        return state, x, y, eps

    best_value = math.inf
    best_theta: np.ndarray | None = None
    evaluations = 0

    def objective(theta: np.ndarray) -> float:
        nonlocal best_value, best_theta, evaluations
        evaluations += 1
        decoded = decode(theta)
        if decoded is None:
            return 1e3
        state, x, y, eps = decoded
        value = evaluate_point(relation, x, y, state, eps=eps, tol=tol).slack
        if value < best_value:
            best_value = value
            best_theta = theta.copy()
        return value

    restarts_used = 0
    for restart in range(restarts):
        restarts_used += 1
        x0 = spawn_rng(seed, restart).standard_normal(n_params)
        scipy_minimize(
            objective,
            x0,
            method="Nelder-Mead",
            options={
                "xatol": 1e-9,
                "fatol": 1e-12,
                "maxfev": max_evals,
                "maxiter": max_evals,
                "adaptive": False,
            },
        )
        if target is not None and best_value <= target:
            break

    decoded = decode(best_theta) if best_theta is not None else None
    if decoded is None:
        raise ConfigError("search never produced a decodable point")
    state, x, y, eps = decoded
    best_slack = float(evaluate_point(relation, x, y, state, eps=eps, tol=tol).slack)
    if best_slack < -tol:
        raise TheoremViolation(
            f"{relation} slack {best_slack:.3e} below -{tol:.1e}; "
            "either a numerics bug or a counterexample worth a close look"
        )
    return MinimizeResult(
        relation=relation,
        d_a=d_a,
        d_b=d_b,
        seed=seed,
        best_slack=best_slack,
        state=state,
        x=x,
        y=y,
        eps=eps,
        evaluations=evaluations,
        restarts_used=restarts_used,
    )
