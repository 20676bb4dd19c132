"""Projected gradient ascent on the probability simplex.

Two ascent modes over combination objectives, both starting at the
barycenter: fixed-step ascent applies the Euclidean simplex projection
after every step, and exact-path ascent steps to the boundary of the
current linearity region (the smallest positive parameter at which two
matrix entries of the combination cross, an attaining entry changes, or
the ray leaves the simplex).

Exact mode stops early the first time no admissible direction exists (a
stall); fixed mode always runs its full budget unless an optional
gradient-norm tolerance is set.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .objective import (
    Functional,
    GradientReport,
    WeightFamily,
    evaluate,
    family_gradient,
    gradient,
)
from .persistence import GradedDiagram, level_diagram
from .simplexes import LevelComplex
from .sliding_window import ComponentDistances, combo_distance

_STALL_T = 1e-12


def project_simplex(y) -> np.ndarray:
    """Euclidean projection onto the probability simplex (sort and threshold).

    O(p log p); idempotent; exact on points already in the simplex.
    """
    y = np.asarray(y, dtype=float)
    if y.ndim != 1 or y.size == 0 or not np.isfinite(y).all():
        raise ValueError("projection needs a finite 1-D vector")
    u = np.sort(y)[::-1]
    css = np.cumsum(u) - 1.0
    j = np.arange(1, y.size + 1)
    rho = j[u - css / j > 0][-1]
    theta = css[rho - 1] / rho
    return np.maximum(y - theta, 0.0)


@dataclass
class AscentConfig:
    """Step budget, step sizes, functional, and ascent mode."""

    steps: int
    step_size: float | np.ndarray = 0.0
    functional: Functional = Functional("max")
    mode: str = "fixed_steps"
    stop_tol: float = 0.0
    prune_crossings: bool = False

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError("need at least one step")
        if self.mode not in ("fixed_steps", "exact_path"):
            raise ValueError(f"unknown mode {self.mode!r}")
        sizes = np.atleast_1d(np.asarray(self.step_size, dtype=float))
        if sizes.size == 1:
            sizes = np.repeat(sizes, self.steps)
        if sizes.shape != (self.steps,):
            raise ValueError(f"expected {self.steps} step sizes, got {sizes.shape}")
        if self.mode == "fixed_steps" and (sizes <= 0).any():
            raise ValueError("step sizes must be positive")
        self.step_sizes = sizes


@dataclass
class StepEvent:
    step: int
    projected: bool
    region_crossed: bool
    stalled: bool


@dataclass
class GradientPath:
    """Simplex points visited by an ascent with their objective values."""

    points: np.ndarray  # (n_points, p)
    values: np.ndarray  # (n_points,)
    events: list[StepEvent] = field(default_factory=list)
    mode: str = "fixed_steps"

    @property
    def score(self) -> np.ndarray:
        """The endpoint of the path: per-variable contribution scores."""
        return self.points[-1]

    def __len__(self) -> int:
        return len(self.points)

    def to_csv(self, path) -> None:
        p = self.points.shape[1]
        with open(path, "w", newline="\n", encoding="utf-8") as fh:
            fh.write("step,f_value," + ",".join(f"v_{j + 1}" for j in range(p)) + "\n")
            for i in range(len(self.points)):
                row = [str(i), "%.17g" % self.values[i]]
                row.extend("%.17g" % x for x in self.points[i])
                fh.write(",".join(row) + "\n")

    def events_json(self, path=None):
        doc = json.dumps(
            {"mode": self.mode,
             "events": [vars(e) for e in self.events]},
            sort_keys=True, indent=1)
        if path is None:
            return doc
        with open(path, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(doc + "\n")
        return None


def _feasible(v: np.ndarray) -> np.ndarray:
    v = np.maximum(v, 0.0)
    return v / v.sum()


@dataclass
class _Eval:
    report: GradientReport
    signature: bytes


class _MatrixObjective:
    """Shared state for ascending a component-matrix combination."""

    def __init__(self, cd: ComponentDistances, functional: Functional):
        self.cd = cd
        self.functional = functional
        degrees = sorted(functional.degrees)
        self.cx = LevelComplex.full(cd.m, min(max(degrees) + 1, cd.m - 1))
        self.degrees = degrees
        self.p = cd.p

    def evaluate(self, v: np.ndarray) -> _Eval:
        M = combo_distance(self.cd, v)
        w, codes = self.cx.matrix_weights(M, validate=False)
        d = level_diagram(self.cx, w, self.degrees, codes)
        rep = gradient(self.functional, d, self.cd, v)
        sig = d.pairing_signature(self.functional.degrees)
        sig += b"#" + b",".join(
            np.int64(s.degree).tobytes() + s.indices.tobytes() for s in rep.selections)
        return _Eval(rep, sig)

    def min_crossing(self, v: np.ndarray, direction: np.ndarray,
                     active_death_cap: float | None = None) -> float:
        """Smallest positive ray parameter at which two combination entries cross."""
        iu = np.triu_indices(self.cd.m)
        sign = np.where(v < 0, -1.0, 1.0)
        M = combo_distance(self.cd, v)
        S = np.einsum("j,jkl->kl", direction * sign, self.cd.mats)
        a, s = M[iu], S[iu]
        if active_death_cap is not None:
            keep = a <= active_death_cap
            a, s = a[keep], s[keep]
        da = a[None, :] - a[:, None]
        ds = s[:, None] - s[None, :]
        with np.errstate(divide="ignore", invalid="ignore"):
            t = da / ds
        t = t[np.isfinite(t) & (t > _STALL_T)]
        return float(t.min()) if t.size else np.inf


class _FamilyObjective:
    """Shared state for ascending a weight-family combination."""

    def __init__(self, family: WeightFamily, functional: Functional):
        self.family = family
        self.functional = functional
        self.degrees = sorted(functional.degrees)
        self.p = family.p

    def evaluate(self, v: np.ndarray) -> _Eval:
        combined = self.family.combined(v)
        levels = self.family.cx.vector_weights(combined)
        d = level_diagram(self.family.cx, levels, self.degrees)
        rep = family_gradient(self.functional, d, self.family, v)
        sig = d.pairing_signature(self.functional.degrees)
        sig += b"#" + b",".join(
            np.int64(s.degree).tobytes() + s.indices.tobytes() for s in rep.selections)
        return _Eval(rep, sig)

    def min_crossing(self, v: np.ndarray, direction: np.ndarray,
                     active_death_cap: float | None = None) -> float:
        a = self.family.combined(v)
        s = direction @ self.family.values
        if active_death_cap is not None:
            keep = a <= active_death_cap
            a, s = a[keep], s[keep]
        da = a[None, :] - a[:, None]
        ds = s[:, None] - s[None, :]
        with np.errstate(divide="ignore", invalid="ignore"):
            t = da / ds
        t = t[np.isfinite(t) & (t > _STALL_T)]
        return float(t.min()) if t.size else np.inf


def _run_fixed(obj, cfg: AscentConfig) -> GradientPath:
    v = np.full(obj.p, 1.0 / obj.p)
    points, values, events = [v], [], []
    ev = obj.evaluate(v)
    for j in range(cfg.steps):
        values.append(ev.report.value)
        pgrad = ev.report.projected_grad
        if cfg.stop_tol > 0 and np.abs(pgrad).max() < cfg.stop_tol:
            break
        if not np.isfinite(pgrad).all():
            raise FloatingPointError(f"non-finite gradient at step {j}")
        stalled = bool(np.all(pgrad == 0.0))
        raw = v + cfg.step_sizes[j] * pgrad
        projected = bool(raw.min() < 0.0)
        v = _feasible(project_simplex(raw))
        nxt = obj.evaluate(v)
        events.append(StepEvent(j, projected, nxt.signature != ev.signature, stalled))
        points.append(v)
        ev = nxt
    values.append(ev.report.value)
    return GradientPath(np.array(points), np.array(values[:len(points)]),
                        events, "fixed_steps")


def _run_exact(obj, cfg: AscentConfig) -> GradientPath:
    v = np.full(obj.p, 1.0 / obj.p)
    points, values, events = [v], [], []
    ev = obj.evaluate(v)
    values.append(ev.report.value)
    for j in range(cfg.steps):
        d = ev.report.projected_grad
        if not np.isfinite(d).all():
            raise FloatingPointError(f"non-finite gradient at step {j}")
        if np.all(d == 0.0):
            events.append(StepEvent(j, False, False, True))
            break
        # exit time through the nonnegativity boundary (coordinate sums stay 1)
        shrinking = d < 0
        t_exit = np.inf
        if shrinking.any():
            t_exit = float((v[shrinking] / -d[shrinking]).min())
        cap = None
        if cfg.prune_crossings:
            deaths = [ev.report.diagram.get(k).deaths for k in obj.degrees]
            cap = max((float(x.max()) for x in deaths if x.size), default=None)
        t_hat = min(t_exit, obj.min_crossing(v, d, cap))
        if not np.isfinite(t_hat) or t_hat <= _STALL_T:
            events.append(StepEvent(j, False, False, True))
            break
        v = _feasible(v + t_hat * d)
        ev = obj.evaluate(v)
        events.append(StepEvent(j, bool(t_hat == t_exit), True, False))
        points.append(v)
        values.append(ev.report.value)
    return GradientPath(np.array(points), np.array(values), events, "exact_path")


def ascend_steps(cd: ComponentDistances, cfg: AscentConfig) -> GradientPath:
    """Fixed-step projected gradient ascent from the barycenter."""
    if cfg.mode != "fixed_steps":
        raise ValueError("config mode must be fixed_steps")
    return _run_fixed(_MatrixObjective(cd, cfg.functional), cfg)


def ascend_exact(cd: ComponentDistances, cfg: AscentConfig) -> GradientPath:
    """Exact gradient path: each step runs to the current region's boundary."""
    if cfg.mode != "exact_path":
        raise ValueError("config mode must be exact_path")
    return _run_exact(_MatrixObjective(cd, cfg.functional), cfg)


def ascend_family(family: WeightFamily, cfg: AscentConfig) -> GradientPath:
    """Ascent over a combination of arbitrary weights (the general form)."""
    obj = _FamilyObjective(family, cfg.functional)
    if cfg.mode == "fixed_steps":
        return _run_fixed(obj, cfg)
    return _run_exact(obj, cfg)


def ascend(cd: ComponentDistances, cfg: AscentConfig) -> GradientPath:
    """Dispatch on the configured mode."""
    if cfg.mode == "fixed_steps":
        return ascend_steps(cd, cfg)
    return ascend_exact(cd, cfg)
