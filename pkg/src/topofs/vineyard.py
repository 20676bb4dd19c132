"""Persistence diagrams along piecewise-linear curves of weights or matrices.

Along an affine segment of the curve, as long as the birth-death
matching (and, for matrix curves, the attaining entries) stays constant,
every diagram point moves affinely; the whole family of diagrams is
therefore a union of piecewise-affine vines.  Tracing samples each
segment, locates pairing changes by bisection, and stitches vines across
crossings by simplex-pair identity, falling back to greedy
nearest-endpoint matching when a crossing permutes the pairs.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .persistence import GradedDiagram, InvalidDegreeError, level_diagram
from .simplexes import BaseOrder, LevelComplex, Weight, refine_preorder

BISECT_TOL = 1e-9


class InvalidResolutionError(ValueError):
    """Fewer than two samples per curve segment."""


class CurveError(ValueError):
    """Malformed PL curve (breakpoints or values inconsistent)."""


@dataclass
class PLCurve:
    """Breakpoint times with matrix or weight values, affine in between."""

    ts: np.ndarray
    values: list
    kind: str  # "matrix" | "weight"

    def __post_init__(self):
        self.ts = np.asarray(self.ts, dtype=float)
        if self.ts.ndim != 1 or len(self.ts) < 2:
            raise CurveError("need at least two breakpoints")
        if (np.diff(self.ts) <= 0).any():
            raise CurveError("breakpoints must be strictly increasing")
        if len(self.values) != len(self.ts):
            raise CurveError("one value per breakpoint required")

    @classmethod
    def from_matrices(cls, ts, mats) -> "PLCurve":
        mats = [np.asarray(M, dtype=float) for M in mats]
        if len({M.shape for M in mats}) != 1:
            raise CurveError("matrices must share a shape")
        return cls(np.asarray(ts, dtype=float), mats, "matrix")

    @classmethod
    def from_weights(cls, ts, weights: list[Weight]) -> "PLCurve":
        keys = set(weights[0].values)
        if any(set(w.values) != keys for w in weights):
            raise CurveError("weights must share their simplex set")
        return cls(np.asarray(ts, dtype=float), list(weights), "weight")

    @property
    def span(self) -> tuple[float, float]:
        return float(self.ts[0]), float(self.ts[-1])

    def segment(self, i: int):
        return float(self.ts[i]), float(self.ts[i + 1])


@dataclass
class Vine:
    """One diagram point as a piecewise-affine path (t, birth, death)."""

    times: list[float] = field(default_factory=list)
    births: list[float] = field(default_factory=list)
    deaths: list[float] = field(default_factory=list)

    def append(self, t: float, b: float, d: float) -> float:
        """Add a breakpoint; returns the jump when replacing a coincident one."""
        if self.times and abs(self.times[-1] - t) < 1e-15:
            jump = max(abs(self.births[-1] - b), abs(self.deaths[-1] - d))
            self.births[-1], self.deaths[-1] = b, d
            return jump
        self.times.append(t)
        self.births.append(b)
        self.deaths.append(d)
        return 0.0

    def value_at(self, t: float) -> tuple[float, float]:
        b = float(np.interp(t, self.times, self.births))
        d = float(np.interp(t, self.times, self.deaths))
        return b, d

    def __len__(self) -> int:
        return len(self.times)


@dataclass
class Vineyard:
    """All degree-k vines along a curve."""

    degree: int
    vines: list[Vine]
    crossings: list[float] = field(default_factory=list)
    max_stitch_jump: float = 0.0

    def sample(self, t: float) -> list[tuple[float, float]]:
        return [v.value_at(t) for v in self.vines]

    def to_json(self, path=None):
        doc = json.dumps(
            {"degree": self.degree,
             "crossings": list(self.crossings),
             "vines": [[[t, b, d] for t, b, d in zip(v.times, v.births, v.deaths)]
                       for v in self.vines]},
            sort_keys=True)
        if path is None:
            return doc
        with open(path, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(doc + "\n")
        return None

    def to_csv(self, path) -> None:
        with open(path, "w", newline="\n", encoding="utf-8") as fh:
            fh.write("vine,t,birth,death\n")
            for i, v in enumerate(self.vines):
                for t, b, d in zip(v.times, v.births, v.deaths):
                    fh.write(f"{i},{'%.17g' % t},{'%.17g' % b},{'%.17g' % d}\n")


class _CurveEvaluator:
    """Diagram and weight evaluation along one affine piece of a curve."""

    def __init__(self, curve: PLCurve, k: int):
        self.curve = curve
        self.k = k
        if curve.kind == "matrix":
            m = curve.values[0].shape[0]
            self.cx = LevelComplex.full(m, min(k + 1, m - 1))
        else:
            self.cx = LevelComplex.from_simplices(curve.values[0].simplices())
            order = self.cx.base_order()
            self.vectors = [w.as_array(order) for w in curve.values]
        if not -1 <= k <= self.cx.m - 1:
            raise InvalidDegreeError(f"degree {k} outside [-1, {self.cx.m - 1}]")

    def level_weights(self, i: int, t: float):
        t0, t1 = self.curve.segment(i)
        lam = (t - t0) / (t1 - t0)
        if self.curve.kind == "matrix":
            M = (1 - lam) * self.curve.values[i] + lam * self.curve.values[i + 1]
            return self.cx.matrix_weights(M, validate=False)
        vec = (1 - lam) * self.vectors[i] + lam * self.vectors[i + 1]
        return self.cx.vector_weights(vec), None

    def at(self, i: int, t: float) -> GradedDiagram:
        w, codes = self.level_weights(i, t)
        return level_diagram(self.cx, w, (self.k,), codes)

    def signature(self, i: int, t: float) -> bytes:
        return self.at(i, t).pairing_signature()

    def pair_values(self, i: int, t: float, d_ref: GradedDiagram) -> np.ndarray:
        """(birth, death) of the reference matching's pairs at curve time t."""
        w, _ = self.level_weights(i, t)
        pts = d_ref.get(self.k)
        return np.stack([w[self.k + 1][pts.birth_idx],
                         w[self.k + 2][pts.death_idx]], axis=1)


def _locate_crossing(ev: _CurveEvaluator, i: int, lo: float, hi: float,
                     sig_lo: bytes) -> float:
    while hi - lo > BISECT_TOL:
        mid = 0.5 * (lo + hi)
        if ev.signature(i, mid) == sig_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def trace_vineyard(curve: PLCurve, k: int, resolution: int) -> Vineyard:
    """Extract the degree-k vines of a PL curve of matrices or weights.

    Samples ``resolution`` points per curve segment, refines every
    detected pairing change by bisection (to 1e-9 in t), and emits vines
    with breakpoints at segment ends and crossings.  Crossings closer
    together than the sample spacing may be merged.  ``max_stitch_jump``
    reports the largest discontinuity absorbed while stitching; it should
    be tiny for a correctly detected region structure.
    """
    if resolution < 2:
        raise InvalidResolutionError(f"resolution must be >= 2, got {resolution}")
    ev = _CurveEvaluator(curve, k)
    vines: list[Vine] = []
    active: dict[tuple[int, int], Vine] = {}
    crossings: list[float] = []
    max_jump = 0.0

    for i in range(len(curve.ts) - 1):
        t0, t1 = curve.segment(i)
        samples = np.linspace(t0, t1, resolution)
        sigs = [ev.signature(i, float(t)) for t in samples]
        bounds = [t0]
        for a in range(len(samples) - 1):
            if sigs[a] != sigs[a + 1]:
                c = _locate_crossing(ev, i, float(samples[a]), float(samples[a + 1]),
                                     sigs[a])
                if c > bounds[-1]:
                    bounds.append(c)
                    crossings.append(c)
        if t1 > bounds[-1]:
            bounds.append(t1)
        for r in range(len(bounds) - 1):
            ra, rb = bounds[r], bounds[r + 1]
            d_mid = ev.at(i, 0.5 * (ra + rb))
            pts = d_mid.get(k)
            vals_a = ev.pair_values(i, ra, d_mid)
            vals_b = ev.pair_values(i, rb, d_mid)
            keys = [(int(pts.birth_idx[j]), int(pts.death_idx[j]))
                    for j in range(len(pts))]
            new_active: dict[tuple[int, int], Vine] = {}
            unmatched: list[int] = []
            for j, key in enumerate(keys):
                vine = active.pop(key, None)
                if vine is None:
                    unmatched.append(j)
                    continue
                max_jump = max(max_jump, vine.append(ra, *vals_a[j]))
                vine.append(rb, *vals_b[j])
                new_active[key] = vine
            leftovers = list(active.values())
            for j in unmatched:
                vine = None
                if leftovers:
                    dist = [abs(lv.births[-1] - vals_a[j][0])
                            + abs(lv.deaths[-1] - vals_a[j][1]) for lv in leftovers]
                    vine = leftovers.pop(int(np.argmin(dist)))
                if vine is None:
                    vine = Vine()
                    vines.append(vine)
                max_jump = max(max_jump, vine.append(ra, *vals_a[j]))
                vine.append(rb, *vals_b[j])
                new_active[keys[j]] = vine
            active = new_active
    return Vineyard(k, vines, crossings, max_jump)


def region_signature(w: Weight, base: BaseOrder) -> tuple[int, ...]:
    """Canonical encoding of the refined total order: equal signatures give
    equal matchings (the matching depends only on the order)."""
    refined = refine_preorder(w, base)
    return tuple(base.rank[s] for s in refined.simplices)
