"""Piecewise-linear functionals on graded diagrams and their gradients.

Supported functionals: total persistence (sum of all lifetimes), maximal
persistence, and top-l persistence (sum of the l largest lifetimes), each
over a configurable set of homology degrees.

On a region of the combination simplex where the birth-death matching and
the attaining matrix entries are constant, every diagram point is an
affine function of the combination vector, so these functionals are
affine there.  The gradient with respect to coordinate j sums, over the
functional's active pairs, the component-matrix entry at the death's
attaining entry minus the entry at the birth's attaining entry.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .persistence import GradedDiagram
from .simplexes import LevelComplex, Simplex, Weight
from .sliding_window import ComponentDistances


class FunctionalSpecError(ValueError):
    """Unparseable functional configuration string."""


@dataclass(frozen=True)
class Functional:
    """Which diagram statistic to optimize and which degrees it reads."""

    kind: str  # "total" | "max" | "top"
    ell: int | None = None
    degrees: frozenset[int] = frozenset({1})

    def __post_init__(self):
        if self.kind not in ("total", "max", "top"):
            raise FunctionalSpecError(f"unknown functional kind {self.kind!r}")
        if self.kind == "top":
            if self.ell is None or self.ell < 1:
                raise FunctionalSpecError("top-l functional needs l >= 1")
        elif self.ell is not None:
            raise FunctionalSpecError(f"{self.kind} takes no l parameter")
        if not self.degrees:
            raise FunctionalSpecError("functional must read at least one degree")
        object.__setattr__(self, "degrees", frozenset(int(k) for k in self.degrees))

    def __str__(self) -> str:
        name = f"top:{self.ell}" if self.kind == "top" else self.kind
        return f"{name} degrees={','.join(str(k) for k in sorted(self.degrees))}"


def parse_functional(spec: str, default_degrees=(1,)) -> Functional:
    """Parse e.g. ``"total"``, ``"max"``, ``"top:3"``, ``"max degrees=0,1"``."""
    tokens = spec.replace(";", " ").split()
    if not tokens:
        raise FunctionalSpecError("empty functional spec")
    kind_tok = tokens[0]
    degrees = frozenset(default_degrees)
    for tok in tokens[1:]:
        if tok.startswith("degrees="):
            try:
                degrees = frozenset(int(x) for x in tok[len("degrees="):].split(","))
            except ValueError:
                raise FunctionalSpecError(f"bad degrees list in {tok!r}") from None
        else:
            raise FunctionalSpecError(f"unexpected token {tok!r}")
    if kind_tok.startswith("top:"):
        try:
            ell = int(kind_tok[4:])
        except ValueError:
            raise FunctionalSpecError(f"bad top-l spec {kind_tok!r}") from None
        return Functional("top", ell, degrees)
    if kind_tok in ("total", "max"):
        return Functional(kind_tok, None, degrees)
    raise FunctionalSpecError(f"unknown functional {kind_tok!r}")


def evaluate(F: Functional, d: GradedDiagram) -> float:
    """Value of the functional on the diagram restricted to its degrees."""
    parts = [d.get(k).lifetimes for k in sorted(F.degrees)]
    ls = np.concatenate(parts) if parts else np.empty(0)
    if F.kind == "total":
        return float(ls.sum())
    if ls.size == 0:
        return 0.0
    if F.kind == "max":
        return float(ls.max())
    ell = min(F.ell, ls.size)
    return float(np.sort(ls)[-ell:].sum())


# ---------------------------------------------------------------------------
# Active-pair selection
# ---------------------------------------------------------------------------

@dataclass
class _Selection:
    """Active pairs of one degree: indices into the diagram's point arrays."""

    degree: int
    indices: np.ndarray


def _degree_keys(pts, fallback_idx: np.ndarray):
    be = pts.birth_entries if pts.birth_entries is not None else fallback_idx
    de = pts.death_entries if pts.death_entries is not None else fallback_idx
    bi = pts.birth_idx if pts.birth_idx is not None else fallback_idx
    di = pts.death_idx if pts.death_idx is not None else fallback_idx
    return be, de, bi, di


def select_active(F: Functional, d: GradedDiagram) -> list[_Selection]:
    """Indices of the pairs the functional's gradient reads, per degree.

    Total persistence reads every pair of the selected degrees.  Max and
    top-l read the largest-lifetime pairs, excluding pairs whose lifetime
    is exactly zero; ties are broken deterministically by the smallest
    (birth entry, death entry, birth rank, death rank, degree), which
    picks one subgradient on region boundaries.
    """
    degs = sorted(F.degrees)
    if F.kind == "total":
        return [_Selection(k, np.arange(len(d.get(k)))) for k in degs
                if len(d.get(k))]
    rows = []
    for k in degs:
        pts = d.get(k)
        if not len(pts):
            continue
        fallback = np.arange(len(pts))
        be, de, bi, di = _degree_keys(pts, fallback)
        life = pts.lifetimes
        keep = life > 0.0
        idx = np.flatnonzero(keep)
        if idx.size == 0:
            continue
        rows.append((np.full(idx.size, k), idx, life[idx],
                     be[idx], de[idx], bi[idx], di[idx]))
    if not rows:
        return []
    ks, idxs, life, be, de, bi, di = (np.concatenate([r[i] for r in rows])
                                      for i in range(7))
    order = np.lexsort((ks, di, bi, de, be, -life))
    want = 1 if F.kind == "max" else min(F.ell, order.size)
    chosen = order[:want]
    out: dict[int, list[int]] = {}
    for c in chosen:
        out.setdefault(int(ks[c]), []).append(int(idxs[c]))
    return [_Selection(k, np.array(sorted(v), dtype=np.int64))
            for k, v in sorted(out.items())]


# ---------------------------------------------------------------------------
# Gradients
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ActivePair:
    """One pair the gradient reads, with its attaining matrix entries (1-based)."""

    birth: Simplex | None
    death: Simplex | None
    birth_entry: tuple[int, int] | None
    death_entry: tuple[int, int] | None


@dataclass
class GradientReport:
    """Functional value, gradient, and its zero-sum projection at one point."""

    value: float
    grad: np.ndarray
    projected_grad: np.ndarray
    diagram: GradedDiagram = field(repr=False)
    selections: list[_Selection] = field(repr=False, default_factory=list)

    @property
    def active_pairs(self) -> list[ActivePair]:
        out = []
        d = self.diagram
        m = d.m
        for sel in self.selections:
            pts = d.by_degree[sel.degree]
            for i in sel.indices:
                i = int(i)
                be = de = None
                if pts.birth_entries is not None and m:
                    c = int(pts.birth_entries[i])
                    be = (c // m + 1, c % m + 1)
                if pts.death_entries is not None and m:
                    c = int(pts.death_entries[i])
                    de = (c // m + 1, c % m + 1)
                out.append(ActivePair(d.birth_simplex(sel.degree, i),
                                      d.death_simplex(sel.degree, i), be, de))
        return out


def _entry_gradient(flat_signed: np.ndarray, d: GradedDiagram,
                    selections: list[_Selection]) -> np.ndarray:
    grad = np.zeros(flat_signed.shape[0])
    for sel in selections:
        pts = d.by_degree[sel.degree]
        if pts.birth_entries is None or pts.death_entries is None:
            raise ValueError("diagram carries no matrix-entry provenance")
        de = pts.death_entries[sel.indices]
        be = pts.birth_entries[sel.indices]
        grad += flat_signed[:, de].sum(axis=1) - flat_signed[:, be].sum(axis=1)
    return grad


def _signed_flat(mats: np.ndarray, v: np.ndarray) -> np.ndarray:
    # derivative of |v_j| is sign(v_j), taken as +1 at 0 (right derivative
    # on the nonnegative orthant)
    sign = np.where(v < 0, -1.0, 1.0)
    return sign[:, None] * mats.reshape(mats.shape[0], -1)


def gradient(F: Functional, d: GradedDiagram, cd: ComponentDistances,
             v) -> GradientReport:
    """Gradient of the functional through the combination-matrix pipeline at v.

    Requires a diagram computed from ``combo_distance(cd, v)`` with entry
    provenance.  An empty selected-degree diagram yields a zero gradient
    with no active pairs.
    """
    v = np.asarray(v, dtype=float)
    if v.shape != (cd.p,):
        raise ValueError(f"expected {cd.p} coefficients, got shape {v.shape}")
    selections = select_active(F, d)
    grad = _entry_gradient(_signed_flat(cd.mats, v), d, selections)
    return GradientReport(evaluate(F, d), grad, grad - grad.mean(), d, selections)


# ---------------------------------------------------------------------------
# Weight families (combinations of arbitrary weights)
# ---------------------------------------------------------------------------

@dataclass
class WeightFamily:
    """p monotone weights on one complex, combined as sum_j v_j * w_j.

    Each simplex weight is affine in v, so functionals are PL with
    gradients read directly from the member weights.
    """

    cx: LevelComplex
    values: np.ndarray  # (p, n_simplices) in canonical order

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 2 or self.values.shape[1] != self.cx.size:
            raise ValueError(
                f"expected (p, {self.cx.size}) weight array, got {self.values.shape}")

    @property
    def p(self) -> int:
        return self.values.shape[0]

    @classmethod
    def from_weights(cls, weights: list[Weight],
                     cx: LevelComplex | None = None) -> "WeightFamily":
        if cx is None:
            cx = LevelComplex.from_simplices(weights[0].simplices())
        order = cx.base_order()
        for w in weights:
            w.check_monotone()
        return cls(cx, np.stack([w.as_array(order) for w in weights]))

    def combined(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        return v @ self.values


def family_gradient(F: Functional, d: GradedDiagram, family: WeightFamily,
                    v) -> GradientReport:
    """Gradient for a weight-family combination: sums w_j(death) - w_j(birth)."""
    selections = select_active(F, d)
    grad = np.zeros(family.p)
    cx = family.cx
    for sel in selections:
        pts = d.by_degree[sel.degree]
        if pts.birth_idx is None or pts.death_idx is None:
            raise ValueError("diagram carries no simplex provenance")
        bg = cx.global_index(sel.degree + 1, pts.birth_idx[sel.indices])
        dg = cx.global_index(sel.degree + 2, pts.death_idx[sel.indices])
        grad += family.values[:, dg].sum(axis=1) - family.values[:, bg].sum(axis=1)
    return GradientReport(evaluate(F, d), grad, grad - grad.mean(), d, selections)
