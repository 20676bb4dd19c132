"""Boundary matrices, birth-death matchings, and graded persistence diagrams.

Homology is reduced simplicial homology with Z/2 coefficients throughout.
Reducing the boundary matrix of a totally ordered complex pairs each
nonzero column with its lowest row; pairs in degree k contribute points
(w(birth), w(death)) to the degree-k diagram.  On the full augmented
simplex the matching is perfect and the degree-k pair count is the
alternating binomial sum ``f_plus(m, k)``.

``persistent_betti`` recomputes persistent Betti numbers by direct
Gaussian elimination over Z/2.  It shares no code with the reduction
path, so the two can be used to cross-check each other.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import _reduction
from .simplexes import (
    EMPTY,
    BaseOrder,
    IncompleteSkeletonError,
    InvalidSpecError,
    LevelComplex,
    Simplex,
    SkeletonSpec,
    Weight,
    enumerate_skeleton,
    refine_preorder,
    validate_filtration_matrix,
)


class InvalidDegreeError(ValueError):
    """Homology degree outside [-1, m-1]."""


class InvalidIntervalError(ValueError):
    """Persistent Betti interval with a > b."""


class InvalidComplexError(ValueError):
    """Input is not a simplicial complex (missing face or empty simplex present)."""


def f_plus(m: int, k: int) -> int:
    """Number of degree-k birth-death pairs on the full augmented (m-1)-simplex.

    This is the alternating sum of face counts from dimension -1 up to k.
    """
    if not -1 <= k <= m - 1:
        raise InvalidDegreeError(f"degree {k} outside [-1, {m - 1}]")
    return sum((-1) ** (k - j) * math.comb(m, j + 1) for j in range(-1, k + 1))


# ---------------------------------------------------------------------------
# Boundary matrices and reduction (simplex-level API)
# ---------------------------------------------------------------------------

@dataclass
class BoundaryMatrix:
    """Z/2 boundary matrix: per-simplex sets of row indices of codim-1 faces."""

    order: BaseOrder
    columns: list[tuple[int, ...]]

    def __len__(self) -> int:
        return len(self.columns)


@dataclass
class BirthDeathMatching:
    """Pairs (birth simplex, death simplex) with dim(death) = dim(birth) + 1."""

    pairs: list[tuple[Simplex, Simplex]]
    unpaired: list[Simplex] = field(default_factory=list)

    def in_degree(self, k: int) -> list[tuple[Simplex, Simplex]]:
        return [(s, t) for s, t in self.pairs if s.dim == k]

    @property
    def is_perfect(self) -> bool:
        return not self.unpaired

    def __len__(self) -> int:
        return len(self.pairs)


def build_boundary(skeleton: list[Simplex], order: BaseOrder) -> BoundaryMatrix:
    """Boundary matrix of the skeleton with rows/columns in the given order.

    The order must be a linear extension covering exactly the skeleton.
    Vertices have the empty simplex as boundary iff it is present.
    """
    present = set(skeleton)
    if present != set(order.simplices):
        raise ValueError("order must cover exactly the skeleton's simplices")
    has_empty = EMPTY in present
    columns: list[tuple[int, ...]] = []
    for s in order.simplices:
        j = order.rank[s]
        rows = []
        for f in s.facets():
            if f.dim < 0 and not has_empty:
                continue
            r = order.rank.get(f)
            if r is None:
                raise IncompleteSkeletonError(f"missing face {f} of {s}")
            if r >= j:
                raise ValueError(f"order is not a linear extension: {f} after {s}")
            rows.append(r)
        columns.append(tuple(sorted(rows)))
    return BoundaryMatrix(order, columns)


def reduce(b: BoundaryMatrix) -> tuple[BoundaryMatrix, BirthDeathMatching]:
    """Left-to-right column reduction; returns the reduced matrix and the matching.

    Each nonzero reduced column is paired with the simplex of its lowest
    row.  Simplices in no pair are flagged as unpaired (essential
    classes; impossible on the full augmented simplex).
    """
    n = len(b.columns)
    indptr = np.zeros(n + 1, dtype=np.int64)
    for j, col in enumerate(b.columns):
        indptr[j + 1] = indptr[j] + len(col)
    rows = np.fromiter(
        (r for col in b.columns for r in col), dtype=np.int64, count=indptr[-1])
    pair_row, R = _reduction.reduce_csr(indptr, rows, n)
    simplices = b.order.simplices
    pairs = []
    matched = np.zeros(n, dtype=bool)
    for j in range(n):
        r = pair_row[j]
        if r >= 0:
            pairs.append((simplices[r], simplices[j]))
            matched[r] = True
            matched[j] = True
    unpaired = [simplices[j] for j in range(n) if not matched[j]]
    reduced_cols = [tuple(int(r) for r in _reduction.unpack_rows(R, j)) for j in range(n)]
    return BoundaryMatrix(b.order, reduced_cols), BirthDeathMatching(pairs, unpaired)


# ---------------------------------------------------------------------------
# Graded diagrams
# ---------------------------------------------------------------------------

@dataclass
class DegreePoints:
    """Points of one homology degree, with optional birth/death provenance.

    ``birth_idx``/``death_idx`` index into levels ``degree+1`` and
    ``degree+2`` of the originating complex; ``birth_entries`` and
    ``death_entries`` are 0-based flattened matrix entry codes ``i*m + j``
    of the entry attaining each simplex weight.
    """

    degree: int
    births: np.ndarray
    deaths: np.ndarray
    birth_idx: np.ndarray | None = None
    death_idx: np.ndarray | None = None
    birth_entries: np.ndarray | None = None
    death_entries: np.ndarray | None = None
    birth_simplices: list[Simplex] | None = None
    death_simplices: list[Simplex] | None = None

    def __len__(self) -> int:
        return len(self.births)

    @property
    def lifetimes(self) -> np.ndarray:
        return self.deaths - self.births


@dataclass
class GradedDiagram:
    """Multiset of (degree, birth, death) points grouped by degree.

    Zero-persistence points are retained: they carry the provenance that
    keeps vineyards and gradients continuous across region changes.
    ``ignored_degrees`` counts requested degrees that fell outside
    [-1, m-1] and were silently skipped.
    """

    by_degree: dict[int, DegreePoints]
    m: int | None = None
    complex: LevelComplex | None = field(default=None, repr=False)
    ignored_degrees: int = 0

    def degrees(self) -> list[int]:
        return sorted(self.by_degree)

    def get(self, k: int) -> DegreePoints:
        if k in self.by_degree:
            return self.by_degree[k]
        return DegreePoints(k, np.empty(0), np.empty(0))

    def points(self, degrees=None) -> list[tuple[int, float, float]]:
        out = []
        for k in self.degrees():
            if degrees is not None and k not in degrees:
                continue
            pts = self.by_degree[k]
            out.extend((k, float(b), float(d)) for b, d in zip(pts.births, pts.deaths))
        return out

    def count(self, degrees=None) -> int:
        return sum(len(p) for k, p in self.by_degree.items()
                   if degrees is None or k in degrees)

    def quadrant_count(self, k: int, a: float, b: float) -> int:
        """Number of degree-k points with birth <= a and death >= b."""
        pts = self.get(k)
        return int(np.count_nonzero((pts.births <= a) & (pts.deaths >= b)))

    def scaled(self, factor: float) -> "GradedDiagram":
        if factor < 0:
            raise ValueError("diagram scaling requires a nonnegative factor")
        scaled = {k: replace(p, births=factor * p.births, deaths=factor * p.deaths)
                  for k, p in self.by_degree.items()}
        return GradedDiagram(scaled, self.m, self.complex, self.ignored_degrees)

    def restricted(self, degrees) -> "GradedDiagram":
        keep = {k: p for k, p in self.by_degree.items() if k in degrees}
        return GradedDiagram(keep, self.m, self.complex, self.ignored_degrees)

    def birth_simplex(self, k: int, i: int) -> Simplex | None:
        pts = self.get(k)
        if pts.birth_simplices is not None:
            return pts.birth_simplices[i]
        if self.complex is not None and pts.birth_idx is not None:
            return self.complex.simplex(k + 1, int(pts.birth_idx[i]))
        return None

    def death_simplex(self, k: int, i: int) -> Simplex | None:
        pts = self.get(k)
        if pts.death_simplices is not None:
            return pts.death_simplices[i]
        if self.complex is not None and pts.death_idx is not None:
            return self.complex.simplex(k + 2, int(pts.death_idx[i]))
        return None

    def matching(self) -> BirthDeathMatching:
        """Reconstruct the simplex pairing (requires provenance)."""
        pairs = []
        for k in self.degrees():
            for i in range(len(self.by_degree[k])):
                s, t = self.birth_simplex(k, i), self.death_simplex(k, i)
                if s is None or t is None:
                    raise ValueError("diagram carries no simplex provenance")
                pairs.append((s, t))
        return BirthDeathMatching(pairs)

    def pairing_signature(self, degrees=None) -> bytes:
        """Opaque encoding of the pairing and attaining entries of the kept degrees.

        Equal signatures mean identical matchings and argmax entries, so
        the diagram map is affine in between (used for region-crossing
        detection).
        """
        chunks = []
        for k in self.degrees():
            if degrees is not None and k not in degrees:
                continue
            pts = self.by_degree[k]
            chunks.append(np.int64(k).tobytes())
            for arr in (pts.birth_idx, pts.death_idx, pts.birth_entries, pts.death_entries):
                chunks.append(b"|" if arr is None else np.ascontiguousarray(arr).tobytes())
        return b";".join(chunks)


def diagrams_close(d1: GradedDiagram, d2: GradedDiagram, tol: float = 0.0,
                   degrees=None) -> bool:
    """Multiset equality of diagram points up to ``tol`` per coordinate."""
    ks = set(d1.degrees()) | set(d2.degrees())
    if degrees is not None:
        ks &= set(degrees)
    for k in ks:
        p1, p2 = d1.get(k), d2.get(k)
        if len(p1) != len(p2):
            return False
        a = np.stack([p1.births, p1.deaths], axis=1)
        b = np.stack([p2.births, p2.deaths], axis=1)
        a = a[np.lexsort((a[:, 1], a[:, 0]))]
        b = b[np.lexsort((b[:, 1], b[:, 0]))]
        if not np.allclose(a, b, rtol=0.0, atol=tol, equal_nan=False):
            return False
    return True


def diagram(matching: BirthDeathMatching, w: Weight, degrees) -> GradedDiagram:
    """Diagram of a matching computed under the refined order of ``w``.

    One point (k, w(birth), w(death)) per degree-k pair, zero-persistence
    points included.  Degrees outside the valid range are skipped and
    counted in ``ignored_degrees``.
    """
    m = max((max(s.vertices) for s, _ in matching.pairs if s.dim >= 0), default=0)
    for s, t in matching.pairs:
        m = max(m, max(t.vertices, default=0))
    valid = [k for k in degrees if -1 <= k <= m - 1]
    ignored = len(set(degrees)) - len(set(valid))
    by_degree: dict[int, DegreePoints] = {}
    for k in sorted(set(valid)):
        sel = matching.in_degree(k)
        births = np.array([w[s] for s, _ in sel], dtype=float)
        deaths = np.array([w[t] for _, t in sel], dtype=float)
        be = de = None
        if w.entries is not None:
            be = np.array([_entry_code(w.entries[s], m) for s, _ in sel], dtype=np.int64)
            de = np.array([_entry_code(w.entries[t], m) for _, t in sel], dtype=np.int64)
        by_degree[k] = DegreePoints(
            k, births, deaths, birth_entries=be, death_entries=de,
            birth_simplices=[s for s, _ in sel], death_simplices=[t for _, t in sel])
    return GradedDiagram(by_degree, m=m, ignored_degrees=ignored)


def _entry_code(entry: tuple[int, int], m: int) -> int:
    i, j = entry
    return (i - 1) * m + (j - 1)


# ---------------------------------------------------------------------------
# Level pipeline (array path)
# ---------------------------------------------------------------------------

def level_diagram(cx: LevelComplex, level_weights: list[np.ndarray], degrees,
                  entry_codes: list[np.ndarray] | None = None) -> GradedDiagram:
    """Per-degree diagrams from per-level weight arrays.

    Reduces, for each requested degree k, the level k+2 columns over the
    level k+1 rows, both in filtration order (stable sort, ties by the
    canonical lexicographic order within the level).  Pairs only; intended
    for complexes where the requested degrees have no essential classes
    (full augmented skeleta, or complexes completed by extension).
    """
    valid = sorted({k for k in degrees if -1 <= k <= cx.m - 1})
    ignored = len(set(degrees)) - len(valid)
    by_degree: dict[int, DegreePoints] = {}
    for k in valid:
        row_lvl, col_lvl = k + 1, k + 2
        if col_lvl >= cx.n_levels or row_lvl >= cx.n_levels:
            by_degree[k] = DegreePoints(k, np.empty(0), np.empty(0))
            continue
        wr, wc = level_weights[row_lvl], level_weights[col_lvl]
        n_rows, n_cols = len(wr), len(wc)
        if n_cols == 0 or n_rows == 0:
            by_degree[k] = DegreePoints(k, np.empty(0), np.empty(0))
            continue
        ord_r = np.argsort(wr, kind="stable")
        pos_r = np.empty(n_rows, dtype=np.int64)
        pos_r[ord_r] = np.arange(n_rows)
        ord_c = np.argsort(wc, kind="stable")
        face_pos = pos_r[cx.faces[col_lvl]][ord_c]
        pair_row, _ = _reduction.reduce_fixed_width(face_pos, n_rows)
        hit = pair_row >= 0
        death_idx = ord_c[np.flatnonzero(hit)]
        birth_idx = ord_r[pair_row[hit]]
        be = de = None
        if entry_codes is not None:
            be = entry_codes[row_lvl][birth_idx]
            de = entry_codes[col_lvl][death_idx]
        by_degree[k] = DegreePoints(
            k, wr[birth_idx], wc[death_idx], birth_idx=birth_idx,
            death_idx=death_idx, birth_entries=be, death_entries=de)
    return GradedDiagram(by_degree, m=cx.m, complex=cx, ignored_degrees=ignored)


def matrix_diagram(M: np.ndarray, degrees=(1,), cx: LevelComplex | None = None,
                   validate: bool = True) -> GradedDiagram:
    """Vietoris-Rips diagram of a filtration matrix with entry provenance.

    Enumerates the (max degree + 1)-skeleton of the full augmented
    simplex unless a complex is supplied.
    """
    M = np.asarray(M, dtype=float)
    if cx is None:
        valid = [k for k in degrees if -1 <= k <= M.shape[0] - 1]
        top = max(valid) if valid else -1
        cx = LevelComplex.full(M.shape[0], min(top + 1, M.shape[0] - 1))
    w, codes = cx.matrix_weights(M, validate=validate)
    return level_diagram(cx, w, degrees, codes)


def weight_diagram(w: Weight, degrees, cx: LevelComplex | None = None) -> GradedDiagram:
    """Diagram of an explicit weight via the level pipeline."""
    if cx is None:
        cx = LevelComplex.from_simplices(w.simplices())
    values = w.as_array(cx.base_order())
    levels = cx.vector_weights(values)
    codes = None
    if w.entries is not None:
        flat = np.array([_entry_code(w.entries[s], cx.m) for s in cx.simplices()],
                        dtype=np.int64)
        codes = [flat[cx.offsets[l]:cx.offsets[l + 1]] for l in range(cx.n_levels)]
    return level_diagram(cx, levels, degrees, codes)


# ---------------------------------------------------------------------------
# Independent persistent Betti oracle (Gaussian elimination over Z/2)
# ---------------------------------------------------------------------------

def _gf2_eliminate(A: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Row-reduce A over Z/2 in place (copy); returns (reduced, pivot column list)."""
    A = A.copy().astype(np.uint8)
    n_rows, n_cols = A.shape
    pivots = []
    r = 0
    for c in range(n_cols):
        hits = np.flatnonzero(A[r:, c])
        if len(hits) == 0:
            continue
        p = r + hits[0]
        if p != r:
            A[[r, p]] = A[[p, r]]
        mask = A[:, c].copy()
        mask[r] = 0
        A[mask == 1] ^= A[r]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return A, pivots


def _gf2_rank(A: np.ndarray) -> int:
    if A.size == 0:
        return 0
    return len(_gf2_eliminate(A)[1])


def _gf2_kernel(A: np.ndarray) -> np.ndarray:
    """Basis of the null space of A over Z/2, one basis vector per column."""
    n_cols = A.shape[1]
    if n_cols == 0:
        return np.zeros((0, 0), dtype=np.uint8)
    if A.size == 0:
        return np.eye(n_cols, dtype=np.uint8)
    R, pivots = _gf2_eliminate(A)
    free = [c for c in range(n_cols) if c not in pivots]
    basis = np.zeros((n_cols, len(free)), dtype=np.uint8)
    for bi, fc in enumerate(free):
        basis[fc, bi] = 1
        for r, pc in enumerate(pivots):
            if R[r, fc]:
                basis[pc, bi] = 1
    return basis


def _boundary_dense(cols: list[Simplex], rows: list[Simplex]) -> np.ndarray:
    pos = {s: i for i, s in enumerate(rows)}
    A = np.zeros((len(rows), len(cols)), dtype=np.uint8)
    for j, s in enumerate(cols):
        for f in s.facets():
            i = pos.get(f)
            if i is not None:
                A[i, j] = 1
    return A


def persistent_betti(skeleton: list[Simplex], w: Weight, k: int,
                     a: float, b: float) -> int:
    """Rank of H_k(K_a) -> H_k(K_b) over Z/2 by direct Gaussian elimination.

    Independent oracle: builds chain groups and boundary maps from
    scratch and never reuses the reduction's matching.  Reduced homology
    when the empty simplex is part of the skeleton.
    """
    if a > b:
        raise InvalidIntervalError(f"need a <= b, got a={a}, b={b}")
    by_dim: dict[int, list[Simplex]] = {}
    for s in skeleton:
        by_dim.setdefault(s.dim, []).append(s)
    for sims in by_dim.values():
        sims.sort(key=lambda s: s.vertices)

    def filtered(dim: int, cutoff: float) -> list[Simplex]:
        return [s for s in by_dim.get(dim, []) if w[s] <= cutoff]

    k_a = filtered(k, a)
    if not k_a:
        return 0
    km1_a = filtered(k - 1, a)
    Z = _gf2_kernel(_boundary_dense(k_a, km1_a))
    if Z.shape[1] == 0:
        return 0
    k_b = filtered(k, b)
    kp1_b = filtered(k + 1, b)
    B = _boundary_dense(kp1_b, k_b)
    # embed the cycle basis into the chains of K_b
    pos_b = {s: i for i, s in enumerate(k_b)}
    Z_emb = np.zeros((len(k_b), Z.shape[1]), dtype=np.uint8)
    for i, s in enumerate(k_a):
        Z_emb[pos_b[s]] = Z[i]
    # dim Z - dim(Z n B) = rank [B | Z] - rank B
    return _gf2_rank(np.concatenate([B, Z_emb], axis=1)) - _gf2_rank(B)


# ---------------------------------------------------------------------------
# Arbitrary complexes via extension to the full augmented simplex
# ---------------------------------------------------------------------------

@dataclass
class AugmentedExtension:
    """A complex weight extended to the full augmented simplex.

    Simplices missing from the input carry the ``cap`` value and the
    empty simplex carries ``floor``; diagrams of the extension convert to
    ordinary diagrams of the input complex via ``ordinary_from_augmented``.
    """

    skeleton: list[Simplex]
    weight: Weight
    cap: float
    floor: float
    m: int


def extend_to_augmented(w: Weight) -> AugmentedExtension:
    """Extend a weighted simplicial complex to the full augmented simplex.

    The empty simplex sits one range below the minimum and all missing
    simplices one range above the maximum (one unit when the input weight
    is constant, so the cap stays strictly above every input value).
    """
    simplices = w.simplices()
    if any(s.dim < 0 for s in simplices):
        raise InvalidComplexError("input complex must not contain the empty simplex")
    if not simplices:
        raise InvalidComplexError("empty complex")
    present = set(simplices)
    for s in simplices:
        for f in s.facets():
            if f.dim >= 0 and f not in present:
                raise InvalidComplexError(f"missing face {f} of {s}")
    w.check_monotone()
    m = max(max(s.vertices) for s in simplices)
    vals = np.array([w[s] for s in simplices], dtype=float)
    lo, hi = float(vals.min()), float(vals.max())
    rng = hi - lo if hi > lo else 1.0
    floor, cap = lo - rng, hi + rng
    skeleton = enumerate_skeleton(SkeletonSpec(m, m - 1, include_empty=True))
    values = {EMPTY: floor}
    for s in skeleton[1:]:
        values[s] = w.values.get(s, cap)
    return AugmentedExtension(skeleton, Weight(values), cap, floor, m)


def ordinary_from_augmented(d: GradedDiagram, cap: float) -> GradedDiagram:
    """Ordinary (non-reduced) diagrams of the input complex from an extension's diagram.

    Deaths at the cap become infinite, points born at the cap are
    completion artifacts and are dropped, and the degree-(-1) point
    (floor, b) relocates to (b, inf) in degree 0.
    """
    by_degree: dict[int, DegreePoints] = {}
    extra_zero: list[float] = []
    for k in d.degrees():
        pts = d.by_degree[k]
        if k == -1:
            # single pair (empty simplex, first vertex); its death restarts in degree 0
            extra_zero.extend(float(x) for x in pts.deaths)
            continue
        keep = pts.births < cap
        births = pts.births[keep]
        deaths = np.where(pts.deaths[keep] >= cap, np.inf, pts.deaths[keep])
        if len(births):
            by_degree[k] = DegreePoints(k, births, deaths)
    if extra_zero:
        prev = by_degree.get(0, DegreePoints(0, np.empty(0), np.empty(0)))
        births = np.concatenate([np.asarray(extra_zero, dtype=float), prev.births])
        deaths = np.concatenate([np.full(len(extra_zero), np.inf), prev.deaths])
        by_degree[0] = DegreePoints(0, births, deaths)
    return GradedDiagram(by_degree, m=d.m)


def complex_diagram(w: Weight, degrees) -> GradedDiagram:
    """Ordinary persistence diagram of a weighted simplicial complex."""
    ext = extend_to_augmented(w)
    wanted = set(degrees)
    aug_degrees = set(wanted)
    if 0 in wanted:
        aug_degrees.add(-1)
    aug = weight_diagram(ext.weight, sorted(aug_degrees),
                         cx=LevelComplex.full(ext.m, ext.m - 1))
    ordinary = ordinary_from_augmented(aug, ext.cap)
    return ordinary.restricted(wanted)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return "inf" if math.isinf(x) else "%.17g" % x


def diagram_to_csv(d: GradedDiagram, path) -> None:
    """Write ``degree,birth,death`` rows, 17 significant digits, LF endings."""
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write("degree,birth,death\n")
        for k, b, dd in d.points():
            fh.write(f"{k},{_fmt(b)},{_fmt(dd)}\n")


def diagram_from_csv(path) -> GradedDiagram:
    by_degree: dict[int, list[tuple[float, float]]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            by_degree.setdefault(int(row["degree"]), []).append(
                (float(row["birth"]), float(row["death"])))
    out = {}
    for k, pts in by_degree.items():
        arr = np.array(pts, dtype=float).reshape(len(pts), 2)
        out[k] = DegreePoints(k, arr[:, 0], arr[:, 1])
    return GradedDiagram(out)


def diagram_to_json(d: GradedDiagram, path=None):
    """JSON with per-point provenance (simplices and attaining entries) when known."""
    m = d.m
    pts_out = []
    for k in d.degrees():
        pts = d.by_degree[k]
        for i in range(len(pts)):
            rec = {"degree": k, "birth": float(pts.births[i]),
                   "death": float(pts.deaths[i])}
            bs, ds = d.birth_simplex(k, i), d.death_simplex(k, i)
            if bs is not None:
                rec["birth_simplex"] = list(bs.vertices)
            if ds is not None:
                rec["death_simplex"] = list(ds.vertices)
            if pts.birth_entries is not None and m:
                code = int(pts.birth_entries[i])
                rec["birth_entry"] = [code // m + 1, code % m + 1]
            if pts.death_entries is not None and m:
                code = int(pts.death_entries[i])
                rec["death_entry"] = [code // m + 1, code % m + 1]
            pts_out.append(rec)
    doc = json.dumps({"points": pts_out}, sort_keys=True, indent=1)
    if path is None:
        return doc
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(doc + "\n")
    return None
