"""Skeleta of the augmented combinatorial simplex and weights on them.

Vertices are labeled 1..m.  The augmented combinatorial (m-1)-simplex is
the power set of {1..m}, including the empty simplex of dimension -1.  A
weight is a monotone map from simplices to filtration values; a symmetric
matrix whose diagonal is dominated by each row induces a weight by taking
pairwise entry maxima (the Vietoris-Rips rule).

The canonical base order sorts simplices by dimension, then
lexicographically by vertices.  It is a linear extension of the face
order and is used to break ties when a weight is refined to a total
order.
"""
from __future__ import annotations

import itertools
import math
import threading
from dataclasses import dataclass, field

import numpy as np

# Materializing more simplices than this is almost certainly a mistake
# (the full power set is only tractable for small m; degree-k pipelines
# should enumerate the (k+1)-skeleton instead).
MAX_SKELETON_SIZE = 4_194_304


class InvalidSpecError(ValueError):
    """Skeleton specification out of range or too large to materialize."""


class InvalidMatrixError(ValueError):
    """Matrix is not symmetric or has a row dominated by its diagonal."""


class InvalidWeightError(ValueError):
    """Weight violates monotonicity with respect to the face order."""


class IncompleteSkeletonError(ValueError):
    """A simplex is present without one of its codimension-1 faces."""


@dataclass(frozen=True)
class Simplex:
    """A subset of {1..m} with strictly increasing vertices; () is the empty simplex."""

    vertices: tuple[int, ...]

    def __post_init__(self):
        v = self.vertices
        if not isinstance(v, tuple):
            object.__setattr__(self, "vertices", tuple(v))
            v = self.vertices
        if any(not isinstance(x, int) or x < 1 for x in v):
            raise ValueError(f"vertices must be positive integers, got {v}")
        if any(a >= b for a, b in zip(v, v[1:])):
            raise ValueError(f"vertices must be strictly increasing, got {v}")

    @classmethod
    def of(cls, *vertices: int) -> "Simplex":
        return cls(tuple(sorted(set(vertices))))

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def __contains__(self, vertex: int) -> bool:
        return vertex in self.vertices

    def is_face_of(self, other: "Simplex") -> bool:
        return set(self.vertices) <= set(other.vertices)

    def facets(self) -> list["Simplex"]:
        """Codimension-1 faces; a vertex has the empty simplex as its only facet."""
        if self.dim < 0:
            return []
        return [Simplex(self.vertices[:i] + self.vertices[i + 1:])
                for i in range(len(self.vertices))]

    def __repr__(self) -> str:
        return "Simplex" + repr(self.vertices)


EMPTY = Simplex(())


@dataclass(frozen=True)
class SkeletonSpec:
    """Which skeleton of the augmented combinatorial (m-1)-simplex to enumerate."""

    m: int
    max_dim: int
    include_empty: bool = True

    def __post_init__(self):
        if self.m < 1:
            raise InvalidSpecError(f"need m >= 1, got {self.m}")
        if not -1 <= self.max_dim <= self.m - 1:
            raise InvalidSpecError(
                f"max_dim must lie in [-1, {self.m - 1}], got {self.max_dim}")
        if self.max_dim == -1 and not self.include_empty:
            raise InvalidSpecError("empty skeleton: max_dim == -1 without the empty simplex")

    @property
    def size(self) -> int:
        lo = -1 if self.include_empty else 0
        return sum(math.comb(self.m, j + 1) for j in range(lo, self.max_dim + 1))


def enumerate_skeleton(spec: SkeletonSpec) -> list[Simplex]:
    """All simplices of the spec in canonical order (dimension, then lexicographic).

    The empty simplex comes first when included.
    """
    if spec.size > MAX_SKELETON_SIZE:
        raise InvalidSpecError(
            f"skeleton has {spec.size} simplices (limit {MAX_SKELETON_SIZE}); "
            "enumerate a lower-dimensional skeleton instead")
    out: list[Simplex] = []
    if spec.include_empty:
        out.append(EMPTY)
    for d in range(0, spec.max_dim + 1):
        out.extend(Simplex(c) for c in itertools.combinations(range(1, spec.m + 1), d + 1))
    return out


@dataclass(frozen=True)
class BaseOrder:
    """A total order on a set of simplices, stored as the ordered tuple itself."""

    simplices: tuple[Simplex, ...]
    rank: dict[Simplex, int] = field(compare=False, repr=False, default=None)

    def __post_init__(self):
        if self.rank is None:
            object.__setattr__(
                self, "rank", {s: i for i, s in enumerate(self.simplices)})
        if len(self.rank) != len(self.simplices):
            raise ValueError("duplicate simplices in order")

    @classmethod
    def canonical(cls, spec: SkeletonSpec) -> "BaseOrder":
        return cls(tuple(enumerate_skeleton(spec)))

    @classmethod
    def from_simplices(cls, simplices) -> "BaseOrder":
        return cls(tuple(simplices))

    def __len__(self) -> int:
        return len(self.simplices)

    def __iter__(self):
        return iter(self.simplices)

    def is_linear_extension(self) -> bool:
        """True iff every facet present in the order precedes its cofacet."""
        for s in self.simplices:
            r = self.rank[s]
            for f in s.facets():
                if f in self.rank and self.rank[f] > r:
                    return False
        return True


@dataclass
class Weight:
    """A monotone map simplex -> filtration value.

    ``entries`` optionally records, per simplex, the 1-based matrix entry
    (i, j) with i <= j that attains the value when the weight was induced
    by a matrix.  Gradients of matrix-induced objectives are assembled
    from these entries.
    """

    values: dict[Simplex, float]
    entries: dict[Simplex, tuple[int, int]] | None = None

    def __getitem__(self, s: Simplex) -> float:
        return self.values[s]

    def __contains__(self, s: Simplex) -> bool:
        return s in self.values

    def __len__(self) -> int:
        return len(self.values)

    def simplices(self) -> list[Simplex]:
        return list(self.values)

    def as_array(self, order: BaseOrder) -> np.ndarray:
        return np.array([self.values[s] for s in order.simplices], dtype=float)

    def scaled(self, factor: float) -> "Weight":
        return Weight({s: factor * v for s, v in self.values.items()},
                      dict(self.entries) if self.entries is not None else None)

    def check_monotone(self) -> None:
        """Raise InvalidWeightError if some facet (present in the map) outweighs its cofacet."""
        for s, v in self.values.items():
            for f in s.facets():
                fv = self.values.get(f)
                if fv is not None and fv > v:
                    raise InvalidWeightError(
                        f"w{f.vertices}={fv} > w{s.vertices}={v}")

    def is_monotone(self) -> bool:
        try:
            self.check_monotone()
        except InvalidWeightError:
            return False
        return True


@dataclass(frozen=True)
class FiltrationMatrix:
    """Symmetric m x m matrix with M[i,i] <= M[i,j]; induces a Vietoris-Rips weight."""

    entries: np.ndarray

    def __post_init__(self):
        M = np.asarray(self.entries, dtype=float)
        object.__setattr__(self, "entries", M)
        validate_filtration_matrix(M)

    @property
    def m(self) -> int:
        return self.entries.shape[0]


def validate_filtration_matrix(M: np.ndarray) -> None:
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InvalidMatrixError(f"expected a square matrix, got shape {M.shape}")
    if not np.isfinite(M).all():
        raise InvalidMatrixError("matrix entries must be finite")
    if not np.array_equal(M, M.T):
        raise InvalidMatrixError("matrix is not symmetric")
    if (np.diag(M)[:, None] > M).any():
        raise InvalidMatrixError("matrix has a diagonal entry exceeding a row entry")


def _argmax_entry(M: np.ndarray, verts0: tuple[int, ...]) -> tuple[float, int, int]:
    """Max of M over verts0 x verts0 and the lexicographically smallest
    attaining entry (i, j) with i <= j.  Vertices are 0-based here."""
    best = -math.inf
    bi = bj = verts0[0]
    for a, i in enumerate(verts0):
        for j in verts0[a:]:
            v = M[i, j]
            if v > best:
                best, bi, bj = v, i, j
    return best, bi, bj


def weight_from_matrix(M, skeleton: list[Simplex]) -> Weight:
    """Vietoris-Rips weight of a filtration matrix over the given simplices.

    Nonempty simplices get the maximum entry over their vertex pairs
    (diagonal included), the empty simplex gets the minimum diagonal
    entry.  The attaining entry is recorded per simplex with ties broken
    lexicographically on (i, j).
    """
    if isinstance(M, FiltrationMatrix):
        M = M.entries
    M = np.asarray(M, dtype=float)
    validate_filtration_matrix(M)
    m = M.shape[0]
    values: dict[Simplex, float] = {}
    entries: dict[Simplex, tuple[int, int]] = {}
    diag = np.diag(M)
    for s in skeleton:
        if s.dim < 0:
            i = int(np.argmin(diag))
            values[s] = float(diag[i])
            entries[s] = (i + 1, i + 1)
            continue
        verts0 = tuple(v - 1 for v in s.vertices)
        if max(verts0) >= m:
            raise InvalidSpecError(f"simplex {s} has a vertex beyond m={m}")
        val, i, j = _argmax_entry(M, verts0)
        values[s] = float(val)
        entries[s] = (i + 1, j + 1)
    return Weight(values, entries)


def refine_preorder(w: Weight, base: BaseOrder) -> BaseOrder:
    """Refine the preorder induced by ``w`` to a total order, breaking ties by ``base``.

    The result is again a linear extension of the face order (ties among
    equal-weight simplices fall back to the base order, which is one).
    """
    if not base.is_linear_extension():
        raise ValueError("base order is not a linear extension of the face order")
    w.check_monotone()
    ordered = sorted(base.simplices, key=lambda s: (w[s], base.rank[s]))
    return BaseOrder(tuple(ordered))


# ---------------------------------------------------------------------------
# Array-level complexes for the persistence pipeline
# ---------------------------------------------------------------------------

class LevelComplex:
    """A face-closed set of simplices stored level by level as index arrays.

    Level ``l`` holds the simplices of dimension ``l - 1`` (so level 0 is
    the empty simplex).  ``verts[l]`` is an ``(n_l, l)`` array of 0-based
    vertex labels in lexicographic row order; ``faces[l]`` maps each
    simplex to the indices of its codimension-1 faces within level
    ``l - 1``.  This is the layout the reduction kernel and the weight
    recursions operate on; `Simplex` objects only appear at the API
    boundary.
    """

    def __init__(self, m: int, verts: list[np.ndarray], include_empty: bool):
        self.m = m
        self.include_empty = include_empty
        self.verts = verts
        self.n_levels = len(verts)
        self.faces: list[np.ndarray | None] = [None] * self.n_levels
        for lvl in range(2, self.n_levels):
            prev = {tuple(row): i for i, row in enumerate(verts[lvl - 1])}
            cur = verts[lvl]
            f = np.empty((cur.shape[0], lvl), dtype=np.int64)
            for i, row in enumerate(cur):
                t = tuple(row)
                for drop in range(lvl):
                    face = t[:drop] + t[drop + 1:]
                    try:
                        f[i, drop] = prev[face]
                    except KeyError:
                        raise IncompleteSkeletonError(
                            f"missing face {tuple(x + 1 for x in face)} of "
                            f"{tuple(x + 1 for x in t)}") from None
            self.faces[lvl] = f
        if self.n_levels >= 2 and include_empty:
            self.faces[1] = np.zeros((verts[1].shape[0], 1), dtype=np.int64)
        # cumulative level offsets give a canonical global index per simplex
        sizes = [v.shape[0] for v in verts]
        self.offsets = np.concatenate([[0], np.cumsum(sizes)])
        self.size = int(self.offsets[-1])

    @property
    def max_dim(self) -> int:
        return self.n_levels - 2

    @classmethod
    def full(cls, m: int, max_dim: int, include_empty: bool = True) -> "LevelComplex":
        """All subsets of {1..m} up to ``max_dim``; cached, treat as read-only."""
        return _full_level_complex(m, max_dim, include_empty)

    @classmethod
    def from_simplices(cls, simplices: list[Simplex]) -> "LevelComplex":
        if not simplices:
            raise InvalidSpecError("empty complex")
        m = max((max(s.vertices) for s in simplices if s.dim >= 0), default=0)
        if m == 0:
            raise InvalidSpecError("complex has no vertices")
        max_dim = max(s.dim for s in simplices)
        include_empty = any(s.dim < 0 for s in simplices)
        by_dim: list[list[tuple[int, ...]]] = [[] for _ in range(max_dim + 2)]
        for s in simplices:
            by_dim[s.dim + 1].append(tuple(v - 1 for v in s.vertices))
        verts = [np.array(sorted(rows), dtype=np.int64).reshape(len(rows), d)
                 for d, rows in enumerate(by_dim)]
        if len({x for rows in by_dim for x in rows}) != sum(len(r) for r in by_dim):
            raise InvalidSpecError("duplicate simplices")
        return cls(m, verts, include_empty)

    def simplex(self, level: int, index: int) -> Simplex:
        return Simplex(tuple(int(v) + 1 for v in self.verts[level][index]))

    def simplices(self) -> list[Simplex]:
        """All simplices in canonical order (matches ``enumerate_skeleton`` for full complexes)."""
        out = []
        for lvl in range(0 if self.include_empty else 1, self.n_levels):
            out.extend(Simplex(tuple(int(v) + 1 for v in row)) for row in self.verts[lvl])
        return out

    def base_order(self) -> BaseOrder:
        return BaseOrder(tuple(self.simplices()))

    def global_index(self, level: int, index) -> np.ndarray:
        """Canonical index of (level, index) pairs within ``simplices()`` order."""
        base = self.offsets[level] - (0 if self.include_empty else self.offsets[1])
        return base + np.asarray(index)

    def matrix_weights(self, M: np.ndarray, validate: bool = True):
        """Per-level weight values and attaining entry codes for a filtration matrix.

        Returns ``(levels, entry_codes)`` where ``levels[l]`` is the array
        of weight values of level-``l`` simplices and ``entry_codes[l]``
        holds ``i * m + j`` (0-based, i <= j) for the lexicographically
        smallest attaining entry.
        """
        M = np.asarray(M, dtype=float)
        if validate:
            validate_filtration_matrix(M)
        if M.shape[0] != self.m:
            raise InvalidMatrixError(
                f"matrix is {M.shape[0]}x{M.shape[0]} but complex has m={self.m}")
        m = self.m
        diag = np.diag(M)
        big = np.iinfo(np.int64).max
        w: list[np.ndarray] = []
        codes: list[np.ndarray] = []
        for lvl in range(self.n_levels):
            v = self.verts[lvl]
            if lvl == 0:
                i = int(np.argmin(diag)) if v.shape[0] else 0
                w.append(np.full(v.shape[0], diag[i] if v.shape[0] else 0.0))
                codes.append(np.full(v.shape[0], i * m + i, dtype=np.int64))
            elif lvl == 1:
                i = v[:, 0]
                w.append(diag[i])
                codes.append(i * m + i)
            elif lvl == 2:
                i, j = v[:, 0], v[:, 1]
                wij = M[i, j]
                # the diagonal entry (i, i) is lexicographically smaller and
                # attains the max exactly when M[i,i] == M[i,j]
                codes.append(np.where(diag[i] == wij, i * m + i, i * m + j))
                w.append(wij)
            else:
                fv = w[lvl - 1][self.faces[lvl]]
                top = fv.max(axis=1)
                cand = np.where(fv == top[:, None], codes[lvl - 1][self.faces[lvl]], big)
                codes.append(cand.min(axis=1))
                w.append(top)
        return w, codes

    def vector_weights(self, values: np.ndarray) -> list[np.ndarray]:
        """Split a weight vector in canonical simplex order into per-level arrays."""
        values = np.asarray(values, dtype=float)
        if values.shape != (self.size,):
            raise InvalidWeightError(f"expected {self.size} values, got {values.shape}")
        return [values[self.offsets[lvl]:self.offsets[lvl + 1]]
                for lvl in range(self.n_levels)]


_full_cache: dict[tuple[int, int, bool], LevelComplex] = {}
_full_cache_lock = threading.Lock()


def _full_level_complex(m: int, max_dim: int, include_empty: bool) -> LevelComplex:
    spec = SkeletonSpec(m, max_dim, include_empty)
    if spec.size > MAX_SKELETON_SIZE:
        raise InvalidSpecError(
            f"skeleton has {spec.size} simplices (limit {MAX_SKELETON_SIZE})")
    key = (m, max_dim, include_empty)
    with _full_cache_lock:
        hit = _full_cache.get(key)
    if hit is not None:
        return hit
    verts = [np.zeros((1 if include_empty else 0, 0), dtype=np.int64)]
    for d in range(0, max_dim + 1):
        combos = list(itertools.combinations(range(m), d + 1))
        verts.append(np.array(combos, dtype=np.int64).reshape(len(combos), d + 1))
    cx = LevelComplex(m, verts, include_empty)
    with _full_cache_lock:
        _full_cache[key] = cx
    return cx
