"""Time-series matrices and their sliding-window distance matrices.

A time series is an n x p matrix: rows are observations, columns are
component series.  All distances use the 1-norm; with that choice the
distance matrix of the sliding-window embedding decomposes as a sum over
components, and each component's matrix is a sum of shifted submatrices
of its window-length-one distance matrix.  Sliding-window distances are
computed through that identity.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist


class InvalidWindowError(ValueError):
    """Window length outside [1, n]."""


class InvalidVectorError(ValueError):
    """Combination vector with the wrong length or non-finite entries."""


class TimeSeriesError(ValueError):
    """Malformed time-series input (wrong shape, missing or non-finite values)."""


def validate_time_series(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise TimeSeriesError(f"expected a 2-D array, got shape {X.shape}")
    n, p = X.shape
    if n < 1 or p < 1:
        raise TimeSeriesError(f"need at least one row and one column, got {X.shape}")
    if not np.isfinite(X).all():
        bad = np.argwhere(~np.isfinite(X))[0]
        raise TimeSeriesError(
            f"non-finite value at row {bad[0] + 1}, column {bad[1] + 1}; "
            "missing values are rejected, not imputed")
    return X


@dataclass
class ComponentDistances:
    """Per-component sliding-window distance matrices.

    ``mats[j]`` is the (n-L+1) x (n-L+1) 1-norm distance matrix of the
    length-L windows of component j.
    """

    mats: np.ndarray  # (p, m, m)
    window: int
    n: int

    @property
    def p(self) -> int:
        return self.mats.shape[0]

    @property
    def m(self) -> int:
        return self.mats.shape[1]


def component_distance(X, j: int) -> np.ndarray:
    """Distance matrix |x_kj - x_lj| of component j (1-based), window length one."""
    X = validate_time_series(X)
    if not 1 <= j <= X.shape[1]:
        raise InvalidVectorError(f"component index {j} outside 1..{X.shape[1]}")
    col = X[:, j - 1]
    return np.abs(col[:, None] - col[None, :])


def full_distance(X) -> np.ndarray:
    """Pairwise 1-norm distance matrix of the rows; equals the sum over components."""
    X = validate_time_series(X)
    return cdist(X, X, metric="cityblock")


def sliding_window_distances(X, L: int) -> ComponentDistances:
    """Component distance matrices of the length-L sliding-window embedding.

    Computed as sums of shifted diagonal blocks of the window-length-one
    matrices, which equals the direct 1-norm distance of window vectors.
    """
    X = validate_time_series(X)
    n, p = X.shape
    if not 1 <= L <= n:
        raise InvalidWindowError(f"window length {L} outside [1, {n}]")
    m = n - L + 1
    mats = np.zeros((p, m, m))
    for j in range(p):
        D = np.abs(X[:, j][:, None] - X[:, j][None, :])
        acc = mats[j]
        for q in range(L):
            acc += D[q:q + m, q:q + m]
    return ComponentDistances(mats, L, n)


def window_scan(X, lengths):
    """Yield (L, ComponentDistances) for increasing window lengths.

    Each step extends the previous accumulator by one shifted block and
    crops, so scanning a range costs little more than the largest window.
    """
    X = validate_time_series(X)
    n, p = X.shape
    lengths = sorted(set(int(L) for L in lengths))
    if not lengths:
        return
    if lengths[0] < 1 or lengths[-1] > n:
        raise InvalidWindowError(f"window lengths must lie in [1, {n}]")
    D = np.stack([np.abs(X[:, j][:, None] - X[:, j][None, :]) for j in range(p)])
    acc = D.copy()  # window length 1
    cur = 1
    for L in lengths:
        m = n - L + 1
        while cur < L:
            acc = acc[:, :n - cur, :n - cur] + D[:, cur:cur + (n - cur), cur:cur + (n - cur)]
            cur += 1
        yield L, ComponentDistances(acc[:, :m, :m].copy(), L, n)


def combo_distance(cd: ComponentDistances, v) -> np.ndarray:
    """Distance matrix of the linear-combination series: sum_j |v_j| * mats[j].

    Symmetric with zero diagonal, hence a valid filtration matrix; even in
    v (sign changes do not matter) and positively homogeneous.
    """
    v = np.asarray(v, dtype=float)
    if v.shape != (cd.p,):
        raise InvalidVectorError(f"expected {cd.p} coefficients, got shape {v.shape}")
    if not np.isfinite(v).all():
        raise InvalidVectorError("combination vector must be finite")
    return np.einsum("j,jkl->kl", np.abs(v), cd.mats)


# ---------------------------------------------------------------------------
# CSV ingestion
# ---------------------------------------------------------------------------

def read_time_series_csv(path, has_header: bool = False) -> np.ndarray:
    """Parse a CSV of rows = time points, columns = variables.

    Decimal values with '.' separator; parse errors report the 1-based
    line number.
    """
    rows: list[list[float]] = []
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            if has_header and lineno == 1:
                continue
            fields = line.split(",")
            try:
                rows.append([float(x) for x in fields])
            except ValueError as exc:
                raise TimeSeriesError(f"{path}: line {lineno}: {exc}") from None
            if len(rows) > 1 and len(rows[-1]) != len(rows[0]):
                raise TimeSeriesError(
                    f"{path}: line {lineno}: expected {len(rows[0])} fields, "
                    f"got {len(rows[-1])}")
    if not rows:
        raise TimeSeriesError(f"{path}: no data rows")
    return validate_time_series(np.array(rows, dtype=float))


def write_time_series_csv(X, path, header: list[str] | None = None) -> None:
    """Write a time series as CSV with 17 significant digits and LF endings."""
    X = validate_time_series(X)
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        if header is not None:
            fh.write(",".join(header) + "\n")
        for row in X:
            fh.write(",".join("%.17g" % x for x in row) + "\n")
