"""Arithmetic and dense linear algebra over a prime field F_p.

Matrices are numpy ``int64`` arrays with entries kept in ``[0, p)``.  Row
reduction is deterministic (first nonzero entry in a column is the pivot), so
every basis derived from it is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "PrimeField",
    "FpMatrix",
    "lucas_binomial",
    "rref",
    "rank",
    "rank_and_kernel",
    "kernel",
    "left_kernel",
    "image_complement",
    "extend_basis",
    "Coordinates",
    "vstack",
]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self) -> None:
        if not isinstance(self.p, (int, np.integer)) or not _is_prime(int(self.p)):
            raise ValueError(f"{self.p!r} is not a prime")
        if self.p >= 2**31:
            raise ValueError("p must be below 2**31 for int64 arithmetic")

    def reduce(self, a: int) -> int:
        return int(a) % self.p

    def inv(self, a: int) -> int:
        a = int(a) % self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in F_p")
        return pow(a, -1, self.p)

    def neg(self, a: int) -> int:
        return (-int(a)) % self.p

    def units(self) -> list[int]:
        return list(range(1, self.p))

    def symmetric(self, a: int) -> int:
        """Representative of ``a`` in ``(-p/2, p/2]``, for display."""
        a %= self.p
        return a - self.p if a > self.p // 2 else a


def _p(field_or_p: PrimeField | int) -> int:
    return field_or_p.p if isinstance(field_or_p, PrimeField) else int(field_or_p)


def lucas_binomial(n: int, k: int, field: PrimeField | int) -> int:
    """C(n, k) mod p as the product of digitwise binomials (Lucas)."""
    p = _p(field)
    if k < 0 or n < 0 or k > n:
        return 0
    out = 1
    while n or k:
        a, b = n % p, k % p
        if b > a:
            return 0
        out = out * _small_binomial(a, b) % p
        n //= p
        k //= p
    return out % p


def _small_binomial(a: int, b: int) -> int:
    num = 1
    for i in range(b):
        num = num * (a - i) // (i + 1)
    return num


@dataclass(frozen=True)
class FpMatrix:
    """Dense row-major matrix over F_p."""

    field: PrimeField
    rows: int
    cols: int
    entries: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        arr = np.asarray(self.entries, dtype=np.int64).reshape(self.rows, self.cols) % self.field.p
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @classmethod
    def from_rows(cls, field: PrimeField, rows: Sequence[Sequence[int]], cols: int | None = None) -> "FpMatrix":
        arr = np.array(rows, dtype=np.int64)
        if arr.size == 0:
            ncols = cols if cols is not None else 0
            arr = np.zeros((len(rows), ncols), dtype=np.int64)
        return cls(field, arr.shape[0], arr.shape[1], arr)

    @classmethod
    def zeros(cls, field: PrimeField, rows: int, cols: int) -> "FpMatrix":
        return cls(field, rows, cols, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field: PrimeField, n: int) -> "FpMatrix":
        return cls(field, n, n, np.eye(n, dtype=np.int64))

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        return FpMatrix(self.field, self.rows, other.cols, _matmul(self.entries, other.entries, self.field.p))

    def transpose(self) -> "FpMatrix":
        return FpMatrix(self.field, self.cols, self.rows, self.entries.T)

    def apply(self, v: Sequence[int]) -> np.ndarray:
        return _matmul(self.entries, np.asarray(v, dtype=np.int64).reshape(-1, 1), self.field.p).ravel()

    def is_zero(self) -> bool:
        return not self.entries.any()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return (self.field == other.field and self.entries.shape == other.entries.shape
                and bool((self.entries == other.entries).all()))

    def __hash__(self) -> int:
        return hash((self.field, self.rows, self.cols, self.entries.tobytes()))


def _matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    # entries < 2^31, so one product fits in int64 but a long dot product may not;
    # split the inner dimension to stay safe.
    if a.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    chunk = max(1, (2**62) // max(1, (p - 1) ** 2) - 1)
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for start in range(0, a.shape[1], chunk):
        out = (out + a[:, start:start + chunk] @ b[start:start + chunk]) % p
    return out


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Product of two integer arrays reduced mod p."""
    return _matmul(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64), p)


def _as_array(m: FpMatrix | np.ndarray, p: int | None) -> tuple[np.ndarray, int]:
    if isinstance(m, FpMatrix):
        return m.entries.copy(), m.field.p
    if p is None:
        raise ValueError("p required for raw arrays")
    return np.array(m, dtype=np.int64) % p, p


def rref(m: FpMatrix | np.ndarray, p: int | None = None) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form; returns the nonzero rows and the pivot columns."""
    a, p = _as_array(m, p)
    if a.ndim != 2:
        raise ValueError("expected a 2d array")
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), -1, p)
        if inv != 1:
            a[r, c:] = a[r, c:] * inv % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit, c:] = (a[hit, c:] - np.outer(col[hit], a[r, c:])) % p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(m: FpMatrix | np.ndarray, p: int | None = None) -> int:
    arr, p = _as_array(m, p)
    if arr.size == 0:
        return 0
    return len(rref(arr, p)[1])


def _kernel_from_rref(red: np.ndarray, pivots: list[int], ncols: int, p: int) -> list[np.ndarray]:
    pivset = set(pivots)
    piv = np.array(pivots, dtype=np.int64)
    out = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = np.zeros(ncols, dtype=np.int64)
        v[f] = 1
        if piv.size:
            v[piv] = (-red[:, f]) % p
        out.append(v)
    return out


def rank_and_kernel(m: FpMatrix | np.ndarray, p: int | None = None) -> tuple[int, list[np.ndarray]]:
    """Rank and a kernel basis (one vector per non-pivot column, in column order)."""
    arr, p = _as_array(m, p)
    ncols = arr.shape[1]
    if arr.shape[0] == 0:
        return 0, [np.eye(ncols, dtype=np.int64)[i] for i in range(ncols)]
    red, piv = rref(arr, p)
    return len(piv), _kernel_from_rref(red, piv, ncols, p)


def kernel(m: np.ndarray, p: int) -> np.ndarray:
    """Kernel basis as the rows of a 2d array."""
    arr = np.asarray(m, dtype=np.int64)
    _, vecs = rank_and_kernel(arr, p)
    if not vecs:
        return np.zeros((0, arr.shape[1]), dtype=np.int64)
    return np.array(vecs, dtype=np.int64)


def left_kernel(m: np.ndarray, p: int) -> np.ndarray:
    """Rows c with c @ m == 0."""
    arr = np.asarray(m, dtype=np.int64)
    return kernel(arr.T.copy(), p) if arr.shape[0] else np.zeros((0, 0), dtype=np.int64)


def image_complement(sub: Iterable[Sequence[int]], ambient_dim: int, p: int | PrimeField) -> list[np.ndarray]:
    """Standard basis vectors completing span(sub) to the ambient space."""
    p = _p(p)
    rows = [np.asarray(v, dtype=np.int64) for v in sub]
    for v in rows:
        if v.shape != (ambient_dim,):
            raise ValueError("vector length differs from ambient_dim")
    if not rows:
        return [np.eye(ambient_dim, dtype=np.int64)[i] for i in range(ambient_dim)]
    _, piv = rref(np.array(rows), p)
    pivset = set(piv)
    eye = np.eye(ambient_dim, dtype=np.int64)
    return [eye[i] for i in range(ambient_dim) if i not in pivset]


def extend_basis(sub: np.ndarray, candidates: np.ndarray, p: int) -> list[int]:
    """Indices of ``candidates`` rows that extend span(sub), chosen greedily in order."""
    n = candidates.shape[1] if candidates.ndim == 2 else 0
    cur = np.asarray(sub, dtype=np.int64).reshape(-1, n) if n else np.zeros((0, 0), dtype=np.int64)
    red, piv = rref(cur, p) if cur.size else (np.zeros((0, n), dtype=np.int64), [])
    chosen = []
    for i, v in enumerate(candidates):
        w = _reduce_against(v, red, piv, p)
        if w.any():
            chosen.append(i)
            red, piv = rref(np.vstack([red, w]), p)
    return chosen


def _reduce_against(v: np.ndarray, red: np.ndarray, piv: list[int], p: int) -> np.ndarray:
    w = np.array(v, dtype=np.int64) % p
    for j, c in enumerate(piv):
        if w[c]:
            w = (w - w[c] * red[j]) % p
    return w


def vstack(blocks: Sequence[np.ndarray], ncols: int) -> np.ndarray:
    parts = [np.asarray(b, dtype=np.int64).reshape(-1, ncols) for b in blocks]
    return np.vstack(parts) if parts else np.zeros((0, ncols), dtype=np.int64)


class Coordinates:
    """Express vectors in terms of a fixed list of independent rows.

    The rows are row-reduced once while tracking the transformation, so each
    query costs one pass over the pivots.
    """

    def __init__(self, rows: np.ndarray, p: int):
        rows = np.asarray(rows, dtype=np.int64) % p
        self.p = p
        self.k, self.n = rows.shape
        aug = np.hstack([rows, np.eye(self.k, dtype=np.int64)])
        red, piv = rref(aug, p) if self.k else (np.zeros((0, self.n + self.k), dtype=np.int64), [])
        if any(c >= self.n for c in piv):
            raise ValueError("rows are linearly dependent")
        self.red = red[:, : self.n]
        self.transform = red[:, self.n:]
        self.pivots = piv

    def solve(self, v: Sequence[int]) -> np.ndarray | None:
        """Coefficients c with c @ rows == v, or None if v is not in the span."""
        w = np.array(v, dtype=np.int64) % self.p
        if self.k == 0:
            return np.zeros(0, dtype=np.int64) if not w.any() else None
        c = w[self.pivots].copy()
        if ((w - _matmul(c.reshape(1, -1), self.red, self.p).ravel()) % self.p).any():
            return None
        return _matmul(c.reshape(1, -1), self.transform, self.p).ravel()
