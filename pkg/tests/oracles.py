"""Independent reference computations used only by the tests.

Nothing here imports the package: the point is to recompute numbers by a
different route (generating functions, brute force enumeration, plain
modular arithmetic) and compare.
"""

from __future__ import annotations

import itertools
from math import comb


def series_product(a: list[int], b: list[int], D: int) -> list[int]:
    out = [0] * (D + 1)
    for i, x in enumerate(a[: D + 1]):
        if x:
            for j, y in enumerate(b[: D + 1 - i]):
                out[i + j] += x * y
    return out


def factor_series(kind: str, degree: int, D: int, height: int | None = None) -> list[int]:
    """Poincaré series of one free factor: exterior, polynomial, divided power or truncated."""
    out = [0] * (D + 1)
    if kind == "exterior":
        top = 1
    elif kind == "truncated":
        top = height - 1
    else:  # polynomial and divided power have the same additive structure
        top = D // degree if degree else 0
    for e in range(top + 1):
        if e * degree <= D:
            out[e * degree] += 1
    return out


def free_series(factors: list[tuple], D: int) -> list[int]:
    out = [1] + [0] * D
    for f in factors:
        out = series_product(out, factor_series(f[0], f[1], D, f[2] if len(f) > 2 else None), D)
    return out


def order_mod(q: int, p: int) -> int:
    r, x = 1, q % p
    while x != 1:
        x = x * q % p
        r += 1
    return r


def p_valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def case_of(q: int, p: int) -> tuple[int, int, int]:
    r = order_mod(q, p)
    v = p_valuation(q ** r - 1, p)
    if r == p - 1:
        case = 1 if v == 1 else 2
    else:
        case = 3 if v > 1 else 4
    return r, v, case


def brute_rank(rows: list[list[int]], p: int) -> int:
    """log_p of the size of the row space, by enumerating all combinations."""
    if not rows:
        return 0
    n = len(rows[0])
    span = set()
    for coeffs in itertools.product(range(p), repeat=len(rows)):
        v = tuple(sum(c * r[j] for c, r in zip(coeffs, rows)) % p for j in range(n))
        span.add(v)
    size, k = len(span), 0
    while p ** k < size:
        k += 1
    return k


def binom_mod(n: int, k: int, p: int) -> int:
    return comb(n, k) % p if 0 <= k <= n else 0
