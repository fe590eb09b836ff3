from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from thhfq.fp import (Coordinates, FpMatrix, PrimeField, extend_basis, image_complement, kernel,
                      left_kernel, lucas_binomial, rank, rank_and_kernel, rref)

from oracles import binom_mod, brute_rank

PRIMES = st.sampled_from([2, 3, 5, 7])


def small_matrix(p_strategy=PRIMES, max_rows=4, max_cols=4):
    @st.composite
    def build(draw):
        p = draw(p_strategy)
        rows = draw(st.integers(0, max_rows))
        cols = draw(st.integers(1, max_cols))
        entries = draw(st.lists(st.integers(0, p - 1), min_size=rows * cols, max_size=rows * cols))
        return p, np.array(entries, dtype=np.int64).reshape(rows, cols)
    return build()


def test_prime_field_rejects_composites():
    with pytest.raises(ValueError):
        PrimeField(9)
    with pytest.raises(ValueError):
        PrimeField(1)


def test_inverse_and_symmetric_representative():
    F = PrimeField(7)
    assert all(a * F.inv(a) % 7 == 1 for a in F.units())
    assert [F.symmetric(a) for a in range(7)] == [0, 1, 2, 3, -3, -2, -1]
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


@given(st.integers(0, 400), st.integers(0, 400), PRIMES)
def test_lucas_matches_direct_binomial(n, k, p):
    assert lucas_binomial(n, k, p) == binom_mod(n, k, p)


@given(small_matrix())
def test_rank_matches_brute_force_span(data):
    p, m = data
    assert rank(m, p) == brute_rank(m.tolist(), p)


@given(small_matrix())
def test_kernel_is_kernel_of_full_dimension(data):
    p, m = data
    r, vecs = rank_and_kernel(m, p)
    assert r + len(vecs) == m.shape[1]
    for v in vecs:
        assert not ((m @ v) % p).any()
    if vecs:
        assert rank(np.array(vecs), p) == len(vecs)


@given(small_matrix())
def test_left_kernel(data):
    p, m = data
    if m.shape[0] == 0:
        return
    for c in left_kernel(m, p):
        assert not ((c @ m) % p).any()


@given(small_matrix())
def test_rref_is_idempotent_and_preserves_rank(data):
    p, m = data
    red, piv = rref(m, p)
    again, piv2 = rref(red, p)
    assert piv == piv2
    assert np.array_equal(red[: len(piv)], again[: len(piv)])
    assert len(piv) == rank(m, p)


@given(small_matrix())
def test_image_complement_completes_the_span(data):
    p, m = data
    if m.shape[0] == 0:
        return
    comp = image_complement(list(m), m.shape[1], p)
    assert rank(np.vstack([m] + [c.reshape(1, -1) for c in comp]), p) == m.shape[1]


@given(small_matrix())
def test_coordinates_solve_round_trip(data):
    p, m = data
    keep = extend_basis(np.zeros((0, m.shape[1]), dtype=np.int64), m, p) if m.shape[0] else []
    rows = m[keep] if keep else np.zeros((0, m.shape[1]), dtype=np.int64)
    C = Coordinates(rows, p)
    for v in m:
        c = C.solve(v)
        assert c is not None
        assert np.array_equal((c @ rows) % p if len(c) else np.zeros_like(v), v % p)


def test_coordinates_reject_dependent_rows():
    with pytest.raises(ValueError):
        Coordinates(np.array([[1, 2], [2, 4]]), 5)


def test_coordinates_report_vectors_outside_span():
    C = Coordinates(np.array([[1, 0, 0]]), 5)
    assert C.solve([0, 1, 0]) is None


def test_fpmatrix_is_reduced_and_immutable():
    F = PrimeField(5)
    M = FpMatrix.from_rows(F, [[6, -1], [0, 10]])
    assert M.entries.tolist() == [[1, 4], [0, 0]]
    with pytest.raises(ValueError):
        M.entries[0, 0] = 2
    assert (M @ FpMatrix.identity(F, 2)) == M


def test_kernel_of_empty_matrix_is_everything():
    assert kernel(np.zeros((0, 3), dtype=np.int64), 5).shape == (3, 3)
