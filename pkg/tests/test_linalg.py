import itertools
import random

import pytest

from tannaka_forge.rings import ring_make
from tannaka_forge.linalg import (Matrix, smith, kernel, solve, is_invertible,
                                  inverse, image_span, cokernel_exponents,
                                  howell, span_membership, DimensionMismatch)


def rand_matrix(rng, R, rows, cols):
    return Matrix(R, [[rng.randrange(R.size) for _ in range(cols)]
                      for _ in range(rows)], rows, cols)


def test_smith_identity(Z8):
    sf = smith(Matrix.identity(Z8, 3))
    assert sf.invariants == (0, 0, 0)
    assert sf.D == Matrix.identity(Z8, 3)


def test_smith_single_entry(Z8):
    sf = smith(Matrix.from_rows(Z8, [[2]]))
    assert sf.invariants == (1,)
    assert sf.D.data == [[2]]


def test_smith_spec_example(Z8):
    A = Matrix.from_rows(Z8, [[2, 4], [6, 4]])
    sf = smith(A)
    assert sf.invariants == (1, 3)
    assert sf.D.data[0][0] == 2 and sf.D.data[1][1] == 0
    assert sf.U @ sf.D @ sf.V == A
    # |coker| = |R/p| * |R/p^3| = 2 * 8 = 16, confirmed by enumeration
    count = 0
    span = set()
    for x, y in itertools.product(range(8), repeat=2):
        v = tuple(A.apply([x, y]))
        span.add(v)
    assert 64 // len(span) == 16


def test_smith_random_udv():
    rng = random.Random(42)
    for R in (ring_make(2, 3, 1), ring_make(2, 1, 2), ring_make(2, 2, 2)):
        for _ in range(250):
            A = rand_matrix(rng, R, rng.randint(0, 6), rng.randint(0, 6))
            sf = smith(A)
            assert sf.U @ sf.D @ sf.V == A
            assert is_invertible(sf.U) and is_invertible(sf.V)
            assert list(sf.invariants) == sorted(sf.invariants)
            m = min(A.rows, A.cols)
            for i in range(m):
                for j in range(m):
                    if i != j:
                        assert sf.D.data[i][j] == 0
                # the diagonal is a pure power of p
                a = sf.invariants[i]
                assert sf.D.data[i][i] == R.p_elem(a) or \
                    (a == R.n and sf.D.data[i][i] == 0)


def test_smith_deterministic(Z8):
    A = Matrix.from_rows(Z8, [[2, 4], [6, 4]])
    s1, s2 = smith(A), smith(A)
    assert s1.U == s2.U and s1.V == s2.V and s1.D == s2.D


def test_kernel_spec_example(Z8):
    K = kernel(Matrix.from_rows(Z8, [[2]]))
    assert K.cols == 1 and K.col(0) == [4]


def test_kernel_cokernel_vs_enumeration():
    rng = random.Random(9)
    for R in (ring_make(2, 2, 1), ring_make(2, 1, 2), ring_make(3, 1, 1)):
        assert R.size <= 16
        for _ in range(40):
            rows, cols = rng.randint(1, 3), rng.randint(1, 3)
            A = rand_matrix(rng, R, rows, cols)
            brute = {v for v in itertools.product(range(R.size), repeat=cols)
                     if not any(A.apply(list(v)))}
            K = kernel(A)
            spanned = set()
            for coeffs in itertools.product(range(R.size), repeat=K.cols):
                spanned.add(tuple(K.apply(list(coeffs))) if K.cols
                            else (0,) * cols)
            assert brute == spanned
            # cokernel size from invariants equals the enumeration count
            img = {tuple(A.apply(list(v)))
                   for v in itertools.product(range(R.size), repeat=cols)}
            exps = cokernel_exponents(A)
            size = 1
            for e in exps:
                size *= R.p ** (e * R.f)
            assert size * len(img) == R.size ** rows


def test_solve_iff_in_span():
    rng = random.Random(31)
    for R in (ring_make(2, 2, 1), ring_make(2, 1, 2)):
        for _ in range(40):
            rows, cols = rng.randint(1, 3), rng.randint(1, 3)
            A = rand_matrix(rng, R, rows, cols)
            img = {tuple(A.apply(list(v)))
                   for v in itertools.product(range(R.size), repeat=cols)}
            for b in itertools.product(range(R.size), repeat=rows):
                x = solve(A, list(b))
                assert (x is not None) == (b in img)
                if x is not None:
                    assert tuple(A.apply(x)) == b


def test_solve_identity(Z8):
    assert solve(Matrix.identity(Z8, 3), [1, 2, 3]) == [1, 2, 3]


def test_solve_shape_mismatch(Z8):
    with pytest.raises(DimensionMismatch):
        solve(Matrix.identity(Z8, 2), [1, 2, 3])


def test_is_invertible_unit(Z8):
    assert is_invertible(Matrix.from_rows(Z8, [[3]]))
    assert not is_invertible(Matrix.from_rows(Z8, [[2]]))
    A = Matrix.from_rows(Z8, [[1, 2], [3, 4]])
    if is_invertible(A):
        assert A @ inverse(A) == Matrix.identity(Z8, 2)


def test_image_span_generates(Z4):
    rng = random.Random(5)
    for _ in range(30):
        A = rand_matrix(rng, Z4, 2, 3)
        G = image_span(A)
        brute = {tuple(A.apply(list(v)))
                 for v in itertools.product(range(4), repeat=3)}
        spanned = {tuple(G.apply(list(c)))
                   for c in itertools.product(range(4), repeat=G.cols)} \
            if G.cols else {(0, 0)}
        assert brute == spanned


def test_howell_is_canonical():
    rng = random.Random(77)
    for R in (ring_make(2, 3, 1), ring_make(2, 1, 2), ring_make(2, 2, 2)):
        for _ in range(80):
            w = rng.randint(1, 4)
            gens = [[rng.randrange(R.size) for _ in range(w)]
                    for _ in range(rng.randint(0, 3))]
            h1 = howell(R, gens, w)
            g2 = [list(g) for g in gens]
            rng.shuffle(g2)
            for _ in range(4):
                if len(g2) >= 2:
                    i, j = rng.sample(range(len(g2)), 2)
                    c = rng.randrange(R.size)
                    g2[i] = [R.add(a, R.mul(c, b)) for a, b in zip(g2[i], g2[j])]
                if g2:
                    g2.append([R.mul(R.p_elem(1), a) for a in g2[0]])
            assert howell(R, g2, w) == h1


def test_howell_spans_same_submodule(Z4):
    rng = random.Random(13)
    for _ in range(30):
        w = 3
        gens = [[rng.randrange(4) for _ in range(w)] for _ in range(2)]
        rows = howell(Z4, gens, w)
        def span_of(rws):
            out = set()
            for coeffs in itertools.product(range(4), repeat=len(rws)):
                acc = [0] * w
                for c, r in zip(coeffs, rws):
                    for k in range(w):
                        acc[k] = Z4.add(acc[k], Z4.mul(c, r[k]))
                out.add(tuple(acc))
            return out
        assert span_of(gens) == span_of(rows)


def test_span_membership(Z8):
    gens = [[2, 0], [0, 4]]
    assert span_membership(Z8, gens, [4, 4]) is not None
    assert span_membership(Z8, gens, [1, 0]) is None
    assert span_membership(Z8, [], [0, 0]) == []
    assert span_membership(Z8, [], [1, 0]) is None
