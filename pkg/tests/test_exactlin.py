"""Exact linear algebra: examples frozen from independent oracles,
plus rank/nullity and transform properties on random matrices."""

import itertools
import random

import pytest

from quiverloc.errors import UnsupportedFieldError
from quiverloc.exactlin import (
    FieldSpec,
    Mat,
    column_space_basis,
    hstack,
    inverse,
    kernel_basis,
    kron,
    quotient_maps,
    rank,
    rref,
    solve,
    subspace_bases,
    vstack,
)

F2 = FieldSpec.prime(2)
F3 = FieldSpec.prime(3)
F5 = FieldSpec.prime(5)
F7 = FieldSpec.prime(7)
QQ = FieldSpec.rationals()


def test_field_validation():
    with pytest.raises(ValueError):
        FieldSpec.prime(4)
    with pytest.raises(ValueError):
        FieldSpec.prime(1)
    with pytest.raises(ValueError):
        FieldSpec.prime(2**31 + 11)
    with pytest.raises(ValueError):
        FieldSpec("prime-field")
    with pytest.raises(ValueError):
        FieldSpec("rationals", 5)
    assert FieldSpec.prime(2147483647).p == 2147483647  # largest 31-bit prime


def test_rationals_not_enumerable():
    with pytest.raises(UnsupportedFieldError):
        list(QQ.elements())


def test_rref_identity_f5():
    m = Mat.identity(F5, 2)
    r = rref(m)
    assert r.rank == 2
    assert r.reduced == m


def test_rref_zero():
    m = Mat.zeros(F5, 3, 2)
    assert rref(m).rank == 0


def brute_row_space_dim(m: Mat) -> int:
    """Count distinct row combinations c1 r1 + c2 r2 over F_p; the row
    space has p^rank elements."""
    p = m.field.p
    rows = m.row_list()
    vecs = set()
    for coeffs in itertools.product(range(p), repeat=m.rows):
        v = tuple(sum(c * r[j] for c, r in zip(coeffs, rows)) % p
                  for j in range(m.cols))
        vecs.add(v)
    d = 0
    while p ** d < len(vecs):
        d += 1
    assert p ** d == len(vecs)
    return d


def test_rref_rank_one_f7():
    m = Mat.from_rows(F7, [[2, 4], [1, 2]])
    # oracle: row-combination enumeration over F_7
    assert brute_row_space_dim(m) == 1
    r = rref(m)
    assert r.rank == 1


def test_rref_transform_property():
    rng = random.Random(7)
    for field in (F2, F5, QQ):
        for _ in range(25):
            nr, nc = rng.randint(1, 5), rng.randint(1, 5)
            if field.is_prime_field:
                ents = [rng.randrange(field.p) for _ in range(nr * nc)]
            else:
                ents = [rng.randint(-4, 4) for _ in range(nr * nc)]
            m = Mat.from_rows(field, [ents[i * nc:(i + 1) * nc]
                                      for i in range(nr)])
            r = rref(m)
            assert r.transform.mul(m) == r.reduced
            # the transform is invertible: its own rref has full rank
            assert rref(r.transform).rank == nr
            # rank-nullity
            assert r.rank + kernel_basis(m).cols == nc


def test_kernel_identity():
    assert kernel_basis(Mat.identity(F3, 3)).cols == 0


def test_kernel_zero_map():
    k = kernel_basis(Mat.zeros(F3, 2, 3))
    assert k.cols == 3
    assert rank(k) == 3


def test_kernel_f2_single_vector():
    m = Mat.from_rows(F2, [[1, 1]])
    # oracle: both nonzero vectors of F_2^2
    null = [v for v in ((0, 1), (1, 0), (1, 1))
            if (m.entry(0, 0) * v[0] + m.entry(0, 1) * v[1]) % 2 == 0]
    assert null == [(1, 1)]
    k = kernel_basis(m)
    assert k.cols == 1
    assert tuple(k.entries) == (1, 1)


def test_kernel_exhaustive_agreement():
    # over F_p with p * rows * cols <= 1e4, compare with brute enumeration
    rng = random.Random(11)
    for field in (F2, F3):
        for _ in range(20):
            nr, nc = rng.randint(1, 3), rng.randint(1, 4)
            m = Mat.from_rows(field, [[rng.randrange(field.p)
                                       for _ in range(nc)]
                                      for _ in range(nr)])
            null_count = 0
            for v in itertools.product(range(field.p), repeat=nc):
                col = Mat(nc, 1, field, tuple(v))
                if m.mul(col).is_zero():
                    null_count += 1
            assert field.p ** kernel_basis(m).cols == null_count


def test_solve_identity():
    b = Mat.column(F5, [3, 1])
    assert solve(Mat.identity(F5, 2), b) == b


def test_solve_zero_inconsistent():
    assert solve(Mat.zeros(F5, 2, 2), Mat.column(F5, [1, 0])) is None


def test_solve_f3_underdetermined():
    m = Mat.from_rows(F3, [[1, 2], [0, 0]])
    b = Mat.column(F3, [1, 0])
    # oracle: exhaustive search over F_3^2
    solutions = [v for v in itertools.product(range(3), repeat=2)
                 if ((v[0] + 2 * v[1]) % 3, 0) == (1, 0)]
    assert solutions  # consistent
    x = solve(m, b)
    assert x is not None
    assert m.mul(x) == b
    assert tuple(x.entries) in solutions


def test_solve_dimension_mismatch():
    with pytest.raises(ValueError):
        solve(Mat.identity(F5, 2), Mat.column(F5, [1, 2, 3]))


def test_solve_rationals():
    m = Mat.from_rows(QQ, [[2, 1], [1, 1]])
    b = Mat.column(QQ, [1, 0])
    x = solve(m, b)
    assert x is not None and m.mul(x) == b


def test_inverse():
    m = Mat.from_rows(F5, [[2, 1], [1, 1]])
    mi = inverse(m)
    assert mi is not None
    assert m.mul(mi) == Mat.identity(F5, 2)
    assert inverse(Mat.from_rows(F5, [[1, 2], [2, 4]])) is None


def test_stack_and_kron():
    a = Mat.from_rows(F3, [[1, 2]])
    b = Mat.from_rows(F3, [[2, 0]])
    assert vstack([a, b]).shape == (2, 2)
    assert hstack([a.transpose(), b.transpose()]).shape == (2, 2)
    k = kron(Mat.identity(F3, 2), a)
    assert k.shape == (2, 4)
    assert k.entry(0, 1) == 2 and k.entry(1, 3) == 2 and k.entry(0, 3) == 0


def test_quotient_maps():
    basis = Mat.from_rows(F5, [[1], [2]])
    qm = quotient_maps(basis)
    assert qm.projection.mul(basis).is_zero()
    assert qm.projection.mul(qm.lift) == Mat.identity(F5, 1)


def test_column_space_basis():
    m = Mat.from_rows(F5, [[1, 2, 0], [2, 4, 1]])
    b = column_space_basis(m)
    assert b.cols == 2 and rank(b) == 2


def test_subspace_enumeration_counts():
    # F_2^3 has 1 + 7 + 7 + 1 = 16 subspaces, F_3^2 has 1 + 4 + 1 = 6
    assert len(list(subspace_bases(F2, 3))) == 16
    assert len(list(subspace_bases(F3, 2))) == 6
    seen = set()
    for b in subspace_bases(F2, 3):
        assert rank(b) == b.cols
        # canonical RREF bases are pairwise distinct
        key = b.entries
        assert key not in seen or b.cols == 0
        seen.add(key)


def test_prime_field_coercion():
    assert F5.coerce(-1) == 4
    assert F5.coerce(7) == 2
    from fractions import Fraction
    assert F5.coerce(Fraction(1, 2)) == 3  # 2 * 3 = 6 = 1 mod 5
