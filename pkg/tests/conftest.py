"""Shared fixtures and independent brute-force oracles.

The oracles here deliberately avoid the library's linear-algebra paths:
they enumerate raw integer matrices mod p and check defining equations
directly, so they can vouch for the code under test.
"""

from __future__ import annotations

import itertools
import random

import pytest

from quiverloc.exactlin import FieldSpec, Mat
from quiverloc.quiverrep import Quiver, Rep, make_rep, projective_rep, simple_rep

F2 = FieldSpec.prime(2)
F3 = FieldSpec.prime(3)
F5 = FieldSpec.prime(5)
QQ = FieldSpec.rationals()

A2 = Quiver(2, ((0, 1),), ("a",))
A3 = Quiver(3, ((0, 1), (1, 2)), ("a", "b"))
KRON = Quiver(2, ((0, 1), (0, 1)), ("a", "b"))


@pytest.fixture(scope="session")
def a2():
    return A2


@pytest.fixture(scope="session")
def a3():
    return A3


@pytest.fixture(scope="session")
def kron():
    return KRON


def kron_s_regular(field, lam):
    """The (1,1) Kronecker representation with arrow maps (1, lam)."""
    return make_rep(KRON, field, (1, 1), {0: Mat.from_rows(field, [[1]]),
                                          1: Mat.from_rows(field, [[lam]])})


def kron_s0(field=F2):
    """The regular simple at parameter 0: maps (1, 0)."""
    return make_rep(KRON, field, (1, 1), {0: Mat.from_rows(field, [[1]])})


def a3_m12(field=F2):
    """The interval module (k, k, 0) with the identity on the first arrow."""
    return make_rep(A3, field, (1, 1, 0), {0: Mat.from_rows(field, [[1]])})


def random_rep(q: Quiver, field: FieldSpec, rng: random.Random,
               max_dim: int = 3) -> Rep:
    dims = tuple(rng.randint(0, max_dim) for _ in range(q.vertex_count))
    maps = {}
    for a, (s, t) in enumerate(q.arrows):
        ents = [rng.randrange(field.p) for _ in range(dims[t] * dims[s])]
        maps[a] = Mat(dims[t], dims[s], field, tuple(ents))
    return make_rep(q, field, dims, maps)


def _mat_mul_mod(a, b, n, k, m, p):
    """(n x k) times (k x m) over Z/p, flat row-major lists."""
    out = [0] * (n * m)
    for i in range(n):
        for j in range(m):
            s = 0
            for t in range(k):
                s += a[i * k + t] * b[t * m + j]
            out[i * m + j] = s % p
    return out


def brute_hom_dim(m: Rep, n: Rep) -> int:
    """dim Hom by enumerating every vertex-map tuple and testing the squares.

    Completely independent of the library's difference-map computation:
    raw integer lists mod p throughout.
    """
    p = m.field.p
    q = m.quiver
    sizes = [n.dims[v] * m.dims[v] for v in range(q.vertex_count)]
    total = sum(sizes)
    n_maps = [[int(x) for x in n.maps[a].entries] for a in range(len(q.arrows))]
    m_maps = [[int(x) for x in m.maps[a].entries] for a in range(len(q.arrows))]
    count = 0
    for flat in itertools.product(range(p), repeat=total):
        offs = 0
        fs = []
        for v in range(q.vertex_count):
            fs.append(list(flat[offs:offs + sizes[v]]))
            offs += sizes[v]
        ok = True
        for a, (s, t) in enumerate(q.arrows):
            lhs = _mat_mul_mod(n_maps[a], fs[s], n.dims[t], n.dims[s],
                               m.dims[s], p)
            rhs = _mat_mul_mod(fs[t], m_maps[a], n.dims[t], m.dims[t],
                               m.dims[s], p)
            if lhs != rhs:
                ok = False
                break
        if ok:
            count += 1
    dim = 0
    while p ** dim < count:
        dim += 1
    assert p ** dim == count, "commuting tuples did not form a subspace"
    return dim


def brute_invertible_hom_exists(m: Rep, n: Rep) -> bool:
    """Exhaustively search raw vertex-map tuples for an invertible morphism."""
    if m.dims != n.dims:
        return False
    p = m.field.p
    q = m.quiver
    sizes = [n.dims[v] * m.dims[v] for v in range(q.vertex_count)]
    total = sum(sizes)
    n_maps = [[int(x) for x in n.maps[a].entries] for a in range(len(q.arrows))]
    m_maps = [[int(x) for x in m.maps[a].entries] for a in range(len(q.arrows))]
    for flat in itertools.product(range(p), repeat=total):
        offs = 0
        fs = []
        for v in range(q.vertex_count):
            fs.append(list(flat[offs:offs + sizes[v]]))
            offs += sizes[v]
        ok = True
        for a, (s, t) in enumerate(q.arrows):
            lhs = _mat_mul_mod(n_maps[a], fs[s], n.dims[t], n.dims[s],
                               m.dims[s], p)
            rhs = _mat_mul_mod(fs[t], m_maps[a], n.dims[t], m.dims[t],
                               m.dims[s], p)
            if lhs != rhs:
                ok = False
                break
        if not ok:
            continue
        if all(_brute_rank(fs[v], n.dims[v], m.dims[v], p) == m.dims[v]
               for v in range(q.vertex_count)):
            return True
    return False


def _brute_rank(flat, rows, cols, p) -> int:
    a = [[flat[i * cols + j] % p for j in range(cols)] for i in range(rows)]
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if a[i][c] % p:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [(x * inv) % p for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        r += 1
    return r


def all_reps_total_dim(q: Quiver, field: FieldSpec, max_total: int):
    """Every representation (not up to iso) with total dimension <= max_total."""
    p = field.p
    out = []
    for dims in itertools.product(range(max_total + 1),
                                  repeat=q.vertex_count):
        if sum(dims) > max_total:
            continue
        cells = sum(dims[s] * dims[t] for s, t in q.arrows)
        for flat in itertools.product(range(p), repeat=cells):
            maps = {}
            off = 0
            for a, (s, t) in enumerate(q.arrows):
                size = dims[t] * dims[s]
                maps[a] = Mat(dims[t], dims[s], field,
                              tuple(flat[off:off + size]))
                off += size
            out.append(make_rep(q, field, dims, maps))
    return out
