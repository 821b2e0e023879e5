"""Quivers, representations, morphisms, and exact-category constructions.

A representation of a finite acyclic quiver assigns an exact vector space
to every vertex and a matrix to every arrow; these are the finitely
presented modules over the path algebra. Kernels, images, cokernels,
direct sums and pushouts are computed vertex-wise with restricted or
induced arrow maps, always with deterministic basis choices.
"""

from __future__ import annotations

import functools
import itertools
import random
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .errors import BudgetExceededError, InconclusiveError, UnsupportedFieldError
from .exactlin import (
    FieldSpec,
    Mat,
    column_space_basis,
    hstack,
    inverse,
    kernel_basis,
    kron,
    quotient_maps,
    rank,
    solve,
    subspace_bases,
    vstack,
)

DEFAULT_ISO_BUDGET = 1 << 20
DEFAULT_SUBMODULE_BUDGET = 1 << 20
DEFAULT_IDEMPOTENT_BUDGET = 1 << 16
DEFAULT_RANDOM_TRIES = 128


@dataclass(frozen=True)
class Quiver:
    """Finite acyclic directed graph.

    Arrows are (source, target) pairs of 0-based vertex indices. A
    topological order must exist; cyclic input is rejected because the
    path algebra would be infinite-dimensional.
    """

    vertex_count: int
    arrows: tuple[tuple[int, int], ...]
    labels: Optional[tuple[str, ...]] = None

    def __post_init__(self) -> None:
        for s, t in self.arrows:
            if not (0 <= s < self.vertex_count and 0 <= t < self.vertex_count):
                raise ValueError(f"arrow ({s},{t}) out of range")
        if self.labels is not None and len(self.labels) != len(self.arrows):
            raise ValueError("one label per arrow required")
        if len(self.topological_order()) != self.vertex_count:
            raise ValueError("quiver has a directed cycle")

    def topological_order(self) -> tuple[int, ...]:
        indeg = [0] * self.vertex_count
        for _, t in self.arrows:
            indeg[t] += 1
        order: list[int] = [v for v in range(self.vertex_count) if indeg[v] == 0]
        seen = 0
        while seen < len(order):
            v = order[seen]
            seen += 1
            for s, t in self.arrows:
                if s == v:
                    indeg[t] -= 1
                    if indeg[t] == 0:
                        order.append(t)
        return tuple(order)

    def arrow_label(self, a: int) -> str:
        if self.labels is not None:
            return self.labels[a]
        return f"a{a}"

    def arrows_from(self, v: int) -> list[int]:
        return [a for a, (s, _) in enumerate(self.arrows) if s == v]

    def arrows_into(self, v: int) -> list[int]:
        return [a for a, (_, t) in enumerate(self.arrows) if t == v]


def paths_from(q: Quiver, v: int) -> dict[int, list[tuple[int, ...]]]:
    """All directed paths starting at v, grouped by end vertex.

    Paths are tuples of arrow indices, listed in BFS order (shorter
    first, ties broken by ascending arrow index), so the basis of a
    projective representation is reproducible.
    """
    out: dict[int, list[tuple[int, ...]]] = {w: [] for w in range(q.vertex_count)}
    queue: list[tuple[int, tuple[int, ...]]] = [(v, ())]
    while queue:
        w, path = queue.pop(0)
        out[w].append(path)
        for a in q.arrows_from(w):
            queue.append((q.arrows[a][1], path + (a,)))
    return out


@dataclass(frozen=True)
class Rep:
    """Finite-dimensional representation: dimensions plus arrow matrices.

    maps[a] has shape dims[target] x dims[source] for arrow a.
    """

    quiver: Quiver
    field: FieldSpec
    dims: tuple[int, ...]
    maps: tuple[Mat, ...]

    def __post_init__(self) -> None:
        if len(self.dims) != self.quiver.vertex_count:
            raise ValueError("one dimension per vertex required")
        if any(d < 0 for d in self.dims):
            raise ValueError("negative dimension")
        if len(self.maps) != len(self.quiver.arrows):
            raise ValueError("one matrix per arrow required")
        for a, (s, t) in enumerate(self.quiver.arrows):
            m = self.maps[a]
            if m.shape != (self.dims[t], self.dims[s]):
                raise ValueError(
                    f"arrow {self.quiver.arrow_label(a)}: matrix is {m.shape}, "
                    f"expected {(self.dims[t], self.dims[s])}")
            if m.field != self.field:
                raise ValueError("field mismatch in arrow matrix")

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim == 0


def make_rep(q: Quiver, field: FieldSpec, dims: Sequence[int],
             maps: Optional[dict[int, Mat]] = None) -> Rep:
    """Build a representation, filling unspecified arrows with zero maps."""
    dims_t = tuple(dims)
    out: list[Mat] = []
    for a, (s, t) in enumerate(q.arrows):
        if maps is not None and a in maps:
            out.append(maps[a])
        else:
            out.append(Mat.zeros(field, dims_t[t], dims_t[s]))
    return Rep(q, field, dims_t, tuple(out))


def zero_rep(q: Quiver, field: FieldSpec) -> Rep:
    return make_rep(q, field, (0,) * q.vertex_count)


def simple_rep(q: Quiver, field: FieldSpec, v: int) -> Rep:
    dims = tuple(1 if w == v else 0 for w in range(q.vertex_count))
    return make_rep(q, field, dims)


def projective_rep(q: Quiver, v: int, field: FieldSpec) -> Rep:
    """Indecomposable projective at v: basis = paths starting at v."""
    if not (0 <= v < q.vertex_count):
        raise ValueError(f"vertex {v} out of range")
    paths = paths_from(q, v)
    dims = tuple(len(paths[w]) for w in range(q.vertex_count))
    index = {w: {p: i for i, p in enumerate(paths[w])} for w in range(q.vertex_count)}
    maps: dict[int, Mat] = {}
    for a, (s, t) in enumerate(q.arrows):
        rows, cols = dims[t], dims[s]
        ents = [field.zero] * (rows * cols)
        for i, p in enumerate(paths[s]):
            j = index[t][p + (a,)]
            ents[j * cols + i] = field.one
        maps[a] = Mat(rows, cols, field, tuple(ents))
    return make_rep(q, field, dims, maps)


def path_matrix(m: Rep, start: int, path: tuple[int, ...]) -> Mat:
    """Matrix of the action of a path on m, from vertex ``start``."""
    out = Mat.identity(m.field, m.dims[start])
    for a in path:
        out = m.maps[a].mul(out)
    return out


class RepMorphism:
    """Vertex-wise linear maps commuting with the arrow actions.

    vertex_maps[v] has shape target.dims[v] x source.dims[v]. The
    commuting squares are checked on construction.
    """

    __slots__ = ("source", "target", "vertex_maps")

    def __init__(self, source: Rep, target: Rep,
                 vertex_maps: Sequence[Mat], check: bool = True):
        if source.quiver != target.quiver or source.field != target.field:
            raise ValueError("morphism between different quivers or fields")
        vm = tuple(vertex_maps)
        if len(vm) != source.quiver.vertex_count:
            raise ValueError("one matrix per vertex required")
        for v, m in enumerate(vm):
            if m.shape != (target.dims[v], source.dims[v]):
                raise ValueError(
                    f"vertex {v}: matrix is {m.shape}, expected "
                    f"{(target.dims[v], source.dims[v])}")
        if check:
            for a, (s, t) in enumerate(source.quiver.arrows):
                lhs = target.maps[a].mul(vm[s])
                rhs = vm[t].mul(source.maps[a])
                if lhs.entries != rhs.entries:
                    raise ValueError(
                        f"commuting square fails at arrow "
                        f"{source.quiver.arrow_label(a)}")
        self.source = source
        self.target = target
        self.vertex_maps = vm

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, RepMorphism)
                and self.source == other.source
                and self.target == other.target
                and self.vertex_maps == other.vertex_maps)

    def __hash__(self) -> int:
        return hash((self.source, self.target, self.vertex_maps))

    def compose(self, other: "RepMorphism") -> "RepMorphism":
        """self after other: (self . other)(x) = self(other(x))."""
        if other.target != self.source:
            raise ValueError("morphisms do not compose")
        maps = tuple(a.mul(b) for a, b in zip(self.vertex_maps, other.vertex_maps))
        return RepMorphism(other.source, self.target, maps, check=False)

    def add(self, other: "RepMorphism") -> "RepMorphism":
        if self.source != other.source or self.target != other.target:
            raise ValueError("morphism addition needs equal endpoints")
        maps = tuple(a.add(b) for a, b in zip(self.vertex_maps, other.vertex_maps))
        return RepMorphism(self.source, self.target, maps, check=False)

    def neg(self) -> "RepMorphism":
        return RepMorphism(self.source, self.target,
                           tuple(m.neg() for m in self.vertex_maps), check=False)

    def scale(self, c: object) -> "RepMorphism":
        return RepMorphism(self.source, self.target,
                           tuple(m.scale(c) for m in self.vertex_maps), check=False)

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.vertex_maps)

    def is_injective(self) -> bool:
        return all(rank(m) == m.cols for m in self.vertex_maps)

    def is_surjective(self) -> bool:
        return all(rank(m) == m.rows for m in self.vertex_maps)

    def is_invertible(self) -> bool:
        return all(m.rows == m.cols and rank(m) == m.rows for m in self.vertex_maps)

    def inverse(self) -> "RepMorphism":
        invs = []
        for m in self.vertex_maps:
            if m.rows != m.cols:
                raise ValueError("not invertible: non-square vertex map")
            mi = inverse(m)
            if mi is None:
                raise ValueError("not invertible: singular vertex map")
            invs.append(mi)
        return RepMorphism(self.target, self.source, tuple(invs), check=False)

    def __repr__(self) -> str:
        return (f"RepMorphism({self.source.dims} -> {self.target.dims})")


def identity_morphism(m: Rep) -> RepMorphism:
    return RepMorphism(m, m, tuple(Mat.identity(m.field, d) for d in m.dims),
                       check=False)


def zero_morphism(m: Rep, n: Rep) -> RepMorphism:
    return RepMorphism(m, n, tuple(Mat.zeros(m.field, n.dims[v], m.dims[v])
                                   for v in range(m.quiver.vertex_count)),
                       check=False)


@dataclass(frozen=True)
class ShortExactSeq:
    """0 -> A -> B -> C -> 0, validated vertex-wise on construction."""

    inclusion: RepMorphism
    projection: RepMorphism

    def __post_init__(self) -> None:
        if self.inclusion.target != self.projection.source:
            raise ValueError("inclusion target differs from projection source")
        comp = self.projection.compose(self.inclusion)
        if not comp.is_zero():
            raise ValueError("projection . inclusion is nonzero")
        if not self.inclusion.is_injective():
            raise ValueError("inclusion not injective")
        if not self.projection.is_surjective():
            raise ValueError("projection not surjective")
        mid = self.inclusion.target
        for v in range(mid.quiver.vertex_count):
            if (rank(self.inclusion.vertex_maps[v])
                    + rank(self.projection.vertex_maps[v]) != mid.dims[v]):
                raise ValueError(f"not exact at vertex {v}")

    @property
    def sub(self) -> Rep:
        return self.inclusion.source

    @property
    def middle(self) -> Rep:
        return self.inclusion.target

    @property
    def quotient(self) -> Rep:
        return self.projection.target


def sub_rep(m: Rep, bases: Sequence[Mat]) -> tuple[Rep, RepMorphism]:
    """Subrepresentation spanned by the given vertex column bases.

    The bases must be closed under the arrow maps; arrow maps of the
    subrepresentation are the restrictions expressed in those bases.
    """
    q, f = m.quiver, m.field
    dims = tuple(b.cols for b in bases)
    maps: dict[int, Mat] = {}
    for a, (s, t) in enumerate(q.arrows):
        img = m.maps[a].mul(bases[s])
        restricted = solve(bases[t], img)
        if restricted is None:
            raise ValueError(
                f"subspaces not closed under arrow {q.arrow_label(a)}")
        maps[a] = restricted
    rep = make_rep(q, f, dims, maps)
    incl = RepMorphism(rep, m, tuple(bases))
    return rep, incl


def quotient_rep(m: Rep, bases: Sequence[Mat]) -> tuple[Rep, RepMorphism]:
    """Quotient of m by the subrepresentation spanned by the given bases.

    Complement coordinates are chosen deterministically by pivot order.
    """
    q, f = m.quiver, m.field
    projs, lifts = [], []
    for v in range(q.vertex_count):
        qm = quotient_maps(bases[v])
        projs.append(qm.projection)
        lifts.append(qm.lift)
    dims = tuple(p.rows for p in projs)
    maps: dict[int, Mat] = {}
    for a, (s, t) in enumerate(q.arrows):
        maps[a] = projs[t].mul(m.maps[a]).mul(lifts[s])
    rep = make_rep(q, f, dims, maps)
    proj = RepMorphism(m, rep, tuple(projs))
    return rep, proj


def kernel(f: RepMorphism) -> tuple[Rep, RepMorphism]:
    """Kernel subrepresentation with its inclusion."""
    bases = [kernel_basis(m) for m in f.vertex_maps]
    return sub_rep(f.source, bases)


def image(f: RepMorphism) -> tuple[Rep, RepMorphism, RepMorphism]:
    """Image subrepresentation: (rep, inclusion into target, surjection from source).

    The surjection followed by the inclusion reproduces f.
    """
    bases = [column_space_basis(m) for m in f.vertex_maps]
    rep, incl = sub_rep(f.target, bases)
    surj_maps = []
    for v, b in enumerate(bases):
        s = solve(b, f.vertex_maps[v])
        assert s is not None
        surj_maps.append(s)
    surj = RepMorphism(f.source, rep, tuple(surj_maps))
    return rep, incl, surj


def cokernel(f: RepMorphism) -> tuple[Rep, RepMorphism]:
    """Cokernel with its projection from the target."""
    bases = [column_space_basis(m) for m in f.vertex_maps]
    return quotient_rep(f.target, bases)


def direct_sum(ms: Sequence[Rep], *, quiver: Optional[Quiver] = None,
               field: Optional[FieldSpec] = None) -> Rep:
    """Direct sum with block-diagonal arrow maps.

    For an empty list, the quiver and field must be supplied.
    """
    rep, _, _ = direct_sum_with_maps(ms, quiver=quiver, field=field)
    return rep


def direct_sum_with_maps(
    ms: Sequence[Rep], *, quiver: Optional[Quiver] = None,
    field: Optional[FieldSpec] = None,
) -> tuple[Rep, list[RepMorphism], list[RepMorphism]]:
    """Direct sum together with the canonical injections and projections."""
    if not ms:
        if quiver is None or field is None:
            raise ValueError("empty direct sum needs an explicit quiver and field")
        return zero_rep(quiver, field), [], []
    q, f = ms[0].quiver, ms[0].field
    for m in ms[1:]:
        if m.quiver != q:
            raise ValueError("direct sum of representations of different quivers")
        if m.field != f:
            raise ValueError("direct sum over different fields")
    dims = tuple(sum(m.dims[v] for m in ms) for v in range(q.vertex_count))
    maps: dict[int, Mat] = {}
    for a, (s, t) in enumerate(q.arrows):
        rows, cols = dims[t], dims[s]
        ents = [f.zero] * (rows * cols)
        ro = co = 0
        for m in ms:
            blk = m.maps[a]
            for i in range(blk.rows):
                base = (ro + i) * cols + co
                for j in range(blk.cols):
                    ents[base + j] = blk.entry(i, j)
            ro += m.dims[t]
            co += m.dims[s]
        maps[a] = Mat(rows, cols, f, tuple(ents))
    total = make_rep(q, f, dims, maps)
    injections, projections = [], []
    offsets = [0] * q.vertex_count
    for m in ms:
        inj_maps, proj_maps = [], []
        for v in range(q.vertex_count):
            d, off, tot = m.dims[v], offsets[v], dims[v]
            inj = [f.zero] * (tot * d)
            prj = [f.zero] * (d * tot)
            for i in range(d):
                inj[(off + i) * d + i] = f.one
                prj[i * tot + (off + i)] = f.one
            inj_maps.append(Mat(tot, d, f, tuple(inj)))
            proj_maps.append(Mat(d, tot, f, tuple(prj)))
        injections.append(RepMorphism(m, total, tuple(inj_maps), check=False))
        projections.append(RepMorphism(total, m, tuple(proj_maps), check=False))
        for v in range(q.vertex_count):
            offsets[v] += m.dims[v]
    return total, injections, projections


def copairing(parts: Sequence[RepMorphism], total_source: Rep) -> RepMorphism:
    """Morphism from a direct sum given morphisms from the summands.

    ``total_source`` must be the direct sum of the part sources, in order.
    """
    if not parts:
        raise ValueError("copairing of nothing")
    target = parts[0].target
    maps = []
    for v in range(target.quiver.vertex_count):
        maps.append(hstack([p.vertex_maps[v] for p in parts])
                    if parts else Mat.zeros(target.field, target.dims[v], 0))
    return RepMorphism(total_source, target, tuple(maps))


def pushout(f: RepMorphism, g: RepMorphism) -> tuple[Rep, RepMorphism, RepMorphism]:
    """Pushout of f: C -> A along g: C -> B.

    Returns (P, A -> P, B -> P) with P = (A + B)/<(f(c), -g(c))>.
    """
    if f.source != g.source:
        raise ValueError("pushout legs must share their source")
    a_rep, b_rep = f.target, g.target
    total, injections, _ = direct_sum_with_maps([a_rep, b_rep])
    h_maps = tuple(vstack([f.vertex_maps[v], g.vertex_maps[v].neg()])
                   for v in range(a_rep.quiver.vertex_count))
    h = RepMorphism(f.source, total, h_maps, check=False)
    p_rep, proj = cokernel(h)
    in_a = proj.compose(injections[0])
    in_b = proj.compose(injections[1])
    return p_rep, in_a, in_b


# --- Hom-space plumbing (shared with the homological calculus) ---------------

@functools.lru_cache(maxsize=None)
def _difference_map(m: Rep, n: Rep) -> tuple[Mat, tuple[tuple[int, int], ...]]:
    """Matrix of D: (+)_v Hom(M_v,N_v) -> (+)_a Hom(M_i,N_j).

    D(f) at arrow a: i->j is N_a f_i - f_j M_a, with matrices flattened
    row-major. Returns (D, row blocks) where row blocks give each
    arrow's (offset, size) in the codomain.
    """
    if m.quiver != n.quiver or m.field != n.field:
        raise ValueError("Hom between different quivers or fields")
    q, f = m.quiver, m.field
    col_off = [0] * (q.vertex_count + 1)
    for v in range(q.vertex_count):
        col_off[v + 1] = col_off[v] + n.dims[v] * m.dims[v]
    row_blocks: list[tuple[int, int]] = []
    off = 0
    for a, (s, t) in enumerate(q.arrows):
        size = n.dims[t] * m.dims[s]
        row_blocks.append((off, size))
        off += size
    total_rows, total_cols = off, col_off[-1]
    ents = [f.zero] * (total_rows * total_cols)

    def put(block: Mat, r0: int, c0: int, negate: bool) -> None:
        for i in range(block.rows):
            base = (r0 + i) * total_cols + c0
            for j in range(block.cols):
                x = block.entry(i, j)
                if x != f.zero:
                    cur = ents[base + j]
                    ents[base + j] = f.sub(cur, x) if negate else f.add(cur, x)

    for a, (s, t) in enumerate(q.arrows):
        r0 = row_blocks[a][0]
        # vec(N_a f_s) = (N_a kron I) vec(f_s)
        put(kron(n.maps[a], Mat.identity(f, m.dims[s])), r0, col_off[s], False)
        # vec(f_t M_a) = (I kron M_a^T) vec(f_t)
        put(kron(Mat.identity(f, n.dims[t]), m.maps[a].transpose()),
            r0, col_off[t], True)
    return Mat(total_rows, total_cols, f, tuple(ents)), tuple(row_blocks)


def _unflatten_hom(m: Rep, n: Rep, coords: tuple) -> tuple[Mat, ...]:
    """Vertex matrices from a flattened Hom coordinate vector."""
    f = m.field
    out = []
    off = 0
    for v in range(m.quiver.vertex_count):
        size = n.dims[v] * m.dims[v]
        out.append(Mat(n.dims[v], m.dims[v], f, tuple(coords[off:off + size])))
        off += size
    return tuple(out)


@functools.lru_cache(maxsize=None)
def hom_basis_maps(m: Rep, n: Rep) -> tuple[tuple[Mat, ...], ...]:
    """Basis of Hom(m, n) as tuples of vertex matrices."""
    d_mat, _ = _difference_map(m, n)
    null = kernel_basis(d_mat)
    out = []
    for j in range(null.cols):
        out.append(_unflatten_hom(m, n, null.col_tuple(j)))
    return tuple(out)


def hom_dim(m: Rep, n: Rep) -> int:
    return len(hom_basis_maps(m, n))


def dimension_vector(m: Rep) -> tuple[int, ...]:
    return m.dims


def euler_form(q: Quiver, d: Sequence[int], e: Sequence[int]) -> int:
    """Euler bilinear form: sum d_v e_v - sum over arrows i->j of d_i e_j."""
    if len(d) != q.vertex_count or len(e) != q.vertex_count:
        raise ValueError("vectors must match the vertex count")
    total = sum(dv * ev for dv, ev in zip(d, e))
    for s, t in q.arrows:
        total -= d[s] * e[t]
    return total


# --- Isomorphism testing and decomposition -----------------------------------

def _combo_maps(basis: Sequence[tuple[Mat, ...]], coeffs: Sequence,
                field: FieldSpec, nverts: int) -> list[Mat]:
    out: list[Optional[Mat]] = [None] * nverts
    for k, c in enumerate(coeffs):
        if c == field.zero:
            continue
        for v in range(nverts):
            term = basis[k][v] if c == field.one else basis[k][v].scale(c)
            out[v] = term if out[v] is None else out[v].add(term)
    for v in range(nverts):
        if out[v] is None:
            out[v] = Mat.zeros(field, basis[0][v].rows, basis[0][v].cols)
    return out  # type: ignore[return-value]


def _invertible_candidate(maps: Sequence[Mat]) -> bool:
    return all(m.rows == m.cols and rank(m) == m.rows for m in maps)


def iso_witness(m: Rep, n: Rep, budget: int = DEFAULT_ISO_BUDGET,
                tries: int = DEFAULT_RANDOM_TRIES, seed: int = 0,
                ) -> Optional[RepMorphism]:
    """An invertible morphism m -> n, or None when none exists.

    Dimension vectors are compared first; then the Hom space is searched
    for an invertible element, exhaustively when the field is prime and
    p^dim(Hom) fits the budget, otherwise by matching Krull-Schmidt
    decompositions. Raises InconclusiveError when a randomized fallback
    exhausts its tries without a verdict.
    """
    if m.quiver != n.quiver or m.field != n.field:
        raise ValueError("isomorphism test between different quivers or fields")
    if m.dims != n.dims:
        return None
    if m.total_dim == 0:
        return zero_morphism(m, n)
    if m == n:
        return identity_morphism(m)
    field = m.field
    basis = hom_basis_maps(m, n)
    d = len(basis)
    if d == 0:
        return None
    nverts = m.quiver.vertex_count
    for b in basis:
        if _invertible_candidate(b):
            return RepMorphism(m, n, b, check=False)
    if field.is_prime_field and field.p ** d <= budget:
        for coeffs in itertools.product(range(field.p), repeat=d):
            maps = _combo_maps(basis, coeffs, field, nverts)
            if _invertible_candidate(maps):
                return RepMorphism(m, n, tuple(maps), check=False)
        return None
    if field.is_prime_field:
        return _iso_by_decomposition(m, n, budget, tries, seed)
    # rationals: randomized search only; no exhaustive certificate of failure
    rng = random.Random(seed)
    for _ in range(tries):
        coeffs = [rng.randint(-3, 3) for _ in range(d)]
        maps = _combo_maps(basis, [field.coerce(c) for c in coeffs], field, nverts)
        if _invertible_candidate(maps):
            return RepMorphism(m, n, tuple(maps), check=False)
    raise InconclusiveError("isomorphism search over the rationals exhausted")


def _iso_by_decomposition(m: Rep, n: Rep, budget: int, tries: int,
                          seed: int) -> Optional[RepMorphism]:
    parts_m, wit_m = decompose_with_witness(m)
    parts_n, wit_n = decompose_with_witness(n)
    if len(parts_m) != len(parts_n):
        return None
    remaining = list(range(len(parts_n)))
    matches: list[tuple[int, RepMorphism]] = []
    for pm in parts_m:
        found = None
        for idx in remaining:
            w = iso_witness(pm, parts_n[idx], budget, tries, seed)
            if w is not None:
                found = (idx, w)
                break
        if found is None:
            return None
        matches.append(found)
        remaining.remove(found[0])
    # assemble: n_sum_perm . blockdiag(w) . inverse(wit_m)
    sum_m = direct_sum(parts_m, quiver=m.quiver, field=m.field)
    sum_n = direct_sum(parts_n, quiver=m.quiver, field=m.field)
    _, inj_n, _ = direct_sum_with_maps(parts_n, quiver=m.quiver, field=m.field)
    _, _, proj_m = direct_sum_with_maps(parts_m, quiver=m.quiver, field=m.field)
    total: Optional[RepMorphism] = None
    for k, (idx, w) in enumerate(matches):
        leg = inj_n[idx].compose(w).compose(proj_m[k])
        total = leg if total is None else total.add(leg)
    assert total is not None
    mid = RepMorphism(sum_m, sum_n, total.vertex_maps, check=False)
    return wit_n.compose(mid).compose(wit_m.inverse())


def is_isomorphic(m: Rep, n: Rep, budget: int = DEFAULT_ISO_BUDGET) -> bool:
    return iso_witness(m, n, budget) is not None


@functools.lru_cache(maxsize=None)
def decompose_with_witness(
    m: Rep, idempotent_budget: int = DEFAULT_IDEMPOTENT_BUDGET,
    fitting_tries: int = DEFAULT_RANDOM_TRIES, seed: int = 0,
) -> tuple[tuple[Rep, ...], RepMorphism]:
    """Indecomposable summands plus an isomorphism from their direct sum.

    A nontrivial idempotent of the endomorphism algebra is found by
    exhaustive search over the coefficient space when p^dim(End) fits the
    budget; beyond that, random endomorphisms are raised to a high power
    (Fitting) with a deterministic seed. Prime fields only.
    """
    if not m.field.is_prime_field:
        raise UnsupportedFieldError("decomposition needs a prime field")
    if m.total_dim == 0:
        z = zero_rep(m.quiver, m.field)
        return (), RepMorphism(z, m, tuple(
            Mat.zeros(m.field, m.dims[v], 0) for v in range(m.quiver.vertex_count)),
            check=False)
    split = _find_split(m, idempotent_budget, fitting_tries, seed)
    if split is None:
        return (m,), identity_morphism(m)
    (rep_a, incl_a), (rep_b, incl_b) = split
    parts_a, wit_a = decompose_with_witness(rep_a, idempotent_budget,
                                            fitting_tries, seed)
    parts_b, wit_b = decompose_with_witness(rep_b, idempotent_budget,
                                            fitting_tries, seed)
    parts = parts_a + parts_b
    total = direct_sum(parts, quiver=m.quiver, field=m.field)
    _, _, projs = direct_sum_with_maps(parts, quiver=m.quiver, field=m.field)
    legs: list[RepMorphism] = []
    # witness sends the k-th summand through its half's witness, then includes
    for k in range(len(parts)):
        if k < len(parts_a):
            _, inj_a, _ = direct_sum_with_maps(parts_a, quiver=m.quiver, field=m.field)
            leg = incl_a.compose(wit_a).compose(inj_a[k])
        else:
            _, inj_b, _ = direct_sum_with_maps(parts_b, quiver=m.quiver, field=m.field)
            leg = incl_b.compose(wit_b).compose(inj_b[k - len(parts_a)])
        legs.append(leg.compose(projs[k]))
    total_map = legs[0]
    for leg in legs[1:]:
        total_map = total_map.add(leg)
    witness = RepMorphism(total, m, total_map.vertex_maps, check=False)
    if not witness.is_invertible():
        raise AssertionError("decomposition witness failed invertibility")
    return parts, witness


def _find_split(m: Rep, idempotent_budget: int, fitting_tries: int, seed: int,
                ) -> Optional[tuple[tuple[Rep, RepMorphism], tuple[Rep, RepMorphism]]]:
    field = m.field
    basis = hom_basis_maps(m, m)
    d = len(basis)
    if d <= 1:
        return None
    nverts = m.quiver.vertex_count
    ident = tuple(Mat.identity(field, dim) for dim in m.dims)
    if field.p ** d <= idempotent_budget:
        for coeffs in itertools.product(range(field.p), repeat=d):
            if all(c == 0 for c in coeffs):
                continue
            maps = _combo_maps(basis, coeffs, field, nverts)
            if tuple(mp.entries for mp in maps) == tuple(i.entries for i in ident):
                continue
            sq = [a.mul(a) for a in maps]
            if all(s.entries == a.entries for s, a in zip(sq, maps)):
                e = RepMorphism(m, m, tuple(maps), check=False)
                one_minus = identity_morphism(m).add(e.neg())
                part_a = image(e)
                part_b = image(one_minus)
                return (part_a[0], part_a[1]), (part_b[0], part_b[1])
        return None
    # Fitting: random endomorphism to a high power splits ker (+) im
    rng = random.Random(seed)
    for _ in range(fitting_tries):
        coeffs = [rng.randrange(field.p) for _ in range(d)]
        maps = _combo_maps(basis, coeffs, field, nverts)
        f = RepMorphism(m, m, tuple(maps), check=False)
        power = f
        steps = max(1, m.total_dim).bit_length() + 1
        for _ in range(steps):
            power = power.compose(power)
        ker_rep, ker_incl = kernel(power)
        if 0 < ker_rep.total_dim < m.total_dim:
            im_rep, im_incl, _ = image(power)
            if ker_rep.total_dim + im_rep.total_dim == m.total_dim:
                return (ker_rep, ker_incl), (im_rep, im_incl)
    return None


def decompose(m: Rep) -> list[Rep]:
    """Indecomposable summands of m (Krull-Schmidt), deterministic order."""
    parts, _ = decompose_with_witness(m)
    return list(parts)


def hom_from_projective(q: Quiver, v: int, m: Rep, generator_image: Mat,
                        ) -> RepMorphism:
    """Morphism P_v -> m sending the trivial-path generator to the given column.

    Determined by the image of the generator: the basis path p lands on
    the path action of p applied to that column.
    """
    f = m.field
    paths = paths_from(q, v)
    pv = projective_rep(q, v, f)
    maps = []
    for w in range(q.vertex_count):
        cols = [path_matrix(m, v, p).mul(generator_image) for p in paths[w]]
        maps.append(hstack(cols) if cols else Mat.zeros(f, m.dims[w], 0))
    return RepMorphism(pv, m, tuple(maps))


def projective_cover(m: Rep) -> tuple[Rep, RepMorphism]:
    """Projective cover: one projective per top basis vector, with the cover map.

    The top at a vertex is the quotient by the radical (the span of all
    incoming arrow images); lifts are standard basis vectors at the
    radical's non-pivot coordinates.
    """
    q, f = m.quiver, m.field
    parts: list[Rep] = []
    legs: list[RepMorphism] = []
    for v in range(q.vertex_count):
        incoming = [m.maps[a] for a in q.arrows_into(v)]
        if incoming:
            rad = column_space_basis(hstack(incoming))
        else:
            rad = Mat.zeros(f, m.dims[v], 0)
        from .exactlin import complement_pivots
        for coord in complement_pivots(rad):
            e = [f.zero] * m.dims[v]
            e[coord] = f.one
            col = Mat(m.dims[v], 1, f, tuple(e))
            parts.append(projective_rep(q, v, f))
            legs.append(hom_from_projective(q, v, m, col))
    if not parts:
        z = zero_rep(q, f)
        return z, zero_morphism(z, m)
    total, _, _ = direct_sum_with_maps(parts)
    cover = copairing(legs, total)
    if not cover.is_surjective():
        raise AssertionError("projective cover failed to be surjective")
    return total, cover


# --- Enumeration --------------------------------------------------------------

def submodule_enumerate(m: Rep, budget: int = DEFAULT_SUBMODULE_BUDGET,
                        ) -> list[tuple[Rep, RepMorphism]]:
    """All subrepresentations of m, each with its inclusion.

    Subrepresentations are identified by their vertex subspaces; 0 and m
    are included. Prime fields only; the number of candidate subspace
    tuples must stay within the budget.
    """
    if not m.field.is_prime_field:
        raise UnsupportedFieldError("submodule enumeration needs a prime field")
    per_vertex: list[list[Mat]] = []
    count = 1
    for v in range(m.quiver.vertex_count):
        subs = list(subspace_bases(m.field, m.dims[v]))
        per_vertex.append(subs)
        count *= len(subs)
        if count > budget:
            raise BudgetExceededError(
                f"{count} subspace tuples exceed budget {budget}")
    out: list[tuple[Rep, RepMorphism]] = []
    for bases in itertools.product(*per_vertex):
        closed = True
        for a, (s, t) in enumerate(m.quiver.arrows):
            img = m.maps[a].mul(bases[s])
            if img.cols and solve(bases[t], img) is None:
                closed = False
                break
        if closed:
            out.append(sub_rep(m, list(bases)))
    return out


def rep_fingerprint(m: Rep) -> tuple:
    """Cheap isomorphism invariants used to bucket candidates."""
    q = m.quiver
    ranks = tuple(rank(mp) for mp in m.maps)
    end_d = hom_dim(m, m)
    to_simples = tuple(hom_dim(m, simple_rep(q, m.field, v))
                       for v in range(q.vertex_count))
    from_simples = tuple(hom_dim(simple_rep(q, m.field, v), m)
                         for v in range(q.vertex_count))
    return (m.dims, ranks, end_d, to_simples, from_simples)


def enumerate_reps(q: Quiver, field: FieldSpec, dim_bound: Sequence[int],
                   budget: int = 1 << 22) -> list[Rep]:
    """All representations with dims <= dim_bound, one per isomorphism class.

    Candidates are enumerated matrix-by-matrix over a prime field and
    deduplicated by invariant fingerprint plus an exact isomorphism test.
    """
    if not field.is_prime_field:
        raise UnsupportedFieldError("representation enumeration needs a prime field")
    if len(dim_bound) != q.vertex_count:
        raise ValueError("dimension bound must match the vertex count")
    p = field.p
    reps: list[Rep] = []
    buckets: dict[tuple, list[int]] = {}
    spent = 0
    for dims in itertools.product(*[range(b + 1) for b in dim_bound]):
        cells = sum(dims[s] * dims[t] for s, t in q.arrows)
        spent += p ** cells
        if spent > budget:
            raise BudgetExceededError("representation enumeration budget exceeded")
        for flat in itertools.product(range(p), repeat=cells):
            maps: dict[int, Mat] = {}
            off = 0
            for a, (s, t) in enumerate(q.arrows):
                size = dims[t] * dims[s]
                maps[a] = Mat(dims[t], dims[s], field, tuple(flat[off:off + size]))
                off += size
            cand = make_rep(q, field, dims, maps)
            fp = rep_fingerprint(cand)
            bucket = buckets.setdefault(fp, [])
            if any(iso_witness(reps[i], cand) is not None for i in bucket):
                continue
            bucket.append(len(reps))
            reps.append(cand)
    return reps
