"""The localisation engine.

A validated Hom-perpendicular set of bound representations generates a
finite-length extension-closed subcategory; localising at it is realized
by quotienting the torsion part and then repeatedly adjoining universal
extensions until Hom and Ext from every generator vanish. Chains that do
not stabilize within the step bound are returned as certified initial
segments, never as errors: the localised module may be
infinite-dimensional over the ground field.
"""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import (
    BudgetExceededError,
    HomPerpRejection,
    NonStabilizingError,
    UnsupportedFieldError,
)
from .exactlin import (
    FieldSpec,
    Mat,
    column_space_basis,
    hstack,
    kernel_basis,
    quotient_maps,
    rank,
    row_space_rref,
    solve,
)
from .quiverrep import (
    Quiver,
    Rep,
    RepMorphism,
    ShortExactSeq,
    cokernel,
    decompose_with_witness,
    hom_basis_maps,
    identity_morphism,
    image,
    iso_witness,
    kernel,
    projective_rep,
    quotient_rep,
    sub_rep,
)
from .homcalc import (
    ext_space,
    extension_from_class,
    hom_space,
    is_bound,
    universal_extension,
)

DEFAULT_MAX_STEPS = 30
DEFAULT_SEARCH_BUDGET = 200_000
DEFAULT_DIVISION_BUDGET = 1 << 16


@dataclass(frozen=True)
class WellPlacedGen:
    """A validated Hom-perpendicular generator set.

    The simples are pairwise non-isomorphic bound representations with no
    nonzero morphisms between distinct members and division endomorphism
    algebras; their extension closure is the subcategory being localised
    at. Built by check_hom_perp_set.
    """

    quiver: Quiver
    field: FieldSpec
    simples: tuple[Rep, ...]
    validation_certificate: tuple[str, ...]


def check_hom_perp_set(candidates: Sequence[Rep], *,
                       quiver: Optional[Quiver] = None,
                       field: Optional[FieldSpec] = None,
                       division_budget: int = DEFAULT_DIVISION_BUDGET,
                       ) -> WellPlacedGen:
    """Validate a candidate generator set, or raise a structured rejection.

    Checks, in order: consistency of quiver and field, no zero members,
    boundness of every member, pairwise distinctness of isomorphism
    classes with vanishing Hom between distinct members, and that every
    endomorphism algebra is a division algebra (each nonzero endomorphism
    invertible; enumerated exhaustively over prime fields).
    """
    cands = list(candidates)
    if not cands:
        if quiver is None or field is None:
            raise ValueError("empty generator set needs an explicit quiver and field")
        return WellPlacedGen(quiver, field, (), ("empty set: vacuously valid",))
    q, f = cands[0].quiver, cands[0].field
    cert: list[str] = []
    for i, c in enumerate(cands):
        if c.quiver != q:
            raise HomPerpRejection("mixed-quiver", (i,))
        if c.field != f:
            raise HomPerpRejection("mixed-field", (i,))
        if c.total_dim == 0:
            raise HomPerpRejection("zero-member", (i,))
    for i, c in enumerate(cands):
        if not is_bound(c):
            raise HomPerpRejection("not-bound", (i,),
                                   "nonzero morphism to a projective")
    cert.append(f"all {len(cands)} candidates bound")
    for i in range(len(cands)):
        for j in range(len(cands)):
            if i == j:
                continue
            if cands[i].dims == cands[j].dims and i < j \
                    and iso_witness(cands[i], cands[j]) is not None:
                raise HomPerpRejection("duplicate-class", (i, j))
            if hom_space(cands[i], cands[j]).dim != 0:
                raise HomPerpRejection(
                    "nonzero-hom", (i, j),
                    "nonzero non-invertible morphism between distinct members")
    cert.append("pairwise Hom vanishing and distinct classes")
    for i, c in enumerate(cands):
        d = hom_space(c, c).dim
        if d == 1:
            continue  # End = scalars
        if not f.is_prime_field:
            raise UnsupportedFieldError(
                "division-algebra check over the rationals needs End = Q")
        if f.p ** d > division_budget:
            raise BudgetExceededError(
                f"endomorphism algebra of candidate {i} too large to enumerate")
        for g in hom_space(c, c).elements():
            if not g.is_zero() and not g.is_invertible():
                raise HomPerpRejection(
                    "non-division-endomorphisms", (i,),
                    "nonzero non-invertible endomorphism")
    cert.append("endomorphism algebras are division algebras")
    return WellPlacedGen(q, f, tuple(cands), tuple(cert))


def trace_torsion_submodule(m: Rep, s: WellPlacedGen) -> tuple[Rep, RepMorphism]:
    """Largest torsion submodule t(m): iterated trace of the generators.

    Repeatedly adjoins the images of all morphisms from every generator
    into the current quotient until the quotient receives none.
    """
    q, f = m.quiver, m.field
    bases: list[Mat] = [Mat.zeros(f, m.dims[v], 0) for v in range(q.vertex_count)]
    while True:
        quot, proj = quotient_rep(m, bases)
        pieces: list[list[Mat]] = [[] for _ in range(q.vertex_count)]
        got = False
        for s_i in s.simples:
            for g in hom_space(s_i, quot).basis:
                for v in range(q.vertex_count):
                    if g.vertex_maps[v].cols:
                        pieces[v].append(g.vertex_maps[v])
                got = True
        if not got:
            return sub_rep(m, bases)
        new_bases: list[Mat] = []
        grew = False
        for v in range(q.vertex_count):
            if pieces[v]:
                w_basis = column_space_basis(hstack(pieces[v]))
            else:
                w_basis = Mat.zeros(f, quot.dims[v], 0)
            if w_basis.cols == 0:
                new_bases.append(bases[v])
                continue
            qmaps = quotient_maps(w_basis)
            pre = kernel_basis(qmaps.projection.mul(proj.vertex_maps[v]))
            new_bases.append(pre)
            if pre.cols > bases[v].cols:
                grew = True
        if not grew:
            return sub_rep(m, bases)
        bases = new_bases


def filt_membership(x: Rep, s: WellPlacedGen,
                    budget: int = DEFAULT_SEARCH_BUDGET) -> Optional[list[int]]:
    """Composition series of x inside the extension closure of the generators.

    Returns generator indices bottom-up (the last entry is the top
    quotient), or None when no filtration exists. The search enumerates
    surjections onto each generator and recurses on kernels, so it needs
    a prime field; running out of budget raises, distinct from None.
    """
    if not x.field.is_prime_field:
        raise UnsupportedFieldError("filtration search needs a prime field")
    remaining = [budget]
    memo: dict[Rep, Optional[list[int]]] = {}

    def search(y: Rep) -> Optional[list[int]]:
        if y.total_dim == 0:
            return []
        if y in memo:
            return memo[y]
        memo[y] = None  # cycle guard; dims strictly drop so none occur
        for i, s_i in enumerate(s.simples):
            hs = hom_space(y, s_i)
            if hs.dim == 0:
                continue
            for g in hs.elements():
                remaining[0] -= 1
                if remaining[0] < 0:
                    raise BudgetExceededError("filtration search budget exhausted")
                if g.is_zero() or not g.is_surjective():
                    continue
                k_rep, _ = kernel(g)
                below = search(k_rep)
                if below is not None:
                    memo[y] = below + [i]
                    return memo[y]
        return memo[y]

    return search(x)


def is_perp(x: Rep, s: WellPlacedGen) -> bool:
    """True when Hom(S_i, x) = 0 = Ext(S_i, x) for every generator."""
    return all(hom_space(s_i, x).dim == 0 and ext_space(s_i, x).dim == 0
               for s_i in s.simples)


@dataclass(frozen=True)
class LocalizationChain:
    """The directed system base = M_0 in M_1 in ... with quotients in filt(S).

    kernel is the torsion submodule quotiented away before the chain
    starts; stabilized means Hom and Ext from every generator vanish at
    the last term, which then computes the localised module exactly.
    """

    base: Rep
    steps: tuple[ShortExactSeq, ...]
    stabilized: bool
    kernel: Rep
    kernel_inclusion: RepMorphism
    base_projection: RepMorphism

    @property
    def value(self) -> Rep:
        return self.steps[-1].middle if self.steps else self.base

    def term(self, k: int) -> Rep:
        return self.base if k == 0 else self.steps[k - 1].middle

    @property
    def term_count(self) -> int:
        return len(self.steps) + 1

    def chain_inclusion(self) -> RepMorphism:
        """The composite inclusion base -> value."""
        out = identity_morphism(self.base)
        for st in self.steps:
            out = st.inclusion.compose(out)
        return out


@functools.lru_cache(maxsize=None)
def localize(m: Rep, s: WellPlacedGen,
             max_steps: int = DEFAULT_MAX_STEPS) -> LocalizationChain:
    """Localisation chain of m at the generator set.

    The torsion submodule is recorded and quotiented away; then universal
    extensions over all generators are adjoined until stabilization or
    max_steps. Non-stabilization is a status, not an error.
    """
    t_rep, t_incl = trace_torsion_submodule(m, s)
    base, proj = quotient_rep(m, [t_incl.vertex_maps[v]
                                  for v in range(m.quiver.vertex_count)])
    steps: list[ShortExactSeq] = []
    cur = base
    stabilized = False
    for _ in range(max_steps + 1):
        if is_perp(cur, s):
            stabilized = True
            break
        if len(steps) >= max_steps:
            break
        if all(ext_space(s_i, cur).dim == 0 for s_i in s.simples):
            break  # only Hom obstructions remain; extensions cannot help
        step = universal_extension(s.simples, cur)
        steps.append(step)
        cur = step.middle
    return LocalizationChain(base, tuple(steps), stabilized, t_rep, t_incl, proj)


@dataclass(frozen=True)
class InducedIsoVerdict:
    """Outcome of the induced-module isomorphism test.

    For an iso verdict, overmodule receives both torsion-free parts with
    quotients in the generated subcategory (seq_m and seq_n).
    """

    status: str  # "iso" | "not-iso" | "inconclusive"
    overmodule: Optional[Rep] = None
    seq_m: Optional[ShortExactSeq] = None
    seq_n: Optional[ShortExactSeq] = None


def _ses_into(incl: RepMorphism) -> ShortExactSeq:
    _, proj = cokernel(incl)
    return ShortExactSeq(incl, proj)


def induced_iso_test(m: Rep, n: Rep, s: WellPlacedGen,
                     budget: int = DEFAULT_SEARCH_BUDGET,
                     max_steps: int = DEFAULT_MAX_STEPS) -> InducedIsoVerdict:
    """Decide whether m and n induce isomorphic localised modules.

    Torsion parts are quotiented away first. If both chains stabilize the
    stabilized values are compared directly; otherwise the chains are
    advanced in lockstep and each level is searched for an embedding of
    one torsion-free part into the other's chain with quotient in
    filt(S). Budget exhaustion yields an inconclusive verdict.
    """
    chain_m = localize(m, s, max_steps)
    chain_n = localize(n, s, max_steps)
    base_m, base_n = chain_m.base, chain_n.base
    if chain_m.stabilized and chain_n.stabilized:
        w = iso_witness(chain_n.value, chain_m.value)
        if w is None:
            return InducedIsoVerdict("not-iso")
        incl_m = chain_m.chain_inclusion()
        incl_n = w.compose(chain_n.chain_inclusion())
        seq_m = _ses_into(incl_m)
        seq_n = _ses_into(incl_n)
        for quot in (seq_m.quotient, seq_n.quotient):
            if filt_membership(quot, s, budget) is None:
                raise AssertionError("chain quotient escaped filt(S)")
        return InducedIsoVerdict("iso", chain_m.value, seq_m, seq_n)
    # dimension bound: a stabilized value caps every submodule of the colimit
    for a, b in ((chain_m, chain_n), (chain_n, chain_m)):
        if a.stabilized:
            cap = a.value.dims
            if any(d > c for d, c in zip(b.value.dims, cap)):
                return InducedIsoVerdict("not-iso")
    remaining = [budget]
    budget_hit = False
    for k in range(max(chain_m.term_count, chain_n.term_count)):
        for src, host in ((base_n, chain_m), (base_m, chain_n)):
            if k >= host.term_count:
                continue
            tgt = host.term(k)
            if any(d > e for d, e in zip(src.dims, tgt.dims)):
                continue
            hs = hom_space(src, tgt)
            if hs.dim == 0:
                continue  # zero torsion-free parts were settled above
            try:
                elems = hs.elements()
            except UnsupportedFieldError:
                return InducedIsoVerdict("inconclusive")
            for g in elems:
                remaining[0] -= 1
                if remaining[0] < 0:
                    return InducedIsoVerdict("inconclusive")
                if not g.is_injective():
                    continue
                quot, _ = cokernel(g)
                try:
                    series = filt_membership(quot, s, remaining[0])
                except BudgetExceededError:
                    budget_hit = True
                    continue
                if series is None:
                    continue
                # embedding found: the host term is a common overmodule
                incl_host = _compose_chain_prefix(host, k)
                seq_host = _ses_into(incl_host)
                seq_src = _ses_into(g)
                if host is chain_m:
                    return InducedIsoVerdict("iso", tgt, seq_host, seq_src)
                return InducedIsoVerdict("iso", tgt, seq_src, seq_host)
    return InducedIsoVerdict("inconclusive")


def _compose_chain_prefix(chain: LocalizationChain, k: int) -> RepMorphism:
    out = identity_morphism(chain.base)
    for st in chain.steps[:k]:
        out = st.inclusion.compose(out)
    return out


def homperp_membership(x: Rep, s: WellPlacedGen) -> bool:
    """True when x is bound and has no Hom to or from any generator."""
    if not is_bound(x):
        return False
    return all(hom_space(x, s_i).dim == 0 and hom_space(s_i, x).dim == 0
               for s_i in s.simples)


@dataclass(frozen=True)
class ReduceResult:
    """Result of descending to the Hom-perpendicular core.

    submodule is the final term of the descending chain, inclusion its
    embedding into the input, series the generator indices of the
    stripped quotients (top first). status is "bound-compatible" when
    every nonzero morphism to a generator seen during the descent was
    surjective, "projective-summand-detected" when a non-surjective one
    was seen (the input cannot induce a bound module), and
    "not-torsion-free-input" when the precondition Hom(S_i, m) = 0
    failed.
    """

    submodule: Rep
    inclusion: RepMorphism
    status: str
    series: tuple[int, ...]


def reduce_to_homperp(m: Rep, s: WellPlacedGen,
                      budget: int = DEFAULT_SEARCH_BUDGET) -> ReduceResult:
    """Descend along surjections onto generators until no outgoing Hom remains."""
    torsion_free = all(hom_space(s_i, m).dim == 0 for s_i in s.simples)
    cur = m
    incl = identity_morphism(m)
    series: list[int] = []
    saw_nonsurjective = False
    remaining = budget
    progress = True
    while progress:
        progress = False
        for i, s_i in enumerate(s.simples):
            hs = hom_space(cur, s_i)
            if hs.dim == 0:
                continue
            chosen = None
            for g in hs.elements():
                remaining -= 1
                if remaining < 0:
                    raise BudgetExceededError("descent budget exhausted")
                if g.is_zero():
                    continue
                if g.is_surjective():
                    if chosen is None:
                        chosen = g
                else:
                    saw_nonsurjective = True
            if chosen is not None:
                k_rep, k_incl = kernel(chosen)
                cur = k_rep
                incl = incl.compose(k_incl)
                series.append(i)
                progress = True
                break
    if not torsion_free:
        status = "not-torsion-free-input"
    elif saw_nonsurjective:
        status = "projective-summand-detected"
    else:
        status = "bound-compatible"
    return ReduceResult(cur, incl, status, tuple(series))


@dataclass(frozen=True)
class LocalizedAlgebra:
    """The localised algebra as End of the sum of localised projectives, opposite.

    Basis elements are indexed by triples (v, w, k): the k-th basis
    morphism from the stabilized localisation of P_v to that of P_w.
    structure_constants[x, y] expands the opposite-algebra product
    e_x e_y = (f_y . f_x) in the basis; idempotents are the images of
    the indecomposable projectives.
    """

    gen_set: WellPlacedGen
    values: tuple[Rep, ...]
    basis_index: tuple[tuple[int, int, int], ...]
    basis_dims: tuple[tuple[int, ...], ...]
    structure_constants: dict
    idempotents: tuple[tuple, ...]

    @property
    def total_dimension(self) -> int:
        return len(self.basis_index)

    def multiply(self, x: int, y: int) -> dict[int, object]:
        """Product of two basis elements as a sparse coefficient vector."""
        return dict(self.structure_constants.get((x, y), ()))

    def multiply_vectors(self, a: dict[int, object], b: dict[int, object],
                         ) -> dict[int, object]:
        f = self.gen_set.field
        out: dict[int, object] = {}
        for x, ca in a.items():
            for y, cb in b.items():
                c = f.mul(ca, cb)
                if c == f.zero:
                    continue
                for z, cz in self.structure_constants.get((x, y), ()):
                    val = f.add(out.get(z, f.zero), f.mul(c, cz))
                    if val == f.zero:
                        out.pop(z, None)
                    else:
                        out[z] = val
        return out

    def unit(self) -> dict[int, object]:
        f = self.gen_set.field
        out: dict[int, object] = {}
        for e in self.idempotents:
            for z, c in e:
                out[z] = f.add(out.get(z, f.zero), c)
        return out

    def _summands(self) -> tuple[list[Rep], list[int]]:
        """All indecomposable summands of the values, with class indices."""
        parts: list[Rep] = []
        for v_rep in self.values:
            ps, _ = decompose_with_witness(v_rep)
            parts.extend(ps)
        classes: list[int] = []
        reps_of_class: list[Rep] = []
        for p in parts:
            found = None
            for ci, r in enumerate(reps_of_class):
                if p.dims == r.dims and iso_witness(p, r) is not None:
                    found = ci
                    break
            if found is None:
                reps_of_class.append(p)
                found = len(reps_of_class) - 1
            classes.append(found)
        return parts, classes

    def radical_dimension(self) -> int:
        """Dimension of the Jacobson radical.

        Block (s, t) contributes all of Hom(U_s, U_t) when the summands
        are non-isomorphic and the non-invertible subspace when they are
        isomorphic; for a local endomorphism algebra over F_p the latter
        is enumerated exhaustively.
        """
        parts, classes = self._summands()
        total = 0
        for i, u in enumerate(parts):
            for j, w in enumerate(parts):
                d = len(hom_basis_maps(u, w))
                if classes[i] != classes[j]:
                    total += d
                else:
                    total += _local_radical_dim(u)
        return total

    def indecomposable_class_count(self) -> int:
        _, classes = self._summands()
        return len(set(classes))

    def presentation_quiver(self) -> tuple[Quiver, list[Rep]]:
        """Quiver presenting the basic algebra, plus one summand per vertex.

        Vertex i stands for the i-th isomorphism class of indecomposable
        summand; the number of arrows i -> j is dim rad/rad^2 of the
        morphisms from the j-th class to the i-th.
        """
        parts, classes = self._summands()
        reps: list[Rep] = []
        for p, c in zip(parts, classes):
            if c == len(reps):
                reps.append(p)
        n = len(reps)
        rad_bases: dict[tuple[int, int], list[tuple]] = {}
        for i in range(n):
            for j in range(n):
                rad_bases[(i, j)] = _radical_hom_basis(reps[i], reps[j])
        arrows: list[tuple[int, int]] = []
        for i in range(n):
            for j in range(n):
                flat = rad_bases[(j, i)]
                if not flat:
                    continue
                sq_rows: list[tuple] = []
                for k in range(n):
                    for a_fl in rad_bases[(j, k)]:
                        for b_fl in rad_bases[(k, i)]:
                            sq_rows.append(_compose_flat(reps[j], reps[k], reps[i],
                                                         a_fl, b_fl))
                field = self.gen_set.field
                dim_rad = len(flat)
                dim_sq = 0
                if sq_rows:
                    mat = Mat(len(sq_rows), len(sq_rows[0]), field,
                              tuple(x for r in sq_rows for x in r))
                    dim_sq = rank(mat)
                for _ in range(dim_rad - dim_sq):
                    arrows.append((i, j))
        return Quiver(n, tuple(arrows)), reps


def _flatten_maps(maps: Sequence[Mat]) -> tuple:
    out: list = []
    for m in maps:
        out.extend(m.entries)
    return tuple(out)


def _local_radical_dim(u: Rep) -> int:
    """dim of the non-invertible subspace of End(u), u indecomposable."""
    f = u.field
    basis = hom_basis_maps(u, u)
    d = len(basis)
    if d == 0:
        return 0
    if not f.is_prime_field:
        if d == 1:
            return 0
        raise UnsupportedFieldError("radical over the rationals needs End = Q")
    import itertools as it
    count = 0
    nverts = u.quiver.vertex_count
    from .quiverrep import _combo_maps, _invertible_candidate
    for coeffs in it.product(range(f.p), repeat=d):
        maps = _combo_maps(basis, coeffs, f, nverts)
        if not _invertible_candidate(maps):
            count += 1
    dim = 0
    while f.p ** dim < count:
        dim += 1
    if f.p ** dim != count:
        raise AssertionError("non-invertible endomorphisms not a subspace")
    return dim


def _radical_hom_basis(u: Rep, w: Rep) -> list[tuple]:
    """Flattened basis of the non-isomorphism morphisms u -> w."""
    f = u.field
    basis = hom_basis_maps(u, w)
    if not basis:
        return []
    if u.dims != w.dims or iso_witness(u, w) is None:
        return [_flatten_maps(b) for b in basis]
    import itertools as it
    from .quiverrep import _combo_maps, _invertible_candidate
    nverts = u.quiver.vertex_count
    rows: list[tuple] = []
    for coeffs in it.product(range(f.p), repeat=len(basis)):
        maps = _combo_maps(basis, coeffs, f, nverts)
        if not _invertible_candidate(maps):
            rows.append(_flatten_maps(maps))
    if not rows:
        return []
    mat = Mat(len(rows), len(rows[0]), f, tuple(x for r in rows for x in r))
    red = row_space_rref(mat)
    return [tuple(red.entries[i * red.cols:(i + 1) * red.cols])
            for i in range(red.rows)]


def _compose_flat(src: Rep, mid: Rep, tgt: Rep, a_flat: tuple, b_flat: tuple,
                  ) -> tuple:
    """Flattened composite of flattened morphisms src->mid and mid->tgt."""
    f = src.field
    nverts = src.quiver.vertex_count
    a_maps, b_maps = [], []
    off = 0
    for v in range(nverts):
        size = mid.dims[v] * src.dims[v]
        a_maps.append(Mat(mid.dims[v], src.dims[v], f,
                          tuple(a_flat[off:off + size])))
        off += size
    off = 0
    for v in range(nverts):
        size = tgt.dims[v] * mid.dims[v]
        b_maps.append(Mat(tgt.dims[v], mid.dims[v], f,
                          tuple(b_flat[off:off + size])))
        off += size
    return _flatten_maps([b_maps[v].mul(a_maps[v]) for v in range(nverts)])


def localized_algebra(s: WellPlacedGen,
                      max_steps: int = DEFAULT_MAX_STEPS) -> LocalizedAlgebra:
    """The localised algebra, when every projective's chain stabilizes.

    Raises NonStabilizingError naming the first offending vertex when a
    chain fails to stabilize within max_steps (the localisation is then
    flagged as infinite-dimensional over the ground field, though only
    the bound is certified).
    """
    q, f = s.quiver, s.field
    values = []
    for v in range(q.vertex_count):
        chain = localize(projective_rep(q, v, f), s, max_steps)
        if not chain.stabilized:
            raise NonStabilizingError(
                f"infinite-dimensional localisation: chain of the projective at "
                f"vertex {v} did not stabilize within {max_steps} steps", vertex=v)
        values.append(chain.value)
    nv = q.vertex_count
    hom_bases = [[hom_basis_maps(values[v], values[w]) for w in range(nv)]
                 for v in range(nv)]
    basis_index: list[tuple[int, int, int]] = []
    block_offset: dict[tuple[int, int], int] = {}
    for v in range(nv):
        for w in range(nv):
            block_offset[(v, w)] = len(basis_index)
            for k in range(len(hom_bases[v][w])):
                basis_index.append((v, w, k))
    basis_dims = tuple(tuple(len(hom_bases[v][w]) for w in range(nv))
                       for v in range(nv))

    def coords_in_block(v: int, w: int, maps: Sequence[Mat]) -> list:
        basis = hom_bases[v][w]
        if not basis:
            if all(m.is_zero() for m in maps):
                return []
            raise AssertionError("morphism outside its Hom space")
        cols = [_flatten_maps(b) for b in basis]
        rhs = _flatten_maps(maps)
        nrows = len(rhs)
        mat = Mat(nrows, len(cols), f,
                  tuple(cols[j][i] for i in range(nrows) for j in range(len(cols))))
        sol = solve(mat, Mat(nrows, 1, f, rhs))
        if sol is None:
            raise AssertionError("morphism outside its Hom space")
        return list(sol.entries)

    structure: dict[tuple[int, int], tuple] = {}
    for xi, (v1, w1, k1) in enumerate(basis_index):
        for yi, (v2, w2, k2) in enumerate(basis_index):
            if w1 != v2:
                continue
            # opposite algebra: e_x e_y = f_y after f_x, a map V_v1 -> V_w2
            fx = hom_bases[v1][w1][k1]
            fy = hom_bases[v2][w2][k2]
            comp = [fy[v].mul(fx[v]) for v in range(nv)]
            coeffs = coords_in_block(v1, w2, comp)
            off = block_offset[(v1, w2)]
            entries = tuple((off + j, c) for j, c in enumerate(coeffs)
                            if c != f.zero)
            if entries:
                structure[(xi, yi)] = entries
    idempotents = []
    for v in range(nv):
        ident = [Mat.identity(f, d) for d in values[v].dims]
        coeffs = coords_in_block(v, v, ident)
        off = block_offset[(v, v)]
        idempotents.append(tuple((off + j, c) for j, c in enumerate(coeffs)
                                 if c != f.zero))
    alg = LocalizedAlgebra(s, tuple(values), tuple(basis_index), basis_dims,
                           structure, tuple(idempotents))
    _validate_algebra(alg)
    return alg


def _validate_algebra(alg: LocalizedAlgebra) -> None:
    f = alg.gen_set.field
    unit = alg.unit()
    n = alg.total_dimension
    for x in range(n):
        ex = {x: f.one}
        if alg.multiply_vectors(unit, ex) != ex or alg.multiply_vectors(ex, unit) != ex:
            raise AssertionError("unit fails on a basis element")
    # orthogonal idempotents
    for i, e in enumerate(alg.idempotents):
        for j, g in enumerate(alg.idempotents):
            prod = alg.multiply_vectors(dict(e), dict(g))
            expect = dict(e) if i == j else {}
            if prod != expect:
                raise AssertionError("idempotents not orthogonal")
    # associativity on basis triples (composition of maps is associative,
    # so failures would mean wrong coordinates)
    for x in range(n):
        ex = {x: f.one}
        for y in range(n):
            ey = {y: f.one}
            xy = alg.multiply_vectors(ex, ey)
            for z in range(n):
                ez = {z: f.one}
                lhs = alg.multiply_vectors(xy, ez)
                rhs = alg.multiply_vectors(ex, alg.multiply_vectors(ey, ez))
                if lhs != rhs:
                    raise AssertionError("multiplication not associative")


@dataclass(frozen=True)
class ClosureCheck:
    kind: str
    description: str
    passed: bool
    budget_exhausted: bool = False


@dataclass(frozen=True)
class ClosureReport:
    """Sampled verification that the generated subcategory is closed.

    A counterexample would indicate an implementation bug, never new
    mathematics: closure is a theorem.
    """

    checks: tuple[ClosureCheck, ...]
    samples_generated: int

    @property
    def counterexamples(self) -> tuple[ClosureCheck, ...]:
        return tuple(c for c in self.checks if not c.passed and not c.budget_exhausted)

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def verify_well_placed(s: WellPlacedGen, budget: int = 2000,
                       max_length: int = 3, seed: int = 0) -> ClosureReport:
    """Sample filt(S) members and morphisms; verify closure properties.

    Members are built by iterated random extensions up to max_length
    composition factors; kernels, images, cokernels of random morphisms
    between them and random extension middles are then checked for
    membership via filtration search.
    """
    rng = random.Random(seed)
    checks: list[ClosureCheck] = []
    if not s.simples:
        return ClosureReport((), 0)
    samples: list[tuple[Rep, int]] = [(x, 1) for x in s.simples]
    grow_tries = min(budget, 40)
    for _ in range(grow_tries):
        (x, lx) = rng.choice(samples)
        (y, ly) = rng.choice(samples)
        if lx + ly > max_length:
            continue
        ext = ext_space(y, x)
        if ext.dim == 0:
            continue
        coeffs = [rng.randrange(s.field.p) for _ in range(ext.dim)]
        if all(c == 0 for c in coeffs):
            coeffs[0] = 1
        middle = extension_from_class(ext.element(coeffs)).middle
        if len(samples) < 25:
            samples.append((middle, lx + ly))
    n_checks = min(budget, 60)
    filt_budget = max(1000, budget)

    def filt_ok(z: Rep) -> tuple[bool, bool]:
        try:
            return filt_membership(z, s, filt_budget) is not None, False
        except BudgetExceededError:
            return False, True

    for _ in range(n_checks):
        (x, _), (y, _) = rng.choice(samples), rng.choice(samples)
        hs = hom_space(x, y)
        coeffs = [rng.randrange(s.field.p) for _ in range(hs.dim)]
        g = hs.element(coeffs) if hs.dim else None
        if g is not None:
            for kind, rep_ in (("kernel", kernel(g)[0]),
                               ("image", image(g)[0]),
                               ("cokernel", cokernel(g)[0])):
                okk, bh = filt_ok(rep_)
                checks.append(ClosureCheck(
                    kind, f"{kind} of a morphism {x.dims} -> {y.dims}",
                    okk or bh, bh))
        ext = ext_space(y, x)
        if ext.dim:
            coeffs = [rng.randrange(s.field.p) for _ in range(ext.dim)]
            mid = extension_from_class(ext.element(coeffs)).middle
            okk, bh = filt_ok(mid)
            checks.append(ClosureCheck(
                "extension", f"extension of {y.dims} by {x.dims}", okk or bh, bh))
    return ClosureReport(tuple(checks), len(samples))
