"""Hom and Ext spaces, extension realization, and boundness.

Over a path algebra of an acyclic quiver the standard projective
resolution of a representation has length one, so Hom(M, N) is the kernel
and Ext(M, N) the cokernel of the single difference map

    D: (+)_v Hom(M_v, N_v) -> (+)_{a: i->j} Hom(M_i, N_j),
    (f_v) |-> (N_a f_i - f_j M_a).

Higher Ext groups vanish identically and are not represented.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .errors import UnsupportedFieldError
from .exactlin import (
    Mat,
    column_space_basis,
    complement_pivots,
    hstack,
    solve,
    vstack,
)
from .quiverrep import (
    Rep,
    RepMorphism,
    ShortExactSeq,
    _difference_map,
    direct_sum,
    hom_basis_maps,
    identity_morphism,
    image,
    make_rep,
    projective_rep,
    simple_rep,
)


@dataclass(frozen=True)
class HomSpace:
    """Basis of the space of morphisms source -> target."""

    source: Rep
    target: Rep
    basis: tuple[RepMorphism, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def element(self, coeffs: Sequence) -> RepMorphism:
        """Linear combination of the basis with the given coefficients."""
        if len(coeffs) != self.dim:
            raise ValueError("one coefficient per basis element required")
        out = None
        f = self.source.field
        for c, b in zip(coeffs, self.basis):
            cc = f.coerce(c)
            if cc == f.zero:
                continue
            term = b if cc == f.one else b.scale(cc)
            out = term if out is None else out.add(term)
        if out is None:
            from .quiverrep import zero_morphism
            return zero_morphism(self.source, self.target)
        return out

    def elements(self) -> Iterator[RepMorphism]:
        """All elements of the space. Prime fields only."""
        f = self.source.field
        if not f.is_prime_field:
            raise UnsupportedFieldError("cannot enumerate Hom over the rationals")
        for coeffs in itertools.product(range(f.p), repeat=self.dim):
            yield self.element(coeffs)


@dataclass(frozen=True)
class ExtCocycle:
    """A class in Ext(source, target), given by one matrix per arrow.

    components[a] lies in Hom(source_i, target_j) for the arrow a: i->j.
    """

    source: Rep
    target: Rep
    components: tuple[Mat, ...]

    def add(self, other: "ExtCocycle") -> "ExtCocycle":
        return ExtCocycle(self.source, self.target,
                          tuple(a.add(b) for a, b in
                                zip(self.components, other.components)))

    def scale(self, c: object) -> "ExtCocycle":
        return ExtCocycle(self.source, self.target,
                          tuple(m.scale(c) for m in self.components))

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.components)


@dataclass(frozen=True)
class ExtSpace:
    """Ext(source, target) with chosen cocycle representatives.

    Representatives are the standard basis vectors at the non-pivot
    coordinates of the image of the difference map, taken in
    arrow-component order, so extension middles are reproducible.
    """

    source: Rep
    target: Rep
    dim: int
    cocycle_basis: tuple[ExtCocycle, ...]

    def zero_class(self) -> ExtCocycle:
        f = self.source.field
        comps = []
        for a, (s, t) in enumerate(self.source.quiver.arrows):
            comps.append(Mat.zeros(f, self.target.dims[t], self.source.dims[s]))
        return ExtCocycle(self.source, self.target, tuple(comps))

    def element(self, coeffs: Sequence) -> ExtCocycle:
        if len(coeffs) != self.dim:
            raise ValueError("one coefficient per basis class required")
        out = self.zero_class()
        f = self.source.field
        for c, b in zip(coeffs, self.cocycle_basis):
            cc = f.coerce(c)
            if cc != f.zero:
                out = out.add(b.scale(cc))
        return out

    def all_classes(self) -> Iterator[ExtCocycle]:
        """Every class of the space. Prime fields only."""
        f = self.source.field
        if not f.is_prime_field:
            raise UnsupportedFieldError("cannot enumerate Ext over the rationals")
        for coeffs in itertools.product(range(f.p), repeat=self.dim):
            yield self.element(coeffs)


@functools.lru_cache(maxsize=None)
def hom_space(m: Rep, n: Rep) -> HomSpace:
    """Hom(m, n) as the kernel of the difference map."""
    basis = tuple(RepMorphism(m, n, maps, check=False)
                  for maps in hom_basis_maps(m, n))
    return HomSpace(m, n, basis)


@functools.lru_cache(maxsize=None)
def ext_space(m: Rep, n: Rep) -> ExtSpace:
    """Ext(m, n) as the cokernel of the difference map."""
    d_mat, row_blocks = _difference_map(m, n)
    f = m.field
    img = column_space_basis(d_mat)
    free_coords = complement_pivots(img)
    cocycles = []
    for coord in free_coords:
        comps = []
        for a, (s, t) in enumerate(m.quiver.arrows):
            off, size = row_blocks[a]
            rows, cols = n.dims[t], m.dims[s]
            ents = [f.zero] * size
            if off <= coord < off + size:
                ents[coord - off] = f.one
            comps.append(Mat(rows, cols, f, tuple(ents)))
        cocycles.append(ExtCocycle(m, n, tuple(comps)))
    return ExtSpace(m, n, len(cocycles), tuple(cocycles))


def extension_from_class(e: ExtCocycle) -> ShortExactSeq:
    """Realize a class in Ext(C, A) as 0 -> A -> X -> C -> 0.

    X_v = A_v (+) C_v with arrow maps [[A_a, e_a], [0, C_a]]; the zero
    class yields the split extension.
    """
    a_rep, c_rep = e.target, e.source
    q, f = a_rep.quiver, a_rep.field
    dims = tuple(a_rep.dims[v] + c_rep.dims[v] for v in range(q.vertex_count))
    maps: dict[int, Mat] = {}
    for a, (s, t) in enumerate(q.arrows):
        top = hstack([a_rep.maps[a], e.components[a]])
        bottom = hstack([Mat.zeros(f, c_rep.dims[t], a_rep.dims[s]),
                         c_rep.maps[a]])
        maps[a] = vstack([top, bottom])
    x_rep = make_rep(q, f, dims, maps)
    incl_maps, proj_maps = [], []
    for v in range(q.vertex_count):
        da, dc = a_rep.dims[v], c_rep.dims[v]
        incl_maps.append(vstack([Mat.identity(f, da), Mat.zeros(f, dc, da)]))
        proj_maps.append(hstack([Mat.zeros(f, dc, da), Mat.identity(f, dc)]))
    incl = RepMorphism(a_rep, x_rep, tuple(incl_maps))
    proj = RepMorphism(x_rep, c_rep, tuple(proj_maps))
    return ShortExactSeq(incl, proj)


def universal_extension(gens: Sequence[Rep], m: Rep) -> ShortExactSeq:
    """One chain step: adjoin a basis of Ext(S_i, m) for every generator.

    Returns 0 -> m -> m' -> (+) S_i^{r_i} -> 0 with r_i = dim Ext(S_i, m).
    When every Ext vanishes the quotient is the zero representation and
    the step is trivial.
    """
    if not gens:
        raise ValueError("universal extension needs at least one generator")
    q, f = m.quiver, m.field
    pieces: list[Rep] = []
    cocycle_blocks: list[ExtCocycle] = []
    for s_i in gens:
        ext = ext_space(s_i, m)
        for b in ext.cocycle_basis:
            pieces.append(s_i)
            cocycle_blocks.append(b)
    c_rep = direct_sum(pieces, quiver=q, field=f)
    comps = []
    for a, (s, t) in enumerate(q.arrows):
        blocks = [b.components[a] for b in cocycle_blocks]
        if blocks:
            comps.append(hstack(blocks))
        else:
            comps.append(Mat.zeros(f, m.dims[t], 0))
    big = ExtCocycle(c_rep, m, tuple(comps))
    return extension_from_class(big)


def is_bound(m: Rep) -> bool:
    """True when Hom(m, R) = 0, i.e. no nonzero map to any projective."""
    q = m.quiver
    return all(hom_space(m, projective_rep(q, v, m.field)).dim == 0
               for v in range(q.vertex_count))


def is_projective(m: Rep) -> bool:
    """True when Ext(m, -) vanishes; checked on the simple modules."""
    q = m.quiver
    return all(ext_space(m, simple_rep(q, m.field, v)).dim == 0
               for v in range(q.vertex_count))


def _flatten_morphism(g: RepMorphism) -> tuple:
    out: list = []
    for m in g.vertex_maps:
        out.extend(m.entries)
    return tuple(out)


def factor_through(pre: RepMorphism, h: RepMorphism) -> Optional[RepMorphism]:
    """g with g . pre = h, or None; linear solve over Hom(pre.target, h.target)."""
    if pre.source != h.source:
        raise ValueError("factor_through needs a common source")
    basis = hom_space(pre.target, h.target).basis
    f = pre.source.field
    cols = [_flatten_morphism(b.compose(pre)) for b in basis]
    rhs = _flatten_morphism(h)
    nrows = len(rhs)
    mat = Mat(nrows, len(cols), f,
              tuple(cols[j][i] for i in range(nrows) for j in range(len(cols))))
    sol = solve(mat, Mat(nrows, 1, f, rhs))
    if sol is None:
        return None
    return hom_space(pre.target, h.target).element(sol.entries)


def lift_along(post: RepMorphism, h: RepMorphism) -> Optional[RepMorphism]:
    """g with post . g = h, or None; linear solve over Hom(h.source, post.source)."""
    if post.target != h.target:
        raise ValueError("lift_along needs a common target")
    basis = hom_space(h.source, post.source).basis
    f = post.source.field
    cols = [_flatten_morphism(post.compose(b)) for b in basis]
    rhs = _flatten_morphism(h)
    nrows = len(rhs)
    mat = Mat(nrows, len(cols), f,
              tuple(cols[j][i] for i in range(nrows) for j in range(len(cols))))
    sol = solve(mat, Mat(nrows, 1, f, rhs))
    if sol is None:
        return None
    return hom_space(h.source, post.source).element(sol.entries)


def section_of_surjection(p: RepMorphism) -> RepMorphism:
    """A right inverse of a split surjection between representations."""
    sec = lift_along(p, identity_morphism(p.target))
    if sec is None:
        raise ValueError("surjection does not split")
    return sec


def split_projective_map(f: RepMorphism) -> list[RepMorphism]:
    """Replace a map between projectives by injective maps, same localisation.

    An injective map is returned unchanged. Otherwise the image I is
    itself projective, f factors as a split surjection p: P -> I followed
    by an injective f': I -> Q, and inverting f is equivalent to
    inverting f' together with the split injection I -> P given by a
    section of p.
    """
    if not (is_projective(f.source) and is_projective(f.target)):
        raise ValueError("split_projective_map needs projective source and target")
    if f.is_injective():
        return [f]
    _, incl, surj = image(f)
    section = section_of_surjection(surj)
    return [incl, section]


def sigma_to_generators(maps: Sequence[RepMorphism]) -> list[Rep]:
    """Cokernels of the injective replacements of a set of maps.

    These generate the category of modules killed by the localisation;
    each has homological dimension at most one by construction.
    """
    from .quiverrep import cokernel
    out: list[Rep] = []
    for f in maps:
        for g in split_projective_map(f):
            out.append(cokernel(g)[0])
    return out
