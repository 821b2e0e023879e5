"""Finitely generated projectives over the localisation.

Membership in the relative-projective and torsion-factor categories,
Tor_1 by two independent routes, top-stripping, the S-relatedness walk,
late/early probes, and presentations of the projective monoid and of K_0.
All searches are budget-bounded and deterministic.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import BudgetExceededError, NonStabilizingError
from .quiverrep import (
    Rep,
    RepMorphism,
    ShortExactSeq,
    cokernel,
    copairing,
    decompose_with_witness,
    direct_sum,
    direct_sum_with_maps,
    enumerate_reps,
    identity_morphism,
    iso_witness,
    kernel,
    projective_cover,
    projective_rep,
    quotient_rep,
    submodule_enumerate,
    zero_rep,
)
from .homcalc import (
    ext_space,
    extension_from_class,
    factor_through,
    hom_space,
    is_projective,
)
from .localise import (
    DEFAULT_MAX_STEPS,
    DEFAULT_SEARCH_BUDGET,
    LocalizationChain,
    WellPlacedGen,
    filt_membership,
    induced_iso_test,
    localize,
    trace_torsion_submodule,
)


def fac_membership(m: Rep, s: WellPlacedGen) -> bool:
    """True when m is its own torsion submodule (a factor of filt(S))."""
    t, _ = trace_torsion_submodule(m, s)
    return t.total_dim == m.total_dim


# --- relproj membership -------------------------------------------------------


@dataclass(frozen=True)
class RelprojCertificate:
    """Member certificate: torsion series plus an embedding of the
    torsion-free part into an extension of projectives by filt(S)."""

    torsion_series: tuple[int, ...]
    overmodule: Rep
    embedding: RepMorphism


@dataclass(frozen=True)
class RelprojVerdict:
    status: str  # "member" | "non-member" | "inconclusive"
    certificate: Optional[RelprojCertificate] = None
    witness_kind: Optional[str] = None
    witness: Optional[Rep] = None


@functools.lru_cache(maxsize=None)
def _projective_chains(s: WellPlacedGen, max_steps: int,
                       ) -> Optional[tuple[LocalizationChain, ...]]:
    chains = []
    for v in range(s.quiver.vertex_count):
        c = localize(projective_rep(s.quiver, v, s.field), s, max_steps)
        if not c.stabilized:
            return None
        chains.append(c)
    return tuple(chains)


def _match_against(parts: Sequence[Rep], catalog: Sequence[Rep]) -> Optional[list[int]]:
    out = []
    for p in parts:
        found = None
        for i, c in enumerate(catalog):
            if p.dims == c.dims and iso_witness(p, c) is not None:
                found = i
                break
        if found is None:
            return None
        out.append(found)
    return out


def relproj_membership(m: Rep, s: WellPlacedGen,
                       budget: int = DEFAULT_SEARCH_BUDGET,
                       max_steps: int = DEFAULT_MAX_STEPS) -> RelprojVerdict:
    """Decide membership in the category of modules projective over the
    perpendicular category.

    The torsion part must filter through the generators; the torsion-free
    part must localise to a direct sum of summands of localised
    projectives. Non-stabilizing cases fall back to a bounded search for
    a chain term splitting as projective plus filt(S), and end
    inconclusive when nothing is found.
    """
    t_rep, t_incl = trace_torsion_submodule(m, s)
    try:
        series = filt_membership(t_rep, s, budget)
    except BudgetExceededError:
        return RelprojVerdict("inconclusive")
    if series is None:
        return RelprojVerdict("non-member", witness_kind="torsion-not-in-filt",
                              witness=t_rep)
    base, _ = quotient_rep(m, [t_incl.vertex_maps[v]
                               for v in range(m.quiver.vertex_count)])
    if base.total_dim == 0:
        return RelprojVerdict("member", RelprojCertificate(
            tuple(series), base, identity_morphism(base)))
    parts, _ = decompose_with_witness(base)
    projectives = [projective_rep(m.quiver, v, m.field)
                   for v in range(m.quiver.vertex_count)]
    if _match_against(parts, projectives) is not None:
        return RelprojVerdict("member", RelprojCertificate(
            tuple(series), base, identity_morphism(base)))
    chain = localize(base, s, max_steps)
    if chain.stabilized:
        chains = _projective_chains(s, max_steps)
        if chains is None:
            return RelprojVerdict("inconclusive")
        catalog: list[Rep] = []
        owners: list[int] = []
        for v, c in enumerate(chains):
            ps, _ = decompose_with_witness(c.value)
            for p in ps:
                catalog.append(p)
                owners.append(v)
        val_parts, val_wit = decompose_with_witness(chain.value)
        matched = _match_against(val_parts, catalog)
        if matched is None:
            return RelprojVerdict("non-member",
                                  witness_kind="non-projective-localization",
                                  witness=chain.value)
        over_parts = [chains[owners[i]].value for i in matched]
        overmodule, injections, _ = direct_sum_with_maps(
            over_parts, quiver=m.quiver, field=m.field)
        legs = []
        sum_parts, _, part_projs = direct_sum_with_maps(
            list(val_parts), quiver=m.quiver, field=m.field)
        for k, cat_i in enumerate(matched):
            w = iso_witness(val_parts[k], catalog[cat_i])
            assert w is not None
            owner_chain = chains[owners[cat_i]]
            ps, wit = decompose_with_witness(owner_chain.value)
            _, ps_inj, _ = direct_sum_with_maps(list(ps), quiver=m.quiver,
                                                field=m.field)
            local_idx = sum(1 for j in range(cat_i)
                            if owners[j] == owners[cat_i])
            incl_part = wit.compose(ps_inj[local_idx])
            legs.append(injections[k].compose(incl_part).compose(w)
                        .compose(part_projs[k]))
        total = legs[0]
        for leg in legs[1:]:
            total = total.add(leg)
        embed_sum = RepMorphism(sum_parts, overmodule, total.vertex_maps,
                                check=False)
        embedding = embed_sum.compose(val_wit.inverse()) \
                             .compose(chain.chain_inclusion())
        if not embedding.is_injective():
            raise AssertionError("relproj certificate embedding not injective")
        return RelprojVerdict("member", RelprojCertificate(
            tuple(series), overmodule, embedding))
    # chain open-ended; look for a term splitting as projective (+) filt
    for k in range(chain.term_count):
        term = chain.term(k)
        ps, _ = decompose_with_witness(term)
        ok = True
        for p in ps:
            if _match_against([p], projectives) is not None:
                continue
            try:
                if filt_membership(p, s, budget) is not None:
                    continue
            except BudgetExceededError:
                return RelprojVerdict("inconclusive")
            ok = False
            break
        if ok:
            prefix = identity_morphism(chain.base)
            for st in chain.steps[:k]:
                prefix = st.inclusion.compose(prefix)
            return RelprojVerdict("member", RelprojCertificate(
                tuple(series), term, prefix))
    return RelprojVerdict("inconclusive")


# --- Tor_1 ---------------------------------------------------------------------


def _filt_closure_members(s: WellPlacedGen, dim_cap: int, budget: int,
                          ) -> list[Rep]:
    """Iterated extension closure of the generators up to a total dimension.

    Deterministic breadth-first closure over all extension classes
    between already-found members, deduplicated by isomorphism.
    """
    members: list[Rep] = []
    spent = 0
    for g in s.simples:
        if g.total_dim <= dim_cap and _match_against([g], members) is None:
            members.append(g)
    frontier = list(members)
    while frontier:
        next_frontier: list[Rep] = []
        for x in list(members):
            for y in frontier:
                for pair in ((x, y), (y, x)) if x is not y else ((x, y),):
                    a, c = pair
                    if a.total_dim + c.total_dim > dim_cap:
                        continue
                    ext = ext_space(c, a)
                    for cls in ext.all_classes():
                        spent += 1
                        if spent > budget:
                            raise BudgetExceededError(
                                "extension-closure budget exhausted")
                        mid = extension_from_class(cls).middle
                        if _match_against([mid], members) is None:
                            members.append(mid)
                            next_frontier.append(mid)
        frontier = next_frontier
    members.sort(key=lambda r: (r.total_dim, r.dims))
    return members


def _fac_presentation(m: Rep, s: WellPlacedGen, budget: int,
                      torsion_free_kernel: bool = False,
                      ) -> tuple[Rep, ShortExactSeq]:
    """A surjection E ->> m with E in filt(S); returns (kernel, the sequence).

    Searches closure members by ascending dimension, optionally insisting
    on a torsion-free kernel.
    """
    maxgen = max(g.total_dim for g in s.simples) if s.simples else 1
    spent = [0]
    for extra in range(maxgen, 4 * maxgen + 1, maxgen):
        members = _filt_closure_members(s, m.total_dim + extra, budget)
        for e_rep in members:
            if any(d < dm for d, dm in zip(e_rep.dims, m.dims)):
                continue
            hs = hom_space(e_rep, m)
            if hs.dim == 0:
                continue
            for g in hs.elements():
                spent[0] += 1
                if spent[0] > budget:
                    raise BudgetExceededError("presentation search budget exhausted")
                if not g.is_surjective():
                    continue
                k_rep, k_incl = kernel(g)
                if torsion_free_kernel:
                    t, _ = trace_torsion_submodule(k_rep, s)
                    if t.total_dim:
                        continue
                return k_rep, ShortExactSeq(k_incl, g)
    raise BudgetExceededError("no filt presentation found within the search caps")


def _tor1_route_kernel(m: Rep, s: WellPlacedGen, budget: int, max_steps: int,
                       ) -> Rep:
    """Tor_1 via a short exact sequence K -> E -> m with E in filt(S)."""
    k_rep, _ = _fac_presentation(m, s, budget)
    chain = localize(k_rep, s, max_steps)
    if not chain.stabilized:
        raise NonStabilizingError(
            "kernel localisation did not stabilize while computing Tor_1")
    return chain.value


def _tor1_route_presentation(m: Rep, s: WellPlacedGen, max_steps: int) -> Rep:
    """Tor_1 as the kernel of the induced map on localised projectives."""
    q_rep, cover = projective_cover(m)
    p_rep, p_incl = kernel(cover)
    chain_p = localize(p_rep, s, max_steps)
    chain_q = localize(q_rep, s, max_steps)
    if not (chain_p.stabilized and chain_q.stabilized):
        raise NonStabilizingError(
            "projective localisations did not stabilize while computing Tor_1")
    iota_p = chain_p.chain_inclusion()
    iota_q = chain_q.chain_inclusion()
    induced = factor_through(iota_p, iota_q.compose(p_incl))
    if induced is None:
        raise AssertionError("presentation map failed to extend to the chain")
    t_rep, _ = kernel(induced)
    return t_rep


def tor1(m: Rep, s: WellPlacedGen, max_steps: int = DEFAULT_MAX_STEPS,
         budget: int = DEFAULT_SEARCH_BUDGET) -> Rep:
    """Tor_1 of a torsion module against the localisation, as a stabilized value.

    Computed independently from a filt(S) presentation and from a
    projective presentation; the two results must agree up to
    isomorphism.
    """
    if not fac_membership(m, s):
        raise ValueError("tor1 requires a torsion module (a factor of filt(S))")
    if m.total_dim == 0:
        return zero_rep(m.quiver, m.field)
    via_kernel = _tor1_route_kernel(m, s, budget, max_steps)
    via_presentation = _tor1_route_presentation(m, s, max_steps)
    if via_kernel.dims != via_presentation.dims or \
            iso_witness(via_kernel, via_presentation) is None:
        raise AssertionError("Tor_1 cross-check failed: routes disagree")
    return via_kernel


# --- top stripping and Tor-isomorphism -----------------------------------------


@dataclass(frozen=True)
class StripResult:
    submodule: Rep
    inclusion: RepMorphism
    series: tuple[int, ...]


def strip_top(m: Rep, s: WellPlacedGen,
              budget: int = DEFAULT_SEARCH_BUDGET) -> StripResult:
    """Unique submodule T with no morphisms to the generators and m/T in filt(S).

    Descends through kernels of nonzero maps to generators; for a torsion
    module every nonzero such map is automatically surjective.
    """
    if not fac_membership(m, s):
        raise ValueError("strip_top requires a torsion module")
    cur = m
    incl = identity_morphism(m)
    series: list[int] = []
    remaining = budget
    progress = True
    while progress:
        progress = False
        for i, s_i in enumerate(s.simples):
            hs = hom_space(cur, s_i)
            if hs.dim == 0:
                continue
            g = hs.basis[0]
            remaining -= 1
            if remaining < 0:
                raise BudgetExceededError("strip budget exhausted")
            if not g.is_surjective():
                raise AssertionError(
                    "nonzero map from a torsion module onto a generator "
                    "failed to be surjective")
            k_rep, k_incl = kernel(g)
            cur = k_rep
            incl = incl.compose(k_incl)
            series.append(i)
            progress = True
            break
    return StripResult(cur, incl, tuple(series))


@dataclass(frozen=True)
class TorIsoVerdict:
    """Tor_1-isomorphism verdict with both witness shapes when iso.

    kernel_pair:   (K -> E1 -> m, K -> E2 -> n) with E_i in filt(S).
    extension_pair:(E2 -> L -> m, E1 -> L -> n), the common pushout.
    """

    status: str  # "iso" | "not-iso" | "inconclusive"
    kernel_pair: Optional[tuple[ShortExactSeq, ShortExactSeq]] = None
    extension_pair: Optional[tuple[ShortExactSeq, ShortExactSeq]] = None
    tor_value: Optional[Rep] = None


def _pushout_full(f: RepMorphism, g: RepMorphism):
    total, injections, _ = direct_sum_with_maps([f.target, g.target])
    from .exactlin import vstack
    h_maps = tuple(vstack([f.vertex_maps[v], g.vertex_maps[v].neg()])
                   for v in range(f.source.quiver.vertex_count))
    h = RepMorphism(f.source, total, h_maps, check=False)
    p_rep, proj = cokernel(h)
    return p_rep, proj.compose(injections[0]), proj.compose(injections[1]), proj, total


def _pushout_induced(proj: RepMorphism, total: Rep, u: RepMorphism,
                     w: RepMorphism) -> RepMorphism:
    """The map out of a pushout determined by u and w with u.f = w.g."""
    h = copairing([u, w], total)
    out = factor_through(proj, h)
    if out is None:
        raise AssertionError("pushout universal map failed to exist")
    return out


def tor_iso_test(m: Rep, n: Rep, s: WellPlacedGen,
                 budget: int = DEFAULT_SEARCH_BUDGET,
                 max_steps: int = DEFAULT_MAX_STEPS) -> TorIsoVerdict:
    """Decide Tor_1(m) = Tor_1(n) and construct the witness sequences.

    Tops are stripped first. On isomorphic Tor values, torsion-free
    presentations are compared through the induced-isomorphism test and
    the witness sequences are assembled by pushouts.
    """
    if not (fac_membership(m, s) and fac_membership(n, s)):
        raise ValueError("tor_iso_test requires torsion modules")
    m = strip_top(m, s, budget).submodule
    n = strip_top(n, s, budget).submodule
    t_m = tor1(m, s, max_steps, budget)
    t_n = tor1(n, s, max_steps, budget)
    if t_m.dims != t_n.dims or iso_witness(t_m, t_n) is None:
        return TorIsoVerdict("not-iso", tor_value=None)
    try:
        k_m, ses_m = _fac_presentation(m, s, budget, torsion_free_kernel=True)
        k_n, ses_n = _fac_presentation(n, s, budget, torsion_free_kernel=True)
    except BudgetExceededError:
        return TorIsoVerdict("inconclusive")
    v = induced_iso_test(k_m, k_n, s, budget, max_steps)
    if v.status == "inconclusive":
        return TorIsoVerdict("inconclusive")
    if v.status == "not-iso":
        raise AssertionError("isomorphic Tor values with non-isomorphic kernels")
    assert v.seq_m is not None and v.seq_n is not None
    k_tilde = v.overmodule
    # push each presentation out along its kernel's inclusion into K~
    e1, _, in_k1, proj1, tot1 = _pushout_full(ses_m.inclusion, v.seq_m.inclusion)
    from .quiverrep import zero_morphism
    to_m = _pushout_induced(proj1, tot1, ses_m.projection,
                            zero_morphism(k_tilde, m))
    seq1 = ShortExactSeq(in_k1, to_m)
    e2, _, in_k2, proj2, tot2 = _pushout_full(ses_n.inclusion, v.seq_n.inclusion)
    to_n = _pushout_induced(proj2, tot2, ses_n.projection,
                            zero_morphism(k_tilde, n))
    seq2 = ShortExactSeq(in_k2, to_n)
    for quot_seq in (seq1, seq2):
        if filt_membership(quot_seq.middle, s, budget) is None:
            raise AssertionError("pushout middle escaped filt(S)")
    # common pushout along K~ gives the extension-pair witnesses
    l_rep, in_e1, in_e2, proj_l, tot_l = _pushout_full(in_k1, in_k2)
    l_to_m = _pushout_induced(proj_l, tot_l, seq1.projection,
                              zero_morphism(e2, m))
    l_to_n = _pushout_induced(proj_l, tot_l, zero_morphism(e1, n),
                              seq2.projection)
    ext_pair = (ShortExactSeq(in_e2, l_to_m), ShortExactSeq(in_e1, l_to_n))
    return TorIsoVerdict("iso", (seq1, seq2), ext_pair, t_m)


# --- generators, monoid, K0 ----------------------------------------------------


def generators_enumerate(s: WellPlacedGen,
                         budget: int = DEFAULT_SEARCH_BUDGET,
                         ) -> list[tuple[str, Rep]]:
    """Monoid generators: indecomposable projectives plus submodules of
    the generators, deduplicated by isomorphism. The zero submodule is
    dropped (it is the monoid identity)."""
    q, f = s.quiver, s.field
    out: list[tuple[str, Rep]] = []
    for v in range(q.vertex_count):
        out.append((f"P{v + 1}", projective_rep(q, v, f)))
    for i, s_i in enumerate(s.simples):
        subs = [r for r, _ in submodule_enumerate(s_i, budget)]
        subs.sort(key=lambda r: (r.total_dim, r.dims))
        counter = 0
        for r in subs:
            if r.total_dim == 0:
                continue
            if _match_against([r], [g for _, g in out]) is not None:
                continue
            if r.dims == s_i.dims:
                label = f"S{i + 1}"
            else:
                counter += 1
                label = f"S{i + 1}.sub{counter}"
            out.append((label, r))
    return out


@dataclass(frozen=True)
class MonoidPresentation:
    """Presentation of the monoid of finitely generated projectives.

    Elements are multisets of generators, encoded as multiplicity
    vectors. Relations come from short exact sequences whose three terms
    are sums of generators, plus the vanishing of every filt(S) member
    within the dimension bound. The congruence is saturated exactly on
    the region of vectors whose dimension vector fits the bound, which is
    closed under the rewrites; complete is False when any harvest search
    was cut short by its budget.
    """

    generators: tuple[tuple[str, Rep], ...]
    relations: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    derived_identifications: dict
    dim_bound: tuple[int, ...]
    complete: bool
    _region: tuple[tuple[int, ...], ...]
    _class_of: dict

    def normal_form(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Canonical representative (minimal degree, then lexicographic)."""
        v = tuple(vec)
        if v not in self._class_of:
            raise ValueError("vector outside the saturated region")
        return self._class_of[v]

    def zero_vector(self) -> tuple[int, ...]:
        return (0,) * len(self.generators)

    def atoms(self) -> list[tuple[int, ...]]:
        """Nonzero classes that are not sums of two nonzero classes."""
        zero_cls = self.normal_form(self.zero_vector())
        decomposable: set = set()
        classes: set = set()
        for u in self._region:
            cu = self._class_of[u]
            if cu == zero_cls:
                continue
            classes.add(cu)
            for split in _splittings(u):
                u1, u2 = split
                if self._class_of[u1] != zero_cls and \
                        self._class_of[u2] != zero_cls:
                    decomposable.add(cu)
                    break
        return sorted(classes - decomposable)

    def free_rank(self) -> Optional[int]:
        """Rank if the presented monoid is free on its atoms within the
        bound, else None."""
        atoms = self.atoms()
        zero_cls = self.normal_form(self.zero_vector())
        seen: dict = {}
        gen_dims = [g.dims for _, g in self.generators]

        def vec_dims(u: tuple[int, ...]) -> tuple[int, ...]:
            out = [0] * len(self.dim_bound)
            for g, mult in enumerate(u):
                for v in range(len(out)):
                    out[v] += mult * gen_dims[g][v]
            return tuple(out)

        combos = [(0,) * len(atoms)]
        idx = 0
        while idx < len(combos):
            w = combos[idx]
            idx += 1
            total = self.zero_vector()
            for a_i, mult in enumerate(w):
                for _ in range(mult):
                    total = tuple(x + y for x, y in zip(total, atoms[a_i]))
            if any(d > b for d, b in zip(vec_dims(total), self.dim_bound)):
                continue
            cls = self._class_of.get(total)
            if cls is None:
                continue
            if cls in seen and seen[cls] != w:
                return None
            seen[cls] = w
            for a_i in range(len(atoms)):
                nxt = tuple(x + (1 if k == a_i else 0) for k, x in enumerate(w))
                if nxt not in combos:
                    combos.append(nxt)
        all_classes = {self._class_of[u] for u in self._region}
        if all_classes - set(seen) - {zero_cls}:
            return None
        return len(atoms)


def _splittings(u: tuple[int, ...]):
    """Nontrivial componentwise splittings u = u1 + u2."""
    ranges = [range(x + 1) for x in u]
    for u1 in itertools.product(*ranges):
        if all(x == 0 for x in u1):
            continue
        u2 = tuple(a - b for a, b in zip(u, u1))
        if all(x == 0 for x in u2):
            continue
        yield u1, u2


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def _saturate(region, relations) -> "_UnionFind":
    """Close the translation-invariant congruence on the region exactly."""
    uf = _UnionFind(region)
    changed = True
    while changed:
        changed = False
        for u in region:
            for left, right in relations:
                if all(x >= l for x, l in zip(u, left)):
                    v = tuple(x - l + r for x, l, r in zip(u, left, right))
                    if v in uf.parent and uf.find(u) != uf.find(v):
                        uf.union(u, v)
                        changed = True
    return uf


def _minimize_relations(region, relations):
    """Drop relations already implied by the ones kept before them."""
    kept: list = []
    uf = _UnionFind(region)
    for rel in relations:
        left, right = rel
        if left in uf.parent and right in uf.parent \
                and uf.find(left) == uf.find(right):
            continue
        kept.append(rel)
        uf = _saturate(region, kept)
    return tuple(kept)


def monoid_presentation(s: WellPlacedGen, dim_bound: Sequence[int],
                        budget: int = DEFAULT_SEARCH_BUDGET,
                        ) -> MonoidPresentation:
    """Present the monoid of finitely generated projectives over the
    localisation, with relations harvested up to a dimension bound.

    Relations: [X] = [A] + [C] for every extension X of C by A where all
    three decompose into generators and the dimensions fit the bound, and
    [E] = 0 for every generator-sum passing the filtration test.
    """
    bound = tuple(dim_bound)
    if len(bound) != s.quiver.vertex_count:
        raise ValueError("dimension bound must match the vertex count")
    gens = generators_enumerate(s, budget)
    gen_reps = [g for _, g in gens]
    gen_dims = [g.dims for g in gen_reps]
    n = len(gens)

    def dims_of(u: tuple[int, ...]) -> tuple[int, ...]:
        out = [0] * len(bound)
        for g, mult in enumerate(u):
            for v in range(len(bound)):
                out[v] += mult * gen_dims[g][v]
        return tuple(out)

    region: list[tuple[int, ...]] = []

    def grow(prefix: list[int], g: int, dims: tuple[int, ...]) -> None:
        if g == n:
            region.append(tuple(prefix))
            return
        mult = 0
        while True:
            cur = tuple(d + mult * gen_dims[g][v]
                        for v, d in enumerate(dims))
            if any(c > b for c, b in zip(cur, bound)):
                break
            grow(prefix + [mult], g + 1, cur)
            mult += 1

    grow([], 0, (0,) * len(bound))
    region.sort()

    def rep_of(u: tuple[int, ...]) -> Rep:
        pieces: list[Rep] = []
        for g, mult in enumerate(u):
            pieces.extend([gen_reps[g]] * mult)
        return direct_sum(pieces, quiver=s.quiver, field=s.field)

    complete = True
    relations: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    spent = [0]

    def charge(k: int = 1) -> bool:
        spent[0] += k
        return spent[0] <= budget

    nonzero_region = [u for u in region if any(u)]
    # extension relations
    for ua in nonzero_region:
        for uc in nonzero_region:
            total_dims = tuple(a + c for a, c in zip(dims_of(ua), dims_of(uc)))
            if any(d > b for d, b in zip(total_dims, bound)):
                continue
            a_rep, c_rep = rep_of(ua), rep_of(uc)
            ext = ext_space(c_rep, a_rep)
            if ext.dim == 0:
                continue
            for cls in ext.all_classes():
                if not charge():
                    complete = False
                    break
                mid = extension_from_class(cls).middle
                parts, _ = decompose_with_witness(mid)
                matched = _match_against(parts, gen_reps)
                if matched is None:
                    continue
                ux = [0] * n
                for i in matched:
                    ux[i] += 1
                left = tuple(ux)
                right = tuple(a + c for a, c in zip(ua, uc))
                if left != right and (left, right) not in relations:
                    relations.append((left, right))
            if not complete:
                break
        if not complete:
            break
    # vanishing relations for filt members
    zero_vec = (0,) * n
    for u in nonzero_region:
        try:
            if filt_membership(rep_of(u), s, max(budget - spent[0], 1)) is not None:
                if (u, zero_vec) not in relations:
                    relations.append((u, zero_vec))
        except BudgetExceededError:
            complete = False
            break
    relations = _minimize_relations(region, relations)
    uf = _saturate(region, relations)
    classes: dict = {}
    for u in region:
        classes.setdefault(uf.find(u), []).append(u)
    class_of: dict = {}
    for members in classes.values():
        rep_vec = min(members, key=lambda x: (sum(x), x))
        for u in members:
            class_of[u] = rep_vec
    derived = {}
    for g, (label, _) in enumerate(gens):
        e_g = tuple(1 if k == g else 0 for k in range(n))
        derived[label] = class_of.get(e_g)
    return MonoidPresentation(tuple(gens), tuple(relations), derived, bound,
                              complete, tuple(region), class_of)


# --- S-relatedness ---------------------------------------------------------------


@dataclass(frozen=True)
class SRelatedStep:
    generator: int
    role: str  # "submodule" (a embeds in S with quotient b) or "quotient"
    intermediate: Rep


@dataclass(frozen=True)
class SRelatedVerdict:
    status: str  # "related" | "not-related" | "inconclusive"
    path: tuple[SRelatedStep, ...] = ()


@functools.lru_cache(maxsize=None)
def _submodules_with_quotients(s_i: Rep, budget: int,
                               ) -> tuple[tuple[Rep, Rep], ...]:
    out = []
    for sub, incl in submodule_enumerate(s_i, budget):
        quot, _ = cokernel(incl)
        out.append((sub, quot))
    return tuple(out)


def s_related(a: Rep, b: Rep, s: WellPlacedGen,
              budget: int = DEFAULT_SEARCH_BUDGET) -> SRelatedVerdict:
    """Breadth-first walk of the direct S-relation from a towards b.

    X and Y are directly related through S_i when X embeds in S_i with
    quotient Y or vice versa; neighbors are read off the submodule
    lattice of each generator. Exhausting the finite component proves
    not-related; running out of budget is inconclusive.
    """
    classes: list[Rep] = []
    paths: list[tuple[SRelatedStep, ...]] = []

    def identify(x: Rep) -> Optional[int]:
        for i, c in enumerate(classes):
            if c.dims == x.dims and iso_witness(c, x) is not None:
                return i
        return None

    classes.append(a)
    paths.append(())
    if a.dims == b.dims and iso_witness(a, b) is not None:
        return SRelatedVerdict("related", ())
    spent = 0
    frontier = [0]
    while frontier:
        next_frontier: list[int] = []
        for ci in frontier:
            x = classes[ci]
            for i, s_i in enumerate(s.simples):
                try:
                    pairs = _submodules_with_quotients(s_i, budget)
                except BudgetExceededError:
                    return SRelatedVerdict("inconclusive")
                for sub, quot in pairs:
                    spent += 1
                    if spent > budget:
                        return SRelatedVerdict("inconclusive")
                    neighbors: list[tuple[Rep, str]] = []
                    if sub.dims == x.dims and iso_witness(sub, x) is not None:
                        neighbors.append((quot, "submodule"))
                    if quot.dims == x.dims and iso_witness(quot, x) is not None:
                        neighbors.append((sub, "quotient"))
                    for nb, role in neighbors:
                        known = identify(nb)
                        if known is not None:
                            continue
                        step = SRelatedStep(i, role, nb)
                        classes.append(nb)
                        paths.append(paths[ci] + (step,))
                        if nb.dims == b.dims and iso_witness(nb, b) is not None:
                            return SRelatedVerdict("related", paths[-1])
                        next_frontier.append(len(classes) - 1)
        frontier = next_frontier
    return SRelatedVerdict("not-related")


# --- late / early probes ---------------------------------------------------------


@dataclass(frozen=True)
class LateEarlyVerdict:
    status: str  # "late-up-to-bound" | "not-late" | "early-up-to-bound" | "not-early"
    witness_map: Optional[RepMorphism] = None
    witness_object: Optional[Rep] = None
    probes: int = 0
    skipped_memberships: int = 0


def _probe_members(s: WellPlacedGen, probe_dim_bound: Sequence[int],
                   category: str, budget: int, max_steps: int,
                   ) -> tuple[list[Rep], int]:
    candidates = enumerate_reps(s.quiver, s.field, probe_dim_bound)
    members: list[Rep] = []
    skipped = 0
    for r in candidates:
        if r.total_dim == 0:
            continue
        if category == "relproj":
            verdict = relproj_membership(r, s, budget, max_steps)
            if verdict.status == "member":
                members.append(r)
            elif verdict.status == "inconclusive":
                skipped += 1
        else:
            if fac_membership(r, s):
                members.append(r)
    return members, skipped


def is_late(m: Rep, s: WellPlacedGen, probe_dim_bound: Sequence[int],
            budget: int = DEFAULT_SEARCH_BUDGET,
            max_steps: int = DEFAULT_MAX_STEPS) -> LateEarlyVerdict:
    """Bounded check that every nonzero map from m into the
    relative-projective category is injective.

    Quantifies over members with dimension vector within the probe
    bound; absence of a witness is a bounded verdict, not a proof.
    """
    members, skipped = _probe_members(s, probe_dim_bound, "relproj",
                                      budget, max_steps)
    spent = 0
    for target in members:
        hs = hom_space(m, target)
        if hs.dim == 0:
            continue
        for g in hs.elements():
            spent += 1
            if spent > budget:
                raise BudgetExceededError("late probe budget exhausted")
            if not g.is_zero() and not g.is_injective():
                return LateEarlyVerdict("not-late", g, target,
                                        len(members), skipped)
    return LateEarlyVerdict("late-up-to-bound", None, None,
                            len(members), skipped)


def is_early(m: Rep, s: WellPlacedGen, probe_dim_bound: Sequence[int],
             budget: int = DEFAULT_SEARCH_BUDGET,
             max_steps: int = DEFAULT_MAX_STEPS) -> LateEarlyVerdict:
    """Bounded check that every nonzero map into m from the torsion
    category is surjective."""
    members, skipped = _probe_members(s, probe_dim_bound, "fac",
                                      budget, max_steps)
    spent = 0
    for source in members:
        hs = hom_space(source, m)
        if hs.dim == 0:
            continue
        for g in hs.elements():
            spent += 1
            if spent > budget:
                raise BudgetExceededError("early probe budget exhausted")
            if not g.is_zero() and not g.is_surjective():
                return LateEarlyVerdict("not-early", g, source,
                                        len(members), skipped)
    return LateEarlyVerdict("early-up-to-bound", None, None,
                            len(members), skipped)


# --- K0 --------------------------------------------------------------------------


def smith_normal_form(rows: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero invariant factors d_1 | d_2 | ... of an integer matrix."""
    a = [list(r) for r in rows]
    if not a or not a[0]:
        return []
    nr, nc = len(a), len(a[0])
    invariants: list[int] = []
    top = 0
    while top < nr and top < nc:
        pr = pc = -1
        best = None
        for i in range(top, nr):
            for j in range(top, nc):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < best):
                    best, pr, pc = abs(a[i][j]), i, j
        if best is None:
            break
        a[top], a[pr] = a[pr], a[top]
        for row in a:
            row[top], row[pc] = row[pc], row[top]
        while True:
            reduced = False
            for i in range(top + 1, nr):
                if a[i][top]:
                    qq = a[i][top] // a[top][top]
                    for j in range(nc):
                        a[i][j] -= qq * a[top][j]
                    if a[i][top]:
                        a[top], a[i] = a[i], a[top]
                        reduced = True
            for j in range(top + 1, nc):
                if a[top][j]:
                    qq = a[top][j] // a[top][top]
                    for i in range(nr):
                        a[i][j] -= qq * a[i][top]
                    if a[top][j]:
                        for i in range(nr):
                            a[i][top], a[i][j] = a[i][j], a[i][top]
                        reduced = True
            if not reduced:
                break
        # enforce divisibility into the remaining block
        fixed = False
        for i in range(top + 1, nr):
            for j in range(top + 1, nc):
                if a[i][j] % a[top][top]:
                    for jj in range(nc):
                        a[top][jj] += a[i][jj]
                    fixed = True
                    break
            if fixed:
                break
        if fixed:
            continue
        invariants.append(abs(a[top][top]))
        top += 1
    return invariants


@dataclass(frozen=True)
class K0Presentation:
    """K_0 of the localisation as an ambient lattice modulo generator classes."""

    ambient_rank: int
    relation_lattice: tuple[tuple[int, ...], ...]
    smith_form: tuple[int, ...]

    def __post_init__(self) -> None:
        for a, b in zip(self.smith_form, self.smith_form[1:]):
            if b % a:
                raise ValueError("smith invariants must divide successively")

    @property
    def free_rank(self) -> int:
        return self.ambient_rank - len(self.smith_form)

    @property
    def torsion_invariants(self) -> tuple[int, ...]:
        return tuple(d for d in self.smith_form if d > 1)

    def describe(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion_invariants)
        return " + ".join(parts) if parts else "0"


def _projective_multiplicities(m: Rep) -> list[int]:
    """Multiplicities of each indecomposable projective in a projective rep."""
    q, f = m.quiver, m.field
    projs = [projective_rep(q, v, f) for v in range(q.vertex_count)]
    counts = [0] * q.vertex_count
    parts, _ = decompose_with_witness(m)
    for p in parts:
        for v, pr in enumerate(projs):
            if p.dims == pr.dims:
                counts[v] += 1
                break
        else:
            raise ValueError("representation is not projective")
    return counts


def k0_presentation(s: WellPlacedGen) -> K0Presentation:
    """K_0 of the localised algebra via Smith normal form.

    Each generator contributes the class [Q] - [P] of its projective
    presentation 0 -> P -> Q -> S_i -> 0 in the basis of indecomposable
    projectives; K_0 is the ambient lattice modulo these rows.
    """
    q = s.quiver
    rows: list[tuple[int, ...]] = []
    for s_i in s.simples:
        q_rep, cover = projective_cover(s_i)
        p_rep, _ = kernel(cover)
        if not is_projective(p_rep):
            raise AssertionError("presentation kernel failed to be projective")
        cq = _projective_multiplicities(q_rep)
        cp = _projective_multiplicities(p_rep)
        rows.append(tuple(a - b for a, b in zip(cq, cp)))
    invariants = smith_normal_form(rows) if rows else []
    return K0Presentation(q.vertex_count, tuple(rows), tuple(invariants))
