"""Hom/Ext calculus against the brute-force commuting-tuple oracle,
extension realization, universal extensions, boundness, and the
reduction of projective maps to injective ones."""

import random

import pytest

from conftest import (
    A2,
    A3,
    F2,
    F5,
    KRON,
    brute_hom_dim,
    kron_s0,
    random_rep,
)
from quiverloc.exactlin import Mat
from quiverloc.quiverrep import (
    RepMorphism,
    cokernel,
    direct_sum,
    euler_form,
    identity_morphism,
    is_isomorphic,
    projective_rep,
    simple_rep,
    zero_morphism,
    zero_rep,
)
from quiverloc.homcalc import (
    ext_space,
    extension_from_class,
    factor_through,
    hom_space,
    is_bound,
    is_projective,
    lift_along,
    section_of_surjection,
    sigma_to_generators,
    split_projective_map,
    universal_extension,
)


def test_hom_simple_endomorphisms():
    s1 = simple_rep(A2, F2, 0)
    assert hom_space(s1, s1).dim == 1


def test_hom_and_ext_a2_frozen_from_oracle():
    s1 = simple_rep(A2, F2, 0)
    p1 = projective_rep(A2, 0, F2)
    p2 = projective_rep(A2, 1, F2)
    assert brute_hom_dim(s1, p1) == 0  # oracle
    assert hom_space(s1, p1).dim == 0
    # ext via cokernel dimension; dim Hom - dim Ext = <d_M, d_N>
    assert hom_space(s1, p2).dim == brute_hom_dim(s1, p2) == 0
    assert ext_space(s1, p2).dim == 1


def test_ext_kronecker_s0_self():
    s0 = kron_s0()
    # difference map has 2-dim domain, 2-dim codomain, rank 1
    assert brute_hom_dim(s0, s0) == 1
    assert hom_space(s0, s0).dim == 1
    assert ext_space(s0, s0).dim == 1


def test_hom_basis_elements_are_morphisms():
    rng = random.Random(17)
    for _ in range(10):
        q = rng.choice([A2, A3, KRON])
        m, n = random_rep(q, F2, rng), random_rep(q, F2, rng)
        for b in hom_space(m, n).basis:
            RepMorphism(m, n, b.vertex_maps, check=True)


def test_euler_identity_random():
    rng = random.Random(23)
    for field in (F2, F5):
        for _ in range(25):
            q = rng.choice([A2, A3, KRON])
            m, n = random_rep(q, field, rng), random_rep(q, field, rng)
            lhs = hom_space(m, n).dim - ext_space(m, n).dim
            assert lhs == euler_form(q, m.dims, n.dims)


def test_ext_vanishes_on_projectives():
    for q in (A2, A3, KRON):
        rng = random.Random(29)
        for v in range(q.vertex_count):
            p = projective_rep(q, v, F2)
            for _ in range(5):
                n = random_rep(q, F2, rng)
                assert ext_space(p, n).dim == 0


def test_extension_zero_class_splits():
    s1 = simple_rep(A2, F2, 0)
    p2 = projective_rep(A2, 1, F2)
    ses = extension_from_class(ext_space(s1, p2).zero_class())
    assert is_isomorphic(ses.middle, direct_sum([p2, s1]))


def test_extension_nonzero_class_a2():
    s1 = simple_rep(A2, F2, 0)
    p2 = projective_rep(A2, 1, F2)
    e = ext_space(s1, p2).cocycle_basis[0]
    ses = extension_from_class(e)
    # the unique nonsplit (1,1)-dimensional rep has invertible arrow map
    assert ses.middle.dims == (1, 1)
    assert is_isomorphic(ses.middle, projective_rep(A2, 0, F2))
    assert ses.sub == p2 and ses.quotient == s1


def test_extension_nonzero_class_kronecker():
    s0 = kron_s0()
    pk2 = projective_rep(KRON, 1, F2)
    e = ext_space(s0, pk2).cocycle_basis[0]
    x = extension_from_class(e).middle
    assert x.dims == (1, 2)
    assert is_isomorphic(x, projective_rep(KRON, 0, F2))


def test_universal_extension_trivial():
    p1 = projective_rep(A2, 0, F2)
    s1 = simple_rep(A2, F2, 0)
    ses = universal_extension([s1], p1)  # Ext(S1, P1) = 0
    assert ses.quotient.total_dim == 0
    assert ses.middle == p1


def test_universal_extension_a2():
    s1 = simple_rep(A2, F2, 0)
    p2 = projective_rep(A2, 1, F2)
    ses = universal_extension([s1], p2)
    assert is_isomorphic(ses.middle, projective_rep(A2, 0, F2))
    assert ses.quotient.dims == (1, 0)


def test_universal_extension_kronecker():
    s0 = kron_s0()
    pk2 = projective_rep(KRON, 1, F2)
    ses = universal_extension([s0], pk2)
    assert is_isomorphic(ses.middle, projective_rep(KRON, 0, F2))


def test_universal_extension_kills_ext_when_no_self_ext():
    # Bongartz-style vanishing: Ext(S_i, S_j) = 0 for all j forces
    # Ext(S_i, m') = 0 after one step
    s1 = simple_rep(A2, F2, 0)
    assert ext_space(s1, s1).dim == 0
    rng = random.Random(31)
    for _ in range(8):
        m = random_rep(A2, F2, rng)
        ses = universal_extension([s1], m)
        assert ext_space(s1, ses.middle).dim == 0
        assert ext_space(s1, ses.middle).dim <= ext_space(s1, m).dim


def test_universal_extension_monotone_with_self_ext():
    s0 = kron_s0()
    rng = random.Random(37)
    for _ in range(8):
        m = random_rep(KRON, F2, rng, max_dim=2)
        ses = universal_extension([s0], m)
        assert ext_space(s0, ses.middle).dim <= ext_space(s0, m).dim


def test_universal_extension_connecting_map_surjective():
    # Hom(S_i, quotient) -> Ext(S_i, m) must hit every class: since the
    # step kills Ext exactly when no self-extensions interfere, verify
    # the dimension bookkeeping dim Ext(S,m') >= dim Ext(S,E) with the
    # long exact sequence endpoints on a desk example
    s0 = kron_s0()
    pk2 = projective_rep(KRON, 1, F2)
    ses = universal_extension([s0], pk2)
    r = ext_space(s0, pk2).dim
    assert ses.quotient.dims == tuple(r * d for d in s0.dims)


def test_is_bound():
    assert is_bound(zero_rep(A2, F2))
    for q in (A2, A3, KRON):
        for v in range(q.vertex_count):
            assert not is_bound(projective_rep(q, v, F2))
    s0 = kron_s0()
    # oracle: exhaustive hom enumeration into both projectives
    assert brute_hom_dim(s0, projective_rep(KRON, 0, F2)) == 0
    assert brute_hom_dim(s0, projective_rep(KRON, 1, F2)) == 0
    assert is_bound(s0)


def test_bound_preserved_in_extension_closure():
    s0 = kron_s0()
    e = ext_space(s0, s0).cocycle_basis[0]
    tube2 = extension_from_class(e).middle
    assert is_bound(tube2)


def test_is_projective():
    assert is_projective(projective_rep(A3, 0, F2))
    assert is_projective(direct_sum([projective_rep(A2, 0, F2),
                                     projective_rep(A2, 1, F2)]))
    assert not is_projective(simple_rep(A2, F2, 0))


def test_split_projective_map_injective_passthrough():
    p1 = projective_rep(A2, 0, F2)
    p2 = projective_rep(A2, 1, F2)
    inc = RepMorphism(p2, p1, (Mat.zeros(F2, 1, 0), Mat.identity(F2, 1)))
    assert split_projective_map(inc) == [inc]


def test_split_projective_map_component_injection():
    # f: P2 -> P1 (+) P2 with components (inclusion into P1, 0) is injective
    p1 = projective_rep(A2, 0, F2)
    p2 = projective_rep(A2, 1, F2)
    tgt = direct_sum([p1, p2])  # dims (1, 2)
    f = RepMorphism(p2, tgt, (Mat.zeros(F2, 1, 0),
                              Mat.from_rows(F2, [[1], [0]])))
    assert f.is_injective()
    assert split_projective_map(f) == [f]


def test_split_projective_map_zero():
    p1 = projective_rep(A2, 0, F2)
    p2 = projective_rep(A2, 1, F2)
    parts = split_projective_map(zero_morphism(p2, p1))
    assert len(parts) == 2
    assert all(g.is_injective() for g in parts)
    assert parts[0].source.total_dim == 0  # image factor from the zero rep
    assert parts[0].target == p1
    assert parts[1].target == p2


def test_split_projective_map_non_injective():
    # P1 (+) P2 -> P1 collapsing the P2 summand onto the socle
    p1 = projective_rep(A2, 0, F2)
    p2 = projective_rep(A2, 1, F2)
    src = direct_sum([p1, p2])
    f = RepMorphism(src, p1, (Mat.identity(F2, 1),
                              Mat.from_rows(F2, [[1, 1]])))
    assert not f.is_injective()
    parts = split_projective_map(f)
    assert len(parts) == 2
    for g in parts:
        assert g.is_injective()
        assert is_projective(g.source) and is_projective(g.target)
    # the two replacements: image -> target, image -> source (a section)
    assert parts[0].target == p1
    assert parts[1].target == src


def test_split_projective_map_rejects_non_projective():
    s1 = simple_rep(A2, F2, 0)
    with pytest.raises(ValueError):
        split_projective_map(identity_morphism(s1))


def test_sigma_to_generators():
    p1 = projective_rep(A2, 0, F2)
    p2 = projective_rep(A2, 1, F2)
    assert [r.dims for r in sigma_to_generators([identity_morphism(p1)])] \
        == [(0, 0)]
    inc = RepMorphism(p2, p1, (Mat.zeros(F2, 1, 0), Mat.identity(F2, 1)))
    gens = sigma_to_generators([inc])
    assert [r.dims for r in gens] == [(1, 0)]
    # A3: P3 -> P1 gives the interval module with identity first arrow
    q1 = projective_rep(A3, 0, F2)
    q3 = projective_rep(A3, 2, F2)
    inc3 = RepMorphism(q3, q1, (Mat.zeros(F2, 1, 0), Mat.zeros(F2, 1, 0),
                                Mat.identity(F2, 1)))
    gens3 = sigma_to_generators([inc3])
    assert [r.dims for r in gens3] == [(1, 1, 0)]
    assert gens3[0].maps[0] == Mat.identity(F2, 1)


def test_sigma_generators_have_hom_dim_one():
    # cokernels of injective maps between projectives have ext to nothing
    # projective, i.e. homological dimension <= 1 holds by construction;
    # spot-check Euler consistency instead
    p1 = projective_rep(A2, 0, F2)
    p2 = projective_rep(A2, 1, F2)
    inc = RepMorphism(p2, p1, (Mat.zeros(F2, 1, 0), Mat.identity(F2, 1)))
    (g,) = sigma_to_generators([inc])
    assert euler_form(A2, g.dims, g.dims) == \
        hom_space(g, g).dim - ext_space(g, g).dim


def test_section_of_surjection():
    p1 = projective_rep(A2, 0, F2)
    s1 = simple_rep(A2, F2, 0)
    surj = RepMorphism(p1, s1, (Mat.identity(F2, 1), Mat.zeros(F2, 0, 1)))
    with pytest.raises(ValueError):
        section_of_surjection(surj)  # P1 ->> S1 does not split
    from quiverloc.quiverrep import direct_sum_with_maps
    _, _, projs = direct_sum_with_maps([p1, p1])
    sec = section_of_surjection(projs[0])
    assert projs[0].compose(sec) == identity_morphism(p1)


def test_factor_and_lift_helpers():
    p1 = projective_rep(A2, 0, F2)
    p2 = projective_rep(A2, 1, F2)
    inc = RepMorphism(p2, p1, (Mat.zeros(F2, 1, 0), Mat.identity(F2, 1)))
    quot, proj = cokernel(inc)
    # factor the cokernel projection through itself
    g = factor_through(proj, proj)
    assert g is not None and g.compose(proj) == proj
    # lifting the inclusion along the identity is itself
    h = lift_along(identity_morphism(p1), inc)
    assert h == inc
