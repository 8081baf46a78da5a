import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ambiclass.abgroup import (
    FinAbGroup,
    GroupHom,
    IllFormedHom,
    IndexDiagram,
    InfiniteQuotient,
    InvalidElement,
    NotExact,
    analyze_hom,
    check_index_lemma,
    determinant,
    direct_product,
    generalized_index,
    group_from_relations,
    identity_matrix,
    mat_mul,
    random_diagram,
    smith_normal_form,
    subgroup_generated,
)

from oracles import closure, enumerate_group


def _is_snf(d):
    diag = [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0))]
    off = all(d[i][j] == 0 for i in range(len(d)) for j in range(len(d[0])) if i != j)
    chain = all(x >= 0 for x in diag) and all(
        (b % a == 0) if a else b == 0 for a, b in zip(diag, diag[1:])
    )
    return off and chain


def test_snf_identity():
    u, d, v = smith_normal_form([[1, 0], [0, 1]])
    assert d == [[1, 0], [0, 1]]
    assert mat_mul(mat_mul(u, [[1, 0], [0, 1]]), v) == d


def test_snf_small_example():
    m = [[2, 4], [6, 8]]
    u, d, v = smith_normal_form(m)
    assert d == [[2, 0], [0, 4]]
    assert mat_mul(mat_mul(u, m), v) == d


def test_snf_zero():
    _, d, _ = smith_normal_form([[0, 0, 0], [0, 0, 0]])
    assert d == [[0, 0, 0], [0, 0, 0]]


matrices = st.integers(1, 6).flatmap(
    lambda r: st.integers(1, 6).flatmap(
        lambda c: st.lists(st.lists(st.integers(-50, 50), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@settings(max_examples=300, deadline=None)
@given(matrices)
def test_snf_roundtrip(m):
    u, d, v = smith_normal_form(m)
    assert mat_mul(mat_mul(u, m), v) == d
    assert _is_snf(d)
    assert abs(determinant(u)) == 1
    assert abs(determinant(v)) == 1


def test_group_from_relations_examples():
    assert group_from_relations(1, [[5]]) == FinAbGroup((5,))
    assert group_from_relations(2, [[2, 0], [0, 2]]).invariant_factors == (2, 2)
    assert group_from_relations(2, [[2, 2], [0, 4]]).invariant_factors == (2, 4)


def test_group_from_relations_infinite():
    with pytest.raises(InfiniteQuotient):
        group_from_relations(2, [[2, 0]])


def test_trivial_factors_dropped():
    g = group_from_relations(2, [[1, 0], [0, 3]])
    assert g.invariant_factors == (3,)
    assert FinAbGroup(()).order == 1
    assert str(FinAbGroup(())) == "1"


def test_bad_chain_rejected():
    with pytest.raises(ValueError):
        FinAbGroup((4, 2))


def test_subgroup_examples():
    z4 = FinAbGroup((4,))
    assert subgroup_generated(z4, [(0,)]).order == 1
    h = subgroup_generated(z4, [(2,)])
    assert h.group == FinAbGroup((2,))
    g = FinAbGroup((2, 4))
    s = subgroup_generated(g, [(1, 2)])
    assert s.group == FinAbGroup((2,))
    assert (1, 2) in s
    assert (0, 2) not in s


def test_subgroup_invalid_element():
    with pytest.raises(InvalidElement):
        subgroup_generated(FinAbGroup((2, 4)), [(1,)])
    with pytest.raises(InvalidElement):
        subgroup_generated(FinAbGroup((2, 4)), [(2, 0)])


factor_chains = st.lists(st.integers(1, 4), min_size=0, max_size=3).map(
    lambda ks: FinAbGroup.from_orders([2**k for k in ks] + [3] * (len(ks) % 2))
)


@settings(max_examples=100, deadline=None)
@given(factor_chains, st.data())
def test_subgroup_matches_closure(g, data):
    gens = data.draw(
        st.lists(st.tuples(*[st.integers(0, d - 1) for d in g.invariant_factors]), max_size=3)
    )
    s = subgroup_generated(g, gens)
    brute = closure(g.invariant_factors, gens)
    assert s.order == len(brute)
    assert set(s.elements()) == brute
    for x in enumerate_group(g.invariant_factors):
        assert s.contains(x) == (x in brute)


@settings(max_examples=50, deadline=None)
@given(factor_chains)
def test_subgroup_of_all_generators_is_whole(g):
    assert subgroup_generated(g, g.generators()).order == g.order


def test_analyze_hom_examples():
    z6 = FinAbGroup((6,))
    a = analyze_hom(GroupHom.identity(z6))
    assert (a.kernel.order, a.cokernel.order) == (1, 1)
    z4 = FinAbGroup((4,))
    a = analyze_hom(GroupHom(z4, z4, ((2,),)))
    assert (a.kernel.order, a.image.order, a.cokernel.order) == (2, 2, 2)
    a = analyze_hom(GroupHom(FinAbGroup((2,)), z4, ((2,),)))
    assert (a.kernel.order, a.cokernel.order) == (1, 2)


def test_ill_formed_hom():
    # 2 * 1 != 0 in Z/4
    with pytest.raises(IllFormedHom):
        GroupHom(FinAbGroup((2,)), FinAbGroup((4,)), ((1,),))


@settings(max_examples=100, deadline=None)
@given(factor_chains, factor_chains, st.data())
def test_kernel_image_orders(src, dst, data):
    images = []
    for d in src.invariant_factors:
        # any image of a generator of order d must be killed by d
        cands = [x for x in enumerate_group(dst.invariant_factors)
                 if all((d * xi) % o == 0 for xi, o in zip(x, dst.invariant_factors))]
        images.append(data.draw(st.sampled_from(cands)))
    f = GroupHom(src, dst, tuple(images))
    a = analyze_hom(f)
    brute_kernel = [x for x in src.elements() if f(x) == dst.identity]
    assert a.kernel.order == len(brute_kernel)
    assert a.kernel.order * a.image.order == src.order
    assert a.image.order * a.cokernel.order == dst.order
    assert generalized_index(f) == Fraction(a.cokernel.order, a.kernel.order)


def test_index_lemma_identities():
    a, c = FinAbGroup((2,)), FinAbGroup((3,))
    p = direct_product(a, c)
    ids = [GroupHom.identity(g) for g in (a, p.group, c)]
    d = IndexDiagram(p.incl_left, p.proj_right, p.incl_left, p.proj_right, *ids)
    r = check_index_lemma(d)
    assert (r.index_a, r.index_b, r.index_c) == (1, 1, 1)
    assert r.holds


def test_index_lemma_inclusion_example():
    # A = A' = Z/2, C = Z/2 inside C' = Z/4, B = Z/2 x Z/2 inside B' = Z/2 x Z/4
    a, c, c2 = FinAbGroup((2,)), FinAbGroup((2,)), FinAbGroup((4,))
    top, bottom = direct_product(a, c), direct_product(a, c2)
    gamma = GroupHom(c, c2, ((2,),))
    beta = GroupHom(
        top.group,
        bottom.group,
        tuple(
            bottom.group.add(bottom.incl_left(top.proj_left(b)), bottom.incl_right(gamma(top.proj_right(b))))
            for b in top.group.generators()
        ),
    )
    d = IndexDiagram(top.incl_left, top.proj_right, bottom.incl_left, bottom.proj_right,
                     GroupHom.identity(a), beta, gamma)
    r = check_index_lemma(d)
    assert r.index_b == 2 == r.index_a * r.index_c
    assert r.index_a == 1 and r.index_c == 2


def test_index_lemma_rejects_non_exact():
    z2 = FinAbGroup((2,))
    zero = GroupHom.zero(z2, z2)
    ident = GroupHom.identity(z2)
    d = IndexDiagram(zero, ident, zero, ident, ident, ident, ident)
    with pytest.raises(NotExact):
        check_index_lemma(d)


def test_random_diagrams_small_batch():
    rng = random.Random(7)
    for _ in range(100):
        d = random_diagram(rng, injective=bool(rng.getrandbits(1)))
        assert d.beta.target.order <= 2**12
        assert check_index_lemma(d).holds


def test_identity_matrix():
    assert identity_matrix(2) == [[1, 0], [0, 1]]
