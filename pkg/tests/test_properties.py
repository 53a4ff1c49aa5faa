import itertools
import random

from hypothesis import given, settings, strategies as st

from corpus import A2, HALL_Q, KRONECKER, LOOP_Q, TWO_LOOPS, random_tree_winding, two_loop_band
from hall_checks import all_closed, fn, naive_product, pieces
from qgrass.euler import (
    BandProfile,
    band_formula,
    band_recursion_oracle,
    euler_band,
    euler_module,
    euler_tree,
)
from qgrass.hall import HallFunction, product_evaluate
from qgrass.quiver import (
    ModuleExpr,
    TreeTerm,
    add_dims,
    classify_quiver,
    cycle_quiver,
    relabel,
    sub_dims,
    winding_canonical_form,
)
from qgrass.subsets import closed_masks, mask_dim

QUIVERS = [TWO_LOOPS, KRONECKER, LOOP_Q, HALL_Q, A2]


@st.composite
def trees(draw, max_vertices=7):
    Q = draw(st.sampled_from(QUIVERS))
    seed = draw(st.integers(0, 10**6))
    n = draw(st.integers(1, max_vertices))
    w = random_tree_winding(random.Random(seed), Q, n)
    if w is None:
        w = random_tree_winding(random.Random(seed), Q, 1)
    return w


def box(top):
    return st.tuples(*(st.integers(0, x) for x in top))


@st.composite
def tree_and_dim(draw):
    F = draw(trees())
    return F, draw(box(F.fiber_sizes))


@st.composite
def band_profiles(draw):
    raw = draw(st.lists(st.sampled_from((1, -1)), min_size=1, max_size=6))
    signs = classify_quiver(cycle_quiver(raw)).signs
    n = draw(st.integers(1, 3))
    t = tuple(draw(st.lists(st.integers(0, n), min_size=len(signs), max_size=len(signs))))
    return BandProfile(signs, t, n)


@settings(max_examples=60, deadline=None)
@given(tree_and_dim())
def test_tree_euler_counts_closed_subsets(case):
    F, d = case
    assert euler_tree(F, d) == len(closed_masks(F, d))


@settings(max_examples=60, deadline=None)
@given(trees())
def test_zero_and_top_dimension(F):
    Q = F.codomain
    assert euler_tree(F, Q.zero) == 1
    assert euler_tree(F, F.fiber_sizes) == 1


@settings(max_examples=40, deadline=None)
@given(trees(), st.randoms(use_true_random=False))
def test_pushforward_is_additive(F, rnd):
    masks = all_closed(F)
    a = rnd.choice(masks)
    b = rnd.choice(masks) & ~a
    assert mask_dim(F, a | b) == add_dims(mask_dim(F, a), mask_dim(F, b))


@settings(max_examples=40, deadline=None)
@given(trees(), st.randoms(use_true_random=False))
def test_canonical_form_ignores_names(F, rnd):
    S = F.domain
    vs = list(S.vertices)
    rnd.shuffle(vs)
    vname = {v: f"x{i}" for i, v in enumerate(vs)}
    aname = {a.id: f"y{i}" for i, a in enumerate(S.arrows)}
    G = relabel(F, vname, aname)
    assert winding_canonical_form(G) == winding_canonical_form(F)
    for d in [F.codomain.zero, F.fiber_sizes]:
        assert euler_tree(G, d) == euler_tree(F, d)


@settings(max_examples=30, deadline=None)
@given(trees(max_vertices=5), trees(max_vertices=5), st.data())
def test_direct_sum_convolution(F, G, data):
    if F.codomain != G.codomain:
        G = random_tree_winding(random.Random(0), F.codomain, len(G.domain.vertices)) or F
    M = ModuleExpr(F.codomain, (TreeTerm(F), TreeTerm(G)))
    d = data.draw(box(M.dim))
    want = 0
    for c in _sub_box(F.fiber_sizes):
        rest = sub_dims(d, c)
        if all(0 <= x <= y for x, y in zip(rest, G.fiber_sizes)):
            want += euler_tree(F, c) * euler_tree(G, rest)
    assert euler_module(M, d) == want


def _sub_box(top):
    return itertools.product(*(range(x + 1) for x in top))


@settings(max_examples=150, deadline=None)
@given(band_profiles())
def test_band_formula_matches_recursion(p):
    v = band_formula(p)
    assert v >= 0
    assert v == band_recursion_oracle(cycle_quiver(p.signs), p.t, p.n)


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 3))
def test_band_extremes(n):
    B = two_loop_band()
    assert euler_band(B, n, (0,)) == 1
    assert euler_band(B, n, (4 * n,)) == 1


@settings(max_examples=40, deadline=None)
@given(trees(), st.randoms(use_true_random=False))
def test_hall_product_grading(F, rnd):
    M = ModuleExpr(F.codomain, (TreeTerm(F),))
    m = rnd.choice(all_closed(F))
    full = (1 << len(F.domain.vertices)) - 1
    f = fn(F.codomain, pieces(F, m))
    g = fn(F.codomain, pieces(F, full & ~m))
    value = product_evaluate(f, g, M)
    assert value >= 1
    assert value == naive_product(f, g, F)
    if not g.is_empty:
        # dimensions no longer add up to dim M
        assert product_evaluate(f, HallFunction(F.codomain), M) == 0
