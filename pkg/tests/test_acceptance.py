"""One test per acceptance criterion; each prints a single PASS/FAIL line."""

import itertools
import random
import time
from math import comb

import pytest

from corpus import (
    HALL_Q,
    KRONECKER,
    TWO_LOOP_ALGEBRA,
    TWO_LOOPS,
    a2_string_plus_simples,
    double_cycle_winding,
    hall_pair,
    hall_simple,
    hall_string,
    kronecker_band,
    kronecker_string,
    loop_tree,
    random_tree_winding,
    tree_corpus,
    two_loop_band,
    two_loop_tree,
)
from hall_checks import assoc_left, assoc_right, chain_count, random_chain_triple
from qgrass.euler import (
    band_formula,
    band_oracle_sweep,
    band_profile,
    band_recursion_oracle,
    euler_band,
    euler_flag_tree,
    euler_module,
    euler_tree,
    kronecker_band_flag,
    random_band_profiles,
)
from qgrass.gradings import fixed_point_count
from qgrass.hall import HallFunction, defect, evaluate, product_evaluate
from qgrass.quiver import (
    BandTerm,
    ModuleExpr,
    TreeTerm,
    Winding,
    cycle_quiver,
    disjoint_union,
    fiber_dims,
    fold_periodic_band,
    restrict,
    windings_isomorphic,
)
from qgrass.string_algebra import enumerate_bands, enumerate_strings, validate_string_algebra
from qgrass.subsets import closed_masks


@pytest.fixture
def report(capsys):
    def emit(name, ok, detail=""):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} {name}{': ' + detail if detail else ''}")
        assert ok, detail
    return emit


def box(top):
    return itertools.product(*(range(x + 1) for x in top))


def kron_band(m, lam=None):
    if m == 0:
        return ModuleExpr(KRONECKER, ())
    return ModuleExpr(KRONECKER, (BandTerm(kronecker_band(), m, lam),))


def kron_fn(*dims):
    return HallFunction(KRONECKER, tuple(kronecker_string(d) for d in dims))


def _counterexample_value() -> tuple:
    """chi_(0,1,1) of the thin module over the five-vertex non-tree domain.

    A subrepresentation with nothing at vertex 1 lives on vertices 2 and 3,
    where the module is the pushforward along a 4-cycle winding onto the
    Kronecker quiver 2 => 3.  That winding has period 2, so it splits into two
    band modules of size 1 with different parameters.
    """
    F = double_cycle_winding()
    R = restrict(F, ["2", "2'", "3", "3'"])
    to_k = {"2": "1", "3": "2"}
    W = Winding(R.domain, KRONECKER, {v: to_k[F.vdict[v]] for v in R.domain.vertices},
                {a.id: {"beta": "a", "gamma": "b"}[F.adict[a.id]] for a in R.domain.arrows})
    B, r = fold_periodic_band(W)
    M = ModuleExpr(KRONECKER, tuple(BandTerm(B, 1, f"mu{i}") for i in range(r)))
    combinatorial = len(closed_masks(F, (0, 1, 1)))
    return euler_module(M, (1, 1)), combinatorial


def test_1_golden_values(report):
    got = {
        "string plus simples chi_(1,1)": (euler_module(a2_string_plus_simples(), (1, 1)), 3),
        "two-loop band n=2 chi_4": (euler_band(two_loop_band(), 2, (4,)), 7),
    }
    f = HallFunction(HALL_Q, (hall_simple("2"), hall_pair("3", "3", "gamma")))
    g = HallFunction(HALL_Q, (hall_simple("1"), hall_pair("1", "2", "alpha")))
    got["tree-module hall product"] = (
        product_evaluate(f, g, ModuleExpr(HALL_Q, (TreeTerm(hall_string()),))), 2)
    for n in (3, 4, 5):
        got[f"kronecker flag n={n}"] = (kronecker_band_flag(n, [(1, 2), (2, 3)]), 8 * (n - 2))
    for m, r, s in itertools.product(range(4), repeat=3):
        if r <= m and s <= m:
            fl = kron_fn(*([(0, 1)] * (m - r) + [(1, 2)] * r))
            gl = kron_fn(*([(1, 0)] * (m - s) + [(2, 1)] * s))
            got[f"kronecker hall m={m} r={r} s={s}"] = (
                product_evaluate(fl, gl, kron_band(m + r + s)), comb(m, r) * comb(m, s))
    value, combinatorial = _counterexample_value()
    got["non-tree thin module chi_(0,1,1)"] = (value, 2)
    got["non-tree subset count"] = (combinatorial, 0)
    bad = {k: v for k, v in got.items() if v[0] != v[1]}
    report("golden values", not bad, f"{len(got)} values" if not bad else repr(bad))


def test_2_band_formula_oracle(report):
    t0 = time.perf_counter()
    cases, bad = band_oracle_sweep(5, 3)
    for p in random_band_profiles(100, 8, 4, seed=7):
        cases += 1
        if band_formula(p) != band_recursion_oracle(cycle_quiver(p.signs), p.t, p.n):
            bad.append(p)
    elapsed = time.perf_counter() - t0
    report("band formula vs recursion", not bad and elapsed < 60,
           f"{cases} cases, {len(bad)} mismatches, {elapsed:.2f}s")


def _acceptance_corpus():
    corpus = tree_corpus(seed=2024, count=24, max_vertices=10)
    assert any(windings_isomorphic(w, loop_tree()) for w in corpus)
    assert any(windings_isomorphic(w, two_loop_tree()) for w in corpus)
    assert all(len(w.domain.vertices) <= 10 for w in corpus)
    return corpus


def test_3_fixed_point_oracle(report):
    corpus = _acceptance_corpus()
    cases, bad = 0, []
    for F in corpus:
        for d in box(F.fiber_sizes):
            cases += 1
            if euler_tree(F, d) != fixed_point_count(F, 1, d):
                bad.append((F, d))
    report("subset count vs torus fixed points", len(corpus) >= 20 and not bad,
           f"{len(corpus)} windings, {cases} dimension vectors, {len(bad)} mismatches")


def _flag_brute(F, dims):
    levels = [closed_masks(F, d) for d in dims]
    return sum(1 for chain in itertools.product(*levels)
               if all(chain[i] & ~chain[i + 1] == 0 for i in range(len(chain) - 1)))


def test_4_positivity_and_integrality(report):
    bad = []
    checked = 0
    for F in _acceptance_corpus():
        for d in box(F.fiber_sizes):
            v = euler_tree(F, d)
            checked += 1
            if not isinstance(v, int) or v < 0 or (closed_masks(F, d) and v <= 0):
                bad.append(("tree", d, v))
        rng = random.Random(len(F.domain.vertices))
        for _ in range(3):
            a = rng.choice(list(box(F.fiber_sizes)))
            b = tuple(rng.randint(x, s) for x, s in zip(a, F.fiber_sizes))
            v = euler_flag_tree(F, [a, b])
            checked += 1
            if not isinstance(v, int) or v < 0 or v != _flag_brute(F, [a, b]):
                bad.append(("flag", a, b, v))
    B = two_loop_band()
    S = B.domain
    for n in (1, 2, 3):
        for d in range(4 * n + 1):
            v = euler_band(B, n, (d,))
            witness = any(band_formula(band_profile(S, dict(zip(S.vertices, t)), n)) > 0
                          for t in fiber_dims(B, (d,), n))
            checked += 1
            if not isinstance(v, int) or v < 0 or (witness and v <= 0):
                bad.append(("band", n, d, v))
    report("positivity and integrality", not bad, f"{checked} values, {len(bad)} failures")


def test_5_riedtmann(report):
    rng = random.Random(99)
    pairs = []
    Qs = [TWO_LOOPS, KRONECKER]
    while len(pairs) < 12:
        Q = rng.choice(Qs)
        A = random_tree_winding(rng, Q, rng.randint(1, 5))
        Bw = random_tree_winding(rng, Q, rng.randint(1, 5))
        if A is not None and Bw is not None:
            pairs.append((A, Bw))
    cases, bad = 0, []
    for A, Bw in pairs:
        M = ModuleExpr(A.codomain, (TreeTerm(A), TreeTerm(Bw)))
        U = disjoint_union([A, Bw])
        for d in box(M.dim):
            cases += 1
            if euler_module(M, d) != len(closed_masks(U, d)):
                bad.append((A, Bw, d))
    report("direct sums vs disjoint-union subset count", not bad,
           f"{len(pairs)} pairs, {cases} dimension vectors, {len(bad)} mismatches")


def _string_band_cases():
    A = validate_string_algebra(TWO_LOOP_ALGEBRA)
    strings = enumerate_strings(A, 2)
    bands = enumerate_bands(A, 4)
    cases = []
    for s, (b, n) in itertools.product(strings[:4], [(bands[0], 1), (bands[-1], 1), (bands[0], 2)]):
        F = HallFunction(TWO_LOOPS, (s,))
        Bn = HallFunction(TWO_LOOPS, (), ((b, n),))
        FB = HallFunction(TWO_LOOPS, (s,), ((b, n),))
        good = ModuleExpr(TWO_LOOPS, (TreeTerm(s), BandTerm(b, n)))
        other = next(t for t in strings if t.fiber_sizes == s.fiber_sizes and t is not s) \
            if sum(1 for t in strings if t.fiber_sizes == s.fiber_sizes) > 1 else None
        cases.append((F, Bn, FB, good))
        if other is not None:
            cases.append((F, Bn, FB, ModuleExpr(TWO_LOOPS, (TreeTerm(other), BandTerm(b, n)))))
    return cases


def test_6_hall_structure(report):
    problems = []
    # dimension grading
    if product_evaluate(kron_fn((0, 1)), kron_fn((1, 0)), kron_band(2)) != 0:
        problems.append("grading")
    # string/band factorisation, both orders
    cases = _string_band_cases()
    for F, Bn, FB, M in cases:
        vals = (product_evaluate(F, Bn, M), evaluate(FB, M), product_evaluate(Bn, F, M))
        if len(set(vals)) != 1:
            problems.append(("factorisation", vals))
    # associativity through chains of closed subsets
    rng = random.Random(17)
    assoc = 0
    for F in tree_corpus(seed=5, count=20, max_vertices=8):
        a, b, c = random_chain_triple(F, rng)
        want = chain_count(a, b, c, F)
        if not (assoc_left(a, b, c, F) == want == assoc_right(a, b, c, F)):
            problems.append(("assoc", F))
        assoc += 1
    # band parameters only matter through equality
    f = kron_fn((0, 1))
    g = HallFunction(KRONECKER, (kronecker_string((1, 0)),), ((kronecker_band(), 1),))
    lam = {product_evaluate(f, g, ModuleExpr(KRONECKER, (BandTerm(kronecker_band(), 1, x),
                                                          BandTerm(kronecker_band(), 1, y))))
           for x, y in [("L1", "L2"), ("p", "q"), ("z", "w")]}
    if len(lam) != 1:
        problems.append(("lambda", lam))
    report("hall structure", len(cases) >= 10 and not problems,
           f"{len(cases)} factorisation cases, {assoc} associativity checks, {problems or 'ok'}")


def test_7_defect_classifier(report):
    bad = []
    for n in range(1, 6):
        P, I = kronecker_string((n, n + 1)), kronecker_string((n + 1, n))
        if defect(KRONECKER, P.fiber_sizes) >= 0:
            bad.append(("preprojective", n))
        if defect(KRONECKER, I.fiber_sizes) <= 0:
            bad.append(("preinjective", n))
        M = kron_band(2 * n + 1)
        # a preinjective cannot sit below a band, nor a preprojective above it
        if product_evaluate(kron_fn((n + 1, n)), kron_fn((n, n + 1)), M) != 0:
            bad.append(("forbidden direction", n))
        if product_evaluate(kron_fn((n, n + 1)), kron_fn((n + 1, n)), M) <= 0:
            bad.append(("allowed direction", n))
    report("defect classifier", not bad, repr(bad) if bad else "n = 1..5")
