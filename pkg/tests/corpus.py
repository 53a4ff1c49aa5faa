"""Shared constructions for the test suite."""

from __future__ import annotations

import random

from qgrass.quiver import (
    Arrow,
    BandTerm,
    ModuleExpr,
    Quiver,
    TreeTerm,
    Winding,
    identity_winding,
    restrict,
)
from qgrass.string_algebra import strings_with_dim, validate_string_algebra

TWO_LOOPS = Quiver(("o",), (("alpha", "o", "o"), ("beta", "o", "o")))
KRONECKER = Quiver(("1", "2"), (("a", "1", "2"), ("b", "1", "2")))
A2 = Quiver(("1", "2"), (("a", "1", "2"),))


def two_loop_band() -> Winding:
    """The band 1 -beta-> 2 -alpha-> 4 <-beta- 3 <-alpha- 1 over two loops."""
    S = Quiver(("1", "2", "3", "4"), (("beta", "1", "2"), ("alpha", "1", "3"),
                                      ("alpha'", "2", "4"), ("beta'", "3", "4")))
    return Winding(S, TWO_LOOPS, {v: "o" for v in S.vertices},
                   {"beta": "beta", "alpha": "alpha", "alpha'": "alpha", "beta'": "beta"})


def two_loop_tree() -> Winding:
    """1 -alpha-> 2 -beta-> 3 <-alpha- 2' <-beta- 1' over two loops."""
    S = Quiver(("1", "1'", "2", "2'", "3"), (("alpha", "1", "2"), ("beta", "2", "3"),
                                              ("beta'", "1'", "2'"), ("alpha'", "2'", "3")))
    return Winding(S, TWO_LOOPS, {v: "o" for v in S.vertices},
                   {"alpha": "alpha", "beta": "beta", "beta'": "beta", "alpha'": "alpha"})


LOOP_Q = Quiver(("1", "2", "3"), (("alpha", "1", "3"), ("beta", "2", "3"), ("gamma", "3", "3")))


def loop_tree() -> Winding:
    """Three arrows into 3' followed by a loop image out of it."""
    S = Quiver(("1", "2", "3", "3'", "3''"), (("alpha", "1", "3'"), ("beta", "2", "3'"),
                                               ("gamma", "3", "3'"), ("gamma'", "3'", "3''")))
    return Winding(S, LOOP_Q, {"1": "1", "2": "2", "3": "3", "3'": "3", "3''": "3"},
                   {"alpha": "alpha", "beta": "beta", "gamma": "gamma", "gamma'": "gamma"})


def kronecker_band() -> Winding:
    return identity_winding(KRONECKER)


def a2_string_plus_simples() -> ModuleExpr:
    ident = identity_winding(A2)
    return ModuleExpr(A2, (TreeTerm(ident), TreeTerm(restrict(ident, ["1"])),
                           TreeTerm(restrict(ident, ["2"]))))


# quiver 1 -> 2, 1 -> 3 with a loop at 3
HALL_Q = Quiver(("1", "2", "3"), (("alpha", "1", "2"), ("beta", "1", "3"), ("gamma", "3", "3")))


def _w(verts, arrows, vmap, amap, cod):
    return Winding(Quiver(tuple(verts), tuple(arrows)), cod, vmap, amap)


def hall_string() -> Winding:
    """2 <-alpha- 1 -beta-> 3 -gamma-> 3' <-beta- 1' -alpha-> 2'."""
    return _w(["2", "1", "3", "3'", "1'", "2'"],
              [("a", "1", "2"), ("b", "1", "3"), ("c", "3", "3'"), ("b'", "1'", "3'"),
               ("a'", "1'", "2'")],
              {"2": "2", "1": "1", "3": "3", "3'": "3", "1'": "1", "2'": "2"},
              {"a": "alpha", "b": "beta", "c": "gamma", "b'": "beta", "a'": "alpha"}, HALL_Q)


def hall_simple(v: str) -> Winding:
    return _w(["x"], [], {"x": v}, {}, HALL_Q)


def hall_pair(src: str, tgt: str, arrow: str) -> Winding:
    return _w(["x", "y"], [("c", "x", "y")], {"x": src, "y": tgt}, {"c": arrow}, HALL_Q)


# 1 -> 2 with two arrows 2 -> 3
DOUBLE_Q = Quiver(("1", "2", "3"), (("alpha", "1", "2"), ("beta", "2", "3"), ("gamma", "2", "3")))


def double_cycle_winding() -> Winding:
    """1 -> 2 followed by the square 2 -> 3 <- 2' -> 3' <- 2 (not a tree)."""
    return _w(["1", "2", "2'", "3", "3'"],
              [("alpha", "1", "2"), ("beta", "2", "3"), ("gamma'", "2", "3'"),
               ("beta'", "2'", "3'"), ("gamma", "2'", "3")],
              {"1": "1", "2": "2", "2'": "2", "3": "3", "3'": "3"},
              {"alpha": "alpha", "beta": "beta", "gamma'": "gamma", "beta'": "beta",
               "gamma": "gamma"}, DOUBLE_Q)


KRONECKER_ALGEBRA = {"quiver": KRONECKER.to_dict(), "relations": []}
A2_ALGEBRA = {"quiver": A2.to_dict(), "relations": []}
TWO_LOOP_ALGEBRA = {"quiver": TWO_LOOPS.to_dict(),
                    "relations": [["alpha", "alpha"], ["beta", "beta"], ["alpha", "beta", "alpha"]]}


def kronecker_string(d) -> Winding:
    return strings_with_dim(validate_string_algebra(KRONECKER_ALGEBRA), d)[0]


# --------------------------------------------------------------------------
# random trees


def random_tree_winding(rng: random.Random, Q: Quiver, n_vertices: int, tries: int = 200):
    """A random tree winding into Q with ``n_vertices`` domain vertices, grown
    leaf by leaf while keeping the winding conditions; None if stuck."""
    for _ in range(tries):
        vmap = {"v0": rng.choice(Q.vertices)}
        arrows, amap = [], {}
        used = {"v0": set()}  # (arrow image, end) pairs already attached
        ok = True
        for i in range(1, n_vertices):
            options = []
            for v in vmap:
                for a in Q.arrows:
                    if a.src == vmap[v] and (a.id, "s") not in used[v]:
                        options.append((v, a, "s"))
                    if a.tgt == vmap[v] and (a.id, "t") not in used[v]:
                        options.append((v, a, "t"))
            if not options:
                ok = False
                break
            v, a, end = rng.choice(options)
            w = f"v{i}"
            aid = f"e{i}"
            if end == "s":
                arrows.append(Arrow(aid, v, w))
                vmap[w] = a.tgt
                used[w] = {(a.id, "t")}
            else:
                arrows.append(Arrow(aid, w, v))
                vmap[w] = a.src
                used[w] = {(a.id, "s")}
            used[v].add((a.id, end))
            amap[aid] = a.id
        if ok:
            return Winding(Quiver(tuple(vmap), tuple(arrows)), Q, vmap, amap)
    return None


def tree_corpus(seed: int = 2024, count: int = 24, max_vertices: int = 10) -> list:
    """Examples plus seeded random tree windings over a few small quivers."""
    rng = random.Random(seed)
    out = [two_loop_tree(), loop_tree(), hall_string()]
    targets = [TWO_LOOPS, KRONECKER, LOOP_Q, HALL_Q, A2]
    while len(out) < count:
        Q = rng.choice(targets)
        w = random_tree_winding(rng, Q, rng.randint(1, max_vertices))
        if w is not None:
            out.append(w)
    return out
