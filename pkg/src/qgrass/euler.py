"""Euler characteristics of quiver Grassmannians and flag varieties.

For a tree module the Euler characteristic counts successor-closed subsets of
the domain with the requested pushforward dimension.  For a band module it is
a sum over the fibre of a closed product formula.  Direct sums are handled by
convolving per-summand tables (the Riedtmann rule).  Everything is exact.
"""

from __future__ import annotations

import itertools
import math
import random
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterator, Mapping, Optional, Sequence, Union

import numpy as np

from . import _kernels
from .errors import (
    DimensionMismatch,
    EnumerationBudgetExceeded,
    NonIntegerResult,
    NotABandDomain,
    NotATree,
    UnsupportedBandFlag,
)
from .quiver import (
    Arrow,
    BandTerm,
    DimLike,
    ModuleExpr,
    Quiver,
    TreeTerm,
    Winding,
    band_sequence,
    classify_quiver,
    cycle_quiver,
    identity_winding,
    iter_fiber_dims,
    leq,
    restrict,
    validate_band,
)
from .subsets import closed_masks, mask_dim

# Dense tables above this many cells switch to sparse enumeration.
DENSE_CAP = 1 << 18


def binom(r: int, s: int) -> int:
    """Binomial coefficient, 0 when s < 0 or s > r."""
    if s < 0 or r < 0 or s > r:
        return 0
    return math.comb(r, s)


def _bad_dim(d: Sequence[int], top: Sequence[int]) -> bool:
    return any(x < 0 or x > y for x, y in zip(d, top))


def _unit(shape: tuple, dtype=np.int64) -> np.ndarray:
    t = np.zeros(shape, dtype=dtype)
    t[(0,) * len(shape)] = 1
    return t


def _cells(shape: Sequence[int]) -> int:
    return math.prod(shape)


# --------------------------------------------------------------------------
# trees


def _require_tree(F: Winding):
    if not F.is_tree:
        raise NotATree("expected a winding whose domain is a tree")


def tree_table(F: Winding, shape: Sequence[int]) -> np.ndarray:
    """Counts of successor-closed subsets by pushforward dimension c, for all
    c < shape (componentwise), by dynamic programming over the tree."""
    _require_tree(F)
    shape = tuple(shape)
    S = F.domain
    dtype = np.int64 if len(S.vertices) < 60 else object
    lab = dict(zip(S.vertices, F.vlabel))
    adj = defaultdict(list)
    for a in S.arrows:
        adj[a.src].append((a.tgt, True))
        adj[a.tgt].append((a.src, False))
    root = S.vertices[0]
    order, parent = [root], {root: None}
    for x in order:
        for y, _ in adj[x]:
            if y not in parent:
                parent[y] = x
                order.append(y)
    inc, exc = {}, {}
    for v in reversed(order):
        i_tab = np.zeros(shape, dtype=dtype)
        pos = [0] * len(shape)
        pos[lab[v]] = 1
        if shape[lab[v]] > 1:
            i_tab[tuple(pos)] = 1
        e_tab = _unit(shape, dtype)
        for c, outward in adj[v]:
            if parent.get(c) != v:
                continue
            both = inc[c] + exc[c]
            if outward:  # arrow v -> c: v in R forces c in R
                i_tab = _kernels.convolve(i_tab, inc[c])
                e_tab = _kernels.convolve(e_tab, both)
            else:  # arrow c -> v: c in R forces v in R
                i_tab = _kernels.convolve(i_tab, both)
                e_tab = _kernels.convolve(e_tab, exc[c])
            del inc[c], exc[c]
        inc[v], exc[v] = i_tab, e_tab
    return inc[root] + exc[root]


def euler_tree(F: Winding, d: DimLike) -> int:
    """Number of successor-closed subsets R of the domain with pushforward d."""
    _require_tree(F)
    d = F.codomain.dim(d)
    if _bad_dim(d, F.fiber_sizes):
        return 0
    shape = tuple(x + 1 for x in d)
    if _cells(shape) <= DENSE_CAP:
        return int(tree_table(F, shape)[d])
    return len(closed_masks(F, d))


# --------------------------------------------------------------------------
# bands


@dataclass(frozen=True)
class BandProfile:
    """Orientation of a cycle in canonical labels plus a dimension tuple.

    ``signs[i]`` is +1 when arrow i (joining i and i+1) points towards i.
    """

    signs: tuple
    t: tuple
    n: int

    @property
    def l(self) -> int:
        return len(self.signs)

    @property
    def sources(self) -> tuple:
        e = self.signs
        return tuple(i for i in range(self.l) if e[i - 1] == 1 and e[i] == -1)

    @property
    def sinks(self) -> tuple:
        e = self.signs
        return tuple(i for i in range(self.l) if e[i - 1] == -1 and e[i] == 1)

    @property
    def r(self) -> int:
        return len(self.sources)


def canonical_t(S: Quiver, t: Union[Mapping[str, int], Sequence[int]]) -> tuple:
    """A dimension vector of a cycle quiver in canonical cyclic order.

    Mappings are keyed by vertex id; sequences are taken to be in canonical
    cyclic order already.
    """
    sh = classify_quiver(S)
    if sh.kind != "Atilde":
        raise NotABandDomain("expected a quiver consisting of one cycle")
    if isinstance(t, Mapping):
        dd = S.dim(t)
        return tuple(dd[S.index[v]] for v in sh.vertices)
    t = tuple(int(x) for x in t)
    if len(t) != sh.l:
        raise DimensionMismatch("dimension tuple length differs from the cycle length")
    return t


def band_profile(S: Quiver, t, n: int) -> BandProfile:
    sh = classify_quiver(S)
    return BandProfile(sh.signs, canonical_t(S, t), n)


@lru_cache(maxsize=None)
def _fact(x: int) -> int:
    return math.factorial(x)


def band_formula(p: BandProfile) -> int:
    """Closed product formula for the Euler characteristic of a band
    Grassmannian over its own cycle quiver.

    Factorials of negative numbers annihilate in a numerator and their
    reciprocals vanish in a denominator, so any negative argument gives 0.
    """
    n, t, e = p.n, p.t, p.signs
    l = len(t)
    num, den = 1, 1
    for i in p.sources:
        a, b = n - t[i], t[i]
        if a < 0 or b < 0:
            return 0
        num *= _fact(a)
        den *= _fact(b)
    for i in p.sinks:
        a, b = t[i], n - t[i]
        if a < 0 or b < 0:
            return 0
        num *= _fact(a)
        den *= _fact(b)
    for i in range(l):
        x = e[i] * (t[i] - t[(i + 1) % l])
        if x < 0:
            return 0
        den *= _fact(x)
    val = Fraction(num, den)
    if val.denominator != 1 or val < 0:
        raise NonIntegerResult(f"band formula gave {val} for {p}")
    return int(val)


def _band_canon_index(B: Winding) -> list:
    sh = B.shape
    idx = B.domain.index
    return [idx[v] for v in sh.vertices]


def euler_band(B: Winding, n: int, d: DimLike) -> int:
    """Sum of the band formula over the fibre of d (multiplicity n)."""
    validate_band(B)
    d = B.codomain.dim(d)
    sizes = tuple(n * x for x in B.fiber_sizes)
    if _bad_dim(d, sizes):
        return 0
    signs = B.shape.signs
    pos = _band_canon_index(B)
    total = 0
    for t in iter_fiber_dims(B, d, n):
        total += band_formula(BandProfile(signs, tuple(t[i] for i in pos), n))
    return total


def _band_values(B: Winding, n: int, upper: Sequence[int]):
    """Yield (pushforward, value) for every t in [0, n]^l with pushforward <= upper."""
    signs = B.shape.signs
    pos = _band_canon_index(B)
    lab = B.vlabel
    nS = len(lab)
    budget = _kernels.enum_budget()
    steps = 0
    acc = [0] * len(upper)
    t = [0] * nS

    def rec(i):
        nonlocal steps
        if i == nS:
            v = band_formula(BandProfile(signs, tuple(t[j] for j in pos), n))
            if v:
                yield tuple(acc), v
            return
        q = lab[i]
        for x in range(0, n + 1):
            if acc[q] + x > upper[q]:
                break
            steps += 1
            if steps > budget:
                raise EnumerationBudgetExceeded("band table enumeration exceeded QG_MAX_ENUM",
                                                budget=budget)
            t[i] = x
            acc[q] += x
            yield from rec(i + 1)
            acc[q] -= x
        t[i] = 0

    yield from rec(0)


def band_table(B: Winding, n: int, shape: Sequence[int]) -> np.ndarray:
    validate_band(B)
    shape = tuple(shape)
    vals = list(_band_values(B, n, tuple(s - 1 for s in shape)))
    big = any(v >= 2**62 for _, v in vals) or sum(v for _, v in vals) >= 2**62
    tab = np.zeros(shape, dtype=object if big else np.int64)
    for c, v in vals:
        tab[c] += v
    return tab


# --------------------------------------------------------------------------
# the recursion for band Grassmannians over a cycle quiver


class _BandRecursion:
    """Recursive evaluation of band Grassmannian Euler characteristics.

    The source at canonical position ``i1`` is peeled off: its subspace is
    put in echelon form, which leaves a direct sum of string modules over
    intervals of the cycle.  Positions below are 1-based after rotating
    ``i1`` to 1.
    """

    def __init__(self, S: Quiver, n: int):
        sh = classify_quiver(S)
        if sh.kind != "Atilde":
            raise NotABandDomain("expected a quiver consisting of one cycle")
        self.S, self.sh, self.n, self.l = S, sh, n, sh.l
        prof = BandProfile(sh.signs, (0,) * sh.l, n)
        self.oriented = prof.r == 0
        if self.oriented:
            return
        self.i1 = prof.sources[0]
        l = self.l
        sinks = sorted((j - self.i1) % l + 1 for j in prof.sinks)
        self.first_sink, self.last_sink = sinks[0], sinks[-1]
        self.r = prof.r
        ident = identity_winding(S)
        self.parts = [
            self._interval(ident, self.first_sink + 1, self.last_sink - 1),
            self._interval(ident, self.first_sink + 1, l),
            self._interval(ident, 2, self.last_sink - 1),
            self._interval(ident, 2, l),
        ]
        self._pow_cache = {}

    def _vertex(self, p: int) -> str:
        return self.sh.vertices[(self.i1 + p - 1) % self.l]

    def _interval(self, ident: Winding, a: int, b: int) -> Optional[Winding]:
        if a > b:
            return None
        return restrict(ident, [self._vertex(p) for p in range(a, b + 1)])

    def _power(self, j: int, e: int, shape: tuple) -> np.ndarray:
        key = (j, e, shape)
        if key not in self._pow_cache:
            w = self.parts[j]
            if e == 0 or w is None:
                tab = _unit(shape)
            else:
                base = tree_table(w, shape)
                tab = base
                for _ in range(e - 1):
                    tab = _kernels.convolve(tab, base)
            self._pow_cache[key] = tab
        return self._pow_cache[key]

    def x_table(self, T: int, k: int, shape: tuple) -> np.ndarray:
        """Table of Euler characteristics of the four-string direct sum
        A^(T-k) + B^k + C^k + D^(n-T-k), indexed by S-dimension vectors."""
        tab = self._power(0, T - k, shape)
        for j, e in ((1, k), (2, k), (3, self.n - T - k)):
            if e:
                tab = _kernels.convolve(tab, self._power(j, e, shape))
        return tab

    def shifted(self, t: tuple, T: int, k: int) -> tuple:
        """t' in S.vertices order, given t in canonical order."""
        l = self.l
        out = {}
        for p in range(1, l + 1):
            x = t[(self.i1 + p - 1) % l]
            if self.r == 1:
                x -= T
                if p == self.first_sink:
                    x -= k
            elif p <= self.first_sink or p >= self.last_sink:
                x -= T
            out[self._vertex(p)] = x
        return tuple(out[v] for v in self.S.vertices)

    def value(self, t: tuple) -> int:
        n = self.n
        if any(x < 0 or x > n for x in t):
            return 0
        if self.oriented:
            return int(len(set(t)) == 1)
        T = t[self.i1]
        total = 0
        for k in range(0, min(T, n - T) + 1):
            tp = self.shifted(t, T, k)
            if any(x < 0 for x in tp):
                continue
            shape = tuple(x + 1 for x in tp)
            coef = binom(T, k) * binom(n - T, k)
            total += coef * int(self.x_table(T, k, shape)[tp])
        return total

    def all_values(self) -> dict:
        """Values for every t in [0, n]^l (canonical order), sharing tables."""
        n, l = self.n, self.l
        out = {}
        if self.oriented:
            for t in product(range(n + 1), repeat=l):
                out[t] = int(len(set(t)) == 1)
            return out
        shape = (n + 1,) * l
        tables = {}
        for t in product(range(n + 1), repeat=l):
            T = t[self.i1]
            total = 0
            for k in range(0, min(T, n - T) + 1):
                tp = self.shifted(t, T, k)
                if any(x < 0 for x in tp):
                    continue
                if (T, k) not in tables:
                    tables[(T, k)] = self.x_table(T, k, shape)
                total += binom(T, k) * binom(n - T, k) * int(tables[(T, k)][tp])
            out[t] = total
        return out


def band_recursion_oracle(S: Quiver, t, n: int) -> int:
    """Band Grassmannian Euler characteristic by peeling one source at a time.

    ``t`` is a mapping keyed by vertex id or a tuple in canonical cyclic
    order.  Independent of :func:`band_formula`; the two must agree.
    """
    return _BandRecursion(S, n).value(canonical_t(S, t))


def band_recursion_table(S: Quiver, n: int) -> dict:
    return _BandRecursion(S, n).all_values()


# --------------------------------------------------------------------------
# direct sums


def summand_table(term, shape: Sequence[int]) -> np.ndarray:
    if isinstance(term, TreeTerm):
        return tree_table(term.winding, shape)
    return band_table(term.winding, term.n, shape)


def _summand_sparse(term, upper: tuple) -> dict:
    out = defaultdict(int)
    if isinstance(term, TreeTerm):
        w = term.winding
        for m in closed_masks(w, upper=upper):
            out[mask_dim(w, m)] += 1
    else:
        for c, v in _band_values(term.winding, term.n, upper):
            out[c] += v
    return out


def euler_module(M: ModuleExpr, d: DimLike) -> int:
    """Euler characteristic of Gr_d of a direct sum, by convolution."""
    d = M.codomain.dim(d)
    if _bad_dim(d, M.dim):
        return 0
    if not M.summands:
        return int(not any(d))
    shape = tuple(x + 1 for x in d)
    if _cells(shape) <= DENSE_CAP:
        tab = None
        for term in M.summands:
            st = summand_table(term, shape)
            tab = st if tab is None else _kernels.convolve(tab, st)
        return int(tab[d])
    acc = {M.codomain.zero: 1}
    for term in M.summands:
        part = _summand_sparse(term, d)
        nxt = defaultdict(int)
        for c1, v1 in acc.items():
            for c2, v2 in part.items():
                c = tuple(x + y for x, y in zip(c1, c2))
                if leq(c, d):
                    nxt[c] += v1 * v2
        acc = nxt
    return int(acc.get(d, 0))


def euler(M: Union[ModuleExpr, Winding], d: DimLike, n: int = 1) -> int:
    """Dispatch on a module expression, a tree winding or a band winding."""
    if isinstance(M, ModuleExpr):
        return euler_module(M, d)
    if M.is_tree:
        return euler_tree(M, d)
    return euler_band(M, n, d)


# --------------------------------------------------------------------------
# flags


def _flag_dims(q: Quiver, dims) -> list:
    return [q.dim(x) for x in dims]


def euler_flag_tree(F: Winding, dims) -> int:
    """Number of chains R1 <= ... <= Rr of successor-closed subsets with the
    given pushforward dimensions."""
    _require_tree(F)
    dims = _flag_dims(F.codomain, dims)
    if not dims:
        return 1
    levels = [closed_masks(F, d) for d in dims]
    nbits = len(F.domain.vertices)
    weights = [1] * len(levels[0])
    for lo, hi in zip(levels, levels[1:]):
        weights = _kernels.chain_step(lo, weights, hi, nbits)
    return sum(weights)


def _flag_table(F: Winding, dims: list) -> dict:
    """Chains of successor-closed subsets with c(i) <= dims[i], keyed by the
    tuple of their dimension vectors."""
    levels = [closed_masks(F, upper=d) for d in dims]
    state = {m: {(mask_dim(F, m),): 1} for m in levels[0]}
    for hi in levels[1:]:
        nxt = {}
        for u in hi:
            du = mask_dim(F, u)
            acc = defaultdict(int)
            for m, st in state.items():
                if m & ~u:
                    continue
                for key, v in st.items():
                    acc[key + (du,)] += v
            if acc:
                nxt[u] = acc
        state = nxt
    out = defaultdict(int)
    for st in state.values():
        for key, v in st.items():
            out[key] += v
    return out


def is_kronecker(q: Quiver) -> bool:
    if len(q.vertices) != 2 or len(q.arrows) != 2:
        return False
    a, b = q.arrows
    return a.src == b.src and a.tgt == b.tgt and a.src != a.tgt


def zigzag_string(n: int, codomain: Optional[Quiver] = None) -> Winding:
    """The string 1(1) -> 2(1) <- 1(2) -> 2(2) <- ... -> 2(n) over a Kronecker quiver.

    Vertex 1(i) maps to the source of the Kronecker quiver, 2(i) to its sink;
    1(i) -> 2(i) uses the first arrow and 1(i) -> 2(i-1) the second.
    """
    Q = codomain or Quiver(("1", "2"), (Arrow("a", "1", "2"), Arrow("b", "1", "2")))
    if not is_kronecker(Q):
        raise DimensionMismatch("zigzag strings live over a Kronecker quiver")
    x, y = Q.arrows
    width = len(str(n))
    top = [f"1^{i:0{width}d}" for i in range(1, n + 1)]
    bot = [f"2^{i:0{width}d}" for i in range(1, n + 1)]
    arrows, amap = [], {}
    for i in range(n):
        aid = f"x{i + 1:0{width}d}"
        arrows.append(Arrow(aid, top[i], bot[i]))
        amap[aid] = x.id
        if i:
            aid = f"y{i + 1:0{width}d}"
            arrows.append(Arrow(aid, top[i], bot[i - 1]))
            amap[aid] = y.id
    vmap = {v: x.src for v in top}
    vmap.update({v: x.tgt for v in bot})
    return Winding(Quiver(tuple(top + bot), tuple(arrows)), Q, vmap, amap)


def kronecker_band_flag(n: int, dims, codomain: Optional[Quiver] = None) -> int:
    """Flag Euler characteristic of a Kronecker band module of dimension (n, n).

    Shifting the band parameter by an algebra automorphism turns the band
    module into the zigzag string module of the same dimension, so the count
    is done on that string.
    """
    return euler_flag_tree(zigzag_string(n, codomain), dims)


def _flag_tree_term(term) -> Winding:
    if isinstance(term, TreeTerm):
        return term.winding
    B = term.winding
    if is_kronecker(B.codomain) and len(B.domain.vertices) == 2:
        return zigzag_string(term.n, B.codomain)
    raise UnsupportedBandFlag("flag varieties of band modules are only available over the "
                              "Kronecker quiver")


def euler_flag_module(M: ModuleExpr, dims) -> int:
    """Flag Euler characteristic of a direct sum by multi-index convolution."""
    dims = _flag_dims(M.codomain, dims)
    trees = [_flag_tree_term(s) for s in M.summands]
    if not dims:
        return 1
    if any(_bad_dim(d, M.dim) for d in dims):
        return 0
    r = len(dims)
    zero = M.codomain.zero
    acc = {(zero,) * r: 1}
    for F in trees:
        part = _flag_table(F, dims)
        nxt = defaultdict(int)
        for k1, v1 in acc.items():
            for k2, v2 in part.items():
                key = tuple(tuple(x + y for x, y in zip(a, b)) for a, b in zip(k1, k2))
                if all(leq(c, d) for c, d in zip(key, dims)):
                    nxt[key] += v1 * v2
        acc = nxt
    return int(acc.get(tuple(dims), 0))


# --------------------------------------------------------------------------
# oracle sweeps


def cycle_orientations(max_l: int) -> Iterator[tuple]:
    """Canonical sign sequences of all cycle quivers with 1..max_l vertices."""
    seen = set()
    for l in range(1, max_l + 1):
        for signs in itertools.product((1, -1), repeat=l):
            canon = classify_quiver(cycle_quiver(signs)).signs
            if canon not in seen:
                seen.add(canon)
                yield canon


def band_oracle_sweep(max_l: int = 5, max_n: int = 3) -> tuple:
    """Compare band_formula with the recursion on every orientation with
    l <= max_l, every n <= max_n and every t <= n.

    Returns ``(cases, mismatches)`` where mismatches lists
    ``(signs, n, t, formula, recursion)``.
    """
    cases, bad = 0, []
    for signs in cycle_orientations(max_l):
        S = cycle_quiver(signs)
        for n in range(1, max_n + 1):
            for t, v in band_recursion_table(S, n).items():
                f = band_formula(BandProfile(signs, t, n))
                cases += 1
                if f != v:
                    bad.append((signs, n, t, f, v))
    return cases, bad


def random_band_profiles(count: int, max_l: int, max_n: int, seed: int = 0) -> list:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        l = rng.randint(1, max_l)
        signs = classify_quiver(cycle_quiver([rng.choice((1, -1)) for _ in range(l)])).signs
        n = rng.randint(1, max_n)
        out.append(BandProfile(signs, tuple(rng.randint(0, n) for _ in range(l)), n))
    return out
