"""Ringel-Hall functions 1_{F,B,n} and pointwise evaluation of their products.

A :class:`HallFunction` is the indicator of the modules isomorphic to
``F_1 + ... + F_k + B_1(l_1, n_1) + ...`` for some band parameters.  The
product (1_f * 1_g)(M) is the Euler characteristic of the submodules N of M
with N in the class of f and M/N in the class of g.  It is evaluated
combinatorially:

* direct sums split one summand at a time over coproduct splittings (this is
  the grading by summand, the only computational content of the splitting
  grading);
* on a tree module it counts successor-closed subsets whose components and
  complement components match f and g;
* on a band module it lifts the strings to the band's cycle quiver, peels the
  band parts, and recurses on the largest preprojective sub-side class
  through a preinjective I_k.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations_with_replacement, product
from typing import Any, Iterator, Mapping, Optional, Sequence

from . import _kernels
from .errors import BoundTooSmall, DimensionMismatch, MalformedInput, UnsupportedModule
from .quiver import (
    BandTerm,
    DimLike,
    ModuleExpr,
    Quiver,
    TreeTerm,
    Winding,
    add_dims,
    identity_winding,
    restrict,
    validate_band,
    validate_winding,
    winding_canonical_form,
)
from .string_algebra import StringAlgebra, enumerate_bands, enumerate_strings, strings_with_dim
from .subsets import closed_masks, mask_vertices


@dataclass(frozen=True)
class HallFunction:
    """1_{trees, bands}: ``bands`` holds (band winding, n) pairs."""

    codomain: Quiver
    trees: tuple = ()
    bands: tuple = ()

    def __post_init__(self):
        for w in self.trees:
            if not isinstance(w, Winding) or not w.is_tree:
                raise MalformedInput("hall function trees must be tree windings")
            if w.codomain != self.codomain:
                raise DimensionMismatch("tree winding has a different codomain")
        bands = []
        for entry in self.bands:
            b, n = entry
            validate_band(b)
            if b.codomain != self.codomain:
                raise DimensionMismatch("band winding has a different codomain")
            if not isinstance(n, int) or n < 1:
                raise MalformedInput("band multiplicity must be a positive integer")
            bands.append((b, n))
        trees = sorted(self.trees, key=winding_canonical_form)
        bands.sort(key=lambda e: (winding_canonical_form(e[0]), e[1]))
        object.__setattr__(self, "trees", tuple(trees))
        object.__setattr__(self, "bands", tuple(bands))

    @cached_property
    def tree_keys(self) -> tuple:
        return tuple(winding_canonical_form(w) for w in self.trees)

    @cached_property
    def band_keys(self) -> tuple:
        return tuple((winding_canonical_form(b), n) for b, n in self.bands)

    @property
    def key(self) -> tuple:
        return self.tree_keys, self.band_keys

    @cached_property
    def dim(self) -> tuple:
        d = self.codomain.zero
        for w in self.trees:
            d = add_dims(d, w.fiber_sizes)
        for b, n in self.bands:
            d = add_dims(d, tuple(n * x for x in b.fiber_sizes))
        return d

    @property
    def is_empty(self) -> bool:
        return not self.trees and not self.bands

    def to_dict(self) -> dict:
        return {"trees": [w.to_dict() for w in self.trees],
                "bands": [{"winding": b.to_dict(), "n": n} for b, n in self.bands]}


def hall_function_from_dict(raw: Any, codomain: Optional[Quiver] = None) -> HallFunction:
    if not isinstance(raw, Mapping):
        raise MalformedInput("a hall function is an object with 'trees' and 'bands'")
    trees, bands = [], []
    for w in raw.get("trees", ()):
        trees.append(validate_winding(w, codomain))
        codomain = codomain or trees[-1].codomain
    for e in raw.get("bands", ()):
        if not isinstance(e, Mapping) or "winding" not in e:
            raise MalformedInput("band entries need 'winding' and 'n'")
        b = validate_winding(e["winding"], codomain)
        codomain = codomain or b.codomain
        bands.append((b, int(e.get("n", 1))))
    if codomain is None:
        raise MalformedInput("an empty hall function needs a codomain")
    return HallFunction(codomain, tuple(trees), tuple(bands))


def hall_function_of(M: ModuleExpr) -> HallFunction:
    """The indicator of the isomorphism class of ``M``."""
    return HallFunction(
        M.codomain,
        tuple(s.winding for s in M.summands if isinstance(s, TreeTerm)),
        tuple((s.winding, s.n) for s in M.summands if isinstance(s, BandTerm)))


def _module_key(M: ModuleExpr) -> tuple:
    trees = sorted(s.key for s in M.summands if isinstance(s, TreeTerm))
    bands = sorted((s.key, s.n) for s in M.summands if isinstance(s, BandTerm))
    return tuple(trees), tuple(bands)


def evaluate(f: HallFunction, M: ModuleExpr) -> int:
    """1 if M lies in the class of f (band parameters ignored), else 0."""
    if f.codomain != M.codomain:
        return 0
    return int(f.key == _module_key(M))


# --------------------------------------------------------------------------
# coproduct


def _sub_multisets(items: Sequence) -> Iterator[tuple]:
    """(chosen, rest) over all submultisets of ``items``, each choice once."""
    groups: dict = {}
    for x in items:
        groups.setdefault(x, 0)
        groups[x] += 1
    keys = list(groups)
    for counts in product(*(range(groups[k] + 1) for k in keys)):
        left, right = [], []
        for k, c in zip(keys, counts):
            left += [k] * c
            right += [k] * (groups[k] - c)
        yield tuple(left), tuple(right)


def coproduct_splittings(f: HallFunction) -> list:
    """All (f1, f2) with f1 + f2 = f as multisets; identical splittings once."""
    treg = dict(zip(f.tree_keys, f.trees))
    breg = {k: e for k, e in zip(f.band_keys, f.bands)}
    out = []
    for t1, t2 in _sub_multisets(f.tree_keys):
        for b1, b2 in _sub_multisets(f.band_keys):
            out.append((
                HallFunction(f.codomain, tuple(treg[k] for k in t1), tuple(breg[k] for k in b1)),
                HallFunction(f.codomain, tuple(treg[k] for k in t2), tuple(breg[k] for k in b2))))
    return out


# --------------------------------------------------------------------------
# type A-tilde helpers


def defect(S: Quiver, d: DimLike) -> int:
    """<delta, d> = sum_i d_i - sum_a d_{t(a)}: negative for preprojective,
    zero for regular and positive for preinjective modules."""
    d = S.dim(d)
    idx = S.index
    return sum(d) - sum(d[idx[a.tgt]] for a in S.arrows)


def band_peel(n: int, n2: int, m: int) -> Optional[int]:
    """Remaining band multiplicity after removing the sub and quotient band
    parts, or None when they do not fit (the product is then 0)."""
    if n + n2 > m:
        return None
    return m - n - n2


def _path_order(S: Quiver) -> list:
    if len(S.vertices) == 1:
        return [S.vertices[0]]
    nbr = {v: [] for v in S.vertices}
    for a in S.arrows:
        nbr[a.src].append((a, a.tgt))
        nbr[a.tgt].append((a, a.src))
    start = next(v for v in S.vertices if len(nbr[v]) == 1)
    order, prev = [start], None
    while len(order) < len(S.vertices):
        a, w = next((a, w) for a, w in nbr[order[-1]] if a is not prev)
        order.append(w)
        prev = a
    return order


def lift_string(F: Winding, B: Winding) -> list:
    """Windings G: A -> S with B o G = F, one per isomorphism class.

    Lifts are determined by the image of one end vertex: at every step the
    winding conditions on B leave at most one arrow to follow.
    """
    S = B.domain
    A = F.domain
    order = _path_order(A)
    steps = []
    for x, y in zip(order, order[1:]):
        a = next(a for a in A.arrows if {a.src, a.tgt} == {x, y})
        steps.append((a, a.src == x))
    found = {}
    for s0 in S.vertices:
        if B.vdict[s0] != F.vdict[order[0]]:
            continue
        vmap, amap, cur, ok = {order[0]: s0}, {}, s0, True
        for (a, forward), y in zip(steps, order[1:]):
            img = F.adict[a.id]
            cands = S.out_arrows[cur] if forward else S.in_arrows[cur]
            hit = [c for c in cands if B.adict[c.id] == img]
            if not hit:
                ok = False
                break
            c = hit[0]
            amap[a.id] = c.id
            cur = c.tgt if forward else c.src
            vmap[y] = cur
        if ok:
            G = Winding(A, S, vmap, amap)
            found.setdefault(winding_canonical_form(G), G)
    return [found[k] for k in sorted(found)]


# --------------------------------------------------------------------------
# evaluation


class _Context:
    """Registry of windings by canonical form plus memo tables, for one
    codomain and one top-level evaluation."""

    def __init__(self, codomain: Quiver, tie: str = "min"):
        self.codomain = codomain
        self.tie = tie
        self.reg: dict = {}
        self.memo: dict = {}
        self.sub: dict = {}
        self._dims: dict = {}

    def key(self, w: Winding) -> tuple:
        k = winding_canonical_form(w)
        self.reg.setdefault(k, w)
        return k

    def dim(self, k: tuple) -> tuple:
        d = self._dims.get(k)
        if d is None:
            d = self._dims[k] = self.reg[k].fiber_sizes
        return d

    def bag_dim(self, bag: Sequence[tuple]) -> tuple:
        d = self.codomain.zero
        for k in bag:
            d = add_dims(d, self.dim(k))
        return d

    def band_context(self, bkey: tuple, B: Winding) -> "_Context":
        ctx = self.sub.get(bkey)
        if ctx is None:
            ctx = self.sub[bkey] = _Context(B.domain, self.tie)
            ctx.algebra = StringAlgebra(B.domain)
        return ctx


def _tree_value(ctx: _Context, fbag: tuple, gbag: tuple, M: Winding) -> int:
    """Successor-closed subsets of the domain of M whose components match
    ``fbag`` and whose complement components match ``gbag``."""
    mkey = ctx.key(M)
    memo_key = ("tree", fbag, gbag, mkey)
    if memo_key in ctx.memo:
        return ctx.memo[memo_key]
    S = M.domain
    total = 0
    if add_dims(ctx.bag_dim(fbag), ctx.bag_dim(gbag)) == M.fiber_sizes:
        want_f, want_g = Counter(fbag), Counter(gbag)
        for mask in closed_masks(M, ctx.bag_dim(fbag)):
            sub = mask_vertices(S, mask)
            comps = S.components(sub)
            if len(comps) != len(fbag):
                continue
            if Counter(ctx.key(restrict(M, c)) for c in comps) != want_f:
                continue
            rest = S.components(set(S.vertices) - set(sub))
            if len(rest) != len(gbag):
                continue
            if Counter(ctx.key(restrict(M, c)) for c in rest) == want_g:
                total += 1
    ctx.memo[memo_key] = total
    return total


def _preinjective(ctx: _Context, d: tuple) -> Optional[tuple]:
    """Key of the preinjective string over the cycle quiver with dimension d."""
    memo_key = ("inj", d)
    if memo_key not in ctx.memo:
        hits = [w for w in strings_with_dim(ctx.algebra, d) if defect(ctx.codomain, d) > 0]
        assert len(hits) <= 1, "non-regular strings are determined by their dimension vector"
        ctx.memo[memo_key] = ctx.key(hits[0]) if hits else None
    return ctx.memo[memo_key]


def _band_core(ctx: _Context, fbag: tuple, gbag: tuple, m: int) -> int:
    """(1_f * 1_g)(B(l, m)) for string bags over the cycle quiver of ctx,
    with the identity band."""
    memo_key = ("band", fbag, gbag, m)
    if memo_key in ctx.memo:
        return ctx.memo[memo_key]
    S = ctx.codomain
    total = 0
    delta = (1,) * len(S.vertices)
    if add_dims(ctx.bag_dim(fbag), ctx.bag_dim(gbag)) != tuple(m * x for x in delta):
        pass
    elif not fbag:
        total = int(not gbag and m == 0)
    elif all(defect(S, ctx.dim(k)) < 0 for k in fbag) and all(defect(S, ctx.dim(k)) > 0 for k in gbag):
        # largest sub-side class; ties broken by canonical form
        top = max(sum(ctx.dim(k)) for k in fbag)
        tied = sorted({k for k in fbag if sum(ctx.dim(k)) == top})
        F = tied[0] if ctx.tie == "min" else tied[-1]
        copies = fbag.count(F) - 1
        others = tuple(k for k in fbag if k != F)
        dF = ctx.dim(F)
        for k in range(1, m + 1):
            v = tuple(k - x for x in dF)
            if min(v) < 0:
                continue
            inj = _preinjective(ctx, v)
            if inj is None:
                continue
            for f1, f2 in _sub_multisets(others):
                for g1, g2 in _sub_multisets(gbag):
                    if add_dims(ctx.bag_dim(f2), ctx.bag_dim(g2)) != v:
                        continue
                    b = _tree_value(ctx, tuple(sorted(f2)), tuple(sorted(g2)), ctx.reg[inj])
                    if not b:
                        continue
                    a = _band_core(ctx, tuple(sorted((F,) * copies + f1)), tuple(sorted(g1)), m - k)
                    total += a * b
    ctx.memo[memo_key] = total
    return total


def _is_string(w: Winding) -> bool:
    return w.shape.kind == "A"


def _band_value(ctx: _Context, f: HallFunction, g: HallFunction, M: BandTerm) -> int:
    B, m = M.winding, M.n
    bkey = M.key
    if len(f.bands) > 1 or len(g.bands) > 1:
        return 0
    if any(k != bkey for k, _ in f.band_keys + g.band_keys):
        return 0
    if not all(_is_string(w) for w in f.trees + g.trees):
        return 0
    if len(f.trees) != len(g.trees):
        return 0
    n = f.bands[0][1] if f.bands else 0
    n2 = g.bands[0][1] if g.bands else 0
    rest = band_peel(n, n2, m)
    if rest is None:
        return 0
    sctx = ctx.band_context(bkey, B)

    def lift_choices(h: HallFunction) -> list:
        groups = Counter(h.tree_keys)
        reg = dict(zip(h.tree_keys, h.trees))
        per_group = []
        for k, c in sorted(groups.items()):
            lifts = tuple(sctx.key(G) for G in lift_string(reg[k], B))
            per_group.append(list(combinations_with_replacement(lifts, c)))
        return [tuple(sorted(sum(choice, ()))) for choice in product(*per_group)]

    target = (rest,) * len(B.domain.vertices)
    gl = lift_choices(g)
    total = 0
    for fl in lift_choices(f):
        df = sctx.bag_dim(fl)
        for gg in gl:
            if add_dims(df, sctx.bag_dim(gg)) == target:
                total += _band_core(sctx, fl, gg, rest)
    return total


def _single_value(ctx: _Context, f: HallFunction, g: HallFunction, s) -> int:
    if isinstance(s, TreeTerm):
        if f.bands or g.bands:
            return 0
        fb = tuple(sorted(ctx.key(w) for w in f.trees))
        gb = tuple(sorted(ctx.key(w) for w in g.trees))
        return _tree_value(ctx, fb, gb, s.winding)
    if isinstance(s, BandTerm):
        return _band_value(ctx, f, g, s)
    raise UnsupportedModule("summands must be tree or band terms")


def _product(ctx: _Context, f: HallFunction, g: HallFunction, summands: tuple) -> int:
    d = ctx.codomain.zero
    for s in summands:
        d = add_dims(d, s.dim)
    if add_dims(f.dim, g.dim) != d:
        return 0
    if not summands:
        return int(f.is_empty and g.is_empty)
    if len(summands) == 1:
        return _single_value(ctx, f, g, summands[0])
    memo_key = ("sum", f.key, g.key, tuple(sorted((s.key, getattr(s, "n", 0)) for s in summands)))
    if memo_key in ctx.memo:
        return ctx.memo[memo_key]
    first, rest = summands[0], summands[1:]
    d1 = first.dim
    total = 0
    for f1, f2 in coproduct_splittings(f):
        if any(x > y for x, y in zip(f1.dim, d1)):
            continue
        for g1, g2 in coproduct_splittings(g):
            if add_dims(f1.dim, g1.dim) != d1:
                continue
            a = _single_value(ctx, f1, g1, first)
            if a:
                total += a * _product(ctx, f2, g2, rest)
    ctx.memo[memo_key] = total
    return total


def product_evaluate(f: HallFunction, g: HallFunction, M: ModuleExpr, *, tie: str = "min") -> int:
    """(1_f * 1_g)(M), exactly.

    ``tie`` picks which of several equally large sub-side classes the band
    recursion peels first ("min" or "max" canonical form); the value does
    not depend on it.
    """
    if f.codomain != M.codomain or g.codomain != M.codomain:
        raise DimensionMismatch("hall functions and module live over different quivers")
    if tie not in ("min", "max"):
        raise ValueError("tie must be 'min' or 'max'")
    ctx = _Context(M.codomain, tie)
    summands = tuple(sorted(M.summands, key=lambda s: (isinstance(s, BandTerm), s.key, getattr(s, "n", 0))))
    return _product(ctx, f, g, summands)


# --------------------------------------------------------------------------
# H_d


def indicator_dim_sum(A: StringAlgebra, d: DimLike, max_len: int) -> list:
    """The functions in H_d, whose sum is 1_d: every multiset of string
    classes and (band class, n) pairs with total dimension vector d."""
    Q = A.quiver
    d = Q.dim(d)
    total = sum(d)
    if max_len < total:
        raise BoundTooSmall(f"max_len {max_len} does not cover total dimension {total}",
                            max_len=max_len, needed=total)
    items = []
    if total:
        for w in enumerate_strings(A, total - 1):
            if all(x <= y for x, y in zip(w.fiber_sizes, d)):
                items.append((w.fiber_sizes, ("t", w)))
        for b in enumerate_bands(A, total):
            n = 1
            while all(n * x <= y for x, y in zip(b.fiber_sizes, d)):
                items.append((tuple(n * x for x in b.fiber_sizes), ("b", (b, n))))
                n += 1
    out = []
    budget = _kernels.enum_budget()

    def rec(i, need, chosen):
        if not any(need):
            trees = tuple(x for kind, x in chosen if kind == "t")
            bands = tuple(x for kind, x in chosen if kind == "b")
            out.append(HallFunction(Q, trees, bands))
            if len(out) > budget:
                _kernels._over_budget(len(out), budget)
            return
        for j in range(i, len(items)):
            dj, item = items[j]
            if all(x <= y for x, y in zip(dj, need)):
                rec(j, tuple(y - x for x, y in zip(dj, need)), chosen + [item])

    rec(0, d, [])
    return out
