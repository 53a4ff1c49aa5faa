"""Quivers, windings and symbolic module expressions.

Ids are opaque strings.  Every container keeps vertices and arrows sorted by
id, so dimension vectors are plain tuples aligned with ``Quiver.vertices``.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Iterable, Iterator, Mapping, Optional, Sequence, Union

from .errors import (
    DanglingArrow,
    DimensionMismatch,
    DuplicateId,
    EmptyQuiver,
    FoldAtSource,
    FoldAtTarget,
    MalformedInput,
    MixedKinds,
    NotABandDomain,
    NotATree,
    NotMorphism,
    PeriodicBand,
)

DimLike = Union[Mapping[str, int], Sequence[int]]
DimVec = tuple  # tuple[int, ...] aligned with Quiver.vertices


@dataclass(frozen=True)
class Arrow:
    id: str
    src: str
    tgt: str


def _first_duplicate(items: Iterable[str]) -> Optional[str]:
    seen = set()
    for x in items:
        if x in seen:
            return x
        seen.add(x)
    return None


@dataclass(frozen=True)
class Quiver:
    """A finite quiver.  Construction validates and sorts the input."""

    vertices: tuple
    arrows: tuple = ()

    def __post_init__(self):
        verts = tuple(str(v) for v in self.vertices)
        arrows = tuple(a if isinstance(a, Arrow) else Arrow(*map(str, a)) for a in self.arrows)
        if not verts:
            raise EmptyQuiver("a quiver needs at least one vertex")
        dup = _first_duplicate(verts)
        if dup is not None:
            raise DuplicateId(f"vertex id {dup!r} appears twice", id=dup)
        dup = _first_duplicate(a.id for a in arrows)
        if dup is not None:
            raise DuplicateId(f"arrow id {dup!r} appears twice", id=dup)
        vset = set(verts)
        for a in arrows:
            for end in (a.src, a.tgt):
                if end not in vset:
                    raise DanglingArrow(f"arrow {a.id!r} references missing vertex {end!r}",
                                        arrow=a.id, vertex=end)
        object.__setattr__(self, "vertices", tuple(sorted(verts)))
        object.__setattr__(self, "arrows", tuple(sorted(arrows, key=lambda a: a.id)))

    @cached_property
    def index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def arrow_index(self) -> dict:
        return {a.id: i for i, a in enumerate(self.arrows)}

    def arrow(self, aid: str) -> Arrow:
        return self.arrows[self.arrow_index[aid]]

    @cached_property
    def out_arrows(self) -> dict:
        out = {v: [] for v in self.vertices}
        for a in self.arrows:
            out[a.src].append(a)
        return {v: tuple(x) for v, x in out.items()}

    @cached_property
    def in_arrows(self) -> dict:
        inc = {v: [] for v in self.vertices}
        for a in self.arrows:
            inc[a.tgt].append(a)
        return {v: tuple(x) for v, x in inc.items()}

    @cached_property
    def incidences(self) -> dict:
        """vertex -> list of (arrow id, end) with end 's' or 't'; loops appear twice."""
        inc = {v: [] for v in self.vertices}
        for a in self.arrows:
            inc[a.src].append((a.id, "s"))
            inc[a.tgt].append((a.id, "t"))
        return inc

    def dim(self, d: DimLike) -> DimVec:
        """Coerce a mapping (missing vertices are 0) or an aligned sequence."""
        if isinstance(d, Mapping):
            extra = set(map(str, d)) - set(self.vertices)
            if extra:
                raise DimensionMismatch(f"unknown vertices in dimension vector: {sorted(extra)}")
            return tuple(int(d.get(v, 0)) for v in self.vertices)
        d = tuple(int(x) for x in d)
        if len(d) != len(self.vertices):
            raise DimensionMismatch(
                f"dimension vector has {len(d)} entries, quiver has {len(self.vertices)} vertices")
        return d

    def dim_dict(self, d: Sequence[int]) -> dict:
        return dict(zip(self.vertices, d))

    @property
    def zero(self) -> DimVec:
        return (0,) * len(self.vertices)

    def full_subquiver(self, verts: Iterable[str]) -> "Quiver":
        keep = set(verts)
        return Quiver(tuple(keep), tuple(a for a in self.arrows if a.src in keep and a.tgt in keep))

    def components(self, verts: Optional[Iterable[str]] = None) -> list:
        """Connected components (undirected) of the full subquiver on ``verts``."""
        keep = set(self.vertices if verts is None else verts)
        adj = defaultdict(set)
        for a in self.arrows:
            if a.src in keep and a.tgt in keep:
                adj[a.src].add(a.tgt)
                adj[a.tgt].add(a.src)
        seen, comps = set(), []
        for v in sorted(keep):
            if v in seen:
                continue
            stack, comp = [v], []
            seen.add(v)
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            comps.append(tuple(sorted(comp)))
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) == 1

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "arrows": [{"id": a.id, "src": a.src, "tgt": a.tgt} for a in self.arrows],
        }


def leq(c: Sequence[int], d: Sequence[int]) -> bool:
    return all(x <= y for x, y in zip(c, d))


def add_dims(c: Sequence[int], d: Sequence[int]) -> DimVec:
    return tuple(x + y for x, y in zip(c, d))


def sub_dims(c: Sequence[int], d: Sequence[int]) -> DimVec:
    return tuple(x - y for x, y in zip(c, d))


# --------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class QuiverClass:
    """Shape of a connected quiver.

    ``kind`` is one of ``"A"`` (a path, l vertices), ``"tree"``, ``"Atilde"``
    (one cycle through every vertex, l arrows) or ``"other"``.  For ``"Atilde"``
    the cycle is stored in canonical order: arrow ``arrows[i]`` joins
    ``vertices[i]`` and ``vertices[i+1]`` and ``signs[i]`` is +1 when it points
    towards ``vertices[i]``.
    """

    kind: str
    l: int
    vertices: tuple = ()
    arrows: tuple = ()
    signs: tuple = ()

    @property
    def is_tree(self) -> bool:
        return self.kind in ("A", "tree")

    @property
    def sources(self) -> tuple:
        return tuple(v for i, v in enumerate(self.vertices)
                     if self.signs[i - 1] == 1 and self.signs[i] == -1)

    @property
    def sinks(self) -> tuple:
        return tuple(v for i, v in enumerate(self.vertices)
                     if self.signs[i - 1] == -1 and self.signs[i] == 1)


def _walk_cycle(q: Quiver) -> tuple:
    """One traversal of a quiver in which every vertex has two arrow ends."""
    inc = q.incidences
    start = q.vertices[0]
    verts, arrows, signs = [], [], []
    v, (aid, end) = start, inc[start][0]
    for _ in range(len(q.arrows)):
        verts.append(v)
        arrows.append(aid)
        a = q.arrow(aid)
        if end == "s":
            signs.append(-1)
            w, arrive = a.tgt, (aid, "t")
        else:
            signs.append(1)
            w, arrive = a.src, (aid, "s")
        here = inc[w]
        v, (aid, end) = w, (here[1] if here[0] == arrive else here[0])
    return tuple(verts), tuple(arrows), tuple(signs)


def cycle_variants(verts: tuple, arrows: tuple, signs: tuple) -> Iterator[tuple]:
    """All rotations of a traversal and of its reversal (signs flip on reversal)."""
    l = len(arrows)
    rv = (verts[0],) + tuple(reversed(verts[1:]))
    ra = tuple(reversed(arrows))
    rs = tuple(-e for e in reversed(signs))
    for vs, as_, ss in ((verts, arrows, signs), (rv, ra, rs)):
        for k in range(l):
            yield vs[k:] + vs[:k], as_[k:] + as_[:k], ss[k:] + ss[:k]


def classify_quiver(q: Quiver) -> QuiverClass:
    nv, na = len(q.vertices), len(q.arrows)
    if not q.is_connected():
        return QuiverClass("other", nv)
    if na == nv - 1:
        degree = Counter()
        for a in q.arrows:
            degree[a.src] += 1
            degree[a.tgt] += 1
        if all(degree[v] <= 2 for v in q.vertices):
            return QuiverClass("A", nv)
        return QuiverClass("tree", nv)
    if na == nv and all(len(x) == 2 for x in q.incidences.values()):
        best = min(
            (tuple(zip(a, s)), v, a, s) for v, a, s in cycle_variants(*_walk_cycle(q))
        )
        return QuiverClass("Atilde", nv, best[1], best[2], best[3])
    return QuiverClass("other", nv)


# --------------------------------------------------------------------------
# windings


@dataclass(frozen=True)
class Winding:
    """A winding S -> Q.  ``vmap``/``amap`` may be given as mappings."""

    domain: Quiver
    codomain: Quiver
    vmap: Any
    amap: Any = ()

    def __post_init__(self):
        S, Q = self.domain, self.codomain
        vmap, amap = self.vmap, self.amap
        if isinstance(vmap, Mapping):
            if set(map(str, vmap)) != set(S.vertices):
                raise NotMorphism("vertex map must be defined exactly on the domain vertices")
            vmap = tuple(str(vmap[v]) for v in S.vertices)
        if isinstance(amap, Mapping):
            if set(map(str, amap)) != {a.id for a in S.arrows}:
                raise NotMorphism("arrow map must be defined exactly on the domain arrows")
            amap = tuple(str(amap[a.id]) for a in S.arrows)
        vmap, amap = tuple(vmap), tuple(amap)
        if len(vmap) != len(S.vertices) or len(amap) != len(S.arrows):
            raise NotMorphism("vertex/arrow maps do not match the domain")
        for x in vmap:
            if x not in Q.index:
                raise NotMorphism(f"vertex image {x!r} is not a codomain vertex")
        for x in amap:
            if x not in Q.arrow_index:
                raise NotMorphism(f"arrow image {x!r} is not a codomain arrow")
        object.__setattr__(self, "vmap", vmap)
        object.__setattr__(self, "amap", amap)
        vm = dict(zip(S.vertices, vmap))
        seen_src, seen_tgt = {}, {}
        for a, img in zip(S.arrows, amap):
            b = Q.arrow(img)
            if vm[a.src] != b.src or vm[a.tgt] != b.tgt:
                raise NotMorphism(f"arrow {a.id!r} is not sent to an arrow with matching ends",
                                  arrow=a.id)
            key = (a.src, img)
            if key in seen_src:
                raise FoldAtSource(f"arrows {seen_src[key]!r} and {a.id!r} leave {a.src!r} "
                                   f"and share the image {img!r}", arrows=[seen_src[key], a.id])
            seen_src[key] = a.id
            key = (a.tgt, img)
            if key in seen_tgt:
                raise FoldAtTarget(f"arrows {seen_tgt[key]!r} and {a.id!r} enter {a.tgt!r} "
                                   f"and share the image {img!r}", arrows=[seen_tgt[key], a.id])
            seen_tgt[key] = a.id

    @cached_property
    def vdict(self) -> dict:
        return dict(zip(self.domain.vertices, self.vmap))

    @cached_property
    def adict(self) -> dict:
        return dict(zip((a.id for a in self.domain.arrows), self.amap))

    @cached_property
    def shape(self) -> QuiverClass:
        return classify_quiver(self.domain)

    @property
    def is_tree(self) -> bool:
        return self.shape.is_tree

    @property
    def is_band_domain(self) -> bool:
        return self.shape.kind == "Atilde"

    @cached_property
    def vlabel(self) -> tuple:
        """Codomain vertex index of each domain vertex (domain order)."""
        idx = self.codomain.index
        return tuple(idx[x] for x in self.vmap)

    def pushforward(self, t: DimLike) -> DimVec:
        t = self.domain.dim(t)
        d = [0] * len(self.codomain.vertices)
        for q, x in zip(self.vlabel, t):
            d[q] += x
        return tuple(d)

    @cached_property
    def fiber_sizes(self) -> DimVec:
        return self.pushforward((1,) * len(self.domain.vertices))

    def to_dict(self) -> dict:
        return {
            "domain": self.domain.to_dict(),
            "codomain": self.codomain.to_dict(),
            "vmap": dict(self.vdict),
            "amap": dict(self.adict),
        }


def validate_quiver(raw: Any) -> Quiver:
    if isinstance(raw, Quiver):
        return raw
    if not isinstance(raw, Mapping) or "vertices" not in raw:
        raise MalformedInput("a quiver needs a 'vertices' list")
    try:
        arrows = tuple(Arrow(str(a["id"]), str(a["src"]), str(a["tgt"]))
                       for a in raw.get("arrows", ()))
    except (KeyError, TypeError) as exc:
        raise MalformedInput(f"arrow entries need id/src/tgt: {exc}") from None
    return Quiver(tuple(str(v) for v in raw["vertices"]), arrows)


def validate_winding(raw: Any, codomain: Optional[Quiver] = None) -> Winding:
    if isinstance(raw, Winding):
        w = raw
    else:
        if not isinstance(raw, Mapping) or not {"domain", "vmap"} <= set(raw):
            raise MalformedInput("a winding needs 'domain', 'codomain', 'vmap' and 'amap'")
        cod = validate_quiver(raw["codomain"]) if "codomain" in raw else codomain
        if cod is None:
            raise MalformedInput("winding has no codomain")
        w = Winding(validate_quiver(raw["domain"]), cod, dict(raw["vmap"]), dict(raw.get("amap", {})))
    if codomain is not None and w.codomain != codomain:
        raise DimensionMismatch("winding codomain differs from the expected quiver")
    return w


def identity_winding(q: Quiver) -> Winding:
    return Winding(q, q, q.vertices, tuple(a.id for a in q.arrows))


def compose(g: Winding, f: Winding) -> Winding:
    """g o f (f: S -> Q', g: Q' -> Q)."""
    if f.codomain != g.domain:
        raise DimensionMismatch("windings are not composable")
    return Winding(f.domain, g.codomain,
                   tuple(g.vdict[x] for x in f.vmap), tuple(g.adict[x] for x in f.amap))


def restrict(w: Winding, verts: Iterable[str]) -> Winding:
    """Restriction of ``w`` to the full subquiver on ``verts``."""
    sub = w.domain.full_subquiver(verts)
    return Winding(sub, w.codomain, {v: w.vdict[v] for v in sub.vertices},
                   {a.id: w.adict[a.id] for a in sub.arrows})


def disjoint_union(ws: Sequence[Winding]) -> Winding:
    """Disjoint union of windings into one codomain; ids get a ``k:`` prefix."""
    if not ws:
        raise DimensionMismatch("empty union")
    cod = ws[0].codomain
    verts, arrows, vmap, amap = [], [], {}, {}
    for k, w in enumerate(ws):
        if w.codomain != cod:
            raise DimensionMismatch("windings have different codomains")
        for v in w.domain.vertices:
            verts.append(f"{k}:{v}")
            vmap[f"{k}:{v}"] = w.vdict[v]
        for a in w.domain.arrows:
            arrows.append(Arrow(f"{k}:{a.id}", f"{k}:{a.src}", f"{k}:{a.tgt}"))
            amap[f"{k}:{a.id}"] = w.adict[a.id]
    return Winding(Quiver(tuple(verts), tuple(arrows)), cod, vmap, amap)


def relabel(w: Winding, vname: Mapping[str, str], aname: Mapping[str, str]) -> Winding:
    """Rename domain ids; the result is isomorphic to ``w``."""
    S = w.domain
    dom = Quiver(tuple(vname[v] for v in S.vertices),
                 tuple(Arrow(aname[a.id], vname[a.src], vname[a.tgt]) for a in S.arrows))
    return Winding(dom, w.codomain, {vname[v]: w.vdict[v] for v in S.vertices},
                   {aname[a.id]: w.adict[a.id] for a in S.arrows})


# --------------------------------------------------------------------------
# bands


def band_sequence(w: Winding) -> tuple:
    """(image, sign) pairs around the canonical cycle of the domain."""
    sh = w.shape
    if sh.kind != "Atilde":
        raise NotABandDomain("band windings need a domain with a single cycle through all vertices")
    return tuple((w.adict[a], e) for a, e in zip(sh.arrows, sh.signs))


def band_period(w: Winding) -> int:
    """Least r >= 1 with the (image, sign) sequence invariant under rotation by r."""
    seq = band_sequence(w)
    l = len(seq)
    for r in range(1, l):
        if l % r == 0 and seq[r:] + seq[:r] == seq:
            return r
    return l


def validate_band(b: Winding) -> Winding:
    r = band_period(b)
    if r < len(b.domain.arrows):
        raise PeriodicBand(r)
    return b


def cycle_quiver(signs: Sequence[int], prefix: str = "") -> Quiver:
    """Cycle with vertices ``{prefix}1..l`` (zero padded); arrow i joins i and i+1.

    Sign +1 points the arrow from i+1 to i, sign -1 from i to i+1.
    """
    l = len(signs)
    width = len(str(l))
    name = [f"{prefix}{i + 1:0{width}d}" for i in range(l)]
    arrows = []
    for i, e in enumerate(signs):
        a, b = name[i], name[(i + 1) % l]
        arrows.append(Arrow(f"{prefix}s{i + 1:0{width}d}", *((b, a) if e == 1 else (a, b))))
    return Quiver(tuple(name), tuple(arrows))


def fold_periodic_band(b: Winding) -> tuple:
    """Split a periodic band winding into its primitive part.

    Returns ``(primitive_band, r)`` where the pushforward of a thin invertible
    representation along ``b`` is a direct sum of ``r`` band modules of
    ``primitive_band`` with multiplicity one.
    """
    seq = band_sequence(b)
    p = band_period(b)
    r = len(seq) // p
    part = seq[:p]
    dom = cycle_quiver([e for _, e in part])
    sh = b.shape
    cod = b.codomain
    vmap, amap = {}, {}
    order = dom.vertices
    for i, (img, e) in enumerate(part):
        arrow = dom.arrows[i]
        amap[arrow.id] = img
        vmap[order[i]] = b.vdict[sh.vertices[i]]
    return validate_band(Winding(dom, cod, vmap, amap)), r


# --------------------------------------------------------------------------
# canonical forms


def _tree_code(w: Winding, root: str) -> tuple:
    S = w.domain
    adj = defaultdict(list)
    for a in S.arrows:
        adj[a.src].append((a.tgt, w.adict[a.id], 1))
        adj[a.tgt].append((a.src, w.adict[a.id], -1))
    order, parent = [root], {root: None}
    for x in order:
        for y, _, _ in adj[x]:
            if y not in parent:
                parent[y] = x
                order.append(y)
    code = {}
    for x in reversed(order):
        kids = sorted((img, sgn, code[y]) for y, img, sgn in adj[x] if parent.get(y) == x and y != parent[x])
        code[x] = (w.vdict[x], tuple(kids))
    return code[root]


def _tree_centers(q: Quiver) -> list:
    deg = Counter()
    adj = defaultdict(list)
    for a in q.arrows:
        adj[a.src].append(a.tgt)
        adj[a.tgt].append(a.src)
        deg[a.src] += 1
        deg[a.tgt] += 1
    alive = set(q.vertices)
    layer = [v for v in q.vertices if deg[v] <= 1]
    while len(alive) > 2:
        nxt = []
        for v in layer:
            alive.discard(v)
            for u in adj[v]:
                if u in alive:
                    deg[u] -= 1
                    if deg[u] == 1:
                        nxt.append(u)
        layer = nxt
    return sorted(alive)


def winding_canonical_form(w: Winding) -> tuple:
    """Hashable encoding equal for two windings iff they are isomorphic over Q."""
    if w.is_tree:
        return ("tree", min(_tree_code(w, c) for c in _tree_centers(w.domain)))
    if w.is_band_domain:
        sh = w.shape
        seqs = (tuple(zip((w.adict[x] for x in a), s)) for _, a, s in
                cycle_variants(sh.vertices, sh.arrows, sh.signs))
        return ("band", min(seqs))
    raise MixedKinds("canonical forms exist for tree and single-cycle domains only")


def windings_isomorphic(a: Winding, b: Winding) -> bool:
    if a.is_tree != b.is_tree:
        raise MixedKinds("cannot compare a tree winding with a band winding")
    if a.codomain != b.codomain:
        return False
    return winding_canonical_form(a) == winding_canonical_form(b)


# --------------------------------------------------------------------------
# fibers


def fiber_dims(w: Winding, d: DimLike, bound: Union[int, DimLike]) -> list:
    """All t with 0 <= t <= bound and pushforward(t) = d, in lexicographic order."""
    return list(iter_fiber_dims(w, d, bound))


def iter_fiber_dims(w: Winding, d: DimLike, bound: Union[int, DimLike]) -> Iterator[DimVec]:
    d = w.codomain.dim(d)
    nS = len(w.domain.vertices)
    ub = (bound,) * nS if isinstance(bound, int) else w.domain.dim(bound)
    label = w.vlabel
    if any(x < 0 for x in d):
        return
    # capacity[i][q]: how much the vertices i.. can still contribute at q
    cap = [[0] * len(d) for _ in range(nS + 1)]
    for i in range(nS - 1, -1, -1):
        cap[i] = list(cap[i + 1])
        cap[i][label[i]] += ub[i]
    if any(cap[0][q] < d[q] for q in range(len(d))):
        return
    need = list(d)
    t = [0] * nS

    def rec(i):
        if i == nS:
            yield tuple(t)
            return
        q = label[i]
        rest = cap[i + 1][q]
        lo = max(0, need[q] - rest)
        hi = min(ub[i], need[q])
        for x in range(lo, hi + 1):
            t[i] = x
            need[q] -= x
            yield from rec(i + 1)
            need[q] += x
        t[i] = 0

    yield from rec(0)


# --------------------------------------------------------------------------
# module expressions


@dataclass(frozen=True)
class TreeTerm:
    winding: Winding

    def __post_init__(self):
        if not self.winding.is_tree:
            raise NotATree("tree terms need a tree domain")

    @property
    def dim(self) -> DimVec:
        return self.winding.fiber_sizes

    @cached_property
    def key(self) -> tuple:
        return winding_canonical_form(self.winding)


@dataclass(frozen=True)
class BandTerm:
    winding: Winding
    n: int = 1
    lam: Optional[str] = None

    def __post_init__(self):
        validate_band(self.winding)
        if not isinstance(self.n, int) or self.n < 1:
            raise MalformedInput("band multiplicity must be a positive integer")

    @property
    def dim(self) -> DimVec:
        return tuple(self.n * x for x in self.winding.fiber_sizes)

    @cached_property
    def key(self) -> tuple:
        return winding_canonical_form(self.winding)


Summand = Union[TreeTerm, BandTerm]


@dataclass(frozen=True)
class ModuleExpr:
    """A formal direct sum of tree and band terms over ``codomain``.

    Band terms without a label receive fresh, pairwise distinct labels.
    """

    codomain: Quiver
    summands: tuple = ()

    def __post_init__(self):
        terms = tuple(self.summands)
        used = {s.lam for s in terms if isinstance(s, BandTerm) and s.lam is not None}
        fresh = (f"L{i}" for i in range(1, 10**9) if f"L{i}" not in used)
        fixed = []
        for s in terms:
            if not isinstance(s, (TreeTerm, BandTerm)):
                raise MalformedInput(f"unknown summand {s!r}")
            if s.winding.codomain != self.codomain:
                raise DimensionMismatch("summand codomain differs from the module codomain")
            if isinstance(s, BandTerm) and s.lam is None:
                s = BandTerm(s.winding, s.n, next(fresh))
            fixed.append(s)
        object.__setattr__(self, "summands", tuple(fixed))

    @property
    def dim(self) -> DimVec:
        d = self.codomain.zero
        for s in self.summands:
            d = add_dims(d, s.dim)
        return d

    def to_dict(self) -> dict:
        out = []
        for s in self.summands:
            if isinstance(s, TreeTerm):
                out.append({"kind": "tree", "winding": s.winding.to_dict()})
            else:
                out.append({"kind": "band", "winding": s.winding.to_dict(), "n": s.n, "lambda": s.lam})
        return {"codomain": self.codomain.to_dict(), "summands": out}


def validate_module(raw: Any) -> ModuleExpr:
    if isinstance(raw, ModuleExpr):
        return raw
    if not isinstance(raw, Mapping) or "summands" not in raw:
        raise MalformedInput("a module needs 'codomain' and 'summands'")
    cod = validate_quiver(raw["codomain"]) if "codomain" in raw else None
    terms = []
    for entry in raw["summands"]:
        kind = entry.get("kind")
        w = validate_winding(entry.get("winding"), cod)
        cod = cod or w.codomain
        if kind == "tree":
            terms.append(TreeTerm(w))
        elif kind == "band":
            lam = entry.get("lambda")
            terms.append(BandTerm(w, int(entry.get("n", 1)), None if lam is None else str(lam)))
        else:
            raise MalformedInput(f"summand kind must be 'tree' or 'band', got {kind!r}")
    if cod is None:
        raise MalformedInput("module has no codomain")
    return ModuleExpr(cod, tuple(terms))


def tree_module(*ws: Winding) -> ModuleExpr:
    return ModuleExpr(ws[0].codomain, tuple(TreeTerm(w) for w in ws))
