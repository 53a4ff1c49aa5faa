"""String algebras CQ/I with monomial relations, their strings and bands.

Relations are lists of arrow ids written as products a_1 ... a_n with
t(a_{i+1}) = s(a_i): the path is traversed from a_n to a_1.  Internally
every path is stored in traversal order.

A walk is a word in letters (arrow, +1) and (arrow, -1).  Strings are walks
with no letter followed by its inverse and no run of direct (or inverse)
letters containing a relation; bands are the cyclic, primitive analogues.
Both are returned as windings.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterator, Mapping, Optional, Sequence

from .errors import (
    BoundTooSmall,
    MalformedInput,
    MissingRelation,
    NonPathRelation,
    NotAdmissible,
    TooManyArrowsAtVertex,
)
from .quiver import (
    Arrow,
    BandTerm,
    DimLike,
    ModuleExpr,
    Quiver,
    TreeTerm,
    Winding,
    band_period,
    cycle_quiver,
    validate_quiver,
    winding_canonical_form,
)


@dataclass(frozen=True)
class StringAlgebra:
    quiver: Quiver
    relations: tuple = ()  # traversal order
    bound: int = 0

    @property
    def relation_set(self) -> frozenset:
        return frozenset(self.relations)

    @property
    def max_relation_length(self) -> int:
        return max((len(r) for r in self.relations), default=0)

    def to_dict(self) -> dict:
        return {
            "quiver": self.quiver.to_dict(),
            "relations": [list(reversed(r)) for r in self.relations],
        }


def _contains_relation(path: Sequence[str], rels: frozenset, maxlen: int) -> bool:
    """Does a path (traversal order) contain a relation as a consecutive subpath?"""
    n = len(path)
    for i in range(n):
        for k in range(2, min(maxlen, n - i) + 1):
            if tuple(path[i:i + k]) in rels:
                return True
    return False


def _ends_with_relation(path: Sequence[str], rels: frozenset, maxlen: int) -> bool:
    n = len(path)
    for k in range(2, min(maxlen, n) + 1):
        if tuple(path[n - k:]) in rels:
            return True
    return False


def validate_string_algebra(raw: Any, bound: Optional[int] = None) -> StringAlgebra:
    """Check the string algebra conditions and admissibility.

    ``raw`` is ``{"quiver": ..., "relations": [[a_1, ..., a_n], ...]}``.
    Admissibility is decided up to ``bound`` (default ``2 * #arrows + 2``):
    a relation-free path of that length raises NotAdmissible.
    """
    if isinstance(raw, StringAlgebra):
        return raw
    if not isinstance(raw, Mapping) or "quiver" not in raw:
        raise MalformedInput("a string algebra needs 'quiver' and 'relations'")
    Q = validate_quiver(raw["quiver"])
    rels = []
    for r in raw.get("relations", ()):
        if not isinstance(r, (list, tuple)) or any(not isinstance(x, str) for x in r):
            raise MalformedInput("relations are lists of arrow ids")
        if len(r) < 2:
            raise NonPathRelation(f"relation {r!r} has length below two", relation=list(r))
        for x in r:
            if x not in Q.arrow_index:
                raise NonPathRelation(f"relation {r!r} uses unknown arrow {x!r}", relation=list(r))
        for a, b in zip(r, r[1:]):
            if Q.arrow(b).tgt != Q.arrow(a).src:
                raise NonPathRelation(f"relation {r!r} is not an oriented path", relation=list(r))
        rels.append(tuple(reversed(r)))
    rel_set = frozenset(rels)
    if bound is None:
        bound = raw.get("bound") or 2 * len(Q.arrows) + 2
    for v in Q.vertices:
        if len(Q.out_arrows[v]) > 2:
            raise TooManyArrowsAtVertex(f"more than two arrows start at {v!r}", vertex=v)
        if len(Q.in_arrows[v]) > 2:
            raise TooManyArrowsAtVertex(f"more than two arrows end at {v!r}", vertex=v)
    # conditions on two arrows meeting a third: in traversal order the
    # compositions "a then c" / "b then c" (resp. "a then b" / "a then c")
    for v in Q.vertices:
        ins, outs = Q.in_arrows[v], Q.out_arrows[v]
        if len(ins) == 2:
            a, b = (x.id for x in ins)
            for c in (x.id for x in outs):
                if (a, c) not in rel_set and (b, c) not in rel_set:
                    raise MissingRelation(
                        f"arrows {a!r} and {b!r} end at {v!r} and both compose with {c!r}",
                        arrows=[a, b, c])
        if len(outs) == 2:
            b, c = (x.id for x in outs)
            for a in (x.id for x in ins):
                if (a, b) not in rel_set and (a, c) not in rel_set:
                    raise MissingRelation(
                        f"{a!r} composes with both {b!r} and {c!r} at {v!r}",
                        arrows=[a, b, c])
    A = StringAlgebra(Q, tuple(sorted(rels)), int(bound))
    if longest_path(A, bound) >= bound:
        raise NotAdmissible(f"a path of length {bound} avoids every relation", bound=int(bound))
    return A


def _free_paths(A: StringAlgebra, limit: int) -> Iterator[tuple]:
    """Relation-free paths (traversal order) of length 1..limit."""
    Q = A.quiver
    rels, ml = A.relation_set, A.max_relation_length
    stack = [(a.id,) for a in Q.arrows]
    while stack:
        p = stack.pop()
        yield p
        if len(p) >= limit:
            continue
        for b in Q.out_arrows[Q.arrow(p[-1]).tgt]:
            q = p + (b.id,)
            if not _ends_with_relation(q, rels, ml):
                stack.append(q)


def longest_path(A: StringAlgebra, limit: int) -> int:
    """Length of the longest relation-free path, capped at ``limit``."""
    return max((len(p) for p in _free_paths(A, limit)), default=0)


# --------------------------------------------------------------------------
# walks


def _run_ok(word: Sequence[tuple], A: StringAlgebra) -> bool:
    """The last run of same-direction letters avoids relations."""
    rels, ml = A.relation_set, A.max_relation_length
    if not rels:
        return True
    sign = word[-1][1]
    run = []
    for a, e in reversed(word):
        if e != sign:
            break
        run.append(a)
        if len(run) >= ml:
            break
    # run is in reverse reading order; direct letters read forwards are
    # traversal order, inverse letters read backwards are
    path = run[::-1] if sign == 1 else run
    if sign == 1:
        return not _ends_with_relation(path, rels, ml)
    return not _contains_relation(path, rels, ml)


def _letter_ends(Q: Quiver, letter: tuple) -> tuple:
    a = Q.arrow(letter[0])
    return (a.src, a.tgt) if letter[1] == 1 else (a.tgt, a.src)


def _extensions(A: StringAlgebra, word: tuple, end: str) -> Iterator[tuple]:
    Q = A.quiver
    last = word[-1] if word else None
    for a in Q.out_arrows[end]:
        if last != (a.id, -1):
            yield (a.id, 1)
    for a in Q.in_arrows[end]:
        if last != (a.id, 1):
            yield (a.id, -1)


def _walks(A: StringAlgebra, max_len: int, start: Optional[str] = None,
           dim: Optional[tuple] = None) -> Iterator[tuple]:
    """(start vertex, word) for reduced relation-free walks up to max_len.

    With ``dim``, only walks whose visited-vertex counts stay within ``dim``.
    """
    Q = A.quiver
    idx = Q.index
    starts = [start] if start is not None else list(Q.vertices)
    for v0 in starts:
        cnt = [0] * len(Q.vertices)
        cnt[idx[v0]] += 1
        if dim is not None and cnt[idx[v0]] > dim[idx[v0]]:
            continue

        def rec(word, end):
            yield v0, word
            if len(word) >= max_len:
                return
            for letter in _extensions(A, word, end):
                nxt = word + (letter,)
                if not _run_ok(nxt, A):
                    continue
                _, w = _letter_ends(Q, letter)
                if dim is not None and cnt[idx[w]] + 1 > dim[idx[w]]:
                    continue
                cnt[idx[w]] += 1
                yield from rec(nxt, w)
                cnt[idx[w]] -= 1

        yield from rec((), v0)


def string_winding(Q: Quiver, start: str, word: Sequence[tuple]) -> Winding:
    """The string winding of a walk: domain vertices 1..L+1 in walk order."""
    L = len(word)
    width = len(str(L + 1))
    name = [f"{i + 1:0{width}d}" for i in range(L + 1)]
    vmap = {name[0]: start}
    arrows, amap = [], {}
    v = start
    for i, letter in enumerate(word):
        _, w = _letter_ends(Q, letter)
        aid = f"s{i + 1:0{width}d}"
        if letter[1] == 1:
            arrows.append(Arrow(aid, name[i], name[i + 1]))
        else:
            arrows.append(Arrow(aid, name[i + 1], name[i]))
        amap[aid] = letter[0]
        vmap[name[i + 1]] = w
        v = w
    return Winding(Quiver(tuple(name), tuple(arrows)), Q, vmap, amap)


def _dedupe(ws: Iterator[Winding]) -> list:
    out = {}
    for w in ws:
        out.setdefault(winding_canonical_form(w), w)
    return [out[k] for k in sorted(out)]


def enumerate_strings(A: StringAlgebra, max_len: int) -> list:
    """String windings with at most ``max_len`` arrows, one per isomorphism
    class, ordered by canonical form."""
    A = validate_string_algebra(A)
    return _dedupe(string_winding(A.quiver, v, w) for v, w in _walks(A, max_len))


def strings_with_dim(A: StringAlgebra, d: DimLike) -> list:
    """String windings with dimension vector exactly ``d``."""
    Q = A.quiver
    d = Q.dim(d)
    total = sum(d)
    if total == 0:
        return []
    found = (string_winding(Q, v, w) for v, w in _walks(A, total - 1, dim=d)
             if len(w) == total - 1)
    return _dedupe(found)


def _cyclic_ok(A: StringAlgebra, word: tuple) -> bool:
    """A closed walk stays reduced and relation-free when read cyclically."""
    Q = A.quiver
    if _letter_ends(Q, word[-1])[1] != _letter_ends(Q, word[0])[0]:
        return False
    a, b = word[-1], word[0]
    if a[0] == b[0] and a[1] != b[1]:
        return False
    ml = max(A.max_relation_length, 1)
    twice = word * (1 + (ml + len(word) - 1) // len(word))
    for i in range(len(word), len(twice)):
        if not _run_ok(twice[: i + 1], A):
            return False
    if all(e == 1 for _, e in word) or all(e == -1 for _, e in word):
        return False  # oriented cycles give no finite-dimensional band
    return True


def band_winding(Q: Quiver, start: str, word: Sequence[tuple]) -> Winding:
    """Band winding of a closed walk on a cycle quiver with vertices 1..l."""
    signs = [-1 if e == 1 else 1 for _, e in word]
    S = cycle_quiver(signs)
    vmap, amap = {}, {}
    v = start
    for i, letter in enumerate(word):
        vmap[S.vertices[i]] = v
        amap[S.arrows[i].id] = letter[0]
        _, v = _letter_ends(Q, letter)
    return Winding(S, Q, vmap, amap)


def enumerate_bands(A: StringAlgebra, max_len: int) -> list:
    """Primitive band windings with at most ``max_len`` arrows, one per
    equivalence class (rotation and reversal)."""
    A = validate_string_algebra(A)
    Q = A.quiver
    found = []
    for v, w in _walks(A, max_len):
        if not w or _letter_ends(Q, w[-1])[1] != v or not _cyclic_ok(A, w):
            continue
        b = band_winding(Q, v, w)
        if band_period(b) == len(w):
            found.append(b)
    return _dedupe(found)


def satisfies_relations(A: StringAlgebra, w: Winding) -> bool:
    """Does the module pushed forward along ``w`` satisfy the relations?

    It does iff no directed path of the domain maps onto a relation.
    """
    rels, ml = A.relation_set, A.max_relation_length
    if not rels:
        return True
    S = w.domain
    stack = [((a.id,), a.tgt) for a in S.arrows]
    while stack:
        p, end = stack.pop()
        img = tuple(w.adict[x] for x in p)
        if _ends_with_relation(img, rels, ml):
            return False
        if len(p) >= ml:
            continue
        for b in S.out_arrows[end]:
            stack.append((p + (b.id,), b.tgt))
    return True


def module_satisfies_relations(A: StringAlgebra, M: ModuleExpr) -> bool:
    return all(satisfies_relations(A, s.winding) for s in M.summands)
