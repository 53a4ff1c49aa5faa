"""Hot loops shared by the Euler-characteristic, flag and Hall code.

Three kernels carry almost all of the running time:

* ``closed_subsets``: enumerate successor-closed vertex subsets of a quiver
  (bitmask DFS), optionally restricted to a dimension vector;
* ``convolve``: exact truncated convolution of dense dimension-vector tables
  (the direct-sum rule for Euler characteristics);
* ``chain_step``: one level of flag counting, summing weights of subsets
  contained in each larger subset.

Each has a numba implementation and a pure-numpy one.  The numba path is used
when numba imports and ``QG_NO_NUMBA`` is unset.  Inputs that do not fit in
int64 (more than 62 vertices, huge counts) always go through the numpy path
with Python-int object arrays, so results stay exact.
"""

from __future__ import annotations

import os
from contextlib import contextmanager
from typing import Sequence

import numpy as np

from .errors import EnumerationBudgetExceeded

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAVE_NUMBA = numba is not None
_DISABLED = os.environ.get("QG_NO_NUMBA", "").strip().lower() not in ("", "0", "false", "no")
_backend = "numba" if HAVE_NUMBA and not _DISABLED else "numpy"

MAX_BITS = 62
_SAFE = float(2**62)


def backend() -> str:
    return _backend


def set_backend(name: str) -> None:
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    _backend = name


@contextmanager
def using_backend(name: str):
    old = _backend
    set_backend(name)
    try:
        yield
    finally:
        set_backend(old)


def enum_budget() -> int:
    """State budget for enumerations, from ``QG_MAX_ENUM`` (default 10**7)."""
    raw = os.environ.get("QG_MAX_ENUM", "")
    try:
        return int(raw) if raw else 10**7
    except ValueError:
        return 10**7


def _over_budget(states: int, budget: int):
    raise EnumerationBudgetExceeded(
        f"enumeration visited more than {budget} states (raise QG_MAX_ENUM to allow more)",
        budget=budget, states=states)


# --------------------------------------------------------------------------
# numba implementations

if HAVE_NUMBA:
    _jit = numba.njit(cache=True, nogil=True)

    @_jit
    def _closed_subsets_nb(closure, label, upper, exact, rem, max_states):
        n = closure.shape[0]
        k = upper.shape[0]
        mask = np.zeros(n + 1, np.int64)
        excl = np.zeros(n + 1, np.int64)
        cnt = np.zeros((n + 1, k), np.int64)
        choice = np.zeros(n + 1, np.int64)
        out = np.empty(64, np.int64)
        nout = 0
        states = 0
        depth = 0
        while depth >= 0:
            if depth == n:
                ok = True
                if exact:
                    for q in range(k):
                        if cnt[n, q] != upper[q]:
                            ok = False
                            break
                if ok:
                    if nout == out.shape[0]:
                        grown = np.empty(2 * nout, np.int64)
                        grown[:nout] = out
                        out = grown
                    out[nout] = mask[n]
                    nout += 1
                depth -= 1
                continue
            c = choice[depth]
            if c >= 2:
                choice[depth] = 0
                depth -= 1
                continue
            bit = np.int64(1) << depth
            cur = mask[depth]
            ex = excl[depth]
            for q in range(k):
                cnt[depth + 1, q] = cnt[depth, q]
            if c == 0:
                nm = cur
                if cur & bit:
                    choice[depth] = 2
                    ne = ex
                else:
                    choice[depth] = 1
                    ne = ex | bit
            else:
                choice[depth] = 2
                add = closure[depth] & ~cur
                if add & ex:
                    continue
                nm = cur | add
                ne = ex
                for v in range(depth, n):
                    if (add >> v) & 1:
                        cnt[depth + 1, label[v]] += 1
            bad = False
            for q in range(k):
                x = cnt[depth + 1, q]
                if x > upper[q] or (exact and x + rem[depth + 1, q] < upper[q]):
                    bad = True
                    break
            if bad:
                continue
            states += 1
            if states > max_states:
                return out[:nout], -1
            mask[depth + 1] = nm
            excl[depth + 1] = ne
            choice[depth + 1] = 0
            depth += 1
        return out[:nout], states

    @_jit
    def _convolve_nb(a, b, shape):
        k = shape.shape[0]
        stride = np.empty(k, np.int64)
        s = 1
        for q in range(k - 1, -1, -1):
            stride[q] = s
            s *= shape[q]
        ia = np.nonzero(a)[0]
        ib = np.nonzero(b)[0]
        ca = np.empty((ia.shape[0], k), np.int64)
        cb = np.empty((ib.shape[0], k), np.int64)
        for x in range(ia.shape[0]):
            r = ia[x]
            for q in range(k):
                ca[x, q] = r // stride[q]
                r -= ca[x, q] * stride[q]
        for y in range(ib.shape[0]):
            r = ib[y]
            for q in range(k):
                cb[y, q] = r // stride[q]
                r -= cb[y, q] * stride[q]
        out = np.zeros(a.shape[0], np.int64)
        for x in range(ia.shape[0]):
            va = a[ia[x]]
            for y in range(ib.shape[0]):
                idx = 0
                ok = True
                for q in range(k):
                    c = ca[x, q] + cb[y, q]
                    if c >= shape[q]:
                        ok = False
                        break
                    idx += c * stride[q]
                if ok:
                    out[idx] += va * b[ib[y]]
        return out

    @_jit
    def _chain_step_nb(lower, weights, upper):
        out = np.zeros(upper.shape[0], np.int64)
        for j in range(upper.shape[0]):
            u = ~upper[j]
            acc = 0
            for i in range(lower.shape[0]):
                if lower[i] & u == 0:
                    acc += weights[i]
            out[j] = acc
        return out


# --------------------------------------------------------------------------
# numpy implementations (also used for object arrays of Python ints)


def _closed_subsets_np(closure, label, upper, exact, rem, max_states):
    n = closure.shape[0]
    k = upper.shape[0]
    big = closure.dtype == object
    one = 1 if big else np.int64(1)
    masks = np.zeros(1, dtype=closure.dtype)
    excl = np.zeros(1, dtype=closure.dtype)
    cnt = np.zeros((1, k), np.int64)
    states = 0
    for v in range(n):
        bit = one << v
        inside = (masks & bit) != 0
        outside = ~inside
        om, oe, oc = masks[outside], excl[outside], cnt[outside]
        add = closure[v] & ~om
        ok = (add & oe) == 0
        addk = add[ok]
        ic = oc[ok].copy()
        for u in range(v, n):
            ic[:, label[u]] += ((addk >> u) & 1).astype(np.int64)
        masks = np.concatenate([masks[inside], om, om[ok] | addk])
        excl = np.concatenate([excl[inside], oe | bit, oe[ok]])
        cnt = np.concatenate([cnt[inside], oc, ic])
        good = np.all(cnt <= upper, axis=1)
        if exact:
            good &= np.all(cnt + rem[v + 1] >= upper, axis=1)
        masks, excl, cnt = masks[good], excl[good], cnt[good]
        states += masks.shape[0]
        if states > max_states:
            return masks, -1
    if exact:
        masks = masks[np.all(cnt == upper, axis=1)]
    return masks, states


def _convolve_np(a, b):
    if np.count_nonzero(a) > np.count_nonzero(b):
        a, b = b, a
    out = np.zeros_like(b)
    shape = a.shape
    for idx in zip(*np.nonzero(a)):
        dst = tuple(slice(i, None) for i in idx)
        src = tuple(slice(0, s - i) for s, i in zip(shape, idx))
        out[dst] += a[idx] * b[src]
    return out


def _chain_step_np(lower, weights, upper):
    out = np.zeros(upper.shape[0], dtype=weights.dtype)
    for j in range(upper.shape[0]):
        sel = (lower & ~upper[j]) == 0
        out[j] = weights[sel].sum()
    return out


# --------------------------------------------------------------------------
# dispatch


def _mask_array(values: Sequence[int], n_bits: int) -> np.ndarray:
    if n_bits <= MAX_BITS:
        return np.asarray(list(values), dtype=np.int64)
    arr = np.empty(len(values), dtype=object)
    arr[:] = [int(x) for x in values]
    return arr


def closed_subsets(closure: Sequence[int], label: Sequence[int], upper: Sequence[int],
                   exact: bool, max_states: int | None = None) -> list:
    """Successor-closed subsets as bitmasks.

    ``closure[v]`` is the bitmask of vertices reachable from ``v`` (itself
    included) and ``label[v]`` the index of the dimension-vector coordinate
    that ``v`` counts towards.  Subsets whose counts exceed ``upper`` are
    pruned; with ``exact`` only subsets hitting ``upper`` exactly are kept.
    """
    n = len(closure)
    budget = enum_budget() if max_states is None else max_states
    up = np.asarray(upper, dtype=np.int64)
    k = up.shape[0]
    lab = np.asarray(label, dtype=np.int64)
    rem = np.zeros((n + 1, k), np.int64)
    for v in range(n - 1, -1, -1):
        rem[v] = rem[v + 1]
        rem[v, lab[v]] += 1
    cl = _mask_array(closure, n)
    if _backend == "numba" and n <= MAX_BITS:
        masks, states = _closed_subsets_nb(cl, lab, up, exact, rem, budget)
    else:
        masks, states = _closed_subsets_np(cl, lab, up, exact, rem, budget)
    if states < 0:
        _over_budget(budget + 1, budget)
    return sorted(int(m) for m in masks)


def _fits(a: np.ndarray, b: np.ndarray) -> bool:
    if a.dtype == object or b.dtype == object:
        return False
    if a.size == 0:
        return True
    bound = float(a.max()) * float(b.max()) * min(np.count_nonzero(a), np.count_nonzero(b))
    return bound < _SAFE


def convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Truncated convolution of two tables of equal shape, exact."""
    if a.shape != b.shape:
        raise ValueError("tables must share a shape")
    if _fits(a, b):
        if _backend == "numba":
            shape = np.asarray(a.shape, dtype=np.int64)
            flat = _convolve_nb(np.ascontiguousarray(a, np.int64).ravel(),
                                np.ascontiguousarray(b, np.int64).ravel(), shape)
            return flat.reshape(a.shape)
        return _convolve_np(a.astype(np.int64), b.astype(np.int64))
    return _convolve_np(a.astype(object), b.astype(object))


def chain_step(lower: Sequence[int], weights: Sequence[int], upper: Sequence[int],
               n_bits: int) -> list:
    """For each ``u`` in ``upper``: sum of ``weights[i]`` over ``lower[i]`` contained in ``u``."""
    if not upper:
        return []
    if not lower:
        return [0] * len(upper)
    lo = _mask_array(lower, n_bits)
    up = _mask_array(upper, n_bits)
    total = sum(int(w) for w in weights)
    if n_bits <= MAX_BITS and total < 2**62:
        w = np.asarray(weights, dtype=np.int64)
        if _backend == "numba":
            return [int(x) for x in _chain_step_nb(lo, w, up)]
        return [int(x) for x in _chain_step_np(lo, w, up)]
    w = np.empty(len(weights), dtype=object)
    w[:] = [int(x) for x in weights]
    return [int(x) for x in _chain_step_np(lo, w, up)]
