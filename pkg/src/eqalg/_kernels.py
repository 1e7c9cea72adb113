"""Compiled search kernels over transfer-system bitmasks (one bit per pair orbit)."""

from __future__ import annotations

import numpy as np
from numba import njit

ONE = np.uint64(1)


@njit(cache=True)
def _push(out, cnt, value):
    if cnt == out.shape[0]:
        bigger = np.empty(out.shape[0] * 2, np.uint64)
        bigger[:cnt] = out[:cnt]
        out = bigger
    out[cnt] = value
    return out, cnt + 1


@njit(cache=True)
def exhaustive(n_vars, due_ptr, due_prem, due_concl):
    """Depth-first include/exclude search; rules are checked when their last variable is set."""
    out = np.empty(1024, np.uint64)
    cnt = 0
    stage = np.zeros(n_vars + 1, np.int64)
    masks = np.zeros(n_vars + 1, np.uint64)
    depth = 0
    while depth >= 0:
        if depth == n_vars:
            out, cnt = _push(out, cnt, masks[depth])
            depth -= 1
            continue
        s = stage[depth]
        if s == 2:
            stage[depth] = 0
            depth -= 1
            continue
        stage[depth] = s + 1
        m = masks[depth]
        if s == 1:
            m |= ONE << np.uint64(depth)
        ok = True
        for r in range(due_ptr[depth], due_ptr[depth + 1]):
            if (m & due_prem[r]) == due_prem[r] and (m & due_concl[r]) == 0:
                ok = False
                break
        if ok:
            masks[depth + 1] = m
            depth += 1
    return out[:cnt]


@njit(cache=True)
def _close(mask, v, restr, tl_ptr, tl_y, tl_z, tr_ptr, tr_w, tr_z, queue):
    m = mask | (ONE << np.uint64(v))
    head = 0
    tail = 0
    queue[tail] = v
    tail += 1
    while head < tail:
        x = queue[head]
        head += 1
        new = restr[x] & ~m
        if new:
            m |= new
            for b in range(64):
                if (new >> np.uint64(b)) & ONE:
                    queue[tail] = b
                    tail += 1
        for r in range(tl_ptr[x], tl_ptr[x + 1]):
            z = tl_z[r]
            if (m >> np.uint64(tl_y[r])) & ONE and not (m >> np.uint64(z)) & ONE:
                m |= ONE << np.uint64(z)
                queue[tail] = z
                tail += 1
        for r in range(tr_ptr[x], tr_ptr[x + 1]):
            z = tr_z[r]
            if (m >> np.uint64(tr_w[r])) & ONE and not (m >> np.uint64(z)) & ONE:
                m |= ONE << np.uint64(z)
                queue[tail] = z
                tail += 1
    return m


@njit(cache=True)
def closure_search(n_vars, restr, tl_ptr, tl_y, tl_z, tr_ptr, tr_w, tr_z):
    """Branch on the least undecided pair orbit; the include branch closes immediately."""
    out = np.empty(1024, np.uint64)
    cnt = 0
    full = (ONE << np.uint64(n_vars)) - ONE if n_vars < 64 else ~np.uint64(0)
    inc = np.zeros(n_vars + 2, np.uint64)
    exc = np.zeros(n_vars + 2, np.uint64)
    var = np.zeros(n_vars + 2, np.int64)
    stage = np.zeros(n_vars + 2, np.int64)
    queue = np.empty(n_vars + 1, np.int64)
    depth = 0
    var[0] = -1
    while depth >= 0:
        if stage[depth] == 0:
            decided = inc[depth] | exc[depth]
            if decided == full:
                out, cnt = _push(out, cnt, inc[depth])
                depth -= 1
                continue
            v = 0
            while (decided >> np.uint64(v)) & ONE:
                v += 1
            var[depth] = v
            stage[depth] = 1
            m = _close(inc[depth], v, restr, tl_ptr, tl_y, tl_z, tr_ptr, tr_w, tr_z, queue)
            if (m & exc[depth]) == 0:
                inc[depth + 1] = m
                exc[depth + 1] = exc[depth]
                stage[depth + 1] = 0
                depth += 1
            continue
        if stage[depth] == 1:
            stage[depth] = 2
            inc[depth + 1] = inc[depth]
            exc[depth + 1] = exc[depth] | (ONE << np.uint64(var[depth]))
            stage[depth + 1] = 0
            depth += 1
            continue
        stage[depth] = 0
        depth -= 1
    return out[:cnt]


@njit(cache=True)
def implications_hold(masks, prem, concl):
    """``ok[t]`` iff every implication ``prem -> concl`` holds in ``masks[t]``."""
    ok = np.ones(masks.shape[0], np.bool_)
    for t in range(masks.shape[0]):
        m = masks[t]
        for r in range(prem.shape[0]):
            if (m & prem[r]) == prem[r] and (m & concl[r]) == 0:
                ok[t] = False
                break
    return ok
