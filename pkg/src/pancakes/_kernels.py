"""Compiled inner loops.

Stacks are int64 arrays, top first, signed for burnt pancakes.  Mixed stacks
are a label array plus an orientation array (-1 up, 0 unburnt, +1 down).
Every sorter kernel writes the real flip sizes it performs into ``out`` and
returns how many it wrote, or a negative error code.
"""

import numpy as np
from numba import njit

UNSET = 255

ERR_OVERFLOW = -1
ERR_NOT_ADJACENT = -2
ERR_NO_PROGRESS = -3


# --- ranking ----------------------------------------------------------------

@njit(cache=True)
def perm_rank(labels):
    n = labels.shape[0]
    r = 0
    for i in range(n):
        smaller = 0
        for j in range(i + 1, n):
            if labels[j] < labels[i]:
                smaller += 1
        r = r * (n - i) + smaller
    return r


@njit(cache=True)
def perm_unrank(index, n, out):
    digits = np.empty(n, np.int64)
    for radix in range(1, n + 1):
        digits[n - radix] = index % radix
        index //= radix
    pool = np.arange(1, n + 1)
    size = n
    for k in range(n):
        d = digits[k]
        out[k] = pool[d]
        for t in range(d, size - 1):
            pool[t] = pool[t + 1]
        size -= 1


@njit(cache=True)
def burnt_rank(stack):
    n = stack.shape[0]
    labels = np.abs(stack)
    bits = 0
    for k in range(n):
        bits = (bits << 1) | (1 if stack[k] < 0 else 0)
    return (perm_rank(labels) << n) | bits


@njit(cache=True)
def burnt_unrank(index, n, out):
    perm_unrank(index >> n, n, out)
    for k in range(n):
        if (index >> (n - 1 - k)) & 1:
            out[k] = -out[k]


# --- flips ------------------------------------------------------------------

@njit(cache=True)
def flip_signed(a, k):
    i = 0
    j = k - 1
    while i < j:
        t = a[i]
        a[i] = -a[j]
        a[j] = -t
        i += 1
        j -= 1
    if i == j:
        a[i] = -a[i]


@njit(cache=True)
def flip_plain(a, k):
    i = 0
    j = k - 1
    while i < j:
        t = a[i]
        a[i] = a[j]
        a[j] = t
        i += 1
        j -= 1


@njit(cache=True)
def replay_signed(stack, flips):
    a = stack.copy()
    for f in flips:
        flip_signed(a, f)
    return a


@njit(cache=True)
def replay_plain(stack, flips):
    a = stack.copy()
    for f in flips:
        flip_plain(a, f)
    return a


# --- breadth first search ---------------------------------------------------

@njit(cache=True)
def bfs_burnt(n, dist):
    total = dist.shape[0]
    buf = np.empty(n, np.int64)
    tmp = np.empty(n, np.int64)
    dist[0] = 0
    d = 0
    while True:
        found = 0
        for r in range(total):
            if dist[r] != d:
                continue
            burnt_unrank(r, n, buf)
            for i in range(1, n + 1):
                tmp[:] = buf
                flip_signed(tmp, i)
                rr = burnt_rank(tmp)
                if dist[rr] == UNSET:
                    dist[rr] = d + 1
                    found += 1
        if found == 0:
            return d
        d += 1


@njit(cache=True)
def bfs_unburnt(n, dist):
    total = dist.shape[0]
    buf = np.empty(n, np.int64)
    tmp = np.empty(n, np.int64)
    dist[0] = 0
    d = 0
    while True:
        found = 0
        for r in range(total):
            if dist[r] != d:
                continue
            perm_unrank(r, n, buf)
            for i in range(2, n + 1):
                tmp[:] = buf
                flip_plain(tmp, i)
                rr = perm_rank(tmp)
                if dist[rr] == UNSET:
                    dist[rr] = d + 1
                    found += 1
        if found == 0:
            return d
        d += 1


# --- contracted stacks with real flip bookkeeping ---------------------------

@njit(cache=True)
def _real_size(w, k):
    r = 0
    for t in range(k):
        r += w[t]
    return r


@njit(cache=True)
def _cflip_signed(cs, w, real, k, out, nf):
    r = _real_size(w, k)
    flip_signed(cs, k)
    flip_plain(w, k)
    flip_signed(real, r)
    out[nf] = r
    return nf + 1


@njit(cache=True)
def _contract_signed(cs, w, m, i):
    """Merge cs[i], cs[i+1]; returns the new size or an error code."""
    upper = cs[i]
    lower = cs[i + 1]
    if lower != upper + 1:
        return ERR_NOT_ADJACENT
    merged = upper if upper > 0 else lower
    gone = abs(merged) + 1
    w[i] += w[i + 1]
    for t in range(i + 1, m - 1):
        cs[t] = cs[t + 1]
        w[t] = w[t + 1]
    m -= 1
    cs[i] = merged
    for t in range(m):
        v = cs[t]
        if v > gone:
            cs[t] = v - 1
        elif v < -gone:
            cs[t] = v + 1
    return m


@njit(cache=True)
def burnt_average(stack, out, w_out):
    """Burnt average-case sorter, run until two contracted pancakes remain.

    Leaves the real stack in ``stack`` and the contracted pancake sizes in
    ``w_out``; returns (flip count, contracted size).
    """
    n = stack.shape[0]
    cs = stack.copy()
    w = np.ones(n, np.int64)
    m = n
    nf = 0
    while m >= 3:
        s = 2 - abs(cs[0])
        for k in range(m):
            lab = (abs(cs[k]) + s - 1 + 2 * m) % m + 1
            cs[k] = lab if cs[k] > 0 else -lab
        q = 0
        p = 0
        for k in range(m):
            a = abs(cs[k])
            if a == 1:
                q = k + 1
            elif a == 3:
                p = k + 1
        top_down = cs[0] > 0
        one_up = cs[q - 1] < 0
        three_down = cs[p - 1] > 0
        tail = 0
        if top_down and one_up:
            nf = _cflip_signed(cs, w, stack, q - 1, out, nf)
            at = q - 2
        elif (not top_down) and three_down:
            nf = _cflip_signed(cs, w, stack, p - 1, out, nf)
            at = p - 2
        elif top_down:
            if three_down:
                nf = _cflip_signed(cs, w, stack, 1, out, nf)
                nf = _cflip_signed(cs, w, stack, p - 1, out, nf)
            else:
                nf = _cflip_signed(cs, w, stack, p, out, nf)
                nf = _cflip_signed(cs, w, stack, p - 1, out, nf)
            at = p - 2
        else:
            if one_up:
                nf = _cflip_signed(cs, w, stack, 1, out, nf)
                nf = _cflip_signed(cs, w, stack, q - 1, out, nf)
            else:
                nf = _cflip_signed(cs, w, stack, q, out, nf)
                nf = _cflip_signed(cs, w, stack, q - 1, out, nf)
                tail = m - min(p, q)
            at = q - 2
        m = _contract_signed(cs, w, m, at)
        if m < 0:
            return m, 0
        if tail > 0:
            nf = _cflip_signed(cs, w, stack, m, out, nf)
            nf = _cflip_signed(cs, w, stack, tail, out, nf)
    for t in range(m):
        w_out[t] = w[t]
    return nf, m


# --- mixed stacks -----------------------------------------------------------

@njit(cache=True)
def _cflip_mixed(lab, ori, w, real, k, out, nf):
    r = _real_size(w, k)
    flip_plain(lab, k)
    flip_signed(ori, k)
    flip_plain(w, k)
    if r >= 2:
        flip_plain(real, r)
        out[nf] = r
        return nf + 1
    return nf


@njit(cache=True)
def _contract_mixed(lab, ori, w, m, i):
    ua = lab[i]
    la = lab[i + 1]
    if abs(ua - la) != 1:
        return ERR_NOT_ADJACENT
    ok = False
    for su in (-1, 1):
        if ori[i] != 0 and su != ori[i]:
            continue
        for sl in (-1, 1):
            if ori[i + 1] != 0 and sl != ori[i + 1]:
                continue
            if sl * la == su * ua + 1:
                ok = True
    if not ok:
        return ERR_NOT_ADJACENT
    low = min(ua, la)
    gone = max(ua, la)
    orient = 1 if la > ua else -1
    w[i] += w[i + 1]
    for t in range(i + 1, m - 1):
        lab[t] = lab[t + 1]
        ori[t] = ori[t + 1]
        w[t] = w[t + 1]
    m -= 1
    lab[i] = low
    ori[i] = orient
    for t in range(m):
        if lab[t] > gone:
            lab[t] -= 1
    return m


@njit(cache=True)
def unburnt_randomized(stack, coins, out, lab_out, ori_out, w_out):
    """Randomized unburnt sorter, run until two contracted pancakes remain.

    ``coins`` holds one fair bit per iteration (0 peeks at pancake 1, 1 at 3).
    Returns (flip count, contracted size).
    """
    n = stack.shape[0]
    lab = stack.copy()
    ori = np.zeros(n, np.int64)
    w = np.ones(n, np.int64)
    m = n
    nf = 0
    it = 0
    while m >= 3:
        s = 2 - lab[0]
        for k in range(m):
            lab[k] = (lab[k] + s - 1 + 2 * m) % m + 1
        q = 0
        p = 0
        for k in range(m):
            if lab[k] == 1:
                q = k + 1
            elif lab[k] == 3:
                p = k + 1
        top = ori[0]
        if top == 0:
            look_one = coins[it] == 0
        else:
            look_one = top == 1
        it += 1
        if look_one:
            o = ori[q - 1]
            if top == 0:
                if o == 1:
                    nf = _cflip_mixed(lab, ori, w, stack, q, out, nf)
                nf = _cflip_mixed(lab, ori, w, stack, q - 1, out, nf)
            else:
                if o == 1:
                    nf = _cflip_mixed(lab, ori, w, stack, 1, out, nf)
                    nf = _cflip_mixed(lab, ori, w, stack, q, out, nf)
                nf = _cflip_mixed(lab, ori, w, stack, q - 1, out, nf)
            at = q - 2
        else:
            o = ori[p - 1]
            if top == 0:
                if o == -1:
                    nf = _cflip_mixed(lab, ori, w, stack, p, out, nf)
                nf = _cflip_mixed(lab, ori, w, stack, p - 1, out, nf)
            else:
                if o == -1:
                    nf = _cflip_mixed(lab, ori, w, stack, 1, out, nf)
                    nf = _cflip_mixed(lab, ori, w, stack, p, out, nf)
                nf = _cflip_mixed(lab, ori, w, stack, p - 1, out, nf)
            at = p - 2
        m = _contract_mixed(lab, ori, w, m, at)
        if m < 0:
            return m, 0
    for t in range(m):
        lab_out[t] = lab[t]
        ori_out[t] = ori[t]
        w_out[t] = w[t]
    return nf, m


# --- greedy lookahead (cyclic adjacency, real stack) ------------------------

@njit(cache=True)
def _succ(v, n):
    if v == n:
        return 1
    if v == -1:
        return -n
    return v + 1


@njit(cache=True)
def _flip_tracked(a, pos, k):
    flip_signed(a, k)
    for t in range(k):
        pos[abs(a[t])] = t


@njit(cache=True)
def _greedy_size(a, pos, n):
    t = _succ(-a[0], n)
    j = pos[abs(t)]
    if a[j] == t:
        return j
    return 0


@njit(cache=True)
def _greedy_run_length(a, pos, n, adj, buf):
    """Length of the greedy continuation from the current state (state restored)."""
    cnt = 0
    while adj + cnt < n - 1:
        k = _greedy_size(a, pos, n)
        if k == 0:
            break
        _flip_tracked(a, pos, k)
        buf[cnt] = k
        cnt += 1
    for t in range(cnt - 1, -1, -1):
        _flip_tracked(a, pos, buf[t])
    return cnt


@njit(cache=True)
def greedy_lookahead(stack, out):
    """Greedy lookahead sorter; leaves a rotation of the sorted stack in ``stack``."""
    n = stack.shape[0]
    a = stack
    pos = np.zeros(n + 1, np.int64)
    for t in range(n):
        pos[abs(a[t])] = t
    adj = 0
    for t in range(n - 1):
        if a[t + 1] == _succ(a[t], n):
            adj += 1
    buf = np.empty(n + 1, np.int64)
    ends = np.empty(n, np.int64)
    nf = 0
    stall = 0
    while adj < n - 1:
        k = _greedy_size(a, pos, n)
        if k > 0:
            _flip_tracked(a, pos, k)
            out[nf] = k
            nf += 1
            adj += 1
            stall = 0
            continue
        ne = 0
        for t in range(n - 1):
            if a[t + 1] != _succ(a[t], n):
                ends[ne] = t + 1
                ne += 1
        ends[ne] = n
        ne += 1
        best_len = -1
        best_size = 0
        for c in range(ne):
            e = ends[c]
            _flip_tracked(a, pos, e)
            length = _greedy_run_length(a, pos, n, adj, buf)
            _flip_tracked(a, pos, e)
            if length > best_len:
                best_len = length
                best_size = e
        _flip_tracked(a, pos, best_size)
        out[nf] = best_size
        nf += 1
        stall += 1
        if stall > 3 or nf >= out.shape[0] - 1:
            return ERR_NO_PROGRESS
    return nf


# --- greedy lower bounds (exact adjacency, virtual pancake n+1 below) --------

@njit(cache=True)
def _badj(upper, lower):
    return lower == upper + 1


@njit(cache=True)
def _below(a, n, i):
    return a[i] if i < n else n + 1


@njit(cache=True)
def _burnt_gain(a, n, i):
    """Adjacency change caused by flipping the top i pancakes."""
    nxt = _below(a, n, i)
    before = 1 if _badj(a[i - 1], nxt) else 0
    after = 1 if _badj(-a[0], nxt) else 0
    return after - before


@njit(cache=True)
def _burnt_creating(a, pos, n):
    t = 1 - a[0]
    if t == n + 1:
        return n
    if t == 0:
        return 0
    j = pos[abs(t)]
    if a[j] == t:
        return j
    return 0


@njit(cache=True)
def burnt_adjacencies(a):
    n = a.shape[0]
    cnt = 0
    for i in range(1, n + 1):
        if _badj(a[i - 1], _below(a, n, i)):
            cnt += 1
    return cnt


@njit(cache=True)
def burnt_greedy_search(stack, budget, limit_len, node_limit):
    """Shortest sorting sequence using at most ``budget`` non-creating flips.

    Only sequences shorter than ``limit_len`` are considered.  Returns
    (best length or -1, nodes visited, truncated flag).
    """
    n = stack.shape[0]
    a = stack.copy()
    pos = np.zeros(n + 1, np.int64)
    for t in range(n):
        pos[abs(a[t])] = t
    adj = burnt_adjacencies(a)
    best = limit_len
    maxd = limit_len + 1
    ci = np.zeros(maxd + 1, np.int64)
    cre = np.zeros(maxd + 1, np.int64)
    bud = np.zeros(maxd + 1, np.int64)
    sizes = np.zeros(maxd + 1, np.int64)
    gains = np.zeros(maxd + 1, np.int64)
    nodes = 0
    truncated = False
    d = 0
    bud[0] = budget
    fresh = True
    while d >= 0:
        expand = True
        if fresh:
            fresh = False
            nodes += 1
            if nodes > node_limit:
                truncated = True
                break
            if adj == n:
                best = d
                expand = False
            elif d + (n - adj) >= best:
                expand = False
            else:
                cre[d] = _burnt_creating(a, pos, n)
                ci[d] = 0
        advanced = False
        if expand:
            while ci[d] <= n:
                c = ci[d]
                ci[d] += 1
                if c == 0:
                    if cre[d] == 0:
                        continue
                    size = cre[d]
                    cost = 0
                else:
                    if bud[d] == 0:
                        break
                    if c == cre[d]:
                        continue
                    size = c
                    cost = 1
                g = _burnt_gain(a, n, size)
                _flip_tracked(a, pos, size)
                adj += g
                sizes[d] = size
                gains[d] = g
                bud[d + 1] = bud[d] - cost
                d += 1
                fresh = True
                advanced = True
                break
        if advanced:
            continue
        d -= 1
        if d >= 0:
            _flip_tracked(a, pos, sizes[d])
            adj -= gains[d]
    if best >= limit_len:
        best = -1
    return best, nodes, truncated


@njit(cache=True)
def _uadj(x, y):
    return x - y == 1 or y - x == 1


@njit(cache=True)
def unburnt_adjacencies(a):
    n = a.shape[0]
    cnt = 0
    for i in range(1, n + 1):
        if _uadj(a[i - 1], _below(a, n, i)):
            cnt += 1
    return cnt


@njit(cache=True)
def _flip_plain_tracked(a, pos, k):
    flip_plain(a, k)
    for t in range(k):
        pos[a[t]] = t


@njit(cache=True)
def _unburnt_creating(a, pos, n, which):
    """Flip size creating an adjacency with top-1 (which=0) or top+1 (which=1); 0 if none."""
    t = a[0]
    v = t - 1 if which == 0 else t + 1
    if v == 0:
        return 0
    j = n if v == n + 1 else pos[v]
    if j < 2:
        return 0
    if _uadj(a[j - 1], _below(a, n, j)):
        return 0
    return j


@njit(cache=True)
def unburnt_greedy_search(stack, node_limit):
    """Whether some all-creating flip sequence sorts the stack.

    Returns (found, nodes visited, truncated flag).
    """
    n = stack.shape[0]
    a = stack.copy()
    pos = np.zeros(n + 2, np.int64)
    for t in range(n):
        pos[a[t]] = t
    adj = unburnt_adjacencies(a)
    need = n - adj
    ci = np.zeros(need + 2, np.int64)
    sizes = np.zeros(need + 2, np.int64)
    nodes = 0
    d = 0
    fresh = True
    while d >= 0:
        if fresh:
            fresh = False
            nodes += 1
            if nodes > node_limit:
                return False, nodes, True
            if d == need:
                return True, nodes, False
            ci[d] = 0
        advanced = False
        while ci[d] < 2:
            c = ci[d]
            ci[d] += 1
            size = _unburnt_creating(a, pos, n, c)
            if size == 0:
                continue
            _flip_plain_tracked(a, pos, size)
            sizes[d] = size
            d += 1
            fresh = True
            advanced = True
            break
        if advanced:
            continue
        d -= 1
        if d >= 0:
            _flip_plain_tracked(a, pos, sizes[d])
    return False, nodes, False


# --- potential ----------------------------------------------------------------

@njit(cache=True)
def _potential_part(a, sign):
    """3a - b + o + 3l + ll for the stack ``sign * a``."""
    n = a.shape[0]
    adj = 0
    deep = 0
    one_in_block = False
    one_free_top = False
    run = False
    anti_top = False
    for p in range(n - 1):
        x = sign * a[p]
        y = sign * a[p + 1]
        if y == x + 1:
            adj += 1
            if not run and p > 0:
                deep += 1
            run = True
            if abs(x) == 1 or abs(y) == 1:
                one_in_block = True
        else:
            run = False
        if p == 0 and y == x - 1:
            anti_top = True
    top = sign * a[0]
    if top == -1:
        if n < 2 or (sign * a[1] != top + 1 and not anti_top):
            one_free_top = True
    o = 1 if (one_free_top or one_in_block) else 0
    l = 1 if sign * a[n - 1] == n else 0
    ll = 1 if (n >= 2 and l == 1 and sign * a[n - 2] == n - 1) else 0
    return 3 * adj - deep + o + 3 * l + ll


@njit(cache=True)
def potential_thirds(a):
    return _potential_part(a, 1) - _potential_part(a, -1)


@njit(cache=True)
def delta_v_batch(stacks, lengths, sizes, out):
    """Potential change of one flip for each row; rows are padded stacks."""
    m = stacks.shape[0]
    for r in range(m):
        n = lengths[r]
        a = stacks[r, :n].copy()
        before = potential_thirds(a)
        flip_signed(a, sizes[r])
        out[r] = potential_thirds(a) - before
