"""Reference numpy/bitset kernels for the census searches.

Contracts (shared with ``numba_impl``):

square_census_range(comm, lo, hi)
    All 4-subsets ``i<j<k<l`` of observable indices with ``lo <= i < hi``
    whose commutation graph is a four-cycle (four commuting pairs forming
    a closed walk, the two diagonals anticommuting).  Rows come back in
    lexicographic order.

pentagram_lines(xs, zs, comm, n_qubits)
    All 4-subsets of pairwise-commuting observables whose masks XOR to
    zero (product = +-identity), with the sign of the ordered product.
    Rows in lexicographic order; the fourth member is determined by the
    first three, so each set appears exactly once.

pentagram_search_range(masks, signs, compat, lo, hi)
    Five-line covers: line indices ascending, first index in [lo, hi),
    every pair of lines sharing exactly one observable, all ten meeting
    points distinct.  Returns the line-index rows plus the number of
    negative lines per cover.
"""

from __future__ import annotations

import numpy as np


def square_census_range(comm: np.ndarray, lo: int, hi: int) -> np.ndarray:
    m = comm.shape[0]
    c = comm.astype(bool)
    anti = ~c
    np.fill_diagonal(anti, False)
    rows = []
    # pick the diagonal {a, c} (anticommuting), then count anticommuting
    # pairs among common commuting neighbours; each square has two
    # diagonals, so keep the one with the smaller minimum
    ai, ci = np.nonzero(np.triu(anti, 1))
    for a, cc in zip(ai.tolist(), ci.tolist()):
        common = np.nonzero(c[a] & c[cc])[0]
        if common.size < 2:
            continue
        sub = anti[np.ix_(common, common)]
        bi, di = np.nonzero(np.triu(sub, 1))
        for b, d in zip(common[bi].tolist(), common[di].tolist()):
            if min(a, cc) < min(b, d):
                quad = sorted((a, cc, b, d))
                if lo <= quad[0] < hi:
                    rows.append(quad)
    if not rows:
        return np.empty((0, 4), dtype=np.int64)
    out = np.array(sorted(rows), dtype=np.int64)
    return out


def pentagram_lines(xs: np.ndarray, zs: np.ndarray, comm: np.ndarray, n_qubits: int):
    m = xs.shape[0]
    width = 1 << n_qubits
    c = comm.astype(bool)
    idx = np.arange(m)
    lines = []
    signs = []
    pi, pj = np.nonzero(np.triu(c, 1))
    for i, j in zip(pi.tolist(), pj.tolist()):
        ks = idx[(idx > j) & c[i] & c[j]]
        if ks.size == 0:
            continue
        x4 = xs[i] ^ xs[j] ^ xs[ks]
        z4 = zs[i] ^ zs[j] ^ zs[ks]
        l4 = x4 * width + z4 - 1
        good = ((x4 != 0) | (z4 != 0)) & (l4 > ks)
        for k, l in zip(ks[good].tolist(), l4[good].tolist()):
            lines.append((i, j, k, l))
            ph = 0
            xa, za = 0, 0
            for t in (i, j, k, l):
                ph += 2 * int(za & int(xs[t])).bit_count()
                xa ^= int(xs[t])
                za ^= int(zs[t])
            signs.append(1 if ph % 4 == 0 else -1)
    return (np.array(lines, dtype=np.int64).reshape(-1, 4),
            np.array(signs, dtype=np.int64))


def pentagram_search_range(masks, signs, compat, lo, hi):
    n_lines = masks.shape[0]
    pm = [int(v) for v in masks.tolist()]
    # python ints as candidate bitsets: one int spanning all lines
    cb = []
    nwords = compat.shape[1]
    for i in range(n_lines):
        v = 0
        for w in range(nwords):
            v |= int(compat[i, w]) << (64 * w)
        cb.append(v)
    out = []
    out_neg = []

    def descend(last, cand, once, twice, chosen):
        depth = len(chosen)
        v = cand >> (last + 1)
        pos = last + 1
        while v:
            lsb = v & -v
            off = lsb.bit_length() - 1
            t = pos + off
            v >>= off + 1
            pos = t + 1
            mt = pm[t]
            if mt & twice:
                continue
            hit = mt & once
            if hit.bit_count() != depth:
                continue
            if depth == 4:
                row = chosen + [t]
                out.append(row)
                out_neg.append(sum(1 for x in row if signs[x] < 0))
            else:
                descend(t, cand & cb[t],
                        (once & ~hit) | (mt & ~hit), twice | hit,
                        chosen + [t])

    for l0 in range(lo, hi):
        c1 = cb[l0] >> (l0 + 1)
        pos = l0 + 1
        while c1:
            lsb = c1 & -c1
            off = lsb.bit_length() - 1
            l1 = pos + off
            c1 >>= off + 1
            pos = l1 + 1
            descend(l1, cb[l0] & cb[l1],
                    pm[l0] ^ pm[l1], pm[l0] & pm[l1], [l0, l1])
    return (np.array(out, dtype=np.int64).reshape(-1, 5),
            np.array(out_neg, dtype=np.int64))
