"""numba ``@njit`` kernels for the square and pentagram censuses.

Same contracts as ``numpy_impl``; see that module for the reference
semantics.  All kernels release the GIL so the ``--threads`` fan-out in
the contextuality module gets real parallelism.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)


@njit(cache=True, nogil=True, inline="always")
def _popcount(v):
    v = v - ((v >> np.uint64(1)) & _M1)
    v = (v & _M2) + ((v >> np.uint64(2)) & _M2)
    v = (v + (v >> np.uint64(4))) & _M4
    return np.int64((v * _H01) >> np.uint64(56))


@njit(cache=True, nogil=True)
def _square_scan(comm, lo, hi, out, fill):
    m = comm.shape[0]
    cnt = 0
    for i in range(lo, hi):
        for j in range(i + 1, m):
            cij = comm[i, j]
            for k in range(j + 1, m):
                # any 3 vertices of a C4 induce exactly 2 edges
                if cij + comm[i, k] + comm[j, k] != 2:
                    continue
                cik = comm[i, k]
                for l in range(k + 1, m):
                    cil = comm[i, l]
                    cjl = comm[j, l]
                    ckl = comm[k, l]
                    if cil + cjl + ckl != 2:
                        continue
                    # the two anticommuting pairs must be disjoint
                    if cij == 0:
                        ok = cil == 1 and cjl == 1 and ckl == 0
                    elif cik == 0:
                        ok = cil == 1 and cjl == 0 and ckl == 1
                    else:
                        ok = cil == 0 and cjl == 1 and ckl == 1
                    if ok:
                        if fill:
                            out[cnt, 0] = i
                            out[cnt, 1] = j
                            out[cnt, 2] = k
                            out[cnt, 3] = l
                        cnt += 1
    return cnt


def square_census_range(comm: np.ndarray, lo: int, hi: int) -> np.ndarray:
    dummy = np.empty((1, 4), dtype=np.int64)
    n = _square_scan(comm, lo, hi, dummy, False)
    out = np.empty((n, 4), dtype=np.int64)
    _square_scan(comm, lo, hi, out, True)
    return out


@njit(cache=True, nogil=True)
def _line_scan(xs, zs, comm, n_qubits, out_lines, out_signs, fill):
    m = xs.shape[0]
    width = 1 << n_qubits
    cnt = 0
    for i in range(m):
        for j in range(i + 1, m):
            if comm[i, j] == 0:
                continue
            for k in range(j + 1, m):
                if comm[i, k] == 0 or comm[j, k] == 0:
                    continue
                x4 = xs[i] ^ xs[j] ^ xs[k]
                z4 = zs[i] ^ zs[j] ^ zs[k]
                if x4 == 0 and z4 == 0:
                    continue
                l = x4 * width + z4 - 1
                if l <= k:
                    continue
                if fill:
                    out_lines[cnt, 0] = i
                    out_lines[cnt, 1] = j
                    out_lines[cnt, 2] = k
                    out_lines[cnt, 3] = l
                    # phase of the ordered product; commuting factors make
                    # it order independent and always +-1
                    ph = 0
                    xa = xs[i]
                    za = zs[i]
                    for idx in (j, k, l):
                        ph += 2 * _popcount(np.uint64(za & xs[idx]))
                        xa ^= xs[idx]
                        za ^= zs[idx]
                    out_signs[cnt] = 1 if ph % 4 == 0 else -1
                cnt += 1
    return cnt


def pentagram_lines(xs: np.ndarray, zs: np.ndarray, comm: np.ndarray, n_qubits: int):
    dummy_l = np.empty((1, 4), dtype=np.int64)
    dummy_s = np.empty(1, dtype=np.int64)
    n = _line_scan(xs, zs, comm, n_qubits, dummy_l, dummy_s, False)
    lines = np.empty((n, 4), dtype=np.int64)
    signs = np.empty(n, dtype=np.int64)
    _line_scan(xs, zs, comm, n_qubits, lines, signs, True)
    return lines, signs


@njit(cache=True, nogil=True, inline="always")
def _mask_from(cand, start, nwords):
    """Zero out all bits < start in cand (in place)."""
    w0 = start >> 6
    for w in range(w0):
        cand[w] = np.uint64(0)
    if w0 < nwords:
        keep = np.uint64(0xFFFFFFFFFFFFFFFF) << np.uint64(start & 63)
        cand[w0] &= keep


@njit(cache=True, nogil=True)
def _pent_scan(masks, signs, compat, lo, hi, out, out_neg, fill):
    nlines = masks.shape[0]
    nwords = compat.shape[1]
    cand1 = np.empty(nwords, dtype=np.uint64)
    cand2 = np.empty(nwords, dtype=np.uint64)
    cand3 = np.empty(nwords, dtype=np.uint64)
    cand4 = np.empty(nwords, dtype=np.uint64)
    cnt = 0
    for l0 in range(lo, hi):
        for w in range(nwords):
            cand1[w] = compat[l0, w]
        _mask_from(cand1, l0 + 1, nwords)
        for w1 in range(nwords):
            b1 = cand1[w1]
            while b1 != np.uint64(0):
                lsb = b1 & (~b1 + np.uint64(1))
                l1 = (w1 << 6) + _popcount(lsb - np.uint64(1))
                b1 &= b1 - np.uint64(1)
                twice1 = masks[l0] & masks[l1]
                once1 = masks[l0] ^ masks[l1]
                for w in range(nwords):
                    cand2[w] = cand1[w] & compat[l1, w]
                _mask_from(cand2, l1 + 1, nwords)
                for w2 in range(nwords):
                    b2 = cand2[w2]
                    while b2 != np.uint64(0):
                        lsb = b2 & (~b2 + np.uint64(1))
                        l2 = (w2 << 6) + _popcount(lsb - np.uint64(1))
                        b2 &= b2 - np.uint64(1)
                        m2 = masks[l2]
                        if m2 & twice1 != np.uint64(0):
                            continue
                        hit = m2 & once1
                        if _popcount(hit) != 2:
                            continue
                        twice2 = twice1 | hit
                        once2 = (once1 & ~hit) | (m2 & ~hit)
                        for w in range(nwords):
                            cand3[w] = cand2[w] & compat[l2, w]
                        _mask_from(cand3, l2 + 1, nwords)
                        for w3 in range(nwords):
                            b3 = cand3[w3]
                            while b3 != np.uint64(0):
                                lsb = b3 & (~b3 + np.uint64(1))
                                l3 = (w3 << 6) + _popcount(lsb - np.uint64(1))
                                b3 &= b3 - np.uint64(1)
                                m3 = masks[l3]
                                if m3 & twice2 != np.uint64(0):
                                    continue
                                hit = m3 & once2
                                if _popcount(hit) != 3:
                                    continue
                                twice3 = twice2 | hit
                                once3 = (once2 & ~hit) | (m3 & ~hit)
                                for w in range(nwords):
                                    cand4[w] = cand3[w] & compat[l3, w]
                                _mask_from(cand4, l3 + 1, nwords)
                                for w4 in range(nwords):
                                    b4 = cand4[w4]
                                    while b4 != np.uint64(0):
                                        lsb = b4 & (~b4 + np.uint64(1))
                                        l4 = (w4 << 6) + _popcount(lsb - np.uint64(1))
                                        b4 &= b4 - np.uint64(1)
                                        m4 = masks[l4]
                                        if m4 & twice3 != np.uint64(0):
                                            continue
                                        if _popcount(m4 & once3) != 4:
                                            continue
                                        if fill:
                                            out[cnt, 0] = l0
                                            out[cnt, 1] = l1
                                            out[cnt, 2] = l2
                                            out[cnt, 3] = l3
                                            out[cnt, 4] = l4
                                            neg = 0
                                            if signs[l0] < 0:
                                                neg += 1
                                            if signs[l1] < 0:
                                                neg += 1
                                            if signs[l2] < 0:
                                                neg += 1
                                            if signs[l3] < 0:
                                                neg += 1
                                            if signs[l4] < 0:
                                                neg += 1
                                            out_neg[cnt] = neg
                                        cnt += 1
    return cnt


def pentagram_search_range(masks, signs, compat, lo, hi):
    dummy = np.empty((1, 5), dtype=np.int64)
    dummy_n = np.empty(1, dtype=np.int64)
    n = _pent_scan(masks, signs, compat, lo, hi, dummy, dummy_n, False)
    out = np.empty((n, 5), dtype=np.int64)
    out_neg = np.empty(n, dtype=np.int64)
    _pent_scan(masks, signs, compat, lo, hi, out, out_neg, True)
    return out, out_neg
