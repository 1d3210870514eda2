# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled exact greedy split scan (hot kernel).

Semantics are pinned by _scan_py.scan_block; see the parity contract in
that module's docstring. The kernel walks each feature's presorted full
column once, dispatching samples to their node's running sums, so a
whole tree level is scanned in O(n_features * n_samples) without
per-node sorting. Ties in feature values resolve by ascending sample
index because the presort is stable, matching the fallback exactly.
"""

import numpy as np

cimport numpy as cnp
from libc.stdlib cimport calloc, free


def scan_block(
    double[::1, :] X,
    cnp.int64_t[::1, :] sort_idx,
    cnp.int32_t[::1] node_of,
    object members_list,
    double[::1] g,
    double[::1] h,
    double[::1] node_g,
    double[::1] node_h,
    cnp.int64_t[::1] node_cnt,
    double lam,
    cnp.int64_t min_leaf,
    Py_ssize_t f_lo,
    Py_ssize_t f_hi,
):
    """Best split per node over features [f_lo, f_hi); see _scan_py."""
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t n_nodes = node_g.shape[0]

    out_gain = np.zeros(n_nodes, dtype=np.float64)
    out_feat = np.full(n_nodes, -1, dtype=np.int32)
    out_thr = np.zeros(n_nodes, dtype=np.float64)
    cdef double[::1] og = out_gain
    cdef cnp.int32_t[::1] of_ = out_feat
    cdef double[::1] ot = out_thr

    cdef double* run_g = <double*> calloc(n_nodes, sizeof(double))
    cdef double* run_h = <double*> calloc(n_nodes, sizeof(double))
    cdef cnp.int64_t* run_cnt = <cnp.int64_t*> calloc(n_nodes, sizeof(cnp.int64_t))
    cdef double* prev_val = <double*> calloc(n_nodes, sizeof(double))
    cdef char* has_prev = <char*> calloc(n_nodes, sizeof(char))
    cdef double* parent_term = <double*> calloc(n_nodes, sizeof(double))
    if (run_g == NULL or run_h == NULL or run_cnt == NULL or prev_val == NULL
            or has_prev == NULL or parent_term == NULL):
        free(run_g); free(run_h); free(run_cnt)
        free(prev_val); free(has_prev); free(parent_term)
        raise MemoryError()

    cdef Py_ssize_t f, k, j
    cdef cnp.int64_t s, left_cnt
    cdef cnp.int32_t nd
    cdef double v, gl, hl, gr, hr, gain, thr

    with nogil:
        for j in range(n_nodes):
            parent_term[j] = node_g[j] * node_g[j] / (node_h[j] + lam)
        for f in range(f_lo, f_hi):
            for j in range(n_nodes):
                run_g[j] = 0.0
                run_h[j] = 0.0
                run_cnt[j] = 0
                has_prev[j] = 0
            for k in range(n):
                s = sort_idx[k, f]
                nd = node_of[s]
                if nd < 0:
                    continue
                v = X[s, f]
                if has_prev[nd] == 1 and v != prev_val[nd]:
                    left_cnt = run_cnt[nd]
                    if left_cnt >= min_leaf and node_cnt[nd] - left_cnt >= min_leaf:
                        gl = run_g[nd]
                        hl = run_h[nd]
                        gr = node_g[nd] - gl
                        hr = node_h[nd] - hl
                        gain = 0.5 * (gl * gl / (hl + lam) + gr * gr / (hr + lam)
                                      - parent_term[nd])
                        if gain > og[nd]:
                            thr = 0.5 * (prev_val[nd] + v)
                            if thr >= v:
                                thr = prev_val[nd]
                            og[nd] = gain
                            of_[nd] = <cnp.int32_t> f
                            ot[nd] = thr
                run_g[nd] += g[s]
                run_h[nd] += h[s]
                run_cnt[nd] += 1
                prev_val[nd] = v
                has_prev[nd] = 1

    free(run_g); free(run_h); free(run_cnt)
    free(prev_val); free(has_prev); free(parent_term)
    return out_gain, out_feat, out_thr
