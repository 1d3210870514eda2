"""Pure numpy exact greedy split scan (fallback backend).

This module and the compiled kernel (_splitkernel.pyx) must stay
arithmetic-identical so that trained models do not depend on which
backend happened to be importable:

  * per-node prefix sums accumulate in ascending feature-value order,
    ties broken by ascending sample index (numpy stable argsort here,
    a stable full-column presort filtered per node in the kernel);
  * gain = 0.5 * (GL^2/(HL+lam) + GR^2/(HR+lam) - GP^2/(HP+lam)),
    evaluated in exactly that operation order, with GR = GP - GL using
    the caller-supplied node totals;
  * candidates are accepted on strictly-greater gain while iterating
    features ascending and thresholds ascending, so the winner is the
    lowest feature index, then the lowest threshold;
  * thresholds are adjacent-value midpoints, clamped down to the left
    value if rounding lands on the right one.

Change one side only with a parity test in hand (tests/test_gbdt.py).
"""

from __future__ import annotations

import numpy as np


def scan_block(
    X,
    sort_idx,
    node_of,
    members_list,
    g,
    h,
    node_g,
    node_h,
    node_cnt,
    lam,
    min_leaf,
    f_lo,
    f_hi,
):
    """Best split per node over features [f_lo, f_hi).

    Returns (gain, feature, threshold) arrays of length len(members_list);
    feature -1 / gain 0.0 means no positive-gain split exists in range.
    """
    n_nodes = len(members_list)
    out_gain = np.zeros(n_nodes, dtype=np.float64)
    out_feat = np.full(n_nodes, -1, dtype=np.int32)
    out_thr = np.zeros(n_nodes, dtype=np.float64)

    for j, members in enumerate(members_list):
        m = len(members)
        if m < 2 * min_leaf or m < 2:
            continue
        g_total = node_g[j]
        h_total = node_h[j]
        parent_term = g_total * g_total / (h_total + lam)
        g_mem = g[members]
        h_mem = h[members]
        counts = np.arange(1, m, dtype=np.int64)
        size_ok = (counts >= min_leaf) & ((m - counts) >= min_leaf)

        best_gain = 0.0
        best_feat = -1
        best_thr = 0.0
        for f in range(f_lo, f_hi):
            values = X[members, f]
            order = np.argsort(values, kind="stable")
            vs = values[order]
            if vs[0] == vs[-1]:
                continue
            cg = np.cumsum(g_mem[order])
            ch = np.cumsum(h_mem[order])
            gl = cg[:-1]
            hl = ch[:-1]
            gr = g_total - gl
            hr = h_total - hl
            gains = 0.5 * (gl * gl / (hl + lam) + gr * gr / (hr + lam) - parent_term)
            valid = size_ok & (vs[:-1] != vs[1:])
            gains = np.where(valid, gains, -np.inf)
            gains[np.isnan(gains)] = -np.inf
            i = int(np.argmax(gains))
            gain = float(gains[i])
            if gain > best_gain:
                thr = 0.5 * (vs[i] + vs[i + 1])
                if thr >= vs[i + 1]:
                    thr = vs[i]
                best_gain = gain
                best_feat = f
                best_thr = float(thr)
        if best_feat >= 0:
            out_gain[j] = best_gain
            out_feat[j] = best_feat
            out_thr[j] = best_thr
    return out_gain, out_feat, out_thr
