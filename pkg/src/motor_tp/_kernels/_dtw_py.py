"""Pure numpy fallback for the DTW dynamic program.

Cells are filled one anti-diagonal at a time so each diagonal is a single
vectorized update.  Distances are accumulated feature by feature in the same
order as the compiled kernel, so both backends agree to the last bit.
"""

import numpy as np

STEP_DIAG, STEP_X, STEP_Y = 0, 1, 2


def _sq_dist(x, y):
    c = np.zeros((x.shape[0], y.shape[0]))
    for k in range(x.shape[1]):
        d = x[:, k][:, None] - y[:, k][None, :]
        c += d * d
    return c


def dtw_path(x, y):
    x = np.ascontiguousarray(x, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    n, m = x.shape[0], y.shape[0]
    if n == 0 or m == 0:
        raise ValueError("empty sequence")
    if x.shape[1] != y.shape[1]:
        raise ValueError("dimension mismatch")

    cost = _sq_dist(x, y)
    # padded accumulated cost; acc[i + 1, j + 1] holds cell (i, j)
    acc = np.full((n + 1, m + 1), np.inf)
    acc[0, 0] = 0.0
    steps = np.empty((n, m), dtype=np.uint8)

    for s in range(n + m - 1):
        i = np.arange(max(0, s - m + 1), min(s, n - 1) + 1)
        j = s - i
        dg = acc[i, j]
        up = acc[i, j + 1]
        lf = acc[i + 1, j]
        take_dg = (dg <= up) & (dg <= lf)
        take_up = ~take_dg & (up <= lf)
        best = np.where(take_dg, dg, np.where(take_up, up, lf))
        acc[i + 1, j + 1] = cost[i, j] + best
        steps[i, j] = np.where(take_dg, STEP_DIAG, np.where(take_up, STEP_X, STEP_Y))

    pairs = []
    i, j = n - 1, m - 1
    while True:
        pairs.append((i, j))
        if i == 0 and j == 0:
            break
        step = steps[i, j]
        if step == STEP_DIAG:
            i -= 1
            j -= 1
        elif step == STEP_X:
            i -= 1
        else:
            j -= 1
    return float(acc[n, m]), np.array(pairs[::-1], dtype=np.int64)
