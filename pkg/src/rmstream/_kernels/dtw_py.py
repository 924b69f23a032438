"""Pure-Python DTW kernel, arithmetic twin of the Cython version.

Operation order matches ``_dtw_cy.pyx`` exactly so both kernels return
bit-identical doubles.
"""

from math import inf


def dtw_cost(a, b, weights, band, squared):
    """Minimum cumulative warping cost between sequences a and b.

    a, b      float sequences (any lengths n, m >= 1)
    weights   per-element weights on a's axis, length n
    band      Sakoe-Chiba half-width; negative disables the band
    squared   use squared instead of absolute local differences
    """
    a = list(a)
    b = list(b)
    w = list(weights)
    n = len(a)
    m = len(b)

    prev = [inf] * (m + 1)
    prev[0] = 0.0
    for i in range(1, n + 1):
        cur = [inf] * (m + 1)
        jlo, jhi = 1, m
        if band >= 0:
            jlo = max(1, i - band)
            jhi = min(m, i + band)
        ai = a[i - 1]
        wi = w[i - 1]
        for j in range(jlo, jhi + 1):
            diff = ai - b[j - 1]
            if diff < 0.0:
                diff = -diff
            if squared:
                diff = diff * diff
            best = prev[j - 1]
            if prev[j] < best:
                best = prev[j]
            if cur[j - 1] < best:
                best = cur[j - 1]
            cur[j] = wi * diff + best
        prev = cur
    return prev[m]
