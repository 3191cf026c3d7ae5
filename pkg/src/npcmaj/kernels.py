"""Hot numeric kernels, JIT-compiled with numba when available.

Setting the environment variable ``NPCMAJ_DISABLE_NUMBA=1`` (before import)
selects the pure-numpy fallback path: the very same functions run without JIT
compilation.  ``benchmarks/bench_kernels.py`` compares the two paths.
"""

import os

import numpy as np


def _use_numba():
    flag = os.environ.get("NPCMAJ_DISABLE_NUMBA", "").strip().lower()
    if flag in ("1", "true", "yes", "on"):
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


NUMBA_ENABLED = _use_numba()

if NUMBA_ENABLED:
    from numba import njit
else:
    def njit(*args, **kwargs):
        # identity decorator, tolerates both @njit and @njit(...)
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap


@njit(cache=True)
def jacobi_eigh(a):
    """Eigendecomposition of a real symmetric matrix by cyclic Jacobi sweeps.

    Returns ``(w, V)`` with eigenvalues ``w`` in ascending order and the
    corresponding eigenvectors as the columns of ``V``.  Intended for the
    small dense matrices this package works with (order <= ~20).
    """
    n = a.shape[0]
    A = a.copy()
    V = np.eye(n)
    total = 0.0
    for i in range(n):
        for j in range(n):
            total += A[i, j] * A[i, j]
    stop = 1e-30 * (total + 1e-300)
    for _sweep in range(100):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += A[p, q] * A[p, q]
        if off <= stop:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                tau = (A[q, q] - A[p, p]) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                for k in range(n):
                    akp = A[k, p]
                    akq = A[k, q]
                    A[k, p] = c * akp - s * akq
                    A[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = A[p, k]
                    aqk = A[q, k]
                    A[p, k] = c * apk - s * aqk
                    A[q, k] = s * apk + c * aqk
                for k in range(n):
                    vkp = V[k, p]
                    vkq = V[k, q]
                    V[k, p] = c * vkp - s * vkq
                    V[k, q] = s * vkp + c * vkq
    w = np.empty(n)
    for i in range(n):
        w[i] = A[i, i]
    order = np.argsort(w)
    wout = np.empty(n)
    Vout = np.empty((n, n))
    for i in range(n):
        wout[i] = w[order[i]]
        for k in range(n):
            Vout[k, i] = V[k, order[i]]
    return wout, Vout


@njit(cache=True)
def halfplane_distance(x1, y1, x2, y2):
    """Hyperbolic distance in the upper half-plane between x1+i*y1 and x2+i*y2."""
    dx = x1 - x2
    dy = y1 - y2
    arg = 1.0 + (dx * dx + dy * dy) / (2.0 * y1 * y2)
    if arg < 1.0:
        arg = 1.0
    return np.arccosh(arg)


@njit(cache=True)
def quantile_w2_squared(atoms_a, cum_a, atoms_b, cum_b):
    """Exact squared 2-Wasserstein distance between two 1-D discrete measures.

    ``cum_a``/``cum_b`` are inclusive cumulative weights ending at 1.  The
    quantile functions are piecewise constant, so the integral of the squared
    quantile difference reduces to a finite sum over the merged breakpoints.
    """
    i = 0
    j = 0
    t = 0.0
    total = 0.0
    na = atoms_a.shape[0]
    nb = atoms_b.shape[0]
    while i < na and j < nb:
        ta = cum_a[i]
        tb = cum_b[j]
        tnext = ta if ta < tb else tb
        d = atoms_a[i] - atoms_b[j]
        dt = tnext - t
        if dt > 0.0:
            total += dt * d * d
        if ta <= tnext:
            i += 1
        if tb <= tnext:
            j += 1
        t = tnext
    return total
