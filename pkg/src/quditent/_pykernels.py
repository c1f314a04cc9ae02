"""Pure-Python reference kernels.

Same signatures and semantics as the compiled ``_ckernels`` module; used
when the extension is not built and as the baseline in the benchmark.
"""

import math

import numpy as np

CONCURRENCE = 0
NEGATIVITY = 1

_TINY = 1e-300


def jacobi_eigh(h, rel_tol=1e-12, max_sweeps=100):
    """Cyclic complex Jacobi diagonalization of a Hermitian matrix.

    Returns ``(eigenvalues, eigenvectors, sweeps, converged)``. Eigenvalues are
    in the order they appear on the final diagonal (unsorted); eigenvectors are
    the columns of the second array.
    """
    a = np.array(h, dtype=np.complex128, copy=True)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    scale = math.sqrt(float(np.sum(a.real**2 + a.imag**2)))
    threshold = rel_tol * scale
    sweeps = 0
    converged = False
    for sweeps in range(max_sweeps + 1):
        off = a - np.diag(np.diag(a))
        if math.sqrt(float(np.sum(off.real**2 + off.imag**2))) <= threshold:
            converged = True
            break
        if sweeps == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                g = abs(apq)
                if g <= _TINY:
                    continue
                e = apq / g
                app = a[p, p].real
                aqq = a[q, q].real
                zeta = (aqq - app) / (2.0 * g)
                t = 1.0 / (abs(zeta) + math.sqrt(1.0 + zeta * zeta))
                if zeta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                ec = e.conjugate()
                colp = a[:, p].copy()
                colq = a[:, q]
                a[:, p] = c * colp - s * ec * colq
                a[:, q] = s * colp + c * ec * colq
                rowp = a[p, :].copy()
                rowq = a[q, :]
                a[p, :] = c * rowp - s * e * rowq
                a[q, :] = s * rowp + c * e * rowq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = app - t * g
                a[q, q] = aqq + t * g
                vp = v[:, p].copy()
                vq = v[:, q]
                v[:, p] = c * vp - s * ec * vq
                v[:, q] = s * vp + c * ec * vq
    return np.diag(a).real.copy(), v, sweeps, converged


def _minor_sum(w, m, n):
    """Sum of squared moduli of all 2x2 minors of the m x n coefficient matrix."""
    mat = w.reshape(m, n)
    total = 0.0
    for i in range(m - 1):
        for k in range(i + 1, m):
            prod = np.outer(mat[i], mat[k])
            minors = prod - prod.T
            total += float(np.sum(np.abs(np.triu(minors, 1)) ** 2))
    return total


def _member_value(w, m, n, measure, eps):
    if measure == CONCURRENCE:
        x = _minor_sum(w, m, n)
        return math.sqrt(4.0 * x + eps * eps) - eps
    d = min(m, n)
    if d < 2:
        return 0.0
    if d == 2:
        x = _minor_sum(w, m, n)
        return 2.0 * (math.sqrt(x + eps * eps) - eps)
    mat = w.reshape(m, n)
    gram = mat @ mat.conj().T if m <= n else mat.conj().T @ mat
    lam, _, _, _ = jacobi_eigh(gram)
    sig = np.sqrt(np.maximum(lam, 0.0) + eps * eps) - eps
    e2 = 0.5 * (float(np.sum(sig)) ** 2 - float(np.sum(sig * sig)))
    return 2.0 * e2 / (d - 1)


def member_values(W, m, n, measure, eps=0.0):
    """Per-member weighted measure p_j * M(psi_j) of unnormalized rows of W."""
    W = np.asarray(W, dtype=np.complex128)
    return np.array([_member_value(W[j], m, n, measure, eps) for j in range(W.shape[0])])


def _rotate(wa, wb, theta, phi):
    c = math.cos(theta)
    s = math.sin(theta)
    e = complex(math.cos(phi), math.sin(phi))
    return c * wa - e * s * wb, e.conjugate() * s * wa + c * wb


def roof_descent(W, m, n, measure, eps, max_sweeps, sweep_tol=1e-14, step_floor=1e-8):
    """Pairwise Givens-rotation pattern search on the ensemble rows of ``W``.

    ``W`` (L x mn) is updated in place. Each pair of members is mixed by a
    two-parameter rotation whose angles are refined by compass moves. Returns
    ``(sweeps_used, converged)``; converged means the last sweep improved the
    total by less than ``sweep_tol``.
    """
    L = W.shape[0]
    vals = member_values(W, m, n, measure, eps)
    for sweep in range(1, max_sweeps + 1):
        before = float(vals.sum())
        for a in range(L - 1):
            for b in range(a + 1, L):
                cur = vals[a] + vals[b]
                theta = phi = 0.0
                step = 0.3
                best = None
                it = 0
                while step > step_floor and it < 100:
                    it += 1
                    moved = False
                    for dt, dp in ((step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)):
                        na, nb = _rotate(W[a], W[b], theta + dt, phi + dp)
                        va = _member_value(na, m, n, measure, eps)
                        vb = _member_value(nb, m, n, measure, eps)
                        if va + vb < cur:
                            cur = va + vb
                            theta += dt
                            phi += dp
                            best = (na, nb, va, vb)
                            moved = True
                            step *= 2.0
                            break
                    if not moved:
                        step *= 0.25
                if best is not None:
                    W[a], W[b], vals[a], vals[b] = best
        if before - float(vals.sum()) < sweep_tol:
            return sweep, True
    return max_sweeps, False
