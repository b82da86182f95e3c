"""Pure NumPy implementations of the O(n^2) pairwise kernels.

These are the import-time fallback when the compiled extension is not
available.  Rows are processed one at a time (O(n) memory); row totals
use NumPy's pairwise summation and are combined across rows with Kahan
compensation in fixed row order, so results are reproducible run to run.
"""
import numpy as np


def _kahan_add(total, comp, term):
    y = term - comp
    t = total + y
    return t, (t - total) - y


def writhe_sum(pos, vel, weights):
    """Gauss double sum det(v_i, v_j, x_i - x_j)/|x_i - x_j|^3, diagonal 0.

    Returns (sum, min distance over non-neighboring pairs).
    """
    n = pos.shape[0]
    total = 0.0
    comp = 0.0
    min_d2 = np.inf
    for i in range(n):
        c = pos[i] - pos
        cr = np.cross(vel[i][None, :], vel)
        det = np.einsum('ij,ij->i', cr, c)
        d2 = np.einsum('ij,ij->i', c, c)
        det[i] = 0.0
        d2[i] = 1.0
        row = float(np.sum(weights * det / (d2 * np.sqrt(d2))))
        d2[[i, (i - 1) % n, (i + 1) % n]] = np.inf
        m = d2.min()
        if m < min_d2:
            min_d2 = m
        total, comp = _kahan_add(total, comp, weights[i] * row)
    return total, float(np.sqrt(min_d2))


def linking_sum(pos1, vel1, pos2, vel2, w1, w2):
    """Two-curve Gauss double sum; returns (sum, min pair distance)."""
    total = 0.0
    comp = 0.0
    min_d2 = np.inf
    for i in range(pos1.shape[0]):
        c = pos1[i] - pos2
        cr = np.cross(vel1[i][None, :], vel2)
        det = np.einsum('ij,ij->i', cr, c)
        d2 = np.einsum('ij,ij->i', c, c)
        m = d2.min()
        if m < min_d2:
            min_d2 = m
        # coincident points produce nan, matching the compiled lane; the
        # caller rejects such inputs from the returned minimum distance
        with np.errstate(invalid="ignore", divide="ignore"):
            row = float(np.sum(w2 * det / (d2 * np.sqrt(d2))))
        total, comp = _kahan_add(total, comp, w1[i] * row)
    return total, float(np.sqrt(min_d2))


def gauss_area_sum(pos, vel, weights):
    """Signed spherical area sum of the chord-direction map.

    The integrand is built from the unit chord phi and its projected
    parameter derivatives (an algebraically independent route to the
    writhe integrand).  Returns (sum, min non-neighbor distance).
    """
    n = pos.shape[0]
    total = 0.0
    comp = 0.0
    min_d2 = np.inf
    for i in range(n):
        c = pos[i] - pos
        d2 = np.einsum('ij,ij->i', c, c)
        d2[i] = 1.0
        d = np.sqrt(d2)
        phi = c / d[:, None]
        vs = np.broadcast_to(vel[i], phi.shape)
        vt = -vel
        phis = (vs - phi * np.einsum('ij,ij->i', phi, vs)[:, None]) / d[:, None]
        phit = (vt - phi * np.einsum('ij,ij->i', phi, vt)[:, None]) / d[:, None]
        det = np.einsum('ij,ij->i', phi, np.cross(phit, phis))
        det[i] = 0.0
        row = float(np.sum(weights * det))
        d2[[i, (i - 1) % n, (i + 1) % n]] = np.inf
        m = d2.min()
        if m < min_d2:
            min_d2 = m
        total, comp = _kahan_add(total, comp, weights[i] * row)
    return total, float(np.sqrt(min_d2))


def min_distance_offdiag(pos, exclude_neighbors=True):
    """Minimum pairwise distance, optionally skipping adjacent samples."""
    n = pos.shape[0]
    min_d2 = np.inf
    for i in range(n):
        c = pos[i] - pos
        d2 = np.einsum('ij,ij->i', c, c)
        if exclude_neighbors:
            d2[[i, (i - 1) % n, (i + 1) % n]] = np.inf
        else:
            d2[i] = np.inf
        m = d2.min()
        if m < min_d2:
            min_d2 = m
    return float(np.sqrt(min_d2))


def doubly_critical_distance(pos, tangents, cos_tol=0.2):
    """Min distance over pairs whose chord is near-orthogonal to both tangents.

    Falls back to pairs separated by at least a quarter period when no
    pair passes the orthogonality test (coarse sampling).
    """
    n = pos.shape[0]
    best = np.inf
    fallback = np.inf
    idx = np.arange(n)
    for i in range(n):
        c = pos[i] - pos
        d2 = np.einsum('ij,ij->i', c, c)
        d2[i] = np.inf
        d = np.sqrt(d2)
        a1 = np.abs(c @ tangents[i]) / d
        a2 = np.abs(np.einsum('ij,ij->i', c, tangents)) / d
        mask = (a1 < cos_tol) & (a2 < cos_tol)
        sep = np.minimum((idx - i) % n, (i - idx) % n)
        mask &= sep > 1
        if mask.any():
            m = d[mask].min()
            if m < best:
                best = m
        far = d[sep > n // 4]
        if far.size:
            m = far.min()
            if m < fallback:
                fallback = m
    return float(best if np.isfinite(best) else fallback)
