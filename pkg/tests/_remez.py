"""Remez-exchange oracle for discrete real Chebyshev problems.

Independent of the package under test: a plain single-point exchange
on a fixed mesh, valid for real targets and a real Haar basis (here,
monomials on distinct interval points).  Used to cross-check the
Lawson solver on small problems where both must agree to 1e-8.
"""

import numpy as np


def remez_minimax(B: np.ndarray, f: np.ndarray, max_exchanges: int = 200) -> float:
    """Best sup-norm error of f by columns of B on the mesh rows.

    Parameters
    ----------
    B : ndarray
        Real basis matrix, shape (M, n), n <= M, Haar on the mesh.
    f : ndarray
        Real target values, shape (M,).

    Returns
    -------
    float
        max_i |f_i - (B c*)_i| at the discrete optimum c*.
    """
    B = np.asarray(B, dtype=float)
    f = np.asarray(f, dtype=float)
    M, n = B.shape
    if n + 1 > M:
        raise ValueError("need at least n + 1 mesh points")
    # spread initial references across the mesh
    refs = list(np.linspace(0, M - 1, n + 1).round().astype(int))
    for _ in range(max_exchanges):
        A = np.empty((n + 1, n + 1))
        A[:, :n] = B[refs]
        A[:, n] = [(-1) ** j for j in range(n + 1)]
        sol = np.linalg.solve(A, f[refs])
        c, h = sol[:n], sol[n]
        e = f - B @ c
        i_star = int(np.argmax(np.abs(e)))
        if np.abs(e[i_star]) <= abs(h) * (1 + 1e-12) + 1e-300:
            return abs(h)
        s = np.sign(e[i_star])
        if i_star < refs[0]:
            if s == np.sign(e[refs[0]]):
                refs[0] = i_star
            else:
                refs.pop()
                refs.insert(0, i_star)
        elif i_star > refs[-1]:
            if s == np.sign(e[refs[-1]]):
                refs[-1] = i_star
            else:
                refs.pop(0)
                refs.append(i_star)
        else:
            # interior: displace the neighbor with matching error sign
            j = int(np.searchsorted(refs, i_star))
            if refs[j] == i_star:
                return abs(h)  # max already a reference: optimum reached
            if s == np.sign(e[refs[j - 1]]):
                refs[j - 1] = i_star
            else:
                refs[j] = i_star
    return abs(h)
