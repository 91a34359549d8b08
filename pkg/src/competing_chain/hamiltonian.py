"""Explicit spin-operator construction of the competing-chain Hamiltonian.

H = H_bulk + H_L + H_R on 2N spin-1/2 sites.  The bulk carries
nearest-neighbour exchange (coefficient 1, except the first and last bond
which are corrected by c1 and c_{2N-1}), next-nearest exchange J2 = 2ā²,
and staggered chiral three-spin terms with coefficient J3 = -ā.  Terms
reaching past the last site are dropped (edge convention sigma_{2N+1} = 0).

The boundary pieces are written fully realified (a pure imaginary, p, q, xi
real), so every coefficient below is a plain float and hermiticity is
structural rather than numerical.
"""

from __future__ import annotations

import numpy as np

from .algebra import ID2, PAULI, SIGMA_X, SIGMA_Y, SIGMA_Z, kron
from .errors import SizeError
from .params import ModelParams, couplings

MAX_SITES = 12

_EPS_LC = [
    (0, 1, 2, 1.0), (1, 2, 0, 1.0), (2, 0, 1, 1.0),
    (0, 2, 1, -1.0), (2, 1, 0, -1.0), (1, 0, 2, -1.0),
]


def _embed(two_n: int, ops: dict) -> np.ndarray:
    """Dense operator with the given single-site factors (1-based sites)."""
    out = None
    for site in range(1, two_n + 1):
        op = ops.get(site, ID2)
        out = op.copy() if out is None else kron(out, op)
    return out


def _exchange(two_n: int, i: int, j: int) -> np.ndarray:
    h = 0.0
    for s in PAULI:
        h = h + _embed(two_n, {i: s, j: s})
    return h


def _chiral(two_n: int, j: int) -> np.ndarray:
    """sigma_{j+1} . (sigma_j x sigma_{j+2})."""
    h = 0.0
    for a, b, c, sgn in _EPS_LC:
        h = h + sgn * _embed(two_n, {j + 1: PAULI[a], j: PAULI[b], j + 2: PAULI[c]})
    return h


def hamiltonian_direct(params: ModelParams, max_sites: int = MAX_SITES) -> np.ndarray:
    """Dense 2^{2N}-dimensional hermitian Hamiltonian from the spin couplings.

    Defined at the homogeneous point; the inhomogeneities theta_bar are
    ignored here by construction.
    """
    two_n = params.two_n
    if two_n > max_sites:
        raise SizeError(f"two_n={two_n} exceeds the dense-construction cap {max_sites}")
    ab = params.a_bar
    cpl = couplings(params)

    dim = 2 ** two_n
    h = np.zeros((dim, dim), dtype=complex)

    for j in range(1, two_n):
        j1 = cpl.J1_bulk
        if j == 1:
            j1 += cpl.c1
        if j == two_n - 1:
            j1 += cpl.c2Nm1
        h += j1 * _exchange(two_n, j, j + 1)
    for j in range(1, two_n - 1):
        h += cpl.J2 * _exchange(two_n, j, j + 2)
        h += cpl.J3 * ((-1.0) ** j) * _chiral(two_n, j)

    # left boundary: field along z plus anisotropic and antisymmetric bond terms
    pref_l = (1.0 + 4.0 * ab ** 2) / (params.p ** 2 + ab ** 2)
    h += pref_l * params.p * _embed(two_n, {1: SIGMA_Z})
    h += pref_l * ab ** 2 * _embed(two_n, {1: SIGMA_Z, 2: SIGMA_Z})
    h += pref_l * ab * params.p * (
        _embed(two_n, {1: SIGMA_X, 2: SIGMA_Y}) - _embed(two_n, {1: SIGMA_Y, 2: SIGMA_X})
    )

    # right boundary: tilted field in the x-z plane plus bond terms
    pref_r = (1.0 + 4.0 * ab ** 2) / (ab ** 2 * params.xi ** 2 + ab ** 2 + params.q ** 2)
    ln = two_n
    tilted_last = params.xi * _embed(two_n, {ln: SIGMA_X}) + _embed(two_n, {ln: SIGMA_Z})
    tilted_prev = params.xi * _embed(two_n, {ln - 1: SIGMA_X}) + _embed(two_n, {ln - 1: SIGMA_Z})
    h += pref_r * params.q * tilted_last
    h += pref_r * ab ** 2 * (tilted_prev @ tilted_last)
    # (sigma_{2N} x sigma_{2N-1}) components, x then z
    cross_x = (
        _embed(two_n, {ln: SIGMA_Y, ln - 1: SIGMA_Z}) - _embed(two_n, {ln: SIGMA_Z, ln - 1: SIGMA_Y})
    )
    cross_z = (
        _embed(two_n, {ln: SIGMA_X, ln - 1: SIGMA_Y}) - _embed(two_n, {ln: SIGMA_Y, ln - 1: SIGMA_X})
    )
    h += pref_r * ab * params.q * (params.xi * cross_x + cross_z)

    return h
