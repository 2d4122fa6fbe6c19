"""Floating-point Weil representation, used only to validate conventions."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from .lattice import DiscriminantForm, EvenLattice
from .qseries import VVQExpansion


def e(x) -> complex:
    return cmath.exp(2j * math.pi * float(x))


@dataclass
class WeilRepMatrices:
    elements: List[tuple]
    rho_T: List[List[complex]]
    rho_S: List[List[complex]]

    @property
    def dim(self) -> int:
        return len(self.elements)


def weil_matrices(disc: DiscriminantForm, signature: Tuple[int, int]) -> WeilRepMatrices:
    """Matrices of ``rho(T)`` and ``rho(S)`` in the basis ``e_gamma``.

    Column ``gamma`` holds the image of ``e_gamma``:
    ``rho(T) e_g = e(q(g)) e_g`` and
    ``rho(S) e_g = e(-(p - q)/8) |Delta|^{-1/2} sum_d e(-b(g, d)) e_d``.
    """
    els = disc.elements()
    n = len(els)
    p, q = signature
    T = [[0j] * n for _ in range(n)]
    S = [[0j] * n for _ in range(n)]
    pref = e(-(p - q) / 8) / math.sqrt(n)
    for j, g in enumerate(els):
        T[j][j] = e(disc.q(g))
        for i, d in enumerate(els):
            S[i][j] = pref * e(-disc.b(g, d))
    return WeilRepMatrices(els, T, S)


def is_unitary(M: Sequence[Sequence[complex]], tol: float = 1e-10) -> bool:
    n = len(M)
    for i in range(n):
        for j in range(n):
            s = sum(M[i][k] * M[j][k].conjugate() for k in range(n))
            if abs(s - (1 if i == j else 0)) > tol:
                return False
    return True


def evaluate(expansion: VVQExpansion, keys: List[tuple], tau: complex) -> List[complex]:
    """Numeric value of the truncated expansion at ``tau`` per component."""
    out = []
    for k in keys:
        s = 0j
        for ex, c in expansion.components.get(k, {}).items():
            s += float(c) * cmath.exp(2j * math.pi * float(ex) * tau)
        out.append(s)
    return out


def theta_transformation_defect(L: EvenLattice, theta: VVQExpansion, tau: complex) -> float:
    """``max |Theta(-1/tau) - tau^{r/2} rho(S) Theta(tau)|`` for definite ``L``."""
    disc = L.discriminant
    W = weil_matrices(disc, L.signature)
    keys = W.elements
    lhs = evaluate(theta, keys, -1 / tau)
    v = evaluate(theta, keys, tau)
    factor = cmath.exp(L.rank / 2 * cmath.log(tau))
    rhs = [factor * sum(W.rho_S[i][j] * v[j] for j in range(len(keys))) for i in range(len(keys))]
    return max(abs(a - b) for a, b in zip(lhs, rhs))


def _beta(x: float) -> float:
    """``int_1^oo t^{-3/2} e^{-x t} dt``."""
    if x == 0:
        return 2.0
    return 2 * math.exp(-x) - 2 * math.sqrt(math.pi * x) * math.erfc(math.sqrt(x))


def g_plus_completion(G_plus: VVQExpansion, N: int, tau: complex, terms: int = 30) -> List[complex]:
    """``G_N^+ + G_N^-`` at ``tau``, components ``r = 0 .. 2N-1``.

    ``G_N^-`` is the non-holomorphic part whose shadow is
    ``-sqrt(N)/(8 pi) Theta_N``.
    """
    y = tau.imag
    out = evaluate(G_plus, [(r,) for r in range(2 * N)], tau)
    pref = math.sqrt(N) / (8 * math.pi * math.sqrt(y))
    for l in range(-terms, terms + 1):
        x = math.pi * l * l * y / N
        if x > 700:
            continue
        out[l % (2 * N)] += pref * _beta(x) * cmath.exp(-2j * math.pi * l * l / (4 * N) * tau)
    return out


def g_plus_modularity_defect(G_plus: VVQExpansion, N: int, tau: complex) -> float:
    """``max |G(-1/tau) - tau^{3/2} rho_bar(S) G(tau)|`` for the completed ``G_N``."""
    from .theta import lambda_N

    W = weil_matrices(lambda_N(N).discriminant, (1, 0))
    idx = [g[0] for g in W.elements]
    v = g_plus_completion(G_plus, N, tau)
    lhs = g_plus_completion(G_plus, N, -1 / tau)
    factor = cmath.exp(1.5 * cmath.log(tau))
    n = len(idx)
    rhs = [factor * sum(W.rho_S[i][j].conjugate() * v[idx[j]] for j in range(n)) for i in range(n)]
    return max(abs(lhs[idx[i]] - rhs[i]) for i in range(n))
