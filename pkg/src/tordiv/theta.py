"""Theta series of definite lattices, of ``Lambda_N`` and of ``(K, omega)``."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Tuple

from . import linalg
from .isotropic import CuspError, Rank1CuspData
from .lattice import EvenLattice, LatticeError, short_vectors, theta_coefficients
from .qseries import VVQExpansion


def theta_definite(D: EvenLattice, prec) -> VVQExpansion:
    """``sum_{beta in D*} q^{beta^2/2} e_{beta + D}`` up to ``prec``."""
    prec = Fraction(prec)
    if D.rank == 0:
        return VVQExpansion({(): {Fraction(0): Fraction(1)}}, prec, 0)
    if not D.is_positive_definite():
        raise LatticeError("theta_definite needs a positive definite lattice")
    data = theta_coefficients(D, prec)
    comps = {mu: {e: Fraction(c) for e, c in t.items()} for mu, t in data.items()}
    return VVQExpansion(comps, prec, 0)


def theta_N(N: int, prec) -> VVQExpansion:
    """``Theta_N = sum_l q^{l^2/4N} e_{l + 2N Z}``; keys are ``(r,)`` with ``0 <= r < 2N``."""
    if N < 1:
        raise ValueError("N must be positive")
    prec = Fraction(prec)
    comps: Dict[Tuple[int], Dict[Fraction, Fraction]] = {}
    l = 0
    while Fraction(l * l, 4 * N) < prec:
        for s in {l, -l}:
            t = comps.setdefault(((s % (2 * N)),), {})
            e = Fraction(l * l, 4 * N)
            t[e] = t.get(e, Fraction(0)) + 1
        l += 1
    return VVQExpansion(comps, prec, 0)


def lambda_N(N: int) -> EvenLattice:
    """The rank one lattice spanned by a vector of norm ``2N``."""
    return EvenLattice([[2 * N]], f"Lambda_{N}")


def _adapted_dual_basis(K: EvenLattice, omega) -> Tuple[list, int]:
    """Basis of ``K*`` (in K coordinates) whose first vector is ``omega/t``."""
    G = [list(r) for r in K.gram]
    y = linalg.mat_vec(G, omega)
    t = linalg.vec_gcd(y)
    y = [v // t for v in y]
    full = linalg.complete_to_basis([y], K.rank)
    Ginv = linalg.inverse(G)
    basis = [linalg.mat_vec(Ginv, row) for row in full]
    return basis, t


def theta_K_omega(r1: Rank1CuspData, omega, prec) -> VVQExpansion:
    """Theta series of ``K`` attached to the negative norm vector ``omega``.

    Keys are ``(delta, (r,))`` with ``delta`` in ``Delta_K`` and ``r`` in
    ``Z/2N``; the term ``q^{lambda_{omega perp}^2/2}`` is recorded for each
    ``lambda in K*/Z omega`` with ``(lambda, omega) = -r mod 2N``.
    """
    K = r1.K
    omega = [int(x) for x in omega]
    if linalg.vec_gcd(omega) != 1:
        raise CuspError("omega is not primitive")
    w2 = K.norm(omega)
    if w2 >= 0 or w2 % 2:
        raise CuspError("omega must have norm -2N < 0")
    if not r1.same_negative_cone(omega):
        raise CuspError("omega lies in the opposite cone")
    N = -w2 // 2
    prec = Fraction(prec)
    basis, t = _adapted_dual_basis(K, omega)
    f1 = basis[0]
    rest = basis[1:]
    Kw = [K.pair(f, omega) for f in rest]
    f1w = K.pair(f1, omega)
    # positive definite Gram of the projection to omega^perp
    Gp = [[K.pair(fi, fj) + Fraction(Kw[i] * Kw[j], 2 * N) for j, fj in enumerate(rest)] for i, fi in enumerate(rest)]
    disc = K.discriminant
    comps: Dict[tuple, Dict[Fraction, Fraction]] = {}
    vecs = short_vectors(Gp, prec) if rest else [((), Fraction(0))]
    for a, nv in vecs:
        e = nv / 2
        if e >= prec:
            continue
        base = [sum((ai * f[k] for ai, f in zip(a, rest)), Fraction(0)) for k in range(K.rank)]
        base_w = sum((ai * x for ai, x in zip(a, Kw)), Fraction(0))
        for a1 in range(t):
            lam = [b + a1 * x for b, x in zip(base, f1)]
            lw = base_w + a1 * f1w
            r = int(-lw) % (2 * N)
            key = (disc.element_of(lam), (r,))
            terms = comps.setdefault(key, {})
            terms[e] = terms.get(e, Fraction(0)) + 1
    return VVQExpansion(comps, prec, 0)


def theta_K_omega_box_oracle(r1: Rank1CuspData, omega, prec, box: int) -> Dict[tuple, Dict[Fraction, int]]:
    """Naive enumeration of the same counts over a coordinate box of ``K*``.

    Representatives of ``K*/Z omega`` are normalized by shifting along
    ``omega/t`` so that the coefficient of the first adapted basis vector
    lies in ``[0, t)``; duplicates are removed before counting.
    """
    import itertools

    K = r1.K
    omega = [int(x) for x in omega]
    N = -K.norm(omega) // 2
    prec = Fraction(prec)
    G = [list(r) for r in K.gram]
    Ginv = linalg.inverse(G)
    basis, t = _adapted_dual_basis(K, omega)
    B = linalg.transpose(basis)
    seen = set()
    out: Dict[tuple, Dict[Fraction, int]] = {}
    for y in itertools.product(range(-box, box + 1), repeat=K.rank):
        lam = linalg.mat_vec(Ginv, y)
        c = linalg.solve(B, lam)
        c[0] = c[0] % t
        key_vec = tuple(c)
        if key_vec in seen:
            continue
        seen.add(key_vec)
        lam = linalg.mat_vec(B, c)
        lw = K.pair(lam, omega)
        proj = [x - Fraction(lw, -2 * N) * o for x, o in zip(lam, omega)]
        e = K.norm(proj) / 2
        if e >= prec:
            continue
        key = (K.discriminant.element_of(lam), (int(-lw) % (2 * N),))
        d = out.setdefault(key, {})
        d[e] = d.get(e, 0) + 1
    return out
