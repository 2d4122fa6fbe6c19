"""Hurwitz class numbers and the weight 3/2 form ``G_N^+``."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Dict, List, Tuple

from .qseries import VVQExpansion


def _weight(a: int, b: int, c: int) -> Fraction:
    if a == c and b == 0:
        return Fraction(1, 2)
    if a == b == c:
        return Fraction(1, 3)
    return Fraction(1)


@lru_cache(maxsize=None)
def hurwitz_H(d: int) -> Fraction:
    """Hurwitz class number ``H(d)`` with ``H(0) = -1/12``.

    Counts reduced forms ``(a, b, c)`` of discriminant ``-d``: ``|b| <= a <= c``
    with ``b >= 0`` whenever ``|b| = a`` or ``a = c``.
    """
    if d < 0:
        raise ValueError("d must be non-negative")
    if d == 0:
        return Fraction(-1, 12)
    if d % 4 in (1, 2):
        return Fraction(0)
    total = Fraction(0)
    b = d % 2
    while 3 * b * b <= d:
        ac = (b * b + d) // 4
        a = max(b, 1)
        while a * a <= ac:
            if ac % a == 0:
                c = ac // a
                w = _weight(a, b, c)
                if b == 0 or b == a or a == c:
                    total += w
                else:
                    total += 2 * w
            a += 1
        b += 2
    return total


def hurwitz_oracle(d: int) -> Fraction:
    """Brute-force box enumeration of reduced forms, for testing."""
    if d == 0:
        return Fraction(-1, 12)
    total = Fraction(0)
    lim = isqrt(d // 3) + 1 if d >= 3 else 1
    for a in range(1, lim + 1):
        for b in range(-a, a + 1):
            num = b * b + d
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if (abs(b) == a or a == c) and b < 0:
                continue
            total += _weight(a, b, c)
    return total


def _is_prime(N: int) -> bool:
    return N > 1 and all(N % p for p in range(2, isqrt(N) + 1))


def reduced_forms(d: int) -> List[Tuple[int, int, int, Fraction]]:
    """Reduced forms ``(a, b, c)`` of discriminant ``-d`` with their weights."""
    out = []
    if d <= 0 or d % 4 in (1, 2):
        return out
    a = 1
    while 3 * a * a <= d:
        for b in range(-a + 1, a + 1):
            num = b * b + d
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (a == c and b < 0):
                continue
            out.append((a, b, c, _weight(a, b, c)))
        a += 1
    return out


@lru_cache(maxsize=None)
def gamma0_class_numbers(N: int, d: int) -> Dict[int, Fraction]:
    """Weighted counts of ``Gamma_0(N)``-classes of forms ``[Na, b, c]`` of discriminant ``-d``.

    Keyed by ``b mod 2N``. Each ``SL_2(Z)``-class is pulled back along the
    ``N + 1`` cosets of ``Gamma_0(N)`` (one for ``N = 1``).
    """
    if N != 1 and not _is_prime(N):
        raise ValueError("gamma0_class_numbers needs N = 1 or prime N")
    cosets = [(1, 0)] if N == 1 else [(1, v) for v in range(N)] + [(0, 1)]
    out: Dict[int, Fraction] = {}
    for a, b, c, w in reduced_forms(d):
        for u, v in cosets:
            # second column (s, t) with u t - v s = 1
            s, t = (0, 1) if u == 1 else (-1, 0)
            if (a * u * u + b * u * v + c * v * v) % N:
                continue
            B = 2 * a * u * s + b * (u * t + v * s) + 2 * c * v * t
            r = B % (2 * N)
            out[r] = out.get(r, Fraction(0)) + w
    return out


def gamma0_plus(N: int, prec) -> VVQExpansion:
    """A holomorphic part ``G_N^+`` that is modular for every prime ``N``.

    Coefficient ``(1/2) H_{N,r}(d)`` at ``q^{d/4N}`` in component ``(r,)``,
    with ``H_{N,r}`` from :func:`gamma0_class_numbers`, and constant term
    ``-(N+1)/24``. For ``N = 1`` this is :func:`zagier_plus`. The completion
    has shadow ``-sqrt(N)/(8 pi) Theta_N``, checked numerically by
    :func:`tordiv.weil.g_plus_modularity_defect`.
    """
    if N == 1:
        return zagier_plus(1, prec)
    if not _is_prime(N):
        raise ValueError(f"gamma0_plus is only built in for prime N; supply an override for N = {N}")
    prec = Fraction(prec)
    comps: Dict[tuple, Dict[Fraction, Fraction]] = {(0,): {Fraction(0): Fraction(-(N + 1), 24)}}
    d = 1
    while Fraction(d, 4 * N) < prec:
        for r, h in gamma0_class_numbers(N, d).items():
            comps.setdefault((r,), {})[Fraction(d, 4 * N)] = h / 2
        d += 1
    return VVQExpansion(comps, prec, 0)


def zagier_plus(N: int, prec) -> VVQExpansion:
    """Holomorphic part ``G_N^+`` with coefficient ``H(d)`` at ``q^{d/4N}``.

    Component ``(r,)`` collects ``d = -r^2 mod 4N``. Only ``N = 1`` and prime
    ``N`` are built in; other levels need a user-supplied expansion.
    """
    if N < 1:
        raise ValueError("N must be positive")
    if N > 1 and not _is_prime(N):
        raise ValueError(f"G_N^+ is only built in for N = 1 or prime N; supply an override for N = {N}")
    prec = Fraction(prec)
    comps: Dict[tuple, Dict[Fraction, Fraction]] = {}
    d = 0
    while Fraction(d, 4 * N) < prec:
        h = hurwitz_H(d)
        if h:
            for r in range(2 * N):
                if (d + r * r) % (4 * N) == 0:
                    comps.setdefault((r,), {})[Fraction(d, 4 * N)] = h
        d += 1
    return VVQExpansion(comps, prec, 0)
