"""Even lattices, discriminant forms and exact short-vector enumeration."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import floor, isqrt
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg

Element = Tuple[int, ...]


class LatticeError(ValueError):
    """Invalid lattice data."""


def _frac_floor_sqrt(t: Fraction) -> int:
    """Largest integer s with s*s <= t (t >= 0)."""
    if t <= 0:
        return 0
    s = isqrt(t.numerator // t.denominator)
    while (s + 1) * (s + 1) <= t:
        s += 1
    return s


def gram_signature(G: Sequence[Sequence]) -> Tuple[int, int]:
    """Exact signature ``(p, q)`` of a non-degenerate symmetric matrix.

    Symmetric Gaussian elimination over Q. If every remaining diagonal entry
    vanishes, a hyperbolic pair is broken up by replacing ``e_i`` with
    ``e_i + e_j``.
    """
    n = len(G)
    A = [[Fraction(x) for x in row] for row in G]
    if any(A[i][j] != A[j][i] for i in range(n) for j in range(n)):
        raise LatticeError("Gram matrix is not symmetric")
    p = q = 0
    active = list(range(n))
    while active:
        piv = next((i for i in active if A[i][i] != 0), None)
        if piv is None:
            i = active[0]
            j = next((j for j in active if A[i][j] != 0), None)
            if j is None:
                raise LatticeError("Gram matrix is degenerate")
            # e_i -> e_i + e_j gives diagonal 2 A[i][j] != 0
            for k in range(n):
                A[i][k] += A[j][k]
            for k in range(n):
                A[k][i] += A[k][j]
            piv = i
        d = A[piv][piv]
        if d > 0:
            p += 1
        else:
            q += 1
        active.remove(piv)
        for i in active:
            f = A[i][piv] / d
            if f:
                for k in active:
                    A[i][k] -= f * A[piv][k]
        for i in active:
            A[i][piv] = A[piv][i] = Fraction(0)
    return p, q


@dataclass(frozen=True, init=False)
class EvenLattice:
    """An even lattice given by its Gram matrix.

    Attributes:
        gram: Pairings ``(e_i, e_j)`` of the basis vectors.
        label: Free-form identifier.
    """

    gram: Tuple[Tuple[int, ...], ...]
    label: str = ""

    def __init__(self, gram: Sequence[Sequence[int]], label: str = "", *, allow_degenerate: bool = False):
        g = tuple(tuple(int(x) for x in row) for row in gram)
        n = len(g)
        if any(len(row) != n for row in g):
            raise LatticeError("Gram matrix is not square")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(n)):
            raise LatticeError("Gram matrix is not symmetric")
        bad = [i for i in range(n) if g[i][i] % 2]
        if bad:
            raise LatticeError(f"odd diagonal entry at index {bad[0]}: lattice is not even")
        if n and not allow_degenerate and linalg.determinant(g) == 0:
            raise LatticeError("Gram matrix is degenerate")
        object.__setattr__(self, "gram", g)
        object.__setattr__(self, "label", label)

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def signature(self) -> Tuple[int, int]:
        if self.rank == 0:
            return (0, 0)
        return gram_signature(self.gram)

    @cached_property
    def determinant(self) -> int:
        return int(linalg.determinant(self.gram))

    def pair(self, u: Sequence, v: Sequence):
        return linalg.bilinear(self.gram, u, v)

    def norm(self, u: Sequence):
        """``u^2`` (not halved)."""
        return linalg.bilinear(self.gram, u, u)

    def is_positive_definite(self) -> bool:
        return self.signature == (self.rank, 0)

    @cached_property
    def discriminant(self) -> "DiscriminantForm":
        return discriminant_form(self)

    def to_json(self) -> dict:
        return {"label": self.label, "gram": [list(r) for r in self.gram]}

    @classmethod
    def from_json(cls, data: dict) -> "EvenLattice":
        if "gram" not in data:
            raise LatticeError("lattice file lacks 'gram'")
        return cls(data["gram"], data.get("label", ""))


def direct_sum(*lattices: EvenLattice, label: str = "") -> EvenLattice:
    n = sum(L.rank for L in lattices)
    G = [[0] * n for _ in range(n)]
    off = 0
    for L in lattices:
        for i in range(L.rank):
            for j in range(L.rank):
                G[off + i][off + j] = L.gram[i][j]
        off += L.rank
    return EvenLattice(G, label or "+".join(L.label for L in lattices))


def hyperbolic_plane() -> EvenLattice:
    return EvenLattice([[0, 1], [1, 0]], "U")


def rank_one(norm: int) -> EvenLattice:
    return EvenLattice([[norm]], f"<{norm}>")


def root_lattice(kind: str) -> EvenLattice:
    """Cartan matrices of A_n, D_n and E_6, E_7, E_8."""
    t, n = kind[0].upper(), int(kind[1:])
    G = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def link(i, j):
        G[i][j] = G[j][i] = -1

    if t == "A":
        for i in range(n - 1):
            link(i, i + 1)
    elif t == "D":
        for i in range(n - 2):
            link(i, i + 1)
        link(n - 3, n - 1)
    elif t == "E":
        # chain 0-1-...-(n-2) with node n-1 attached to node 2
        for i in range(n - 2):
            link(i, i + 1)
        link(2, n - 1)
    else:
        raise LatticeError(f"unknown root lattice {kind}")
    return EvenLattice(G, kind.upper())


@dataclass(frozen=True)
class DiscriminantForm:
    """The finite quadratic module ``L*/L``.

    Elements are tuples ``a`` with ``0 <= a_i < cyclic_orders[i]``. The
    element ``a`` is represented in ``L*`` by ``sum a_i * gens[i]`` where the
    generators are given in coordinates with respect to the basis of ``L``.
    """

    gram: Tuple[Tuple[int, ...], ...]
    cyclic_orders: Tuple[int, ...]
    gens: Tuple[Tuple[Fraction, ...], ...]
    # maps x in L* (L-coordinates) to integer vector whose entries mod d_i give a
    to_coords: Tuple[Tuple[Fraction, ...], ...]

    @property
    def order(self) -> int:
        out = 1
        for d in self.cyclic_orders:
            out *= d
        return out

    def zero(self) -> Element:
        return tuple(0 for _ in self.cyclic_orders)

    def elements(self) -> List[Element]:
        return [tuple(e) for e in itertools.product(*(range(d) for d in self.cyclic_orders))]

    def add(self, a: Element, b: Element) -> Element:
        return tuple((x + y) % d for x, y, d in zip(a, b, self.cyclic_orders))

    def neg(self, a: Element) -> Element:
        return tuple((-x) % d for x, d in zip(a, self.cyclic_orders))

    def scale(self, k: int, a: Element) -> Element:
        return tuple((k * x) % d for x, d in zip(a, self.cyclic_orders))

    def normalize(self, a: Sequence[int]) -> Element:
        if len(a) != len(self.cyclic_orders):
            raise LatticeError("element has wrong length")
        return tuple(int(x) % d for x, d in zip(a, self.cyclic_orders))

    def lift(self, a: Element) -> List[Fraction]:
        """Representative of ``a`` in ``L*`` (coordinates in the basis of L)."""
        n = len(self.gram)
        v = [Fraction(0)] * n
        for ai, g in zip(a, self.gens):
            if ai:
                v = [x + ai * y for x, y in zip(v, g)]
        return v

    def element_of(self, x: Sequence) -> Element:
        """The class of ``x in L*``; raises if ``x`` is not in the dual."""
        x = [Fraction(t) for t in x]
        if any(Fraction(t).denominator != 1 for t in linalg.mat_vec(self.gram, x)):
            raise LatticeError("vector is not in the dual lattice")
        y = linalg.mat_vec(self.to_coords, x)
        out = []
        for t, d in zip(y, self.cyclic_orders):
            if t.denominator != 1:
                raise LatticeError("internal: non-integral discriminant coordinate")
            out.append(int(t) % d)
        return tuple(out)

    def q(self, a: Element) -> Fraction:
        """``mu^2 / 2 mod 1``."""
        v = self.lift(a)
        return (linalg.bilinear(self.gram, v, v) / 2) % 1

    def b(self, a: Element, c: Element) -> Fraction:
        return Fraction(linalg.bilinear(self.gram, self.lift(a), self.lift(c))) % 1

    def is_self_negative(self, a: Element) -> bool:
        return self.neg(a) == a


def discriminant_form(L: EvenLattice) -> DiscriminantForm:
    """Discriminant form from the Smith decomposition ``U G V = D``.

    ``L* = V D^{-1} Z^n`` so the columns ``V e_i / d_i`` with ``d_i > 1``
    generate ``L*/L``; the coordinate of ``x`` is ``(D V^{-1} x)_i mod d_i``.
    """
    n = L.rank
    if n == 0:
        return DiscriminantForm((), (), (), ())
    if L.determinant == 0:
        raise LatticeError("degenerate lattice")
    _, D, V = linalg.smith_normal_form(L.gram)
    Vinv = linalg.inverse(V)
    gens, orders, rows = [], [], []
    for i in range(n):
        d = D[i][i]
        if d == 1:
            continue
        orders.append(d)
        gens.append(tuple(Fraction(V[k][i], d) for k in range(n)))
        rows.append(tuple(d * x for x in Vinv[i]))
    return DiscriminantForm(L.gram, tuple(orders), tuple(gens), tuple(rows))


def _ldl(G: Sequence[Sequence]) -> Tuple[List[Fraction], List[List[Fraction]]]:
    """``x^T G x = sum_i d_i (x_i + sum_{j>i} m_ij x_j)^2``."""
    n = len(G)
    A = [[Fraction(x) for x in row] for row in G]
    d = [Fraction(0)] * n
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d[i] = A[i][i]
        if d[i] <= 0:
            raise LatticeError("Gram matrix is not positive definite")
        for j in range(i + 1, n):
            m[i][j] = A[i][j] / d[i]
        for j in range(i + 1, n):
            for k in range(i + 1, n):
                A[j][k] -= m[i][j] * A[i][k]
    return d, m


def short_vectors(
    G: Sequence[Sequence],
    bound,
    shift: Optional[Sequence] = None,
) -> List[Tuple[Tuple[Fraction, ...], Fraction]]:
    """All ``beta in shift + Z^n`` with ``beta^T G beta <= 2*bound``.

    Returns ``(beta, beta^2)`` pairs in lexicographic order of ``beta``. The
    enumeration is Fincke-Pohst on an exact rational LDL decomposition.
    ``G`` may have rational entries.
    """
    n = len(G)
    bound = Fraction(bound)
    shift = [Fraction(0)] * n if shift is None else [Fraction(s) for s in shift]
    if n == 0:
        return [((), Fraction(0))] if bound >= 0 else []
    if bound < 0:
        _ldl(G)
        return []
    d, m = _ldl(G)
    R = 2 * bound
    out: List[Tuple[Tuple[Fraction, ...], Fraction]] = []
    x = [Fraction(0)] * n

    def rec(i: int, remaining: Fraction) -> None:
        c = sum((m[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        s = _frac_floor_sqrt(remaining / d[i]) + 1
        # x_i = shift_i + k with |x_i + c| <= s
        lo = -c - s - shift[i]
        hi = -c + s - shift[i]
        k_lo = -floor(-lo)
        k_hi = floor(hi)
        for k in range(k_lo, k_hi + 1):
            xi = shift[i] + k
            t = d[i] * (xi + c) ** 2
            if t > remaining:
                continue
            x[i] = xi
            if i == 0:
                out.append((tuple(x), R - (remaining - t)))
            else:
                rec(i - 1, remaining - t)
        x[i] = Fraction(0)

    rec(n - 1, R)
    out.sort(key=lambda p: p[0])
    return out


def naive_short_vectors(G: Sequence[Sequence], bound, shift: Optional[Sequence] = None):
    """Box-search oracle for :func:`short_vectors`.

    Uses ``|x_i| <= sqrt(2*bound*(G^{-1})_ii)``, the exact extent of the
    ellipsoid along each coordinate.
    """
    n = len(G)
    bound = Fraction(bound)
    shift = [Fraction(0)] * n if shift is None else [Fraction(s) for s in shift]
    if n == 0:
        return [((), Fraction(0))] if bound >= 0 else []
    if bound < 0:
        return []
    Ginv = linalg.inverse(G)
    ranges = []
    for i in range(n):
        r = _frac_floor_sqrt(2 * bound * Ginv[i][i]) + 1
        ranges.append(range(-floor(shift[i]) - r - 1, -floor(shift[i]) + r + 2))
    out = []
    for ks in itertools.product(*ranges):
        v = tuple(s + k for s, k in zip(shift, ks))
        nv = linalg.bilinear(G, v, v)
        if nv <= 2 * bound:
            out.append((v, Fraction(nv)))
    out.sort(key=lambda p: p[0])
    return out


def coset_vectors(L: EvenLattice, coset: Element, max_half_norm) -> List[Tuple[Tuple[Fraction, ...], Fraction]]:
    """Vectors of ``coset + L`` with ``beta^2/2 <= max_half_norm``."""
    disc = L.discriminant
    return short_vectors(L.gram, max_half_norm, disc.lift(coset) if L.rank else None)


def coset_representation_count(L: EvenLattice, coset: Element, target_norm) -> int:
    """``#{beta in coset + L : beta^2 = 2*target_norm}`` for definite ``L``."""
    target_norm = Fraction(target_norm)
    if target_norm < 0:
        return 0
    return sum(1 for _, nv in coset_vectors(L, coset, target_norm) if nv == 2 * target_norm)


def theta_coefficients(L: EvenLattice, prec) -> Dict[Element, Dict[Fraction, int]]:
    """Per coset, the counts ``#{beta : beta^2/2 = e}`` for ``e < prec``."""
    prec = Fraction(prec)
    disc = L.discriminant
    out: Dict[Element, Dict[Fraction, int]] = {}
    for a in disc.elements():
        counts: Dict[Fraction, int] = {}
        for _, nv in coset_vectors(L, a, prec):
            e = nv / 2
            if e < prec:
                counts[e] = counts.get(e, 0) + 1
        out[a] = counts
    return out


def find_isometry_of_forms(
    d1: DiscriminantForm,
    d2: DiscriminantForm,
    sign: int = 1,
) -> Optional[Dict[Element, Element]]:
    """Brute-force group isomorphism ``phi`` with ``q2(phi(x)) = sign*q1(x)``.

    Meant for small groups. Images of the cyclic generators are searched
    exhaustively and the candidate is checked on every element.
    """
    if d1.order != d2.order:
        return None
    els2 = d2.elements()
    gens1 = [tuple(int(i == j) for j in range(len(d1.cyclic_orders))) for i in range(len(d1.cyclic_orders))]
    cands = []
    for g, o in zip(gens1, d1.cyclic_orders):
        cands.append([y for y in els2 if d2.scale(o, y) == d2.zero() and d2.q(y) == (sign * d1.q(g)) % 1])
    for images in itertools.product(*cands):
        phi: Dict[Element, Element] = {}
        ok = True
        for a in d1.elements():
            y = d2.zero()
            for ai, im in zip(a, images):
                y = d2.add(y, d2.scale(ai, im))
            if d2.q(y) != (sign * d1.q(a)) % 1:
                ok = False
                break
            phi[a] = y
        if ok and len(set(phi.values())) == d1.order:
            return phi
    return None
