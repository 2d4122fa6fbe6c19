"""Rank one and rank two isotropic sublattices and the arrow operators.

For a primitive isotropic ``z`` we build ``K = z^perp / Z z`` and for a
rank two isotropic ``J = span(z, w)`` the definite quotient ``D = J^perp / J``.
Both carry the projection of discriminant classes used throughout.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .lattice import Element, EvenLattice

GroupRingVector = Dict[Element, Fraction]


class CuspError(ValueError):
    """Invalid isotropic data."""


def find_isotropic_primitive(L: EvenLattice, box: int) -> List[Tuple[int, ...]]:
    """Primitive isotropic vectors with coordinates in ``[-box, box]``.

    Each line is reported once, normalized so the first non-zero coordinate
    is positive.
    """
    out = []
    for v in itertools.product(range(-box, box + 1), repeat=L.rank):
        if not any(v):
            continue
        first = next(x for x in v if x)
        if first < 0 or linalg.vec_gcd(v) != 1:
            continue
        if L.norm(v) == 0:
            out.append(tuple(v))
    return out


def _check_primitive_isotropic(L: EvenLattice, z: Sequence[int]) -> None:
    if len(z) != L.rank:
        raise CuspError("vector has wrong length")
    if not any(z):
        raise CuspError("vector is zero")
    if linalg.vec_gcd(z) != 1:
        raise CuspError("vector is not primitive")
    if L.norm(z) != 0:
        raise CuspError("vector is not isotropic")


def _lattice_correction(L: EvenLattice, lam: Sequence[Fraction], isotropic: Sequence[Sequence[int]]):
    """Return ``lam + x`` with ``x in L`` orthogonal to all ``isotropic``, or None."""
    rows = [linalg.mat_vec(L.gram, z) for z in isotropic]
    t = [-linalg.dot(r, lam) for r in rows]
    if any(Fraction(s).denominator != 1 for s in t):
        return None
    x = linalg.solve_integer(rows, [int(s) for s in t])
    if x is None:
        return None
    return [a + b for a, b in zip(lam, x)]


class _Projection:
    """Shared machinery for a projection ``p : Delta_L -> Delta_Q``."""

    ambient: EvenLattice
    quotient: EvenLattice

    def project(self, mu: Element) -> Optional[Element]:
        raise NotImplementedError

    @cached_property
    def projection_table(self) -> Dict[Element, Optional[Element]]:
        return {mu: self.project(mu) for mu in self.ambient.discriminant.elements()}

    def fiber(self, delta: Element) -> List[Element]:
        return [mu for mu, d in self.projection_table.items() if d == delta]

    def up_arrow(self, a: GroupRingVector) -> GroupRingVector:
        """``e_delta -> sum over the fiber of delta``."""
        out: GroupRingVector = {}
        for mu, d in self.projection_table.items():
            if d is not None and a.get(d):
                out[mu] = out.get(mu, Fraction(0)) + Fraction(a[d])
        return {k: v for k, v in out.items() if v}

    def down_arrow(self, b: GroupRingVector) -> GroupRingVector:
        """``e_mu -> e_{p(mu)}`` or zero off the domain of ``p``."""
        out: GroupRingVector = {}
        for mu, c in b.items():
            d = self.projection_table[mu]
            if d is not None and c:
                out[d] = out.get(d, Fraction(0)) + Fraction(c)
        return {k: v for k, v in out.items() if v}


def group_ring_pairing(a: GroupRingVector, b: GroupRingVector) -> Fraction:
    """Bilinear pairing with ``<e_mu, e_nu> = delta_{mu,nu}``."""
    return sum((Fraction(v) * Fraction(b.get(k, 0)) for k, v in a.items()), Fraction(0))


@dataclass(eq=False)
class Rank1CuspData(_Projection):
    """Data attached to a primitive isotropic line ``I = Z z``.

    Attributes:
        ambient: The lattice ``L``.
        z: Primitive isotropic generator of ``I``.
        k_basis: Vectors of ``I^perp`` in ``L`` that map to a basis of ``K``.
        K: The Lorentzian quotient with Gram matrix from ``k_basis``.
        cone_reference: A negative norm vector of ``K`` fixing the cone ``C``.
        label: Free-form identifier.
    """

    ambient: EvenLattice
    z: Tuple[int, ...]
    k_basis: Tuple[Tuple[int, ...], ...]
    K: EvenLattice
    cone_reference: Optional[Tuple[int, ...]]
    label: str = "I"

    @property
    def quotient(self) -> EvenLattice:
        return self.K

    @cached_property
    def _iperp_basis_cols(self) -> List[List[int]]:
        # columns: z, k_1, ..., k_m
        return linalg.transpose([list(self.z)] + [list(k) for k in self.k_basis])

    def to_K(self, x: Sequence) -> List[Fraction]:
        """K coordinates of ``x in I^perp (x) Q`` (the ``z`` part is dropped)."""
        sol = linalg.solve(self._iperp_basis_cols, list(x))
        if sol is None:
            raise CuspError("vector is not orthogonal to I")
        return sol[1:]

    def lift_from_K(self, c: Sequence) -> List[Fraction]:
        n = self.ambient.rank
        out = [Fraction(0)] * n
        for ci, k in zip(c, self.k_basis):
            out = [a + ci * b for a, b in zip(out, k)]
        return out

    @cached_property
    def dual_isotropic_generator(self) -> List[Fraction]:
        """Generator ``z / gcd(G z)`` of ``I_{L*}``."""
        g = linalg.vec_gcd(linalg.mat_vec(self.ambient.gram, self.z))
        return [Fraction(x, g) for x in self.z]

    @property
    def level(self) -> int:
        """``N_I`` with ``I_{L*} = I / N_I``."""
        return linalg.vec_gcd(linalg.mat_vec(self.ambient.gram, self.z))

    def in_L_star_I(self, mu: Element) -> bool:
        lam = self.ambient.discriminant.lift(mu)
        return _lattice_correction(self.ambient, lam, [self.z]) is not None

    def project(self, mu: Element) -> Optional[Element]:
        lam = _lattice_correction(self.ambient, self.ambient.discriminant.lift(mu), [self.z])
        if lam is None:
            return None
        return self.K.discriminant.element_of(self.to_K(lam))

    def p_K(self, mu: Element) -> Optional[Element]:
        return self.projection_table[tuple(mu)]

    def same_negative_cone(self, y: Sequence) -> bool:
        if self.K.norm(y) >= 0:
            raise CuspError("vector does not have negative norm")
        if self.cone_reference is None:
            raise CuspError("no cone reference on this cusp")
        return self.K.pair(y, self.cone_reference) < 0


def _default_cone_reference(K: EvenLattice, box: int = 3) -> Tuple[int, ...]:
    for r in range(1, box + 1):
        for v in itertools.product(range(-r, r + 1), repeat=K.rank):
            if max(abs(x) for x in v) == r and K.norm(v) < 0:
                return tuple(v)
    raise CuspError("no negative norm vector found for the cone reference")


def rank1_data(
    L: EvenLattice,
    z: Sequence[int],
    cone_reference: Optional[Sequence[int]] = None,
    k_basis: Optional[Sequence[Sequence[int]]] = None,
    label: str = "I",
) -> Rank1CuspData:
    """Build ``K = I^perp / I`` for ``I = Z z``.

    Without ``k_basis`` the basis of ``I^perp`` is the saturated kernel of
    ``z^T G`` completed from ``z``; ``k_basis`` may instead pin a model
    (for instance traceless matrices) as long as ``z`` together with it is a
    basis of ``I^perp``.
    """
    z = tuple(int(x) for x in z)
    _check_primitive_isotropic(L, z)
    Gz = linalg.mat_vec(L.gram, z)
    ker = linalg.integer_kernel([Gz])
    if k_basis is None:
        # coordinates of z in the kernel basis, then complete
        cz = linalg.solve(linalg.transpose(ker), list(z))
        cz = [int(t) for t in cz]
        full = linalg.complete_to_basis([cz], len(ker))
        k_basis = [tuple(int(t) for t in linalg.mat_vec(linalg.transpose(ker), row)) for row in full[1:]]
    else:
        k_basis = [tuple(int(t) for t in k) for k in k_basis]
        for k in k_basis:
            if L.pair(k, z) != 0:
                raise CuspError("k_basis vector is not orthogonal to z")
        coords = [linalg.solve(linalg.transpose(ker), list(v)) for v in [z] + list(k_basis)]
        if len(coords) != len(ker) or abs(linalg.determinant(coords)) != 1:
            raise CuspError("z and k_basis do not form a basis of z^perp")
    KG = [[L.pair(a, b) for b in k_basis] for a in k_basis]
    K = EvenLattice(KG, f"K({label})")
    if cone_reference is None and K.signature[1] == 0:
        # only happens outside signature (n, 2); there is no cone to choose
        return Rank1CuspData(L, z, tuple(k_basis), K, None, label)
    if cone_reference is None:
        cone_reference = _default_cone_reference(K)
    cone_reference = tuple(int(x) for x in cone_reference)
    if len(cone_reference) != K.rank or K.norm(cone_reference) >= 0:
        raise CuspError("cone_reference must have negative norm in K")
    return Rank1CuspData(L, z, tuple(k_basis), K, cone_reference, label)


@dataclass(eq=False)
class Rank2CuspData(_Projection):
    """Data attached to a primitive isotropic plane ``J = span(z, w)``."""

    ambient: EvenLattice
    z: Tuple[int, ...]
    w: Tuple[int, ...]
    d_basis: Tuple[Tuple[int, ...], ...]
    D: EvenLattice
    label: str = "J"

    @property
    def quotient(self) -> EvenLattice:
        return self.D

    @property
    def n(self) -> int:
        """``n`` for signature ``(n, 2)``."""
        return self.ambient.signature[0]

    @cached_property
    def _jperp_cols(self) -> List[List[int]]:
        return linalg.transpose([list(self.z), list(self.w)] + [list(d) for d in self.d_basis])

    def to_D(self, x: Sequence) -> List[Fraction]:
        sol = linalg.solve(self._jperp_cols, list(x))
        if sol is None:
            raise CuspError("vector is not orthogonal to J")
        return sol[2:]

    def in_L_star_J(self, mu: Element) -> bool:
        lam = self.ambient.discriminant.lift(mu)
        return _lattice_correction(self.ambient, lam, [self.z, self.w]) is not None

    @cached_property
    def dual_isotropic_basis(self) -> List[List[Fraction]]:
        """Basis of ``J_{L*} = J_Q cap L*``."""
        M = linalg.transpose([linalg.mat_vec(self.ambient.gram, self.z), linalg.mat_vec(self.ambient.gram, self.w)])
        _, Dm, V = linalg.smith_normal_form(M)
        out = []
        for i in range(2):
            a, b = Fraction(V[0][i], Dm[i][i]), Fraction(V[1][i], Dm[i][i])
            out.append([a * s + b * t for s, t in zip(self.z, self.w)])
        return out

    def perpendicular_to_dual_J(self, mu: Element) -> bool:
        """Whether ``mu`` pairs integrally with ``J_{L*}``."""
        lam = self.ambient.discriminant.lift(mu)
        return all(Fraction(self.ambient.pair(lam, g)).denominator == 1 for g in self.dual_isotropic_basis)

    def project(self, mu: Element) -> Optional[Element]:
        lam = _lattice_correction(self.ambient, self.ambient.discriminant.lift(mu), [self.z, self.w])
        if lam is None:
            return None
        return self.D.discriminant.element_of(self.to_D(lam))

    def p_D(self, mu: Element) -> Optional[Element]:
        return self.projection_table[tuple(mu)]


def rank2_data(L: EvenLattice, z: Sequence[int], w: Sequence[int], label: str = "J") -> Rank2CuspData:
    """Build ``D = J^perp / J`` for ``J = span(z, w)``."""
    z = tuple(int(x) for x in z)
    w = tuple(int(x) for x in w)
    _check_primitive_isotropic(L, z)
    if len(w) != L.rank or L.norm(w) != 0 or L.pair(z, w) != 0:
        raise CuspError("z and w do not span an isotropic plane")
    if linalg.rank([z, w]) != 2:
        raise CuspError("z and w are linearly dependent")
    if linalg.saturation_index([z, w]) != 1:
        raise CuspError("span(z, w) is not primitive")
    rows = [linalg.mat_vec(L.gram, z), linalg.mat_vec(L.gram, w)]
    ker = linalg.integer_kernel(rows)
    kerT = linalg.transpose(ker)
    cz = [int(t) for t in linalg.solve(kerT, list(z))]
    cw = [int(t) for t in linalg.solve(kerT, list(w))]
    full = linalg.complete_to_basis([cz, cw], len(ker))
    d_basis = [tuple(int(t) for t in linalg.mat_vec(kerT, row)) for row in full[2:]]
    DG = [[L.pair(a, b) for b in d_basis] for a in d_basis]
    D = EvenLattice(DG, f"D({label})")
    if D.rank and not D.is_positive_definite():
        raise CuspError("J^perp/J is not positive definite; is the signature (n, 2)?")
    return Rank2CuspData(L, z, w, tuple(d_basis), D, label)


def contains_I(r1: Rank1CuspData, r2: Rank2CuspData) -> bool:
    if r1.ambient.gram != r2.ambient.gram:
        return False
    return linalg.solve(linalg.transpose([list(r2.z), list(r2.w)]), list(r1.z)) is not None


def boundary_ray(r1: Rank1CuspData, r2: Rank2CuspData) -> Tuple[int, ...]:
    """Primitive isotropic ``omega_{J,I}`` in ``K`` on the boundary of ``C``.

    A basis ``(z, w')`` of ``J`` is found, the image of ``w'`` in ``K`` is
    taken and its sign chosen so that it pairs negatively with
    ``cone_reference``.
    """
    if not contains_I(r1, r2):
        raise CuspError("I is not contained in J")
    cols = linalg.transpose([list(r2.z), list(r2.w)])
    a, b = (int(t) for t in linalg.solve(cols, list(r1.z)))
    c, d = linalg.complete_to_basis([[a, b]], 2)[1]
    w2 = [c * s + d * t for s, t in zip(r2.z, r2.w)]
    omega = [int(t) for t in r1.to_K(w2)]
    if r1.K.pair(omega, r1.cone_reference) > 0:
        omega = [-t for t in omega]
    return tuple(omega)
