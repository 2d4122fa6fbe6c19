"""Built-in data for ``L = U + U + <2>``, whose modular variety is Siegel's threefold.

``K`` is modelled on traceless matrices ``[[a, b], [c, -a]]`` with
``q = -det``; coordinates are ``(a, b, c)``. The group is ``SL_2(Z)``
acting by conjugation.
"""

from __future__ import annotations

from .divisors import CompactificationDatum
from .fan import SL2_S, SL2_T, FanByOrbits, RationalCone, sl2_conjugation
from .isotropic import Rank1CuspData, Rank2CuspData, boundary_ray, rank1_data, rank2_data
from .lattice import EvenLattice, direct_sum, hyperbolic_plane, rank_one

# basis e1, f1, e2, f2, v
I_VECTOR = (1, 0, 0, 0, 0)
J_SECOND = (0, 0, 1, 0, 0)
K_BASIS = ((0, 0, 0, 0, 1), (0, 0, 1, 0, 0), (0, 0, 0, 1, 0))
CONE_REFERENCE = (1, -2, 2)
OMEGA = (1, -2, 2)

SIGMA = ((0, -1, 0), (0, 0, 1), (1, -1, 1))
SIGMA_HAT_THIRD = (-1, -1, 1)
SIGMA_TILDE = ((0, -1, 0), (0, 0, 1), OMEGA)
TAU = ((0, -1, 0), (0, 0, 1))


def siegel_lattice() -> EvenLattice:
    L = direct_sum(hyperbolic_plane(), hyperbolic_plane(), rank_one(2))
    return EvenLattice(L.gram, "U+U+<2>")


def siegel_rank1(L: EvenLattice = None) -> Rank1CuspData:
    L = L or siegel_lattice()
    return rank1_data(L, I_VECTOR, cone_reference=CONE_REFERENCE, k_basis=K_BASIS, label="I")


def siegel_rank2(L: EvenLattice = None) -> Rank2CuspData:
    L = L or siegel_lattice()
    return rank2_data(L, I_VECTOR, J_SECOND, label="J")


def siegel_group_generators():
    return [sl2_conjugation(SL2_S), sl2_conjugation(SL2_T)]


def siegel_fan(refined: bool = False, word_bound: int = 12) -> FanByOrbits:
    """The fan of translates of ``sigma``, or of ``sigma~`` when ``refined``."""
    r1 = siegel_rank1()
    r2 = siegel_rank2()
    iso = boundary_ray(r1, r2)
    cone = RationalCone(SIGMA_TILDE, "sigma~") if refined else RationalCone(SIGMA, "sigma")
    return FanByOrbits(r1.K, [cone], siegel_group_generators(), CONE_REFERENCE, [iso], word_bound)


def siegel_datum(refined: bool = True, g_plus_choice: str = "hurwitz") -> CompactificationDatum:
    """Boundary data; the refined fan contributes the inner ray ``omega``."""
    L = siegel_lattice()
    r1 = siegel_rank1(L)
    r2 = siegel_rank2(L)
    rays = {"I": [(OMEGA, "rho1")]} if refined else {}
    # S_{3/2}(rho_L) = 0 for this lattice
    return CompactificationDatum(L, [r1], rays, [r2], cusp_space_trivial=True, g_plus_choice=g_plus_choice)
