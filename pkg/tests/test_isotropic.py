from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _catalogue import catalogue
from tordiv import linalg
from tordiv.isotropic import (
    CuspError,
    boundary_ray,
    contains_I,
    find_isotropic_primitive,
    group_ring_pairing,
    rank1_data,
    rank2_data,
)
from tordiv.siegel import CONE_REFERENCE, K_BASIS, siegel_lattice, siegel_rank1, siegel_rank2
from tordiv.weil import weil_matrices

CAT = catalogue()
RANK1 = [(L, r) for L, r1s, _ in CAT for r in r1s]
RANK2 = [(L, r) for L, _, r2s in CAT for r in r2s]


def test_siegel_quotients():
    r1, r2 = siegel_rank1(), siegel_rank2()
    assert [list(r) for r in r1.K.gram] == [[2, 0, 0], [0, 0, 1], [0, 1, 0]]
    assert r1.K.signature == (2, 1)
    assert [list(r) for r in r2.D.gram] == [[2]]
    assert contains_I(r1, r2)
    assert boundary_ray(r1, r2) == (0, -1, 0)
    # both classes lie in L*_I and p_K is an isomorphism onto K*/K
    assert sorted(r1.projection_table.values()) == sorted(r1.K.discriminant.elements())


def test_siegel_traceless_model():
    # (a, b, c) <-> [[a, b], [c, -a]] has norm -2 det
    r1 = siegel_rank1()
    for a, b, c in [(1, 0, 0), (0, 1, 1), (1, -2, 2), (2, 3, -1)]:
        det = -a * a - b * c
        assert r1.K.norm((a, b, c)) == -2 * det
    assert r1.K.norm(CONE_REFERENCE) < 0


@pytest.mark.parametrize("L, r", RANK1, ids=lambda x: getattr(x, "label", None))
def test_rank1_invariants(L, r):
    N = r.level
    disc, dK = L.discriminant, r.K.discriminant
    assert r.K.signature == (L.signature[0] - 1, L.signature[1] - 1)
    assert dK.order * N * N == disc.order
    domain = [mu for mu, d in r.projection_table.items() if d is not None]
    assert len(domain) * N == disc.order
    assert set(d for d in r.projection_table.values() if d is not None) == set(dK.elements())
    assert set(Counter(d for d in r.projection_table.values() if d is not None).values()) == {N}
    for mu in domain:
        assert dK.q(r.p_K(mu)) == disc.q(mu)
        assert r.in_L_star_I(mu)
    assert r.K.norm(r.cone_reference) < 0


@pytest.mark.parametrize("L, r", RANK2, ids=lambda x: getattr(x, "label", None))
def test_rank2_invariants(L, r):
    disc, dD = L.discriminant, r.D.discriminant
    assert r.D.is_positive_definite() and r.D.rank == L.rank - 4
    # |J_{L*} / J| from the coordinates of the dual basis in (z, w)
    cols = linalg.transpose([list(r.z), list(r.w)])
    coords = [linalg.solve(cols, v) for v in r.dual_isotropic_basis]
    index = 1 / abs(linalg.determinant(coords))
    domain = [mu for mu, d in r.projection_table.items() if d is not None]
    sizes = set(Counter(d for d in r.projection_table.values() if d is not None).values())
    assert len(sizes) == 1
    fiber = sizes.pop()
    assert fiber == index
    assert dD.order * fiber * fiber == disc.order
    assert len(domain) * fiber == disc.order
    for mu in domain:
        assert dD.q(r.p_D(mu)) == disc.q(mu)
        assert r.perpendicular_to_dual_J(mu)


def test_boundary_rays_in_catalogue():
    for L, r1s, r2s in CAT:
        for r1 in r1s:
            for r2 in r2s:
                if not contains_I(r1, r2):
                    continue
                w = boundary_ray(r1, r2)
                assert r1.K.norm(w) == 0 and linalg.vec_gcd(w) == 1
                assert r1.K.pair(w, r1.cone_reference) <= 0


def _weil_as_dict(W):
    idx = {g: i for i, g in enumerate(W.elements)}
    return idx


@pytest.mark.parametrize("L, r", RANK1[::5] + RANK2[::5], ids=lambda x: getattr(x, "label", None))
def test_arrows_intertwine_weil_representations(L, r):
    WL = weil_matrices(L.discriminant, L.signature)
    Q = r.quotient
    WQ = weil_matrices(Q.discriminant, Q.signature)
    iL, iQ = _weil_as_dict(WL), _weil_as_dict(WQ)
    for M_L, M_Q in ((WL.rho_T, WQ.rho_T), (WL.rho_S, WQ.rho_S)):
        for delta in WQ.elements:
            # rho_L(g) up(e_delta) versus up(rho_Q(g) e_delta)
            up = r.up_arrow({delta: Fraction(1)})
            lhs = [sum(M_L[iL[mu]][iL[nu]] * float(c) for nu, c in up.items()) for mu in WL.elements]
            image = {d: M_Q[iQ[d]][iQ[delta]] for d in WQ.elements}
            rhs = [0j] * len(WL.elements)
            for d, c in image.items():
                for mu in r.fiber(d):
                    rhs[iL[mu]] += c
            assert max(abs(a - b) for a, b in zip(lhs, rhs)) < 1e-10


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(RANK1 + RANK2), st.data())
def test_arrow_adjointness_random_vectors(pair, data):
    L, r = pair
    els_L = L.discriminant.elements()
    els_Q = r.quotient.discriminant.elements()
    coeff = st.integers(-5, 5).map(Fraction)
    a = {d: data.draw(coeff) for d in els_Q}
    b = {mu: data.draw(coeff) for mu in els_L}
    assert group_ring_pairing(r.up_arrow(a), b) == group_ring_pairing(a, r.down_arrow(b))


def test_rank1_errors():
    L = siegel_lattice()
    with pytest.raises(CuspError):
        rank1_data(L, (1, 1, 0, 0, 0))  # not isotropic
    with pytest.raises(CuspError):
        rank1_data(L, (2, 0, 0, 0, 0))  # not primitive
    with pytest.raises(CuspError):
        rank1_data(L, (0, 0, 0, 0, 0))
    with pytest.raises(CuspError):
        rank1_data(L, (1, 0, 0, 0, 0), k_basis=K_BASIS[:2])
    with pytest.raises(CuspError):
        rank1_data(L, (1, 0, 0, 0, 0), k_basis=K_BASIS, cone_reference=(1, 0, 0))


def test_rank2_errors():
    L = siegel_lattice()
    with pytest.raises(CuspError):
        rank2_data(L, (1, 0, 0, 0, 0), (0, 1, 0, 0, 0))  # (e1, f1) = 1
    with pytest.raises(CuspError):
        rank2_data(L, (1, 0, 0, 0, 0), (2, 0, 0, 0, 0))  # dependent
    with pytest.raises(CuspError):
        rank2_data(L, (1, 0, 1, 0, 0), (1, 0, -1, 0, 0))  # span has index 2 in its saturation


def test_find_isotropic_primitive_is_normalised():
    L = siegel_lattice()
    vs = find_isotropic_primitive(L, 1)
    assert (1, 0, 0, 0, 0) in vs and (0, 1, 0, 0, 0) in vs
    for v in vs:
        assert L.norm(v) == 0 and linalg.vec_gcd(v) == 1
        assert next(x for x in v if x) > 0
