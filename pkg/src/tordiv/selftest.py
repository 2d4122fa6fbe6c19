"""Oracle suites behind ``tordiv selftest``."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List

from .hurwitz import gamma0_plus, hurwitz_H, hurwitz_oracle, zagier_plus
from .lattice import EvenLattice, direct_sum, naive_short_vectors, rank_one, root_lattice, short_vectors
from .qseries import VVQExpansion
from .theta import theta_definite
from .weil import g_plus_modularity_defect, theta_transformation_defect

THETA_TOL = 1e-8
TAUS = (1j, 2j, (1 + 3j) / 2)


@dataclass
class Check:
    name: str
    passed: bool
    detail: str
    numeric: bool = False

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


def random_definite_gram(rng: random.Random, n: int) -> List[List[int]]:
    """Even, diagonally dominant, hence positive definite."""
    G = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            G[i][j] = G[j][i] = rng.randint(-2, 2)
    for i in range(n):
        off = sum(abs(G[i][j]) for j in range(n) if j != i)
        G[i][i] = 2 * (off // 2 + 1) + 2 * rng.randint(0, 2)
    return G


def check_short_vectors(seed: int, count: int = 20) -> Check:
    rng = random.Random(seed)
    for k in range(count):
        n = rng.randint(1, 4)
        G = random_definite_gram(rng, n)
        bound = rng.randint(1, 20)
        fast = {tuple(v) for v, _ in short_vectors(G, bound)}
        slow = {tuple(v) for v, _ in naive_short_vectors(G, bound)}
        if fast != slow:
            return Check("short vectors vs box oracle", False, f"case {k}: gram {G}, bound {bound}")
    return Check("short vectors vs box oracle", True, f"{count} random Grams")


def check_hurwitz(limit: int = 500) -> Check:
    bad = [d for d in range(limit + 1) if hurwitz_H(d) != hurwitz_oracle(d)]
    pinned = hurwitz_H(0) == Fraction(-1, 12) and hurwitz_H(3) == Fraction(1, 3) and hurwitz_H(4) == Fraction(1, 2)
    ok = not bad and pinned
    return Check("Hurwitz class numbers vs reduced forms", ok, f"d <= {limit}" if ok else f"mismatch at {bad[:5]}")


def theta_test_lattices() -> List[EvenLattice]:
    return [rank_one(2), root_lattice("A2"), direct_sum(rank_one(2), rank_one(2))]


def check_theta_modularity(prec: int = 40, perturb: bool = False) -> Check:
    worst = 0.0
    for D in theta_test_lattices():
        th = theta_definite(D, prec)
        if perturb:
            key = sorted(th.components)[0]
            terms = dict(th.components[key])
            terms[Fraction(1)] = terms.get(Fraction(1), Fraction(0)) + 1
            comps = dict(th.components)
            comps[key] = terms
            th = VVQExpansion(comps, th.precision, th.floor)
        for tau in TAUS:
            worst = max(worst, theta_transformation_defect(D, th, tau))
    return Check("theta S-transformation", worst < THETA_TOL, f"max defect {worst:.2e}", numeric=True)


def check_g_plus(N: int, which: str) -> Check:
    G = gamma0_plus(N, 200) if which == "gamma0" else zagier_plus(N, 200)
    worst = max(g_plus_modularity_defect(G, N, tau) for tau in (1.1j, 0.3 + 1.2j))
    return Check(f"G_{N}^+ ({which}) completion modular", worst < THETA_TOL, f"max defect {worst:.2e}", numeric=True)


def check_siegel() -> Check:
    from .divisors import mult_I_omega_affine, mult_J, siegel_closed_form
    from .siegel import OMEGA, siegel_lattice, siegel_rank1, siegel_rank2

    L = siegel_lattice()
    disc = L.discriminant
    problems = []
    if L.signature != (3, 2) or disc.cyclic_orders != (2,) or disc.q(disc.elements()[1]) != Fraction(1, 4):
        problems.append("discriminant data")
    r2 = siegel_rank2(L)
    for m in range(1, 10):
        want = 4 * m if int(m**0.5) ** 2 == m else 0
        if mult_J(r2, m, (0,)) != want:
            problems.append(f"mult_J({m},0)")
    r1 = siegel_rank1(L)
    for mu, ms in (((0,), (1, 2)), ((1,), (Fraction(1, 4), Fraction(5, 4)))):
        for m in ms:
            a, b = mult_I_omega_affine(r1, OMEGA, m, mu, zagier_plus(3, Fraction(m) + 1), certified=True)
            s, t = siegel_closed_form(r1, OMEGA, m, mu)
            if (-a, -b) != (s, t):
                problems.append(f"closed form m={m} mu={mu}")
    return Check("Siegel example", not problems, ", ".join(problems) or "discriminant, mult_J, closed form")


def run_selftest(quick: bool = False, seed: int = 0, perturb_theta: bool = False) -> List[Check]:
    checks: List[Callable[[], Check]] = [
        lambda: check_short_vectors(seed),
        check_hurwitz,
        check_siegel,
    ]
    if not quick:
        checks += [
            lambda: check_theta_modularity(perturb=perturb_theta),
            lambda: check_g_plus(1, "hurwitz"),
            lambda: check_g_plus(2, "gamma0"),
            lambda: check_g_plus(3, "gamma0"),
        ]
    return [c() for c in checks]


def format_matrix(results: List[Check]) -> str:
    width = max(len(r.name) for r in results)
    return "\n".join(f"{'PASS' if r.passed else 'FAIL'}  {r.name.ljust(width)}  {r.detail}" for r in results)
