"""Rational polyhedral cones and fans given by orbit representatives.

Cones live in the coordinate lattice of a Lorentzian lattice ``K``. A fan is
stored as finitely many cone representatives plus integer matrices
generating the group that acts on ``K``; everything that involves the group
is decided by a bounded breadth-first search over words in the generators,
so orbit and stabilizer results are certificates up to ``word_bound``.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from . import linalg
from .lattice import EvenLattice

Vec = Tuple[int, ...]
Mat = Tuple[Tuple[int, ...], ...]


class FanError(ValueError):
    pass


@dataclass(frozen=True)
class RationalCone:
    generators: Tuple[Vec, ...]
    label: str = ""

    def __post_init__(self):
        gens = tuple(tuple(int(x) for x in g) for g in self.generators)
        for g in gens:
            if not linalg.is_primitive(g):
                raise FanError(f"generator {g} of cone {self.label!r} is not primitive")
        for a, b in combinations(gens, 2):
            if linalg.rank([a, b]) < 2 and linalg.dot(a, b) > 0:
                raise FanError(f"cone {self.label!r} has proportional generators {a}, {b}")
        object.__setattr__(self, "generators", gens)

    @property
    def rays(self) -> FrozenSet[Vec]:
        return frozenset(self.generators)

    @property
    def ambient_rank(self) -> Optional[int]:
        return len(self.generators[0]) if self.generators else None

    def transform(self, g: Sequence[Sequence[int]]) -> "RationalCone":
        return RationalCone(tuple(tuple(linalg.mat_vec(g, v)) for v in self.generators), self.label)


def cone_dim(sigma: RationalCone) -> int:
    return linalg.rank(sigma.generators) if sigma.generators else 0


def is_strongly_convex(sigma: RationalCone) -> bool:
    """Exact test for some ``nu`` with ``(nu, omega_j) >= 1`` for every generator."""
    if not sigma.generators:
        return True
    k = len(sigma.generators)
    # variables nu+ (n), nu- (n), slack (k)
    A = []
    for j, w in enumerate(sigma.generators):
        A.append(list(w) + [-x for x in w] + [-1 if i == j else 0 for i in range(k)])
    return linalg.feasible_nonneg(A, [1] * k) is not None


def is_simplicial(sigma: RationalCone) -> bool:
    return len(sigma.generators) == cone_dim(sigma)


def is_smooth(sigma: RationalCone) -> bool:
    if not is_simplicial(sigma):
        return False
    if not sigma.generators:
        return True
    return all(d == 1 for d in linalg.elementary_divisors(sigma.generators))


def faces(sigma: RationalCone) -> List[RationalCone]:
    """All ``2^d`` faces of a simplicial cone, from ``{0}`` up to ``sigma``."""
    if not is_simplicial(sigma):
        raise FanError("faces are only computed for simplicial cones")
    gens = sigma.generators
    out = []
    for k in range(len(gens) + 1):
        for sub in combinations(gens, k):
            out.append(RationalCone(sub, sigma.label if k == len(gens) else ""))
    return out


def contains_point(sigma: RationalCone, y: Sequence) -> bool:
    """Whether ``y`` lies in the simplicial cone ``sigma``."""
    if not sigma.generators:
        return all(x == 0 for x in y)
    coeffs = linalg.solve(linalg.transpose(sigma.generators), list(y))
    return coeffs is not None and all(c >= 0 for c in coeffs)


def _leaves_common_face(s1: RationalCone, s2: RationalCone, common: FrozenSet[Vec]) -> bool:
    """Whether some point of ``s1 & s2`` uses a generator outside ``common``."""
    u = list(s1.generators)
    v = list(s2.generators)
    n = len((u or v)[0])
    for gens, other in ((u, v), (v, u)):
        for i, g in enumerate(gens):
            if g in common:
                continue
            rest = [x for j, x in enumerate(gens) if j != i]
            cols = rest + [[-c for c in x] for x in other]
            A = [[col[r] for col in cols] for r in range(n)] if cols else [[] for _ in range(n)]
            if not cols:
                continue
            if linalg.feasible_nonneg(A, [-c for c in g]) is not None:
                return True
    return False


def intersection_is_common_face(s1: RationalCone, s2: RationalCone) -> bool:
    common = s1.rays & s2.rays
    return not _leaves_common_face(s1, s2, common)


@dataclass
class FanReport:
    ok: bool
    violations: List[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": list(self.violations)}


def fan_validate(cones: Sequence[RationalCone]) -> FanReport:
    """Face closure and pairwise intersections of an explicit finite fan."""
    violations = []
    present = {c.rays for c in cones}
    for c in cones:
        if not is_simplicial(c):
            violations.append(f"cone {c.label or sorted(c.rays)} is not simplicial")
            continue
        if not is_strongly_convex(c):
            violations.append(f"cone {c.label or sorted(c.rays)} is not strongly convex")
        for f in faces(c):
            if f.rays and f.rays not in present:
                violations.append(f"face {sorted(f.rays)} of {c.label or sorted(c.rays)} is missing")
    for a, b in combinations(cones, 2):
        if is_simplicial(a) and is_simplicial(b) and not intersection_is_common_face(a, b):
            violations.append(
                f"cones {a.label or sorted(a.rays)} and {b.label or sorted(b.rays)} meet outside a common face"
            )
    return FanReport(not violations, violations)


# ------------------------------------------------------------ group words


def _as_mat(g) -> Mat:
    return tuple(tuple(int(x) for x in row) for row in g)


def _mul(a: Mat, b: Mat) -> Mat:
    return _as_mat(linalg.mat_mul(a, b))


def _integer_inverse(g: Mat) -> Mat:
    inv = linalg.inverse(g)
    if any(x.denominator != 1 for row in inv for x in row):
        raise FanError("group generator is not invertible over Z")
    return _as_mat([[int(x) for x in row] for row in inv])


def sl2_conjugation(g: Sequence[Sequence[int]]) -> Mat:
    """Action ``M -> g M g^{-1}`` on traceless matrices ``[[a, b], [c, -a]]``.

    Returned as the integer matrix on coordinates ``(a, b, c)``.
    """
    (p, q), (r, s) = g
    if p * s - q * r != 1:
        raise FanError("sl2_conjugation needs determinant 1")
    ginv = ((s, -q), (-r, p))
    cols = []
    for M in (((1, 0), (0, -1)), ((0, 1), (0, 0)), ((0, 0), (1, 0))):
        P = linalg.mat_mul(linalg.mat_mul(g, M), ginv)
        cols.append((P[0][0], P[0][1], P[1][0]))
    return _as_mat(linalg.transpose(cols))


SL2_S = ((0, -1), (1, 0))
SL2_T = ((1, 1), (0, 1))


@dataclass
class FanByOrbits:
    """A possibly infinite fan: orbit representatives plus group generators."""

    lattice: EvenLattice
    cone_orbit_reps: List[RationalCone]
    group_generators: List[Mat]
    cone_reference: Vec
    isotropic_ray_reps: List[Vec] = field(default_factory=list)
    word_bound: int = 12

    def __post_init__(self):
        self.group_generators = [_as_mat(g) for g in self.group_generators]
        self.cone_reference = tuple(int(x) for x in self.cone_reference)
        self.isotropic_ray_reps = [tuple(int(x) for x in v) for v in self.isotropic_ray_reps]
        self._ball: Dict[int, List[Mat]] = {}
        self.validate()

    def validate(self) -> None:
        G = [list(r) for r in self.lattice.gram]
        n = self.lattice.rank
        if self.lattice.norm(self.cone_reference) >= 0:
            raise FanError("cone_reference must have negative norm")
        for g in self.group_generators:
            if len(g) != n or any(len(r) != n for r in g):
                raise FanError("group generator has the wrong size")
            if linalg.mat_mul(linalg.mat_mul(linalg.transpose(g), G), g) != G:
                raise FanError(f"group generator {g} does not preserve the Gram matrix")
            if self.lattice.pair(linalg.mat_vec(g, self.cone_reference), self.cone_reference) >= 0:
                raise FanError(f"group generator {g} swaps the two negative cones")
            _integer_inverse(g)
        for c in self.cone_orbit_reps:
            for v in c.generators:
                if len(v) != n:
                    raise FanError(f"cone {c.label!r} has a generator of the wrong length")
        for v in self.isotropic_ray_reps:
            if self.lattice.norm(v) != 0:
                raise FanError(f"isotropic ray {v} has nonzero norm")

    def in_closed_cone(self, v: Sequence[int]) -> bool:
        """Whether ``v`` lies in the closure of the negative cone ``C``."""
        return self.lattice.norm(v) <= 0 and self.lattice.pair(v, self.cone_reference) <= 0

    def group_ball(self, word_bound: Optional[int] = None) -> List[Mat]:
        """Distinct matrices given by words of length at most ``word_bound``."""
        b = self.word_bound if word_bound is None else word_bound
        if b in self._ball:
            return self._ball[b]
        n = self.lattice.rank
        G = [list(r) for r in self.lattice.gram]
        letters = []
        for g in self.group_generators:
            for h in (g, _integer_inverse(g)):
                if h not in letters:
                    letters.append(h)
        ident = _as_mat(linalg.identity(n))
        seen = {ident: 0}
        order = [ident]
        queue = deque([ident])
        while queue:
            x = queue.popleft()
            if seen[x] >= b:
                continue
            for h in letters:
                y = _mul(x, h)
                if y not in seen:
                    assert linalg.mat_mul(linalg.mat_mul(linalg.transpose(y), G), y) == G
                    seen[y] = seen[x] + 1
                    order.append(y)
                    queue.append(y)
        self._ball[b] = order
        return order

    def all_cones(self) -> List[RationalCone]:
        """Representatives together with all of their faces (nonzero)."""
        out, seen = [], set()
        for c in self.cone_orbit_reps:
            for f in faces(c):
                if f.rays and f.rays not in seen:
                    seen.add(f.rays)
                    out.append(f)
        return out

    @staticmethod
    def from_json(data: dict) -> "FanByOrbits":
        lat = EvenLattice(data["gram"], data.get("lattice", "K"))
        cones = [RationalCone(tuple(tuple(v) for v in c["generators"]), c.get("label", "")) for c in data["cones"]]
        return FanByOrbits(
            lat,
            cones,
            [_as_mat(g) for g in data.get("group_generators", [])],
            tuple(data["cone_reference"]),
            [tuple(v) for v in data.get("isotropic_rays", [])],
            int(data.get("word_bound", 12)),
        )

    def to_json(self) -> dict:
        return {
            "lattice": self.lattice.label,
            "gram": [list(r) for r in self.lattice.gram],
            "cone_reference": list(self.cone_reference),
            "group_generators": [[list(r) for r in g] for g in self.group_generators],
            "isotropic_rays": [list(v) for v in self.isotropic_ray_reps],
            "cones": [{"label": c.label, "generators": [list(v) for v in c.generators]} for c in self.cone_orbit_reps],
            "word_bound": self.word_bound,
        }


@dataclass
class StabilizerResult:
    elements: List[Mat]
    order: Optional[int]
    complete: bool


def stabilizer(sigma: RationalCone, fan: FanByOrbits, word_bound: Optional[int] = None) -> StabilizerResult:
    """Group words up to ``word_bound`` mapping ``sigma`` onto itself.

    ``order`` is reported only when the found set is closed under
    composition; otherwise ``complete`` is ``False``.
    """
    rays = sigma.rays
    found = [g for g in fan.group_ball(word_bound) if sigma.transform(g).rays == rays]
    fs = set(found)
    closed = all(_mul(a, b) in fs for a in found for b in found)
    return StabilizerResult(found, len(found) if closed else None, closed)


def _union_find(n: int):
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        a, b = find(i), find(j)
        if a != b:
            parent[max(a, b)] = min(a, b)

    return find, union


def orbit_classify(
    cones: Sequence[RationalCone], fan: FanByOrbits, word_bound: Optional[int] = None
) -> List[List[int]]:
    """Partition of ``cones`` (by index) into orbits found by the word search.

    Classes are sorted by their smallest index.
    """
    index = {}
    for i, c in enumerate(cones):
        index.setdefault(c.rays, []).append(i)
    find, union = _union_find(len(cones))
    for i, c in enumerate(cones):
        for g in fan.group_ball(word_bound):
            for j in index.get(c.transform(g).rays, []):
                union(i, j)
    classes: Dict[int, List[int]] = {}
    for i in range(len(cones)):
        classes.setdefault(find(i), []).append(i)
    return sorted(classes.values())


@dataclass
class RayDatum:
    omega: Vec
    kind: str  # "inner" or "isotropic"
    N: Optional[int]
    orbit_label: str

    def to_json(self) -> dict:
        return {"omega": list(self.omega), "kind": self.kind, "N": self.N, "orbit_label": self.orbit_label}


@dataclass
class RayClassification:
    rays: List[RayDatum]
    mismatches: List[str]

    @property
    def inner(self) -> List[RayDatum]:
        return [r for r in self.rays if r.kind == "inner"]

    @property
    def isotropic(self) -> List[RayDatum]:
        return [r for r in self.rays if r.kind == "isotropic"]


def ray_classify(fan: FanByOrbits, word_bound: Optional[int] = None) -> RayClassification:
    """One :class:`RayDatum` per orbit of rays of the fan.

    Raises :class:`FanError` for a negative norm ray on the wrong cone or a
    positive norm ray. Isotropic orbits that match no declared isotropic ray
    are listed as mismatches.
    """
    rays: List[Vec] = []
    for c in fan.cone_orbit_reps:
        for v in c.generators:
            if v not in rays:
                rays.append(v)
    K = fan.lattice
    for v in rays:
        n2 = K.norm(v)
        if n2 > 0:
            raise FanError(f"ray {v} has positive norm and cannot lie in the closed cone")
        if not fan.in_closed_cone(v):
            raise FanError(f"ray {v} lies on the wrong cone component")
        if n2 < 0 and n2 % 2:
            raise FanError(f"ray {v} has odd norm")
    cones = [RationalCone((v,)) for v in rays]
    classes = orbit_classify(cones, fan, word_bound)
    ball = fan.group_ball(word_bound)
    out, mismatches = [], []
    n_inner = n_iso = 0
    for cls in classes:
        v = rays[cls[0]]
        n2 = K.norm(v)
        if n2 < 0:
            n_inner += 1
            out.append(RayDatum(v, "inner", -n2 // 2, f"rho{n_inner}"))
        else:
            n_iso += 1
            out.append(RayDatum(v, "isotropic", None, f"iso{n_iso}"))
            orbit = {tuple(linalg.mat_vec(g, v)) for g in ball}
            if not any(w in orbit for w in fan.isotropic_ray_reps):
                mismatches.append(f"isotropic ray {v} matches no declared boundary ray within the word bound")
    return RayClassification(out, mismatches)


def _sample_point(fan: FanByOrbits, rng: random.Random, box: int = 6) -> List[int]:
    ref = fan.cone_reference
    K = fan.lattice
    while True:
        x = [rng.randint(-box, box) for _ in ref]
        for k in range(0, 200):
            y = [a + k * r for a, r in zip(x, ref)]
            if K.norm(y) < 0 and K.pair(y, ref) < 0:
                return y


def _height(fan: FanByOrbits, y: Sequence[int]) -> int:
    return abs(fan.lattice.pair(y, fan.cone_reference))


def reduce_point(fan: FanByOrbits, y: Sequence[int], move_bound: int = 3, max_steps: int = 10_000) -> List[int]:
    """Greedy descent of the height ``|(y, cone_reference)|``.

    Moves are the group words of length at most ``move_bound``; single
    generators alone can stall before reaching the cones around the
    reference point. Among all decreasing moves the smallest resulting
    ``(height, y)`` wins, so the result is deterministic.
    """
    letters = fan.group_ball(move_bound)[1:]
    y = list(y)
    for _ in range(max_steps):
        h = _height(fan, y)
        best = None
        for g in letters:
            z = linalg.mat_vec(g, y)
            key = (_height(fan, z), z)
            if key[0] < h and (best is None or key < best):
                best = key
        if best is None:
            return y
        y = best[1]
    return y


@dataclass
class AdmissibilityReport:
    invariance: FanReport
    coverage_failures: List[List[int]]
    samples: int
    seed: int
    ray_mismatches: List[str]
    certificate: str = "bounded word search and sampling, not a proof"

    @property
    def ok(self) -> bool:
        return self.invariance.ok and not self.coverage_failures and not self.ray_mismatches

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "invariance": self.invariance.to_json(),
            "coverage": {
                "samples": self.samples,
                "seed": self.seed,
                "failures": [list(map(int, p)) for p in self.coverage_failures],
            },
            "ray_mismatches": list(self.ray_mismatches),
            "certificate": self.certificate,
        }


def local_fan_check(fan: FanByOrbits, word_bound: Optional[int] = None) -> FanReport:
    """Translates of representatives by found elements meet in common faces."""
    violations = []
    reps = fan.cone_orbit_reps
    ball = fan.group_ball(word_bound)
    for c in reps:
        if not is_simplicial(c):
            violations.append(f"cone {c.label!r} is not simplicial")
        elif not is_strongly_convex(c):
            violations.append(f"cone {c.label!r} is not strongly convex")
    if violations:
        return FanReport(False, violations)
    seen = set()
    for a in reps:
        for b in reps:
            for g in ball:
                t = b.transform(g)
                key = (a.rays, t.rays)
                if key in seen or a.rays == t.rays:
                    continue
                seen.add(key)
                if not intersection_is_common_face(a, t):
                    violations.append(
                        f"cone {a.label!r} and a translate of {b.label!r} meet outside a common face"
                    )
    return FanReport(not violations, violations)


def admissibility_report(
    fan: FanByOrbits, samples: int = 200, seed: int = 0, word_bound: Optional[int] = None, translate_bound: int = 4
) -> AdmissibilityReport:
    """Invariance, sampled coverage of ``C`` and isotropic ray matching.

    Sampled points are reduced by :func:`reduce_point` and then looked up in
    translates of the representatives by words of length at most
    ``translate_bound``.
    """
    invariance = local_fan_check(fan, min(translate_bound, word_bound or fan.word_bound))
    rng = random.Random(seed)
    translates = []
    seen = set()
    for g in fan.group_ball(translate_bound):
        for c in fan.cone_orbit_reps:
            t = c.transform(g)
            if t.rays not in seen:
                seen.add(t.rays)
                translates.append(t)
    failures = []
    for _ in range(samples):
        y = reduce_point(fan, _sample_point(fan, rng))
        if not any(contains_point(t, y) for t in translates):
            failures.append(y)
    rays = ray_classify(fan, word_bound)
    return AdmissibilityReport(invariance, failures, samples, seed, rays.mismatches)


def ord_along_ray(nu: Sequence[int], omega: Sequence[int]) -> int:
    """Order of the character ``z_nu`` along the divisor of the ray ``omega``."""
    if not linalg.is_primitive(omega):
        raise FanError("omega must be primitive")
    return int(linalg.dot(nu, omega))


def dual_basis_smooth_cone(sigma: RationalCone) -> List[Vec]:
    """``kappa_i`` in the dual lattice with ``(kappa_i, omega_j) = delta_ij``."""
    if not is_smooth(sigma):
        raise FanError("dual basis needs a smooth cone")
    n = len(sigma.generators[0])
    B = linalg.complete_to_basis(sigma.generators, n)
    inv = linalg.inverse(linalg.transpose(B))
    out = []
    for i in range(len(sigma.generators)):
        row = inv[i]
        out.append(tuple(int(x) for x in row))
    return out


def orbit_dim(sigma: RationalCone, lattice_rank: int) -> int:
    return lattice_rank - cone_dim(sigma)
