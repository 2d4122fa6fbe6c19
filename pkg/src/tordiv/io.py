"""JSON formats for lattices, expansions, principal parts, fans and workspaces."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Union

from .divisors import CompactificationDatum, GPLUS_CHOICES
from .fan import FanByOrbits, FanError, ray_classify
from .isotropic import CuspError, Rank1CuspData, Rank2CuspData, boundary_ray, contains_I, rank1_data, rank2_data
from .lattice import EvenLattice, LatticeError
from .qseries import PrincipalPart, VVQExpansion


class InputError(ValueError):
    """Malformed or inconsistent input data."""


def parse_rational(x) -> Fraction:
    """Accept ``int``, ``"a/b"`` or ``[a, b]``."""
    try:
        if isinstance(x, bool):
            raise TypeError
        if isinstance(x, (list, tuple)):
            if len(x) != 2:
                raise ValueError
            return Fraction(int(x[0]), int(x[1]))
        if isinstance(x, float):
            raise TypeError
        return Fraction(x)
    except (TypeError, ValueError, ZeroDivisionError):
        raise InputError(f"not an exact rational: {x!r}") from None


def rational_json(x) -> List[int]:
    x = Fraction(x)
    return [x.numerator, x.denominator]


def load_json(path: Union[str, Path]) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def file_hash(path: Union[str, Path]) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        h.update(fh.read())
    return h.hexdigest()


def write_json_atomic(path: Union[str, Path], data: Any) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(data, fh, indent=2, sort_keys=True)
            fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ------------------------------------------------------------ lattices


def lattice_from_json(data: dict) -> EvenLattice:
    if not isinstance(data, dict) or "gram" not in data:
        raise InputError("lattice data needs a 'gram' entry")
    try:
        return EvenLattice.from_json(data)
    except (LatticeError, TypeError, ValueError) as exc:
        raise InputError(f"invalid lattice: {exc}") from None


# ------------------------------------------------------------ expansions


def expansion_from_json(data: dict) -> VVQExpansion:
    try:
        den = int(data["denominator"])
        comps: Dict[tuple, Dict[Fraction, Fraction]] = {}
        for comp in data["components"]:
            key = tuple(int(x) for x in comp["element"])
            t = comps.setdefault(key, {})
            for e_num, c_num, c_den in comp["terms"]:
                e = Fraction(int(e_num), den)
                t[e] = t.get(e, Fraction(0)) + Fraction(int(c_num), int(c_den))
        return VVQExpansion(comps, parse_rational(data["precision"]), parse_rational(data.get("floor", 0)))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"invalid expansion file: {exc}") from None


def expansion_to_json(G: VVQExpansion) -> dict:
    den = G.denominator
    comps = []
    for key in sorted(G.components):
        terms = [
            [int(e * den), c.numerator, c.denominator] for e, c in sorted(G.components[key].items()) if c
        ]
        comps.append({"element": list(key), "terms": terms})
    return {
        "denominator": den,
        "components": comps,
        "precision": rational_json(G.precision),
        "floor": rational_json(G.floor),
    }


def principal_part_from_json(data: dict, step: int = 1) -> PrincipalPart:
    """``{"constant": [[mu, c]], "negative": [[mu, m_num, m_den, c]]}``.

    A missing ``"constant"`` key means the constant terms are unknown.
    """
    try:
        neg = {}
        for mu, m_num, m_den, c in data.get("negative", []):
            key = (tuple(int(x) for x in mu), Fraction(int(m_num), int(m_den)))
            neg[key] = neg.get(key, Fraction(0)) + parse_rational(c)
        const = None
        if "constant" in data:
            const = {}
            for mu, c in data["constant"]:
                const[tuple(int(x) for x in mu)] = parse_rational(c)
        return PrincipalPart(neg, const, step=step)
    except (TypeError, ValueError) as exc:
        raise InputError(f"invalid principal part: {exc}") from None


def principal_part_to_json(F: PrincipalPart) -> dict:
    out = {
        "negative": [
            [list(mu), m.numerator, m.denominator, rational_json(c)] for (mu, m), c in sorted(F.negative.items())
        ]
    }
    if F.constant is not None:
        out["constant"] = [[list(mu), rational_json(c)] for mu, c in sorted(F.constant.items())]
    return out


# ------------------------------------------------------------ workspace


@dataclass
class Workspace:
    lattice: EvenLattice
    datum: CompactificationDatum
    fans: Dict[str, FanByOrbits] = field(default_factory=dict)
    sources: Dict[str, str] = field(default_factory=dict)


def _resolve(obj, base: Path):
    if isinstance(obj, dict) and set(obj) == {"path"}:
        return load_json(base / obj["path"])
    return obj


def workspace_from_json(data: dict, base: Union[str, Path] = ".") -> Workspace:
    """Build and validate a :class:`Workspace`.

    Layout::

        {"lattice": {...} | {"path": ...},
         "cusps": [{"label", "z", "w"?, "cone_reference"?, "k_basis"?, "fan"?}],
         "cusp_space_trivial": bool, "g_plus": "hurwitz" | "gamma0",
         "g_plus_overrides": {"N": expansion | {"path": ...}}}

    A cusp with ``"w"`` is a rank two cusp. Inner rays of a rank one cusp
    come from ``ray_classify`` on its fan.
    """
    base = Path(base)
    if not isinstance(data, dict):
        raise InputError("workspace must be a JSON object")
    L = lattice_from_json(_resolve(data.get("lattice"), base))
    rank1: List[Rank1CuspData] = []
    rank2: List[Rank2CuspData] = []
    fans: Dict[str, FanByOrbits] = {}
    inner: Dict[str, list] = {}
    labels = set()
    try:
        for i, c in enumerate(data.get("cusps", [])):
            c = _resolve(c, base)
            label = c.get("label", f"cusp{i}")
            if label in labels:
                raise InputError(f"duplicate cusp label {label!r}")
            labels.add(label)
            if c.get("lattice") not in (None, L.label):
                raise InputError(f"cusp {label!r} refers to lattice {c.get('lattice')!r}, not {L.label!r}")
            if "w" in c:
                rank2.append(rank2_data(L, c["z"], c["w"], label=label))
                continue
            r1 = rank1_data(L, c["z"], cone_reference=c.get("cone_reference"), k_basis=c.get("k_basis"), label=label)
            rank1.append(r1)
            if "fan" in c:
                fan = FanByOrbits.from_json(_resolve(c["fan"], base))
                if [list(r) for r in fan.lattice.gram] != [list(r) for r in r1.K.gram]:
                    raise InputError(f"fan of cusp {label!r} is not on K = I^perp/I in the chosen basis")
                fans[label] = fan
                inner[label] = [(r.omega, r.orbit_label) for r in ray_classify(fan).inner]
    except (CuspError, FanError, LatticeError, KeyError, TypeError) as exc:
        raise InputError(f"invalid cusp data: {exc}") from None
    choice = data.get("g_plus", "hurwitz")
    if choice not in GPLUS_CHOICES:
        raise InputError(f"g_plus must be one of {GPLUS_CHOICES}")
    overrides = {}
    for N, exp in data.get("g_plus_overrides", {}).items():
        overrides[int(N)] = expansion_from_json(_resolve(exp, base))
    datum = CompactificationDatum(
        L,
        rank1,
        inner,
        rank2,
        cusp_space_trivial=bool(data.get("cusp_space_trivial", False)),
        g_plus_overrides=overrides,
        g_plus_choice=choice,
    )
    try:
        datum.validate()
    except ValueError as exc:
        raise InputError(str(exc)) from None
    for r1 in rank1:
        fan = fans.get(r1.label)
        if fan is None:
            continue
        rays = {boundary_ray(r1, r2) for r2 in rank2 if contains_I(r1, r2)}
        for v in fan.isotropic_ray_reps:
            if v not in rays:
                raise InputError(
                    f"isotropic ray {list(v)} of cusp {r1.label!r} is not the boundary ray of any listed J containing I"
                )
    return Workspace(L, datum, fans)


def load_workspace(path: Union[str, Path]) -> Workspace:
    path = Path(path)
    ws = workspace_from_json(load_json(path), path.parent)
    ws.sources[str(path)] = file_hash(path)
    return ws
