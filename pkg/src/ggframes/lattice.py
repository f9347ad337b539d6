"""Subgroups of the finite phase space Z_L x Z_L and their adjoints."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .tfcore import PhasePoint, symplectic_form

__all__ = ["Lattice", "LatticeError", "parse_lattice", "character_sum"]


class LatticeError(ValueError):
    pass


def _closure(L: int, generators) -> list[PhasePoint]:
    """Subgroup of Z_L^2 generated by ``generators`` (breadth-first closure)."""
    gens = [PhasePoint.reduce(g, L) for g in generators]
    seen = {PhasePoint(0, 0)}
    frontier = [PhasePoint(0, 0)]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = PhasePoint((p.k + g.k) % L, (p.l + g.l) % L)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return sorted(seen)


@dataclass(frozen=True)
class Lattice:
    """A subgroup of Z_L x Z_L.

    Use :meth:`separable` for ``aZ_L x bZ_L`` or :meth:`generated` for the
    closure of an arbitrary generator set.  ``points`` are listed in
    lexicographic order (k first, then l).
    """

    L: int
    kind: str
    params: tuple
    points: tuple[PhasePoint, ...] = field(repr=False, compare=False)

    @classmethod
    def separable(cls, L: int, a: int, b: int) -> "Lattice":
        if L < 2:
            raise LatticeError("L must be at least 2")
        if a < 1 or b < 1 or L % a or L % b:
            raise LatticeError(f"separable lattice needs a | L and b | L (L={L}, a={a}, b={b})")
        pts = tuple(PhasePoint(a * i, b * j) for i in range(L // a) for j in range(L // b))
        return cls(L, "separable", (a, b), pts)

    @classmethod
    def generated(cls, L: int, generators) -> "Lattice":
        if L < 2:
            raise LatticeError("L must be at least 2")
        gens = tuple(PhasePoint.reduce(g, L) for g in generators)
        if not gens:
            raise LatticeError("need at least one generator")
        return cls._from_points(L, _closure(L, gens), gens)

    @classmethod
    def full(cls, L: int) -> "Lattice":
        return cls.separable(L, 1, 1)

    @classmethod
    def _from_points(cls, L: int, pts, gens=None) -> "Lattice":
        pts = tuple(sorted(PhasePoint(*p) for p in pts))
        # recognise separable subgroups so that adjoints print in closed form
        ks = {p.k for p in pts}
        ls = {p.l for p in pts}
        if len(ks) * len(ls) == len(pts):
            a = min((k for k in ks if k), default=L)
            b = min((l for l in ls if l), default=L)
            if L % a == 0 and L % b == 0 and len(pts) == (L // a) * (L // b):
                return cls(L, "separable", (a, b), pts)
        if gens is None:
            gens = _minimal_generators(L, pts)
        return cls(L, "general", tuple(gens), pts)

    @property
    def card(self) -> int:
        return len(self.points)

    @property
    def redundancy(self) -> float:
        return self.card / self.L

    @cached_property
    def point_array(self) -> np.ndarray:
        return np.array(self.points, dtype=int).reshape(-1, 2)

    @cached_property
    def _members(self) -> frozenset:
        return frozenset(self.points)

    def __contains__(self, z) -> bool:
        return PhasePoint.reduce(z, self.L) in self._members

    def enumerate(self) -> list[PhasePoint]:
        return list(self.points)

    def mask(self) -> np.ndarray:
        """Boolean L x L indicator of the lattice points."""
        m = np.zeros((self.L, self.L), dtype=bool)
        P = self.point_array
        m[P[:, 0], P[:, 1]] = True
        return m

    def adjoint(self) -> "Lattice":
        """The adjoint lattice {z : sigma(z, lam) = 0 mod L for all lam}."""
        L = self.L
        if self.kind == "separable":
            a, b = self.params
            return Lattice.separable(L, L // b, L // a)
        return Lattice._from_points(L, adjoint_brute_force(self))

    def spec(self) -> str:
        if self.kind == "separable":
            return "sep:{},{}".format(*self.params)
        return "gen:" + ";".join(f"({k},{l})" for k, l in self.params)

    def __str__(self) -> str:
        return self.spec()


def adjoint_brute_force(lat: Lattice) -> list[PhasePoint]:
    L = lat.L
    P = lat.point_array
    out = []
    for k in range(L):
        for l in range(L):
            if np.all((l * P[:, 0] - P[:, 1] * k) % L == 0):
                out.append(PhasePoint(k, l))
    return out


def _minimal_generators(L: int, pts) -> list[PhasePoint]:
    target = len(pts)
    gens: list[PhasePoint] = []
    span = {PhasePoint(0, 0)}
    # greedy by order of element; subgroups of Z_L^2 need at most two generators,
    # so a pair is searched first
    for p in pts:
        if len(_closure(L, [p])) == target:
            return [p]
    for i, p in enumerate(pts):
        for q in pts[i + 1:]:
            if len(_closure(L, [p, q])) == target:
                return [p, q]
    for p in pts:
        if p not in span:
            gens.append(p)
            span = set(_closure(L, gens))
    return gens


def character_sum(lat: Lattice, z) -> complex:
    """sum_{lam in lat} exp(2 pi i sigma(lam, z) / L)."""
    L = lat.L
    k, l = PhasePoint.reduce(z, L)
    P = lat.point_array
    return complex(np.exp(2j * np.pi * ((P[:, 1] * k - l * P[:, 0]) % L) / L).sum())


_SEP = re.compile(r"^sep:\s*(\d+)\s*,\s*(\d+)\s*$")
_PAIR = re.compile(r"\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)")


def parse_lattice(text: str, L: int) -> Lattice:
    """Parse ``sep:a,b`` or ``gen:(k1,l1);(k2,l2)``."""
    text = text.strip()
    m = _SEP.match(text)
    if m:
        return Lattice.separable(L, int(m.group(1)), int(m.group(2)))
    if text.startswith("gen:"):
        body = text[4:]
        pairs = _PAIR.findall(body)
        leftover = _PAIR.sub("", body).replace(";", "").strip()
        if not pairs or leftover:
            raise LatticeError(f"malformed generator list {body!r}")
        return Lattice.generated(L, [(int(a), int(b)) for a, b in pairs])
    raise LatticeError(f"unknown lattice syntax {text!r}; use 'sep:a,b' or 'gen:(k1,l1);(k2,l2)'")
