"""Differentials on presented algebras, specified on generators and extended by Leibniz.

A ``DifferentialSpec`` assigns a target to each generator that supports a
differential.  For a divided-power generator ``y`` an assignment with offset
``o`` means ``d(gamma_{o+i}(y)) = w * gamma_i(y)``; offset 1 is the ordinary
derivation rule ``d(gamma_n(y)) = d(y) * gamma_{n-1}(y)``.

A page-``r`` differential moves bidegree (s, t) to (s - r, t + r - 1).  Page 0
is a plain differential of total degree -1 in filtration 0, used for DGAs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .algebra import Element, Kind, Monomial, Presentation, add_into, scale

__all__ = ["Assignment", "DifferentialSpec", "Derivation", "DifferentialError", "shift"]


class DifferentialError(ValueError):
    """A differential violates bidegree, d∘d = 0, or compatibility with relations."""


def shift(r: int) -> tuple[int, int]:
    return (-r, r - 1)


@dataclass(frozen=True)
class Assignment:
    generator: str
    target: str
    offset: int = 1
    unit: int = 1

    def to_json(self) -> dict:
        return {"generator": self.generator, "target": self.target, "offset": self.offset,
                "unit": self.unit}


@dataclass(frozen=True)
class DifferentialSpec:
    page: int
    assignments: tuple[Assignment, ...] = ()
    label: str = ""
    conjectural: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "assignments", tuple(self.assignments))
        if self.page < 0:
            raise ValueError("page must be non-negative")

    @classmethod
    def of(cls, page: int, label: str = "", conjectural: bool = False, **targets: str) -> "DifferentialSpec":
        return cls(page, tuple(Assignment(g, t) for g, t in targets.items()), label, conjectural)

    def rescaled(self, units: Sequence[int]) -> "DifferentialSpec":
        new = tuple(Assignment(a.generator, a.target, a.offset, u) for a, u in zip(self.assignments, units))
        return DifferentialSpec(self.page, new, self.label, self.conjectural)

    def to_json(self) -> dict:
        return {"page": self.page, "label": self.label, "conjectural": self.conjectural,
                "assignments": [a.to_json() for a in self.assignments]}

    @classmethod
    def from_json(cls, d: Mapping) -> "DifferentialSpec":
        return cls(int(d["page"]), tuple(Assignment(a["generator"], a["target"], int(a.get("offset", 1)),
                                                    int(a.get("unit", 1))) for a in d.get("assignments", ())),
                   d.get("label", ""), bool(d.get("conjectural", False)))


class Derivation:
    """Leibniz extension of a ``DifferentialSpec`` to a presentation."""

    def __init__(self, pres: Presentation, spec: DifferentialSpec):
        self.pres = pres
        self.spec = spec
        self.p = pres.p
        self.shift = shift(spec.page)
        self._rules: dict[int, tuple[int, Element]] = {}
        for a in spec.assignments:
            i = pres.index(a.generator)
            g = pres.generators[i]
            if i in self._rules:
                raise DifferentialError(f"two assignments for {a.generator}")
            if a.unit % self.p == 0:
                raise DifferentialError("unit scalars must be nonzero")
            if a.offset < 1 or (a.offset != 1 and g.kind is not Kind.DIVIDED):
                raise DifferentialError(f"offset {a.offset} not allowed on {a.generator}")
            target = scale(pres.reduce(pres.parse(a.target)), a.unit, self.p)
            want = (a.offset * g.filtration + self.shift[0], a.offset * g.degree + self.shift[1])
            for m in target:
                if pres.bidegree(m) != want:
                    raise DifferentialError(
                        f"d({a.generator}) = {a.target}: term {pres.format_monomial(m)} has bidegree "
                        f"{pres.bidegree(m)}, expected {want}")
            self._rules[i] = (a.offset, target)
        self._cache: dict[Monomial, Element] = {}
        self._check_truncations()
        self._check_relations()

    def _piece(self, i: int, e: int) -> Element | None:
        """d of the single factor g_i^e (or gamma_e), as an element; None if no rule."""
        rule = self._rules.get(i)
        if rule is None:
            return None
        offset, target = rule
        g = self.pres.generators[i]
        p = self.p
        if g.kind is Kind.EXTERIOR:
            return target
        if g.kind is Kind.DIVIDED:
            if e < offset:
                return {}
            m = [0] * len(self.pres.generators)
            m[i] = e - offset
            return self.pres.multiply(target, {tuple(m): 1})
        # polynomial / truncated: e * g^(e-1) * d(g)
        if e % p == 0:
            return {}
        m = [0] * len(self.pres.generators)
        m[i] = e - 1
        return scale(self.pres.multiply({tuple(m): 1}, target), e, p)

    def apply_monomial(self, m: Monomial) -> Element:
        if m in self._cache:
            return self._cache[m]
        pres, p = self.pres, self.p
        out: Element = {}
        n = len(m)
        prefix_parity = 0
        for i in range(n):
            e = m[i]
            if not e:
                continue
            piece = self._piece(i, e)
            if piece:
                pre = tuple(m[j] if j < i else 0 for j in range(n))
                post = tuple(m[j] if j > i else 0 for j in range(n))
                term = pres.multiply(pres.multiply({pre: 1}, piece), {post: 1})
                add_into(out, term, -1 if prefix_parity else 1, p)
            prefix_parity ^= (e * pres.generators[i].total) % 2
        out = pres.reduce(out) if pres.has_relations else out
        self._cache[m] = out
        return out

    def apply(self, x: Mapping[Monomial, int]) -> Element:
        out: Element = {}
        for m, c in x.items():
            add_into(out, self.apply_monomial(m), c, self.p)
        return out

    def target_bidegree(self, bideg: tuple[int, int]) -> tuple[int, int]:
        return (bideg[0] + self.shift[0], bideg[1] + self.shift[1])

    def matrix(self, src: Sequence[Monomial], tgt: Sequence[Monomial]) -> np.ndarray:
        """Matrix (rows = tgt, cols = src) of the differential between basis lists."""
        pos = {m: i for i, m in enumerate(tgt)}
        out = np.zeros((len(tgt), len(src)), dtype=np.int64)
        for j, m in enumerate(src):
            for mm, c in self.apply_monomial(m).items():
                if mm not in pos:
                    raise DifferentialError(
                        f"d({self.pres.format_monomial(m)}) leaves the expected bidegree")
                out[pos[mm], j] = c
        return out

    def _check_truncations(self) -> None:
        pres = self.pres
        for i, (offset, target) in self._rules.items():
            g = pres.generators[i]
            if g.kind is not Kind.TRUNCATED or g.height % self.p == 0:
                continue
            m = [0] * len(pres.generators)
            m[i] = g.height - 1
            if pres.multiply({tuple(m): 1}, target):
                raise DifferentialError(
                    f"d({g.name}) is incompatible with {g.name}^{g.height} = 0")

    def _check_relations(self) -> None:
        for rel in self.pres.relation_elements():
            if self.apply(rel):
                raise DifferentialError(f"d does not preserve the relation {self.pres.format(rel)}")

    def check_square_zero(self, D: int) -> None:
        """Assert d(d(m)) = 0 on every basis monomial of total degree <= D."""
        for d in range(D + 1):
            for m in self.pres.basis(d):
                if self.apply(self.apply_monomial(m)):
                    raise DifferentialError(f"d∘d({self.pres.format_monomial(m)}) != 0")
