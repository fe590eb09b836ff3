"""Graded-commutative algebras over F_p given by generators and relations.

A presentation is a tensor product of polynomial, exterior, divided-power and
truncated polynomial pieces, optionally divided by homogeneous relations.
Monomials are exponent tuples aligned with the generator list; for a
divided-power generator the exponent ``n`` stands for the basis class
``gamma_n``, not the n-th power.

Elements are plain dicts ``{monomial: coefficient}`` with coefficients in
``[1, p)``.  Signs follow the Koszul rule on total degree.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .fp import PrimeField, lucas_binomial, rref

Monomial = tuple[int, ...]
Element = dict[Monomial, int]

__all__ = [
    "Kind",
    "Generator",
    "Presentation",
    "PoincareSeries",
    "Monomial",
    "Element",
    "poly",
    "ext",
    "dpow",
    "trunc",
    "add_into",
    "scale",
    "basis_up_to",
    "multiply",
    "poincare",
]

_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_']*$")


class Kind(str, Enum):
    POLYNOMIAL = "polynomial"
    EXTERIOR = "exterior"
    DIVIDED = "divided_power"
    TRUNCATED = "truncated"


@dataclass(frozen=True)
class Generator:
    """One algebra generator; ``degree`` is the internal degree."""

    name: str
    degree: int
    filtration: int = 0
    kind: Kind = Kind.POLYNOMIAL
    height: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", Kind(self.kind))
        if not _NAME.match(self.name):
            raise ValueError(f"bad generator name {self.name!r}")
        if self.degree < 0 or self.filtration < 0 or self.total <= 0:
            raise ValueError(f"{self.name}: degrees must be non-negative with positive total")
        if self.kind is Kind.TRUNCATED:
            if self.height is None or self.height < 2:
                raise ValueError(f"{self.name}: truncated generators need height >= 2")
        elif self.height is not None:
            raise ValueError(f"{self.name}: height only applies to truncated generators")

    @property
    def total(self) -> int:
        return self.degree + self.filtration

    @property
    def bidegree(self) -> tuple[int, int]:
        return (self.filtration, self.degree)

    @property
    def max_exponent(self) -> int | None:
        if self.kind is Kind.EXTERIOR:
            return 1
        if self.kind is Kind.TRUNCATED:
            return self.height - 1
        return None

    def to_json(self) -> dict:
        out = {"name": self.name, "degree": self.degree, "filtration": self.filtration,
               "kind": self.kind.value}
        if self.height is not None:
            out["height"] = self.height
        return out

    @classmethod
    def from_json(cls, d: Mapping) -> "Generator":
        return cls(d["name"], int(d["degree"]), int(d.get("filtration", 0)), Kind(d["kind"]),
                   d.get("height"))


def poly(name: str, degree: int, filtration: int = 0) -> Generator:
    return Generator(name, degree, filtration, Kind.POLYNOMIAL)


def ext(name: str, degree: int, filtration: int = 0) -> Generator:
    return Generator(name, degree, filtration, Kind.EXTERIOR)


def dpow(name: str, degree: int, filtration: int = 0) -> Generator:
    return Generator(name, degree, filtration, Kind.DIVIDED)


def trunc(name: str, degree: int, height: int, filtration: int = 0) -> Generator:
    return Generator(name, degree, filtration, Kind.TRUNCATED, height)


def add_into(acc: Element, el: Mapping[Monomial, int], c: int, p: int) -> Element:
    """acc += c * el, in place."""
    for m, v in el.items():
        w = (acc.get(m, 0) + c * v) % p
        if w:
            acc[m] = w
        else:
            acc.pop(m, None)
    return acc


def scale(el: Mapping[Monomial, int], c: int, p: int) -> Element:
    c %= p
    if not c:
        return {}
    return {m: v * c % p for m, v in el.items()}


@dataclass(frozen=True)
class PoincareSeries:
    dims: tuple[int, ...]

    def __getitem__(self, n: int) -> int:
        return self.dims[n]

    def __len__(self) -> int:
        return len(self.dims)

    def nonzero(self) -> dict[int, int]:
        return {n: d for n, d in enumerate(self.dims) if d}

    def to_json(self) -> list[int]:
        return list(self.dims)


@dataclass(frozen=True, eq=False)
class Presentation:
    """Free graded-commutative algebra on ``generators`` modulo ``relations``.

    Relations may be given as strings (``"e*c + x*d"``) or as element dicts.
    """

    p: int
    generators: tuple[Generator, ...]
    relations: tuple = ()
    name: str = ""
    _rel_elems: tuple = field(default=(), init=False, repr=False)

    def __post_init__(self) -> None:
        field_ = PrimeField(self.p)
        object.__setattr__(self, "p", field_.p)
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            raise ValueError("generator names must be unique")
        if self.p % 2:
            for g in gens:
                odd = g.total % 2 == 1
                if (g.kind is Kind.EXTERIOR) != odd:
                    raise ValueError(
                        f"{g.name}: exterior generators must have odd total degree and "
                        f"the other kinds even total degree (p odd)")
        rels = []
        for r in self.relations:
            el = self.parse(r) if isinstance(r, str) else {tuple(m): int(c) % self.p for m, c in dict(r).items()}
            el = {m: c for m, c in el.items() if c}
            if not el:
                continue
            bidegs = {self.bidegree(m) for m in el}
            if len({self.degree(m) for m in el}) != 1:
                raise ValueError(f"relation {r!r} is not homogeneous")
            if len(bidegs) != 1:
                raise ValueError(f"relation {r!r} is not bihomogeneous")
            if self.degree(next(iter(el))) == 0:
                raise ValueError("relations in degree 0 are not supported")
            rels.append(el)
        object.__setattr__(self, "_rel_elems", tuple(rels))
        object.__setattr__(self, "relations",
                           tuple(self.format(el) for el in rels))

    # -- basic data -------------------------------------------------------

    @property
    def field(self) -> PrimeField:
        return PrimeField(self.p)

    @cached_property
    def _index(self) -> dict[str, int]:
        return {g.name: i for i, g in enumerate(self.generators)}

    @cached_property
    def _totals(self) -> tuple[int, ...]:
        return tuple(g.total for g in self.generators)

    @cached_property
    def _odd(self) -> tuple[int, ...]:
        return tuple(g.total % 2 for g in self.generators)

    @cached_property
    def _kinds(self) -> tuple[Kind, ...]:
        return tuple(g.kind for g in self.generators)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"no generator named {name!r}") from None

    def generator(self, name: str) -> Generator:
        return self.generators[self.index(name)]

    @property
    def unit(self) -> Monomial:
        return (0,) * len(self.generators)

    @property
    def has_relations(self) -> bool:
        return bool(self._rel_elems)

    def relation_elements(self) -> tuple[Element, ...]:
        return self._rel_elems

    def degree(self, m: Monomial) -> int:
        return sum(e * t for e, t in zip(m, self._totals))

    def bidegree(self, m: Monomial) -> tuple[int, int]:
        s = t = 0
        for e, g in zip(m, self.generators):
            if e:
                s += e * g.filtration
                t += e * g.degree
        return (s, t)

    def parity(self, m: Monomial) -> int:
        return sum(e * o for e, o in zip(m, self._odd)) % 2

    def is_admissible(self, m: Monomial) -> bool:
        if len(m) != len(self.generators):
            return False
        for e, g in zip(m, self.generators):
            if e < 0:
                return False
            cap = g.max_exponent
            if cap is not None and e > cap:
                return False
        return True

    def check(self, m: Monomial) -> Monomial:
        m = tuple(int(e) for e in m)
        if not self.is_admissible(m):
            raise ValueError(f"inadmissible monomial {m}")
        return m

    def monomial(self, **exps: int) -> Monomial:
        m = [0] * len(self.generators)
        for k, v in exps.items():
            m[self.index(k)] = v
        return self.check(tuple(m))

    def gen(self, name: str, exponent: int = 1) -> Element:
        m = [0] * len(self.generators)
        m[self.index(name)] = exponent
        return {self.check(tuple(m)): 1}

    def one(self) -> Element:
        return {self.unit: 1}

    # -- multiplication ---------------------------------------------------

    def mul_monomials(self, m1: Monomial, m2: Monomial) -> tuple[int, Monomial] | None:
        """Product in the free algebra: ``(coefficient, monomial)`` or None for zero."""
        p = self.p
        coef = 1
        out = list(m1)
        odd = self._odd
        # sign: every odd factor of m2 moves left past the odd factors of m1 with larger index
        sign = 0
        later_odd = 0
        for i in range(len(m1) - 1, -1, -1):
            b = m2[i]
            if b and odd[i] and b % 2 and later_odd:
                sign += later_odd
            a = m1[i]
            if a and odd[i] and a % 2:
                later_odd += 1
        for i, (a, b) in enumerate(zip(m1, m2)):
            if not b:
                continue
            if not a:
                out[i] = b
                continue
            kind = self._kinds[i]
            if kind is Kind.EXTERIOR:
                return None
            s = a + b
            if kind is Kind.TRUNCATED:
                if s >= self.generators[i].height:
                    return None
            elif kind is Kind.DIVIDED:
                coef = coef * lucas_binomial(s, a, p) % p
                if not coef:
                    return None
            elif odd[i] and a % 2 and b % 2:
                # odd polynomial generator (only possible at p = 2): x*x = -x*x
                sign += 1
            out[i] = s
        if sign % 2:
            coef = -coef % p
        return coef, tuple(out)

    def multiply(self, x: Mapping[Monomial, int], y: Mapping[Monomial, int]) -> Element:
        """Product of two elements, reduced to the quotient basis."""
        p = self.p
        acc: Element = {}
        for m1, c1 in x.items():
            for m2, c2 in y.items():
                r = self.mul_monomials(m1, m2)
                if r is None:
                    continue
                c, m = r
                w = (acc.get(m, 0) + c * c1 * c2) % p
                if w:
                    acc[m] = w
                else:
                    acc.pop(m, None)
        return self.reduce(acc) if self._rel_elems else acc

    def product(self, *elements: Mapping[Monomial, int]) -> Element:
        acc = self.one()
        for el in elements:
            acc = self.multiply(acc, el)
        return acc

    def power(self, x: Mapping[Monomial, int], n: int) -> Element:
        acc = self.one()
        for _ in range(n):
            acc = self.multiply(acc, x)
        return acc

    # -- bases ------------------------------------------------------------

    @cached_property
    def _free_cache(self) -> dict[int, list[Monomial]]:
        return {}

    def free_basis(self, d: int) -> list[Monomial]:
        """Admissible monomials of total degree exactly ``d``, in ascending lex order."""
        if d < 0:
            return []
        cache = self._free_cache
        if d not in cache:
            cache[d] = sorted(self._enumerate(d))
        return cache[d]

    def _enumerate(self, d: int) -> Iterable[Monomial]:
        gens = self.generators
        n = len(gens)
        cur = [0] * n

        def rec(i: int, rem: int):
            if i == n:
                if rem == 0:
                    yield tuple(cur)
                return
            t = gens[i].total
            cap = gens[i].max_exponent
            top = rem // t
            if cap is not None:
                top = min(top, cap)
            for e in range(top + 1):
                cur[i] = e
                yield from rec(i + 1, rem - e * t)
            cur[i] = 0

        return rec(0, d)

    @cached_property
    def _quot_cache(self) -> dict[int, tuple]:
        return {}

    def _quotient_data(self, d: int) -> tuple:
        """(free basis, index, rref rows, pivots, quotient-basis positions) in degree d."""
        cache = self._quot_cache
        if d in cache:
            return cache[d]
        free = self.free_basis(d)
        index = {m: i for i, m in enumerate(free)}
        rows = []
        for rel in self._rel_elems:
            dr = self.degree(next(iter(rel)))
            if dr > d:
                continue
            for m in self.free_basis(d - dr):
                v = np.zeros(len(free), dtype=np.int64)
                for rm, c in rel.items():
                    r = self.mul_monomials(m, rm)
                    if r is not None:
                        v[index[r[1]]] = (v[index[r[1]]] + r[0] * c) % self.p
                if v.any():
                    rows.append(v)
        if rows:
            red, piv = rref(np.array(rows), self.p)
        else:
            red, piv = np.zeros((0, len(free)), dtype=np.int64), []
        pivset = set(piv)
        keep = [i for i in range(len(free)) if i not in pivset]
        cache[d] = (free, index, red, piv, keep)
        return cache[d]

    def basis(self, d: int) -> list[Monomial]:
        """Basis of the degree-``d`` part (standard monomials for quotients)."""
        if not self._rel_elems:
            return self.free_basis(d)
        free, _, _, _, keep = self._quotient_data(d)
        return [free[i] for i in keep]

    def basis_up_to(self, D: int) -> list[list[Monomial]]:
        if D < 0:
            raise ValueError("degree bound must be non-negative")
        return [self.basis(d) for d in range(D + 1)]

    def bigraded_basis(self, D: int) -> dict[tuple[int, int], list[Monomial]]:
        out: dict[tuple[int, int], list[Monomial]] = {}
        for d in range(D + 1):
            for m in self.basis(d):
                out.setdefault(self.bidegree(m), []).append(m)
        return out

    def poincare(self, D: int) -> PoincareSeries:
        if D < 0:
            raise ValueError("degree bound must be non-negative")
        return PoincareSeries(tuple(len(self.basis(d)) for d in range(D + 1)))

    def reduce(self, x: Mapping[Monomial, int]) -> Element:
        """Normal form modulo the relations (identity for free presentations)."""
        if not self._rel_elems:
            return {m: c % self.p for m, c in x.items() if c % self.p}
        by_deg: dict[int, list] = {}
        for m, c in x.items():
            if c % self.p:
                by_deg.setdefault(self.degree(m), []).append((m, c))
        out: Element = {}
        for d, terms in by_deg.items():
            free, index, red, piv, keep = self._quotient_data(d)
            v = np.zeros(len(free), dtype=np.int64)
            for m, c in terms:
                v[index[m]] = (v[index[m]] + c) % self.p
            for j, col in enumerate(piv):
                if v[col]:
                    v = (v - v[col] * red[j]) % self.p
            for i in keep:
                if v[i]:
                    out[free[i]] = int(v[i])
        return out

    def is_zero(self, x: Mapping[Monomial, int]) -> bool:
        return not self.reduce(x)

    def coords(self, x: Mapping[Monomial, int], d: int) -> np.ndarray:
        """Coordinate vector of a degree-``d`` element in ``basis(d)``."""
        basis = self.basis(d)
        pos = self._basis_pos(d)
        v = np.zeros(len(basis), dtype=np.int64)
        for m, c in self.reduce(x).items():
            if self.degree(m) != d:
                raise ValueError(f"term {self.format_monomial(m)} not in degree {d}")
            v[pos[m]] = (v[pos[m]] + c) % self.p
        return v

    def _basis_pos(self, d: int) -> dict[Monomial, int]:
        cache = self.__dict__.setdefault("_pos_cache", {})
        if d not in cache:
            cache[d] = {m: i for i, m in enumerate(self.basis(d))}
        return cache[d]

    def element(self, basis: Sequence[Monomial], v: Sequence[int]) -> Element:
        return {m: int(c) % self.p for m, c in zip(basis, v) if int(c) % self.p}

    # -- construction helpers ---------------------------------------------

    def tensor(self, other: "Presentation", name: str = "") -> "Presentation":
        if other.p != self.p:
            raise ValueError("different primes")
        n1, n2 = len(self.generators), len(other.generators)
        rels = [{m + (0,) * n2: c for m, c in r.items()} for r in self._rel_elems]
        rels += [{(0,) * n1 + m: c for m, c in r.items()} for r in other._rel_elems]
        return Presentation(self.p, self.generators + other.generators, tuple(rels), name)

    def with_relations(self, relations: Iterable, name: str = "") -> "Presentation":
        return Presentation(self.p, self.generators, self._rel_elems + tuple(relations), name or self.name)

    def embed(self, other: "Presentation", m: Monomial) -> Monomial:
        """Move a monomial of ``other`` into this presentation by generator name."""
        out = [0] * len(self.generators)
        for e, g in zip(m, other.generators):
            if e:
                out[self.index(g.name)] = e
        return tuple(out)

    # -- text and JSON ----------------------------------------------------

    def format_monomial(self, m: Monomial) -> str:
        parts = []
        for e, g in zip(m, self.generators):
            if e == 1:
                parts.append(g.name)
            elif e > 1:
                parts.append(f"{g.name}^{e}")
        return "*".join(parts) if parts else "1"

    def format(self, x: Mapping[Monomial, int]) -> str:
        if not x:
            return "0"
        out = []
        for m in sorted(x):
            c = self.field.symmetric(x[m])
            mono = self.format_monomial(m)
            sign = "-" if c < 0 else "+"
            c = abs(c)
            body = mono if c == 1 else (f"{c}" if mono == "1" else f"{c}*{mono}")
            out.append((sign, body))
        text = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, body in out[1:]:
            text += f" {sign} {body}"
        return text

    def parse(self, text: str) -> Element:
        """Parse ``"2*x*y^3 - e*c"``; ``name^k`` sets the exponent (gamma_k for divided powers)."""
        s = text.replace(" ", "")
        if s in ("", "0"):
            return {}
        if not re.fullmatch(r"[+-]?[^+-]+([+-][^+-]+)*", s):
            raise ValueError(f"cannot parse {text!r}")
        acc: Element = {}
        for term in re.findall(r"[+-]?[^+-]+", s):
            sign = -1 if term[0] == "-" else 1
            term = term.lstrip("+-")
            coef, mono = sign, self.unit
            for factor in term.split("*"):
                if not factor:
                    raise ValueError(f"empty factor in {text!r}")
                if factor.isdigit():
                    coef *= int(factor)
                    continue
                name, _, e = factor.partition("^")
                exp = int(e) if e else 1
                m = [0] * len(self.generators)
                m[self.index(name)] = exp
                piece = self.check(tuple(m))
                r = self.mul_monomials(mono, piece)
                if r is None:
                    coef = 0
                    break
                coef, mono = coef * r[0], r[1]
            if coef % self.p:
                add_into(acc, {mono: 1}, coef, self.p)
        return acc

    def to_json(self, D: int | None = None) -> dict:
        out = {"p": self.p, "generators": [g.to_json() for g in self.generators],
               "relations": list(self.relations)}
        if self.name:
            out["name"] = self.name
        if D is not None:
            out["dims"] = list(self.poincare(D).dims)
        return out

    @classmethod
    def from_json(cls, d: Mapping) -> "Presentation":
        return cls(int(d["p"]), tuple(Generator.from_json(g) for g in d["generators"]),
                   tuple(d.get("relations", ())), d.get("name", ""))

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        gens = ", ".join(f"{g.name}:{g.kind.value}{g.bidegree}" for g in self.generators)
        rels = f" / ({'; '.join(self.relations)})" if self.relations else ""
        return f"<Presentation{label} p={self.p} [{gens}]{rels}>"


def basis_up_to(pres: Presentation, D: int) -> list[list[Monomial]]:
    return pres.basis_up_to(D)


def multiply(m1: Monomial, m2: Monomial, pres: Presentation) -> Element:
    """Product of two admissible monomials as an element (a single term when free)."""
    return pres.multiply({pres.check(m1): 1}, {pres.check(m2): 1})


def poincare(pres: Presentation, D: int) -> PoincareSeries:
    return pres.poincare(D)
