"""Chain complexes, Hochschild and bar complexes, free resolutions, DGA homology.

Bigraded complexes are indexed by (s, t): homological degree s and internal
degree t.  Differentials lower s by one and preserve t.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct
from typing import Callable, Mapping, Sequence

import numpy as np

from .algebra import Element, Kind, Monomial, Presentation
from .derivation import DifferentialError, DifferentialSpec
from .fp import extend_basis, matmul, rank, rank_and_kernel
from .specseq import BigradedPage, run_page

__all__ = [
    "ChainComplexGM",
    "FreeResolution",
    "DGAlgebra",
    "DGAHomology",
    "hochschild_complex",
    "tor_via_bar",
    "minimal_resolution",
    "ahl3_resolution",
    "dga_homology",
    "ahl3_algebra",
]

Bideg = tuple[int, int]


@dataclass(frozen=True, eq=False)
class ChainComplexGM:
    """A bigraded complex of F_p vector spaces with named bases.

    ``basis[(s, t)]`` lists labels; ``diffs[(s, t)]`` is the matrix of
    d: C_{s,t} -> C_{s-1,t} (rows index the target).  Missing matrices are zero.
    d∘d = 0 is asserted at construction.
    """

    p: int
    basis: Mapping[Bideg, Sequence[str]]
    diffs: Mapping[Bideg, np.ndarray]
    exact_through: int | None = None
    name: str = ""

    def __post_init__(self) -> None:
        for (s, t), m in self.diffs.items():
            src = len(self.basis.get((s, t), ()))
            tgt = len(self.basis.get((s - 1, t), ()))
            if m.shape != (tgt, src):
                raise ValueError(f"differential at {(s, t)} has shape {m.shape}, expected {(tgt, src)}")
        for (s, t), m in self.diffs.items():
            below = self.diffs.get((s - 1, t))
            if below is not None and m.size and below.size and matmul(below, m, self.p).any():
                raise DifferentialError(f"d∘d != 0 at {(s, t)}")

    def dim(self, s: int, t: int) -> int:
        return len(self.basis.get((s, t), ()))

    def bidegrees(self) -> list[Bideg]:
        return sorted(b for b, v in self.basis.items() if len(v))

    def matrix(self, s: int, t: int) -> np.ndarray:
        m = self.diffs.get((s, t))
        if m is None:
            return np.zeros((self.dim(s - 1, t), self.dim(s, t)), dtype=np.int64)
        return m

    def _rank(self, s: int, t: int) -> int:
        m = self.matrix(s, t)
        return rank(m, self.p) if m.size else 0

    def homology_dim(self, s: int, t: int) -> int:
        return self.dim(s, t) - self._rank(s, t) - self._rank(s + 1, t)

    def homology(self, s: int, t: int) -> list[np.ndarray]:
        """Deterministic cycle representatives of a basis of H_{s,t}."""
        n = self.dim(s, t)
        if n == 0:
            return []
        m = self.matrix(s, t)
        if m.shape[0]:
            _, cycles = rank_and_kernel(m, self.p)
        else:
            cycles = list(np.eye(n, dtype=np.int64))
        up = self.matrix(s + 1, t)
        bnd = up.T if up.size else np.zeros((0, n), dtype=np.int64)
        if not cycles:
            return []
        idx = extend_basis(bnd, np.array(cycles), self.p)
        return [cycles[i] for i in idx]

    def homology_dims(self) -> dict[Bideg, int]:
        out = {}
        for s, t in self.bidegrees():
            h = self.homology_dim(s, t)
            if h:
                out[(s, t)] = h
        return out

    def total_homology(self, D: int) -> list[int]:
        out = [0] * (D + 1)
        for (s, t), h in self.homology_dims().items():
            if s + t <= D:
                out[s + t] += h
        return out

    def euler_by_internal(self) -> dict[int, tuple[int, int]]:
        """Per internal degree: (alternating sum of chain dims, alternating sum of homology dims)."""
        out: dict[int, list[int]] = {}
        for s, t in self.bidegrees():
            e = out.setdefault(t, [0, 0])
            e[0] += (-1) ** s * self.dim(s, t)
            e[1] += (-1) ** s * self.homology_dim(s, t)
        return {t: (a, b) for t, (a, b) in out.items()}

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "p": self.p,
            "exact_through": self.exact_through,
            "stages": [{"s": s, "t": t, "basis": list(self.basis[(s, t)])} for s, t in self.bidegrees()],
            "homology": [{"s": s, "t": t, "dim": h} for (s, t), h in sorted(self.homology_dims().items())],
        }


# -- Hochschild and bar complexes ---------------------------------------------

def _fp_presentation(p: int) -> Presentation:
    return Presentation(p, (), name="F_p")


def _coefficient_map(A: Presentation, Q: Presentation, phi: Mapping[str, str] | None,
                     identity: bool) -> Callable[[Monomial], Element]:
    if identity:
        return lambda m: {m: 1}
    images = {}
    for g in A.generators:
        text = (phi or {}).get(g.name)
        images[g.name] = Q.reduce(Q.parse(text)) if text else {}
        if images[g.name] and g.kind is Kind.DIVIDED:
            raise ValueError("coefficient maps are only supported on non divided-power generators")
    cache: dict[Monomial, Element] = {}

    def apply(m: Monomial) -> Element:
        if m not in cache:
            acc = Q.one()
            for e, g in zip(m, A.generators):
                if e:
                    acc = Q.multiply(acc, Q.power(images[g.name], e))
            cache[m] = acc
        return cache[m]

    return apply


def hochschild_complex(A: Presentation, D: int, Q: Presentation | None = None,
                       phi: Mapping[str, str] | None = None, name: str = "") -> ChainComplexGM:
    """Normalized Hochschild complex C_s = Q ⊗ Ā^{⊗s}, internal degree <= D.

    ``Q`` defaults to F_p with the augmentation (the bar complex).  Pass
    ``Q=A`` for HH(A; A).  Otherwise ``phi`` maps A-generators to elements of
    Q (missing generators map to zero).  Homological degrees are truncated at
    s <= D // (lowest generator degree).
    """
    if D < 0:
        raise ValueError("degree bound must be non-negative")
    if any(g.total <= 0 for g in A.generators):
        raise ValueError("A must be connected")
    p = A.p
    identity = Q is A
    if Q is None:
        Q = _fp_presentation(p)
    elif Q.p != p:
        raise ValueError("different primes")
    fmap = _coefficient_map(A, Q, phi, identity)
    mindeg = min((g.total for g in A.generators), default=D + 1)
    smax = D // mindeg if A.generators else 0
    abar = [[] for _ in range(D + 1)]
    for d in range(1, D + 1):
        abar[d] = A.basis(d)
    qb = [Q.basis(d) for d in range(D + 1)]

    def words(s: int, t: int):
        if s == 0:
            if t == 0:
                yield ()
            return
        for d in range(1, t - (s - 1) * mindeg + 1):
            for m in abar[d]:
                for rest in words(s - 1, t - d):
                    yield (m,) + rest

    basis: dict[Bideg, list] = {}
    for s in range(smax + 1):
        for t in range(D + 1):
            cells = []
            for tq in range(t + 1):
                for q in qb[tq]:
                    for w in words(s, t - tq):
                        cells.append((q, w))
            if cells:
                basis[(s, t)] = cells
    pos = {b: {c: i for i, c in enumerate(cells)} for b, cells in basis.items()}

    def add(out: dict, q_el: Element, w: tuple, c: int) -> None:
        for qm, qc in q_el.items():
            key = (qm, w)
            out[key] = (out.get(key, 0) + qc * c) % p

    diffs: dict[Bideg, np.ndarray] = {}
    for (s, t), cells in basis.items():
        if s == 0 or (s - 1, t) not in basis:
            continue
        tpos = pos[(s - 1, t)]
        m = np.zeros((len(tpos), len(cells)), dtype=np.int64)
        for j, (q, w) in enumerate(cells):
            out: dict = {}
            # first face: q * phi(a1)
            add(out, Q.multiply({q: 1}, fmap(w[0])), w[1:], 1)
            # inner faces
            for i in range(s - 1):
                prod = A.multiply({w[i]: 1}, {w[i + 1]: 1})
                for pm, pc in prod.items():
                    out_w = w[:i] + (pm,) + w[i + 2:]
                    key = (q, out_w)
                    out[key] = (out.get(key, 0) + (-1) ** (i + 1) * pc) % p
            # last face with its Koszul sign
            last = w[-1]
            rest_deg = Q.degree(q) + sum(A.degree(a) for a in w[:-1])
            sign = (-1) ** (s + A.degree(last) * rest_deg)
            add(out, Q.multiply(fmap(last), {q: 1}), w[:-1], sign)
            for key, c in out.items():
                if c % p:
                    m[tpos[key], j] = c % p
        diffs[(s, t)] = m

    def label(cell) -> str:
        q, w = cell
        head = Q.format_monomial(q)
        return head + "[" + "|".join(A.format_monomial(a) for a in w) + "]"

    named = {b: [label(c) for c in cells] for b, cells in basis.items()}
    return ChainComplexGM(p, named, diffs, name=name or f"C({A.name or 'A'})")


def tor_via_bar(A: Presentation, D: int) -> dict[Bideg, int]:
    """Tor^A_{s,t}(F_p, F_p) for t <= D from the normalized bar complex."""
    return hochschild_complex(A, D).homology_dims()


# -- free resolutions ---------------------------------------------------------

FreeElement = dict  # {(generator index, A-monomial): coefficient}


@dataclass
class FreeResolution:
    """A complex of free A-modules P_s -> P_{s-1} -> ... -> P_0 -> F_p.

    ``gens[s]`` lists (name, internal degree); ``images[s][i]`` is d of the i-th
    stage-s generator as an element of P_{s-1} (stage 0 augments onto F_p).
    """

    A: Presentation
    gens: list[list[tuple[str, int]]]
    images: list[list[FreeElement]]
    bound: int
    name: str = ""

    @property
    def p(self) -> int:
        return self.A.p

    def stages(self) -> int:
        return len(self.gens)

    def module_basis(self, s: int, t: int) -> list[tuple[int, Monomial]]:
        if s < 0 or s >= len(self.gens):
            return []
        out = []
        for i, (_, d) in enumerate(self.gens[s]):
            if d <= t:
                out.extend((i, m) for m in self.A.basis(t - d))
        return out

    def act(self, m: Monomial, x: FreeElement) -> FreeElement:
        out: FreeElement = {}
        for (i, mm), c in x.items():
            for pm, pc in self.A.multiply({m: 1}, {mm: 1}).items():
                key = (i, pm)
                out[key] = (out.get(key, 0) + pc * c) % self.p
        return {k: v for k, v in out.items() if v}

    def matrix(self, s: int, t: int) -> np.ndarray:
        """d_s on P_{s,t} (s >= 1), or the augmentation for s = 0."""
        src = self.module_basis(s, t)
        if s == 0:
            m = np.zeros((1 if t == 0 else 0, len(src)), dtype=np.int64)
            if t == 0:
                m[0, :] = 1
            return m
        tgt = self.module_basis(s - 1, t)
        pos = {c: i for i, c in enumerate(tgt)}
        m = np.zeros((len(tgt), len(src)), dtype=np.int64)
        for j, (i, mono) in enumerate(src):
            for key, c in self.act(mono, self.images[s][i]).items():
                m[pos[key], j] = (m[pos[key], j] + c) % self.p
        return m

    def check_square_zero(self) -> None:
        for s in range(1, len(self.gens)):
            for t in range(self.bound + 1):
                a = self.matrix(s, t)
                b = self.matrix(s - 1, t)
                if a.size and b.size and matmul(b, a, self.p).any():
                    raise DifferentialError(f"d∘d != 0 at stage {s}, degree {t}")

    def exactness_failures(self, total: int) -> list[Bideg]:
        """Bidegrees (s, t) with s + t <= total where ker d_s is not im d_{s+1}."""
        bad = []
        for s in range(len(self.gens)):
            for t in range(min(self.bound, total - s) + 1):
                a = self.matrix(s, t)
                n = a.shape[1]
                if n == 0:
                    continue
                ker = n - (rank(a, self.p) if a.size else 0)
                up = self.matrix(s + 1, t) if s + 1 < len(self.gens) else np.zeros((n, 0), dtype=np.int64)
                im = rank(up, self.p) if up.size else 0
                if ker != im:
                    bad.append((s, t))
        return bad

    def reduced_complex(self) -> ChainComplexGM:
        """P ⊗_A F_p: keep only the coefficients of the generators themselves."""
        basis: dict[Bideg, list[str]] = {}
        for s, gs in enumerate(self.gens):
            for name, d in gs:
                if d <= self.bound:
                    basis.setdefault((s, d), []).append(name)
        unit = self.A.unit
        diffs: dict[Bideg, np.ndarray] = {}
        for (s, t), names in basis.items():
            if s == 0 or (s - 1, t) not in basis:
                continue
            src = [i for i, (_, d) in enumerate(self.gens[s]) if d == t]
            tgt = [i for i, (_, d) in enumerate(self.gens[s - 1]) if d == t]
            tpos = {i: k for k, i in enumerate(tgt)}
            m = np.zeros((len(tgt), len(src)), dtype=np.int64)
            for j, i in enumerate(src):
                for (gi, mono), c in self.images[s][i].items():
                    if mono == unit:
                        m[tpos[gi], j] = c % self.p
            diffs[(s, t)] = m
        return ChainComplexGM(self.p, basis, diffs, name=f"{self.name} ⊗ F_p")

    def tor_dims(self) -> dict[Bideg, int]:
        return self.reduced_complex().homology_dims()

    def is_minimal(self) -> bool:
        return not any(m.any() for m in self.reduced_complex().diffs.values())

    def format_element(self, s: int, x: FreeElement) -> str:
        terms = []
        for (i, m), c in sorted(x.items()):
            coeff = self.A.field.symmetric(c)
            mono = self.A.format_monomial(m)
            body = self.gens[s][i][0] if mono == "1" else f"{mono}*{self.gens[s][i][0]}"
            terms.append(body if coeff == 1 else "-" + body if coeff == -1 else f"{coeff}*{body}")
        return " + ".join(terms).replace("+ -", "- ") or "0"

    def chart(self) -> str:
        lines = []
        for s, gs in enumerate(self.gens):
            if not gs:
                continue
            parts = []
            for i, (name, d) in enumerate(gs):
                img = "eps" if s == 0 else self.format_element(s - 1, self.images[s][i])
                parts.append(f"{name}({s},{d}) -> {img}")
            lines.append(f"P_{s}: " + "; ".join(parts))
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "p": self.p,
            "bound": self.bound,
            "stages": [[{"name": n, "degree": d,
                         "d": "eps" if s == 0 else self.format_element(s - 1, self.images[s][i])}
                        for i, (n, d) in enumerate(gs)] for s, gs in enumerate(self.gens)],
            "tor": [{"s": s, "t": t, "dim": h} for (s, t), h in sorted(self.tor_dims().items())],
        }


def minimal_resolution(A: Presentation, D: int) -> FreeResolution:
    """Minimal free resolution of F_p over A through internal degree D.

    Stage by stage and degree by degree, new generators are the kernel vectors
    (in the deterministic kernel basis order) not already in the image.
    """
    if D < 0:
        raise ValueError("degree bound must be non-negative")
    if any(g.total <= 0 for g in A.generators):
        raise ValueError("A must be connected")
    res = FreeResolution(A, [[("g0_0", 0)]], [[{}]], D, name=f"res({A.name or 'A'})")
    mindeg = min((g.total for g in A.generators), default=D + 1)
    s = 1
    while s <= D // mindeg:
        res.gens.append([])
        res.images.append([])
        for t in range(s * mindeg, D + 1):
            below = res.matrix(s - 1, t)
            n = below.shape[1]
            if n == 0:
                continue
            if below.shape[0]:
                _, kvecs = rank_and_kernel(below, res.p)
            else:
                kvecs = list(np.eye(n, dtype=np.int64))
            if not kvecs:
                continue
            cur = res.matrix(s, t)
            img = cur.T if cur.size else np.zeros((0, n), dtype=np.int64)
            chosen = extend_basis(img, np.array(kvecs), res.p)
            basis = res.module_basis(s - 1, t)
            for idx in chosen:
                v = kvecs[idx]
                res.gens[s].append((f"g{s}_{len(res.gens[s])}", t))
                res.images[s].append({basis[i]: int(c) for i, c in enumerate(v) if c})
        if not res.gens[s]:
            res.gens.pop()
            res.images.pop()
            break
        s += 1
    return res


def ahl3_algebra(p: int, r: int) -> Presentation:
    """R = E(x) ⊗ P_k(y) / (x y^{k-1}) with |x| = 2r-1, |y| = 2r, k = (p-1)/r."""
    from .algebra import ext, trunc
    if (p - 1) % r:
        raise ValueError("r must divide p - 1")
    k = (p - 1) // r
    if k < 2:
        raise ValueError("k must be at least 2")
    return Presentation(p, (ext("x", 2 * r - 1), trunc("y", 2 * r, k)), (f"x*y^{k - 1}",), name="R")


def ahl3_resolution(params, D: int | None = None) -> FreeResolution:
    """The explicit complex P_{*,*} over R for case (4) with r > 1.

    Generators gamma_i, upsilon_i (i >= 1), w_i, z_i, a_i (i >= 2) and b_3, with
    d(gamma_i) = x gamma_{i-1}, d(w_i) = y^{k-1} gamma_{i-1},
    d(z_i) = y^{k-1} upsilon_{i-1}, d(a_i) = x y^{k-2} upsilon_{i-1},
    d(upsilon_i) = y gamma_{i-1} - x upsilon_{i-1}, d(b_3) = -w_2 + y^{k-2} upsilon_2 + a_2.
    Exact in total degrees <= 2p.
    """
    if params.case_id != 4 or params.r <= 1:
        raise ValueError("the explicit resolution needs case (4) with r > 1")
    p, r, k = params.p, params.r, params.k
    D = 2 * p if D is None else D
    R = ahl3_algebra(p, r)
    one = R.unit

    def mono(xe: int, ye: int) -> Monomial:
        return R.monomial(x=xe, y=ye)

    gens: list[list[tuple[str, int]]] = [[("1", 0)]]
    images: list[list[FreeElement]] = [[{}]]
    gens.append([("gamma_1", 2 * r - 1), ("upsilon_1", 2 * r)])
    images.append([{(0, mono(1, 0)): 1}, {(0, mono(0, 1)): 1}])
    i = 2
    while True:
        prev = {n: j for j, (n, _) in enumerate(gens[i - 1])}
        g, u = prev[f"gamma_{i - 1}"], prev[f"upsilon_{i - 1}"]
        deg = {
            f"gamma_{i}": i * (2 * r - 1),
            f"w_{i}": 2 * p - 2 + (i - 2) * 2 * r - i + 1,
            f"z_{i}": 2 * p - 2 + (i - 2) * 2 * r - i + 2,
            f"a_{i}": 2 * p - 2 + (i - 2) * 2 * r - i + 1,
            f"upsilon_{i}": 2 * r * i - i + 1,
        }
        imgs = {
            f"gamma_{i}": {(g, mono(1, 0)): 1},
            f"w_{i}": {(g, mono(0, k - 1)): 1},
            f"z_{i}": {(u, mono(0, k - 1)): 1},
            f"a_{i}": {(u, mono(1, k - 2)): 1},
            f"upsilon_{i}": {(g, mono(0, 1)): 1, (u, mono(1, 0)): p - 1},
        }
        if i == 3:
            prev2 = {n: j for j, (n, _) in enumerate(gens[2])}
            deg["b_3"] = 2 * p - 3
            b = {(prev2["w_2"], one): p - 1, (prev2["a_2"], one): 1}
            key = (prev2["upsilon_2"], mono(0, k - 2))
            b[key] = (b.get(key, 0) + 1) % p
            imgs["b_3"] = b
        order = [f"gamma_{i}", f"w_{i}", f"z_{i}", f"a_{i}", f"upsilon_{i}"] + (["b_3"] if i == 3 else [])
        gens.append([(n, deg[n]) for n in order])
        images.append([imgs[n] for n in order])
        if min(i + d for _, d in gens[i]) > D + 1:
            break
        i += 1
    bound = max(d for gs in gens for _, d in gs)
    res = FreeResolution(R, gens, images, bound, name="P")
    res.check_square_zero()
    return res


# -- differential graded algebras ---------------------------------------------

@dataclass(frozen=True)
class DGAlgebra:
    """A presented algebra with a derivation of degree -1 given on generators."""

    pres: Presentation
    diff: DifferentialSpec

    def __post_init__(self) -> None:
        if self.diff.page != 0:
            raise ValueError("a DGA differential is a page-0 spec (total degree -1, filtration kept)")


@dataclass
class DGAHomology:
    dga: DGAlgebra
    page: BigradedPage

    @property
    def bound(self) -> int:
        return self.page.exact_through

    def dims(self) -> dict[Bideg, int]:
        return {b: n for b, n in self.page.dims().items() if sum(b) <= self.bound}

    def poincare(self) -> list[int]:
        return list(self.page.total_dims(self.bound).dims)

    def representatives(self, b: Bideg) -> list[Element]:
        return self.page.representatives(b)

    def product(self, x: Mapping[Monomial, int], y: Mapping[Monomial, int]):
        """Class of x*y as (bidegree, coordinates) or None when zero."""
        return self.page.multiply(x, y)

    def is_zero(self, x: Mapping[Monomial, int]) -> bool:
        return self.page.is_zero_class(x)

    def product_table(self, D: int | None = None) -> list[dict]:
        """Products of representatives of total degree <= D, in representative coordinates."""
        D = self.bound if D is None else D
        pres = self.dga.pres
        reps = [(b, i, e) for b in sorted(self.dims()) if sum(b) <= D
                for i, e in enumerate(self.representatives(b))]
        out = []
        for (b1, i1, e1), (b2, i2, e2) in iproduct(reps, reps):
            if sum(b1) + sum(b2) > D or (b1, i1) > (b2, i2):
                continue
            c = self.product(e1, e2)
            out.append({"left": pres.format(e1), "right": pres.format(e2),
                        "bidegree": list(c[0]) if c else None,
                        "coords": [int(v) for v in c[1]] if c else []})
        return out


def dga_homology(dga: DGAlgebra, D: int) -> DGAHomology:
    """Homology of a DGA through total degree D, with representatives and products."""
    page = BigradedPage.initial(dga.pres, D + 1, r=0)
    return DGAHomology(dga, run_page(page, dga.diff))
