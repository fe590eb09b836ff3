"""The dual Steenrod algebra at an odd prime and comodule algebras over it.

Coordinates are the conjugate generators xibar_n (degree 2p^n - 2) and
taubar_n (degree 2p^n - 1) with

    Δ(xibar_n)  = Σ_{i+j=n} xibar_i ⊗ xibar_j^{p^i}
    Δ(taubar_n) = 1 ⊗ taubar_n + Σ_{i+j=n} taubar_i ⊗ xibar_j^{p^i}.

A comodule algebra is a presented algebra with a coaction given on its
generators and extended multiplicatively with Koszul signs.  Elements of
A_* ⊗ M are dicts {(a, m): c} over monomial pairs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from .algebra import Element, Kind, Monomial, Presentation, dpow, ext, poly, trunc
from .fp import rank_and_kernel

__all__ = [
    "DualSteenrod",
    "Comodule",
    "TensorElement",
    "build_dual_steenrod",
    "primitives",
    "homology_of_K_comodule",
    "homology_of_K_case4",
    "v1_thh_comodule",
    "self_comodule",
    "tensor_multiply",
]

TensorElement = dict  # {(monomial, monomial, ...): coefficient}


def tensor_multiply(x: Mapping[tuple, int], y: Mapping[tuple, int],
                    factors: Sequence[Presentation], p: int) -> TensorElement:
    """Product in a tensor product of graded-commutative algebras.

    (a1⊗...⊗ak)(b1⊗...⊗bk) = ± a1b1⊗...⊗akbk, the sign from moving each b_j
    past a_{j+1}, ..., a_k.
    """
    out: TensorElement = {}
    k = len(factors)
    for xs, xc in x.items():
        xdeg = [factors[i].degree(xs[i]) for i in range(k)]
        suffix = [0] * (k + 1)
        for i in range(k - 1, -1, -1):
            suffix[i] = suffix[i + 1] + xdeg[i]
        for ys, yc in y.items():
            sign = 0
            for j in range(k):
                sign += factors[j].degree(ys[j]) * suffix[j + 1]
            coeff = xc * yc * (-1 if sign % 2 else 1)
            mons = []
            for i in range(k):
                r = factors[i].mul_monomials(xs[i], ys[i])
                if r is None:
                    break
                coeff *= r[0]
                mons.append(r[1])
            else:
                key = tuple(mons)
                out[key] = (out.get(key, 0) + coeff) % p
    return {kk: v for kk, v in out.items() if v}


def _tensor_power(x: Mapping[tuple, int], e: int, factors, p: int) -> TensorElement:
    out: TensorElement = {tuple(f.unit for f in factors): 1}
    for _ in range(e):
        out = tensor_multiply(out, x, factors, p)
    return out


class DualSteenrod:
    """A_* = P(xibar_1, ...) ⊗ E(taubar_0, ...) through degree ``bound``."""

    def __init__(self, p: int, bound: int):
        if p % 2 == 0:
            raise ValueError("odd primes only")
        self.p = p
        self.bound = bound
        gens = []
        n = 0
        while 2 * p ** n - 1 <= bound:
            if n >= 1 and 2 * p ** n - 2 <= bound:
                gens.append(poly(f"xibar{n}", 2 * p ** n - 2))
            gens.append(ext(f"taubar{n}", 2 * p ** n - 1))
            n += 1
        if n >= 1 and 2 * p ** n - 2 <= bound:
            gens.append(poly(f"xibar{n}", 2 * p ** n - 2))
        self.pres = Presentation(p, tuple(gens), name="A_*")
        self._cop: dict[Monomial, TensorElement] = {}

    def __repr__(self) -> str:
        return f"DualSteenrod(p={self.p}, bound={self.bound})"

    def basis(self, d: int) -> list[Monomial]:
        return self.pres.basis(d)

    def gen(self, name: str, e: int = 1) -> Monomial:
        return next(iter(self.pres.gen(name, e)))

    def _xibar_power(self, n: int, e: int) -> Element:
        if n == 0:
            return self.pres.one()
        if 2 * self.p ** n - 2 > self.bound:
            return {}
        if e * (2 * self.p ** n - 2) > self.bound:
            return {}
        return self.pres.gen(f"xibar{n}", e)

    def _generator_coproduct(self, g) -> TensorElement:
        A = self.pres
        f = (A, A)
        out: TensorElement = {}
        name = g.name
        n = int(name.lstrip("xibarut"))
        if name.startswith("xibar"):
            for i in range(n + 1):
                left = self._xibar_power(i, 1)
                right = self._xibar_power(n - i, self.p ** i)
                for k, v in tensor_multiply({(lm, A.unit): lc for lm, lc in left.items()},
                                            {(A.unit, rm): rc for rm, rc in right.items()}, f, self.p).items():
                    out[k] = (out.get(k, 0) + v) % self.p
        else:
            out[(A.unit, next(iter(A.gen(name))))] = 1
            for i in range(n + 1):
                left = A.gen(f"taubar{i}")
                right = self._xibar_power(n - i, self.p ** i)
                for k, v in tensor_multiply({(lm, A.unit): lc for lm, lc in left.items()},
                                            {(A.unit, rm): rc for rm, rc in right.items()}, f, self.p).items():
                    out[k] = (out.get(k, 0) + v) % self.p
        return {k: v for k, v in out.items() if v}

    def coproduct_monomial(self, m: Monomial) -> TensorElement:
        if m not in self._cop:
            A = self.pres
            out: TensorElement = {(A.unit, A.unit): 1}
            for e, g in zip(m, A.generators):
                if e:
                    out = tensor_multiply(out, _tensor_power(self._generator_coproduct(g), e, (A, A), self.p),
                                          (A, A), self.p)
            self._cop[m] = out
        return self._cop[m]

    def coproduct(self, x: Mapping[Monomial, int]) -> TensorElement:
        out: TensorElement = {}
        for m, c in x.items():
            for k, v in self.coproduct_monomial(m).items():
                out[k] = (out.get(k, 0) + c * v) % self.p
        return {k: v for k, v in out.items() if v}

    def counit(self, x: Mapping[Monomial, int]) -> int:
        return x.get(self.pres.unit, 0) % self.p

    @cached_property
    def _antipode_gens(self) -> dict[str, Element]:
        A = self.pres
        out: dict[str, Element] = {}
        for g in sorted(A.generators, key=lambda g: g.degree):
            acc: Element = {}
            for (l, r), c in self._generator_coproduct(g).items():
                if r == A.unit:
                    continue  # the χ(g)·1 term
                term = A.multiply(self.antipode({l: 1}, out), {r: 1})
                for k, v in term.items():
                    acc[k] = (acc.get(k, 0) - c * v) % self.p
            out[g.name] = {k: v for k, v in acc.items() if v}
        return out

    def antipode(self, x: Mapping[Monomial, int], _partial: Mapping[str, Element] | None = None) -> Element:
        """χ, determined by m(χ ⊗ id)Δ = ηε; an algebra map on a graded-commutative Hopf algebra."""
        A = self.pres
        table = self._antipode_gens if _partial is None else _partial
        out: Element = {}
        for m, c in x.items():
            acc = A.one()
            for e, g in zip(m, A.generators):
                if e:
                    acc = A.multiply(acc, A.power(table[g.name], e))
            for k, v in acc.items():
                out[k] = (out.get(k, 0) + c * v) % self.p
        return {k: v for k, v in out.items() if v}

    def untwisted(self, name: str) -> Element:
        """xi_n or tau_n (the conjugates of the stored generators)."""
        return self.antipode(self.pres.gen(name.replace("xi", "xibar", 1) if name.startswith("xi")
                                           else name.replace("tau", "taubar", 1)))

    def coassociativity_failures(self, D: int | None = None) -> list[Monomial]:
        D = self.bound if D is None else D
        return self_comodule(self).coassociativity_failures(D)


def build_dual_steenrod(p: int, D: int) -> DualSteenrod:
    return DualSteenrod(p, D)


@dataclass
class Comodule:
    """A left A_*-comodule algebra with coaction prescribed on generators."""

    steenrod: DualSteenrod
    module: Presentation
    coaction: dict[str, TensorElement]
    bound: int
    name: str = ""
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if self.module.has_relations:
            raise ValueError("comodules are modelled on free presentations")
        if self.bound > self.steenrod.bound:
            raise ValueError("the dual Steenrod algebra must be built at least to the comodule bound")
        A, M = self.steenrod.pres, self.module
        for g in M.generators:
            gm = next(iter(M.gen(g.name)))
            nu = self.coaction.setdefault(g.name, {(A.unit, gm): 1})
            for (a, m), _ in nu.items():
                if A.degree(a) + M.degree(m) != g.total:
                    raise ValueError(f"coaction of {g.name} is not homogeneous")
            if g.kind is Kind.DIVIDED and nu != {(A.unit, gm): 1}:
                raise ValueError(f"divided-power generator {g.name} must be primitive")

    @property
    def p(self) -> int:
        return self.module.p

    def coact_monomial(self, m: Monomial) -> TensorElement:
        if m not in self._cache:
            A, M = self.steenrod.pres, self.module
            f = (A, M)
            out: TensorElement = {(A.unit, M.unit): 1}
            for i, (e, g) in enumerate(zip(m, M.generators)):
                if not e:
                    continue
                if g.kind is Kind.DIVIDED:
                    piece = {(A.unit, tuple(e if j == i else 0 for j in range(len(m)))): 1}
                else:
                    piece = _tensor_power(self.coaction[g.name], e, f, self.p)
                out = tensor_multiply(out, piece, f, self.p)
            # drop A-terms beyond the algebra's range (they cannot occur below the bound)
            self._cache[m] = out
        return self._cache[m]

    def coact(self, x: Mapping[Monomial, int]) -> TensorElement:
        out: TensorElement = {}
        for m, c in x.items():
            for k, v in self.coact_monomial(m).items():
                out[k] = (out.get(k, 0) + c * v) % self.p
        return {k: v for k, v in out.items() if v}

    def basis(self, n: int) -> list[Monomial]:
        return self.module.basis(n)

    def counit_failures(self, D: int | None = None) -> list[Monomial]:
        D = self.bound if D is None else D
        A = self.steenrod.pres
        bad = []
        for n in range(D + 1):
            for m in self.basis(n):
                got = {mm: c for (a, mm), c in self.coact_monomial(m).items() if a == A.unit}
                if got != {m: 1}:
                    bad.append(m)
        return bad

    def coassociativity_failures(self, D: int | None = None) -> list[Monomial]:
        """Monomials where (Δ ⊗ id)ν != (id ⊗ ν)ν."""
        D = self.bound if D is None else D
        S = self.steenrod
        bad = []
        for n in range(D + 1):
            for m in self.basis(n):
                nu = self.coact_monomial(m)
                lhs: TensorElement = {}
                rhs: TensorElement = {}
                for (a, mm), c in nu.items():
                    for (a1, a2), v in S.coproduct_monomial(a).items():
                        k = (a1, a2, mm)
                        lhs[k] = (lhs.get(k, 0) + c * v) % self.p
                    for (b, m2), v in self.coact_monomial(mm).items():
                        k = (a, b, m2)
                        rhs[k] = (rhs.get(k, 0) + c * v) % self.p
                lhs = {k: v for k, v in lhs.items() if v}
                rhs = {k: v for k, v in rhs.items() if v}
                if lhs != rhs:
                    bad.append(m)
        return bad

    def primitive_system(self, n: int) -> tuple[list[Monomial], np.ndarray]:
        """Basis of M_n and the matrix (columns = basis) of x -> ν(x) - 1⊗x."""
        if n > self.bound:
            raise ValueError(f"coaction data only valid through degree {self.bound}, asked for {n}")
        A = self.steenrod.pres
        basis = self.basis(n)
        cols = []
        keys: dict[tuple, int] = {}
        for m in basis:
            col = {}
            for (a, mm), c in self.coact_monomial(m).items():
                if a == A.unit:
                    continue
                col[(a, mm)] = c
            cols.append(col)
            for k in col:
                keys.setdefault(k, len(keys))
        mat = np.zeros((len(keys), len(basis)), dtype=np.int64)
        for j, col in enumerate(cols):
            for k, c in col.items():
                mat[keys[k], j] = c
        return basis, mat

    def primitives(self, n: int) -> list[Element]:
        basis, mat = self.primitive_system(n)
        if not basis:
            return []
        if mat.shape[0] == 0:
            vecs = list(np.eye(len(basis), dtype=np.int64))
        else:
            _, vecs = rank_and_kernel(mat, self.p)
        return [self.module.element(basis, v) for v in vecs]

    def format_coaction(self, name: str) -> str:
        A, M = self.steenrod.pres, self.module
        terms = []
        for (a, m), c in sorted(self.coaction[name].items()):
            coeff = M.field.symmetric(c)
            body = f"{A.format_monomial(a)}⊗{M.format_monomial(m)}"
            terms.append(body if coeff == 1 else "-" + body if coeff == -1 else f"{coeff}*{body}")
        return " + ".join(terms).replace("+ -", "- ")

    def to_json(self) -> dict:
        A, M = self.steenrod.pres, self.module
        return {
            "name": self.name,
            "p": self.p,
            "bound": self.bound,
            "module": M.to_json(),
            "coactions": {
                g.name: [[A.format_monomial(a), M.format_monomial(m), int(c)]
                         for (a, m), c in sorted(self.coaction[g.name].items())]
                for g in M.generators
            },
        }


def primitives(c: Comodule, n: int) -> list[Element]:
    return c.primitives(n)


def self_comodule(S: DualSteenrod, bound: int | None = None) -> Comodule:
    """A_* as a comodule over itself via Δ."""
    coaction = {g.name: S._generator_coproduct(g) for g in S.pres.generators}
    return Comodule(S, S.pres, coaction, S.bound if bound is None else bound, name="A_*")


# -- homology of K(F_q)_p -----------------------------------------------------

class _Builder:
    """Assemble coaction formulas from readable (A-text, M-text, coefficient) terms."""

    def __init__(self, S: DualSteenrod, M: Presentation):
        self.S, self.M = S, M
        self.A = S.pres

    def el(self, a: Element | str, m: Element | str, c: int = 1) -> TensorElement:
        A, M, p = self.A, self.M, self.S.p
        ae = A.parse(a) if isinstance(a, str) else a
        me = M.parse(m) if isinstance(m, str) else m
        out: TensorElement = {}
        for am, ac in ae.items():
            for mm, mc in me.items():
                out[(am, mm)] = (out.get((am, mm), 0) + c * ac * mc) % p
        return out

    def total(self, *parts: TensorElement) -> TensorElement:
        out: TensorElement = {}
        for part in parts:
            for k, v in part.items():
                out[k] = (out.get(k, 0) + v) % self.S.p
        return {k: v for k, v in out.items() if v}

    def has(self, name: str) -> bool:
        return any(g.name == name for g in self.M.generators) or any(
            g.name == name for g in self.A.generators)

    def xibar_pow(self, i: int, e: int) -> Element:
        return self.S._xibar_power(i, e)


def _k_generators(p: int, bound: int, first_xi: int) -> list:
    gens = []
    n = first_xi
    while 2 * p ** n - 2 <= bound:
        gens.append(poly(f"xi{n}", 2 * p ** n - 2))
        if n >= 2 and 2 * p ** n - 1 <= bound:
            gens.append(ext(f"tau{n}", 2 * p ** n - 1))
        n += 1
    return gens


def _xi_tilde_power(B: _Builder, j: int, e: int, case1: bool) -> Element:
    """ξ̃_j^e in M (ξ̃_0 = 1; in case (1), ξ̃_1^{p^i} means xi1p^{p^{i-1}})."""
    M = B.M
    if j == 0:
        return M.one()
    if case1 and j == 1:
        if e % B.S.p:
            raise ValueError("only p-th powers of ξ̃_1 exist in case (1)")
        name, e = "xi1p", e // B.S.p
    else:
        name = f"xi{j}"
    if not B.has(name) or e * M.generator(name).total > B.S.bound:
        return {}
    return M.gen(name, e)


def _standard_coactions(B: _Builder, case1: bool, start: int) -> dict[str, TensorElement]:
    p, M = B.S.p, B.M
    out = {}
    for g in M.generators:
        if g.name.startswith("xi") and g.name != "xi1p":
            n = int(g.name[2:])
            if n < start:
                continue
            parts = [B.el(B.xibar_pow(i, 1), _xi_tilde_power(B, n - i, p ** i, case1)) for i in range(n + 1)]
            out[g.name] = B.total(*parts)
        elif g.name.startswith("tau"):
            n = int(g.name[3:])
            if n < start:
                continue
            parts = [B.el("1", g.name)]
            parts += [B.el(f"taubar{i}", _xi_tilde_power(B, n - i, p ** i, case1)) for i in range(n + 1)]
            out[g.name] = B.total(*parts)
    return out


def homology_of_K_comodule(params, a: int = 0, bound: int = 60, c: int | None = None) -> Comodule:
    """(HF_p)_*K(F_q)_p as an A_*-comodule algebra, cases (1)-(3).

    Cases (2)/(3): E(x) ⊗ P_k(y) ⊗ P(ξ̃_1, ξ̃_2, ...) ⊗ E(τ̃_2, ...) with
    ν(ξ̃_1) = 1⊗ξ̃_1 + ξ̄_1⊗1 + a τ̄_0⊗x y^{k-1}; x and y primitive.
    Case (1): E(b) ⊗ P(ξ̃_1^p, ξ̃_2, ...) ⊗ E(τ̃_2, ...), b primitive, with
    correction terms in the coactions of ξ̃_1^p and τ̃_2 (scaled by ``c``,
    default ``a`` if nonzero else 1) that make the coaction coassociative
    given ν(ξ̃_2) ∋ τ_1 ⊗ b.
    """
    case = params.case_id
    if case == 4:
        raise ValueError("case (4) homology is only known in low degrees; use homology_of_K_case4")
    p = params.p
    S = DualSteenrod(p, bound)
    a %= p
    if case == 1:
        c = (a or 1) if c is None else c % p
        gens = [ext("b", 2 * p * p - 2 * p - 1), poly("xi1p", 2 * p * p - 2 * p)] + _k_generators(p, bound, 2)
        gens = [g for g in gens if g.total <= bound]
        M = Presentation(p, tuple(gens), name="H_*K")
        B = _Builder(S, M)
        nu: dict[str, TensorElement] = {}
        if B.has("xi1p"):
            nu["xi1p"] = B.total(B.el("1", "xi1p"), B.el(B.xibar_pow(1, p), "1"), B.el("taubar0", "b", c))
        if B.has("xi2"):
            tau1 = S.untwisted("tau1")
            nu["xi2"] = B.total(B.el("1", "xi2"), B.el("xibar1", "xi1p"), B.el(tau1, "b", c),
                                B.el("xibar2", "1"))
        if B.has("tau2"):
            nu["tau2"] = B.total(B.el("1", "tau2"), B.el("taubar0", "xi2"), B.el("taubar1", "xi1p"),
                                 B.el("taubar2", "1"), B.el("taubar0*taubar1", "b", -c))
        for k, v in _standard_coactions(B, True, 3).items():
            nu[k] = v
        return Comodule(S, M, nu, bound, name=f"H_*K case (1), c={c}")
    k = params.k
    gens = [ext("x", 2 * params.r - 1)]
    if k > 1:
        gens.append(trunc("y", 2 * params.r, k))
    gens += _k_generators(p, bound, 1)
    gens = [g for g in gens if g.total <= bound]
    M = Presentation(p, tuple(gens), name="H_*K")
    B = _Builder(S, M)
    nu = _standard_coactions(B, False, 2)
    xy = "x" + (f"*y^{k - 1}" if k > 1 else "")
    if B.has("xi1"):
        nu["xi1"] = B.total(B.el("1", "xi1"), B.el("xibar1", "1"), B.el("taubar0", xy, a))
    return Comodule(S, M, nu, bound, name=f"H_*K case ({case}), a={a}")


def homology_of_K_case4(params, bound: int | None = None) -> Presentation:
    """Case (4), r > 1: the algebra E(x) ⊗ P_k(y) / (x y^{k-1}), valid through degree 2p."""
    from .homological import ahl3_algebra
    if params.case_id != 4 or params.r <= 1:
        raise ValueError("needs case (4) with r > 1")
    bound = 2 * params.p if bound is None else bound
    if bound > 2 * params.p:
        raise ValueError("the homology of K is only modelled through degree 2p in case (4)")
    return ahl3_algebra(params.p, params.r)


def v1_thh_comodule(p: int = 5, c: int = 1, bound: int = 60) -> Comodule:
    """(HF_p)_*(V(1) ∧ THH(K)) in case (1) through degree ``bound``.

    E(eps0, eps1) ⊗ (HF_p)_*K ⊗ E(sigma_xi1p, sigma_xi2) ⊗ P(sigma_tau2) ⊗ Γ(sigma_b),
    with eps0 -> taubar0 and eps1 -> tau1 under the embedding into A_*, and
    ν(σm) = (id ⊗ σ)ν(m) on the suspension classes.
    """
    base = homology_of_K_comodule(_Case1(p), bound=bound, c=c)
    S = base.steenrod
    extra = [ext("eps0", 1), ext("eps1", 2 * p - 1),
             ext("sigma_xi1p", 2 * p * p - 2 * p + 1), ext("sigma_xi2", 2 * p * p - 1),
             poly("sigma_tau2", 2 * p * p), dpow("sigma_b", 2 * p * p - 2 * p)]
    gens = [g for g in extra[:2]] + list(base.module.generators) + [g for g in extra[2:] if g.total <= bound]
    M = Presentation(p, tuple(gens), name="H_*(V(1)∧THH(K))")
    B = _Builder(S, M)
    nu: dict[str, TensorElement] = {}
    nu["eps0"] = B.total(B.el("1", "eps0"), B.el("taubar0", "1"))
    nu["eps1"] = B.total(B.el("1", "eps1"), B.el("xibar1", "eps0"), B.el(S.untwisted("tau1"), "1"))
    for g in base.module.generators:
        nu[g.name] = {(a, M.embed(base.module, m)): v for (a, m), v in base.coaction[g.name].items()}
    sigma = {"xi1p": "sigma_xi1p", "xi2": "sigma_xi2", "tau2": "sigma_tau2", "b": "sigma_b"}
    for src, tgt in sigma.items():
        if not B.has(tgt) or tgt == "sigma_b":
            continue
        out: TensorElement = {}
        for (a, m), v in base.coaction[src].items():
            mm = base.module
            nz = [(i, e) for i, e in enumerate(m) if e]
            if len(nz) != 1 or nz[0][1] != 1:
                continue  # σ kills 1 and decomposables
            name = sigma.get(mm.generators[nz[0][0]].name)
            if name is None or not B.has(name):
                continue
            key = (a, next(iter(M.gen(name))))
            out[key] = (out.get(key, 0) + v) % p
        nu[tgt] = {k: v for k, v in out.items() if v}
    return Comodule(S, M, nu, bound, name=f"H_*(V(1)∧THH(K)) case (1), c={c}")


@dataclass(frozen=True)
class _Case1:
    p: int
    case_id: int = 1
    r: int = 0
    k: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "r", self.p - 1)
