"""Arithmetic of K(F_q)_p: case classification, homotopy, V(0)/V(1) dimensions.

Quillen: pi_0 K(F_q) = Z, pi_{2i-1} = Z/(q^i - 1), zero otherwise.  After
p-completion pi_{2i-1} is Z/p^{v_p(q^i - 1)}, nonzero exactly when r | i.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .algebra import PoincareSeries, Presentation, ext, poly, trunc
from .fp import rank

__all__ = [
    "CaseParams",
    "HomotopyGroup",
    "REFERENCE_PAIRS",
    "classify",
    "valuation",
    "homotopy_of_K",
    "v0_of_K",
    "v1_of_K",
    "v0_closed_form",
    "v1_closed_form",
    "fiber_v0",
    "bockstein_torsion_table",
    "reference_params",
    "sweep_pairs",
    "multf_algebra",
    "FGOperators",
    "fg_operator_check",
]

REFERENCE_PAIRS = {1: (2, 5), 2: (7, 5), 3: (49, 5), 4: (4, 5)}


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n ** 0.5) + 1))


def _is_prime_power(q: int) -> bool:
    if q < 2:
        return False
    d = 2
    while q % d:
        d += 1
    while q % d == 0:
        q //= d
    return q == 1


def valuation(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0")
    n, v = abs(n), 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class CaseParams:
    q: int
    p: int
    r: int
    v: int
    k: int
    case_id: int

    @property
    def x_degree(self) -> int:
        return 2 * self.r - 1

    @property
    def y_degree(self) -> int:
        return 2 * self.r

    def to_json(self) -> dict:
        return {"q": self.q, "p": self.p, "r": self.r, "v": self.v, "k": self.k, "case": self.case_id}


def classify(q: int, p: int) -> CaseParams:
    """r = order of q mod p, v = v_p(q^r - 1), and the case number."""
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p < 5:
        raise ValueError("p must be at least 5")
    if not _is_prime_power(q):
        raise ValueError(f"{q} is not a prime power")
    if q % p == 0:
        raise ValueError("p divides q")
    r, x = 1, q % p
    while x != 1:
        x = x * q % p
        r += 1
    v = valuation(q ** r - 1, p)
    top = r == p - 1
    case_id = (1 if v == 1 else 2) if top else (3 if v >= 2 else 4)
    return CaseParams(q, p, r, v, (p - 1) // r, case_id)


@dataclass(frozen=True)
class HomotopyGroup:
    """Z_p (order None, free) or Z/p^order (order 0 is the trivial group)."""

    free: bool = False
    order: int = 0

    def __str__(self) -> str:
        if self.free:
            return "Z_p"
        return "0" if self.order == 0 else f"Z/{'p' if self.order == 1 else f'p^{self.order}'}"


def homotopy_of_K(params: CaseParams, D: int) -> list[HomotopyGroup]:
    out = [HomotopyGroup(free=True)]
    for n in range(1, D + 1):
        if n % 2 == 1:
            i = (n + 1) // 2
            out.append(HomotopyGroup(order=valuation(params.q ** i - 1, params.p)))
        else:
            out.append(HomotopyGroup())
    return out


def _mod_p_dims(groups: list[HomotopyGroup]) -> list[int]:
    """V(0)_n = coker(p on pi_n) ⊕ ker(p on pi_{n-1})."""
    def contrib(g: HomotopyGroup) -> int:
        return 1 if g.free or g.order > 0 else 0

    def torsion(g: HomotopyGroup) -> int:
        return 1 if (not g.free and g.order > 0) else 0

    dims = []
    for n, g in enumerate(groups):
        dims.append(contrib(g) + (torsion(groups[n - 1]) if n else 0))
    return dims


def v0_of_K(params: CaseParams, D: int) -> PoincareSeries:
    return PoincareSeries(tuple(_mod_p_dims(homotopy_of_K(params, D))))


def v0_closed_form(params: CaseParams) -> Presentation:
    return Presentation(params.p, (ext("x", params.x_degree), poly("y", params.y_degree)), name="V(0)_*K")


def v1_closed_form(params: CaseParams) -> Presentation:
    gens = [ext("x", params.x_degree)]
    if params.k > 1:
        gens.append(trunc("y", params.y_degree, params.k))
    return Presentation(params.p, tuple(gens), name="V(1)_*K")


def v1_of_K(params: CaseParams, D: int) -> PoincareSeries:
    """V(1)_* from the long exact sequence of v: Σ^{2p-2} V(0) -> V(0).

    The map multiplies by y^k on V(0)_*K = E(x) ⊗ P(y); V(1)_n is
    coker(v)_n ⊕ ker(v)_{n-(2p-1)}.
    """
    pres = v0_closed_form(params)
    shift = 2 * params.p - 2
    yk = pres.gen("y", params.k)
    ranks = []
    for n in range(D + 1):
        src_deg = n - shift
        if src_deg < 0:
            ranks.append(0)
            continue
        src = pres.basis(src_deg)
        tgt = pres.basis(n)
        if not src or not tgt:
            ranks.append(0)
            continue
        m = np.array([pres.coords(pres.multiply({s: 1}, yk), n) for s in src]).T
        ranks.append(rank(m, params.p))
    v0 = pres.poincare(D + shift).dims
    dims = []
    for n in range(D + 1):
        coker = v0[n] - ranks[n]
        j = n - (2 * params.p - 1)
        ker = (v0[j] - ranks[j + shift]) if j >= 0 else 0
        dims.append(coker + ker)
    return PoincareSeries(tuple(dims))


def fiber_v0(params: CaseParams, D: int) -> PoincareSeries:
    """V(0) dims of K computed through the fiber sequence K -> K(F̄_q) -> Σ² K(F̄_q).

    pi_* K(F̄_q)_p = Z_p[u] with |u| = 2, and the map is u^j -> (q^j - 1) u^{j-1}.
    The homotopy of the fiber is read off from kernel/cokernel of these maps
    over Z_p, then reduced mod p.  Independent of Quillen's table.
    """
    groups = [HomotopyGroup(free=True)]
    for n in range(1, D + 1):
        if n % 2 == 0:
            # kernel of Z_p u^{n/2} -> Z_p u^{n/2-1}: zero, since q^j != 1
            groups.append(HomotopyGroup())
        else:
            j = (n + 1) // 2
            groups.append(HomotopyGroup(order=valuation(params.q ** j - 1, params.p)))
    return PoincareSeries(tuple(_mod_p_dims(groups)))


def bockstein_torsion_table(params: CaseParams, D: int) -> list[tuple[int, int | None]]:
    """(degree, Bockstein page) for even V(0)-classes: y^j in degree 2rj dies at v_p(q^{rj}-1).

    The degree-0 class is a permanent cycle (page None).
    """
    out: list[tuple[int, int | None]] = [(0, None)]
    j = 1
    while 2 * params.r * j <= D:
        out.append((2 * params.r * j, valuation(params.q ** (params.r * j) - 1, params.p)))
        j += 1
    return out


def reference_params(case_id: int, p: int = 5, search_limit: int = 10_000) -> CaseParams:
    """The fixed reference pair at p = 5; otherwise the smallest prime power q of that case."""
    if case_id not in REFERENCE_PAIRS:
        raise ValueError(f"unknown case {case_id}")
    if p == 5:
        return classify(*REFERENCE_PAIRS[case_id])
    for q in range(2, search_limit):
        if q % p and _is_prime_power(q):
            params = classify(q, p)
            if params.case_id == case_id:
                return params
    raise ValueError(f"no prime power q < {search_limit} in case {case_id} for p = {p}")


def sweep_pairs(qs: Iterable[int], p: int) -> list[CaseParams]:
    return [classify(q, p) for q in qs if q % p and _is_prime_power(q)]


# -- the operators F and G on P_r(u) ⊗ Γ(σx) ---------------------------------

def multf_algebra(params: CaseParams) -> Presentation:
    """P_r(u) ⊗ Γ(σx) with |u| = 2, |σx| = 2r."""
    from .algebra import dpow
    gens = []
    if params.r > 1:
        gens.append(trunc("u", 2, params.r))
    gens.append(dpow("sigma_x", 2 * params.r))
    return Presentation(params.p, tuple(gens), name="P_r(u)⊗Γ(σx)")


class FGOperators:
    """F lowers degree by 2, G = u·F.

    F(u^j γ_n) = (q^j - 1) u^{j-1} γ_n for j >= 1 and F(γ_n) = λ u^{r-1} γ_{n-1}
    for n >= 1 (λ a unit, default 1); F(1) = 0.
    """

    def __init__(self, params: CaseParams, unit: int = 1):
        if unit % params.p == 0:
            raise ValueError("the scalar must be a unit")
        self.params = params
        self.pres = multf_algebra(params)
        self.unit = unit % params.p
        self.has_u = params.r > 1

    def _split(self, m) -> tuple[int, int]:
        return (m[0], m[1]) if self.has_u else (0, m[0])

    def _mono(self, j: int, n: int):
        return (j, n) if self.has_u else (n,)

    def F_monomial(self, m) -> dict:
        p, q, r = self.params.p, self.params.q, self.params.r
        j, n = self._split(m)
        if j >= 1:
            c = (q ** j - 1) % p
            return {self._mono(j - 1, n): c} if c else {}
        if n >= 1:
            return {self._mono(r - 1, n - 1): self.unit}
        return {}

    def F(self, x) -> dict:
        out: dict = {}
        for m, c in x.items():
            for mm, cc in self.F_monomial(m).items():
                out[mm] = (out.get(mm, 0) + c * cc) % self.params.p
        return {k: v for k, v in out.items() if v}

    def G(self, x) -> dict:
        Fx = self.F(x)
        if not self.has_u:
            return {}
        return self.pres.multiply(self.pres.gen("u"), Fx)


def fg_operator_check(params: CaseParams, D: int = 80, unit: int = 1, sf_max: int = 5):
    """Check the product rule (ef), the power rule (sf) and injectivity of F."""
    from .fp import lucas_binomial
    from .report import Report
    ops = FGOperators(params, unit)
    A, p = ops.pres, params.p
    rep = Report("fg-check", {**params.to_json(), "max_degree": D, "unit": ops.unit})
    mono = [(d, m) for d in range(D + 1) for m in A.basis(d)]
    bad_ef = None
    pairs = 0
    for d1, a in mono:
        for d2, b in mono:
            if d1 + d2 > D:
                continue
            pairs += 1
            lhs = ops.F(A.multiply({a: 1}, {b: 1}))
            Fa = ops.F({a: 1})
            rhs: dict = {}
            for part in (A.multiply(Fa, {b: 1}), A.multiply({a: 1}, ops.F({b: 1})),
                         A.multiply(Fa, ops.G({b: 1}))):
                for k, v in part.items():
                    rhs[k] = (rhs.get(k, 0) + v) % p
            rhs = {k: v for k, v in rhs.items() if v}
            if lhs != rhs and bad_ef is None:
                bad_ef = (A.format_monomial(a), A.format_monomial(b))
    rep.claim(f"F(ab) = F(a)b + aF(b) + F(a)G(b) on all {pairs} basis pairs through degree {D}",
              None, bad_ef)
    bad_sf = None
    for d, a in mono:
        if d == 0:
            continue
        for n in range(1, sf_max + 1):
            if n * d > D:
                break
            x = {a: 1}
            lhs = ops.F(A.power(x, n))
            Ga = ops.G(x)
            s: dict = {}
            for i in range(n):
                term = A.multiply(A.power(x, n - 1 - i), A.power(Ga, i))
                c = lucas_binomial(n, n - 1 - i, p)
                for k, v in term.items():
                    s[k] = (s.get(k, 0) + c * v) % p
            rhs = A.multiply(ops.F(x), s)
            if lhs != rhs and bad_sf is None:
                bad_sf = (A.format_monomial(a), n)
    rep.claim(f"F(a^n) = F(a) Σ C(n, n-1-i) a^(n-1-i) G(a)^i for n <= {sf_max}", None, bad_sf)
    zero = [A.format_monomial(m) for d, m in mono if d > 0 and not ops.F({m: 1})]
    rep.claim("F is injective in positive degrees", [], zero)
    rep.claim("G(m) = (q^(|m|/2) - 1) m on the basis (Adams operation on the u-line)", True,
              all(ops.G({m: 1}) == ({m: (params.q ** (d // 2) - 1) % p} if (params.q ** (d // 2) - 1) % p else {})
                  for d, m in mono if ops.has_u and ops._split(m)[1] == 0))
    dims = A.poincare(D).dims
    rep.claim("P_r(u) ⊗ Γ(σx) is one-dimensional in each even degree and zero in odd degrees",
              [1 if d % 2 == 0 else 0 for d in range(D + 1)], list(dims))
    k = 0
    ok = True
    while params.p ** k * 2 * params.r <= D:
        n = params.p ** k
        got = ops.F(A.gen("sigma_x", n))
        want = {ops._mono(params.r - 1, n - 1): ops.unit}
        ok &= got == want
        k += 1
    rep.claim("F(γ_{p^k}(σx)) ≐ u^{r-1} γ_{p^k - 1}(σx)", True, ok)
    return rep
