"""Named presentations, so degree data is never typed by hand.

Each preset is a function of (CaseParams, D).  Bigraded presets put the
filtration degree first: a generator at (s, t) has filtration s and internal
degree t.  Degrees follow the case parameters, so every preset works at any
prime p >= 5 (a few are tied to one case and say so).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .algebra import Generator, Presentation, dpow, ext, poly, trunc
from .ktheory import CaseParams, multf_algebra, v0_closed_form, v1_closed_form

__all__ = ["Preset", "PRESETS", "get_preset", "build_preset", "sset2_e2", "sset3_e2",
           "thhkfp_claim", "omega_infinity", "bokstedt_e2_case2", "einfty_bss2"]


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    build: Callable[[CaseParams, int], Presentation]
    case: int | None = None
    bigraded: bool = False


def _k_generators(p: int, D: int, first_xi: int = 1, first_tau: int = 2, sigma: bool = False,
                  filtration: int = 0) -> list[Generator]:
    """xi_n (2p^n - 2) and tau_n (2p^n - 1); with ``sigma`` their suspensions in filtration 1."""
    gens: list[Generator] = []
    n = first_xi
    while 2 * p ** n - 2 <= D:
        d = 2 * p ** n - 2
        if sigma:
            gens.append(ext(f"sigma_xi{n}", d, 1))
        else:
            gens.append(poly(f"xi{n}", d, filtration))
        if n >= first_tau and 2 * p ** n - 1 <= D:
            if sigma:
                gens.append(dpow(f"sigma_tau{n}", 2 * p ** n - 1, 1))
            else:
                gens.append(ext(f"tau{n}", 2 * p ** n - 1, filtration))
        n += 1
    return gens


# -- K itself -------------------------------------------------------------------

def hfp_k(params: CaseParams, D: int) -> Presentation:
    from .steenrod import homology_of_K_comodule
    return homology_of_K_comodule(params, bound=max(D, 1)).module


def hfp_k_case4(params: CaseParams, D: int) -> Presentation:
    from .steenrod import homology_of_K_case4
    return homology_of_K_case4(params, min(D, 2 * params.p))


def dual_steenrod(params: CaseParams, D: int) -> Presentation:
    from .steenrod import DualSteenrod
    return DualSteenrod(params.p, D).pres


def thh_hz(params: CaseParams, D: int) -> Presentation:
    p = params.p
    return Presentation(p, (ext("lambda1", 2 * p - 1), poly("mu1", 2 * p)), name="E(λ1)⊗P(μ1)")


def v0_tensor(params: CaseParams, D: int) -> Presentation:
    r = params.r
    return Presentation(params.p, (dpow("sigma_x", 2 * r), ext("sigma_y", 2 * r + 1)), name="Γ(σx)⊗E(σy)")


# -- the Brun spectral sequence for THH(K; HF_p) ---------------------------------

def sset2_e2(params: CaseParams, D: int) -> Presentation:
    """Γ(σx) ⊗ E(σy) ⊗ E(λ1) ⊗ P(μ1): σx at (0, 2r), σy at (0, 2r+1), λ1 at (2p-1, 0), μ1 at (2p, 0)."""
    p, r = params.p, params.r
    return Presentation(p, (dpow("sigma_x", 2 * r, 0), ext("sigma_y", 2 * r + 1, 0),
                            ext("lambda1", 0, 2 * p - 1), poly("mu1", 0, 2 * p)), name="sset2 E2")


def thhkfp_claim(params: CaseParams, D: int) -> Presentation:
    """The claimed THH_*(K; HF_p), placed at the bidegrees of its E∞ representatives."""
    p, r = params.p, params.r
    if params.case_id == 1:
        gens = (poly("mu1p", 0, 2 * p * p), ext("mu1pm1_sigma_y", 2 * r + 1, 2 * p * (p - 1)),
                ext("lambda1_sigma_xpm1", 2 * r * (p - 1), 2 * p - 1),
                dpow("gamma_p_sigma_x", 2 * r * p, 0))
        name = "P(μ1^p)⊗E(μ1^(p-1)σy, λ1σx^(p-1))⊗Γ(γ_p(σx))"
    elif params.case_id == 2:
        gens = (poly("mu1p", 0, 2 * p * p), ext("mu1pm1_sigma_y", 2 * r + 1, 2 * p * (p - 1)),
                ext("lambda1", 0, 2 * p - 1), dpow("sigma_x", 2 * r, 0))
        name = "P(μ1^p)⊗E(μ1^(p-1)σy, λ1)⊗Γ(σx)"
    else:
        gens = (poly("mu1", 0, 2 * p), ext("sigma_y", 2 * r + 1, 0), ext("lambda1", 0, 2 * p - 1),
                dpow("sigma_x", 2 * r, 0))
        name = "P(μ1)⊗E(σy, λ1)⊗Γ(σx)"
    return Presentation(p, gens, name=name)


THHKFP_MAPPING = {
    1: {"mu1p": "mu1^{p}", "mu1pm1_sigma_y": "mu1^{pm1}*sigma_y", "lambda1_sigma_xpm1": "lambda1*sigma_x^{pm1}",
        "gamma_p_sigma_x": ("dp", "sigma_x", "{p}")},
    2: {"mu1p": "mu1^{p}", "mu1pm1_sigma_y": "mu1^{pm1}*sigma_y", "lambda1": "lambda1",
        "sigma_x": ("dp", "sigma_x", 1)},
    3: {"mu1": "mu1", "sigma_y": "sigma_y", "lambda1": "lambda1", "sigma_x": ("dp", "sigma_x", 1)},
}


def thhkfp_mapping(params: CaseParams) -> dict:
    """Claimed generator -> E∞ representative, for the structure comparison."""
    table = THHKFP_MAPPING[min(params.case_id, 3)]
    out = {}
    for k, v in table.items():
        if isinstance(v, tuple):
            n = v[2] if isinstance(v[2], int) else int(v[2].format(p=params.p))
            out[k] = ("dp", v[1], n)
        else:
            out[k] = v.format(p=params.p, pm1=params.p - 1)
    return out


# -- Veen E2 pages ----------------------------------------------------------------

def veen_e2_case1(params: CaseParams, D: int) -> Presentation:
    """E(σξ̃1^p, σξ̃2, ...) ⊗ Γ(σb, στ̃2, ...), each σa at (1, |a|)."""
    p = params.p
    gens = [ext("sigma_xi1p", 2 * p * (p - 1), 1), dpow("sigma_b", 2 * p * (p - 1) - 1, 1)]
    gens += _k_generators(p, D, first_xi=2, sigma=True)
    return Presentation(p, tuple(g for g in gens if g.total <= D + 1), name="Veen E2, case (1)")


def veen_e2_case2(params: CaseParams, D: int) -> Presentation:
    """E(σξ̃1, σξ̃2, ...) ⊗ Γ(σx, στ̃2, ...), each σa at (1, |a|)."""
    p = params.p
    gens = [dpow("sigma_x", 2 * params.r - 1, 1)] + _k_generators(p, D, sigma=True)
    return Presentation(p, tuple(g for g in gens if g.total <= D + 1), name="Veen E2, case (2)")


# -- Bökstedt spectral sequence, case (2) ----------------------------------------

def bokstedt_e2_case2(params: CaseParams, D: int, with_k: bool = True) -> Presentation:
    """(HF_p)_*K ⊗ E(σξ̃1, σξ̃2, ...) ⊗ Γ(σx, στ̃2, ...); K in filtration 0, σ-classes in filtration 1.

    ``with_k=False`` drops the (inert, filtration 0) factor (HF_p)_*K.
    """
    p = params.p
    gens: list[Generator] = []
    if with_k:
        gens.append(ext("x", 2 * params.r - 1))
        gens += _k_generators(p, D)
    gens.append(dpow("sigma_x", 2 * params.r - 1, 1))
    gens += _k_generators(p, D, sigma=True)
    return Presentation(p, tuple(g for g in gens if g.total <= D), name="Bökstedt E2, case (2)")


def einfty_bss2(params: CaseParams, D: int, with_k: bool = True) -> Presentation:
    """(HF_p)_*K ⊗ E(σξ̃1, σξ̃2) ⊗ P_p(στ̃2, στ̃3, ...) ⊗ Γ(σx), same bidegrees as the E2 classes."""
    p = params.p
    gens: list[Generator] = []
    if with_k:
        gens.append(ext("x", 2 * params.r - 1))
        gens += _k_generators(p, D)
    gens.append(dpow("sigma_x", 2 * params.r - 1, 1))
    for g in _k_generators(p, D, sigma=True):
        if g.name.startswith("sigma_xi") and int(g.name[8:]) > 2:
            continue
        if g.name.startswith("sigma_tau"):
            g = trunc(g.name, g.degree, p, g.filtration)
        gens.append(g)
    return Presentation(p, tuple(g for g in gens if g.total <= D), name="E∞ of the Bökstedt s.s., case (2)")


# -- the Brun spectral sequence for V(1)_*THH(K) -----------------------------------

def sset3_e2(params: CaseParams, D: int) -> Presentation:
    """V(1)_*K (internal degree) ⊗ THH_*(K; HF_p) (filtration)."""
    p, r, k = params.p, params.r, params.k
    x = ext("x", 2 * r - 1, 0)
    if params.case_id == 1:
        gens = (x, ext("a", 0, p * (2 * p - 2) + 1), ext("lambda2", 0, 2 * p * p - 1),
                poly("mu2", 0, 2 * p * p), dpow("b", 0, p * (2 * p - 2)))
        return Presentation(p, gens, name="sset3 E2, case (1)")
    if params.case_id == 2:
        gens = (x, ext("lambda1", 0, 2 * p - 1), ext("lambda2", 0, 2 * p * p - 1),
                dpow("sigma_x", 0, 2 * p - 2), poly("mu2", 0, 2 * p * p))
        return Presentation(p, gens, name="sset3 E2, case (2)")
    gens = [x, trunc("y", 2 * r, k)] if k > 1 else [x]
    gens += [dpow("sigma_x", 0, 2 * r), ext("sigma_y", 0, 2 * r + 1),
             ext("lambda1", 0, 2 * p - 1), poly("mu1", 0, 2 * p)]
    rels = (f"x*y^{k - 1}",) if params.case_id == 4 and k > 1 else ()
    return Presentation(p, tuple(gens), rels, name=f"sset3 E2, case ({params.case_id})")


def omega_infinity(params: CaseParams, D: int) -> Presentation:
    """E(x, e) ⊗ P_2(c) ⊗ P_2(d) / (xe, xc, de, dc, ec + xd)."""
    p = params.p
    gens = (ext("x", 2 * p - 3), ext("e", p * (2 * p - 2) + 1), trunc("c", 2 * p * p + 2 * p - 4, 2),
            trunc("d", 4 * p * p - 2 * p, 2))
    return Presentation(p, gens, ("x*e", "x*c", "d*e", "d*c", "e*c + x*d"), name="Ω∞")


def v1_thh_case1(params: CaseParams, D: int) -> Presentation:
    p = params.p
    om = omega_infinity(params, D)
    rest = Presentation(p, (poly("mu2", 2 * p * p), dpow("b", p * (2 * p - 2))))
    return om.tensor(rest, name="Ω∞⊗P(μ2)⊗Γ(b)")


def v1_thh_case2(params: CaseParams, D: int) -> Presentation:
    p = params.p
    gens = (ext("x", 2 * p - 3), ext("lambda1", 2 * p - 1), ext("lambda2", 2 * p * p - 1),
            poly("mu2", 2 * p * p), dpow("gamma1p", 2 * p - 2))
    return Presentation(p, gens, name="E(x)⊗E(λ1,λ2)⊗P(μ2)⊗Γ(γ1')")


def dga_case1(params: CaseParams, D: int) -> Presentation:
    """E(x, a, λ2) ⊗ P(μ2) ⊗ Γ(b), all in filtration 0."""
    p = params.p
    gens = (ext("x", 2 * p - 3), ext("a", p * (2 * p - 2) + 1), ext("lambda2", 2 * p * p - 1),
            poly("mu2", 2 * p * p), dpow("b", p * (2 * p - 2)))
    return Presentation(p, gens, name="E(x,a,λ2)⊗P(μ2)⊗Γ(b)")


def v1_thh_homology(params: CaseParams, D: int) -> Presentation:
    from .steenrod import v1_thh_comodule
    return v1_thh_comodule(params.p, bound=max(D, 1)).module


PRESETS: dict[str, Preset] = {pr.name: pr for pr in [
    Preset("v0-K", "V(0)_*K = E(x) ⊗ P(y), |x| = 2r-1, |y| = 2r", lambda c, D: v0_closed_form(c)),
    Preset("v1-K", "V(1)_*K = E(x) ⊗ P_k(y)", lambda c, D: v1_closed_form(c)),
    Preset("hfp-K", "(HF_p)_*K with its named generators (cases 1-3)", hfp_k),
    Preset("hfp-K-case4", "E(x) ⊗ P_k(y)/(x y^{k-1}), valid through degree 2p", hfp_k_case4, 4),
    Preset("dual-steenrod", "A_* = P(ξ̄1, ...) ⊗ E(τ̄0, ...)", dual_steenrod),
    Preset("thh-hz", "THH_*(HZ_p; HF_p) = E(λ1) ⊗ P(μ1)", thh_hz),
    Preset("v0-tensor", "Γ(σx) ⊗ E(σy), |σx| = 2r, |σy| = 2r+1", v0_tensor),
    Preset("multf", "P_r(u) ⊗ Γ(σx), |u| = 2, |σx| = 2r", lambda c, D: multf_algebra(c)),
    Preset("sset2-e2", "E2 of the Brun spectral sequence for THH(K; HF_p)", sset2_e2, bigraded=True),
    Preset("thhkfp", "the claimed THH_*(K; HF_p) for the case of (q, p)", thhkfp_claim, bigraded=True),
    Preset("veen-e2-case1", "Tor over (HF_p)_*K in case (1), as a bigraded algebra", veen_e2_case1, 1, True),
    Preset("veen-e2-case2", "Tor over (HF_p)_*K in case (2), as a bigraded algebra", veen_e2_case2, 2, True),
    Preset("bokstedt-e2-case2", "E2 of the Bökstedt spectral sequence in case (2)", bokstedt_e2_case2, 2, True),
    Preset("einfty-bss2", "E∞ of the Bökstedt spectral sequence in case (2)", einfty_bss2, 2, True),
    Preset("omega-infinity", "Ω∞ = E(x,e) ⊗ P_2(c) ⊗ P_2(d)/(xe, xc, de, dc, ec+xd)", omega_infinity, 1),
    Preset("v1-thh-case1", "V(1)_*THH(K) in case (1): Ω∞ ⊗ P(μ2) ⊗ Γ(b)", v1_thh_case1, 1),
    Preset("v1-thh-case2", "V(1)_*THH(K) in case (2): E(x) ⊗ E(λ1,λ2) ⊗ P(μ2) ⊗ Γ(γ1')", v1_thh_case2, 2),
    Preset("sset3-e2-case1", "E2 of the Brun spectral sequence for V(1)_*THH(K), case (1)",
           lambda c, D: sset3_e2(c, D), 1, True),
    Preset("sset3-e2-case2", "E2 of the Brun spectral sequence for V(1)_*THH(K), case (2)",
           lambda c, D: sset3_e2(c, D), 2, True),
    Preset("sset3-e2", "E2 of the Brun spectral sequence for V(1)_*THH(K) for the case of (q, p)",
           sset3_e2, bigraded=True),
    Preset("dga-case1", "E(x, a, λ2) ⊗ P(μ2) ⊗ Γ(b) with d(λ2) = xa", dga_case1, 1),
    Preset("v1-thh-homology", "(HF_p)_*(V(1) ∧ THH(K)) in case (1) as an algebra", v1_thh_homology, 1),
]}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; known: {', '.join(sorted(PRESETS))}") from None


def build_preset(name: str, params: CaseParams, D: int) -> Presentation:
    preset = get_preset(name)
    if preset.case is not None and params.case_id != preset.case:
        raise ValueError(f"preset {name} belongs to case ({preset.case}), not case ({params.case_id})")
    return preset.build(params, D)
