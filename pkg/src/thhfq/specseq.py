"""Multiplicative bigraded spectral-sequence pages.

A page is stored as subquotients of the E^2 algebra: in every bidegree we keep
row-reduced bases of the cycles Z (elements surviving all earlier
differentials) and of the boundaries B (elements already hit), both written in
the monomial basis of E^2.  Later differentials are derivations of E^2 that
commute with the earlier ones; they are applied to representatives, and the
engine asserts that cycles go to cycles and boundaries to boundaries.

Truncation: a page computed through total degree N is exact only through
N - (number of differentials applied), because a class in the top degree may
be hit from the first uncomputed degree.  ``exact_through`` records this.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .algebra import Element, Kind, Monomial, PoincareSeries, Presentation, add_into
from .derivation import Derivation, DifferentialError, DifferentialSpec
from .fp import Coordinates, extend_basis, left_kernel, matmul, rank, rref

__all__ = [
    "HOMOLOGICAL",
    "BRUN",
    "BigradedPage",
    "run_page",
    "run_pages",
    "check_collapse",
    "einfty_compare",
    "CompareReport",
]

HOMOLOGICAL = "homological"
BRUN = "brun"
CONVENTIONS = (HOMOLOGICAL, BRUN)

Bideg = tuple[int, int]


def _rows(a: np.ndarray, n: int) -> np.ndarray:
    return np.asarray(a, dtype=np.int64).reshape(-1, n)


def _span(rows: np.ndarray, n: int, p: int) -> np.ndarray:
    rows = _rows(rows, n)
    if rows.shape[0] == 0:
        return rows
    return rref(rows, p)[0]


def _contains(big: np.ndarray, small: np.ndarray, n: int, p: int) -> bool:
    small = _rows(small, n)
    if small.shape[0] == 0 or not small.any():
        return True
    big = _rows(big, n)
    return rank(np.vstack([big, small]), p) == rank(big, p) if big.shape[0] else not small.any()


@dataclass
class BigradedPage:
    """E^r of a multiplicative spectral sequence, truncated at total degree ``bound``."""

    pres: Presentation
    r: int
    bound: int
    convention: str = BRUN
    exact_through: int = 0
    cycles: dict[Bideg, np.ndarray] = field(default_factory=dict, repr=False)
    boundaries: dict[Bideg, np.ndarray] = field(default_factory=dict, repr=False)
    history: list[dict] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.convention not in CONVENTIONS:
            raise ValueError(f"unknown convention {self.convention!r}")

    @classmethod
    def initial(cls, pres: Presentation, bound: int, r: int = 2, convention: str = BRUN) -> "BigradedPage":
        page = cls(pres, r, bound, convention, bound)
        for b, monos in page.basis.items():
            n = len(monos)
            page.cycles[b] = np.eye(n, dtype=np.int64)
            page.boundaries[b] = np.zeros((0, n), dtype=np.int64)
        return page

    # -- structure --------------------------------------------------------

    @property
    def p(self) -> int:
        return self.pres.p

    @property
    def basis(self) -> dict[Bideg, list[Monomial]]:
        cache = self.__dict__.get("_basis")
        if cache is None:
            cache = self.pres.bigraded_basis(self.bound)
            self.__dict__["_basis"] = cache
        return cache

    def bidegrees(self) -> list[Bideg]:
        return sorted(self.basis)

    def dim(self, b: Bideg) -> int:
        if b not in self.cycles:
            return 0
        return self.cycles[b].shape[0] - self.boundaries[b].shape[0]

    def dims(self) -> dict[Bideg, int]:
        return {b: self.dim(b) for b in self.bidegrees() if self.dim(b)}

    def total_dims(self, D: int | None = None) -> PoincareSeries:
        D = self.exact_through if D is None else D
        if D > self.bound:
            raise ValueError(f"page only computed through degree {self.bound}")
        out = [0] * (D + 1)
        for (s, t), n in self.dims().items():
            if s + t <= D:
                out[s + t] += n
        return PoincareSeries(tuple(out))

    def euler(self, D: int | None = None) -> int:
        """Alternating sum over total degrees <= D (defaults to the computed bound)."""
        D = self.bound if D is None else D
        return sum((-1) ** (s + t) * n for (s, t), n in self.dims().items() if s + t <= D)

    def coords(self, x: Mapping[Monomial, int], b: Bideg) -> np.ndarray:
        """Coordinates of a reduced element in the monomial basis of bidegree ``b``."""
        pos = self.__dict__.setdefault("_pos", {})
        if b not in pos:
            pos[b] = {m: i for i, m in enumerate(self.basis.get(b, []))}
        v = np.zeros(len(pos[b]), dtype=np.int64)
        for m, c in self.pres.reduce(x).items():
            if m not in pos[b]:
                raise ValueError(f"term {self.pres.format_monomial(m)} not in bidegree {b}")
            v[pos[b][m]] = (v[pos[b][m]] + c) % self.p
        return v

    def representatives(self, b: Bideg) -> list[Element]:
        """Deterministic E^2-level representatives of a basis of E^r at ``b``."""
        if b not in self.cycles:
            return []
        n = len(self.basis[b])
        idx = extend_basis(self.boundaries[b], self.cycles[b], self.p) if n else []
        return [self.pres.element(self.basis[b], self.cycles[b][i]) for i in idx]

    def _rep_coords(self, b: Bideg) -> tuple[Coordinates, int]:
        cache = self.__dict__.setdefault("_coords", {})
        if b not in cache:
            n = len(self.basis[b])
            reps = self.representatives(b)
            rows = [self.boundaries[b]] + [self.coords(e, b).reshape(1, n) for e in reps]
            cache[b] = (Coordinates(np.vstack(rows) if n else np.zeros((0, 0), dtype=np.int64), self.p),
                        self.boundaries[b].shape[0])
        return cache[b]

    def classify(self, x: Mapping[Monomial, int]) -> tuple[Bideg, np.ndarray] | None:
        """Bidegree and coordinates (w.r.t. ``representatives``) of a cycle; None if x = 0 on this page.

        Raises ValueError when x is not a cycle on this page or not bihomogeneous.
        """
        x = self.pres.reduce(x)
        if not x:
            return None
        bidegs = {self.pres.bidegree(m) for m in x}
        if len(bidegs) != 1:
            raise ValueError("element is not bihomogeneous")
        b = bidegs.pop()
        if sum(b) > self.bound:
            raise ValueError("element beyond the computed range")
        coords, nb = self._rep_coords(b)
        v = self.coords(x, b)
        sol = coords.solve(v)
        if sol is None:
            raise ValueError(f"{self.pres.format(x)} is not a cycle on E^{self.r}")
        return b, sol[nb:]

    def is_zero_class(self, x: Mapping[Monomial, int]) -> bool:
        c = self.classify(x)
        return c is None or not c[1].any()

    def multiply(self, x: Mapping[Monomial, int], y: Mapping[Monomial, int]) -> tuple[Bideg, np.ndarray] | None:
        return self.classify(self.pres.multiply(x, y))

    def chart(self, D: int | None = None) -> str:
        """Plain-text chart: rows are filtration, columns total degree."""
        D = self.exact_through if D is None else D
        dims = {b: n for b, n in self.dims().items() if sum(b) <= D}
        if not dims:
            return "(empty)"
        smax = max(s for s, _ in dims)
        lines = []
        for s in range(smax, -1, -1):
            row = []
            for n in range(D + 1):
                k = dims.get((s, n - s), 0)
                row.append("." if k == 0 else (str(k) if k < 10 else "+"))
            lines.append(f"{s:>4} | " + "".join(row))
        lines.append("     +-" + "-" * (D + 1))
        ticks = "".join(str(n // 10 % 10) if n % 10 == 0 else " " for n in range(D + 1))
        lines.append("       " + ticks)
        return "\n".join(lines)

    def to_json(self, D: int | None = None) -> dict:
        D = self.exact_through if D is None else D
        return {
            "page": self.r,
            "convention": self.convention,
            "bound": self.bound,
            "exact_through": self.exact_through,
            "presentation": self.pres.to_json(),
            "dims": [{"filtration": s, "internal": t, "dim": n}
                     for (s, t), n in sorted(self.dims().items()) if s + t <= D],
            "total_dims": list(self.total_dims(D).dims),
            "history": self.history,
        }


def run_page(page: BigradedPage, spec: DifferentialSpec, D: int | None = None) -> BigradedPage:
    """Apply d^r given by ``spec`` to ``page`` and return E^{r+1}.

    If ``spec.page`` exceeds ``page.r`` the intermediate differentials are zero;
    the returned history records them as assumed.
    """
    if spec.page < page.r:
        raise DifferentialError(f"d^{spec.page} cannot act on E^{page.r}")
    if D is not None and D > page.bound:
        raise ValueError("D exceeds the page bound")
    p = page.p
    deriv = Derivation(page.pres, spec)
    new = BigradedPage(page.pres, spec.page + 1, page.bound, page.convention, page.exact_through - 1,
                       dict(page.cycles), dict(page.boundaries), list(page.history))
    new.__dict__["_basis"] = page.basis
    images: dict[Bideg, np.ndarray] = {}
    for b in page.bidegrees():
        src = page.basis[b]
        tb = deriv.target_bidegree(b)
        tgt = page.basis.get(tb, [])
        M = deriv.matrix(src, tgt) if tgt else None
        if M is None:
            for m in src:
                if deriv.apply_monomial(m):
                    raise DifferentialError(f"d({page.pres.format_monomial(m)}) lands outside the chart")
            continue
        Z = page.cycles[b]
        img = matmul(Z, M.T, p) if Z.shape[0] else np.zeros((0, len(tgt)), dtype=np.int64)
        if not _contains(page.cycles[tb], img, len(tgt), p):
            raise DifferentialError(f"d^{spec.page} maps cycles at {b} outside the cycles at {tb}")
        Bimg = matmul(page.boundaries[b], M.T, p) if page.boundaries[b].shape[0] else img[:0]
        if not _contains(page.boundaries[tb], Bimg, len(tgt), p):
            raise DifferentialError(f"d^{spec.page} is not well defined at {b}")
        images[b] = img
        # new cycles: z in Z with M z in span(B[tb])
        Bt = page.boundaries[tb]
        stacked = np.vstack([img, Bt]) if Bt.shape[0] else img
        K = left_kernel(stacked, p)
        if K.size:
            coeffs = K[:, : Z.shape[0]]
            Znew = _span(matmul(coeffs, Z, p), len(src), p)
        else:
            Znew = np.zeros((0, len(src)), dtype=np.int64)
        new.cycles[b] = Znew
    for b, img in images.items():
        tb = deriv.target_bidegree(b)
        n = len(page.basis[tb])
        new.boundaries[tb] = _span(np.vstack([page.boundaries[tb], img]), n, p)
    for b, img in images.items():
        tb = deriv.target_bidegree(b)
        n = len(page.basis[tb])
        if not _contains(new.cycles[tb], img, n, p):
            raise DifferentialError(f"d^{spec.page} ∘ d^{spec.page} != 0 at {b}")
    # the next page's dimension is kernel minus image, by construction; double-check Euler
    for b in page.bidegrees():
        if new.cycles[b].shape[0] < new.boundaries[b].shape[0]:
            raise DifferentialError(f"boundaries exceed cycles at {b}")
    if new.euler() != page.euler():
        raise DifferentialError("Euler characteristic changed across a page")
    entry = {"page": spec.page, "label": spec.label, "conjectural": spec.conjectural,
             "assignments": [a.to_json() for a in spec.assignments]}
    if spec.page > page.r:
        entry["assumed_zero_pages"] = list(range(page.r, spec.page))
    new.history.append(entry)
    return new


def run_pages(page: BigradedPage, specs: Iterable[DifferentialSpec]) -> list[BigradedPage]:
    """Apply specs in order; returns the list of pages including the input."""
    out = [page]
    for spec in specs:
        out.append(run_page(out[-1], spec))
    return out


def check_collapse(page: BigradedPage, D: int | None = None,
                   generators: Sequence[Bideg] | None = None,
                   verified_zero: Iterable[tuple[Bideg, int]] = ()) -> tuple[bool, tuple | None]:
    """Whether no differential d^s (s >= page.r) can be nonzero through total degree D.

    With ``generators`` (bidegrees of multiplicative generators of the page) only
    those sources are examined, which suffices by Leibniz.  ``verified_zero``
    lists (bidegree, s) pairs already shown to carry no differential.
    Returns (True, None) or (False, (source, target, s)).
    """
    D = page.exact_through if D is None else D
    dims = page.dims()
    ok = set(verified_zero)
    sources = sorted(generators) if generators is not None else sorted(dims)
    for (s, t) in sources:
        if s + t > D or not dims.get((s, t)):
            continue
        for r in range(page.r, s + 1):
            tgt = (s - r, t + r - 1)
            if dims.get(tgt) and ((s, t), r) not in ok:
                return False, ((s, t), tgt, r)
    return True, None


@dataclass
class CompareReport:
    bigraded_match: bool
    poincare_match: bool
    structure_match: bool | None
    mismatches: list[str]
    computed: list[int]
    expected: list[int]

    @property
    def ok(self) -> bool:
        return self.bigraded_match and self.poincare_match and self.structure_match is not False

    def to_json(self) -> dict:
        return {"bigraded_match": self.bigraded_match, "poincare_match": self.poincare_match,
                "structure_match": self.structure_match, "mismatches": self.mismatches,
                "computed": self.computed, "expected": self.expected}


def _image_of_monomial(page: BigradedPage, claimed: Presentation, m: Monomial,
                       mapping: Mapping[str, object]) -> Element:
    pres = page.pres
    acc = pres.one()
    for e, g in zip(m, claimed.generators):
        if not e:
            continue
        img = mapping[g.name]
        if isinstance(img, tuple) and img[0] == "dp":
            # gamma_e of gamma_n(y) goes to gamma_{e*n}(y), n a power of p
            _, src, n = img
            piece = pres.gen(src, e * n)
        else:
            x = pres.parse(img) if isinstance(img, str) else img
            if g.kind is Kind.DIVIDED:
                if e >= page.p:
                    raise ValueError(f"divided powers of {g.name} beyond p need a ('dp', gen, n) image")
                fact = 1
                for i in range(2, e + 1):
                    fact = fact * i % page.p
                piece = {mm: c * pow(fact, -1, page.p) % page.p for mm, c in pres.power(x, e).items()}
            else:
                piece = pres.power(x, e)
        acc = pres.multiply(acc, piece)
    return acc


def einfty_compare(einfty: BigradedPage, claimed: Presentation, D: int | None = None,
                   mapping: Mapping[str, object] | None = None,
                   bigraded: bool = True) -> CompareReport:
    """Compare a computed page with a claimed presentation.

    Always compares total-degree Poincaré series (and bigraded dims when
    ``bigraded``).  With ``mapping`` (claimed generator -> page element, or
    ``("dp", name, n)`` for divided powers) it also checks that the induced
    map sends every claimed basis monomial to a cycle, is injective in each
    bidegree, and kills every claimed relation.
    """
    D = einfty.exact_through if D is None else D
    mism: list[str] = []
    comp = einfty.total_dims(D)
    exp = claimed.poincare(D)
    pmatch = comp.dims == exp.dims
    if not pmatch:
        for n, (a, b) in enumerate(zip(comp.dims, exp.dims)):
            if a != b:
                mism.append(f"total degree {n}: computed {a}, claimed {b}")
    bmatch = True
    if bigraded:
        cb = {b: n for b, n in einfty.dims().items() if sum(b) <= D}
        eb: dict[Bideg, int] = {}
        for b, monos in claimed.bigraded_basis(D).items():
            eb[b] = len(monos)
        for b in sorted(set(cb) | set(eb)):
            if cb.get(b, 0) != eb.get(b, 0):
                bmatch = False
                mism.append(f"bidegree {b}: computed {cb.get(b, 0)}, claimed {eb.get(b, 0)}")
    smatch = None
    if mapping is not None:
        smatch = True
        by_bideg: dict[Bideg, list[np.ndarray]] = {}
        for d in range(D + 1):
            for m in claimed.basis(d):
                img = _image_of_monomial(einfty, claimed, m, mapping)
                try:
                    c = einfty.classify(img)
                except ValueError as exc:
                    smatch = False
                    mism.append(f"{claimed.format_monomial(m)}: {exc}")
                    continue
                if c is None:
                    smatch = False
                    mism.append(f"{claimed.format_monomial(m)} maps to zero")
                    continue
                b, v = c
                if b != claimed.bidegree(m) and bigraded:
                    smatch = False
                    mism.append(f"{claimed.format_monomial(m)} maps to bidegree {b}")
                by_bideg.setdefault(b, []).append(v)
        for b, vs in by_bideg.items():
            if rank(np.array(vs), einfty.p) != len(vs):
                smatch = False
                mism.append(f"images not independent at {b}")
        for rel in claimed.relation_elements():
            if claimed.degree(next(iter(rel))) > D:
                continue
            img: Element = {}
            for m, c in rel.items():
                add_into(img, _image_of_monomial(einfty, claimed, m, mapping), c, einfty.p)
            if not einfty.is_zero_class(img):
                smatch = False
                mism.append(f"relation {claimed.format(rel)} fails")
    return CompareReport(bmatch, pmatch, smatch, mism, list(comp.dims), list(exp.dims))
