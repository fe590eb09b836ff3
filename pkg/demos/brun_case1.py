"""Walk through the Brun spectral sequence for THH(K; HF_p) at q = 2, p = 5.

Run with ``python3 demos/brun_case1.py``.  Each page is printed as a chart
(filtration across, internal degree up) together with its total dimensions.
"""
from __future__ import annotations

from thhfq import BigradedPage, DifferentialSpec, classify, einfty_compare, run_page
from thhfq.presets import sset2_e2, thhkfp_claim, thhkfp_mapping
from thhfq.scenarios import possible_differentials

D = 40


def show(title: str, page: BigradedPage) -> None:
    print(f"== {title}: E^{page.r}, exact through total degree {page.exact_through}")
    print(page.chart(24))
    print("total dims:", list(page.total_dims(24).dims))
    print()


def main() -> None:
    params = classify(2, 5)
    p = params.p
    print(f"q = {params.q}, p = {p}: r = {params.r}, v = {params.v}, case ({params.case_id})\n")

    E2 = BigradedPage.initial(sset2_e2(params, D), D + 3)
    show("start", E2)
    lam = E2.pres.generator("lambda1").bidegree
    print("room for a differential on lambda1:", possible_differentials(E2, lam))

    E = run_page(E2, DifferentialSpec.of(2 * p - 1, lambda1="sigma_x"))
    show("after d(lambda1) = sigma_x", E)
    E = run_page(E, DifferentialSpec.of(2 * p, mu1="sigma_y"))
    show("after d(mu1) = sigma_y", E)

    result = einfty_compare(E, thhkfp_claim(params, D), D, mapping=thhkfp_mapping(params))
    print("matches the closed-form answer through", D, ":", result.ok)


if __name__ == "__main__":
    main()
