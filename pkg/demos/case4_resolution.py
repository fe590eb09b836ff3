"""The explicit resolution over (HF_p)_*K in case (4), at q = 4, p = 5.

Prints the generators with their boundaries, checks that the complex is
exact in low degrees, and compares Tor with a machine-built minimal resolution.
"""
from __future__ import annotations

from thhfq import classify
from thhfq.homological import ahl3_algebra, ahl3_resolution, minimal_resolution
from thhfq.scenarios import totals

N = 10


def main() -> None:
    params = classify(4, 5)
    print(f"q = 4, p = 5: case ({params.case_id}), r = {params.r}, k = {params.k}\n")

    res = ahl3_resolution(params)
    print(res.chart(), "\n")
    res.check_square_zero()
    print("bidegrees where exactness fails, total degree <= 10:", res.exactness_failures(N))

    explicit = totals(res.tor_dims(), N)
    generic = totals(minimal_resolution(ahl3_algebra(5, params.r), N).tor_dims(), N)
    print("Tor total dims, explicit:", explicit)
    print("Tor total dims, minimal: ", generic)


if __name__ == "__main__":
    main()
