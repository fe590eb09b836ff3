"""Two computations in case (1) at q = 2, p = 5.

First, the comodule primitives of (HF_p)_*(V(1) ∧ THH(K)) in degree 49 for each
value of the free coaction parameter.  Second, the homology of the small DGA
whose Poincaré series should match Ω∞ ⊗ P(μ2) ⊗ Γ(b).
"""
from __future__ import annotations

from thhfq import classify
from thhfq.scenarios import verify_theorem
from thhfq.steenrod import v1_thh_comodule


def main() -> None:
    for c in range(1, 5):
        M = v1_thh_comodule(5, c=c, bound=49)
        print(f"c = {c}: basis in degree 49 has {len(M.basis(49))} elements, "
              f"{len(M.primitives(49))} primitives")
    print()
    print(verify_theorem("dga-case1", classify(2, 5), 80).to_text())


if __name__ == "__main__":
    main()
