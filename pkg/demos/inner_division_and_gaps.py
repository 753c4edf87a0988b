"""Dividing inner symbols and auditing the gap between their submodules.

If theta = phi psi with all three inner, then theta H^2 sits inside
phi H^2, and the quotient operation is matrix division on the truncated
grid: X = M_phi* M_theta recovers the coefficient table of psi row by
row.  The wrapper checks four residuals before accepting a division
(containment, analyticity of the quotient, isometry of psi, and exact
reconstruction), so a non-divisible pair is rejected rather than
mis-divided.

The interesting object is the gap M = (phi H^2) minus (theta H^2): it is
jointly invariant under the shifts, and the two descriptions of the same
quotient space, Q_theta minus M and Q_phi, must coincide.  The audit
measures both, then runs the Beurling detectors on N = M + theta H^2:
the gap of a genuine inner factorization passes, while a subspace that
merely contains theta H^2 generally fails.
"""

import numpy as np

from hardylab import (
    AnalyticSymbol,
    FactorizationError,
    TruncationGrid,
    beurling_submodule_check,
    divide_inner,
    dump_coefficient_text,
    invariant_subspace_from_factorization,
)


def polynomial_roundtrip():
    theta = AnalyticSymbol.monomial((1, 1))
    phi = AnalyticSymbol.monomial((1, 0))
    grid = TruncationGrid((6, 6))

    psi = divide_inner(theta, phi, grid)
    print("z1 z2 divided by z1 gives psi with coefficients:")
    print("  " + dump_coefficient_text(psi).strip().replace("\n", "\n  "))

    witness = invariant_subspace_from_factorization(theta, phi, grid)
    print(f"gap rank {witness.m_rank}")
    for name, value in sorted(witness.residuals.items()):
        print(f"  {name:<18} {value:.3e}")

    check = beurling_submodule_check(witness.m_basis, theta, grid)
    print(f"gap is a Beurling submodule inside the quotient: "
          f"{check.verdicts['condition_2']} / {check.verdicts['condition_3']}"
          f" (agree: {check.verdicts['conditions_agree']})")
    print()


def rational_roundtrip():
    # theta = b_a(z1) * z2 divided by phi = b_a(z1), a = 0.04
    a = 0.04
    theta = AnalyticSymbol.rational(
        {(1, 1): 1.0, (0, 1): -a}, {(0, 0): 1.0, (1, 0): -a}, nvars=2
    )
    phi = AnalyticSymbol.rational(
        {(1, 0): 1.0, (0, 0): -a}, {(0, 0): 1.0, (1, 0): -a}, nvars=2
    )
    grid = TruncationGrid((8, 8))
    psi = divide_inner(theta, phi, grid, margins=(4, 4))
    print(f"b_{a}(z1) z2 divided by b_{a}(z1): recovered coefficients")
    for k, v in sorted(psi.numerator.items()):
        print(f"  z^{k}: {v[0, 0].real:.15g}")
    print("(the quotient is z2 up to a truncation remnant below 1e-11; rational")
    print(" division needs wider margins because the divisor's truncated column")
    print(" space pollutes the top rows)")
    print()


def rejected_division():
    theta = AnalyticSymbol.monomial((0, 2))
    phi = AnalyticSymbol.monomial((1, 0))
    try:
        divide_inner(theta, phi, TruncationGrid((5, 5)))
    except FactorizationError as exc:
        print(f"z2^2 divided by z1 is refused: {exc}")


def main():
    polynomial_roundtrip()
    rational_roundtrip()
    rejected_division()


if __name__ == "__main__":
    main()
