"""How truncation error decays as the degree caps grow.

Polynomial symbols are represented exactly on any grid that contains
their degree, so every residual in this package is a float-noise zero
for them.  Rational inner symbols are different: the truncated column
space of b_a(z) = (z - a)/(1 - a z) is only approximately
shift-invariant, and the windowed residuals inherit a power-law decay in
the cap d driven by the Taylor tail of 1/(1 - a z).

Observed scalings for b_a(z1) embedded in two variables, margin-1
window (ratios printed below; d is the cap in z1):

  invariance defect        ~ |a|^(d+2)
  "reduces" residual       ~ |a|^(d+3)
  defect-identity residual ~ |a|^(2d)

The Beurling defect-product residual, by contrast, sits at machine zero
for every cap: the second variable's extended defect vanishes
identically on the window, flattening the product regardless of how
badly variable one is truncated.  Convergence statements about the
*detector* are therefore vacuous for separated symbols, and the honest
convergence story lives in the unconditional identity residuals.
"""

from hardylab import (
    AnalyticSymbol,
    TruncationGrid,
    beurling_criterion,
    identity_suite,
    quotient_data,
    submodule_projection,
)


def blaschke(a):
    return AnalyticSymbol.rational(
        {(1, 0): 1.0, (0, 0): -a}, {(0, 0): 1.0, (1, 0): -a}, nvars=2
    )


def decay_table(a):
    print(f"b_{a}(z1) embedded in n = 2, margin (1, 1):")
    header = f"  {'caps':<10}{'invariance':>14}{'reduces':>14}{'defect_id':>14}{'product':>14}"
    print(header)
    rows = []
    for d in (4, 6, 8):
        s = submodule_projection(blaschke(a), TruncationGrid((d, d)))
        data = quotient_data(s, margins=(1, 1))
        suite = identity_suite(data)
        product = beurling_criterion(data).residuals["beurling_defect_product"]
        rows.append((data.invariance, suite.residuals["reduces"],
                     suite.residuals["defect_identity"], product))
        print(f"  {(d, d)!s:<10}{rows[-1][0]:>14.3e}{rows[-1][1]:>14.3e}"
              f"{rows[-1][2]:>14.3e}{rows[-1][3]:>14.3e}")
    noise = 1e-14
    for name, idx, expected in (("invariance", 0, a ** 2),
                                ("reduces", 1, a ** 2),
                                ("defect_id", 2, a ** 4)):
        ratios = []
        for i in range(len(rows) - 1):
            if rows[i][idx] <= noise or rows[i + 1][idx] <= noise:
                ratios.append("(noise floor)")
            else:
                ratios.append(f"{rows[i + 1][idx] / rows[i][idx]:.2e}")
        print(f"  {name} cap-step ratios: {', '.join(ratios)}"
              f"   (power law predicts {expected:.2e})")
    print()


def main():
    decay_table(0.5)
    decay_table(0.05)


if __name__ == "__main__":
    main()
