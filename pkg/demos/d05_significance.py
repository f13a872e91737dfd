"""
Error reduction and significance
================================

Accuracy gains are reported as the share of baseline errors removed.  Two
systems scored on samples of the same size can be compared with an exact
two-proportion test; a single score can be tested against a fixed rate.
"""

from fractions import Fraction

from attachtbl.evaluation import (
    binomial_significance,
    binomial_test_against_rate,
    error_reduction,
    fmt_percent,
)

# Rounded inputs give a slightly different reduction than exact counts do.
print(fmt_percent(error_reduction(Fraction(831, 1000), Fraction(590, 1000))))
print(fmt_percent(error_reduction(Fraction(2575, 3097), Fraction(1828, 3097))))

# 83.1% against 84.5% on 3000 items each is not a significant difference...
print("two samples:", round(binomial_significance(2493, 3000, 2535, 3000), 4))

# ...but 2575 of 3097 against a fixed 84.5% rate is.
print("fixed rate:", round(binomial_test_against_rate(2575, 3097, 0.845), 4))

# Past 10,000 items per sample the normal approximation takes over.
print("large:", binomial_significance(8000, 20000, 8200, 20000))
