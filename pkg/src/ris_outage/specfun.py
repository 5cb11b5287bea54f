"""Integer-order upper incomplete gamma evaluation and combinatorial helpers.

Every closed-form expression in this package reduces to sums of terms of the
form ``exp(a) * Gamma(n+1, x)`` with integer ``n``, so the incomplete gamma
function is evaluated through the exact finite-sum identity

    Gamma(n+1, x) = n! * exp(-x) * sum_{k=0}^{n} x^k / k!

instead of a general continued-fraction routine.  For integer order the sum
is exact up to rounding, which removes convergence concerns entirely.

The jointly scaled variant ``exp(a) * Gamma(n+1, x)`` exists because the
interference rate parameters grow without bound as interference power goes
to zero, making ``exp(a)`` alone overflow while the product stays moderate.
Only ``exp(a - x)`` with ``a <= x`` is ever formed.

All sums are accumulated with error-free-transformation summation
(``math.fsum``); callers embed these values in alternating-sign outer sums
that amplify rounding, so the inner values are kept as exact as doubles
allow.
"""

import math
import operator

# Largest admissible order: factorial(171) is not representable in a double.
MAX_ORDER = 170


def binom(n: int, k: int) -> int:
    """Exact binomial coefficient C(n, k), requiring 0 <= k <= n."""
    n = operator.index(n)
    k = operator.index(k)
    if n < 0:
        raise ValueError(f"binom requires n >= 0, got n={n}")
    if k < 0 or k > n:
        raise ValueError(f"binom requires 0 <= k <= n, got n={n}, k={k}")
    return math.comb(n, k)


def upper_gamma_int(n: int, x: float) -> float:
    """Gamma(n+1, x) = integral of t^n e^(-t) over [x, inf), for integer n >= 0.

    Exact finite-sum evaluation; strictly decreasing in x, equal to n! at
    x = 0.  Raises ValueError for x < 0 or n outside [0, MAX_ORDER].
    """
    return scaled_upper_gamma(n, 0.0, x)


def scaled_upper_gamma(n: int, a: float, x: float) -> float:
    """exp(a) * Gamma(n+1, x), computed without ever forming exp(a) alone.

    Requires x >= a >= 0 so the joint exponent a - x is nonpositive.  The
    closed-form outage expressions only ever need a = rate parameter and
    x = a + nonnegative shift, so the precondition always holds there.
    """
    n = operator.index(n)
    if n < 0 or n > MAX_ORDER:
        raise ValueError(f"order must be in [0, {MAX_ORDER}], got {n}")
    if not (a >= 0.0) or math.isnan(x):
        raise ValueError(f"scale exponent must satisfy a >= 0, got a={a}")
    if not (x >= a):
        raise ValueError(f"argument must satisfy x >= a, got x={x}, a={a}")

    # sum_{k=0}^{n} x^k / k!, built by multiplicative recurrence
    term = 1.0
    terms = [term]
    for k in range(1, n + 1):
        term *= x / k
        terms.append(term)
    series = math.fsum(terms)

    value = float(math.factorial(n)) * math.exp(a - x) * series
    if math.isinf(value):
        raise OverflowError(
            f"exp(a)*Gamma(n+1, x) overflows a double for n={n}, a={a}, x={x}"
        )
    return value
