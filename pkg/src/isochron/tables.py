"""Published closed forms for the low-order isochronous coefficients.

These are independent of the recursion in :mod:`isochron.isochrone_series`
and serve as its cross-check (``coeffs --check-paper-table`` and the tests).
"""

from __future__ import annotations

from fractions import Fraction as Q
from typing import Callable, Mapping


def _odd_table() -> dict[int, Callable[[Mapping[int, Q]], Q]]:
    def a3(a):
        return Q(10, 9) * a[2] ** 2

    def a5(a):
        return Q(14, 5) * a[2] * a[4] - Q(56, 27) * a[2] ** 4

    def a7(a):
        a2, a4, a6 = a[2], a[4], a[6]
        return Q(-592, 45) * a4 * a2**3 + Q(848, 81) * a2**6 + Q(24, 7) * a2 * a6 + Q(36, 25) * a4**2

    def a9(a):
        a2, a4, a6, a8 = a[2], a[4], a[6], a[8]
        return (Q(110, 27) * a2 * a8 - Q(440, 21) * a2**3 * a6 + Q(27808, 243) * a2**5 * a4
                - Q(536800, 6561) * a2**8 - Q(1144, 45) * a2**2 * a4**2 + Q(22, 7) * a4 * a6)

    def a11(a):
        a2, a4, a6, a8, a10 = a[2], a[4], a[6], a[8], a[10]
        return (Q(52, 11) * a2 * a10 + Q(57616, 135) * a2**4 * a4**2 - Q(2600, 81) * a2**3 * a8
                + Q(125008, 567) * a2**5 * a6 - Q(4837664, 3645) * a2**7 * a4 + Q(5631808, 6561) * a2**10
                - Q(2392, 125) * a2 * a4**3 - Q(7384, 105) * a2**2 * a4 * a6 + Q(52, 15) * a4 * a8
                + Q(78, 49) * a6**2)

    def a13(a):
        a2, a4, a6, a8, a10, a12 = a[2], a[4], a[6], a[8], a[10], a[12]
        return (-72 * a2 * a6 * a4**2 - Q(2632, 27) * a2**2 * a4 * a8 + Q(38176, 27) * a2**4 * a4 * a6
                + Q(70, 13) * a2 * a12 + Q(42, 11) * a4 * a10 + Q(10, 3) * a6 * a8
                - Q(9430624, 1215) * a4**2 * a2**6 + Q(375769408, 19683) * a4 * a2**9
                + Q(166544, 225) * a4**3 * a2**3 - Q(920, 21) * a2**2 * a6**2
                - Q(2190080, 729) * a2**7 * a6 - Q(14000, 297) * a2**3 * a10
                + Q(300944, 729) * a2**5 * a8 - Q(74681600, 6561) * a2**12 - Q(616, 125) * a4**4)

    return {3: a3, 5: a5, 7: a7, 9: a9, 11: a11, 13: a13}


ODD_COEFFICIENT_TABLE = _odd_table()
"""``n -> a_n`` as a polynomial in the even coefficients ``a[2], ..., a[12]``."""


def g_expansion_from_b(b0, b1, b2) -> list:
    """Coefficients of ``x^0 .. x^7`` of the isochronous ``g`` in terms of ``b_0, b_1, b_2``."""
    b0, b1, b2 = Q(b0), Q(b1), Q(b2)
    return [
        Q(0),
        Q(1),
        -Q(3, 2) * b0,
        Q(5, 2) * b0**2,
        -Q(5, 24) * b1 - Q(35, 8) * b0**3,
        Q(7, 45) * b0 * (Q(405, 8) * b0**3 + Q(45, 8) * b1),
        -Q(7, 120) * b2 - Q(21, 8) * b0**2 * b1 - Q(231, 16) * b0**5,
        Q(55, 8) * b0**3 * b1 + Q(429, 16) * b0**6 + Q(3, 10) * b0 * b2 + Q(1, 16) * b1**2,
    ]


def check_odd_table(a_even: Mapping[int, Q], a_odd: Mapping[int, Q]) -> dict[int, bool]:
    """Compare recursion output with the closed forms, index by index."""
    full = {k: Q(a_even.get(k, 0)) for k in range(2, 13, 2)}
    return {n: (n in a_odd and a_odd[n] == f(full)) for n, f in ODD_COEFFICIENT_TABLE.items()}
