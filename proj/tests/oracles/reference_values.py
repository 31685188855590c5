#!/usr/bin/env python3
"""Arbitrary-precision reference values for the C++ test suite.

Run with any Python that has mpmath. The printed constants are frozen into
tests/reference_values.hpp; rerun this script when adding cases.
"""

import mpmath as mp

mp.mp.dps = 50


def norm_const(n, s):
    """Kernel normalization giving the operator the Fourier symbol |xi|^(2s).

    The operator carries an overall factor 2 in front of its integral, so the
    constant here is one half of the usual fractional-Laplacian constant.
    """
    return (
        mp.power(2, 2 * s - 1)
        * mp.gamma(n / mp.mpf(2) + s)
        / (mp.power(mp.pi, n / mp.mpf(2)) * abs(mp.gamma(-s)))
    )


def ball_profile_constant(n, s):
    """Value of the operator applied to (1-|x|^2)_+^s inside the unit ball."""
    return (
        mp.power(2, 2 * s)
        * mp.gamma(1 + s)
        * mp.gamma(n / mp.mpf(2) + s)
        / mp.gamma(n / mp.mpf(2))
    )


def angular_moment(s):
    """J(s) = int_0^{pi/4} cos(t)^(2s-2) dt  (square-cell moment helper)."""
    return mp.quad(lambda t: mp.cos(t) ** (2 * s - 2), [0, mp.pi / 4])


def bump(t):
    # C_c^infty bump on (-1,1), normalized to 1 at the origin.
    if abs(t) >= 1:
        return mp.mpf(0)
    return mp.e * mp.exp(-1 / (1 - t * t))


def op1d(x0, s, half_width=mp.mpf(2)):
    """2 * int (u(x0)-u(y)) c_{1,s}/|x0-y|^{1+2s} dy for u(x)=bump(x/2)."""
    c = norm_const(1, s)

    def u(x):
        return bump(x / half_width)

    def integrand(z):
        return (2 * u(x0) - u(x0 + z) - u(x0 - z)) * mp.power(z, -1 - 2 * s)

    # The symmetric difference cancels to O(z^2); below delta the quadrature
    # would lose all digits, so use the Taylor series with exact moments.
    delta = mp.mpf("0.01")
    near = mp.mpf(0)
    for k in range(2, 16, 2):
        dk = mp.diff(u, x0, k)
        near += -2 * dk / mp.factorial(k) * mp.power(delta, k - 2 * s) / (k - 2 * s)

    z0 = half_width + abs(x0)
    pts = sorted({mp.mpf("0.1"), half_width - abs(x0), z0})
    body = mp.quad(integrand, [delta] + pts)
    tail = 2 * u(x0) * mp.power(z0, -2 * s) / (2 * s)
    # overall factor 2 carried by the operator in front of its integral
    return 2 * c * (near + body + tail)


def op2d_origin(s, half_width=mp.mpf(2)):
    """Radial evaluation at the origin for u(y)=bump(|y|/2), n=2."""
    c = norm_const(2, s)

    def u(rho):
        return bump(rho / half_width)

    def integrand(rho):
        return (u(0) - u(rho)) * mp.power(rho, -1 - 2 * s)

    delta = mp.mpf("0.01")
    near = mp.mpf(0)
    for k in range(2, 16, 2):
        dk = mp.diff(u, 0, k)
        near += -dk / mp.factorial(k) * mp.power(delta, k - 2 * s) / (k - 2 * s)

    body = mp.quad(integrand, [delta, mp.mpf("0.5"), half_width])
    tail = u(0) * mp.power(half_width, -2 * s) / (2 * s)
    return 4 * mp.pi * c * (near + body + tail)


def tail_series_check():
    # closed forms used for the truncation bounds
    for m in (1, 2, 3):
        s1 = mp.nsum(lambda k: mp.power(2, -k), [m + 1, mp.inf])
        s2 = mp.nsum(lambda k: k * mp.power(2, 1 - k), [m + 1, mp.inf])
        print(f"  m={m}:  sum 2^-k = {mp.nstr(s1, 20)}   sum k*2^(1-k) = {mp.nstr(s2, 20)}")


def main():
    print("== kernel normalization c(n,s) ==")
    for n, s in [(1, 0.25), (1, 0.5), (1, 0.75), (2, 0.25), (2, 0.3), (2, 0.5)]:
        print(f"  c({n},{s}) = {mp.nstr(norm_const(n, mp.mpf(s)), 20)}")

    print("== constant value on the unit ball for (1-|x|^2)_+^s ==")
    for n, s in [(1, 0.25), (1, 0.5), (1, 0.75), (2, 0.5)]:
        print(f"  G({n},{s}) = {mp.nstr(ball_profile_constant(n, mp.mpf(s)), 20)}")

    print("== angular moment J(s) ==")
    for s in [0.25, 0.3, 0.5, 0.75]:
        print(f"  J({s}) = {mp.nstr(angular_moment(mp.mpf(s)), 20)}")

    print("== geometric tail sums ==")
    tail_series_check()

    print("== 1D operator on bump(x/2), box-free reference ==")
    for x0, s in [(0, 0.3), (0, 0.5), (0.5, 0.5), (0, 0.75), (0.5, 0.75)]:
        print(f"  op1d(x0={x0}, s={s}) = {mp.nstr(op1d(mp.mpf(x0), mp.mpf(s)), 20)}")

    print("== 2D operator at origin on bump(|y|/2) ==")
    for s in [0.3, 0.5]:
        print(f"  op2d(0, s={s}) = {mp.nstr(op2d_origin(mp.mpf(s)), 20)}")


if __name__ == "__main__":
    main()
