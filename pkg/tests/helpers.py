"""Shared generators for randomized exact-arithmetic tests."""

from fractions import Fraction

from exocalc.core import ThetaField


def rand_frac(rng, lo=-9, hi=9, den=9) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


def rand_vec4(rng) -> tuple:
    return tuple(rand_frac(rng) for _ in range(4))


def rand_theta4(rng, eps: bool = False) -> ThetaField:
    theta = ThetaField.linear(tuple(rand_frac(rng, -4, 4, 5) for _ in range(4)))
    return theta.eps_scaled() if eps else theta
