import cmath
import math
import random
from fractions import Fraction

import numpy as np
import pytest

from minvec.characters import MinimalVectorSpec, enumerate_theta
from minvec.matgroups import Mat2Local, TorusSpec, a_mat, n_mat, torus_embed
from minvec.minimal import (convolution_check, coefficient_density,
                            matrix_coefficient, support_profile,
                            whittaker_closed, whittaker_oracle,
                            whittaker_support_scan)
from minvec.residues import LocalElement


@pytest.fixture(scope="module")
def mv31():
    spec = TorusSpec(3, 1)
    return MinimalVectorSpec.build(spec, enumerate_theta(spec)[0])


def test_matrix_coefficient_identity_and_outside(mv31):
    assert matrix_coefficient(mv31, Mat2Local.identity(3, 8)) == 1.0
    g = Mat2Local.from_rationals(3, (1, 1, 0, 1), 8)
    assert matrix_coefficient(mv31, g) == 0.0


def test_matrix_coefficient_magnitude_one_on_support(mv31):
    t = torus_embed(mv31.torus.quad(2, 1), mv31.torus)
    assert abs(abs(matrix_coefficient(mv31, t)) - 1.0) < 1e-15


def test_density_values():
    assert coefficient_density(MinimalVectorSpec.build(
        TorusSpec(3, 1), enumerate_theta(TorusSpec(3, 1))[0])) == Fraction(1, 6)


def test_convolution_exhaustive_31(mv31):
    rep = convolution_check(mv31, "exhaustive")
    assert rep.ok
    assert rep.density == Fraction(1, 6)
    assert rep.norm_square == Fraction(1, 6)
    assert rep.pairs_checked == 648 * 648


def test_convolution_random_32():
    spec = TorusSpec(3, 2)
    mv = MinimalVectorSpec.build(spec, enumerate_theta(spec)[0])
    rep = convolution_check(mv, "random", pairs=2000, seed=3)
    assert rep.ok and rep.pairs_checked == 2000


def test_whittaker_closed_on_diagonal(mv31):
    p, n = 3, 1
    M = 12
    b = mv31.support_unit()
    w = whittaker_closed(mv31, a_mat(LocalElement(p, -2, b, M)))
    assert w.in_support and abs(w.magnitude**2 - (p - 1)) < 1e-12 and w.phase.is_one
    # other unit class: zero
    w2 = whittaker_closed(mv31, a_mat(LocalElement(p, -2, (b + 1) % 3 or 1, M)))
    assert not w2.in_support
    # wrong valuation: zero
    for v in (-3, -1, 0, 1):
        assert not whittaker_closed(mv31, a_mat(LocalElement(p, v, b, M))).in_support


def test_whittaker_left_psi_equivariance(mv31):
    M = 12
    b = mv31.support_unit()
    g = a_mat(LocalElement(3, -2, b, M))
    x = LocalElement.from_rational(3, Fraction(2, 9), M)
    w1 = whittaker_closed(mv31, n_mat(x) * g)
    w0 = whittaker_closed(mv31, g)
    from minvec.residues import psi
    assert w1.in_support
    assert (w1.phase / w0.phase).r == psi(x).r


def test_whittaker_right_eigenvector_law(mv31):
    random.seed(2)
    M = 12
    spec = mv31.torus
    for _ in range(25):
        y = LocalElement(3, random.randint(-3, 0), random.choice([1, 2, 4, 5, 7, 8]), M)
        k = Mat2Local.from_rationals(3, [random.randrange(27) for _ in range(4)], M)
        if k.det.is_zero or k.det.v != 0:
            continue
        g = a_mat(y) * k
        t = torus_embed(spec.quad(random.choice([1, 2, 4]), random.randrange(9)), spec)
        w_g = whittaker_closed(mv31, g)
        w_gt = whittaker_closed(mv31, g * t)
        assert w_g.in_support == w_gt.in_support
        if w_g.in_support:
            from minvec.matgroups import torus_extract
            z = torus_extract(t, spec)
            th = mv31.theta.value((z.a.residue(2), z.b.residue(2)))
            assert (w_gt.phase / w_g.phase).r == th.r


def test_oracle_on_diagonal_support_constant(mv31):
    M = 12
    b = mv31.support_unit()
    vals = []
    for u in (b, b + 3, b + 6):
        w = whittaker_oracle(mv31, a_mat(LocalElement(3, -2, u % 9, M)), level=3)
        vals.append(w)
    assert max(abs(v - vals[0]) for v in vals) < 1e-12
    assert abs(vals[0]) > 0.1


def test_oracle_zero_at_unit_diagonal(mv31):
    M = 12
    assert abs(whittaker_oracle(mv31, a_mat(LocalElement(3, 0, 1, M)), level=3)) < 1e-12


def test_oracle_matches_closed_up_to_global_scalar(mv31):
    random.seed(4)
    M = 14
    ratios = []
    for _ in range(400):
        y = LocalElement(3, random.randint(-3, 0), random.choice([1, 2, 4, 5, 7, 8]), M)
        x = LocalElement.from_rational(3, Fraction(random.randint(-15, 15), 3 ** random.randint(0, 2)), M)
        k = Mat2Local.from_rationals(3, [random.randrange(27) for _ in range(4)], M)
        if k.det.is_zero or k.det.v != 0:
            continue
        g = n_mat(x) * a_mat(y) * k
        wc = whittaker_closed(mv31, g)
        if not wc.in_support:
            continue
        ratios.append(whittaker_oracle(mv31, g, level=3) / wc.to_complex())
    assert len(ratios) > 10
    r0 = ratios[0]
    assert max(abs(r / r0 - 1) for r in ratios) < 1e-9


def test_oracle_refinement_stability(mv31):
    M = 14
    b = mv31.support_unit()
    g = a_mat(LocalElement(3, -2, b, M))
    w3 = whittaker_oracle(mv31, g, level=3)
    w4 = whittaker_oracle(mv31, g, level=4)
    assert abs(w4 - w3) <= 1e-12 * abs(w3)


def test_support_profile_matches_scan(mv31):
    random.seed(9)
    M = 12
    for _ in range(20):
        k = Mat2Local.from_rationals(3, [random.randrange(27) for _ in range(4)], M)
        if k.det.is_zero or k.det.v != 0:
            continue
        b = support_profile(mv31, k)
        assert whittaker_support_scan(mv31, k) == [b]
