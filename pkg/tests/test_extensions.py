import math

import numpy as np
import pytest

from reidemeister import automorphisms as aut
from reidemeister.automorphisms import Inner
from reidemeister.errors import NotASubgroup, NotInvariant, NotNormal
from reidemeister.extensions import (brauer_bound_check, build_extension, conjugacy_labels, fiber_bounds_check,
                                     inner_equals_conjugacy_check, restrict_and_descend)
from reidemeister.groups import closure, direct_product
from reidemeister.matrices import IntMatrix, ModMatrix
from reidemeister.orbits import twisted_partition

I3 = ModMatrix.identity(2, 3)


@pytest.fixture(scope="module")
def centre_ext(sl23):
    return build_extension(sl23, lambda x: x in (I3, -I3))


@pytest.fixture(scope="module")
def det_ext(gl23):
    return build_extension(gl23, lambda x: x.det() == 1)


def test_extension_examples(centre_ext, det_ext, sl23):
    assert (centre_ext.kernel_size, centre_ext.index) == (2, 12)
    assert (det_ext.kernel_size, det_ext.index) == (24, 2)
    whole = build_extension(sl23, lambda x: True)
    assert whole.index == 1
    trivial = build_extension(sl23, lambda x: x == I3)
    assert trivial.index == 24


def test_cosets_partition_the_group(centre_ext, det_ext):
    for e in (centre_ext, det_ext):
        g = e.total
        sizes = np.bincount(e.coset_of)
        assert np.all(sizes == e.kernel_size)
        assert e.index * e.kernel_size == len(g)
        # representative products land in the product coset
        Q = e.quotient_table
        for a in range(e.index):
            for b in range(e.index):
                x = g.mul(e.coset_reps[a], e.coset_reps[b])
                assert e.coset_of[x] == Q[a, b]


def test_quotient_table_is_a_group(centre_ext):
    Q = centre_ext.quotient_table
    assert all(sorted(row) == list(range(12)) for row in Q)
    a, b, c = np.meshgrid(np.arange(12), np.arange(12), np.arange(12), indexing="ij")
    assert np.array_equal(Q[Q[a, b], c], Q[a, Q[b, c]])


def test_not_a_subgroup(sl23):
    b1 = ModMatrix([[1, 0], [1, 1]], 3)
    with pytest.raises(NotASubgroup):
        build_extension(sl23, lambda x: x in (I3, b1))
    with pytest.raises(NotASubgroup):
        build_extension(sl23, lambda x: x == b1)


def test_not_normal(sl23):
    unipotent = {ModMatrix([[1, 0], [k, 1]], 3) for k in range(3)}
    with pytest.raises(NotNormal) as info:
        build_extension(sl23, lambda x: x in unipotent)
    s, h = info.value.witness
    assert h in unipotent and s @ h @ s.inverse() not in unipotent


def test_restrict_and_descend(centre_ext, det_ext, sl23):
    maps = restrict_and_descend(centre_ext, Inner(sl23.element(5)))
    assert len(maps.quotient) == 12
    maps = restrict_and_descend(det_ext, aut.tau)
    assert sorted(maps.kernel) == sorted(det_ext.kernel)
    maps = restrict_and_descend(centre_ext, aut.identity)
    assert np.array_equal(maps.total, np.arange(24))
    assert np.array_equal(maps.kernel, centre_ext.kernel)
    assert np.array_equal(maps.quotient, np.arange(12))


def test_not_invariant(quotient):
    s2 = quotient("SL", 2, 2)
    g = direct_product(s2, s2)
    left = build_extension(g, lambda x: x.rows[2][2:] == (1, 0) and x.rows[3][2:] == (0, 1))
    assert left.kernel_size == 6
    swap = IntMatrix([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]])
    with pytest.raises(NotInvariant):
        restrict_and_descend(left, Inner(swap))


def test_fiber_bound_examples(centre_ext, det_ext):
    rep = fiber_bounds_check(centre_ext, aut.identity)
    assert (rep.R_total, rep.R_quotient, rep.kernel_size) == (7, 4, 2)
    assert rep.bounds_hold
    rep = fiber_bounds_check(det_ext, aut.identity)
    assert (rep.R_total, rep.R_quotient, rep.kernel_size) == (8, 2, 24)
    assert rep.R_kernel == 7 and rep.bounds_hold


def test_fiber_bounds_trivial_kernel(sl23):
    e = build_extension(sl23, lambda x: x == I3)
    for phi in (aut.identity, aut.tau):
        rep = fiber_bounds_check(e, phi)
        assert rep.R_total == rep.R_quotient and rep.bounds_hold


@pytest.mark.parametrize("which", ["centre", "det"])
@pytest.mark.parametrize("seed", range(5))
def test_fiber_bounds_over_test_matrix(centre_ext, det_ext, which, seed):
    e = centre_ext if which == "centre" else det_ext
    rng = np.random.default_rng(seed)
    gamma = e.total.element(int(rng.integers(0, len(e.total))))
    for phi in (aut.identity, aut.tau, Inner(gamma), aut.compose(aut.tau, Inner(gamma))):
        rep = fiber_bounds_check(e, phi)
        assert rep.bounds_hold, rep.to_dict()
        assert rep.R_quotient <= rep.R_total <= rep.kernel_size * rep.R_quotient
        assert rep.R_kernel <= rep.index * rep.R_total


def test_bounds_report_json(centre_ext):
    d = fiber_bounds_check(centre_ext, aut.tau).to_dict()
    assert list(d) == ["R_total", "R_quotient", "R_kernel", "kernel_size", "index",
                       "max_fiber_eta", "max_fiber_j", "bounds_hold"]


def test_inner_equals_conjugacy(quotient, sl23):
    rng = np.random.default_rng(0)
    for gamma in rng.integers(0, 24, 5):
        assert inner_equals_conjugacy_check(sl23, int(gamma))
        assert twisted_partition(sl23, Inner(sl23.element(int(gamma)))).reidemeister_number == 7
    g = quotient("SL", 3, 2)
    for gamma in rng.integers(0, len(g), 5):
        assert inner_equals_conjugacy_check(g, int(gamma))
        assert twisted_partition(g, Inner(g.element(int(gamma)))).reidemeister_number == 6
    assert inner_equals_conjugacy_check(sl23, sl23.identity_index)


def test_inner_equals_conjugacy_sampled(quotient):
    g = quotient("SL", 2, 11)
    assert len(g) == 1320
    assert inner_equals_conjugacy_check(g, 100, samples=20_000)


def test_brauer_examples(sl23, quotient):
    assert brauer_bound_check(sl23)
    assert int(conjugacy_labels(sl23).max()) + 1 == 7 >= math.log(math.log(24))
    assert brauer_bound_check(quotient("Sp", 4, 2))
    cyclic = closure([ModMatrix([[2]], 7)], 1, 7)
    assert len(cyclic) == 3 and int(conjugacy_labels(cyclic).max()) + 1 == 3
    assert brauer_bound_check(cyclic)
    with pytest.raises(ValueError):
        brauer_bound_check(closure([ModMatrix([[6]], 7)], 1, 7))
