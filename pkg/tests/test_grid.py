import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wigmarg.grid import Partition, PhaseSpaceGrid, canonical_order, make_grid, phase_point


def test_spacings_for_unit_box():
    g = make_grid(1, 64, -8, 8, 1)
    assert g.dx == 0.25
    assert g.dp == pytest.approx(2 * np.pi / 16, abs=1e-15)


def test_two_dof_spacing():
    g = make_grid(2, 32, -10, 10, 1)
    assert g.n == 2
    assert g.dx == 0.625
    assert g.phase_shape == (32,) * 4
    assert g.dim == 32**2


@pytest.mark.parametrize("N", [7, 6, 0, -8, 9])
def test_bad_point_counts_rejected(N):
    with pytest.raises(ValueError):
        make_grid(1, N, -8, 8, 1)


@pytest.mark.parametrize("lo,hi,hbar", [(1, 1, 1), (2, -2, 1), (-1, 1, 0), (-1, 1, -2),
                                        (-np.inf, 1, 1), (-1, 1, np.nan)])
def test_bad_bounds_or_hbar_rejected(lo, hi, hbar):
    with pytest.raises(ValueError):
        make_grid(1, 16, lo, hi, hbar)


@settings(max_examples=60, deadline=None)
@given(
    N=st.integers(4, 256).map(lambda k: 2 * k),
    lo=st.floats(-50, 0, exclude_max=True),
    width=st.floats(0.1, 100),
    hbar=st.floats(1e-3, 10),
)
def test_duality_and_measure(N, lo, width, hbar):
    g = make_grid(1, N, lo, lo + width, hbar)
    assert g.dx * g.dp * g.N == pytest.approx(2 * np.pi * hbar, rel=1e-14)
    assert g.N * g.dx == pytest.approx(g.length, rel=1e-12)
    # centred, half-open momentum lattice
    assert g.p[0] == pytest.approx(-g.p_max)
    assert g.p[g.N // 2] == 0.0
    assert g.p[-1] == pytest.approx(g.p_max - g.dp)
    assert np.all(np.diff(g.x) > 0)


def test_origin_corner_node():
    g = make_grid(1, 64, -8, 8, 1)
    z = phase_point(g, (0, 0))
    assert z[0] == -8
    assert z[1] == pytest.approx(-2 * np.pi * 32 / 16)


def test_centre_node_is_origin():
    g = make_grid(1, 64, -8, 8, 1)
    np.testing.assert_allclose(phase_point(g, (32, 32)), [0.0, 0.0], atol=1e-15)


def test_out_of_range_index():
    g = make_grid(1, 16, -4, 4)
    with pytest.raises(IndexError):
        phase_point(g, (16, 0))
    with pytest.raises(IndexError):
        phase_point(g, (0, -1))
    with pytest.raises(ValueError):
        phase_point(g, (0,))


def test_partitioned_node_ordering():
    g = make_grid(2, 16, -4, 4)
    idx = (1, 2, 3, 4)
    plain = phase_point(g, idx)
    split = phase_point(g, idx, Partition(1, 1))
    x1, x2, p1, p2 = plain
    np.testing.assert_array_equal(split, [x1, p1, x2, p2])


@pytest.mark.parametrize("na,nb", [(1, 1), (2, 1), (1, 2), (2, 2), (3, 0)])
def test_canonical_order_is_permutation(na, nb):
    perm = canonical_order(na, nb)
    n = na + nb
    assert sorted(perm) == list(range(2 * n))
    labels = [f"x{i}" for i in range(n)] + [f"p{i}" for i in range(n)]
    got = [labels[i] for i in perm]
    want = ([f"x{i}" for i in range(na)] + [f"p{i}" for i in range(na)]
            + [f"x{i}" for i in range(na, n)] + [f"p{i}" for i in range(na, n)])
    assert got == want


def test_partition_validation():
    assert Partition(1, 2).n == 3
    assert not Partition(2, 0).is_bipartite
    with pytest.raises(ValueError):
        Partition(0, 1)
    with pytest.raises(ValueError):
        Partition(1, 1).require_bipartite(3)


def test_header_round_trip():
    g = make_grid(2, 16, -3.5, 4.25, 0.5)
    h = g.header(Partition(1, 1))
    assert list(h) == ["version", "n", "N", "x_min", "x_max", "hbar", "n_a", "n_b"]
    g2, part = PhaseSpaceGrid.from_header(h)
    assert g2 == g and part == Partition(1, 1)
    with pytest.raises(ValueError):
        PhaseSpaceGrid.from_header(h | {"version": 2})
    with pytest.raises(ValueError):
        g.header(Partition(1, 2))
