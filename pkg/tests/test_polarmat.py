import itertools

import numpy as np
import pytest

from rowmerge.polarmat import (
    dense_matrix,
    dump_text,
    mask,
    mask_complement,
    pack,
    projection,
    region_positions,
    restrict,
    row,
    row_int,
    unpack,
)


def test_row_examples():
    assert row(2, 3).tolist() == [1, 1, 1, 1]
    assert row(3, 5).tolist() == [1, 1, 0, 0, 1, 1, 0, 0]
    assert row(3, 0).tolist() == [1, 0, 0, 0, 0, 0, 0, 0]
    with pytest.raises(ValueError):
        row(3, 8)


def test_mask_examples():
    assert mask(2, 0) == (1, 3)
    assert mask(2, 1) == (2, 3)
    assert mask(3, 2) == (4, 5, 6, 7)
    assert mask_complement(2, 0) == (0, 2)
    with pytest.raises(ValueError):
        mask(3, 3)


def test_projection_examples():
    assert projection(3, 5, {0}).tolist() == [1, 0, 1, 0]
    assert projection(3, 5, set()).tolist() == row(3, 5).tolist()
    assert projection(3, 5, {0, 1, 2}).tolist() == [1]
    with pytest.raises(ValueError):
        projection(3, 5, {3})


def test_restrict_examples():
    assert restrict(row(3, 5), mask(3, 0)).tolist() == projection(3, 5, {0}).tolist()
    assert restrict(row(3, 2), mask(3, 0)).tolist() == [0, 0, 0, 0]
    assert restrict(row(3, 2), ()).size == 0


@pytest.mark.parametrize("n", range(1, 9))
def test_single_level_restriction(n):
    for j in range(1 << n):
        g = row(n, j)
        for l in range(n):
            p = projection(n, j, {l})
            on = restrict(g, mask(n, l))
            if (j >> l) & 1:
                assert np.array_equal(on, p)
            else:
                assert not on.any()
            assert np.array_equal(restrict(g, mask_complement(n, l)), p)


@pytest.mark.parametrize("n", range(1, 6))
def test_multi_level_restriction(n):
    for j in range(1 << n):
        g = row(n, j)
        for size in range(n + 1):
            for B in itertools.combinations(range(n), size):
                for r in range(len(B) + 1):
                    for B0 in itertools.combinations(B, r):
                        sub = restrict(g, region_positions(n, B0, set(B) - set(B0)))
                        if any(not (j >> l) & 1 for l in B0):
                            assert not sub.any()
                        else:
                            assert np.array_equal(sub, projection(n, j, B))


@pytest.mark.parametrize("n", range(1, 10))
def test_row_weight_and_packing(n):
    for j in range(1 << n):
        g = row(n, j)
        assert g.sum() == 2 ** bin(j).count("1")
        assert row_int(n, j) == pack(g)
        assert np.array_equal(unpack(row_int(n, j), 1 << n), g)
        assert g[-1] == (j == (1 << n) - 1)


@pytest.mark.parametrize("n", range(1, 8))
def test_region_recursion(n):
    for j in range(1 << n):
        g = row(n, j)
        for l in range(n):
            if (j >> l) & 1:
                assert np.array_equal(g[1 << l : 2 << l], g[: 1 << l])


def test_dense_matrix_and_dump():
    g = dense_matrix(3)
    for j in range(8):
        assert np.array_equal(g[j], row(3, j))
    text = dump_text(2)
    assert text.splitlines() == ["1000", "1100", "1010", "1111"]
    with pytest.raises(ValueError):
        dense_matrix(7)
