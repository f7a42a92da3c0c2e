import itertools

import numpy as np
import pytest

from graphregen.base import ParameterError
from graphregen.engine import generic_retrieve
from graphregen.pm import PmMbrCode, PmMsrCode, interpolate, lagrange_coeffs, poly_eval

P = 65537


def msr_oracle(code, s1, s2):
    """Node i stores the coefficients of s1(a, z) + a^(k-1) s2(a, z), evaluated term by term."""
    out = np.zeros((code.l, code.n), dtype=object)
    for i, a in enumerate(code.points):
        for b in range(code.l):
            out[b, i] = sum(int(s1[r, b]) * a**r + a ** (code.k - 1) * int(s2[r, b]) * a**r for r in range(code.l)) % P
    return out.astype(np.int64)


def test_msr_params():
    c = PmMsrCode(7, 4)
    assert (c.n, c.k, c.d, c.l, c.beta, c.M) == (7, 4, 6, 3, 1, 12)
    with pytest.raises(ParameterError):
        PmMsrCode(7, 5)


def test_msr_hand_example():
    c = PmMsrCode(7, 3)
    s1 = np.array([[0, 0], [0, 1]])
    cw = c.encode((s1, np.zeros((2, 2), dtype=np.int64)))
    assert list(cw[:, 1]) == [0, 2]


def test_msr_zero_and_oracle(rng):
    c = PmMsrCode(7, 4)
    assert not c.encode(np.zeros(c.M, dtype=np.int64)).any()
    for _ in range(10):
        x = c.random_message(rng)
        s1, s2 = c.split_message(x)
        assert np.array_equal(c.encode(x), msr_oracle(c, s1, s2))
        assert np.array_equal(c.encode_message(x), c.encode(x))


def test_msr_any_k_columns_retrieve(rng):
    c = PmMsrCode(7, 4)
    x = c.random_message(rng)
    cw = c.encode(x)
    for nodes in itertools.combinations(range(7), 4):
        assert np.array_equal(generic_retrieve(c, cw, nodes), x)


def test_lagrange_examples():
    assert list(lagrange_coeffs([1, 2], 0, 7)) == [2, 6]
    pts = [2, 3, 5, 7, 11]
    for h in range(len(pts)):
        lc = lagrange_coeffs(pts, h, P)
        for i, a in enumerate(pts):
            assert poly_eval(lc, a, P) == (1 if i == h else 0)
    with pytest.raises(ValueError):
        lagrange_coeffs([1, 1], 0, P)


def test_interpolate_roundtrip(rng):
    coeffs = rng.integers(0, P, 5)
    pts = [3, 4, 9, 10, 12]
    assert np.array_equal(interpolate(pts, [poly_eval(coeffs, a) for a in pts]), coeffs)


def test_msr_ip_message(rng):
    c = PmMsrCode(7, 4)
    f, helpers = 0, (1, 2, 3, 4, 5, 6)
    for _ in range(200):
        f = int(rng.integers(0, 7))
        helpers = tuple(h for h in range(7) if h != f)
        cw = c.encode(c.random_message(rng))
        shares = {h: c.helper_share(f, h, cw[:, h]) for h in helpers}
        assert np.array_equal(c.ip_message(f, helpers, shares, helpers), cw[:, f])
    assert not c.ip_message(f, (), shares, helpers).any()
    a = helpers[:2]
    rest = helpers[2:]
    total = (c.ip_message(f, a, shares, helpers) + c.ip_message(f, rest, shares, helpers)) % P
    assert np.array_equal(total, c.ip_message(f, helpers, shares, helpers))


def test_msr_share_is_content_polynomial_value(rng):
    c = PmMsrCode(7, 4)
    cw = c.encode(c.random_message(rng))
    assert c.helper_share(0, 3, cw[:, 3])[0] == poly_eval(cw[:, 3], c.points[0])


def test_mbr_params_and_symmetry(rng):
    c = PmMbrCode(7, 5, 6)
    assert (c.l, c.beta, c.M) == (6, 1, 20)
    assert not c.encode(np.zeros(c.M, dtype=np.int64)).any()
    for _ in range(20):
        cw = c.encode(c.random_message(rng))
        for i in range(7):
            for j in range(7):
                assert poly_eval(cw[:, i], c.points[j]) == poly_eval(cw[:, j], c.points[i])


def test_mbr_decode_from_any_k(rng):
    c = PmMbrCode(7, 5, 6)
    x = c.random_message(rng)
    cw = c.encode(x)
    for nodes in itertools.combinations(range(7), 5):
        assert np.array_equal(c.decode_rows(nodes, cw[:, list(nodes)].T), x)


def test_mbr_triangular(rng):
    c = PmMbrCode(7, 5, 6)
    for _ in range(20):
        x = c.random_message(rng)
        cw = c.encode(x)
        order = list(rng.permutation(7)[:5])
        shares = c.triangular_shares(cw, order)
        assert [len(s) for s in shares] == [6, 5, 4, 3, 2]
        assert np.array_equal(c.triangular_decode(order, shares), x)
        assert np.array_equal(c.triangular_decode(order, shares), generic_retrieve(c, cw, order))


def test_mbr_single_node():
    c = PmMbrCode(4, 1, 3)
    cw = c.encode(np.arange(1, c.M + 1))
    shares = c.triangular_shares(cw, [2])
    assert len(shares[0]) == 3
    assert np.array_equal(c.triangular_decode([2], shares), np.arange(1, c.M + 1))


def test_mbr_join_split_roundtrip(rng):
    c = PmMbrCode(7, 5, 6)
    x = c.random_message(rng)
    assert np.array_equal(c.join_message(*c.split_message(x)), x)
    with pytest.raises(ParameterError):
        c.join_message(np.array([[1, 2], [3, 4]]), np.zeros((2, 1)))
