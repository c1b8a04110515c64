import itertools
import time

import numpy as np
import pytest

from ecpkit import codes, families
from ecpkit.codes import LinearCode
from ecpkit.ecp import (
    EcpDecoder, EcpError, EcpPair, ecp_decode, erasure_decode, verify_ecp, verify_ecp_alt,
)
from ecpkit.families import GrsSpec
from ecpkit.field import embed_array, field_make
from ecpkit.rng import make_rng, sample_error


def grs_instance(q_pe, n, k, a=None, b=None):
    F = field_make(*q_pe)
    spec = GrsSpec(F, tuple(a) if a else tuple(range(n)), tuple(b) if b else (1,) * n, k)
    return families.grs_code(spec), families.grs_ecp(spec)


# -- verification -----------------------------------------------------------------

def test_grs_gf7_all_conditions():
    C, pair = grs_instance((7, 1), 6, 2)
    rep = verify_ecp(pair, C)
    assert (rep.e1, rep.e2, rep.e3, rep.e4, rep.e5, rep.e6) == (True,) * 6
    assert (rep.d_a, rep.d_b_dual, rep.d_c) == (4, 3, 5)
    assert rep.is_ecp and rep.is_alt_ecp


def test_full_space_b():
    # B^perp is the zero code, whose distance is the n + 1 sentinel, so E.3
    # holds vacuously; the pair still fails through E.1.
    C, pair = grs_instance((7, 1), 6, 2)
    bad = EcpPair(pair.A, codes.full_space(C.field, 6), pair.t)
    rep = verify_ecp(bad, C)
    assert rep.d_b_dual == 7 and rep.e3
    assert not rep.e1 and not rep.is_ecp


def test_low_distance_b_breaks_e3():
    C, pair = grs_instance((7, 1), 6, 2)
    # B^perp contains a weight-2 word
    B = LinearCode(C.field, 6, np.array([[1, 1, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0]]))
    rep = verify_ecp(EcpPair(pair.A, B, 2), C)
    assert rep.d_b_dual <= 2 and not rep.e3 and not rep.is_ecp


def test_unrelated_codes_fail_e1():
    F = field_make(7)
    rng = make_rng(4)
    failures = 0
    for _ in range(20):
        A = families.random_code(F, 10, 3, rng)
        B = families.random_code(F, 10, 2, rng)
        C = families.random_code(F, 10, 4, rng)
        failures += not verify_ecp(EcpPair(A, B, 2), C).e1
    assert failures == 20


def test_alt_route_grs_gf7():
    C, pair = grs_instance((7, 1), 6, 2)
    rep = verify_ecp_alt(pair, C)
    assert rep.is_alt_ecp and rep.dc_bound
    assert codes.min_distance(C) == 5 >= 2 * pair.t + 1


def test_zero_coordinate_breaks_e5():
    C, pair = grs_instance((7, 1), 6, 2)
    G = pair.A.gen.copy()
    G[:, 3] = 0
    rep = verify_ecp_alt(EcpPair(LinearCode(C.field, 6, G), pair.B, pair.t), C)
    assert not rep.e5 and rep.dc_bound is None


def test_random_pair_alt_route():
    F = field_make(2, 8)
    for seed in range(3):
        A, B, C = families.random_pair_code(F, 12, 2, make_rng(12, seed), mds_a=True)
        rep = verify_ecp_alt(EcpPair(A, B, 2), C)
        assert rep.is_alt_ecp and rep.dc_bound
        assert codes.min_distance(C) >= 5


def test_extension_pair_for_alternant():
    K, F2 = field_make(2, 4), field_make(2)
    C, pair = families.alternant_code(K, tuple(range(1, 16)), (1,) * 15, 4, F2)
    rep = verify_ecp(pair, C)
    assert rep.is_ecp and rep.extension_degree == 4


def test_pair_validation_and_serialization():
    C, pair = grs_instance((7, 1), 6, 2)
    with pytest.raises(EcpError):
        EcpPair(pair.A, pair.B, 0)
    with pytest.raises(EcpError):
        EcpPair(pair.A, codes.full_space(field_make(5), 6), 2)
    assert EcpPair.from_dict(pair.to_dict()) == pair
    with pytest.raises(EcpError):
        verify_ecp(pair, codes.full_space(C.field, 5))


# -- erasure decoding ----------------------------------------------------------------

def test_erasure_examples():
    C, _ = grs_instance((7, 1), 6, 2)
    F = C.field
    c = C.encode(np.array([3, 5]))
    assert not erasure_decode(C, c, []).any()
    y = c.copy()
    y[2] = F.add(y[2], 1)
    assert erasure_decode(C, y, []) is None
    x = erasure_decode(C, y, [2])
    assert x.tolist() == [0, 0, 1, 0, 0, 0]


# -- decoding ----------------------------------------------------------------------

def test_codeword_decodes_to_itself():
    C, pair = grs_instance((13, 1), 12, 4)
    c = C.encode(np.array([1, 2, 3, 4]))
    out = ecp_decode(C, pair, c)
    assert np.array_equal(out[0], c) and not out[1].any()


def test_gf13_seeded_recovery():
    C, pair = grs_instance((13, 1), 12, 4)
    F = C.field
    for trial in range(200):
        rng = make_rng(100, trial)
        c = C.encode(F.random(rng, 4))
        e = sample_error(F, 12, int(rng.integers(0, 5)), rng)
        out = ecp_decode(C, pair, F.add(c, e))
        assert out is not None
        assert np.array_equal(out[0], c) and np.array_equal(out[1], e)


@pytest.mark.parametrize("pe,n,k", [((5, 1), 5, 1), ((7, 1), 6, 2), ((2, 2), 4, 2), ((2, 3), 7, 3),
                                    ((2, 3), 8, 2)])
def test_exhaustive_small_instances(pe, n, k):
    C, pair = grs_instance(pe, n, k)
    F, t = C.field, pair.t
    dec = EcpDecoder(C, pair)
    cw = [C.encode(np.array(m)) for m in itertools.product(range(F.q), repeat=k)]
    count = 0
    # every error of weight <= t, each added to the next codeword in turn
    for w in range(t + 1):
        for supp in itertools.combinations(range(n), w):
            for vals in itertools.product(range(1, F.q), repeat=w):
                e = np.zeros(n, dtype=np.int64)
                e[list(supp)] = vals
                c = cw[count % len(cw)]
                out = dec.decode(F.add(c, e), check=True)
                assert np.array_equal(out[0], c) and np.array_equal(out[1], e)
                count += 1


def test_locator_space_properties():
    """Nonempty locator space; every locator vanishes on the error support."""
    for C, pair in [grs_instance((13, 1), 12, 4), grs_instance((2, 4), 15, 5)]:
        F, K = C.field, pair.field
        dec = EcpDecoder(C, pair)
        for trial in range(50):
            rng = make_rng(7, trial)
            c = C.encode(F.random(rng, C.k))
            e = sample_error(F, C.n, pair.t, rng)
            locs = dec.error_locators(F.add(c, e))
            assert locs.shape[0] >= 1
            e_hat = embed_array(F, K, e)
            assert not K.mul(locs, e_hat).any()
            for a in locs:
                assert codes.weight(a) >= dec.d_a
                assert np.count_nonzero(a == 0) <= C.n - dec.d_a


def test_alternant_mixed_field_decode():
    K, F2 = field_make(2, 4), field_make(2)
    C, pair = families.alternant_code(K, tuple(range(1, 16)), (1,) * 15, 4, F2)
    for trial in range(100):
        rng = make_rng(9, trial)
        c = C.encode(F2.random(rng, C.k))
        e = sample_error(F2, 15, int(rng.integers(0, 3)), rng)
        out = ecp_decode(C, pair, F2.add(c, e))
        assert np.array_equal(out[0], c) and np.array_equal(out[1], e)
        assert out[1].max(initial=0) < 2


def test_random_pair_decode():
    F = field_make(2, 6)
    A, B, C = families.random_pair_code(F, 20, 3, make_rng(5))
    pair = EcpPair(A, B, 3)
    assert verify_ecp(pair, C).is_ecp
    for trial in range(100):
        rng = make_rng(6, trial)
        c = C.encode(F.random(rng, C.k))
        e = sample_error(F, 20, 3, rng)
        out = ecp_decode(C, pair, F.add(c, e))
        assert np.array_equal(out[0], c) and np.array_equal(out[1], e)


def test_decode_failure_is_a_value():
    C, pair = grs_instance((13, 1), 12, 4)
    F = C.field
    assert ecp_decode(C, pair, np.zeros(11, dtype=np.int64)) is None
    assert ecp_decode(C, pair, np.full(12, 13)) is None
    # beyond t: either no answer or a different codeword within distance t
    for trial in range(100):
        rng = make_rng(8, trial)
        c = C.encode(F.random(rng, 4))
        e = sample_error(F, 12, 6, rng)
        out = ecp_decode(C, pair, F.add(c, e))
        if out is not None:
            assert codes.is_codeword(C, out[0]) and codes.weight(out[1]) <= 4


def test_decode_time_scaling():
    F = field_make(2, 8)
    times = []
    for n in (16, 32, 64, 128):
        C, pair = grs_instance((2, 8), n, n // 2)
        dec = EcpDecoder(C, pair)
        rng = make_rng(n)
        words = [F.add(C.encode(F.random(rng, C.k)), sample_error(F, n, pair.t, rng)) for _ in range(5)]
        dec.decode(words[0])
        start = time.perf_counter()
        for y in words:
            assert dec.decode(y) is not None
        times.append((time.perf_counter() - start) / len(words))
    for small, big in zip(times, times[1:]):
        assert big <= 10 * small + 1e-3
