"""Self-consistency checks for the oracle module.

The literals frozen here were produced by running ``oracles.py`` directly;
these tests pin them against recomputation so the rest of the suite can rely
on the oracle values without re-deriving them.
"""
import math

import oracles
import pytest
from scipy.integrate import quad


def test_q_function_matches_numeric_integration():
    # independent route: integrate the standard normal pdf tail
    for x in (0.0, 0.5, 1.0, 2.3263478740408408, 3.981071705534972):
        tail, err = quad(lambda t: math.exp(-t * t / 2.0) / math.sqrt(2.0 * math.pi), x, 40.0)
        assert err < 1e-8
        assert oracles.q_function(x) == pytest.approx(tail, rel=1e-10)


def test_qpsk_ber_frozen_values():
    assert oracles.qpsk_ber(0.0) == pytest.approx(1.586552539314571e-01, rel=1e-12)
    assert oracles.qpsk_ber(4.0) == pytest.approx(5.649530174936167e-02, rel=1e-12)
    assert oracles.qpsk_ber(8.0) == pytest.approx(6.004386400163566e-03, rel=1e-12)
    assert oracles.qpsk_ber(12.0) == pytest.approx(3.430262386641538e-05, rel=1e-12)


def test_noise_sigma_frozen():
    assert oracles.noise_sigma(12.0) == pytest.approx(0.251188643150958, rel=1e-12)


def test_threshold_fraction_frozen():
    assert oracles.q_inverse(1e-2) == pytest.approx(2.326347874040841, rel=1e-12)
    assert oracles.threshold_fraction(1e-2, 12.0) == pytest.approx(
        0.584352165977435, rel=1e-12
    )
    # round trip through the tail probability
    assert oracles.q_function(oracles.q_inverse(1e-2)) == pytest.approx(1e-2, rel=1e-10)


def test_array_factor_peaks():
    assert oracles.af_full(0.0) == pytest.approx(5.0, abs=1e-12)
    assert oracles.af_pm23(0.0) == pytest.approx(4.0, abs=1e-12)
    assert oracles.af_0pm3(0.0) == pytest.approx(3.0, abs=1e-12)
    assert oracles.af_0pm2(0.0) == pytest.approx(3.0, abs=1e-12)


def test_beamwidths_frozen():
    assert oracles.main_beamwidth("pm23") == pytest.approx(42.807243, abs=1e-4)
    assert oracles.main_beamwidth("0pm3") == pytest.approx(45.254134, abs=1e-4)
    assert oracles.main_beamwidth("full") == pytest.approx(48.454846, abs=1e-4)
    assert oracles.main_beamwidth("0pm2") == pytest.approx(67.881201, abs=1e-4)


def test_sidelobe_stationary_point_frozen():
    d, a = oracles.sidelobe_stationary_pm23()
    assert d == pytest.approx(68.876489, abs=1e-4)
    assert a == pytest.approx(3.268354, abs=1e-4)
    # the often-quoted 3.236 is |AF| at exactly 72 degrees, not the lobe peak
    assert abs(oracles.af_pm23(72.0)) == pytest.approx(1.0 + math.sqrt(5.0), abs=1e-12)


def test_sidelobe_region_frozen():
    center, width = oracles.sidelobe_region_pm23()
    assert center == pytest.approx(69.434905, abs=1e-3)
    assert width == pytest.approx(34.386951, abs=1e-3)


def test_splitmix_stream_keys_frozen():
    vectors = {
        (0, 0): 0,
        (1, 0): 6238072747940578789,
        (0, 1): 16294208416658607535,
        (1, 45): 7467907336824037750,
        (7, 45): 12018245013774620561,
        (12345, 359): 1904763287879897955,
        (2**64 - 1, 2**63): 6514504133438201533,
    }
    for (seed, k), want in vectors.items():
        got = oracles.mixed_stream_key(seed, k)
        assert 0 <= got < 2**64
        assert got == want


def test_genie_mixture_exceeds_half_for_asymmetric_set():
    # data modes {0, +3, -3, +2} (reference on the m=-2 port) at 172 degrees
    # off the secure direction: the circular-mean equalizer cannot align a
    # majority and the exact mixture BER rises above 0.5.
    rot = [0.0, 3 * 172.0, -3 * 172.0, 2 * 172.0]
    assert oracles.genie_mixture_ber(rot) == pytest.approx(0.533890, abs=1e-4)
