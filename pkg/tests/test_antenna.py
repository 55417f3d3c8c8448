import numpy as np
import oracles
import pytest

from dirmod import (
    AntennaConfig,
    AntennaPort,
    CANONICAL_METADATA,
    ModeSpec,
    array_factor,
    canonical_antenna,
    mode_field,
    steering_weights,
)


def test_canonical_layout(canonical):
    assert canonical.port_ids == (1, 2, 3, 4, 5)
    assert tuple(p.mode.m for p in canonical.ports) == (0, 3, -3, 2, -2)
    assert all(p.mode.amplitude == 1.0 for p in canonical.ports)
    assert all(p.mode.phase_offset_deg == 0.0 for p in canonical.ports)
    assert canonical.metadata == {"profile_lambda": 0.19, "efficiency_pct": 49.0}
    assert canonical.metadata == CANONICAL_METADATA
    # metadata is a copy, not the shared module dict
    assert canonical.metadata is not CANONICAL_METADATA


def test_mode_spec_validation():
    with pytest.raises(ValueError):
        ModeSpec(m=9)
    with pytest.raises(ValueError):
        ModeSpec(m=-9)
    with pytest.raises(ValueError):
        ModeSpec(m=1.5)
    with pytest.raises(ValueError):
        ModeSpec(m=1, amplitude=-0.1)
    with pytest.raises(ValueError):
        ModeSpec(m=1, amplitude=float("inf"))
    with pytest.raises(ValueError):
        ModeSpec(m=1, phase_offset_deg=float("nan"))
    assert ModeSpec(m=1, phase_offset_deg=-90.0).phase_offset_deg == 270.0
    assert ModeSpec(m=8).m == 8


def test_port_and_config_validation():
    with pytest.raises(ValueError):
        AntennaPort(port_id=0, mode=ModeSpec(m=0))
    with pytest.raises(ValueError):
        AntennaPort(port_id=-3, mode=ModeSpec(m=0))
    one = AntennaPort(port_id=1, mode=ModeSpec(m=0))
    two = AntennaPort(port_id=2, mode=ModeSpec(m=1))
    with pytest.raises(ValueError):
        AntennaConfig((one,))
    with pytest.raises(ValueError):
        AntennaConfig(tuple(AntennaPort(port_id=i + 1, mode=ModeSpec(m=0)) for i in range(9)))
    with pytest.raises(ValueError):
        AntennaConfig((one, AntennaPort(port_id=1, mode=ModeSpec(m=2))))
    cfg = AntennaConfig((one, two))
    assert cfg.port(2) is two
    with pytest.raises(KeyError):
        cfg.port(7)


def test_subset_preserves_given_order(canonical):
    sub = canonical.subset((4, 2))
    assert sub.port_ids == (4, 2)
    assert tuple(p.mode.m for p in sub.ports) == (2, 3)
    with pytest.raises(KeyError):
        canonical.subset((1, 99))


def test_mode_field_closed_form():
    mode = ModeSpec(m=3, amplitude=2.0, phase_offset_deg=10.0)
    for phi in (0.0, 17.5, 123.0, 359.0):
        expect = 2.0 * np.exp(1j * np.radians(3 * phi + 10.0))
        assert mode_field(mode, phi) == pytest.approx(expect, abs=1e-12)
    # scalar in, scalar out; array in, array out
    assert isinstance(mode_field(mode, 5.0), complex)
    arr = mode_field(mode, np.array([0.0, 90.0]))
    assert arr.shape == (2,)
    # m = 0 has no azimuth dependence
    flat = ModeSpec(m=0)
    assert mode_field(flat, 0.0) == mode_field(flat, 211.7) == 1.0


def test_mode_field_wraps_by_periodicity():
    mode = ModeSpec(m=2)
    assert mode_field(mode, 370.0) == pytest.approx(mode_field(mode, 10.0), abs=1e-12)
    assert mode_field(mode, -45.0) == pytest.approx(mode_field(mode, 315.0), abs=1e-12)


def test_steering_weights_cophase_at_steer(canonical):
    for phi0 in (0.0, 45.0, 222.25):
        w = steering_weights(canonical, phi0)
        assert np.allclose(np.abs(w), 1.0)
        af0 = array_factor(canonical, w, phi0)
        # all five unit amplitudes add in phase
        assert af0 == pytest.approx(5.0 + 0.0j, abs=1e-12)


def test_steering_rejects_zero_field_port():
    cfg = AntennaConfig(
        (
            AntennaPort(port_id=1, mode=ModeSpec(m=0)),
            AntennaPort(port_id=2, mode=ModeSpec(m=1, amplitude=0.0)),
        )
    )
    with pytest.raises(ValueError, match="port.s. \\[2\\]"):
        steering_weights(cfg, 45.0)


def test_array_factor_weight_count(canonical):
    with pytest.raises(ValueError):
        array_factor(canonical, np.ones(3), 0.0)


@pytest.mark.parametrize(
    "ids,oracle_af,af_max",
    [
        ((1, 2, 3, 4, 5), oracles.af_full, 5.0),
        ((2, 3, 4, 5), oracles.af_pm23, 4.0),
        ((1, 4, 5), oracles.af_0pm2, 3.0),
        ((1, 2, 3), oracles.af_0pm3, 3.0),
    ],
)
def test_steered_magnitude_matches_oracle(canonical, ids, oracle_af, af_max):
    phi0 = 45.0
    sub = canonical.subset(ids)
    w = steering_weights(sub, phi0)
    deltas = np.arange(0.0, 360.0, 1.0)
    got = np.abs(array_factor(sub, w, phi0 + deltas))
    want = np.abs([oracle_af(d) for d in deltas])
    assert np.allclose(got, want, atol=1e-9)
    assert abs(array_factor(sub, w, phi0)) == pytest.approx(af_max, abs=1e-12)


def test_pm23_sidelobe_magnitudes(canonical):
    # steered {+-2, +-3} set: |AF| at the documented sidelobe stationary point
    # and at 72 degrees off boresight
    sub = canonical.subset((2, 3, 4, 5))
    w = steering_weights(sub, 45.0)
    d_star, af_star = oracles.sidelobe_stationary_pm23()
    assert abs(array_factor(sub, w, 45.0 + d_star)) == pytest.approx(af_star, abs=1e-9)
    assert abs(array_factor(sub, w, 45.0 + 72.0)) == pytest.approx(
        1.0 + np.sqrt(5.0), abs=1e-9
    )
