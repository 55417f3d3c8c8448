"""Analytic azimuthal-mode antenna model.

Each physical port excites one rotating phase mode whose far-field cut over
azimuth is ``E(phi) = amplitude * exp(j*(m*phi + phase_offset))``.  Port
amplitudes are flat over azimuth, so all direction-dependence of a port lives
in its phase progression ``m*phi``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_MODE_ORDER = 8
MAX_PORTS = 8

# Reported alongside results; these numbers describe the physical device the
# canonical port set models and take no part in any computation.
CANONICAL_METADATA = {"profile_lambda": 0.19, "efficiency_pct": 49.0}


@dataclass(frozen=True)
class ModeSpec:
    """One azimuthal mode: order m, linear amplitude, phase offset in degrees."""

    m: int
    amplitude: float = 1.0
    phase_offset_deg: float = 0.0

    def __post_init__(self) -> None:
        if not isinstance(self.m, (int, np.integer)):
            raise ValueError(f"mode order must be an integer, got {self.m!r}")
        if abs(self.m) > MAX_MODE_ORDER:
            raise ValueError(f"|m| must be <= {MAX_MODE_ORDER}, got {self.m}")
        if not (self.amplitude >= 0.0 and np.isfinite(self.amplitude)):
            raise ValueError(f"amplitude must be finite and >= 0, got {self.amplitude}")
        if not np.isfinite(self.phase_offset_deg):
            raise ValueError("phase offset must be finite")
        object.__setattr__(self, "phase_offset_deg", float(self.phase_offset_deg) % 360.0)


@dataclass(frozen=True)
class AntennaPort:
    """A selectable feed port and the mode it excites."""

    port_id: int
    mode: ModeSpec

    def __post_init__(self) -> None:
        if not isinstance(self.port_id, (int, np.integer)) or self.port_id < 1:
            raise ValueError(f"port id must be a positive integer, got {self.port_id!r}")


@dataclass(frozen=True)
class AntennaConfig:
    """An ordered set of ports sharing one phase centre.

    ``metadata`` carries report-only device descriptors such as
    ``profile_lambda`` and ``efficiency_pct``.
    """

    ports: tuple[AntennaPort, ...]
    metadata: dict | None = None

    def __post_init__(self) -> None:
        if not (2 <= len(self.ports) <= MAX_PORTS):
            raise ValueError(f"need between 2 and {MAX_PORTS} ports, got {len(self.ports)}")
        ids = [p.port_id for p in self.ports]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate port ids: {sorted(ids)}")

    @property
    def port_ids(self) -> tuple[int, ...]:
        return tuple(p.port_id for p in self.ports)

    def port(self, port_id: int) -> AntennaPort:
        for p in self.ports:
            if p.port_id == port_id:
                return p
        raise KeyError(f"no port with id {port_id}")

    def subset(self, port_ids, metadata: dict | None = None) -> "AntennaConfig":
        """Config restricted to the given port ids, in the order given."""
        return AntennaConfig(tuple(self.port(i) for i in port_ids), metadata=metadata)


def canonical_antenna() -> AntennaConfig:
    """Five-port reference antenna: m = 0, +3, -3, +2, -2 for ports P1..P5.

    Unit amplitudes, zero phase offsets.  Mode orders are chosen so that any
    single active port radiates a uniform-magnitude azimuth cut while the
    full steered set forms a single dominant beam.
    """
    orders = (0, 3, -3, 2, -2)
    ports = tuple(
        AntennaPort(port_id=i + 1, mode=ModeSpec(m=m)) for i, m in enumerate(orders)
    )
    return AntennaConfig(ports, metadata=dict(CANONICAL_METADATA))


def mode_field(mode: ModeSpec, phi_deg):
    """Complex far-field value(s) of one mode at azimuth ``phi_deg`` (degrees).

    Accepts a scalar or ndarray of angles; angles outside [0, 360) are
    wrapped by the periodicity of the complex exponential itself.
    """
    phase = np.radians(mode.m * np.asarray(phi_deg, dtype=float) + mode.phase_offset_deg)
    out = mode.amplitude * np.exp(1j * phase)
    if np.isscalar(phi_deg) or np.ndim(phi_deg) == 0:
        return complex(out)
    return out


def steering_weights(config: AntennaConfig, phi0_deg: float) -> np.ndarray:
    """Unit-magnitude per-port weights that cophase all ports at ``phi0_deg``.

    w_n = conj(E_n(phi0)) / |E_n(phi0)|.  A port whose field vanishes at the
    steering direction has no usable phase there and is rejected.
    """
    fields = np.array([mode_field(p.mode, phi0_deg) for p in config.ports])
    mags = np.abs(fields)
    if np.any(mags < 1e-30):
        bad = [p.port_id for p, m in zip(config.ports, mags) if m < 1e-30]
        raise ValueError(f"degenerate port at steering direction: port(s) {bad} have zero field")
    return np.conj(fields) / mags


def array_factor(config: AntennaConfig, weights, phi_deg):
    """Coherent sum ``sum_n w_n * E_n(phi)`` over the config's ports.

    ``weights`` must supply one complex weight per port, in port order.
    """
    weights = np.asarray(weights, dtype=complex)
    if weights.shape != (len(config.ports),):
        raise ValueError(
            f"weight count {weights.shape} does not match port count {len(config.ports)}"
        )
    phi = np.asarray(phi_deg, dtype=float)
    acc = np.zeros(phi.shape, dtype=complex)
    for w, p in zip(weights, config.ports):
        acc = acc + w * mode_field(p.mode, phi)
    if np.isscalar(phi_deg) or np.ndim(phi_deg) == 0:
        return complex(acc)
    return acc
