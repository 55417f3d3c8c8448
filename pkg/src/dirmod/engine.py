"""Directional-modulation transmit/receive engine.

Two schemes over the same multimode antenna:

* switched single-port: one RF chain drives one randomly chosen port per
  symbol.  A per-port compensation phase, fixed by the secure direction
  ``phi_lu_deg``, cophases all ports there, so the legitimate receiver sees a
  clean constellation while every other azimuth sees per-symbol rotations
  drawn from the mode-order differences.

* simultaneous multiport: all active ports radiate together with
  phase-conjugate steering weights, optionally plus a per-symbol artificial
  noise vector confined to the null space of the steering direction.

SNR convention: ``snr_db`` is Es/N0 at the steering direction.  The additive
noise has total complex variance ``10**(-snr_db/10)`` independent of azimuth,
and the composite/steered gain is normalized to 1 at ``phi_lu_deg``.

The receiver model is a genie-aided constant-phase equalizer: at each
azimuth it removes the phase of the uniform-weight circular mean of the
per-port effective gains (switched) or of the composite gain (multiport)
before the quadrant decision.  This is the strongest static eavesdropper; a
per-symbol scrambling scheme must defeat it, while any constant rotation
(including a 180-degree lobe flip) is forgiven.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .pattern import AzimuthPattern

_QPSK_PHASES_DEG = np.array([45.0, 135.0, 225.0, 315.0])
_QPSK_POINTS = np.exp(1j * np.radians(_QPSK_PHASES_DEG))
# Gray labels per quadrant index q: bits (b0, b1) with q = 2*b0 + (b0 xor b1)
_QUADRANT_B0 = np.array([0, 0, 1, 1], dtype=np.uint8)
_QUADRANT_B1 = np.array([0, 1, 1, 0], dtype=np.uint8)

_ZERO_GAIN = 1e-30


class DmScheme(str, Enum):
    SWITCHED_SINGLE_PORT = "switched"
    SIMULTANEOUS_MULTIPORT = "multiport"


@dataclass(frozen=True)
class DmSessionConfig:
    """Everything needed to reproduce one transmission session."""

    scheme: DmScheme
    active_port_ids: tuple[int, ...]
    phi_lu_deg: float
    snr_db: float
    n_symbols: int
    seed: int
    reference_port_id: int | None = None
    an_power_ratio: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "scheme", DmScheme(self.scheme))
        ids = tuple(int(i) for i in self.active_port_ids)
        if len(ids) == 0:
            raise ValueError("active_port_ids must be non-empty")
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate active port ids: {ids}")
        object.__setattr__(self, "active_port_ids", ids)
        if not (0.0 <= self.phi_lu_deg < 360.0):
            raise ValueError(f"phi_lu_deg must be in [0, 360), got {self.phi_lu_deg}")
        if math.isnan(self.snr_db):
            raise ValueError("snr_db must not be NaN")
        if not (isinstance(self.n_symbols, (int, np.integer)) and self.n_symbols >= 1):
            raise ValueError(f"n_symbols must be a positive integer, got {self.n_symbols!r}")
        if not (isinstance(self.seed, (int, np.integer)) and 0 <= self.seed < 2**64):
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if self.scheme is DmScheme.SWITCHED_SINGLE_PORT:
            if len(ids) < 2:
                raise ValueError("switched scheme needs at least 2 active ports")
            if self.reference_port_id is not None and self.reference_port_id not in ids:
                raise ValueError(
                    f"reference port {self.reference_port_id} is not among active ports {ids}"
                )
            if self.an_power_ratio != 0.0:
                raise ValueError("artificial noise applies to the multiport scheme only")
        else:
            if self.reference_port_id is not None:
                raise ValueError("reference_port_id applies to the switched scheme only")
            if self.an_power_ratio < 0.0:
                raise ValueError(f"an_power_ratio must be >= 0, got {self.an_power_ratio}")

    @property
    def noise_variance(self) -> float:
        """Total complex noise variance implied by snr_db."""
        return 10.0 ** (-self.snr_db / 10.0)


@dataclass(frozen=True)
class TxRecord:
    """One session's transmitted stream, sufficient to replay reception anywhere.

    ``symbols`` are the source unit-energy QPSK symbols.  For the switched
    scheme, ``port_ids``/``comp_deg`` give the per-symbol radiating port and
    the compensation phase applied to it; ``port_index`` indexes
    ``data_port_ids`` and is kept so receivers can gather per-port gains
    without a lookup per symbol.  Multiport records carry no port sequence;
    ``an_weights`` holds the per-symbol null-space noise vectors when
    artificial noise is enabled.
    """

    scheme: DmScheme
    bits: np.ndarray = field(repr=False)
    symbols: np.ndarray = field(repr=False)
    data_port_ids: tuple[int, ...] | None = None
    port_index: np.ndarray | None = field(default=None, repr=False)
    comp_by_port_deg: np.ndarray | None = field(default=None, repr=False)
    reference_port_id: int | None = None
    an_weights: np.ndarray | None = field(default=None, repr=False)

    @property
    def n_symbols(self) -> int:
        return len(self.symbols)

    @property
    def port_ids(self) -> np.ndarray | None:
        """Per-symbol radiating port id (switched scheme only)."""
        if self.port_index is None:
            return None
        return np.asarray(self.data_port_ids)[self.port_index]

    @property
    def comp_deg(self) -> np.ndarray | None:
        """Per-symbol applied compensation phase in degrees (switched only)."""
        if self.port_index is None:
            return None
        return self.comp_by_port_deg[self.port_index]


def qpsk_modulate(bits) -> np.ndarray:
    """Map a bit array (even length) to unit-energy Gray-coded QPSK symbols.

    Bit pairs map as 00->45, 01->135, 11->225, 10->315 degrees.
    """
    bits = np.asarray(bits)
    if bits.ndim != 1 or len(bits) % 2 != 0:
        raise ValueError(f"bits must be a 1-D array of even length, got shape {bits.shape}")
    if not np.all((bits == 0) | (bits == 1)):
        raise ValueError("bits must contain only 0 and 1")
    b0 = bits[0::2].astype(np.int64)
    b1 = bits[1::2].astype(np.int64)
    q = 2 * b0 + (b0 ^ b1)
    return _QPSK_POINTS[q]


def _decide_quadrant(received) -> np.ndarray:
    # Quadrant boundaries sit on the I/Q axes; taking floor(angle/90) sends an
    # exact boundary hit to the counter-clockwise neighbour, and the zero
    # symbol (angle 0) to the 45-degree quadrant.
    ang = np.degrees(np.angle(np.asarray(received, dtype=complex))) % 360.0
    return np.minimum((ang / 90.0).astype(np.int64), 3)


def qpsk_demodulate(received) -> np.ndarray:
    """Decide bits from received symbols by constellation quadrant.

    The decision depends only on the angle of each sample, so scaling all
    inputs by any positive real changes nothing.
    """
    q = _decide_quadrant(received)
    out = np.empty(2 * len(q), dtype=np.uint8)
    out[0::2] = _QUADRANT_B0[q]
    out[1::2] = _QUADRANT_B1[q]
    return out


def theoretical_qpsk_ber(snr_db: float) -> float:
    """Per-bit QPSK error probability Q(sqrt(Es/N0)) at Es/N0 = 10**(snr_db/10)."""
    if math.isnan(snr_db):
        raise ValueError("snr_db must not be NaN")
    gamma = 10.0 ** (snr_db / 10.0)
    return 0.5 * math.erfc(math.sqrt(gamma / 2.0))


def compensation_phase(pattern: AzimuthPattern, port_id: int, phi_lu_deg: float) -> float:
    """Phase (degrees, in (-180, 180]) that cancels a port's phase at phi_lu.

    Applying this phase to every symbol radiated from the port makes the
    port's effective gain real and positive at the secure direction.
    """
    g = pattern.sample(port_id, phi_lu_deg)
    if abs(g) < _ZERO_GAIN:
        raise ValueError(
            f"degenerate port at LU direction: port {port_id} has zero gain at {phi_lu_deg} deg"
        )
    comp = -math.degrees(math.atan2(g.imag, g.real))
    if comp <= -180.0:
        comp += 360.0
    return comp


def effective_gain_switched(
    pattern: AzimuthPattern, port_id: int, phi_deg: float, phi_lu_deg: float
) -> complex:
    """Compensated channel gain of one port: E_port(phi) * exp(j*comp)."""
    comp = compensation_phase(pattern, port_id, phi_lu_deg)
    return pattern.sample(port_id, phi_deg) * complex(np.exp(1j * math.radians(comp)))


def _multiport_weights(session: DmSessionConfig, pattern: AzimuthPattern) -> np.ndarray:
    """Phase-conjugate weights over active ports, scaled so the composite gain
    at the steering direction is exactly 1."""
    e = np.array([pattern.sample(p, session.phi_lu_deg) for p in session.active_port_ids])
    mags = np.abs(e)
    if np.any(mags < _ZERO_GAIN):
        bad = [p for p, m in zip(session.active_port_ids, mags) if m < _ZERO_GAIN]
        raise ValueError(f"degenerate port at LU direction: port(s) {bad} have zero gain")
    return np.conj(e) / mags / mags.sum()


def multiport_composite_gain(
    session: DmSessionConfig, pattern: AzimuthPattern, phi_deg: float
) -> complex:
    """Steered-array channel gain at ``phi_deg``; equals 1 at the LU direction."""
    w = _multiport_weights(session, pattern)
    g = np.array([pattern.sample(p, phi_deg) for p in session.active_port_ids])
    return complex(np.dot(w, g))


def _draw_bits(rng: np.random.Generator, n_symbols: int) -> np.ndarray:
    return rng.integers(0, 2, size=2 * n_symbols, dtype=np.uint8)


def transmit_switched(
    session: DmSessionConfig,
    pattern: AzimuthPattern,
    rng: np.random.Generator,
    bits=None,
) -> TxRecord:
    """Build the switched-scheme transmit record.

    If the session does not pin a reference port, one is drawn uniformly from
    the active ports.  The reference handshake precedes everything else, so
    the drawn port depends only on the seed, not on n_symbols.  The reference
    port carries no data; each symbol's radiating port is drawn i.i.d.
    uniformly from the remaining active ports, and the symbol is rotated by
    that port's compensation phase.
    """
    if session.scheme is not DmScheme.SWITCHED_SINGLE_PORT:
        raise ValueError(f"session scheme is {session.scheme.value}, expected switched")
    for p in session.active_port_ids:
        if p not in pattern.port_ids:
            raise ValueError(f"active port {p} is not present in the pattern")

    if session.reference_port_id is not None:
        reference = session.reference_port_id
    else:
        reference = session.active_port_ids[int(rng.integers(0, len(session.active_port_ids)))]
    data_ports = tuple(p for p in session.active_port_ids if p != reference)

    if bits is None:
        bits = _draw_bits(rng, session.n_symbols)
    bits = np.asarray(bits)
    if len(bits) != 2 * session.n_symbols:
        raise ValueError(
            f"got {len(bits)} bits for {session.n_symbols} QPSK symbols, "
            f"expected {2 * session.n_symbols}"
        )
    symbols = qpsk_modulate(bits)
    port_index = rng.integers(0, len(data_ports), size=session.n_symbols)
    comp_by_port = np.array(
        [compensation_phase(pattern, p, session.phi_lu_deg) for p in data_ports]
    )
    return TxRecord(
        scheme=session.scheme,
        bits=bits.astype(np.uint8),
        symbols=symbols,
        data_port_ids=data_ports,
        port_index=port_index,
        comp_by_port_deg=comp_by_port,
        reference_port_id=reference,
    )


def transmit_multiport(
    session: DmSessionConfig,
    pattern: AzimuthPattern,
    rng: np.random.Generator,
    bits=None,
) -> TxRecord:
    """Build the multiport transmit record (symbols plus optional AN draws)."""
    if session.scheme is not DmScheme.SIMULTANEOUS_MULTIPORT:
        raise ValueError(f"session scheme is {session.scheme.value}, expected multiport")
    for p in session.active_port_ids:
        if p not in pattern.port_ids:
            raise ValueError(f"active port {p} is not present in the pattern")
    if bits is None:
        bits = _draw_bits(rng, session.n_symbols)
    bits = np.asarray(bits)
    if len(bits) != 2 * session.n_symbols:
        raise ValueError(
            f"got {len(bits)} bits for {session.n_symbols} QPSK symbols, "
            f"expected {2 * session.n_symbols}"
        )
    symbols = qpsk_modulate(bits)

    an_weights = None
    if session.an_power_ratio > 0.0:
        n_ports = len(session.active_port_ids)
        if n_ports < 2:
            raise ValueError("artificial noise needs at least 2 active ports")
        e = np.array([pattern.sample(p, session.phi_lu_deg) for p in session.active_port_ids])
        w = _multiport_weights(session, pattern)
        z = (
            rng.standard_normal((session.n_symbols, n_ports))
            + 1j * rng.standard_normal((session.n_symbols, n_ports))
        ) / math.sqrt(2.0)
        # Remove the component that would radiate toward the LU: the functional
        # sum_n a_n * E_n(phi_lu) must vanish for every symbol.
        e_bar = np.conj(e)
        proj = (z @ e) / np.vdot(e, e).real
        a = z - np.outer(proj, e_bar)
        scale = math.sqrt(
            session.an_power_ratio * float(np.vdot(w, w).real) / (n_ports - 1)
        )
        an_weights = a * scale
    return TxRecord(
        scheme=session.scheme,
        bits=bits.astype(np.uint8),
        symbols=symbols,
        an_weights=an_weights,
    )


def transmit(
    session: DmSessionConfig,
    pattern: AzimuthPattern,
    rng: np.random.Generator,
    bits=None,
) -> TxRecord:
    """Build the record for the session's scheme, drawing bits unless given."""
    if session.scheme is DmScheme.SWITCHED_SINGLE_PORT:
        return transmit_switched(session, pattern, rng, bits)
    return transmit_multiport(session, pattern, rng, bits)


def _genie_phase(effective_gains: np.ndarray) -> float:
    """Constant equalizer phase: arg of the uniform-weight circular mean.

    Gains of negligible magnitude contribute nothing; if the circular mean
    itself vanishes no direction is preferred and the phase defaults to 0.
    """
    g = np.asarray(effective_gains, dtype=complex)
    mags = np.abs(g)
    live = mags > _ZERO_GAIN
    if not np.any(live):
        return 0.0
    mean = np.sum(g[live] / mags[live])
    if abs(mean) < 1e-9 * np.count_nonzero(live):
        return 0.0
    return math.atan2(mean.imag, mean.real)


def _receive(
    session: DmSessionConfig,
    pattern: AzimuthPattern,
    tx: TxRecord,
    phi_deg: float,
    rng: np.random.Generator,
):
    """Propagate, add noise, equalize.  Returns (equalized symbols, bit errors, evm)."""
    if tx.scheme is not session.scheme:
        raise ValueError(
            f"record scheme {tx.scheme.value} does not match session scheme {session.scheme.value}"
        )
    sigma = math.sqrt(session.noise_variance)
    if tx.scheme is DmScheme.SWITCHED_SINGLE_PORT:
        port_gains = np.array(
            [
                pattern.sample(p, phi_deg) * np.exp(1j * math.radians(c))
                for p, c in zip(tx.data_port_ids, tx.comp_by_port_deg)
            ]
        )
        clean = tx.symbols * port_gains[tx.port_index]
        theta = _genie_phase(port_gains)
    else:
        g = multiport_composite_gain(session, pattern, phi_deg)
        clean = tx.symbols * g
        if tx.an_weights is not None:
            e_phi = np.array([pattern.sample(p, phi_deg) for p in session.active_port_ids])
            clean = clean + tx.an_weights @ e_phi
        theta = math.atan2(g.imag, g.real) if abs(g) > _ZERO_GAIN else 0.0

    if sigma > 0.0:
        noise = (
            rng.standard_normal(tx.n_symbols) + 1j * rng.standard_normal(tx.n_symbols)
        ) * (sigma / math.sqrt(2.0))
    else:
        noise = 0.0
    equalized = (clean + noise) * np.exp(-1j * theta)

    q = _decide_quadrant(equalized)
    bits_hat = np.empty_like(tx.bits)
    bits_hat[0::2] = _QUADRANT_B0[q]
    bits_hat[1::2] = _QUADRANT_B1[q]
    errors = int(np.count_nonzero(bits_hat != tx.bits))
    evm = float(np.sqrt(np.mean(np.abs(equalized - _QPSK_POINTS[q]) ** 2)))
    return equalized, errors, evm


def receive_and_count(
    session: DmSessionConfig,
    pattern: AzimuthPattern,
    tx: TxRecord,
    phi_deg: float,
    rng: np.random.Generator,
) -> int:
    """Bit errors over the whole record for a receiver at azimuth ``phi_deg``.

    The channel is ``r_k = x_k * g_k(phi) + w_k`` with circular complex
    Gaussian noise of total variance ``10**(-snr_db/10)``; the receiver
    applies the genie constant-phase equalizer before the quadrant decision,
    and errors are counted against the source bits.
    """
    _, errors, _ = _receive(session, pattern, tx, phi_deg, rng)
    return errors
