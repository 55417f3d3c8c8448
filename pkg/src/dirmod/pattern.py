"""Azimuth pattern storage, CSV exchange, resampling, and shadowing masks.

The interchange format is UTF-8 CSV with the exact header
``angle_deg,port,mag_db,phase_deg``, one row per (angle, port) sample, angles
on a uniform grid covering [0, 360), and every port sampled at every angle.
Magnitudes are in dB (20*log10 of the linear field magnitude).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .antenna import AntennaConfig, mode_field

CSV_HEADER = ("angle_deg", "port", "mag_db", "phase_deg")


class PatternFormatError(ValueError):
    """Raised when pattern CSV text violates the interchange contract."""


@dataclass(frozen=True)
class AzimuthPattern:
    """Complex port gains sampled on a uniform azimuth grid.

    ``gains[i, k]`` is the field of ``port_ids[i]`` at angle ``k * step_deg``.
    """

    step_deg: float
    port_ids: tuple[int, ...]
    gains: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if not (0.0 < self.step_deg <= 360.0):
            raise ValueError(f"step must be in (0, 360], got {self.step_deg}")
        n = 360.0 / self.step_deg
        if abs(n - round(n)) > 1e-9:
            raise ValueError(f"step {self.step_deg} does not divide 360 evenly")
        n = int(round(n))
        if len(self.port_ids) == 0:
            raise ValueError("pattern needs at least one port")
        if len(set(self.port_ids)) != len(self.port_ids):
            raise ValueError(f"duplicate port ids: {self.port_ids}")
        gains = np.asarray(self.gains, dtype=complex)
        if gains.shape != (len(self.port_ids), n):
            raise ValueError(
                f"gain array shape {gains.shape} does not match "
                f"{len(self.port_ids)} ports x {n} angles"
            )
        if not np.all(np.isfinite(gains)):
            raise ValueError("pattern gains must be finite")
        object.__setattr__(self, "gains", gains)

    @property
    def n_angles(self) -> int:
        return self.gains.shape[1]

    def angles_deg(self) -> np.ndarray:
        return np.arange(self.n_angles) * self.step_deg

    def port_row(self, port_id: int) -> np.ndarray:
        try:
            i = self.port_ids.index(port_id)
        except ValueError:
            raise KeyError(f"no port with id {port_id}") from None
        return self.gains[i]

    def sample(self, port_id: int, phi_deg: float) -> complex:
        """Field of one port at an arbitrary azimuth.

        Values between grid points are complex-linear interpolations of the
        two neighbouring samples, with wraparound across 360/0.
        """
        row = self.port_row(port_id)
        pos = (float(phi_deg) % 360.0) / self.step_deg
        k0 = int(np.floor(pos))
        frac = pos - k0
        k0 %= self.n_angles
        if frac == 0.0:
            return complex(row[k0])
        k1 = (k0 + 1) % self.n_angles
        return complex((1.0 - frac) * row[k0] + frac * row[k1])


def synthesize_pattern(config: AntennaConfig, step_deg: float = 1.0) -> AzimuthPattern:
    """Sample every port of an analytic antenna config onto a uniform grid."""
    n = 360.0 / step_deg
    if abs(n - round(n)) > 1e-9:
        raise ValueError(f"step {step_deg} does not divide 360 evenly")
    angles = np.arange(int(round(n))) * step_deg
    gains = np.vstack([mode_field(p.mode, angles) for p in config.ports])
    return AzimuthPattern(step_deg=float(step_deg), port_ids=config.port_ids, gains=gains)


def _parse_float(token: str, row_num: int, col: str) -> float:
    try:
        return float(token)
    except ValueError:
        raise PatternFormatError(
            f"row {row_num}: column '{col}' is not a number: {token!r}"
        ) from None


def parse_pattern_csv(text: str) -> AzimuthPattern:
    """Parse interchange CSV into an AzimuthPattern.

    Raises PatternFormatError (with the offending row) on a bad header,
    malformed numbers, a non-uniform or incomplete angle grid, duplicate
    samples, or ports missing at some angles.
    """
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise PatternFormatError("empty pattern file") from None
    if tuple(h.strip() for h in header) != CSV_HEADER:
        raise PatternFormatError(
            f"bad header {header!r}, expected {','.join(CSV_HEADER)}"
        )

    samples: dict[tuple[float, int], complex] = {}
    angles_seen: set[float] = set()
    ports_seen: set[int] = set()
    for row_num, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and row[0].strip() == ""):
            continue
        if len(row) != 4:
            raise PatternFormatError(f"row {row_num}: expected 4 fields, got {len(row)}")
        angle = _parse_float(row[0], row_num, "angle_deg")
        if not (0.0 <= angle < 360.0):
            raise PatternFormatError(f"row {row_num}: angle {angle} outside [0, 360)")
        try:
            port = int(row[1])
        except ValueError:
            raise PatternFormatError(
                f"row {row_num}: column 'port' is not an integer: {row[1]!r}"
            ) from None
        if port < 1:
            raise PatternFormatError(f"row {row_num}: port must be >= 1, got {port}")
        mag_db = _parse_float(row[2], row_num, "mag_db")
        phase_deg = _parse_float(row[3], row_num, "phase_deg")
        if np.isnan(mag_db) or np.isnan(phase_deg) or mag_db == np.inf:
            raise PatternFormatError(f"row {row_num}: non-finite sample value")
        key = (angle, port)
        if key in samples:
            raise PatternFormatError(f"row {row_num}: duplicate sample for {key}")
        samples[key] = 10.0 ** (mag_db / 20.0) * np.exp(1j * np.radians(phase_deg))
        angles_seen.add(angle)
        ports_seen.add(port)

    if not samples:
        raise PatternFormatError("pattern file has no data rows")

    angles = sorted(angles_seen)
    step = 360.0 / len(angles)
    for k, a in enumerate(angles):
        if abs(a - k * step) > 1e-6:
            raise PatternFormatError(
                f"angles do not form a uniform grid over [0, 360): found {a}, "
                f"expected {k * step} for a {len(angles)}-point grid"
            )
    port_ids = tuple(sorted(ports_seen))
    gains = np.empty((len(port_ids), len(angles)), dtype=complex)
    for i, port in enumerate(port_ids):
        for k, a in enumerate(angles):
            try:
                gains[i, k] = samples[(a, port)]
            except KeyError:
                raise PatternFormatError(
                    f"port {port} has no sample at angle {a}"
                ) from None
    return AzimuthPattern(step_deg=step, port_ids=port_ids, gains=gains)


def write_pattern_csv(pattern: AzimuthPattern) -> str:
    """Serialize a pattern to interchange CSV (angle-major row order).

    Floats are written in shortest round-trip form, so parse(write(p))
    reproduces p's complex gains to well below 1e-9.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    angles = pattern.angles_deg()
    for k in range(pattern.n_angles):
        for i, port in enumerate(pattern.port_ids):
            g = pattern.gains[i, k]
            mag = abs(g)
            mag_db = 20.0 * np.log10(mag) if mag > 0.0 else -np.inf
            phase = np.degrees(np.angle(g))
            writer.writerow([repr(float(angles[k])), port, repr(float(mag_db)), repr(float(phase))])
    return buf.getvalue()


def resample(pattern: AzimuthPattern, new_step_deg: float) -> AzimuthPattern:
    """Re-grid a pattern by complex-linear interpolation with wraparound."""
    n = 360.0 / new_step_deg
    if abs(n - round(n)) > 1e-9:
        raise ValueError(f"step {new_step_deg} does not divide 360 evenly")
    n = int(round(n))
    new_angles = np.arange(n) * new_step_deg
    # np.interp needs a closed abscissa, so append the wrapped first sample.
    src_angles = np.append(pattern.angles_deg(), 360.0)
    gains = np.empty((len(pattern.port_ids), n), dtype=complex)
    for i in range(len(pattern.port_ids)):
        row = np.append(pattern.gains[i], pattern.gains[i, 0])
        gains[i] = np.interp(new_angles, src_angles, row.real) + 1j * np.interp(
            new_angles, src_angles, row.imag
        )
    return AzimuthPattern(step_deg=float(new_step_deg), port_ids=pattern.port_ids, gains=gains)


def apply_shadowing(
    pattern: AzimuthPattern, center_deg: float, width_deg: float, depth_db: float
) -> AzimuthPattern:
    """Attenuate magnitudes with a raised-cosine notch; phases are untouched.

    The mask reaches ``depth_db`` of attenuation at ``center_deg``, tapers as
    a raised cosine, and is 0 dB at and beyond ``center_deg +/- width_deg/2``.
    Models a lossy obstruction (e.g. a body phantom) in one sector.
    """
    if not (0.0 < width_deg <= 360.0):
        raise ValueError(f"width must be in (0, 360], got {width_deg}")
    if depth_db < 0.0:
        raise ValueError(f"depth_db must be >= 0, got {depth_db}")
    angles = pattern.angles_deg()
    dist = np.abs((angles - center_deg + 180.0) % 360.0 - 180.0)
    atten_db = np.where(
        dist <= width_deg / 2.0,
        depth_db * 0.5 * (1.0 + np.cos(2.0 * np.pi * dist / width_deg)),
        0.0,
    )
    scale = 10.0 ** (-atten_db / 20.0)
    return AzimuthPattern(
        step_deg=pattern.step_deg,
        port_ids=pattern.port_ids,
        gains=pattern.gains * scale[np.newaxis, :],
    )
