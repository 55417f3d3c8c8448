"""Azimuth BER sweeps, secure-region extraction, and comparison tables.

Reproducibility contract: a sweep evaluates one frozen transmit record at
every grid angle.  The noise stream for grid angle index ``k`` comes from
``numpy.random.default_rng(mix_seed(session.seed, k))``, where ``mix_seed``
is the SplitMix64-style avalanche below.  Per-angle streams are therefore
independent of evaluation order, so serial and concurrent sweeps of the same
session are bit-identical.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .engine import (
    DmScheme,
    DmSessionConfig,
    TxRecord,
    _receive,
    transmit,
)
from .pattern import AzimuthPattern

SWEEP_CSV_HEADER = ("angle_deg", "ber", "evm_rms")

_GOLDEN_64 = 0x9E3779B97F4A7C15
_MASK_64 = (1 << 64) - 1

# The four device configurations compared in the subset table:
# (name, port ids, report-only metadata).
TABLE_CONFIGS = (
    ("P1,P2,P3,P4,P5", (1, 2, 3, 4, 5), {"profile_lambda": 0.19, "efficiency_pct": 49.0}),
    ("P2,P3,P4,P5", (2, 3, 4, 5), {"profile_lambda": 0.12, "efficiency_pct": 49.0}),
    ("P1,P4,P5", (1, 4, 5), {"profile_lambda": 0.12, "efficiency_pct": 87.0}),
    ("P1,P2,P3", (1, 2, 3), {"profile_lambda": 0.12, "efficiency_pct": 49.0}),
)


def mix_seed(seed: int, index: int) -> int:
    """Derive an independent 64-bit stream seed for one grid angle.

    SplitMix64 finalizer applied to ``seed XOR (index * golden)`` where
    ``golden`` is 0x9E3779B97F4A7C15.  Documented so externally written
    tooling can reproduce any single angle of a sweep in isolation.
    """
    x = (int(seed) ^ ((int(index) * _GOLDEN_64) & _MASK_64)) & _MASK_64
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9 & _MASK_64
    x = (x ^ (x >> 27)) * 0x94D049BB133111EB & _MASK_64
    return (x ^ (x >> 31)) & _MASK_64


@dataclass(frozen=True)
class BerSweepResult:
    """Per-angle BER and EVM for one session over a uniform azimuth grid."""

    session: DmSessionConfig
    step_deg: float
    ber: np.ndarray = field(repr=False)
    evm_rms: np.ndarray = field(repr=False)
    reference_port_id: int | None = None

    @property
    def n_angles(self) -> int:
        return len(self.ber)

    def angles_deg(self) -> np.ndarray:
        return np.arange(self.n_angles) * self.step_deg


@dataclass(frozen=True)
class Region:
    """One contiguous below-threshold run: circular center, width, best BER."""

    center_deg: float
    width_deg: float
    min_ber: float


@dataclass(frozen=True)
class RegionReport:
    threshold: float
    regions: tuple[Region, ...]

    def to_json(self) -> str:
        payload = {
            "threshold": self.threshold,
            "regions": [
                {
                    "center_deg": r.center_deg,
                    "width_deg": r.width_deg,
                    "min_ber": r.min_ber,
                }
                for r in self.regions
            ],
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"


@dataclass(frozen=True)
class LuMetrics:
    lu_ber: float
    lu_beamwidth_deg: float
    max_off_region_ber: float


def _resolve_workers(workers: int | None) -> int:
    import os

    if workers is None:
        return 1
    if workers == 0:
        return os.cpu_count() or 1
    if workers < 0:
        raise ValueError(f"workers must be >= 0, got {workers}")
    return workers


def ber_sweep(
    session: DmSessionConfig,
    pattern: AzimuthPattern,
    step_deg: float = 1.0,
    workers: int | None = None,
) -> BerSweepResult:
    """Measure BER and EVM at every angle of a uniform grid.

    One transmit record (bits, port draws, compensation) is generated from
    ``session.seed`` and reused at every angle; only the receiver noise
    differs per angle, drawn from the mixed per-angle stream.  ``workers``
    selects concurrency (None or 1 = serial, 0 = one per CPU); the output is
    identical for any value.
    """
    n = 360.0 / step_deg
    if abs(n - round(n)) > 1e-9:
        raise ValueError(f"step {step_deg} does not divide 360 evenly")
    n = int(round(n))
    tx = transmit(session, pattern, np.random.default_rng(session.seed))
    total_bits = 2 * session.n_symbols

    ber = np.empty(n)
    evm = np.empty(n)

    def eval_angle(k: int) -> tuple[int, float, float]:
        rng = np.random.default_rng(mix_seed(session.seed, k))
        _, errors, evm_k = _receive(session, pattern, tx, k * step_deg, rng)
        return k, errors / total_bits, evm_k

    n_workers = _resolve_workers(workers)
    if n_workers <= 1:
        results = map(eval_angle, range(n))
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            results = list(pool.map(eval_angle, range(n)))
    for k, b, e in results:
        ber[k] = b
        evm[k] = e
    return BerSweepResult(
        session=session,
        step_deg=float(step_deg),
        ber=ber,
        evm_rms=evm,
        reference_port_id=tx.reference_port_id,
    )


def write_sweep_csv(sweep: BerSweepResult) -> str:
    """Serialize a sweep as ``angle_deg,ber,evm_rms`` rows (round-trip floats)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_CSV_HEADER)
    angles = sweep.angles_deg()
    for k in range(sweep.n_angles):
        writer.writerow(
            [repr(float(angles[k])), repr(float(sweep.ber[k])), repr(float(sweep.evm_rms[k]))]
        )
    return buf.getvalue()


def parse_sweep_csv(text: str):
    """Read a sweep CSV back as (angles, ber, evm) arrays.

    Raises ValueError on a bad header, malformed rows, or an empty table.
    """
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError("empty sweep file") from None
    if tuple(h.strip() for h in header) != SWEEP_CSV_HEADER:
        raise ValueError(f"bad sweep header {header!r}, expected {','.join(SWEEP_CSV_HEADER)}")
    rows = []
    for row_num, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and row[0].strip() == ""):
            continue
        if len(row) != 3:
            raise ValueError(f"row {row_num}: expected 3 fields, got {len(row)}")
        try:
            rows.append((float(row[0]), float(row[1]), float(row[2])))
        except ValueError:
            raise ValueError(f"row {row_num}: malformed number in {row!r}") from None
    if not rows:
        raise ValueError("sweep file has no data rows")
    a, b, e = (np.array(col) for col in zip(*rows))
    return a, b, e


def _circular_runs(mask: np.ndarray) -> list[tuple[int, int]]:
    """(start index, length) of maximal True runs, merged across the wrap."""
    n = len(mask)
    if not mask.any():
        return []
    if mask.all():
        return [(0, n)]
    runs = []
    idx = np.flatnonzero(mask)
    start = prev = int(idx[0])
    for i in idx[1:]:
        i = int(i)
        if i == prev + 1:
            prev = i
            continue
        runs.append((start, prev - start + 1))
        start = prev = i
    runs.append((start, prev - start + 1))
    # merge the tail run into the head run when they touch across 360/0
    if len(runs) > 1 and runs[0][0] == 0 and runs[-1][0] + runs[-1][1] == n:
        s, ln = runs.pop()
        first_len = runs[0][1]
        runs[0] = (s, ln + first_len)
    return runs


def extract_regions(sweep: BerSweepResult, threshold: float = 1e-2) -> RegionReport:
    """Secure regions: maximal runs of grid angles with ber strictly below
    threshold, merged across the 0/360 wrap.

    Width is ``run length * step``; center is the circular midpoint of the
    run's first and last grid angle.  Regions are reported in ascending
    center order.
    """
    if not (0.0 < threshold <= 1.0):
        raise ValueError(f"threshold must be in (0, 1], got {threshold}")
    mask = sweep.ber < threshold
    regions = []
    for start, length in _circular_runs(mask):
        center = (start + (length - 1) / 2.0) * sweep.step_deg % 360.0
        members = (start + np.arange(length)) % sweep.n_angles
        regions.append(
            Region(
                center_deg=float(center),
                width_deg=float(length * sweep.step_deg),
                min_ber=float(sweep.ber[members].min()),
            )
        )
    regions.sort(key=lambda r: r.center_deg)
    return RegionReport(threshold=float(threshold), regions=tuple(regions))


def _circ_dist(a: float, b: float) -> float:
    return abs((a - b + 180.0) % 360.0 - 180.0)


def lu_metrics(sweep: BerSweepResult, report: RegionReport) -> LuMetrics:
    """LU-direction BER, width of the region containing the LU, and the worst
    (highest) BER among regions that do not contain the LU -- 0 if none."""
    phi_lu = sweep.session.phi_lu_deg
    angles = sweep.angles_deg()
    k_lu = int(np.argmin(np.abs((angles - phi_lu + 180.0) % 360.0 - 180.0)))
    lu_ber = float(sweep.ber[k_lu])

    half_step = sweep.step_deg / 2.0
    lu_region = None
    for r in report.regions:
        if r.width_deg >= 360.0 or _circ_dist(phi_lu, r.center_deg) <= (r.width_deg - sweep.step_deg) / 2.0 + half_step:
            lu_region = r
            break
    width = float(lu_region.width_deg) if lu_region is not None else 0.0
    off = [r.min_ber for r in report.regions if r is not lu_region]
    return LuMetrics(
        lu_ber=lu_ber,
        lu_beamwidth_deg=width,
        max_off_region_ber=float(max(off)) if off else 0.0,
    )


@dataclass(frozen=True)
class SubsetRow:
    name: str
    scheme: str
    region_count: int
    lu_ber: float
    lu_beamwidth_deg: float
    max_off_region_ber: float
    profile_lambda: float | None
    efficiency_pct: float | None


@dataclass(frozen=True)
class SubsetReport:
    snr_db: float
    n_symbols: int
    seed: int
    phi_lu_list: tuple[float, ...]
    threshold: float
    rows: tuple[SubsetRow, ...]

    def to_json(self) -> str:
        payload = {
            "snr_db": self.snr_db,
            "n_symbols": self.n_symbols,
            "seed": self.seed,
            "phi_lu_list": list(self.phi_lu_list),
            "threshold": self.threshold,
            "rows": [vars(r) for r in self.rows],
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            [
                "name",
                "scheme",
                "region_count",
                "lu_ber",
                "lu_beamwidth_deg",
                "max_off_region_ber",
                "profile_lambda",
                "efficiency_pct",
            ]
        )
        for r in self.rows:
            writer.writerow(
                [
                    r.name,
                    r.scheme,
                    r.region_count,
                    repr(r.lu_ber),
                    repr(r.lu_beamwidth_deg),
                    repr(r.max_off_region_ber),
                    "" if r.profile_lambda is None else repr(r.profile_lambda),
                    "" if r.efficiency_pct is None else repr(r.efficiency_pct),
                ]
            )
        return buf.getvalue()


def _evaluate_config(
    pattern: AzimuthPattern,
    name: str,
    port_ids: tuple[int, ...],
    scheme: DmScheme,
    snr_db: float,
    n_symbols: int,
    seed: int,
    phi_lu_list,
    metadata: dict | None,
    threshold: float,
    step_deg: float,
    workers: int | None,
) -> SubsetRow:
    counts, bers, widths, offs = [], [], [], []
    for phi_lu in phi_lu_list:
        session = DmSessionConfig(
            scheme=scheme,
            active_port_ids=port_ids,
            phi_lu_deg=float(phi_lu),
            snr_db=snr_db,
            n_symbols=n_symbols,
            seed=seed,
        )
        sweep = ber_sweep(session, pattern, step_deg=step_deg, workers=workers)
        report = extract_regions(sweep, threshold)
        metrics = lu_metrics(sweep, report)
        counts.append(len(report.regions))
        bers.append(metrics.lu_ber)
        widths.append(metrics.lu_beamwidth_deg)
        offs.append(metrics.max_off_region_ber)
    meta = metadata or {}
    return SubsetRow(
        name=name,
        scheme=scheme.value,
        region_count=max(counts),
        lu_ber=float(np.mean(bers)),
        lu_beamwidth_deg=float(np.mean(widths)),
        max_off_region_ber=float(max(offs)),
        profile_lambda=meta.get("profile_lambda"),
        efficiency_pct=meta.get("efficiency_pct"),
    )


def subset_table(
    pattern: AzimuthPattern,
    snr_db: float,
    n_symbols: int,
    seed: int,
    phi_lu_list=(45.0, 135.0, 225.0, 315.0),
    subsets=None,
    include_switched_full: bool = False,
    threshold: float = 1e-2,
    step_deg: float = 1.0,
    workers: int | None = None,
) -> SubsetReport:
    """Compare port subsets under the multiport scheme, averaged over phi_lu.

    By default the four device configurations in ``TABLE_CONFIGS`` are
    evaluated; pass ``subsets`` as an iterable of port-id tuples to evaluate
    custom selections instead.  ``include_switched_full`` prepends a
    switched-scheme row for the full port set.  Region counts are the
    maximum over the phi_lu list (they coincide for rotationally uniform
    patterns); BER and width columns are means.
    """
    rows = []
    if subsets is not None:
        configs = []
        for ids in subsets:
            ids = tuple(int(i) for i in ids)
            meta = next((m for _, known, m in TABLE_CONFIGS if known == ids), None)
            configs.append(("P" + ",P".join(str(i) for i in ids), ids, meta))
    else:
        configs = list(TABLE_CONFIGS)
    if include_switched_full:
        name, ids, meta = configs[0]
        rows.append(
            _evaluate_config(
                pattern, name + " (switched)", ids, DmScheme.SWITCHED_SINGLE_PORT,
                snr_db, n_symbols, seed, phi_lu_list, meta, threshold, step_deg, workers,
            )
        )
    for name, ids, meta in configs:
        rows.append(
            _evaluate_config(
                pattern, name, ids, DmScheme.SIMULTANEOUS_MULTIPORT,
                snr_db, n_symbols, seed, phi_lu_list, meta, threshold, step_deg, workers,
            )
        )
    return SubsetReport(
        snr_db=float(snr_db),
        n_symbols=int(n_symbols),
        seed=int(seed),
        phi_lu_list=tuple(float(p) for p in phi_lu_list),
        threshold=float(threshold),
        rows=tuple(rows),
    )


@dataclass(frozen=True)
class ConstellationCapture:
    phi_deg: float
    points: np.ndarray = field(repr=False)
    evm_rms: float


def constellation_capture(
    session: DmSessionConfig,
    pattern: AzimuthPattern,
    phi_deg: float,
    k_symbols: int,
) -> ConstellationCapture:
    """Equalized received symbols for an observer at ``phi_deg``.

    Runs a fresh ``k_symbols``-long record of the same session; EVM is the
    RMS distance to the nearest ideal constellation point (unit symbol
    energy).  The noise stream is keyed on the bit pattern of ``phi_deg`` so
    captures at distinct angles are independent but reproducible.
    """
    if k_symbols < 1:
        raise ValueError(f"k_symbols must be >= 1, got {k_symbols}")
    sub = replace(session, n_symbols=int(k_symbols))
    tx = transmit(sub, pattern, np.random.default_rng(sub.seed))
    angle_key = int(np.float64(phi_deg % 360.0).view(np.uint64))
    rng = np.random.default_rng(mix_seed(sub.seed, angle_key))
    equalized, _, evm = _receive(sub, pattern, tx, float(phi_deg), rng)
    return ConstellationCapture(phi_deg=float(phi_deg), points=equalized, evm_rms=evm)
