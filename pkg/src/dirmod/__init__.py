"""Directional-modulation physical-layer security simulator.

Models a compact multimode antenna whose ports radiate rotating azimuthal
phase modes, and two transmission schemes over it: random per-symbol port
switching with direction-locked phase compensation, and simultaneous
phase-conjugate multiport steering.  Provides azimuth BER/EVM sweeps,
secure-region extraction, subset comparison tables, and a CLI.
"""

__version__ = "0.1.0"

from .antenna import (
    CANONICAL_METADATA,
    AntennaConfig,
    AntennaPort,
    ModeSpec,
    array_factor,
    canonical_antenna,
    mode_field,
    steering_weights,
)
from .engine import (
    DmScheme,
    DmSessionConfig,
    TxRecord,
    compensation_phase,
    effective_gain_switched,
    multiport_composite_gain,
    qpsk_demodulate,
    qpsk_modulate,
    receive_and_count,
    theoretical_qpsk_ber,
    transmit,
    transmit_multiport,
    transmit_switched,
)
from .pattern import (
    AzimuthPattern,
    PatternFormatError,
    apply_shadowing,
    parse_pattern_csv,
    resample,
    synthesize_pattern,
    write_pattern_csv,
)
from .sweep import (
    BerSweepResult,
    ConstellationCapture,
    LuMetrics,
    Region,
    RegionReport,
    SubsetReport,
    SubsetRow,
    ber_sweep,
    constellation_capture,
    extract_regions,
    lu_metrics,
    mix_seed,
    parse_sweep_csv,
    subset_table,
    write_sweep_csv,
)

__all__ = [
    "__version__",
    "CANONICAL_METADATA",
    "AntennaConfig",
    "AntennaPort",
    "AzimuthPattern",
    "BerSweepResult",
    "ConstellationCapture",
    "DmScheme",
    "DmSessionConfig",
    "LuMetrics",
    "ModeSpec",
    "PatternFormatError",
    "Region",
    "RegionReport",
    "SubsetReport",
    "SubsetRow",
    "TxRecord",
    "apply_shadowing",
    "array_factor",
    "ber_sweep",
    "canonical_antenna",
    "compensation_phase",
    "constellation_capture",
    "effective_gain_switched",
    "extract_regions",
    "lu_metrics",
    "mix_seed",
    "mode_field",
    "multiport_composite_gain",
    "parse_pattern_csv",
    "parse_sweep_csv",
    "qpsk_demodulate",
    "qpsk_modulate",
    "receive_and_count",
    "resample",
    "steering_weights",
    "subset_table",
    "synthesize_pattern",
    "theoretical_qpsk_ber",
    "transmit",
    "transmit_multiport",
    "transmit_switched",
    "write_pattern_csv",
    "write_sweep_csv",
]
