"""Python access to the anisotropic MHD simulator and its diagnostics.

Configuration dictionaries use the same dotted keys as the config files,
for example ``{"grid.n": "16", "time.T": "0.1"}``; values may be any type
whose ``str()`` is the text form.
"""

from ._anisomhd import (
    ConfigError,
    IoError,
    UsageError,
    check_interp_1d,
    constant_sweep,
    decay_map,
    dispersion_roots,
    energy_csv_header,
    resume_experiment,
    run_campaign,
    run_experiment,
    validate_simulator_linear,
)

__all__ = [
    "ConfigError",
    "IoError",
    "UsageError",
    "check_interp_1d",
    "constant_sweep",
    "decay_map",
    "dispersion_roots",
    "energy_csv_header",
    "resume_experiment",
    "run_campaign",
    "run_experiment",
    "validate_simulator_linear",
]
