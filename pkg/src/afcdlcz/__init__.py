"""Monte-Carlo simulation and photon-counting analysis of an AFC-DLCZ
correlated photon-pair source with embedded spin-wave quantum memory.

The package has four layers:

* :mod:`afcdlcz.config`   - experiment parameters, trial schedule, validation
* :mod:`afcdlcz.simulate` - trial-by-trial Monte-Carlo event generation
* :mod:`afcdlcz.analysis` - coincidence counting, g2 estimators, fits
* :mod:`afcdlcz.cli`      - command line front end (simulate / analyze /
  sweep / budget / reproduce / selftest)
"""

__version__ = "0.1.0"

from .config import (
    AFCParams,
    ConfigError,
    DetectionEvent,
    EfficiencyBudget,
    ExperimentConfig,
    TrialSchedule,
    build_schedule,
    validate,
)
from .events import EventStream
from .memory import (
    eta_decoh,
    eta_loss,
    eta_write,
    infer_eta_rephasing,
    readout_budget,
)

__all__ = [
    "AFCParams",
    "ConfigError",
    "DetectionEvent",
    "EfficiencyBudget",
    "EventStream",
    "ExperimentConfig",
    "TrialSchedule",
    "build_schedule",
    "eta_decoh",
    "eta_loss",
    "eta_write",
    "infer_eta_rephasing",
    "readout_budget",
    "validate",
]
