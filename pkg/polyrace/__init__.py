from .config import Config
from .errors import PolyraceError
from .families import FamilySpec, make_family, parse_family_spec
from .harness import ExperimentSpec, Runner, fit_loglog, race
from .numeric_core import OpCounter
from .reports import SolveReport

__all__ = [
    "Config", "PolyraceError", "FamilySpec", "make_family", "parse_family_spec",
    "ExperimentSpec", "Runner", "fit_loglog", "race", "OpCounter", "SolveReport",
]
