"""Generalized Wright functions, Fox-H densities and generalized Wright measures."""
from ._backend import BACKEND
from .donsker import (PairingData, check_donsker_params, donsker_at_a,
                      donsker_expectation, donsker_report, donsker_t_transform,
                      integrability_bound, integrability_lhs)
from .errors import (ConditioningError, ConstructionError, ConvergenceError,
                     DomainError, GWrightError, ParameterError, PrecisionWarning,
                     StateError, UnsupportedRegimeError)
from .fhdam import FHDensity, fhdensity
from .foxh import FoxHParams, foxh_eval, gwf_via_foxh
from .gwm import GWMeasure, gwmeasure
from .polys import PolyCoeffs, fox_hermite, fox_hermite_gen, gram_schmidt_orthopoly
from .specfun import integrate, log_gamma, make_rng
from .wright import ValidatedFamily, WrightParams, family_psi, gwf, validate

__version__ = "0.1.0"


def load_family(name_or_path):
    """Validated family from a JSON file, or a shipped one by name ("ml05", "ml05.json")."""
    from pathlib import Path
    from importlib import resources

    path = Path(name_or_path)
    if not path.exists():
        stem = path.name if path.suffix == ".json" else path.name + ".json"
        shipped = resources.files(__package__) / "data" / stem
        if shipped.is_file():
            path = Path(str(shipped))
    return validate(WrightParams.from_file(path))
