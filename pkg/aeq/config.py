import json
import logging
import os
from dataclasses import asdict, dataclass, replace

from aeq.errors import InputError, ToleranceError

logger = logging.getLogger(__name__)

TOL_FILE_ENV = "AEQ_TOL_FILE"

# Multiplier on eps_unit for every closed-form identity check
IDENTITY_SLACK_FACTOR = 10.0

# Additive slack of the rank certificate (absorbs the discreteness of rank)
RANK_SLACK = 0.5

CLIQUE_SEARCH_LIMIT = 200
DEFAULT_RESTARTS = 100
DEFAULT_SEED = 0

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


@dataclass(frozen=True)
class TolerancePolicy:
    """
    All numeric thresholds in one auditable record.

    eps_unit: absolute slack of the unit-distance test |dist - 1| <= eps_unit
    eps_coincide: two points closer than this are the same point
    eps_rank: relative singular-value cutoff (times the largest singular value)
    eps_residual: stress value below which a realization counts as a success
    """

    eps_unit: float = 1e-9
    eps_coincide: float = 1e-9
    eps_rank: float = 1e-8
    eps_residual: float = 1e-8

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise ToleranceError(f"must be a number, got {value!r}", field=name)
            if not value > 0:
                raise ToleranceError(f"must be strictly positive, got {value}", field=name)
        # A coincident pair can never read as a unit pair
        if not self.eps_coincide < 1 - self.eps_unit:
            raise ToleranceError(
                f"eps_coincide ({self.eps_coincide}) must be below 1 - eps_unit "
                f"({1 - self.eps_unit})",
                field="eps_coincide",
            )

    @property
    def identity_slack(self):
        return IDENTITY_SLACK_FACTOR * self.eps_unit

    def with_eps_unit(self, eps_unit):
        return replace(self, eps_unit=float(eps_unit))

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_file(cls, path, base=None):
        """
        Read a tolerance file (JSON object with any subset of the fields).

        Fields missing from the file keep the values of `base` (defaults when
        base is None). Unknown keys are rejected.
        """
        base = base or cls()
        try:
            with open(path, "r") as f:
                doc = json.load(f)
        except FileNotFoundError:
            raise InputError(f"tolerance file not found: {path}", field="tol_file")
        except json.JSONDecodeError as e:
            raise InputError(f"invalid JSON: {e.msg}", field="tol_file", line=e.lineno)

        if not isinstance(doc, dict):
            raise InputError("tolerance file must hold a JSON object", field="tol_file")
        unknown = sorted(set(doc) - set(asdict(base)))
        if unknown:
            raise ToleranceError(f"unknown tolerance fields {unknown}", field="tol_file")

        logger.debug("Loaded tolerances from %s: %s", path, doc)
        return replace(base, **doc)


def resolve_tolerance(tol_file=None, eps=None, environ=None):
    """
    Build the effective TolerancePolicy.

    Precedence, lowest first: defaults, the file named by AEQ_TOL_FILE, the
    explicit tol_file, then eps (which overrides eps_unit only).
    """
    environ = os.environ if environ is None else environ
    tol = TolerancePolicy()

    env_file = environ.get(TOL_FILE_ENV)
    if env_file:
        tol = TolerancePolicy.from_file(env_file, base=tol)
    if tol_file:
        tol = TolerancePolicy.from_file(tol_file, base=tol)
    if eps is not None:
        tol = tol.with_eps_unit(eps)
    return tol


def configure_logging(verbosity=0):
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(level=level, format=LOG_FORMAT, force=True)
