"""Multiple Charlier and Meixner polynomials on the r-star."""
from .analysis import (
    LimitReport,
    OrthogonalityReport,
    ZeroReport,
    limit_check,
    orthogonality_check,
    symmetry_check,
    zero_locate,
)
from .constructors import (
    DETERMINANT,
    EXPLICIT,
    RODRIGUES,
    ConstructionReport,
    PathwayAgreement,
    construct,
    determinant_construct,
    explicit,
    pathway_agreement,
    rodrigues,
)
from .errors import (
    ClassificationUnavailableError,
    DegenerateDenominatorError,
    NonNormalIndexError,
    ParameterError,
    StarMOPError,
)
from .measures import (
    CharlierParams,
    MassPointGrid,
    MeixnerParams,
    MomentTable,
    lattice_sum,
    moment,
    perfectness_check,
)
from .numeric import GaussianRational, PrecisionConfig
from .polynomials import MultiIndex, PochhammerPoly, Poly, StarPolynomial
from .recurrence import RecurrenceRow, coeffs, d_via_integral, recurrence_residual

__version__ = "0.1.0"
