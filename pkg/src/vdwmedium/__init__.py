"""Ground-state van der Waals energies of two polarizable particles in a
dispersive magneto-dielectric host, by mode sums and by Green-function traces."""

from .energies import (
    GREEN_CALIBRATION,
    EnergyBreakdown,
    InteractionQuery,
    casimir_polder_ee,
    casimir_polder_em,
    d_ratio,
    large_r_medium,
    limit_oracle,
    london,
    w_ee,
    w_em,
    w_mm,
    w_total,
)
from .errors import DomainError, ModelError, QuadratureError, SingularityError, SpecError
from .materials import (
    VACUUM,
    LorentzPolarizability,
    LorentzTerm,
    Particle,
    ResponseModel,
    StaticPolarizability,
    TwoLevelPolarizability,
    two_level_dielectric,
)
from .quadrature import QuadratureConfig, QuadratureResult

__version__ = "0.1.0"
