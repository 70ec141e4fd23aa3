"""Warped and mixed Fourier transforms for chirp harmonization and anomalous diffusion."""
from warpft._backend import BACKEND
from warpft.errors import (
    DomainError,
    NumericFailure,
    SingularityError,
    StepSizeError,
    TruncationError,
    UsageError,
    WarpftError,
)
from warpft.signals import GridSpec, SampledSignal
from warpft.warp import (
    OddPolynomial,
    PhaseSpacePoint,
    SignedMonomial,
    apply_pw_operator,
    conjugate_momentum,
    identity,
    poisson_bracket,
    warp_from_dict,
    warp_from_json,
)

__version__ = "0.1.0"
