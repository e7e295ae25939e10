"""Fourier-analytic structure on finite abelian groups.

Exact transforms and A(G)-norms, large spectra, dissociated sets, Riesz
products and auxiliary measures, Bohr sets, spectral covering results and
the iterative approximations built from them.  Every construction checks
its output against a direct computation before returning.
"""

from .config import DEFAULT, Constants, load_config
from .errors import (
    DegenerateInputError,
    GroupMismatchError,
    GroupSpecError,
    NotDissociatedError,
    ParameterError,
    RegularityError,
    RoundBudgetError,
    SizeCapError,
    SpectralBohrError,
    VerificationError,
    WidthUnderflowError,
    WrongGroupKindError,
)
from .groups import (
    CharacterSet,
    Group,
    GroupFunction,
    GroupMeasure,
    Spectrum,
    a_ratio,
    boolean_cube,
    convolve,
    cyclic,
    fourier,
    inverse,
    make_group,
    norm,
    parse_group,
    tv_norm,
)
from .spectra import large_spectrum
from .dissociation import is_dissociated, is_s_dissociated, max_dissociated_subset, rider_count, span
from .riesz import HermitianWeights, aux_measure, make_tau, riesz_product
from .bohr import bohr_set, find_regular, nest_delta, smoothed_cutoff
from .structure import ag_cover, chang_cover, local_ag_cover, model_local_cover
from .iteration import bohr_approximate, discrete_ivt, f2n_approximate, littlewood_certificate, poor_approximate

__version__ = "0.1.0"
