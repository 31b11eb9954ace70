"""Fractional Hankel transform, translation and wavelet transform toolkit."""

__version__ = "0.1.0"

from .errors import (
    AccuracyLoss,
    DegenerateAngle,
    FitUnstable,
    FrHankelError,
    GridTooCoarse,
    IdentityAngle,
    NoConvergence,
    NonPositiveSequence,
    NumericalError,
    OrderOutOfRange,
    ParameterUnsupported,
    TruncationFailure,
    UnsupportedFamily,
    ValidationError,
)
from .model import (
    AngleClass,
    ComplexSignal,
    GaussChirp,
    GaussChirpSum,
    RadialGrid,
    Spacing,
    TransformParams,
    grid_from_spec,
    kernel_constant,
    make_params,
    oracle_family,
    radial_derivative,
)
from .specialfn import bessel_eval, bessel_j, scaled_bessel
from .quadrature import QuadratureResult, QuadratureSpec, integrate
from .frht import (
    LazyTransform,
    forward,
    forward_lazy,
    inverse,
    inverse_lazy,
    kernel,
    kernel_matrix,
    oracle_forward,
    oracle_inverse,
    parseval_defect,
    parseval_defects,
    transform_chirp_sum,
    weighted_inner,
)
from .operators import (
    LemmaPart,
    MOperatorChain,
    apply_M,
    apply_M_chain,
    leibniz_defect,
    verify_lemma_1_7,
)
from .translation import PhiFunction, d_kernel, translate
from .wavelet import (
    CwtPath,
    WaveletCoefficients,
    cwt_direct,
    cwt_direct_batch,
    cwt_spectral,
    daughter,
    decay_check,
    decay_quantity,
)
from .type_s import (
    SequenceFamily,
    check_inequality_1_19,
    check_sequence,
    fit_growth,
    growth_trend,
    seminorm_table,
    seminorm_table_2d,
    sequence_family,
)
