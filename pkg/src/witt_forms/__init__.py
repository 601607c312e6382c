"""Exact signatures, Witt groups and prime m-ideals for quadratic and hermitian
forms over iterated Laurent series fields."""

__version__ = "0.1.0"

from .errors import *  # noqa: E402,F401,F403
from .field_tower import (  # noqa: E402
    Base,
    FieldElement,
    FieldTower,
    Ordering,
    ValueVector,
    enumerate_orderings,
    is_square,
    leading_term,
    sign_at,
    split_unit,
    valuation,
)
from .grammar import (  # noqa: E402
    parse_algebra,
    parse_algebra_element,
    parse_element,
    parse_field,
    parse_hermitian_form,
    parse_ordering,
    parse_quadratic_form,
)
from .quadratic_witt import (  # noqa: E402
    Fundamental,
    ModPKernel,
    QuadraticForm,
    SignKernel,
    hilbert_symbol,
    is_anisotropic,
    is_witt_zero,
    residue_profile,
    signature_at,
    signature_vector,
    springer_residues,
)
from .algebras_involutions import (  # noqa: E402
    AlgebraElement,
    AlgebraKind,
    AlgebraWithInvolution,
    InvolutionType,
    base_algebra,
    etale_algebra,
    is_nil,
    nil_orderings,
    quaternion_algebra,
    valuation_data,
)
from .hermitian_signatures import (  # noqa: E402
    HermitianForm,
    MatrixForm,
    ReferenceTuple,
    default_reference_tuple,
    h_signature_at,
    is_hyperbolic,
    larmour_residues,
    m_signature_at,
    single_reference,
    total_h_signature,
)
from .tristate import UNKNOWN  # noqa: E402
