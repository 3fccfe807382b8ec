"""Exact certificates for reducing the dyadic MZ difference to dilated
generalized Riemann differences, with symbolic and numerical validation."""

from .certificates import (
    Case,
    Certificate,
    CertificateFormatError,
    InfeasibleError,
    InvariantViolationError,
    SchemeIdentity,
    Term,
    VerifyResult,
    admissible_k,
    certificate_identity,
    certificate_to_json_dict,
    certify,
    certify_inductive,
    certify_solver,
    default_s_candidates,
    dumps_certificate,
    generator_poly,
    generators,
    parse_certificate,
    verify,
)
from .differences import (
    DifferenceScheme,
    dilate,
    from_laurent,
    ggr_difference,
    linear_combination,
    mz_difference,
    mz_polynomial,
    to_laurent,
)
from .laurent import LaurentPoly
from .numeric import (
    DemoReport,
    QuotientTable,
    TestFunction,
    demo_ggr,
    float_error_bound,
    quotient,
    quotient_table,
    scheme_apply,
)

__version__ = "0.1.0"

__all__ = [
    "Case",
    "Certificate",
    "CertificateFormatError",
    "DemoReport",
    "DifferenceScheme",
    "InfeasibleError",
    "InvariantViolationError",
    "LaurentPoly",
    "QuotientTable",
    "SchemeIdentity",
    "Term",
    "TestFunction",
    "VerifyResult",
    "admissible_k",
    "certificate_identity",
    "certificate_to_json_dict",
    "certify",
    "certify_inductive",
    "certify_solver",
    "default_s_candidates",
    "demo_ggr",
    "dilate",
    "dumps_certificate",
    "float_error_bound",
    "from_laurent",
    "generator_poly",
    "generators",
    "ggr_difference",
    "linear_combination",
    "mz_difference",
    "mz_polynomial",
    "parse_certificate",
    "quotient",
    "quotient_table",
    "scheme_apply",
    "to_laurent",
    "verify",
]
