"""Waring ranks and minimal power-sum decompositions of complex binary
forms, with exact (Gaussian-rational) and float backends."""

from .errors import (NumericError, OracleSearchError, ParseError,
                     VerificationError, WaringFormsError, ZeroFormError)
from .forms import (BinaryForm, Decomposition, DiffOperator, LinearFormPower,
                    apply_operator, direction_factor, operator_product)
from .scalars import GaussianRational
from .parser import (format_decomposition, format_form, format_operator,
                     parse_decomposition, parse_form, parse_operator)
from .apolarity import (AnnihilatorBasis, OracleReport, annihilator_space,
                        apolarity_check, apolarity_image, operator_discriminant,
                        oracle_rank, oracle_report, squarefree_binary)
from .waring import (AboveD, FRankCertificate, RankReport, VerificationReport,
                     decompose, enumerate_decompositions, f_rank,
                     roots_of_unity_decomposition, verify, waring_rank)

__all__ = [
    "AboveD", "AnnihilatorBasis", "BinaryForm", "Decomposition",
    "DiffOperator", "FRankCertificate", "GaussianRational", "LinearFormPower",
    "NumericError", "OracleReport", "OracleSearchError", "ParseError",
    "RankReport", "VerificationError", "VerificationReport",
    "WaringFormsError", "ZeroFormError", "annihilator_space",
    "apolarity_check", "apolarity_image", "apply_operator", "decompose",
    "direction_factor", "enumerate_decompositions", "f_rank",
    "format_decomposition", "format_form", "format_operator",
    "operator_discriminant", "operator_product", "oracle_rank",
    "oracle_report", "parse_decomposition", "parse_form", "parse_operator",
    "roots_of_unity_decomposition", "squarefree_binary", "verify",
    "waring_rank",
]

__version__ = "0.1.0"
