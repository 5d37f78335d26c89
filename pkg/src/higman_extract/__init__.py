"""Executable Higman realizer extracted from Nash-Williams' minimal bad sequence proof."""

from .errors import ContractViolation, FuelExhausted, GuaranteeViolated, SpecParseError
from .higman import BOOL_INSTANCE, ONE_LETTER_INSTANCE, GoodPair, HigmanInstance, find_good_pair, phi_bound
from .seq_core import Fuel, InfSeq, ext, spec

__all__ = [
    "BOOL_INSTANCE",
    "ONE_LETTER_INSTANCE",
    "ContractViolation",
    "Fuel",
    "FuelExhausted",
    "GoodPair",
    "GuaranteeViolated",
    "HigmanInstance",
    "InfSeq",
    "SpecParseError",
    "ext",
    "find_good_pair",
    "phi_bound",
    "spec",
]
