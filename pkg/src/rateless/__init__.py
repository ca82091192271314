"""Deterministic rateless code for the binary symmetric channel.

The package grows a generator matrix row by row so that every prefix is a
usable block code, decodes prefixes by exhaustive maximum-likelihood search,
wraps the expensive inner code in a Reed-Solomon concatenation for longer
messages, and ships a verifier for the closed-form spectral and error bounds
the construction is designed to satisfy.
"""

__version__ = "0.1.0"

from .gf2 import BitWord, GeneratorMatrix, dot, encode_prefix, hamming_weight
from .builder import BuilderState, BuilderMode, RowSearchError, STRICT, scaled
from .inner import InnerCode
from .channel import ChannelSpec, transmit, pair_error_prob, exponent_beta
from .outer import OuterCodeSpec, ReedSolomonCode
from .concat import ConcatParams, ConcatCode, derive_params

__all__ = [
    "BitWord",
    "GeneratorMatrix",
    "dot",
    "encode_prefix",
    "hamming_weight",
    "BuilderState",
    "BuilderMode",
    "RowSearchError",
    "STRICT",
    "scaled",
    "InnerCode",
    "ChannelSpec",
    "transmit",
    "pair_error_prob",
    "exponent_beta",
    "OuterCodeSpec",
    "ReedSolomonCode",
    "ConcatParams",
    "ConcatCode",
    "derive_params",
    "__version__",
]
