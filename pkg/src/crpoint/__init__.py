"""Quadratic complex points of real 4-manifolds in complex 3-space.

Pairs ``(A, B)`` model ``w = conj(z)^T A z + Re(z^T B z)``.  The package
classifies them, reduces them to normal forms, connects them to the two
model pairs by certified homotopies, checks the radial interpolation
construction, and scans the Levi forms of the model neighborhood functions.
"""

__version__ = "0.1.0"

from .canon import CosquareClass, CosquareTag, NormalForm, classify_cosquare, normal_form
from .homotopy import HomotopyOptions, HomotopyPath, connect_to_model, model_pair, verify_nondegenerate
from .pairs import (
    ELLIPTIC_MODEL,
    HYPERBOLIC_MODEL,
    GroupElement,
    MatrixPair,
    Sign,
    act,
    compose,
    det4,
    sign_class,
)

__all__ = [
    "CosquareClass",
    "CosquareTag",
    "ELLIPTIC_MODEL",
    "GroupElement",
    "HYPERBOLIC_MODEL",
    "HomotopyOptions",
    "HomotopyPath",
    "MatrixPair",
    "NormalForm",
    "Sign",
    "act",
    "classify_cosquare",
    "compose",
    "connect_to_model",
    "det4",
    "model_pair",
    "normal_form",
    "sign_class",
    "verify_nondegenerate",
]
