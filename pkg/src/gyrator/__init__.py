"""Discrete gyrator transforms: fast algorithms, oracles, and applications.

The transform family lives in gyrator.transforms (convolution, DFT, and
circular-convolution routes plus the brute-force reference) and gyrator.hgf
(the eigenbasis route); gyrator.oracle holds closed-form references and
complexity accounting; gyrator.apps the imaging applications; gyrator.cli
the command-line tool.
"""

from .backend import HAVE_COMPILED, kernel_backend
from .core import (
    ABCDMatrix,
    Angle,
    ComplexField,
    as_angle,
    compose,
    gyrator_matrix,
    nrmse,
    reflect,
)
from .transforms import (
    DgtMethod,
    dgt_auto,
    dgt_ccc,
    dgt_dft,
    dgt_direct,
    dgt_lcc,
    dgt_lcc_central,
    dgt_lcc_inverse,
)
from .hgf import (
    HGFBasis,
    WignerShellSet,
    build_shell_matrices,
    dfrft2_separable,
    dgt_dhgf,
    dgt_dhgf_direct,
    dgt_dhgf_fast,
    discrete_hgf_basis,
    hgf2,
    rhgf,
    wigner_D,
    wigner_d,
    wigner_d_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "ABCDMatrix",
    "Angle",
    "ComplexField",
    "DgtMethod",
    "HAVE_COMPILED",
    "HGFBasis",
    "WignerShellSet",
    "as_angle",
    "build_shell_matrices",
    "compose",
    "dfrft2_separable",
    "dgt_auto",
    "dgt_ccc",
    "dgt_dft",
    "dgt_dhgf",
    "dgt_dhgf_direct",
    "dgt_dhgf_fast",
    "dgt_direct",
    "dgt_lcc",
    "dgt_lcc_central",
    "dgt_lcc_inverse",
    "discrete_hgf_basis",
    "gyrator_matrix",
    "hgf2",
    "kernel_backend",
    "nrmse",
    "reflect",
    "rhgf",
    "wigner_D",
    "wigner_d",
    "wigner_d_matrix",
    "__version__",
]
