"""Symbolic layer: differential operators, gl(infinity) windows and labels."""

from .diffop import (
    AntiInvolution,
    DiffOp,
    MembershipError,
    D_elem,
    J,
    L,
    Wop,
    apply_antiinvolution,
    basis_convert,
    diffop_bracket,
    diffop_mul,
    from_basis,
    graded_element,
    graded_parity,
    in_subalgebra,
    psi_cocycle,
    t_elem,
    theta,
)
from .glinf import (
    E,
    GlInfElement,
    WindowError,
    cocycle_C,
    cocycle_compat,
    glinf_bracket,
    in_dinf,
    phi,
)
from .labels import (
    ExponentSet,
    LabelsA,
    LabelsDplus,
    MalformedExponentSet,
    labels_from_exponents,
)
