"""Order isomorphisms between finite function spaces.

Operators are square matrices in point coordinates: (Tf)(y) = sum_x M[y, x] f(x).
"""

from ._core import (
    Error,
    InvalidArgument,
    Rejection,
    __version__,
    check_adequate,
    classify,
    compactify,
    decay_check,
    decompactify,
    decompose,
    eval_expr,
    is_order_isomorphism,
    lipschitz_family,
    local_form,
    run,
)

__all__ = [
    "Error",
    "InvalidArgument",
    "Rejection",
    "__version__",
    "check_adequate",
    "classify",
    "compactify",
    "decay_check",
    "decompactify",
    "decompose",
    "eval_expr",
    "is_order_isomorphism",
    "lipschitz_family",
    "local_form",
    "run",
]
