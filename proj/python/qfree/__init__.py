"""Exact checks for a two-boson free-field realization of U_q(sl2^) at level -1/2.

Checks return decoded report dictionaries with a ``status`` of ``"pass"`` or ``"fail"``.
Scalars in Q(u), u = q^(1/4), are exchanged as strings such as ``"(u^4 + 1)/u^2"``.
"""

import json as _json

from . import _qfree

scalar_str = _qfree.scalar_str
scalar_specialize = _qfree.scalar_specialize
qint = _qfree.qint
apply_current = _qfree.apply_current
kernel_dimension = _qfree.kernel_dimension
intertwining_conditions = _qfree.intertwining_conditions
two_point_product = _qfree.two_point_product
set_workers = _qfree.set_workers
workers = _qfree.workers


def _decoded(fn):
    def wrapper(*args, **kwargs):
        return _json.loads(fn(*args, **kwargs))

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


check_drinfeld = _decoded(_qfree.check_drinfeld)
check_xplus_builders = _decoded(_qfree.check_xplus_builders)
check_screening = _decoded(_qfree.check_screening)
clifford_check = _decoded(_qfree.clifford_check)
kernel_character = _decoded(_qfree.kernel_character)
hw_verify = _decoded(_qfree.hw_verify)
check_star_identity = _decoded(_qfree.check_star_identity)
check_S = _decoded(_qfree.check_S)
check_jacobi_triple = _decoded(_qfree.check_jacobi_triple)
check_ope_formula = _decoded(_qfree.check_ope_formula)
check_intertwining = _decoded(_qfree.check_intertwining)
check_screening_anticommute = _decoded(_qfree.check_screening_anticommute)
normalization_check = _decoded(_qfree.normalization_check)
two_point = _decoded(_qfree.two_point)
report_schema = _decoded(_qfree.report_schema)

__all__ = [name for name in dir() if not name.startswith("_")]
