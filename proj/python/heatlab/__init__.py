"""Semilinear heat equation toolkit: nonlinearity tails, regime classification and a radial Picard solver.

Nonlinearities, data and grids are plain dicts in the same format as the CLI spec files, e.g.
``{"kind": "Power", "params": {"p": 3}}``.
"""

import json

from . import _core
from ._core import NumericalError, SpecError

__all__ = [
    "NumericalError",
    "SpecError",
    "blowup_functional",
    "classify_f_beta",
    "classify_qr",
    "contradiction_sides",
    "eval_F",
    "exponent_profile",
    "F_inverse",
    "heat_flow",
    "kappa",
    "simulate",
    "ul_norm",
]


def _dump(obj):
    return "" if obj is None else json.dumps(obj)


def kappa():
    return _core.kappa()


def classify_qr(N, q, r, bound_fF_holds=None, data_class="L1ul"):
    return json.loads(_core.classify_qr(N, q, r, bound_fF_holds, data_class))


def classify_f_beta(N, alpha, beta):
    return json.loads(_core.classify_f_beta(N, alpha, beta))


def eval_F(nonlinearity, u):
    return _core.eval_F(_dump(nonlinearity), u)


def F_inverse(nonlinearity, v):
    return _core.F_inverse(_dump(nonlinearity), v)


def exponent_profile(nonlinearity):
    return json.loads(_core.exponent_profile(_dump(nonlinearity)))


def ul_norm(datum, N, r=1.0, nonlinearity=None):
    return json.loads(_core.ul_norm(_dump(datum), N, r, _dump(nonlinearity)))


def heat_flow(datum, N, t, grid=None, nonlinearity=None):
    """S(t) applied to the sampled datum; returns nodes ``r``, values ``u`` and the far-field value."""
    return json.loads(_core.heat_flow(_dump(datum), N, t, _dump(grid or {}), _dump(nonlinearity)))


def simulate(nonlinearity, datum, N, T=0.1, steps=64, grading=10, max_n=200, tol=1e-9, grid=None):
    """Monotone Picard ladder up to time T. ``nonlinearity=None`` runs the linear heat flow."""
    out = _core.simulate(_dump(nonlinearity), _dump(datum), N, _dump(grid or {}), T, steps, grading, max_n, tol)
    return json.loads(out)


def blowup_functional(beta=1.0, N=1, rho=0.1, H0=1.0, C2=0.0):
    return json.loads(_core.blowup_functional(beta, N, rho, H0, C2))


def contradiction_sides(beta, eps, N, rho, C2=0.0):
    return json.loads(_core.contradiction_sides(beta, eps, N, rho, C2))
