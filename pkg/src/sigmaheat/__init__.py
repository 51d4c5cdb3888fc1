"""Exact construction and verification of the heat-equation operators that
annihilate the sigma function of a hyperelliptic curve ``y^2 = x^(2g+1) + ...``.
"""
from .algebra import LambdaPoly, XPoly, lam
from .construct import GenusContext, build_L, build_Q, context, h_from_generating, q_family
from .derivations import PsiPoly, build_script_l, compute_w
from .errors import SigmaHeatError
from .fixtureset import FixtureSet, load_fixtures
from .verify import golden_compare, run_checks
from .weyl import LambdaVectorField, SchrodingerOperator, WeylOperator, q_commutator

__version__ = "0.1.0"

__all__ = [
    "GenusContext",
    "FixtureSet",
    "LambdaPoly",
    "LambdaVectorField",
    "PsiPoly",
    "SchrodingerOperator",
    "SigmaHeatError",
    "WeylOperator",
    "XPoly",
    "build_L",
    "build_Q",
    "build_script_l",
    "compute_w",
    "context",
    "golden_compare",
    "h_from_generating",
    "lam",
    "load_fixtures",
    "q_commutator",
    "q_family",
    "run_checks",
]
