"""Numerical toolkit for the Clifford-algebra uncloneable-bit candidate.

Modules:
    clifford      Pauli strings and Jordan-Wigner anticommuting generators.
    scheme        key generation, encryption and decryption.
    game          the game operator W_K and special adversary strategies.
    sdp           single-block SDP layer (embedded interior point, cvxopt adapter).
    npa1, npa2    level-1 and level-2 NPA upper bounds.
    sos           sum-of-squares certificates for P_K.
    seesaw        alternating maximization of the game value (lower bounds).
    cli           command-line driver.
"""

from .clifford import CliffordFamily, PauliString, family_for, jordan_wigner_generators, operator_norm
from .errors import (
    CliffordUEError,
    ConjectureViolation,
    DomainError,
    NumericalFailure,
    StructureError,
    UnsatisfiableRequest,
)
from .game import GameOperator, Strategy, build_W, conjecture_bound, win_prob_from_norm
from .npa1 import NPA1Certificate, npa1_asymptote, npa1_optimal_params, npa1_value, solve_npa1_sdp
from .npa2 import NPA2Structure, build_structure, solve_npa2, validate_structure
from .scheme import SchemeInstance, decrypt, encrypt, gen
from .sdp import SDPSolution, SDProblem, SolverOptions, solve
from .seesaw import SeesawConfig, SeesawState, run
from .sos import SoSCertificate, alpha_coefficient, evaluate_P, verify_bc23_certificate, verify_family_certificate

__all__ = [name for name in dir() if not name.startswith("_")]
