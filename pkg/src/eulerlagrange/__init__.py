"""Euler's collinear 3-body solutions, Lagrange points and Euler-Lagrange points."""
from .errors import EulerLagrangeError, InputError, NumericalError
from .euler_family import (
    EulerFamilyPoint,
    EulerSolution,
    build_solution,
    eval_f,
    eval_f_inverse,
    eval_p,
    masses_from_m3,
    parametrize_G,
)
from .el_points import ELClass, ELPoint, ELSet, find_el_points, q3q4_locus
from .kernels import BACKEND
from .lagrange import LagrangeSet, lagrange_points
from .numerics import RootConfig
from .verify import ResidualReport, accel_residual, check_es_equations, integrate_nbody

__version__ = "0.1.0"
