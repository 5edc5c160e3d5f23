"""Altitude and median inequalities in a triangle, checked numerically and certified by interval arithmetic."""

from .certify import Certificate, certify_edges, certify_nonpositive, interval_F, verify_certificate
from .devilfish import DomainPoint, eval_F, find_critical_points, grad_F, hessian_F
from .errors import DomainError, InvalidTriangle, PreconditionError
from .triangle_core import Triangle

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "DomainError",
    "DomainPoint",
    "InvalidTriangle",
    "PreconditionError",
    "Triangle",
    "certify_edges",
    "certify_nonpositive",
    "eval_F",
    "find_critical_points",
    "grad_F",
    "hessian_F",
    "interval_F",
    "verify_certificate",
]
