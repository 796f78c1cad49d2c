"""Minimum-error discrimination: measurements, closed forms and L4."""

from .closed_form import helstrom_two_state, symmetric_pure_success, symmetric_qubit_optimal_povm
from .l4 import l4_bound
from .povm import POVM, CertificateReport, certificate, success_probability

__all__ = [
    "POVM",
    "CertificateReport",
    "certificate",
    "helstrom_two_state",
    "l4_bound",
    "success_probability",
    "symmetric_pure_success",
    "symmetric_qubit_optimal_povm",
]
