"""QFT-based arithmetic for Shor's modular exponentiation: circuit builders,
exact simulators and resource accounting."""

from .core import Angle, Circuit, CircuitBuilder, Gate, GateKind, Register, RegisterMap, invert_circuit

__all__ = ["Angle", "Circuit", "CircuitBuilder", "Gate", "GateKind", "Register", "RegisterMap", "invert_circuit"]
__version__ = "0.1.0"
