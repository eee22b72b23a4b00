"""Python bindings for the reslab C++ core."""

from ._reslab import (
    InputError,
    Materials,
    NumericalError,
    cap_B,
    cap_B_bem,
    capacitance_matrix,
    dilute_capacitance,
    generalised_capacitance,
    hamiltonian_sweep,
    nearest_neighbour_ratio,
    quasifrequencies,
    sqrt_spd,
    static_hamiltonian,
    static_spectrum,
    tb_spectrum,
)

__all__ = [
    "InputError",
    "Materials",
    "NumericalError",
    "cap_B",
    "cap_B_bem",
    "capacitance_matrix",
    "dilute_capacitance",
    "generalised_capacitance",
    "hamiltonian_sweep",
    "nearest_neighbour_ratio",
    "quasifrequencies",
    "sqrt_spd",
    "static_hamiltonian",
    "static_spectrum",
    "tb_spectrum",
]
