"""Minimal complete Pauli operator pools and ADAPT-VQE at desk scale."""

__version__ = "0.1.0"

from .adapt import (AdaptConfig, AdaptTrace, AdaptVQE, TraceRecord,
                    read_trace_csv, run_adapt, selection_tiebreak,
                    trace_to_csv, vqe_minimize)
from .groups import (CompletenessReport, EnumerationCapError, GeneratedGroup,
                     LieClosure, OddParityError, build_group,
                     canonical_minimal_generators, check_pool,
                     count_odd_elements, flip_coverage, inseparability,
                     lie_closure, odd_count_target)
from .hamiltonians import (GroundEnergyError, HamiltonianError,
                           PauliSumHamiltonian, format_hamiltonian,
                           ground_energy, load_hamiltonian, parse_hamiltonian,
                           random_real_hamiltonian, save_hamiltonian)
from .paulis import PauliParseError, PauliString, identity, parse_pauli
from .pools import (Pool, SearchBudgetError, default_starter_count,
                    random_mcp, read_pool, symmetry_adapted_mcp, write_pool)
from .simulator import (Ansatz, ansatz_energy_gradient, apply_pauli,
                        apply_rotation, basis_state, expectation,
                        pool_gradients, prepare_state)
from .svg import render_line_chart
from .symmetry import (ConstraintSet, SymmetrySpec, SymmetrySpecError,
                       allowed_flip_masks, build_constraints,
                       expected_pool_size, is_starter, load_symmetry_spec,
                       parse_symmetry_spec, satisfies_constraints,
                       starter_flip_masks)

__all__ = [
    "AdaptConfig", "AdaptTrace", "AdaptVQE", "Ansatz", "CompletenessReport",
    "ConstraintSet", "EnumerationCapError", "GeneratedGroup",
    "GroundEnergyError", "HamiltonianError", "LieClosure", "OddParityError",
    "PauliParseError", "PauliString", "PauliSumHamiltonian", "Pool",
    "SearchBudgetError", "SymmetrySpec", "SymmetrySpecError", "TraceRecord",
    "allowed_flip_masks", "ansatz_energy_gradient", "apply_pauli",
    "apply_rotation", "basis_state", "build_constraints", "build_group",
    "canonical_minimal_generators", "check_pool", "count_odd_elements",
    "default_starter_count", "expectation", "expected_pool_size",
    "flip_coverage", "format_hamiltonian", "ground_energy", "identity",
    "inseparability", "is_starter", "lie_closure", "load_hamiltonian",
    "load_symmetry_spec", "odd_count_target", "parse_hamiltonian",
    "parse_pauli", "parse_symmetry_spec", "pool_gradients", "prepare_state",
    "random_mcp", "random_real_hamiltonian", "read_pool", "read_trace_csv",
    "render_line_chart", "run_adapt", "satisfies_constraints",
    "save_hamiltonian", "selection_tiebreak", "starter_flip_masks",
    "symmetry_adapted_mcp", "trace_to_csv", "vqe_minimize", "write_pool",
]
