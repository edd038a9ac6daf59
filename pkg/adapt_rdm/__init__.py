#pylint: disable=line-too-long
from adapt_rdm.integrals import MolecularIntegrals, SpinHamiltonian, parse_fcidump, load_fcidump, write_fcidump, to_spin_hamiltonian, hartree_fock_energy, hartree_fock_occupations
#pylint: disable=line-too-long
from adapt_rdm.operator_algebra import FermionOperator, PauliSum, PoolElement, OperatorPool, jordan_wigner, qubit_hamiltonian, build_pool, dump_pool, commutator
#pylint: disable=line-too-long
from adapt_rdm.statevector import State, prepare_reference, apply_exp_generator, expectation, variance, overlap, measure_rdm, sector_indices, sector_expectations, save_state, load_state
#pylint: disable=line-too-long
from adapt_rdm.rdm_toolkit import Rdm, CumulantRdm, wedge_11, wedge_21, wedge_111, cumulant2, valdemoro3, reconstruction_error, energy_from_2rdm, residual_one_body, residual_two_body
from adapt_rdm.optimizer import Ansatz, ObjectiveBundle, minimize, analytic_gradient, finite_difference_gradient
#pylint: disable=line-too-long
from adapt_rdm.adapt_engine import AdaptConfig, AnsatzTrace, ConsistencyError, run_adapt, residuals_exact, residuals_rdm, select_operators, measurement_cost, scaling_fit
#pylint: disable=line-too-long
from adapt_rdm.spectra import EigenSolution, VqdConfig, VqdConvergenceError, fci_solve, vqd_objective, run_vqd, run_excited_states, npe, curve_errors
from adapt_rdm.utils import load_tensors, save_tensors
from adapt_rdm.version import __version__
