"""Classical and quantum correlations of bipartite quantum states.

The package splits the mutual information of a bipartite state into a
quantum part (relative entropy of entanglement, computed by Frank-Wolfe
over separable states) and the classical remainder ``psi``, and compares
``psi`` with other classical-correlation measures on the Werner family.
"""

from .correlations import (
    MeasurementSet,
    MeasureReport,
    SolverConfig,
    apply_measurement,
    c1,
    c2,
    chi_povm_search,
    chi_projective,
    holevo_term,
    measure_all,
    psi,
)
from .entanglement import ReeResult, closest_separable_state, is_ppt, negativity, product_lmo, ree
from .families import (
    bell_state,
    classically_correlated,
    random_density,
    random_local_unitary,
    random_pure_product,
    werner_state,
)
from .linalg import HermitianSpectrum, hermitian_eig, kron, matrix_log2
from .states import (
    DensityMatrix,
    apply_local_unitary,
    load_state,
    mutual_information,
    partial_trace,
    partial_transpose,
    relative_entropy,
    save_state,
    swap_subsystems,
    tensor_product,
    validate,
    von_neumann_entropy,
)

__version__ = "0.1.0"
