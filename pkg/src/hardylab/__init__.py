"""Sub-Hardy Hilbert spaces over finite Blaschke products and the bidisk."""

from .basis import TMBasis, TMCoordinates, basis_element, expand, from_tm, shift_B, shift_B_power, to_tm
from .blaschke import BlaschkeProduct
from .bmatrix import BMatrix, build_b_matrix, is_b_inner_gram, is_b_inner_pointwise
from .errors import (DomainError, ExpansionError, HardyLabError, HypothesisError, ShiftOverflowError,
                     TheoremContradiction, TruncationError, VerificationError)
from .hardy import BoundarySamples, CoeffVec, bmo_norm, from_boundary, holder_multiplier_check, p_norm, to_boundary
from .torus import CoeffGrid, TorusSubspace, doubly_commuting_check, extract_inner_generator, torus_wold
from .wold import (SubHilbertSpace, check_axiom_A1, check_isometry, extract_structure, wandering_subspace,
                   wold_decompose)

__version__ = "0.1.0"
