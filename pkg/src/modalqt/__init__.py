"""Modal quantum theory over prime fields: exact engines for cloning,
deleting and hiding."""

__version__ = "0.1.0"

from .clone_delete import (
    CloneTask,
    LinearFeasibilityProblem,
    build_cloner,
    build_deleter,
    delete_with_record,
    exists_linear_map,
    no_clone_witness,
    no_delete_machine_witness,
)
from .distinguish import (
    StateSet,
    build_discriminator,
    is_distinguishable,
    lemma_two_copy,
    min_copies,
    n_copy_set,
)
from .gf import FieldElement, FieldSpec, Polynomial, field_inverse, find_irreducible_quadratic, quadratic_roots
from .hiding import (
    AqtHidingInstance,
    HidingMapSpec,
    aqt_unhide_demo,
    build_hiding_map,
    paper_k_quadratic,
    product_state_locator,
    verify_hiding,
)
from .linalg import Matrix, Subspace, Vector, invertible_completion, kernel, kron, rref, solve
from .states import (
    Basis,
    BipartiteState,
    ModalState,
    StateSpace,
    canonical_ray,
    cnot,
    conditional_states,
    evolve,
    is_entangled,
    possible_outcomes,
    reduced_state,
)
