"""Homological invariants and stable ranks of tame multi-parameter persistence modules."""

from __future__ import annotations

from .barcode import Barcode, bar_decomposition, barcode_frame
from .contours import INFINITY, Standard, Truncated, contour_eval, parse_contour, verify_contour_axioms
from .frame import (
    Frame,
    Subframe,
    bar_module,
    direct_sum,
    free_module,
    quotient,
    simple_module,
    submodule_generated,
    zero_frame,
)
from .hardness import (
    BandSpec,
    Graph,
    band_functor,
    chromatic_witness,
    graph_to_minrank,
    hardness_pipeline,
    in_matrix_family,
)
from .homology import (
    betti_diagram,
    betti_diagrams,
    betti_rank,
    euler_characteristic,
    koszul_at,
    minimal_generators,
    rank0,
)
from .linalg import (
    BudgetExceeded,
    Matrix,
    PreconditionError,
    Subspace,
    cokernel_projection,
    enumerate_subspaces,
    gaussian_binomial,
    image,
    kernel,
    rank,
    sum_contains,
)
from .noise import ShiftResult, domain_shift, noise_contains, shift
from .stabilization import RationalMultiset, StepFunction, interleaving_distance, stabilize
from .stable_rank import (
    MinRankInstance,
    fingerprint_r1,
    minrank_solve,
    reduce_to_minrank,
    stable_rank_bruteforce,
    stable_rank_function,
    stable_rank_r1,
)
from .tame import TameModule, tame_evaluate, tame_map

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
