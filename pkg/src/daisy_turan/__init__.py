"""Executable daisy-free families, hypercube transversals and exact ex(n, F) search."""
from .constructions import (
    BlowupSpec,
    Partition,
    blowup,
    complete_multipartite,
    even_split,
    fano_complement,
    fano_lines,
    iterated_fano,
    max_members_in_window,
    parity_family,
)
from .daisy import (
    DaisyInstance,
    DaisyPattern,
    containment_check,
    daisy_count,
    enumerate_daisies,
    find_daisy,
    instantiate,
    is_daisy_free,
)
from .errors import BoundViolation, InfeasibleError, InvalidInputError, ResourceRefusal
from .family import SetFamily, colex_rank, colex_unrank, complement_family, relabel
from .hypercube import (
    CubeVertexSet,
    Subcube,
    enumerate_middle_subcubes,
    enumerate_subcubes,
    is_transversal,
    layered_transversal,
    link,
    max_points_in_some_dcube,
    min_subcube_transversal,
    td_evidence_table,
    transversal_daisy_correspondence,
)
from .products import UniformHypergraph, daisy_hypergraph, enumerate_copies, power, star_product
from .records import Bound, DensityRecord
from .report import closed_form_bounds, ex_table, export, verify_bounds
from .search import (
    ConstraintSystem,
    SearchResult,
    SolverConfig,
    brute_force_oracle,
    build_daisy_constraints,
    packing_upper_bound,
    solve_max_avoiding,
    solve_min_transversal,
)

__version__ = "0.1.0"
