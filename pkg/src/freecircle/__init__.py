"""Exact spectral-sequence engine for free circle actions on rational
products of three spheres: orbit-space cohomology, ring presentations, and
equivariant-map index bounds."""

from .bu import (
    IndexReport,
    char_class_exponent,
    equivariant_map_report,
    index_report,
    volovikov_index,
)
from .fiber import SpaceSignature, mono_degree, mono_product
from .linalg import Matrix, kernel_basis, quotient_basis, rank
from .oracle import (
    CaseLabel,
    kunneth_product,
    labels_for,
    load_annotations,
    reconcile,
    theorem_table,
)
from .pages import (
    EngineError,
    InconsistentDifferential,
    Page,
    Run,
    ScheduleRejected,
    assemble_differential,
    build_e2,
    indecomposables,
    run_to_infinity,
    turn_page,
)
from .presentation import (
    GeneratorSet,
    NotFreeError,
    betti_table,
    extract_generators,
    presentation_sketch,
    render_presentation,
    structure_constants,
    term_feasible,
)
from .schedules import (
    FreenessVerdict,
    Schedule,
    ScheduleEvent,
    admissible_pages,
    check_freeness,
    enumerate_schedules,
    parse_schedule,
    render_schedule,
    run_schedule,
)
from .sweep import run_verify

__version__ = "0.1.0"
