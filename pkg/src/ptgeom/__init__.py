"""Geometric phases and parameter-space geometry for quantum systems whose
inner-product metric W(λ) moves with the system parameters.

Layout:
  hilbert    metric families, physical inner product, bi-densities
  evolution  gauge field K = -1/2 W⁻¹Ẇ, RK4 evolution, cyclicity
  phases     total-phase split, four geometric-phase routes, GW comparison
  geometry   connection / curvature / metric tensor / QGT / fidelity
  models     driven oscillator (both pictures), two-level system, spin-1/2
  golden     built-in acceptance suite
  cli        scenario-driven command line front end
"""

from .errors import (
    IntegrationError,
    NumericalConsistencyError,
    PreconditionError,
    PtgeomError,
    ResolutionError,
    StructuralError,
    TruncationError,
    ValidationError,
)
from .evolution import (
    EvolutionRecord,
    ParameterPath,
    constant_path,
    detect_cyclic,
    evolve,
    gauge_field,
    pairwise_inner,
)
from .geometry import (
    GeometricTensors,
    StateSection,
    classify_evolution,
    connection,
    curvature,
    curvature_from_connection,
    fidelity,
    geometric_tensors,
    line_element,
    loop_integral_connection,
    metric_tensor,
    parallel_transport_residual,
    qgt,
    record_transport_residual,
    small_loop_phase,
    surface_integral_curvature,
)
from .hilbert import (
    BiDensity,
    HamiltonianFamily,
    MetricFamily,
    PhysicalState,
    bi_density,
    check_pseudo_hermitian,
    identity_metric,
    physical_inner,
    tilde,
)
from .phases import (
    PhaseReport,
    dynamical_phase,
    geometric_phase_gauge_invariant,
    geometric_phase_gauge_split,
    geometric_phase_holonomy,
    geometric_phase_kinematic,
    geometric_phase_kinematic_bargmann,
    gw_phases,
    parallel_transport_gauge,
    phase_report,
)

__version__ = "0.1.0"
