"""Random regular k-uniform hypergraphs: samplers, exact oracles, switching
counts, the edge-exposure coupling with the uniform model, and overlapping
Hamilton cycle search."""

__version__ = "0.1.0"

from .core import (
    DegreeState,
    DomainError,
    Edge,
    Hypergraph,
    InadmissiblePrefixError,
    MultiEdge,
    OrderedHypergraph,
    Params,
    codegree_rel,
    complement_edges,
    default_concentration,
    format_edge_list,
    is_simple,
    make_edge,
    parse_edge_list,
    read_edge_list,
    residual_state,
    write_edge_list,
)
from .oracle import (
    ExtensionFamily,
    OracleBudgetError,
    RatioIdentityReport,
    SwitchingClassSizes,
    count_extensions,
    exact_next_edge_distribution,
    exact_simplicity_probability,
    switching_class_sizes,
    verify_ratio_identity,
)
from .samplers import (
    MultiExtension,
    RejectionBudgetError,
    RngStream,
    as_generator,
    sample_gnm,
    sample_gnp,
    sample_multi_extension,
    sample_regular,
)
from .switchings import (
    IllegalSwitchError,
    SwitchingMove,
    TailEstimate,
    backward_count,
    forward_count,
    iter_backward_moves,
    iter_forward_moves,
    tail_profile,
)
from .coupling import (
    AcceptedSizeDiagnostics,
    CouplingConfig,
    CouplingStep,
    CouplingTrace,
    ExactNextEdgeLaw,
    GnpCouplingTrace,
    NearUniformityCheck,
    StateLaw,
    accepted_size_diagnostics,
    check_near_uniformity,
    choose_epsilon,
    default_gnp_probability,
    run_coupling,
    run_coupling_gnp,
)
from .process import (
    MutualSample,
    NicenessReport,
    ProcessTrace,
    ResidualReport,
    best_average_edge,
    expose_process,
    mutual_simplicity_probe,
    residual_report,
    sample_mutual_pair,
)
from .hamilton import (
    FOUND,
    NONE,
    UNKNOWN,
    CycleCertificate,
    SearchResult,
    SweepPoint,
    cycle_edges,
    find_hamilton_cycle,
    hamiltonicity_sweep,
    naive_hamiltonian,
    verify_cycle,
)
from .experiments import (
    ExperimentConfig,
    RunManifest,
    run_experiment,
    validate_gamma_epsilon,
)
