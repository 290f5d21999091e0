"""Clustering, information-accuracy estimation, and node-placement search for
3D sensor deployments under an exponential spatial-correlation model."""

from .clustering import (
    Cluster,
    ClusterSet,
    Deployment,
    SensorNode,
    capture_clusters,
    euclidean_distance,
    filter_in_event_range,
    form_clusters,
    neighbor_sets,
)
from .data_io import (
    ReadingMatrix,
    SyntheticScenario,
    generate_synthetic,
    load_bundled_deployment,
    parse_nodes,
    parse_readings,
    sun_shade_groups,
    sun_shade_scenario,
    write_cluster_report,
    write_cost_curves,
)
from .errors import ConfigurationError, DataFormatError
from .estimation import (
    AccuracyReport,
    NoiseProfile,
    ObservationSet,
    SignalModel,
    blue_estimate,
    cluster_accuracy,
    empirical_mse,
    information_accuracy,
    predict_dead,
    prediction_accuracy,
    propagation_delay,
    simulate_observations,
)
from .geometry import (
    CorrelationModel,
    Dodecahedron,
    EventSource,
    correlation,
    correlation_radius,
    dodeca_circumradius,
    dodeca_edge_from_circumradius,
    dodeca_vertices,
    dodeca_volume,
    event_volume,
)
from .placement import (
    NodeState,
    PlacementParams,
    PlacementState,
    cluster_costs,
    cost_function,
    placement_step,
    run_placement,
    select_nodes,
)

__version__ = "0.1.0"
