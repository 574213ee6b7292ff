"""gwpairs: an exact-arithmetic kernel for curve-counting series.

The package implements, over the Gaussian rationals and with explicit
truncation orders everywhere:

* the change of variables s = e^{iu/2} (equivalently -q = e^{iu})
  between sheaf-side q-series and map-side u-series,
* rationality certification (exact Pade-type reconstruction) and the
  q <-> 1/q symmetry test,
* the multiple-cover transform between state counts and per-class free
  energies, in both directions, with integrality reporting,
* cohomology-weighted partition combinatorics: gluing factors, duals,
  codimension, small-diagonal tensors, signed set partitions,
* the set-partition expansion of descendent products under a pluggable
  triangular translation matrix, with the standard prefactors,
* the degeneration-formula convolution with capped-edge closed forms,
  its exact inversion, and a DAG runner for reduction schemes.

No floating point is used anywhere.
"""

from .numeric import GaussianRational, qi
from .series import HalfSeries, QView, to_u, coefficients_equal
from .ratfun import (
    RationalFunction,
    check_q_symmetry,
    expand,
    ratfun_to_u,
    reconstruct,
    reconstruct_q,
)
from .cohring import (
    GradedRing,
    SetPartitionSigned,
    WeightedPartition,
    codim,
    dual_partition,
    elliptic_curve_ring,
    enumerate_set_partitions,
    enumerate_weighted_partitions,
    gluing_factor,
    hyperplane_pair_ring,
    point_ring,
    small_diagonal,
    surface_ring,
    undual_partition,
)
from .bps import (
    BpsTable,
    GwTable,
    connected_to_disconnected,
    disconnected_to_connected,
    gv_forward,
    gv_forward_q,
    gv_invert,
    integrality_report,
    sin_pow_series,
)
from .corr import (
    ChernParams,
    CorrMatrix,
    DescendentMonomial,
    correspondence_predicate,
    expansion_term_count,
    overline,
    stationary_prefactor,
    tau_hat_expand,
)
from .glue import (
    DegenerationStep,
    InvertResult,
    TheoryTable,
    TubeTable,
    capped_edge,
    capped_edge_tube,
    compose_tubes,
    glue_gw,
    glue_pairs,
    glue_with_tube,
    invert_step,
    quintic_scheme_nodes,
    reduction_pipeline,
)
from . import errors

__version__ = "0.1.0"
