"""Relative entropy of entanglement for rotationally invariant spin states."""

import os as _os

# RI_ENTROPY_THREADS caps the thread pools of the numerical backends;
# it must be applied before numpy is first imported (0 / unset = auto).
_threads = _os.environ.get("RI_ENTROPY_THREADS", "")
if _threads and _threads != "0":
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                 "MKL_NUM_THREADS", "NUMEXPR_NUM_THREADS"):
        _os.environ.setdefault(_var, _threads)

from .angular import (  # noqa: E402
    DenseOperator,
    Spin,
    clebsch_gordan,
    coupled_basis_vector,
    partial_time_reversal,
    projector,
    rotation_y_pi,
)
from .states import (  # noqa: E402
    AlphaVector,
    NormalizedCoords,
    RIState,
    kl_alpha,
    make_ri_state,
    maximally_mixed,
    normalized_to_raw,
    quantum_relative_entropy,
    raw_to_normalized,
    to_density,
    twirl,
)
from .geometry import (  # noqa: E402
    Point2,
    Region,
    classify_region,
    landmark_points,
    polygon_area_ratio,
    ppt_image_vertices,
    ppt_polygon,
    simplex_vertices,
)
from .closed_form import (  # noqa: E402
    REEResult,
    UnsupportedFamilyError,
    e_gamma_3xn_even,
    ree_2xn,
    ree_3x3,
    ree_3xn_odd,
    ree_dispatch,
    state_2xn,
)
from .oracle import (  # noqa: E402
    MinimizationReport,
    minimize_kl_over_interval,
    minimize_kl_over_polygon,
    ppt_min_eigenvalue,
    verify_closed_form,
)

__version__ = "0.1.0"
