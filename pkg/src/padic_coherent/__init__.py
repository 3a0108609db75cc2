"""Free coherent states over p degrees of freedom and distributions on Z_p."""

from .coherent import (
    TruncatedState,
    coherent_from_cascade,
    delta_path_state,
    eigen_residual,
    indicator_state,
)
from .fock import FockVector, annihilate, annihilation_sum, create, inner
from .lc_space import (
    CascadeTree,
    Distribution,
    LCFunction,
    act,
    indicator,
    l2_inner,
    random_cascade,
    refine,
)
from .limits import (
    PairingValue,
    numeric_oracle,
    pairing_coherent,
    pairing_delta,
    pairing_indicators,
    phi_coherent,
    phi_indicator,
    regularized_limit,
)
from .padic import (
    Disk,
    DiskRelation,
    PAdicPoint,
    Word,
    disk_relation,
    haar_measure,
    longest_common_prefix,
    padic_norm,
    padic_norm_total,
)
from .scalars import QComplex

__version__ = "0.1.0"
