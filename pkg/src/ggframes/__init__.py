"""Gabor g-frames on the finite phase space Z_L x Z_L."""

from .gframe import (
    EPS_FRAME,
    CoefSeq,
    GFrameReport,
    NotAFrameError,
    analysis,
    canonical_dual,
    cohen_map,
    frame_bounds,
    gframe_operator,
    injectivity_check,
    janssen_rep,
    janssen_sufficient,
    periodize,
    synthesis,
    wexler_raz_check,
)
from .generators import (
    WindowSet,
    localization_op,
    multiwindow_op,
    partition_mask,
    random_op,
    rank_one,
    svd_to_multiwindow,
    underspread_op,
    window_box,
    window_gaussian,
)
from .lattice import Lattice, parse_lattice
from .seqspace import Weight, holder_pairing, norm_equivalence_experiment, seq_norm
from .spreading import fourier_series_of_periodic, spreading_of, synthesize, weyl_symbol
from .tfcore import PhasePoint, stft, svd, tf_shift, translate_op

__version__ = "0.1.0"
