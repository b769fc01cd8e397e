"""Information throughput of the human motor system from repeated movement recordings."""

from ._kernels import BACKEND
from .alignment import CcaProjection, CtwConfig, WarpPath, cca, ctw_align, dtw_align, pair_indices
from .armodel import Ar2Fit, fit_ar2, gaussian_entropy_rate
from .decorrelate import PcaBasis, fit_pca, project
from .errors import AnalysisError, DegenerateError, MotorTPError, ParseError
from .infomeasure import (
    AnalysisConfig,
    ChannelEstimate,
    FittsTask,
    analyze_pair,
    fitts_ip,
    fitts_mt,
    mutual_information,
    residual_correlation,
    throughput,
)
from .mocap_io import (
    MotionSequence,
    ThroughputReport,
    normalize,
    parse_csv,
    read_report,
    serialize_csv,
    write_report,
)
from .synth import SynthSpec, analytic_tp, generate_pair

__version__ = "0.1.0"
