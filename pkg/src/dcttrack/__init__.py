"""Visual tracking with incrementally updated 3D-DCT object representations."""

from .config import TrackerConfig, dump_config, load_config
from .dctcore import dct1, dct2, dct3, idct1, idct2, idct3, make_basis, mode_product
from .incremental import DctCache
from .likelihood import LikelihoodParams, evaluate, evaluate_many, knn
from .metrics import EvalReport, GroundTruthRecord, evaluate_run, success, tle, tsr
from .motion import MotionParams, ObjectState, ParticleSet, map_estimate, propagate
from .representation import CompactCoeffs, TruncationSpec, reconstruct, truncate
from .sampling import SampleBuffer
from .tracker import FrameResult, TrackerSession

__version__ = "0.1.0"

__all__ = [
    "CompactCoeffs", "DctCache", "EvalReport", "FrameResult", "GroundTruthRecord",
    "LikelihoodParams", "MotionParams", "ObjectState", "ParticleSet", "SampleBuffer",
    "TrackerConfig", "TrackerSession", "TruncationSpec", "dct1", "dct2", "dct3",
    "dump_config", "evaluate", "evaluate_many", "evaluate_run", "idct1", "idct2", "idct3",
    "knn", "load_config", "make_basis", "map_estimate", "mode_product", "propagate",
    "reconstruct", "success", "tle", "truncate", "tsr",
]
