"""pwsdyn: piecewise-smooth map simulation, bifurcation analysis, and ML classification."""

__version__ = "0.1.0"

from .bifurcation import (
    BcbEvent,
    BifurcationScan,
    ChartGrid,
    SweepSpec,
    chart_2p,
    detect_bcb,
    period_vs_param,
    sweep_1p,
)
from .datasets import (
    Dataset,
    ImageSamples,
    SplitDataset,
    gen_image_dataset,
    gen_orbit_feature_dataset,
    gen_period_dataset,
    read_csv,
    regenerate_dataset,
    split_dataset,
    write_csv,
)
from .dynamics import (
    BehaviorLabel,
    LyapunovSpectrum,
    Orbit,
    PeriodResult,
    classify_behavior,
    detect_period,
    fixed_points_normal_form,
    lyapunov_spectrum,
    simulate,
)
from .maps import (
    Branch,
    MapInstance,
    bcb2d_map,
    border_distance,
    branch_index,
    jacobian,
    lozi_map,
    normal_form_map,
    pws3d_map,
    step,
    tent_map,
)
from .raster import RasterImage, read_pgm, render_cobweb, render_phase_portrait, write_pgm

__all__ = [
    "__version__",
    "BcbEvent",
    "BifurcationScan",
    "ChartGrid",
    "SweepSpec",
    "chart_2p",
    "detect_bcb",
    "period_vs_param",
    "sweep_1p",
    "Dataset",
    "ImageSamples",
    "SplitDataset",
    "gen_image_dataset",
    "gen_orbit_feature_dataset",
    "gen_period_dataset",
    "read_csv",
    "regenerate_dataset",
    "split_dataset",
    "write_csv",
    "BehaviorLabel",
    "LyapunovSpectrum",
    "Orbit",
    "PeriodResult",
    "classify_behavior",
    "detect_period",
    "fixed_points_normal_form",
    "lyapunov_spectrum",
    "simulate",
    "Branch",
    "MapInstance",
    "bcb2d_map",
    "border_distance",
    "branch_index",
    "jacobian",
    "lozi_map",
    "normal_form_map",
    "pws3d_map",
    "step",
    "tent_map",
    "RasterImage",
    "read_pgm",
    "render_cobweb",
    "render_phase_portrait",
    "write_pgm",
]
