"""PRNU-based source-camera attribution across mixed media (images and video).

The package models how in-camera resizing (binning, line-skipping) and
out-camera resizing (bilinear scaling) map raw sensor sites to output
pixels, quantifies their overlap (Ratio of Alignment), and uses that to
match image fingerprints against video fingerprints of unknown scale and
crop.
"""

__version__ = "0.1.0"

from .bayer import (BayerPattern, RawFrame, RgbImage, color_at, demosaic_bilinear,
                    read_raw_frame, write_raw_frame)
from .catalog import (CameraCatalog, CatalogEntry, load_catalog,
                      load_default_catalog, parse_catalog, save_catalog,
                      serialize_catalog)
from .matcher import (MatchConfig, MatchReport, ResizeHypothesis, attribute,
                      attribute_with_strategy)
from .pipeline import (BinStep, CropStep, DemosaicStep, LineSkipStep,
                       PipelineError, ScaleStep, compose_pipeline,
                       format_pipeline, half_res_steps, one_over_k_steps,
                       parse_pipeline, run_pipeline)
from .prnu import (Fingerprint, NoisePattern, accumulate_fingerprint,
                   extract_noise, ncc_surface, pce, pearson, read_fingerprint,
                   write_fingerprint)
from .resize import (BilinearScale, Binning, LineSkip, bilinear_scale, bin_raw,
                     box_downscale, crop_boundary, line_skip)
from .roa import (ANALYTIC_BINNING_SERIES, ANALYTIC_ROA_TABLE, RoaReport,
                  analytic_roa_table, pixel_alignment, roa)
from .search import (MediaDims, SearchRange, cropping_ratio, factor_lattice,
                     hypothesis_schedule, lookup_or_search, search_range)
from .simulate import (CaptureProfile, SyntheticCamera, capture,
                       run_attribution_experiment, run_roa_correlation_experiment,
                       run_speed_benchmark)
from .weightmap import WeightMap
