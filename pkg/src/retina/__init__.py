"""Classical retinal fundus image analysis: vessel segmentation, optic disc
localization, exudate detection, evaluation metrics, and the numeric pieces
of a small convolutional classifier."""

from .imgcore import (split_channels, merge_channels, to_gray, resize_bilinear,
                      subtract_saturating, logical_or, apply_circular_mask)
from .primitives import (StructuringElement, make_elliptical_se, morph, asf,
                         clahe, median_filter, threshold_mean, Contour,
                         shoelace_area, label_components, find_contours,
                         filter_blobs, KMeansResult, kmeans_intensity,
                         brightest_cluster_mask, quantize_to_centers,
                         ResponseMap, generate_disc_template,
                         match_template_nccoeff, best_match, canny)
from .pipelines import (PipelineConfig, OdLocation, segment_vessels,
                        locate_optic_disc, mask_optic_disc, detect_exudates)
from .dcnn import (relu, sigmoid, bce_loss, AdamState, adam_init, adam_step,
                   LayerSpec, TraceRow, ShapeTrace, conv_output_size,
                   trace_shapes, reference_layers, validate_reference_layout)
from .eval import (ConfusionCounts, MetricsReport, confusion, metrics,
                   od_hit, od_reference)

__version__ = "0.1.0"

__all__ = [
    "split_channels", "merge_channels", "to_gray", "resize_bilinear",
    "subtract_saturating", "logical_or", "apply_circular_mask",
    "StructuringElement", "make_elliptical_se", "morph", "asf", "clahe",
    "median_filter", "threshold_mean", "Contour", "shoelace_area",
    "label_components", "find_contours", "filter_blobs", "KMeansResult",
    "kmeans_intensity", "brightest_cluster_mask", "quantize_to_centers",
    "ResponseMap", "generate_disc_template", "match_template_nccoeff",
    "best_match", "canny",
    "PipelineConfig", "OdLocation", "segment_vessels", "locate_optic_disc",
    "mask_optic_disc", "detect_exudates",
    "relu", "sigmoid", "bce_loss", "AdamState", "adam_init", "adam_step",
    "LayerSpec", "TraceRow", "ShapeTrace", "conv_output_size", "trace_shapes",
    "reference_layers", "validate_reference_layout",
    "ConfusionCounts", "MetricsReport", "confusion", "metrics", "od_hit",
    "od_reference",
    "__version__",
]
