"""Classical pixel kernels shared by the pipelines."""

from .morphology import StructuringElement, make_elliptical_se, morph, asf
from .enhance import clahe, median_filter, threshold_mean
from .contours import (Contour, shoelace_area, label_components, find_contours,
                       filter_blobs)
from .clustering import (KMeansResult, kmeans_intensity, brightest_cluster_mask,
                         quantize_to_centers)
from .matching import (ResponseMap, generate_disc_template,
                       match_template_nccoeff, best_match)
from .edges import canny

__all__ = [
    "StructuringElement", "make_elliptical_se", "morph", "asf",
    "clahe", "median_filter", "threshold_mean",
    "Contour", "shoelace_area", "label_components", "find_contours",
    "filter_blobs",
    "KMeansResult", "kmeans_intensity", "brightest_cluster_mask",
    "quantize_to_centers",
    "ResponseMap", "generate_disc_template", "match_template_nccoeff",
    "best_match",
    "canny",
]
