"""Exploratory spatial data analysis of perceived-safety scores.

The package interpolates point-sampled safety scores onto building
footprints (k-d tree KNN + inverse-distance weighting), aggregates them to
neighborhoods, detects spatial clusters with local Moran statistics over a
Voronoi-derived queen contiguity structure, and fits height-vs-score
regressions (OLS, a below/at-8-floors split, and LOWESS curves).  The
``esda`` command line drives the full pipeline and a read-only HTTP service
feeds the linked-brushing viewer.
"""

__version__ = "0.1.0"
