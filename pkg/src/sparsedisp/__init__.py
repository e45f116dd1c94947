"""Low-dispersion sparse grids, exact dispersion and size-bound comparisons."""
__version__ = "0.1.0"
