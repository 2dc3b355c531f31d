"""grouplen: finite permutation groups, their radicals and the lengths built on them."""

__version__ = "0.4.0"
