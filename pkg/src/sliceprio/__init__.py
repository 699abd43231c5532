"""Change-impact slicing and coupling-weighted regression test prioritization."""

__version__ = "0.1.0"
