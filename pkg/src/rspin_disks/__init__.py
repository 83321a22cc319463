"""Combinatorics of graded r-spin disks: decorated dual graphs, Witten bundle rank bookkeeping,
boundary strata, orientation signs and explicit sections."""

__version__ = "0.1.0"
