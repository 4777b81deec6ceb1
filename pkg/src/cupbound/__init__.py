"""cupbound: exact twisted cohomology, Novikov numbers, spectral pages,
survivor classes, and cup-length lower bounds on critical points of closed
1-forms."""

__version__ = "1.0.0"
