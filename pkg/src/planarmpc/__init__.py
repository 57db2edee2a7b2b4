"""Deterministic MPC simulator and constant-round algorithms for embedded
planar graphs: cuttings, cutting-divisions, graph redrawing and gluing,
connected components, minimum spanning forests, (1+eps) distances, cuts,
flows, and weighted edit distance, all verifiable against built-in
sequential oracles."""

__version__ = "0.1.0"
