"""
Strategic deployment solvers.

Agents start at a start vertex, leave w_v of themselves behind on the first
visit of every vertex and may only cross an edge as a group of at least w_e.
This package computes how many agents such a deployment needs:

- exactly on trees (return and no-return variants),
- within a factor of two on general graphs (minimum spanning tree),
- by exhaustive search on small instances (reference oracle).
"""
