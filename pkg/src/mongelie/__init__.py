"""Exact-arithmetic engine for the symmetry theory of rank-2 distributions
of Monge equations: Carnot algebras, Tanaka prolongations, graded Lie
algebra cohomology, central/integrable extensions, and jet-space geometry.
"""

__version__ = "0.1.0"
