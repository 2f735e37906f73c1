"""
Mitigation Threshold Lab

Simulation laboratory for noisy random circuits with probabilistic error
cancellation (noise + antinoise). Locates the error mitigation threshold
with a two-replica statistical-mechanics engine, exact density-matrix
simulation and a Brownian-circuit mean-field theory.
"""

__version__ = "0.1.0"
