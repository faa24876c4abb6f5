"""drwitt: exact characteristic-p invariants for a curated ring family.

Witt vectors, de Rham complexes with inverse Cartier maps, de Rham-Witt
complexes via saturation, Nygaard filtrations and syntomic cohomology
mod p^r, filtered-complex spectral sequences, and closed-form K-theory
prediction tables.
"""

__version__ = "0.1.0"
