"""Hot kernels for exact ring tensor contraction.

``_ring`` is the compiled (Cython) implementation; ``_ring_py`` is the
numpy fallback with the same signatures. :mod:`groundzx.kernels` picks one
at import.
"""
