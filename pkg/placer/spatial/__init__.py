# Spatial module: grid broad phase for overlap candidates
from .grid import UniformGrid, build_grid, candidate_pairs

__all__ = ['UniformGrid', 'build_grid', 'candidate_pairs']
