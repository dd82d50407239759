# Bookshelf module for GSRC benchmark I/O
from .parser import BenchmarkBundle, load_placement, parse_bundle
from .writer import write_placement

__all__ = ['BenchmarkBundle', 'parse_bundle', 'load_placement', 'write_placement']
