"""
Netlist module: circuit hypergraph, die region and placements.
"""

from .model import Cell, CellKind, Net, Netlist, Placement, Region, build_netlist, net_degrees
from .synthetic import generate_synthetic

__all__ = [
    'Cell', 'CellKind', 'Net', 'Netlist', 'Placement', 'Region',
    'build_netlist', 'net_degrees', 'generate_synthetic',
]
