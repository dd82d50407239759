"""
Exception hierarchy shared by every placer subpackage.
"""

from typing import Optional, Sequence


class PlacerError(Exception):
    """Base class for all placer failures"""


class NetlistError(PlacerError, ValueError):
    """Structural problem in a netlist (dangling ids, bad sizes)"""


class GenerationError(NetlistError):
    """Synthetic instance cannot be generated with the requested parameters"""


class BookshelfParseError(PlacerError, ValueError):
    """Malformed GSRC Bookshelf file"""

    def __init__(self, message: str, path: Optional[str] = None, line_no: Optional[int] = None):
        self.path = path
        self.line_no = line_no
        location = ""
        if path is not None:
            location = f"{path}"
            if line_no is not None:
                location += f":{line_no}"
            location += ": "
        super().__init__(f"{location}{message}")


class BenchmarkNotFoundError(PlacerError, FileNotFoundError):
    """One or more benchmark files are missing"""

    def __init__(self, circuit: str, missing: Sequence[str]):
        self.circuit = circuit
        self.missing = list(missing)
        listing = "\n  ".join(self.missing)
        super().__init__(
            f"Benchmark '{circuit}' is incomplete. Expected files not found:\n  {listing}\n"
            f"Set PLACER_DATA_FOLDER or pass --blocks/--nets/--pl explicitly."
        )


class OptimizerDivergedError(PlacerError, RuntimeError):
    """The objective became non-finite during a run"""

    def __init__(self, message: str, trace=None):
        self.trace = trace
        super().__init__(message)


class LegalizationError(PlacerError, ValueError):
    """A legalization primitive was called outside its preconditions"""
