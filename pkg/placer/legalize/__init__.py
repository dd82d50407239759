# Legalize module for removing residual overlap after global placement
from .legalizer import (
    LegalizeConfig,
    LegalizeReport,
    Legalizer,
    boundary_snap,
    deoverlap_step,
    legalize,
)

__all__ = ['LegalizeConfig', 'LegalizeReport', 'Legalizer', 'boundary_snap', 'deoverlap_step', 'legalize']
