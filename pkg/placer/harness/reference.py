"""
Published GSRC reference numbers, kept as data so benchmark output can be
compared against them.
"""

import logging
from typing import Dict, Iterable, List, Optional

logger = logging.getLogger(__name__)

# circuit -> modules, terminals, nets, pins
CIRCUIT_STATS: Dict[str, Dict[str, int]] = {
    "n10": {"modules": 10, "terminals": 69, "nets": 118, "pins": 248},
    "n30": {"modules": 30, "terminals": 212, "nets": 349, "pins": 743},
    "n50": {"modules": 50, "terminals": 209, "nets": 485, "pins": 1050},
    "n100": {"modules": 100, "terminals": 334, "nets": 885, "pins": 1873},
    "n200": {"modules": 200, "terminals": 564, "nets": 1585, "pins": 3599},
    "n300": {"modules": 300, "terminals": 569, "nets": 1893, "pins": 4358},
}

GSRC_CIRCUITS = tuple(CIRCUIT_STATS)

# (circuit, method) -> hpwl, overlap, time_s, lhpwl
PUBLISHED_RESULTS: Dict[tuple, Dict[str, float]] = {
    ("n10", "gsrc"): {"hpwl": 64299, "overlap": 0},
    ("n30", "gsrc"): {"hpwl": 179811, "overlap": 0},
    ("n50", "gsrc"): {"hpwl": 234281, "overlap": 0},
    ("n100", "gsrc"): {"hpwl": 395719, "overlap": 0},
    ("n200", "gsrc"): {"hpwl": 738707, "overlap": 0},
    ("n300", "gsrc"): {"hpwl": 937608, "overlap": 0},

    ("n10", "rbsm"): {"hpwl": 56902, "overlap": 7206, "time_s": 7.48, "lhpwl": 56894},
    ("n30", "rbsm"): {"hpwl": 156761, "overlap": 1896, "time_s": 6.89, "lhpwl": 157261},
    ("n50", "rbsm"): {"hpwl": 199356, "overlap": 602, "time_s": 3.30, "lhpwl": 199236},
    ("n100", "rbsm"): {"hpwl": 328705, "overlap": 1470, "time_s": 5.78, "lhpwl": 328991},
    ("n200", "rbsm"): {"hpwl": 571720, "overlap": 2450, "time_s": 17.76, "lhpwl": 574778},
    ("n300", "rbsm"): {"hpwl": 694527, "overlap": 3634, "time_s": 36.12, "lhpwl": 698867.6},

    ("n10", "gd"): {"hpwl": 63959, "overlap": 82, "time_s": 0.45, "lhpwl": 63955},
    ("n30", "gd"): {"hpwl": 188770, "overlap": 612, "time_s": 0.40, "lhpwl": 188192},
    ("n50", "gd"): {"hpwl": 224062, "overlap": 1, "time_s": 0.63, "lhpwl": 224038},
    ("n100", "gd"): {"hpwl": 366449, "overlap": 1, "time_s": 0.92, "lhpwl": 366344},
    ("n200", "gd"): {"hpwl": 728562, "overlap": 0, "time_s": 2.16, "lhpwl": 728475},
    ("n300", "gd"): {"hpwl": 978937, "overlap": 60, "time_s": 3.76, "lhpwl": 978438},

    ("n10", "adam"): {"hpwl": 59631, "overlap": 29460, "time_s": 8.83, "lhpwl": 62240},
    ("n30", "adam"): {"hpwl": 173825, "overlap": 35613, "time_s": 9.64, "lhpwl": 185765},
    ("n50", "adam"): {"hpwl": 217210, "overlap": 42382, "time_s": 5.69, "lhpwl": 230797},
    ("n100", "adam"): {"hpwl": 376827, "overlap": 20581, "time_s": 8.31, "lhpwl": 389947},
    ("n200", "adam"): {"hpwl": 697857, "overlap": 19104, "time_s": 20.18, "lhpwl": 720499},
    ("n300", "adam"): {"hpwl": 797910, "overlap": 71746, "time_s": 47.87, "lhpwl": 914895},
}

# Ablation rows on n100/n200/n300: label -> circuit -> hpwl, overlap, time_s
PUBLISHED_ABLATIONS: Dict[str, Dict[str, Dict[str, float]]] = {
    "RBSM": {
        "n100": {"hpwl": 328705, "overlap": 1470, "time_s": 5.78},
        "n200": {"hpwl": 571720, "overlap": 2450, "time_s": 17.66},
        "n300": {"hpwl": 694527, "overlap": 3634, "time_s": 36.12},
    },
    "Random batch": {
        "n100": {"hpwl": 308666, "overlap": 3500, "time_s": 9.67},
        "n200": {"hpwl": 553329, "overlap": 4014, "time_s": 17.81},
        "n300": {"hpwl": 687753, "overlap": 5288, "time_s": 37.97},
    },
    "Fix gamma": {
        "n100": {"hpwl": 368020, "overlap": 1691, "time_s": 2.52},
        "n200": {"hpwl": 642329, "overlap": 1349, "time_s": 6.34},
        "n300": {"hpwl": 871881, "overlap": 2229, "time_s": 16.18},
    },
    "No mean force": {
        "n100": {"hpwl": 332958, "overlap": 2099, "time_s": 5.75},
        "n200": {"hpwl": 622479, "overlap": 1629, "time_s": 14.99},
        "n300": {"hpwl": 767695, "overlap": 3317, "time_s": 31.99},
    },
    "No perturbation": {
        "n100": {"hpwl": 302856, "overlap": 3575, "time_s": 7.97},
        "n200": {"hpwl": 539778, "overlap": 7241, "time_s": 18.49},
        "n300": {"hpwl": 653182, "overlap": 10041, "time_s": 40.55},
    },
}

# Relative deviation above which a comparison is logged as a warning
DEVIATION_WARN = 0.15


def published(circuit: str, method: str) -> Optional[Dict[str, float]]:
    return PUBLISHED_RESULTS.get((circuit, method.lower()))


def relative_deviation(measured: float, reference: float) -> float:
    if reference == 0:
        return 0.0 if measured == 0 else float("inf")
    return (measured - reference) / reference


def compare_with_published(reports: Iterable) -> List[Dict[str, object]]:
    """
    Compare median report rows against the published numbers; large deviations
    are logged, nothing is raised.

    Returns:
        one dict per compared metric: circuit, method, metric, measured,
        reference, deviation
    """
    rows = []
    for report in reports:
        if report.seed is not None:
            continue
        reference = published(report.circuit, report.method)
        if reference is None:
            continue
        for metric in ("hpwl", "lhpwl"):
            measured = getattr(report, metric, None)
            if measured is None or metric not in reference:
                continue
            deviation = relative_deviation(measured, reference[metric])
            rows.append({
                "circuit": report.circuit, "method": report.method, "metric": metric,
                "measured": measured, "reference": reference[metric], "deviation": deviation,
            })
            if abs(deviation) > DEVIATION_WARN:
                logger.warning(
                    f"{report.circuit}/{report.method} {metric}: measured {measured:.1f} vs "
                    f"published {reference[metric]:.1f} ({deviation:+.1%})"
                )
            else:
                logger.info(f"{report.circuit}/{report.method} {metric}: {deviation:+.1%} vs published")
    return rows


def compare_ablations(reports: Iterable) -> List[Dict[str, object]]:
    """Same as compare_with_published for ablation median rows (keyed by variant)"""
    rows = []
    for report in reports:
        if report.seed is not None:
            continue
        reference = PUBLISHED_ABLATIONS.get(report.variant, {}).get(report.circuit)
        if reference is None:
            continue
        deviation = relative_deviation(report.hpwl, reference["hpwl"])
        rows.append({
            "circuit": report.circuit, "variant": report.variant, "metric": "hpwl",
            "measured": report.hpwl, "reference": reference["hpwl"], "deviation": deviation,
        })
        level = logging.WARNING if abs(deviation) > DEVIATION_WARN else logging.INFO
        logger.log(level, f"{report.circuit}/{report.variant} hpwl: {deviation:+.1%} vs published")
    return rows
