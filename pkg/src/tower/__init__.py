"""Radical tower construction."""

from src.tower.construction import (
    TowerLevel,
    build_tower,
    check_admissible,
    iter_tower,
    next_d,
    next_p,
    p_interval,
)
from src.tower.params import ConstructionParams

__all__ = [
    "ConstructionParams",
    "TowerLevel",
    "build_tower",
    "check_admissible",
    "iter_tower",
    "next_d",
    "next_p",
    "p_interval",
]
