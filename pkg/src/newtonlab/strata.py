"""Dimension bookkeeping in A_g and unlikely-intersection predicates."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import EmptyInput, GenusTooSmall, NewtonLabError
from .polygon import (
    Graph,
    LatticeCount,
    NewtonPolygon,
    format_rational,
    lattice_points_below,
    min_gap,
    scaled,
)

__all__ = [
    "ModuliDims",
    "UnlikelyReport",
    "FamilyRow",
    "FamilyReport",
    "moduli_dims",
    "is_unlikely_polygon",
    "unlikely_family_report",
    "supersingular_dimension",
]


@dataclass(frozen=True)
class ModuliDims:
    g: int
    dim_Ag: int
    dim_Torelli: int
    codim_Torelli: int


def moduli_dims(g: int) -> ModuliDims:
    if g < 2:
        raise GenusTooSmall(f"g={g}: the Torelli dimension 3g-3 needs g >= 2")
    dim_a = g * (g + 1) // 2
    dim_t = 3 * g - 3
    return ModuliDims(g, dim_a, dim_t, dim_a - dim_t)


def supersingular_dimension(g: int) -> int:
    return g * g // 4


@dataclass(frozen=True)
class UnlikelyReport:
    polygon: NewtonPolygon
    omega: LatticeCount
    codim_torelli: int
    ambient_dim: int
    is_unlikely: bool
    marginal: bool

    @property
    def g(self) -> int:
        return self.polygon.genus


def is_unlikely_polygon(polygon: NewtonPolygon) -> UnlikelyReport:
    """Compare the lattice-count codimension of the stratum with that of the Torelli locus.

    The lattice count is only a lower bound on the codimension unless the
    polygon has integer vertices, so ``is_unlikely`` is always sound while a
    negative verdict is definitive only in the exact case.  ``marginal``
    marks negative verdicts that are not definitive, and the boundary case
    where the codimensions sum to exactly the ambient dimension.
    """
    dims = moduli_dims(polygon.genus)
    omega = lattice_points_below(polygon)
    total = omega.count + dims.codim_Torelli
    unlikely = total > dims.dim_Ag
    marginal = not unlikely and (not omega.exact_codimension or total == dims.dim_Ag)
    return UnlikelyReport(polygon, omega, dims.codim_Torelli, dims.dim_Ag, unlikely, marginal)


@dataclass(frozen=True)
class FamilyRow:
    report: UnlikelyReport
    mingap: Fraction

    @property
    def g(self) -> int:
        return self.report.g

    @property
    def growth(self) -> Fraction:
        """Lattice count divided by g^2."""
        return Fraction(self.report.omega.count, self.g**2)

    def __str__(self):
        r = self.report
        return (
            f"g={self.g} omega={r.omega.count} codimT={r.codim_torelli} dimA={r.ambient_dim} "
            f"unlikely={str(r.is_unlikely).lower()} mingap={format_rational(self.mingap)}"
        )


@dataclass(frozen=True)
class FamilyReport:
    rows: tuple[FamilyRow, ...]
    reference: Graph
    g0: Optional[int]

    def lines(self) -> list[str]:
        return [str(r) for r in self.rows]

    def summary(self) -> str:
        g0 = "none" if self.g0 is None else str(self.g0)
        last = self.rows[-1]
        return f"members={len(self.rows)} g0={g0} growth_last={format_rational(last.growth)}"


def _row(args) -> FamilyRow:
    polygon, reference = args
    return FamilyRow(is_unlikely_polygon(polygon), min_gap(scaled(polygon), reference))


def unlikely_family_report(
    members: Iterable[tuple[int, NewtonPolygon]], reference: Graph, workers: int = 1
) -> FamilyReport:
    members = sorted(members, key=lambda gm: gm[0])
    if not members:
        raise EmptyInput("no family members given")
    for g, polygon in members:
        if polygon.genus != g:
            raise NewtonLabError(f"member labelled g={g} has a polygon of genus {polygon.genus}")
    jobs: Sequence = [(polygon, reference) for _, polygon in members]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = tuple(pool.map(_row, jobs))
    else:
        rows = tuple(map(_row, jobs))
    g0 = None
    for row in reversed(rows):
        if not row.report.is_unlikely:
            break
        g0 = row.g
    return FamilyReport(rows, reference, g0)
