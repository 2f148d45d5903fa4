"""Discrete pan/tilt grid geometry.

The camera's action space is a K x L grid of fixation points. Looking at a
fixation shows a W x H window of blocks centred on it; window cells that fall
off the grid are flagged as outside and carry no evidence.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class GridSpec:
    """Geometry of the block grid (K x L) and the field of view (W x H)."""

    k: int
    l: int
    w: int
    h: int

    def __post_init__(self):
        if self.k < 1 or self.l < 1:
            raise ValueError(f"grid dims must be >= 1, got {self.k}x{self.l}")
        if not (1 <= self.w <= self.k):
            raise ValueError(f"fov width {self.w} outside [1, {self.k}]")
        if not (1 <= self.h <= self.l):
            raise ValueError(f"fov height {self.h} outside [1, {self.l}]")

    @property
    def n_fixations(self) -> int:
        return self.k * self.l

    def contains(self, k: int, l: int) -> bool:
        return 0 <= k < self.k and 0 <= l < self.l


@dataclass(frozen=True, order=True)
class Fixation:
    """A pan/tilt target: block indices (k, l)."""

    k: int
    l: int

    def chebyshev(self, other: "Fixation") -> int:
        return max(abs(self.k - other.k), abs(self.l - other.l))


@dataclass(frozen=True)
class FovCell:
    """One field-of-view cell (w, h) and the grid block it shows, if any."""

    w: int
    h: int
    block: Fixation | None  # None when the cell falls outside the grid

    @property
    def in_grid(self) -> bool:
        return self.block is not None


def check_fixation(grid: GridSpec, p: Fixation) -> None:
    if not grid.contains(p.k, p.l):
        raise ValueError(f"fixation ({p.k},{p.l}) outside {grid.k}x{grid.l} grid")


def center_cell(grid: GridSpec) -> tuple[int, int]:
    """FOV coordinates of the camera centre; exact centre for odd W and H."""
    return (grid.w - 1) // 2, (grid.h - 1) // 2


def fov_origin(grid: GridSpec, p: Fixation) -> tuple[int, int]:
    """Block coordinates of the FOV's top-left cell (may be negative)."""
    cw, ch = center_cell(grid)
    return p.k - cw, p.l - ch


def visible_blocks(grid: GridSpec, p: Fixation) -> list[FovCell]:
    """The W*H FOV cells for fixation p, row-major in (w, h).

    Cells whose block index falls off the grid get block=None.
    """
    check_fixation(grid, p)
    k0, l0 = fov_origin(grid, p)
    cells = []
    for w in range(grid.w):
        for h in range(grid.h):
            bk, bl = k0 + w, l0 + h
            block = Fixation(bk, bl) if grid.contains(bk, bl) else None
            cells.append(FovCell(w, h, block))
    return cells


def all_fixations(grid: GridSpec) -> list[Fixation]:
    """All K*L fixation points in row-major order."""
    return [Fixation(k, l) for k in range(grid.k) for l in range(grid.l)]
