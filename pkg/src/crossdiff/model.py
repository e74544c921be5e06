"""Core value types: grid geometry, species fields, model coefficients, solver state.

All types are immutable once constructed; stepping produces new objects.
Lattices are (node_count, node_count) float64 arrays indexed [j, i] with
i the x-index (fast) and j the y-index, so a C-order ravel gives the flat
index j*M + i that the Kronecker-structured operators assume.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable

import numpy as np


class Bc(enum.Enum):
    NEUMANN = "neumann"
    DIRICHLET = "dirichlet"


class Status(enum.Enum):
    RUNNING = "running"
    REACHED_FINAL_TIME = "reached_final_time"
    BLOWUP_DETECTED = "blowup_detected"


@dataclass(frozen=True)
class GridSpec:
    """Uniform square grid on [0, L]^2 with N interior nodes per direction."""

    side_length: float
    interior_count: int
    bc: Bc = Bc.NEUMANN

    def __post_init__(self):
        if self.side_length <= 0:
            raise ValueError("side_length must be > 0")
        if self.interior_count < 1:
            raise ValueError("interior_count must be >= 1")
        if not isinstance(self.bc, Bc):
            raise ValueError("bc must be a Bc enum member")

    @property
    def node_count(self) -> int:
        return self.interior_count + 2

    @property
    def spacing(self) -> float:
        return self.side_length / (self.interior_count + 1)

    def coordinates(self) -> tuple[np.ndarray, np.ndarray]:
        """Meshgrid arrays (X, Y) with X[j, i] = i*spacing, Y[j, i] = j*spacing."""
        ax = np.arange(self.node_count) * self.spacing
        x, y = np.meshgrid(ax, ax, indexing="xy")
        return x, y


@dataclass(frozen=True)
class FieldPair:
    """The two species lattices at one time level."""

    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.u, dtype=np.float64)
        v = np.asarray(self.v, dtype=np.float64)
        if u.shape != v.shape or u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise ValueError("u and v must be square lattices of identical shape")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        u.setflags(write=False)
        v.setflags(write=False)

    @property
    def node_count(self) -> int:
        return self.u.shape[0]

    def max_value(self) -> float:
        return float(max(self.u.max(), self.v.max()))

    def min_value(self) -> float:
        return float(min(self.u.min(), self.v.min()))

    def validate_for_grid(self, grid: GridSpec) -> None:
        """Check the grid-dependent invariants (shape, pinned Dirichlet ring)."""
        if self.node_count != grid.node_count:
            raise ValueError(
                f"field shape {self.u.shape} does not match grid node count {grid.node_count}"
            )
        if grid.bc is Bc.DIRICHLET:
            ring = (self.u[0, :], self.u[-1, :], self.u[:, 0], self.u[:, -1],
                    self.v[0, :], self.v[-1, :], self.v[:, 0], self.v[:, -1])
            if any(np.any(edge != 0.0) for edge in ring):
                raise ValueError("Dirichlet boundary entries must be exactly zero")


class ReactionKind(enum.Enum):
    ZERO = "zero"
    MANUFACTURED_DIRICHLET = "manufactured_dirichlet"
    MANUFACTURED_NEUMANN = "manufactured_neumann"
    LOTKA_VOLTERRA = "lotka_volterra"
    LOGISTIC_BLOWUP = "logistic_blowup"


@dataclass(frozen=True)
class ReactionSpec:
    """Pointwise reaction pair (u, v, x, y, t) -> (f, g).

    The manufactured kinds are pure space-time forcings; the population
    kinds depend on (u, v) only.  Evaluation is deterministic and
    side-effect free.
    """

    kind: ReactionKind
    params: dict = field(default_factory=dict)

    @staticmethod
    def zero() -> "ReactionSpec":
        return ReactionSpec(ReactionKind.ZERO)

    @staticmethod
    def manufactured_dirichlet() -> "ReactionSpec":
        return ReactionSpec(ReactionKind.MANUFACTURED_DIRICHLET)

    @staticmethod
    def manufactured_neumann(a: float = 1.0) -> "ReactionSpec":
        if a < 1.0:
            raise ValueError("manufactured Neumann offset a must be >= 1")
        return ReactionSpec(ReactionKind.MANUFACTURED_NEUMANN, {"a": float(a)})

    @staticmethod
    def lotka_volterra(a1, b1, c1, a2, b2, c2) -> "ReactionSpec":
        return ReactionSpec(
            ReactionKind.LOTKA_VOLTERRA,
            {"a1": float(a1), "b1": float(b1), "c1": float(c1),
             "a2": float(a2), "b2": float(b2), "c2": float(c2)},
        )

    @staticmethod
    def logistic_blowup(a1, b1, a2, b2) -> "ReactionSpec":
        return ReactionSpec(
            ReactionKind.LOGISTIC_BLOWUP,
            {"a1": float(a1), "b1": float(b1), "a2": float(a2), "b2": float(b2)},
        )

    def evaluate(self, u, v, x, y, t: float):
        """Return (f, g) for scalar or array-valued inputs."""
        from . import verification  # local import to avoid a cycle

        if self.kind is ReactionKind.ZERO:
            z = np.zeros(np.broadcast(u, v, x, y).shape)
            return z, z.copy()
        if self.kind is ReactionKind.MANUFACTURED_DIRICHLET:
            f = verification.forcing_dirichlet(x, y, t)
            return f, f.copy() if isinstance(f, np.ndarray) else f
        if self.kind is ReactionKind.MANUFACTURED_NEUMANN:
            f = verification.forcing_neumann(self.params["a"], x, y, t)
            return f, f.copy() if isinstance(f, np.ndarray) else f
        if self.kind is ReactionKind.LOTKA_VOLTERRA:
            p = self.params
            f = u * (p["a1"] - p["b1"] * u + p["c1"] * v)
            g = v * (p["a2"] + p["b2"] * u - p["c2"] * v)
            return f, g
        if self.kind is ReactionKind.LOGISTIC_BLOWUP:
            p = self.params
            f = u * (p["a1"] + p["b1"] * u)
            g = v * (p["a2"] + p["b2"] * v)
            return f, g
        raise ValueError(f"unknown reaction kind {self.kind}")


@dataclass(frozen=True)
class ModelParams:
    """Diffusion coefficients and the reaction specification.

    d1, d2 are the linear diffusion coefficients (> 0); s1, s2 the
    self-diffusion and c12, c21 the cross-diffusion coefficients (>= 0).
    """

    d1: float
    d2: float
    s1: float = 0.0
    s2: float = 0.0
    c12: float = 0.0
    c21: float = 0.0
    reaction: ReactionSpec = field(default_factory=ReactionSpec.zero)

    def __post_init__(self):
        if self.d1 <= 0:
            raise ValueError("d1 must be > 0")
        if self.d2 <= 0:
            raise ValueError("d2 must be > 0")
        for name in ("s1", "s2", "c12", "c21"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")

    def kappa(self) -> float:
        """Largest of the six diffusion coefficients."""
        return max(self.d1, self.d2, self.s1, self.s2, self.c12, self.c21)

    @property
    def cross_only(self) -> bool:
        return self.s1 == 0.0 and self.s2 == 0.0


def kappa(params: ModelParams) -> float:
    return params.kappa()


@dataclass(frozen=True)
class SolverState:
    """Time level: t, current step size, fields, step counter, status."""

    time: float
    step: float
    fields: FieldPair
    step_index: int = 0
    status: Status = Status.RUNNING

    @staticmethod
    def initial(fields: FieldPair, step: float) -> "SolverState":
        return SolverState(time=0.0, step=step, fields=fields)

    def advanced(self, tau: float, fields: FieldPair, status: Status = Status.RUNNING) -> "SolverState":
        return SolverState(
            time=self.time + tau,
            step=tau,
            fields=fields,
            step_index=self.step_index + 1,
            status=status,
        )


SnapshotSink = Callable[[int, float, FieldPair], None]
