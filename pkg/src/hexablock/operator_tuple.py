"""Commuting operator tuples (pair, triple, quadruple) of square matrices."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core_linalg import DEFAULT_TOL, adj, as_cmatrix, commutator_residuals, require_commuting
from .errors import WrongShape

KIND_BY_LEN = {2: "pair", 3: "triple", 4: "quadruple"}


@dataclass
class OperatorTuple:
    entries: list[np.ndarray]
    kind: str = ""
    tol: float = DEFAULT_TOL
    _checked: bool = field(default=False, repr=False)

    def __post_init__(self):
        self.entries = [as_cmatrix(e) for e in self.entries]
        if len(self.entries) not in KIND_BY_LEN:
            raise WrongShape(f"a tuple has 2 to 4 entries, got {len(self.entries)}")
        shapes = {e.shape for e in self.entries}
        if len(shapes) != 1 or self.entries[0].shape[0] != self.entries[0].shape[1]:
            raise WrongShape(f"entries must be square of one size, got {sorted(shapes)}")
        expected = KIND_BY_LEN[len(self.entries)]
        if not self.kind:
            self.kind = expected
        elif self.kind != expected:
            raise WrongShape(f"kind {self.kind!r} does not match {len(self.entries)} entries")

    @property
    def dim(self) -> int:
        return self.entries[0].shape[0]

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def require_commuting(self) -> None:
        require_commuting(self.entries, self.tol)

    def commutator_residual(self) -> float:
        return max(commutator_residuals(self.entries).values(), default=0.0)

    def adjoint(self) -> "OperatorTuple":
        return OperatorTuple([adj(e) for e in self.entries], self.kind, self.tol)

    def compress(self, basis: np.ndarray) -> "OperatorTuple":
        return OperatorTuple([adj(basis) @ e @ basis for e in self.entries], self.kind, self.tol)


def make_tuple(entries: Sequence, tol: float = DEFAULT_TOL) -> OperatorTuple:
    return OperatorTuple(list(entries), tol=tol)


def diag_tuple(points: Sequence[Sequence[complex]], basis: np.ndarray | None = None,
               tol: float = DEFAULT_TOL) -> OperatorTuple:
    """Commuting normal tuple with the given joint eigentuples (rows of ``points``)."""
    pts = np.asarray(points, dtype=np.complex128)
    if pts.ndim != 2:
        raise WrongShape("points must be a 2-D array of eigentuples")
    mats = [np.diag(pts[:, i]) for i in range(pts.shape[1])]
    if basis is not None:
        mats = [basis @ m @ adj(basis) for m in mats]
    return OperatorTuple(mats, tol=tol)
