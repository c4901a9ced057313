"""Contrast-form reparametrisation of design matrices.

A linear model ``E[y] = X theta`` whose column space contains the all-ones
vector ``j`` can be rewritten as ``E[y] = [j : C] phi`` where every column of
``C`` sums to zero.  The columns of ``C`` are contrasts: block totals taken
against them are insensitive to a constant shift, which is what makes block
randomisation analysable.  This module builds that form and the exact linear
reparametrisation ``phi = R theta``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact_linalg import (
    IntMatrix,
    RationalMatrix,
    clear_denominators,
    rank,
    rational_solve,
)


class JNotInColumnSpaceError(ValueError):
    """The all-ones vector is not in the design's column space.

    Without an intercept-equivalent direction the contrast form does not
    exist and block-orthogonality analysis does not apply.
    """


@dataclass(frozen=True)
class DesignModel:
    """A design matrix together with run and parameter labels."""

    matrix: IntMatrix
    run_labels: tuple[str, ...]
    param_labels: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "run_labels", tuple(str(s) for s in self.run_labels))
        object.__setattr__(self, "param_labels", tuple(str(s) for s in self.param_labels))
        if len(self.run_labels) != self.matrix.n_rows:
            raise ValueError("one run label per matrix row is required")
        if len(self.param_labels) != self.matrix.n_cols:
            raise ValueError("one parameter label per matrix column is required")
        if self.matrix.n_rows < 1:
            raise ValueError("a design needs at least one run")

    @property
    def n_runs(self) -> int:
        return self.matrix.n_rows


@dataclass(frozen=True)
class ContrastModel:
    """Contrast form ``[j : contrast]`` of a design, plus the parameter map.

    ``contrast`` is an ``n x q`` integer matrix whose columns each sum to
    zero and are linearly independent; ``q = rank(source.matrix) - 1``.
    ``reparam`` is the ``(q+1) x p`` rational matrix with
    ``[j : contrast] @ reparam == source.matrix`` exactly, i.e. it maps the
    source parameters onto (intercept, contrast) coordinates.
    """

    n_runs: int
    contrast: IntMatrix
    reparam: RationalMatrix
    source: DesignModel

    def __post_init__(self) -> None:
        if self.contrast.n_rows != self.n_runs:
            raise ValueError("contrast row count does not match n_runs")
        for j in range(self.contrast.n_cols):
            if sum(self.contrast.column(j)) != 0:
                raise ValueError(f"contrast column {j} does not sum to zero")

    @property
    def n_contrasts(self) -> int:
        return self.contrast.n_cols

    def model_matrix(self) -> IntMatrix:
        """The full model matrix ``[j : contrast]`` with the ones column first."""
        ones = IntMatrix.from_rows(((1,) for _ in range(self.n_runs)), n_cols=1)
        return ones.hstack(self.contrast)


def _independent_columns(columns: Sequence[tuple[int, ...]]) -> list[int]:
    """Indices of a greedy maximal linearly independent subset, scanning left to right."""
    echelon: list[list[Fraction]] = []
    kept: list[int] = []
    for idx, col in enumerate(columns):
        v = [Fraction(x) for x in col]
        for row in echelon:
            lead = next(i for i, x in enumerate(row) if x)
            if v[lead]:
                f = v[lead] / row[lead]
                v = [a - f * b for a, b in zip(v, row)]
        if any(v):
            echelon.append(v)
            kept.append(idx)
    return kept


def to_contrast_form(design: DesignModel) -> ContrastModel:
    """Rewrite a design model in contrast form.

    Each column ``c`` of the design is centred to ``n*c - (j.c)*j``, scaled
    to a primitive integer vector; a greedy left-to-right scan keeps a
    maximal independent set of the nonzero centred columns.  Raises
    :class:`JNotInColumnSpaceError` when the all-ones vector is outside the
    design's column space.
    """
    x = design.matrix
    n = x.n_rows
    ones = IntMatrix.from_rows(((1,) for _ in range(n)), n_cols=1)
    if rank(x.hstack(ones)) != rank(x):
        raise JNotInColumnSpaceError("the all-ones vector is not in the column space")

    centred: list[tuple[int, ...]] = []
    for j in range(x.n_cols):
        col = x.column(j)
        total = sum(col)
        w = tuple(n * v - total for v in col)
        if any(w):
            centred.append(clear_denominators(w))
    kept = _independent_columns(centred)
    contrast_cols = [centred[i] for i in kept]
    contrast = IntMatrix.from_rows(
        (tuple(col[i] for col in contrast_cols) for i in range(n)),
        n_cols=len(contrast_cols),
    )

    model = ones.hstack(contrast)
    mt = model.transpose().to_rational()
    gram = mt.mul(model.to_rational())
    reparam = rational_solve(gram, mt.mul(x.to_rational()))
    return ContrastModel(n_runs=n, contrast=contrast, reparam=reparam, source=design)


def empirical_contrast_check(coefficients: Sequence) -> bool:
    """True when the coefficient vector sums to zero, i.e. defines a contrast."""
    return sum(Fraction(c) for c in coefficients) == 0
