"""Exact rational finite metric spaces: validation, restriction, canonical forms.

All distances are `fractions.Fraction` values (arbitrary precision, always in
lowest terms with positive denominator); no floating point is used anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .errors import ShapeError

Rational = Fraction


def rational(value) -> Fraction:
    """Coerce ints, "p/q" strings, and Fractions to an exact Fraction.

    Floats are rejected: exactness is the core contract of this library.
    """
    if isinstance(value, float):
        raise TypeError("floating-point values are not accepted; use Fraction or 'p/q' strings")
    return Fraction(value)


def format_rational(value: Fraction) -> str:
    """Lowest-terms string form: "p/q", or plain "n" for integers."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class Violation(NamedTuple):
    kind: str            # "diagonal" | "symmetry" | "positivity" | "triangle"
    witness: tuple       # offending index tuple
    values: tuple        # the offending matrix entries


class ValidationReport(NamedTuple):
    valid: bool
    violations: tuple

    def render(self) -> str:
        if self.valid:
            return "valid metric"
        lines = ["invalid metric:"]
        for v in self.violations:
            vals = ", ".join(format_rational(x) for x in v.values)
            lines.append(f"  {v.kind} at {v.witness}: {vals}")
        return "\n".join(lines)


def validate_metric(matrix: Sequence[Sequence]) -> ValidationReport:
    """Check the metric axioms, reporting every failing constraint.

    Requires a square matrix (ShapeError otherwise).  Valid means: zero
    diagonal, symmetric, strictly positive off the diagonal, and triangle
    inequality for all triples (degenerate equality allowed).
    """
    n = len(matrix)
    rows = []
    for row in matrix:
        if len(row) != n:
            raise ShapeError(f"matrix is not square: {n} rows, row of length {len(row)}")
        rows.append(tuple(rational(x) for x in row))

    zero = Fraction(0)
    violations = []
    for i in range(n):
        if rows[i][i] != zero:
            violations.append(Violation("diagonal", (i,), (rows[i][i],)))
    for i in range(n):
        for j in range(i + 1, n):
            if rows[i][j] != rows[j][i]:
                violations.append(Violation("symmetry", (i, j), (rows[i][j], rows[j][i])))
            if rows[i][j] <= zero:
                violations.append(Violation("positivity", (i, j), (rows[i][j],)))
    for i in range(n):
        for k in range(i + 1, n):
            for j in range(n):
                if j == i or j == k:
                    continue
                if rows[i][k] > rows[i][j] + rows[j][k]:
                    violations.append(
                        Violation("triangle", (i, j, k), (rows[i][k], rows[i][j], rows[j][k]))
                    )
    return ValidationReport(valid=not violations, violations=tuple(violations))


@dataclass(frozen=True)
class FiniteMetricSpace:
    """A labeled point set with an exact rational distance matrix.

    Immutable; safe to share.  Labels are opaque strings, all algorithms work
    on indices.  The empty space (0 points) is legal and is the base case for
    the inductive builders.
    """

    points: tuple
    dist: tuple  # tuple of tuples of Fraction

    def __post_init__(self):
        if len(set(self.points)) != len(self.points):
            raise ValueError("point labels must be distinct")
        if len(self.dist) != len(self.points):
            raise ShapeError("distance matrix size does not match point count")

    @classmethod
    def from_matrix(cls, matrix, points=None) -> "FiniteMetricSpace":
        """Validating constructor: rejects anything failing the metric axioms."""
        rows = tuple(tuple(rational(x) for x in row) for row in matrix)
        report = validate_metric(rows)
        if not report.valid:
            raise ValueError(report.render())
        if points is None:
            points = tuple(f"p{i}" for i in range(len(rows)))
        return cls(points=tuple(points), dist=rows)

    @classmethod
    def empty(cls) -> "FiniteMetricSpace":
        return cls(points=(), dist=())

    @property
    def n(self) -> int:
        return len(self.points)

    def d(self, i: int, j: int) -> Fraction:
        return self.dist[i][j]

    def row(self, i: int) -> tuple:
        return self.dist[i]

    def profile(self, i: int, over: Sequence[int]) -> tuple:
        """Distances from point i to the listed points, in the listed order."""
        return tuple(self.dist[i][j] for j in over)

    def restrict(self, subset: Sequence[int]) -> "FiniteMetricSpace":
        return restrict(self, subset)

    def with_point(self, label: str, distances: Sequence[Fraction]) -> "FiniteMetricSpace":
        """Append one point with the given distances to the existing points.

        Only the triangles through the new point are re-checked (the old ones
        cannot change); this keeps inductive builders quadratic per step.
        """
        if len(distances) != self.n:
            raise ShapeError("distance vector length does not match point count")
        distances = tuple(rational(x) for x in distances)
        for i in range(self.n):
            if distances[i] <= 0:
                raise ValueError(f"non-positive distance {distances[i]} to point {i}")
            for j in range(i + 1, self.n):
                gap = self.dist[i][j]
                if abs(distances[i] - distances[j]) > gap or gap > distances[i] + distances[j]:
                    raise ValueError(
                        f"triangle violation through new point at pair ({i}, {j})"
                    )
        new_row = tuple(distances) + (Fraction(0),)
        rows = tuple(
            self.dist[i] + (distances[i],) for i in range(self.n)
        ) + (new_row,)
        return FiniteMetricSpace(points=self.points + (label,), dist=rows)

    def fresh_label(self, base: str = "x") -> str:
        k = 0
        existing = set(self.points)
        while f"{base}{k}" in existing:
            k += 1
        return f"{base}{k}"

    def is_prefix_of(self, other: "FiniteMetricSpace") -> bool:
        if self.n > other.n:
            return False
        return all(
            self.dist[i][j] == other.dist[i][j]
            for i in range(self.n)
            for j in range(self.n)
        )

    def __repr__(self):
        return f"FiniteMetricSpace({self.n} points)"


def restrict(space: FiniteMetricSpace, subset: Sequence[int]) -> FiniteMetricSpace:
    """Induced subspace on the given indices, in the given order."""
    subset = list(subset)
    if len(set(subset)) != len(subset):
        raise IndexError(f"duplicate indices in subset: {subset}")
    for i in subset:
        if not (0 <= i < space.n):
            raise IndexError(f"index {i} out of range for {space.n}-point space")
    points = tuple(space.points[i] for i in subset)
    rows = tuple(tuple(space.dist[i][j] for j in subset) for i in subset)
    return FiniteMetricSpace(points=points, dist=rows)
