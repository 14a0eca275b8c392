"""Exact rational helpers shared by the polyhedral code paths.

Arrays are either ``float64`` or ``object`` arrays of :class:`fractions.Fraction`.
An object array is treated as exact; everything downstream keeps it exact as
long as only ring operations, ``abs`` and comparisons are applied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Integral, Rational

import numpy as np


def parse_scalar(value):
    """Parse a JSON-ish scalar. Integers, Fractions and ``"num/den"`` strings
    are exact; floats are returned unchanged."""
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers")
    if isinstance(value, (Fraction, Integral)):
        return Fraction(value)
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("inf", "infinity", "+inf"):
            return math.inf
        try:
            return Fraction(text)
        except ValueError:
            return float(text)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, np.integer):
        return Fraction(int(value))
    raise TypeError(f"cannot interpret {value!r} as a number")


def as_array(data, exact: bool | None = None) -> np.ndarray:
    """Convert nested data to an exact (object/Fraction) or float array.

    With ``exact=None`` the result is exact iff every entry is exactly
    representable (ints, Fractions, rational strings).
    """
    if isinstance(data, np.ndarray) and data.dtype != object:
        if exact or (exact is None and data.dtype.kind in "iub"):
            return to_exact(data)
        return np.asarray(data, dtype=float)
    arr = np.asarray(data, dtype=object)
    flat = [parse_scalar(v) for v in arr.ravel()]
    all_exact = all(isinstance(v, Fraction) for v in flat)
    if exact is None:
        exact = all_exact
    if exact:
        if not all_exact:
            flat = [v if isinstance(v, Fraction) else Fraction(v) for v in flat]
        out = np.empty(arr.shape, dtype=object)
        out.ravel()[:] = flat if flat else []
        if out.shape == ():
            out = np.array(flat[0], dtype=object)
        return out
    return np.array([float(v) for v in flat], dtype=float).reshape(arr.shape)


def to_exact(arr) -> np.ndarray:
    arr = np.asarray(arr)
    if arr.dtype == object:
        return arr
    out = np.empty(arr.shape, dtype=object)
    out.ravel()[:] = [Fraction(float(v)) for v in arr.ravel()]
    return out


def is_exact(arr) -> bool:
    return isinstance(arr, np.ndarray) and arr.dtype == object


def to_float(arr) -> np.ndarray:
    return np.asarray(arr, dtype=float) if not is_exact(arr) else np.array(
        [float(v) for v in arr.ravel()], dtype=float
    ).reshape(arr.shape)


def exact_solve(A, B) -> np.ndarray:
    """Solve ``A X = B`` over the rationals (A square, nonsingular)."""
    A = [[Fraction(v) for v in row] for row in np.asarray(A, dtype=object)]
    B_arr = np.asarray(B, dtype=object)
    vec = B_arr.ndim == 1
    B = [[Fraction(v)] for v in B_arr] if vec else [[Fraction(v) for v in row] for row in B_arr]
    n = len(A)
    M = [A[i] + B[i] for i in range(n)]
    width = len(M[0])
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise np.linalg.LinAlgError("singular matrix")
        M[col], M[piv] = M[piv], M[col]
        inv = 1 / M[col][col]
        M[col] = [v * inv for v in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[col])]
    out = np.empty((n, width - n), dtype=object)
    for i in range(n):
        for j in range(width - n):
            out[i, j] = M[i][n + j]
    return out[:, 0] if vec else out


def exact_inv(A) -> np.ndarray:
    n = len(A)
    eye = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            eye[i, j] = Fraction(int(i == j))
    return exact_solve(A, eye)


def exact_rank(rows) -> int:
    M = [[Fraction(v) for v in row] for row in rows]
    if not M:
        return 0
    rank, ncols = 0, len(M[0])
    for col in range(ncols):
        piv = next((r for r in range(rank, len(M)) if M[r][col] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        for r in range(rank + 1, len(M)):
            if M[r][col] != 0:
                f = M[r][col] / M[rank][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[rank])]
        rank += 1
    return rank


def matrix_rank(rows, exact: bool, tol: float = 1e-9) -> int:
    if exact:
        return exact_rank(rows)
    rows = np.asarray(rows, dtype=float)
    if rows.size == 0:
        return 0
    return int(np.linalg.matrix_rank(rows, tol=tol * max(1.0, np.abs(rows).max())))


@dataclass(frozen=True, order=False)
class Surd:
    """Exact positive real of the form ``radicand ** (1/index)``."""

    radicand: Fraction
    index: int = 1

    def __post_init__(self):
        if self.radicand < 0 or self.index < 1:
            raise ValueError("Surd needs radicand >= 0 and index >= 1")
        object.__setattr__(self, "radicand", Fraction(self.radicand))

    def __float__(self) -> float:
        if self.radicand == 0:
            return 0.0
        if self.index == 1:
            return float(self.radicand)
        try:
            r = float(self.radicand)
        except OverflowError:
            r = math.inf
        if 0 < r < math.inf and r > 1e-300:
            if self.index == 2:
                return math.sqrt(r)
            return r ** (1.0 / self.index)
        # log form keeps huge rationals out of float overflow
        lg = (math.log(self.radicand.numerator) - math.log(self.radicand.denominator)) / self.index
        return math.exp(lg)

    def _common(self, other: "Surd") -> tuple[Fraction, Fraction]:
        m = self.index * other.index // math.gcd(self.index, other.index)
        return self.radicand ** (m // self.index), other.radicand ** (m // other.index)

    def __eq__(self, other):
        if not isinstance(other, Surd):
            return NotImplemented
        a, b = self._common(other)
        return a == b

    def __hash__(self):
        return hash(float(self))

    def __lt__(self, other: "Surd") -> bool:
        a, b = self._common(other)
        return a < b

    def __le__(self, other: "Surd") -> bool:
        a, b = self._common(other)
        return a <= b

    def __gt__(self, other: "Surd") -> bool:
        return other < self

    def __ge__(self, other: "Surd") -> bool:
        return other <= self

    def __mul__(self, other: "Surd") -> "Surd":
        m = self.index * other.index // math.gcd(self.index, other.index)
        a, b = self._common(other)
        return Surd(a * b, m)

    def __truediv__(self, other: "Surd") -> "Surd":
        m = self.index * other.index // math.gcd(self.index, other.index)
        a, b = self._common(other)
        return Surd(a / b, m)

    def root(self, k: int) -> "Surd":
        return Surd(self.radicand, self.index * k)

    def __str__(self) -> str:
        r = self.radicand
        if self.index == 1:
            return str(r)
        return f"({r})^(1/{self.index})"

    def to_json(self) -> dict:
        return {"radicand": str(self.radicand), "index": self.index}


def surd_power(base: Fraction | int, exponent: Fraction) -> Surd:
    """``base ** exponent`` for a rational exponent, as a :class:`Surd`."""
    exponent = Fraction(exponent)
    base = Fraction(base)
    num, den = exponent.numerator, exponent.denominator
    rad = base ** num if num >= 0 else 1 / base ** (-num)
    return Surd(rad, den)
