"""Truncated power series with exact Fraction coefficients.

Used for the expansion checks of the torus identities, where the object
to expand is q^e * (rational series in u = q^(1/2)) and the coefficients
must come out as exact integers.
"""

from __future__ import annotations

from fractions import Fraction

from .polyring import trim


class QSeries:
    """sum_k c_k u^k truncated at order ``n``; coefficients are Fractions."""

    __slots__ = ("c", "n")

    def __init__(self, coeffs, n):
        self.n = n
        c = [Fraction(x) for x in coeffs[: n + 1]]
        c += [Fraction(0)] * (n + 1 - len(c))
        self.c = c

    @classmethod
    def x(cls, n):
        return cls([0, 1], n)

    @classmethod
    def const(cls, v, n):
        return cls([v], n)

    def __add__(self, other):
        other = self._coerce(other)
        return QSeries([a + b for a, b in zip(self.c, other.c)], self.n)

    def __sub__(self, other):
        other = self._coerce(other)
        return QSeries([a - b for a, b in zip(self.c, other.c)], self.n)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QSeries([a * other for a in self.c], self.n)
        out = [Fraction(0)] * (self.n + 1)
        for i, a in enumerate(self.c):
            if a == 0:
                continue
            for j in range(0, self.n + 1 - i):
                b = other.c[j]
                if b != 0:
                    out[i + j] += a * b
        return QSeries(out, self.n)

    __rmul__ = __mul__

    def _coerce(self, other):
        if isinstance(other, (int, Fraction)):
            return QSeries.const(other, self.n)
        if other.n != self.n:
            raise ValueError("truncation orders differ")
        return other

    def shift(self, k):
        """Multiply by u^k."""
        return QSeries([Fraction(0)] * k + self.c, self.n)

    def inv(self):
        if self.c[0] == 0:
            raise ZeroDivisionError("series has zero constant term")
        out = [1 / self.c[0]]
        for k in range(1, self.n + 1):
            s = Fraction(0)
            for j in range(1, k + 1):
                s += self.c[j] * out[k - j]
            out.append(-s / self.c[0])
        return QSeries(out, self.n)

    def pow_frac(self, expo):
        """(series)^expo for Fraction ``expo``; requires constant term 1."""
        if self.c[0] != 1:
            raise ValueError("fractional power needs unit constant term")
        expo = Fraction(expo)
        # binomial: prod via d/du log trick: f^e with f = 1 + g
        out = [Fraction(1)] + [Fraction(0)] * self.n
        # (f^e)' f = e f' f^e  ->  (k+1) out[k+1] = e sum f'[j] out[k-j] - sum f[j] (k+1-j) out[k+1-j]
        for k in range(self.n):
            s = Fraction(0)
            for j in range(0, k + 1):
                fp = (j + 1) * self.c[j + 1]
                s += expo * fp * out[k - j]
            for j in range(1, k + 1):
                s -= self.c[j] * (k + 1 - j) * out[k + 1 - j]
            out[k + 1] = s / (k + 1)
        return QSeries(out, self.n)

    def compose(self, inner):
        """self(inner(u)) where inner has zero constant term."""
        if inner.c[0] != 0:
            raise ValueError("inner series must have zero constant term")
        acc = QSeries.const(0, self.n)
        for ck in reversed(self.c):
            acc = acc * inner + QSeries.const(ck, self.n)
        return acc

    def coeffs(self):
        return list(self.c)

    def __repr__(self):
        return f"QSeries({trim(self.c)}, n={self.n})"
