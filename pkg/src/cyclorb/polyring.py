"""Dense univariate polynomial helpers over generic coefficient rings.

Polynomials are plain lists of coefficients, low degree first.  All
operations are duck-typed: they work equally well with ``fractions.Fraction``
(exact mode), ``float``/``complex`` (numeric mode) or sympy expressions
(symbolic checks in the tests).
"""

from __future__ import annotations

from fractions import Fraction


def trim(p):
    """Drop trailing zero coefficients (keeps at least one entry)."""
    out = list(p)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def is_zero(p):
    return all(c == 0 for c in p)


def degree(p):
    p = trim(p)
    if len(p) == 1 and p[0] == 0:
        return -1
    return len(p) - 1


def padd(p, q):
    n = max(len(p), len(q))
    out = []
    for i in range(n):
        a = p[i] if i < len(p) else 0
        b = q[i] if i < len(q) else 0
        out.append(a + b)
    return out


def pscale(p, c):
    return [c * a for a in p]


def pmul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return out


def peval(p, x):
    """Horner evaluation."""
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def psub_affine(p, a, b):
    """Return the coefficient list of p(a + b*y) in the variable y."""
    acc = [0]
    lin = [a, b]
    for c in reversed(list(p)):
        acc = padd(pmul(acc, lin), [c])
    return trim(acc)


def falling_factorial(k):
    """theta*(theta-1)*...*(theta-k+1) as a coefficient list; k=0 gives [1]."""
    out = [1]
    for i in range(k):
        out = pmul(out, [-i, 1])
    return out


def stirling2_table(n):
    """Stirling numbers of the second kind S(i, j) for 0 <= j <= i <= n."""
    table = [[0] * (n + 1) for _ in range(n + 1)]
    table[0][0] = 1
    for i in range(1, n + 1):
        for j in range(1, i + 1):
            table[i][j] = table[i - 1][j - 1] + j * table[i - 1][j]
    return table


def divide_out_root(p, r):
    """Divide p by (x - r); returns (quotient, remainder_value)."""
    p = list(p)
    quot = [0] * (len(p) - 1)
    acc = p[-1]
    for i in range(len(p) - 2, -1, -1):
        quot[i] = acc
        acc = p[i] + r * acc
    return quot, acc


def rational_roots(p):
    """All rational roots of a Fraction-coefficient polynomial, with multiplicity.

    Uses the rational-root theorem on the integer-cleared polynomial, so the
    result is exact and complete for rational roots.  Returns (roots, deflated)
    where ``deflated`` is the remaining polynomial with no rational roots.
    """
    p = trim([Fraction(c) for c in p])
    roots = []
    # x = 0 roots
    while len(p) > 1 and p[0] == 0:
        roots.append(Fraction(0))
        p = p[1:]
    if degree(p) < 1:
        return roots, p
    den_lcm = 1
    for c in p:
        den_lcm = den_lcm * c.denominator // _gcd(den_lcm, c.denominator)
    ip = [int(c * den_lcm) for c in p]
    g = 0
    for c in ip:
        g = _gcd(g, abs(c))
    if g > 1:
        ip = [c // g for c in ip]
    candidates = set()
    for num in _divisors(abs(ip[0])):
        for den in _divisors(abs(ip[-1])):
            candidates.add(Fraction(num, den))
            candidates.add(Fraction(-num, den))
    p = [Fraction(c) for c in ip]
    for r in sorted(candidates):
        while degree(p) >= 1 and peval(p, r) == 0:
            roots.append(r)
            p, _ = divide_out_root(p, r)
    return sorted(roots), trim(p)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _divisors(n):
    if n == 0:
        return [1]
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            out.append(n // d)
        d += 1
    return sorted(set(out))
