"""Exact rational linear algebra.

Everything here works on plain Python ``int`` / ``Fraction`` lists; no floating
point is ever involved.  Polynomials are coefficient lists, lowest degree first.
"""

from fractions import Fraction
from math import lcm


def to_fraction(value):
    """Parse ``"p/q"``, ``"p"``, ints or Fractions into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"not an exact rational: {value!r}")


def format_fraction(value):
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def rank(rows):
    """Rank of a rational matrix given as a list of rows."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, len(m)):
            if m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def nullspace(rows, ncols=None):
    """Basis of the right nullspace {v : A v = 0} of a rational matrix."""
    m = [[Fraction(x) for x in row] for row in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(v)
    return basis


def bareiss_det(matrix):
    """Determinant of an integer matrix by fraction-free Bareiss elimination."""
    m = [list(row) for row in matrix]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        rowk = m[k]
        for i in range(k + 1, n):
            rowi = m[i]
            a = rowi[k]
            for j in range(k + 1, n):
                rowi[j] = (pivot * rowi[j] - a * rowk[j]) // prev
            rowi[k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def common_denominator(values):
    d = 1
    for v in values:
        d = lcm(d, Fraction(v).denominator)
    return d


def scale_to_integers(matrix, extra=()):
    """Return (D, D*matrix) with D the lcm of all denominators (incl. ``extra``)."""
    flat = [x for row in matrix for x in row]
    d = common_denominator(list(flat) + list(extra))
    return d, [[int(Fraction(x) * d) for x in row] for row in matrix]


def interpolate(xs, ys):
    """Coefficients of the unique polynomial of degree < len(xs) through the points."""
    n = len(xs)
    coef = [Fraction(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    # expand Newton form
    poly = [Fraction(0)]
    for i in range(n - 1, -1, -1):
        poly = poly_mul(poly, [Fraction(-xs[i]), Fraction(1)])
        poly[0] += coef[i]
    return poly_trim(poly)


def poly_trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def poly_mul(p, q):
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def poly_from_roots(roots):
    """Monic polynomial prod (x - r) over the given roots (with repetition)."""
    p = [Fraction(1)]
    for r in roots:
        p = poly_mul(p, [-Fraction(r), Fraction(1)])
    return p


def charpoly(matrix):
    """Characteristic polynomial det(xI - A) of a rational matrix.

    The matrix is scaled to integers (A = M / D); det(yI - M) is evaluated
    fraction-free with Bareiss at n + 1 integer points and interpolated, then
    rescaled by y = D x.  Returned monic, lowest coefficient first.
    """
    n = len(matrix)
    if n == 0:
        return [Fraction(1)]
    d, m = scale_to_integers(matrix)
    xs = list(range(n + 1))
    ys = []
    for y in xs:
        shifted = [[(y if i == j else 0) - m[i][j] for j in range(n)] for i in range(n)]
        ys.append(bareiss_det(shifted))
    q = interpolate(xs, ys)
    q += [Fraction(0)] * (n + 1 - len(q))
    return [q[k] * Fraction(d) ** k / Fraction(d) ** n for k in range(n + 1)]


def matmul(a, b):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def identity(n, one=1):
    return [[one if i == j else 0 * one for j in range(n)] for i in range(n)]


def trace(a):
    return sum(a[i][i] for i in range(len(a)))


def format_poly(p, var="x"):
    terms = []
    for k in range(len(p) - 1, -1, -1):
        c = p[k]
        if c == 0:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if mono and c == 1:
            terms.append(mono)
        elif mono and c == -1:
            terms.append(f"-{mono}")
        else:
            terms.append(f"{format_fraction(c)}{'*' + mono if mono else ''}")
    return " + ".join(terms).replace("+ -", "- ") or "0"
