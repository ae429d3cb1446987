"""Integer polynomials and exact rational generating functions in one variable t.

Polynomials are tuples of int coefficients, lowest degree first, with no
trailing zeros.  A PoincareSeries is a reduced fraction num/den of integer
polynomials whose power-series expansion records homology dimensions.
"""

from math import gcd


def poly_trim(coeffs):
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def poly_add(p, q):
    n = max(len(p), len(q))
    return poly_trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def poly_neg(p):
    return tuple(-c for c in p)


def poly_sub(p, q):
    return poly_add(p, poly_neg(q))


def poly_mul(p, q):
    if not p or not q:
        return ()
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return poly_trim(out)


def poly_divmod_exact(p, q):
    """Quotient of p by q when q divides p over Q; raises otherwise."""
    from fractions import Fraction
    rem = [Fraction(c) for c in p]
    out = [Fraction(0)] * (max(len(p) - len(q) + 1, 0))
    lead = Fraction(q[-1])
    for i in range(len(rem) - 1, len(q) - 2, -1):
        if rem[i]:
            f = rem[i] / lead
            out[i - len(q) + 1] = f
            for j, b in enumerate(q):
                rem[i - len(q) + 1 + j] -= f * b
    if any(rem):
        raise ValueError("not an exact polynomial division")
    if any(f.denominator != 1 for f in out):
        raise ValueError("quotient is not integral")
    return poly_trim([int(f) for f in out])


def poly_content(p):
    g = 0
    for c in p:
        g = gcd(g, abs(c))
    return g


def poly_gcd(p, q):
    """Primitive gcd over Z (via rational remainder sequence)."""
    from fractions import Fraction
    a = [Fraction(c) for c in p]
    b = [Fraction(c) for c in q]

    def trim(v):
        while v and v[-1] == 0:
            v.pop()
        return v

    a, b = trim(a), trim(b)
    while b:
        # a mod b
        while len(a) >= len(b):
            f = a[-1] / b[-1]
            k = len(a) - len(b)
            for j in range(len(b)):
                a[k + j] -= f * b[j]
            a = trim(a)
            if not a:
                break
        a, b = b, a
    if not a:
        return (1,)
    # clear denominators, make primitive with positive lead
    den = 1
    for f in a:
        den = den * f.denominator // gcd(den, f.denominator)
    ints = [int(f * den) for f in a]
    cont = poly_content(ints) or 1
    ints = [c // cont for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return poly_trim(ints)


def series_expand(num, den, nterms):
    """First nterms coefficients of num/den as a power series (den[0] must be +-1)."""
    if not den or den[0] == 0:
        raise ValueError("denominator must have a nonzero constant term")
    d0 = den[0]
    out = []
    rem = list(num) + [0] * max(0, nterms - len(num))
    for k in range(nterms):
        cur = rem[k] if k < len(rem) else 0
        if cur % d0:
            raise ValueError("series is not integral")
        c = cur // d0
        out.append(c)
        for j in range(1, len(den)):
            if k + j < len(rem):
                rem[k + j] -= c * den[j]
            elif c and den[j]:
                rem.extend([0] * (k + j + 1 - len(rem)))
                rem[k + j] -= c * den[j]
    return out


class PoincareSeries:
    """A rational function num(t)/den(t) with integer coefficients, kept reduced."""

    __slots__ = ("num", "den")

    def __init__(self, num, den):
        num = poly_trim(num)
        den = poly_trim(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            self.num = ()
            self.den = (1,)
            return
        g = poly_gcd(num, den)
        if len(g) > 1:
            num = poly_divmod_exact(num, g)
            den = poly_divmod_exact(den, g)
        cn, cd = poly_content(num) or 1, poly_content(den) or 1
        from math import gcd as _g
        c = _g(cn, cd)
        num = tuple(x // c for x in num)
        den = tuple(x // c for x in den)
        if den[-1] < 0:
            num = poly_neg(num)
            den = poly_neg(den)
        self.num = num
        self.den = den

    @classmethod
    def zero(cls):
        return cls((), (1,))

    def __add__(self, other):
        return PoincareSeries(
            poly_add(poly_mul(self.num, other.den), poly_mul(other.num, self.den)),
            poly_mul(self.den, other.den))

    def __mul__(self, k):
        if isinstance(k, int):
            return PoincareSeries(tuple(k * c for c in self.num), self.den)
        return PoincareSeries(poly_mul(self.num, k.num), poly_mul(self.den, k.den))

    __rmul__ = __mul__

    def __eq__(self, other):
        # cross-multiplied identity, independent of representation
        return poly_mul(self.num, other.den) == poly_mul(other.num, self.den)

    def __hash__(self):
        return hash((self.num, self.den))

    def coefficients(self, nterms):
        return series_expand(list(self.num), list(self.den), nterms)

    def paper_form(self):
        """Rendering with the numerator negated against a (t-1)-style denominator."""
        return f"-({_poly_str(poly_neg(self.num))}) / ({_poly_str(self.den)})"

    def __repr__(self):
        return f"({_poly_str(self.num)}) / ({_poly_str(self.den)})"


def _poly_str(p):
    if not p:
        return "0"
    parts = []
    for i, c in enumerate(p):
        if not c:
            continue
        if i == 0:
            parts.append(str(c))
        elif i == 1:
            parts.append(f"{c}*t" if c not in (1, -1) else ("t" if c == 1 else "-t"))
        else:
            parts.append(f"{c}*t^{i}" if c not in (1, -1) else (f"t^{i}" if c == 1 else f"-t^{i}"))
    return " + ".join(parts).replace("+ -", "- ")


def fit_series(dims, start_q=3, periods=(1, 2, 3, 4, 6, 12)):
    """Exact rational function for a quasi-linear dimension pattern d(q+P) = d(q) + A.

    dims[i] is the dimension at q = start_q + i.  The pattern must hold from
    start_q on, with period P dividing 12 and increment A constant per residue.
    """
    n = len(dims)
    for P in periods:
        if n < 3 * P + 1:
            continue
        incs = {}
        ok = True
        for j in range(P):
            deltas = {dims[i + P] - dims[i] for i in range(j, n - P, P)}
            if len(deltas) != 1:
                ok = False
                break
            incs[j] = deltas.pop()
        if not ok or len(set(incs.values())) != 1:
            continue
        a = incs[0]
        # sum over residues j: sum_k (a k + b_j) t^(start_q + j + P k)
        total = PoincareSeries.zero()
        for j in range(P):
            b = dims[j]
            # t^(q0) * (b + t^P (a - b)) / (1 - t^P)^2
            q0 = start_q + j
            num = [0] * q0 + [b] + [0] * (P - 1) + [a - b]
            one_minus = [1] + [0] * (P - 1) + [-1]
            total = total + PoincareSeries(num, poly_mul(tuple(one_minus), tuple(one_minus)))
        # verify against all provided dims
        if total.coefficients(start_q + n)[start_q:] == list(dims):
            return total
    raise ValueError("no periodic-linear fit for the dimension sequence")
