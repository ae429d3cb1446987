"""Exact arithmetic in the imaginary quadratic field Q(sqrt(-m)) and its ring of integers.

Elements are written a + b*omega in the integral basis {1, omega}, where
omega = sqrt(-m) for m = 1, 2 mod 4 and omega = (1 + sqrt(-m))/2 for
m = 3 mod 4.  All coordinates are exact rationals (gmpy2.mpq); no floating
point is used anywhere.
"""

from gmpy2 import mpq

QQ = mpq


def _is_squarefree(m):
    if m % 4 == 0:
        return False
    d = 3
    while d * d <= m:
        if m % (d * d) == 0:
            return False
        d += 2
    return True


class QuadraticField:
    """The field Q(sqrt(-m)) together with its ring of integers Z + Z*omega."""

    __slots__ = ("m", "omega_trace", "omega_norm", "discriminant")

    def __init__(self, m, omega_trace, omega_norm):
        self.m = m
        self.omega_trace = omega_trace
        self.omega_norm = omega_norm
        # disc = t^2 - 4n for x^2 - t x + n, the minimal polynomial of omega
        self.discriminant = omega_trace * omega_trace - 4 * omega_norm

    def norm(self, a, b):
        # N(a + b*omega) = a^2 + t*a*b + n*b^2
        return a * a + self.omega_trace * a * b + self.omega_norm * b * b

    def trace(self, a, b):
        return 2 * a + self.omega_trace * b

    def conj(self, a, b):
        # conj(a + b*omega) = (a + t*b) - b*omega
        return (a + self.omega_trace * b, -b)

    def mul(self, x, y):
        # (a + b*omega)(c + d*omega) with omega^2 = t*omega - n
        a, b = x
        c, d = y
        bd = b * d
        return (a * c - self.omega_norm * bd, a * d + b * c + self.omega_trace * bd)

    def bilinear(self, x, y):
        # B(x, y) = (N(x+y) - N(x) - N(y))/2 = Re(x * conj(y)) in Euclidean terms
        a, b = x
        c, d = y
        t, n = self.omega_trace, self.omega_norm
        return a * c + n * b * d + QQ(t, 2) * (a * d + b * c)

    def element(self, a, b=0):
        return FieldElement(QQ(a), QQ(b), self)

    def integer(self, a, b=0):
        return AlgebraicInteger(int(a), int(b), self)

    def omega(self):
        return self.integer(0, 1)

    def __eq__(self, other):
        return isinstance(other, QuadraticField) and self.m == other.m

    def __hash__(self):
        return hash(("QuadraticField", self.m))

    def __repr__(self):
        return f"QuadraticField(-{self.m})"


def make_field(m):
    """Build Q(sqrt(-m)) for squarefree m >= 1."""
    if not isinstance(m, int) or m < 1:
        raise ValueError(f"m must be a positive integer, got {m!r}")
    if not _is_squarefree(m):
        raise ValueError(f"m must be squarefree, got {m}")
    if m % 4 == 3:
        return QuadraticField(m, 1, (1 + m) // 4)
    return QuadraticField(m, 0, m)


class FieldElement:
    """An element a + b*omega of Q(sqrt(-m)), with rational a, b."""

    __slots__ = ("a", "b", "field")

    def __init__(self, a, b, field):
        self.a = QQ(a)
        self.b = QQ(b)
        self.field = field

    def coords(self):
        return (self.a, self.b)

    def norm(self):
        return self.field.norm(self.a, self.b)

    def trace(self):
        return self.field.trace(self.a, self.b)

    def conj(self):
        ca, cb = self.field.conj(self.a, self.b)
        return FieldElement(ca, cb, self.field)

    def is_zero(self):
        return self.a == 0 and self.b == 0

    def __add__(self, other):
        other = self._coerce(other)
        return FieldElement(self.a + other.a, self.b + other.b, self.field)

    def __sub__(self, other):
        other = self._coerce(other)
        return FieldElement(self.a - other.a, self.b - other.b, self.field)

    def __neg__(self):
        return FieldElement(-self.a, -self.b, self.field)

    def __mul__(self, other):
        other = self._coerce(other)
        a, b = self.field.mul((self.a, self.b), (other.a, other.b))
        return FieldElement(a, b, self.field)

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        ca, cb = self.field.conj(self.a, self.b)
        return FieldElement(ca / n, cb / n, self.field)

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            return other
        if isinstance(other, AlgebraicInteger):
            return FieldElement(other.a, other.b, self.field)
        return FieldElement(QQ(other), QQ(0), self.field)

    __radd__ = __add__
    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, (FieldElement, AlgebraicInteger)):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b, self.field.m))

    def __repr__(self):
        return f"({self.a} + {self.b}*w)"


class AlgebraicInteger:
    """An element a + b*omega of the ring of integers, with integer a, b."""

    __slots__ = ("a", "b", "field")

    def __init__(self, a, b, field):
        self.a = int(a)
        self.b = int(b)
        self.field = field

    def coords(self):
        return (self.a, self.b)

    def norm(self):
        return self.field.norm(self.a, self.b)

    def trace(self):
        return self.field.trace(self.a, self.b)

    def conj(self):
        ca, cb = self.field.conj(self.a, self.b)
        return AlgebraicInteger(ca, cb, self.field)

    def is_zero(self):
        return self.a == 0 and self.b == 0

    def to_field_element(self):
        return FieldElement(QQ(self.a), QQ(self.b), self.field)

    def __add__(self, other):
        return AlgebraicInteger(self.a + other.a, self.b + other.b, self.field)

    def __sub__(self, other):
        return AlgebraicInteger(self.a - other.a, self.b - other.b, self.field)

    def __neg__(self):
        return AlgebraicInteger(-self.a, -self.b, self.field)

    def __mul__(self, other):
        a, b = self.field.mul((self.a, self.b), (other.a, other.b))
        return AlgebraicInteger(a, b, self.field)

    def __eq__(self, other):
        if not isinstance(other, (FieldElement, AlgebraicInteger)):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b, self.field.m))

    def __repr__(self):
        return f"({self.a} + {self.b}*w)"


def units(field):
    """Unit group of the ring of integers: {1,-1} except m = 1 (order 4) and m = 3 (order 6)."""
    one = field.integer(1, 0)
    if field.m == 1:
        w = field.omega()
        return [one, -one, w, -w]
    if field.m == 3:
        # omega = (1+sqrt(-3))/2 is a primitive 6th root of unity
        w = field.omega()
        w2 = w * w
        return [one, -one, w, -w, w2, -w2]
    return [one, -one]


# ---------------------------------------------------------------------------
# Binary quadratic forms and the class group
# ---------------------------------------------------------------------------

def reduce_form(a, b, c):
    """Gauss-reduce a positive definite integral form ax^2 + bxy + cy^2."""
    while True:
        if c < a or (c == a and b < 0):
            a, b, c = c, -b, a
            continue
        if b > a or b <= -a:
            # translate b into (-a, a]
            r = (a - b) // (2 * a)
            b2 = b + 2 * r * a
            c = a * r * r + b * r + c
            b = b2
            continue
        if a == c and b < 0:
            b = -b
            continue
        return (a, b, c)


def reduced_forms(disc):
    """All reduced positive definite forms of the given negative discriminant."""
    forms = []
    a = 1
    while 3 * a * a <= -disc:
        for b in range(-a + 1, a + 1):
            num = b * b - disc
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if a == c and b < 0:
                continue
            forms.append((a, b, c))
        a += 1
    return sorted(forms)


def principal_form(disc):
    k = disc & 1
    return (1, k, (k * k - disc) // 4)


def ideal_hnf(gens, field):
    """Hermite basis [[d, 0], [e, f]] of the Z-lattice O*g1 + O*g2 + ... in {1, omega} coords.

    Rows are (x, y) meaning x + y*omega; returns rows ((d, 0), (e, f)) with
    0 <= e < d if f != 0, or None for the zero lattice.
    """
    rows = []
    w = (0, 1)
    for g in gens:
        xy = g.coords() if hasattr(g, "coords") else g
        rows.append((int(xy[0]), int(xy[1])))
        gw = field.mul(xy, w)
        rows.append((int(gw[0]), int(gw[1])))
    rows = [r for r in rows if r != (0, 0)]
    if not rows:
        return None
    # column-echelon over Z on 2 columns (x, y) with y treated as the leading one
    f = 0
    e = 0
    d = 0
    for (x, y) in rows:
        # reduce the y-entry against the current (e, f) row
        while y:
            if f == 0:
                e, f = x, y
                x, y = 0, 0
            else:
                q = y // f
                x, y = x - q * e, y - q * f
                if y:
                    e, f, x, y = x, y, e, f
        d = _gcd_int(d, x)
    if f < 0:
        e, f = -e, -f
    if d < 0:
        d = -d
    if d and f:
        e %= d
    return ((d, 0), (e, f))


def _gcd_int(a, b):
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


def ideal_norm(gens, field):
    """Index [O : I] of the ideal generated by gens; 0 for the zero ideal."""
    h = ideal_hnf(gens, field)
    if h is None:
        return 0
    return h[0][0] * h[1][1]


def ideal_form(gens, field):
    """Reduced quadratic form of the class of the ideal generated by gens."""
    h = ideal_hnf(gens, field)
    if h is None:
        raise ValueError("zero ideal has no class")
    g1, g2 = h
    nI = g1[0] * g2[1]
    # Q(x, y) = N(x*g1 + y*g2) / N(I), an integral form of discriminant disc(O)
    a = field.norm(*g1)
    c = field.norm(*g2)
    b = 2 * field.bilinear(g1, g2)
    qa, qb, qc = a // nI, int(b) // nI, c // nI
    assert qb * qb - 4 * qa * qc == field.discriminant
    return reduce_form(qa, qb, qc)


def form_to_ideal_gens(form, field):
    """Generator pair (a, (-b - s)/2 + omega-part) of an ideal in the form's class."""
    a, b, c = form
    # ideal [a, (-b + sqrt(disc))/2]; sqrt(disc) = 2*omega - t
    t = field.omega_trace
    x = (-b - t) // 2 if (b + t) % 2 == 0 else None
    if x is None:
        raise ValueError("form parity inconsistent with field")
    return (field.integer(a, 0), field.integer(x, 1))


class IdealClassDatum:
    """Class number and one two-generator ideal per ideal class."""

    __slots__ = ("class_number", "representatives")

    def __init__(self, class_number, representatives):
        self.class_number = class_number
        self.representatives = representatives

    def __repr__(self):
        return f"IdealClassDatum(h={self.class_number})"


def class_group(field):
    forms = reduced_forms(field.discriminant)
    reps = []
    for form in forms:
        if form == principal_form(field.discriminant):
            reps.insert(0, (field.integer(1, 0), field.integer(0, 0)))
        else:
            reps.append(form_to_ideal_gens(form, field))
    return IdealClassDatum(len(forms), reps)


def is_principal(lam, mu):
    """Whether the ideal (lam, mu) is principal; inputs must not both be zero."""
    if lam.is_zero() and mu.is_zero():
        raise ValueError("is_principal requires (lam, mu) != (0, 0)")
    field = lam.field
    form = ideal_form([lam, mu], field)
    return form == principal_form(field.discriminant)


def ideal_class_key(lam, mu):
    """Hashable invariant of the ideal class of (lam, mu): its reduced form."""
    return ideal_form([lam, mu], lam.field)


def min_nonzero_norm(gens, field):
    """Minimal norm of a nonzero element of the ideal generated by gens."""
    h = ideal_hnf(gens, field)
    if h is None:
        raise ValueError("zero ideal")
    (d, _), (e, f) = h
    t, n = field.omega_trace, field.omega_norm
    best = field.norm(d, 0)
    # N(x*d + y*e, y*f) >= (n - t^2/4) * (y*f)^2 bounds the y range
    ycoef = QQ(4 * n - t * t, 4)
    y = 1
    while ycoef * (y * f) ** 2 < best:
        # the x minimizing N has x*d + y*e close to -t*y*f/2
        x0num = -t * y * f - 2 * y * e
        x0 = x0num // (2 * d)
        for x in (x0 - 1, x0, x0 + 1, x0 + 2):
            val = field.norm(x * d + y * e, y * f)
            if val and val < best:
                best = val
        y += 1
    return best
