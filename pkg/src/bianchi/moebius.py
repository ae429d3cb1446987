"""Matrices over the imaginary quadratic integers acting on upper half-space.

Points are kept exact: z in the field (coordinates over {1, omega}) and the
squared height hsq in Q.  The action formula, for gamma = (a b; c d):

    D    = N(c*z - d) + hsq * N(c)
    hsq' = N(det) * hsq / D^2
    z'   = (conj(d - c*z) * (a*z - b) - hsq * conj(c) * a) / D

On the boundary sphere this degenerates to z -> (a*z - b) / (-c*z + d).
"""

from enum import Enum

from .field import QQ


class ElementClass(Enum):
    IDENTITY = "identity"
    PARABOLIC = "parabolic"
    ELLIPTIC = "elliptic"
    HYPERBOLIC = "hyperbolic"
    LOXODROMIC = "loxodromic"


INF = "inf"


class UHSPoint:
    """A point (z, hsq) of upper half-space; hsq = 0 with z in K + {inf} marks a cusp."""

    __slots__ = ("z", "hsq")

    def __init__(self, z, hsq):
        self.z = z  # (a, b) rational coords over {1, omega}, or INF
        self.hsq = QQ(hsq)
        if self.hsq < 0:
            raise ValueError("hsq must be >= 0")

    def is_interior(self):
        return self.hsq > 0

    def is_cusp(self):
        return self.hsq == 0

    def __eq__(self, other):
        return self.z == other.z and self.hsq == other.hsq

    def __hash__(self):
        return hash((self.z, self.hsq))

    def __repr__(self):
        return f"UHSPoint({self.z}, hsq={self.hsq})"


class GroupElement:
    """A PSL2 element over the ring of integers, stored as integer coordinate pairs."""

    __slots__ = ("a", "b", "c", "d", "field")

    def __init__(self, a, b, c, d, field):
        self.a = (int(a[0]), int(a[1]))
        self.b = (int(b[0]), int(b[1]))
        self.c = (int(c[0]), int(c[1]))
        self.d = (int(d[0]), int(d[1]))
        self.field = field

    @classmethod
    def from_ints(cls, field, a, b, c, d):
        def pair(x):
            return x if isinstance(x, tuple) else (x, 0)
        return cls(pair(a), pair(b), pair(c), pair(d), field)

    def det(self):
        f = self.field
        ad = f.mul(self.a, self.d)
        bc = f.mul(self.b, self.c)
        return (ad[0] - bc[0], ad[1] - bc[1])

    def trace(self):
        return (self.a[0] + self.d[0], self.a[1] + self.d[1])

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def __mul__(self, other):
        f = self.field
        a1, b1, c1, d1 = self.entries()
        a2, b2, c2, d2 = other.entries()
        def add(x, y):
            return (x[0] + y[0], x[1] + y[1])
        return GroupElement(
            add(f.mul(a1, a2), f.mul(b1, c2)),
            add(f.mul(a1, b2), f.mul(b1, d2)),
            add(f.mul(c1, a2), f.mul(d1, c2)),
            add(f.mul(c1, b2), f.mul(d1, d2)),
            f,
        )

    def inverse(self):
        # valid for det = 1 (all group elements here)
        a, b, c, d = self.entries()
        return GroupElement(d, (-b[0], -b[1]), (-c[0], -c[1]), a, self.field)

    def normalized(self):
        """The sign representative whose first nonzero entry is positive (a-then-b lex)."""
        for x in (self.a, self.b, self.c, self.d):
            if x != (0, 0):
                if x[0] < 0 or (x[0] == 0 and x[1] < 0):
                    return GroupElement(
                        (-self.a[0], -self.a[1]), (-self.b[0], -self.b[1]),
                        (-self.c[0], -self.c[1]), (-self.d[0], -self.d[1]), self.field)
                return self
        return self

    def key(self):
        g = self.normalized()
        return (g.a, g.b, g.c, g.d)

    def is_identity(self):
        return self.key() == ((1, 0), (0, 0), (0, 0), (1, 0))

    def __eq__(self, other):
        return isinstance(other, GroupElement) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"[{self.a} {self.b}; {self.c} {self.d}]"


def identity(field):
    return GroupElement((1, 0), (0, 0), (0, 0), (1, 0), field)


def translation(field, lam):
    """The element (1, -lam; 0, 1), acting on the boundary as z -> z + lam."""
    xy = lam.coords() if hasattr(lam, "coords") else lam
    return GroupElement((1, 0), (-xy[0], -xy[1]), (0, 0), (1, 0), field)


def _qsub(x, y):
    return (QQ(x[0]) - y[0], QQ(x[1]) - y[1])


def act(gamma, p):
    """Apply gamma to an upper half-space point or cusp."""
    f = gamma.field
    if p.is_cusp():
        return UHSPoint(act_cusp(gamma, p.z), 0)
    a, b, c, d = gamma.entries()
    za, zb = p.z
    s = p.hsq
    cz = f.mul(c, (za, zb))
    czd = (cz[0] - d[0], cz[1] - d[1])
    D = f.norm(*czd) + s * f.norm(*c)
    det_n = f.norm(*gamma.det())
    new_s = det_n * s / (D * D)
    # conj(d - cz) * (a z - b) - s * conj(c) * a, all divided by D
    dcz = (-czd[0], -czd[1])
    az = f.mul(a, (za, zb))
    azb = (az[0] - b[0], az[1] - b[1])
    term1 = f.mul(f.conj(*dcz), azb)
    term2 = f.mul(f.conj(*c), a)
    zna = (term1[0] - s * term2[0]) / D
    znb = (term1[1] - s * term2[1]) / D
    return UHSPoint((zna, znb), new_s)


def act_cusp(gamma, z):
    """Boundary action z -> (a*z - b) / (-c*z + d) on K + {inf}."""
    f = gamma.field
    a, b, c, d = gamma.entries()
    if z == INF:
        num = (QQ(a[0]), QQ(a[1]))
        den = (QQ(-c[0]), QQ(-c[1]))
    else:
        az = f.mul(a, z)
        num = (az[0] - b[0], az[1] - b[1])
        cz = f.mul(c, z)
        den = (d[0] - cz[0], d[1] - cz[1])
    if den == (0, 0):
        return INF
    dn = f.norm(*den)
    prod = f.mul(num, f.conj(*den))
    return (prod[0] / dn, prod[1] / dn)


def classify(gamma):
    """Klein classification; identity (+-1) is reported as IDENTITY."""
    if gamma.is_identity():
        return ElementClass.IDENTITY
    tr = gamma.trace()
    if tr[1] != 0:
        # omega is never real, so the trace is real iff its omega-coordinate vanishes
        return ElementClass.LOXODROMIC
    t = abs(tr[0])
    if t == 2:
        return ElementClass.PARABOLIC
    if t > 2:
        return ElementClass.HYPERBOLIC
    return ElementClass.ELLIPTIC


def elliptic_order(gamma):
    """Order in PSL2 of an elliptic element: 2 for trace 0, 3 for trace +-1."""
    if classify(gamma) is not ElementClass.ELLIPTIC:
        raise ValueError("elliptic_order requires an elliptic element")
    t = gamma.trace()[0]
    if t == 0:
        return 2
    if abs(t) == 1:
        return 3
    raise ValueError(f"impossible elliptic trace {t} over an imaginary quadratic ring")


def fixed_point_in_h(gamma):
    """An interior fixed point of an elliptic element, with exact coordinates.

    For c != 0 this is the apex of the fixed geodesic: center (d-a)/(2c),
    squared height (4 - tr^2) / (4 N(c)).  For c = 0 the fixed vertical line
    sits over -b/(d-a); the point at height 1 is returned.
    """
    if classify(gamma) is not ElementClass.ELLIPTIC:
        raise ValueError("fixed_point_in_h requires an elliptic element")
    f = gamma.field
    a, b, c, d = gamma.entries()
    if c == (0, 0):
        da = (d[0] - a[0], d[1] - a[1])
        n = f.norm(*da)
        prod = f.mul((-b[0], -b[1]), f.conj(*da))
        return UHSPoint((prod[0] / n, prod[1] / n), QQ(1))
    da = (d[0] - a[0], d[1] - a[1])
    nc = f.norm(*c)
    prod = f.mul(da, f.conj(*c))
    center = (prod[0] / (2 * nc), prod[1] / (2 * nc))
    tr = gamma.trace()[0]
    hsq = QQ(4 - tr * tr, 4 * nc)
    return UHSPoint(center, hsq)
