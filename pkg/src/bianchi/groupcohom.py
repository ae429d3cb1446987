"""Homology of the finite vertex stabiliser types with Z, Z/2 and Z/3 coefficients.

The tables are hard-coded lookups (period 12 covers every type), together
with the induced-map rules for inclusions of Z/2 and Z/3 into the types.
"""

TYPES = ("Trivial", "Z2", "Z3", "D2", "S3", "A4", "Zsquare")

GROUP_ORDER = {"Trivial": 1, "Z2": 2, "Z3": 3, "D2": 4, "S3": 6, "A4": 12}


class AbelianGroupValue:
    """A finitely generated abelian group: free rank plus primary-part ranks."""

    __slots__ = ("free_rank", "two_rank", "three_rank")

    def __init__(self, free_rank=0, two_rank=0, three_rank=0):
        self.free_rank = free_rank
        self.two_rank = two_rank      # number of Z/2 summands (all 2-torsion here is elementary)
        self.three_rank = three_rank  # number of Z/3 summands

    def invariant_factors(self):
        """Canonical d_1 | d_2 | ... | d_k list."""
        out = []
        two, three = self.two_rank, self.three_rank
        while two or three:
            d = 1
            if two:
                d *= 2
                two -= 1
            if three:
                d *= 3
                three -= 1
            out.append(d)
        return sorted(out)

    def dim_mod(self, ell):
        if ell == 2:
            return self.free_rank + self.two_rank
        if ell == 3:
            return self.free_rank + self.three_rank
        return self.free_rank

    def primary_rank(self, ell):
        return self.two_rank if ell == 2 else self.three_rank if ell == 3 else 0

    def is_zero(self):
        return self.free_rank == 0 and self.two_rank == 0 and self.three_rank == 0

    def __eq__(self, other):
        return (self.free_rank, self.two_rank, self.three_rank) == \
               (other.free_rank, other.two_rank, other.three_rank)

    def __repr__(self):
        parts = []
        if self.free_rank:
            parts.append(f"Z^{self.free_rank}" if self.free_rank > 1 else "Z")
        f = self.invariant_factors()
        parts.extend(f"Z/{d}" for d in f)
        return " + ".join(parts) if parts else "0"


def _zn_homology(n, coeff, q):
    ell = 2 if n == 2 else 3
    if coeff == "Z":
        if q == 0:
            return AbelianGroupValue(free_rank=1)
        if q % 2 == 1:
            return AbelianGroupValue(two_rank=1) if ell == 2 else AbelianGroupValue(three_rank=1)
        return AbelianGroupValue()
    cl = 2 if coeff == "Z/2" else 3
    if cl == ell:
        return AbelianGroupValue(two_rank=1) if ell == 2 else AbelianGroupValue(three_rank=1)
    if q == 0:
        return AbelianGroupValue(two_rank=1) if cl == 2 else AbelianGroupValue(three_rank=1)
    return AbelianGroupValue()


def _d2_homology(coeff, q):
    if coeff == "Z":
        if q == 0:
            return AbelianGroupValue(free_rank=1)
        if q % 2 == 1:
            return AbelianGroupValue(two_rank=(q + 3) // 2)
        return AbelianGroupValue(two_rank=q // 2)
    if coeff == "Z/2":
        return AbelianGroupValue(two_rank=q + 1)
    return AbelianGroupValue(three_rank=1) if q == 0 else AbelianGroupValue()


def _s3_homology(coeff, q):
    if coeff == "Z":
        if q == 0:
            return AbelianGroupValue(free_rank=1)
        r = q % 4
        if r == 1:
            return AbelianGroupValue(two_rank=1)
        if r == 3:
            return AbelianGroupValue(two_rank=1, three_rank=1)
        return AbelianGroupValue()
    if coeff == "Z/2":
        return AbelianGroupValue(two_rank=1)
    # Z/3 coefficients
    if q == 0 or q % 4 in (0, 3):
        return AbelianGroupValue(three_rank=1)
    return AbelianGroupValue()


def _a4_homology(coeff, q):
    if coeff == "Z":
        if q == 0:
            return AbelianGroupValue(free_rank=1)
        k, r = divmod(q - 1, 6)
        # r = 0..5 corresponds to q = 6k+1 .. 6k+6
        two = (k, k + 1, k + 1, k, k + 2, k + 1)[r]
        three = (1, 0, 1, 0, 1, 0)[r]
        return AbelianGroupValue(two_rank=two, three_rank=three)
    if coeff == "Z/2":
        if q == 0:
            return AbelianGroupValue(two_rank=1)
        k, r = divmod(q - 1, 6)
        dim = (2 * k, 2 * k + 1, 2 * k + 2, 2 * k + 1, 2 * k + 2, 2 * k + 3)[r]
        return AbelianGroupValue(two_rank=dim)
    return AbelianGroupValue(three_rank=1)


def _zsquare_homology(coeff, q):
    dims = {0: 1, 1: 2, 2: 1}
    d = dims.get(q, 0)
    if coeff == "Z":
        return AbelianGroupValue(free_rank=d)
    if coeff == "Z/2":
        return AbelianGroupValue(two_rank=d)
    return AbelianGroupValue(three_rank=d)


def homology(stab_type, coeff, q):
    """H_q of a stabiliser type with coefficients 'Z', 'Z/2' or 'Z/3'."""
    if q < 0:
        raise ValueError("q must be >= 0")
    if coeff not in ("Z", "Z/2", "Z/3"):
        raise ValueError(f"unsupported coefficients {coeff!r}")
    if stab_type == "Trivial":
        if q > 0:
            return AbelianGroupValue()
        if coeff == "Z":
            return AbelianGroupValue(free_rank=1)
        return AbelianGroupValue(two_rank=1) if coeff == "Z/2" else AbelianGroupValue(three_rank=1)
    if stab_type == "Z2":
        return _zn_homology(2, coeff, q)
    if stab_type == "Z3":
        return _zn_homology(3, coeff, q)
    if stab_type == "D2":
        return _d2_homology(coeff, q)
    if stab_type == "S3":
        return _s3_homology(coeff, q)
    if stab_type == "A4":
        return _a4_homology(coeff, q)
    if stab_type == "Zsquare":
        return _zsquare_homology(coeff, q)
    raise ValueError(f"unknown stabiliser type {stab_type!r}")


def induced_rank(source_ell, target_type, coeff, q):
    """'injective' or 'zero' for the map H_q(Z/ell) -> H_q(target) of an inclusion.

    Inclusions into a target whose homology vanishes count as 'zero'.
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    src = homology("Z2" if source_ell == 2 else "Z3", coeff, q)
    tgt = homology(target_type, coeff, q)
    if src.is_zero() or tgt.is_zero():
        return "zero"
    if target_type in ("Z2", "Z3"):
        return "injective"
    if source_ell == 2 and target_type in ("S3", "D2"):
        return "injective"
    if source_ell == 3 and target_type == "S3":
        return "injective" if q % 4 in (0, 3) else "zero"
    if source_ell == 3 and target_type == "A4":
        return "injective"
    if source_ell == 2 and target_type == "A4":
        return "zero" if q == 1 else "injective"
    return "zero"


# ---------------------------------------------------------------------------
# Brute-force checks used by the test suite
# ---------------------------------------------------------------------------

def d2_conjugation_action(q):
    """Matrix over F_2 of the 3-cycle acting on H_q(D2; Z/2) = F_2^(q+1).

    The cycle permutes the three involutions, hence the characters
    x -> y -> x + y; the monomial basis of degree q transforms accordingly
    (homology carries the transpose, irrelevant for order and exactness).
    """
    dim = q + 1
    mat = [[0] * dim for _ in range(dim)]
    for i in range(dim):
        # x^(q-i) y^i  ->  y^(q-i) (x+y)^i = sum_j C(i,j) x^j y^(q-j)
        from math import comb
        for j in range(i + 1):
            coef = comb(i, j) % 2
            if coef:
                # x^j y^(q-j) is basis index q - j
                mat[q - j][i] ^= 1
    return mat


def _matmul2(a, b):
    n = len(a)
    return [[sum(a[i][k] & b[k][j] for k in range(n)) % 2 for j in range(len(b[0]))]
            for i in range(n)]


def _rank2(mat):
    from .linalg import rank_mod
    return rank_mod(mat, 2) if mat and mat[0] else 0


def f3_tensor_exactness(action, positive_degrees=4):
    """Exactness in positive degrees of the period-2 complex (t-1, 1+t+t^2) on an F_2 module.

    Returns True when image(1+t+t^2) = ker(t-1) and image(t-1) = ker(1+t+t^2).
    """
    n = len(action)
    ident = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    t1 = [[(action[i][j] - ident[i][j]) % 2 for j in range(n)] for i in range(n)]
    t2 = _matmul2(action, action)
    norm = [[(ident[i][j] + action[i][j] + t2[i][j]) % 2 for j in range(n)] for i in range(n)]
    rk_t1, rk_n = _rank2(t1), _rank2(norm)
    # exact iff rank(t-1) + rank(norm) = n, both ways
    return rk_t1 + rk_n == n


def z3_homology_of_module(action, p):
    """dim_F2 H_p(Z/3; M) for the F_2[Z/3]-module M given by an order-3 matrix."""
    n = len(action)
    if p == 0:
        # coinvariants M / (t-1)M
        ident = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        t1 = [[(action[i][j] - ident[i][j]) % 2 for j in range(n)] for i in range(n)]
        return n - _rank2(t1)
    ident = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    t1 = [[(action[i][j] - ident[i][j]) % 2 for j in range(n)] for i in range(n)]
    t2 = _matmul2(action, action)
    norm = [[(ident[i][j] + action[i][j] + t2[i][j]) % 2 for j in range(n)] for i in range(n)]
    rk_t1, rk_n = _rank2(t1), _rank2(norm)
    if p % 2 == 1:
        # ker(t-1) / im(norm)
        return (n - rk_t1) - rk_n
    return (n - rk_n) - rk_t1
