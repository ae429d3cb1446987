"""The fundamental polyhedron: floor of the hemisphere arrangement over the
translation cell of the cusp at infinity.

Everything is exact.  A hemisphere with apex lambda/mu (unit ideal pair) has
squared radius 1/N(mu); its height over z is h(z) = rsq - N(z - center).
The floor face of a hemisphere is the convex polygon where it dominates all
others, intersected with the fundamental rectangle; faces, edges, vertices
and singular (height zero) points are read off from these polygons.
"""

from gmpy2 import isqrt, mpz

from .field import QQ, ideal_norm, is_principal


class Hemisphere:
    __slots__ = ("lam", "mu", "center", "rsq")

    def __init__(self, lam, mu, center, rsq):
        self.lam = lam          # (int, int)
        self.mu = mu            # (int, int)
        self.center = center    # (mpq, mpq)
        self.rsq = rsq          # mpq

    def height_at(self, field, z):
        dz = (z[0] - self.center[0], z[1] - self.center[1])
        return self.rsq - field.norm(*dz)

    def __repr__(self):
        return f"Hemisphere(center={self.center}, rsq={self.rsq})"


class FundamentalRectangle:
    """Translation cell |Re z| <= 1/2, |omega-coordinate| <= 1/2.

    In the basis {1, omega} this is the sheared box |a + (t/2) b| <= 1/2,
    |b| <= 1/2; it is stable under z -> -z and z -> -conj(z), which is what
    makes the bottom faces of the polyhedron pair wholesale.
    """

    def __init__(self, field, real_range=(QQ(-1, 2), QQ(1, 2)),
                 omega_range=(QQ(-1, 2), QQ(1, 2))):
        self.field = field
        self.real_range = real_range
        self.omega_range = omega_range
        self.half_trace = QQ(field.omega_trace, 2)
        # N(a + b*omega) = u^2 + n' b^2 for u = a + (t/2) b: the diagonal form
        self.nprime = field.omega_norm - self.half_trace * self.half_trace

    def to_diag(self, z):
        return (z[0] + self.half_trace * z[1], z[1])

    def corners(self):
        (u0, u1), (b0, b1) = self.real_range, self.omega_range
        h = self.half_trace
        return [(u0 - h * b0, b0), (u1 - h * b0, b0), (u1 - h * b1, b1), (u0 - h * b1, b1)]

    def contains(self, z):
        u, b = self.to_diag(z)
        return (self.real_range[0] <= u <= self.real_range[1]
                and self.omega_range[0] <= b <= self.omega_range[1])


def _int_range(lo, hi):
    """Integers in the closed rational interval [lo, hi]."""
    lo_i = int(-(-mpz(lo.numerator) // mpz(lo.denominator)))
    hi_i = int(mpz(hi.numerator) // mpz(hi.denominator))
    return range(lo_i, hi_i + 1)


def form_dist_sq_to_rect(field, c, rect):
    """Squared distance, in the norm-form metric, from c to the rectangle.

    In the diagonal coordinates (u, b) the form is u^2 + n' b^2 and the
    rectangle is an axis-aligned box, so clamping per axis is exact.
    """
    cu, cb = rect.to_diag(c)
    du = max(QQ(0), rect.real_range[0] - cu, cu - rect.real_range[1])
    db = max(QQ(0), rect.omega_range[0] - cb, cb - rect.omega_range[1])
    return du * du + rect.nprime * db * db


def _x_interval(c, d, lo, hi):
    """Integer x with lo <= c*x + d <= hi, as a (min, max) pair or None."""
    if c == 0:
        return (None, None) if lo <= d <= hi else None
    lo_v, hi_v = lo - d, hi - d
    if c < 0:
        lo_v, hi_v, c = -hi_v, -lo_v, -c
    xmin = int(-(-mpz(lo_v.numerator) // (mpz(lo_v.denominator) * c)))
    xmax = int(mpz(hi_v.numerator) // (mpz(hi_v.denominator) * c))
    if xmin > xmax:
        return None
    return (xmin, xmax)


def enumerate_hemispheres(field, norm_bound, rect=None, min_norm=1):
    """All hemispheres with min_norm <= N(mu) <= norm_bound reaching the rectangle."""
    if norm_bound < 1:
        raise ValueError("norm_bound must be >= 1")
    if rect is None:
        rect = FundamentalRectangle()
    t, n = field.omega_trace, field.omega_norm
    m = field.m
    from math import gcd
    seen = {}
    out = []
    four_n_t2 = 4 * n - t * t
    vmax = int(isqrt(4 * norm_bound // four_n_t2)) + 1
    for v in range(0, vmax + 1):
        for u in _int_range(QQ(-t * v, 2) - isqrt(norm_bound), QQ(-t * v, 2) + isqrt(norm_bound)):
            if v == 0 and u <= 0:
                continue
            nm = field.norm(u, v)
            if nm < min_norm or nm > norm_bound:
                continue
            mu = (u, v)
            nmu = QQ(nm)
            rsq = QQ(1) / nmu
            # center box: rectangle padded by (a bound on) the radius
            pad_b = QQ(2, max(1, int(isqrt(m * nm))))
            pad_a = QQ(1, max(1, int(isqrt(nm)))) + pad_b
            A0, A1 = rect.a_range[0] - pad_a, rect.a_range[1] + pad_a
            B0, B1 = rect.b_range[0] - pad_b, rect.b_range[1] + pad_b
            cu, cv = field.conj(u, v)
            yb = abs(v) * max(abs(A0), abs(A1)) + (abs(u) + abs(t * v)) * max(abs(B0), abs(B1))
            for y in _int_range(-yb, yb):
                # center coords are linear in x:
                #   ca*nm = cu*x - n*cv*y ... using lam*conj(mu) = (x*cu - n*y*cv, x*cv + y*(cu + t*cv))
                i1 = _x_interval(QQ(cu), QQ(-n * y * cv), A0 * nmu, A1 * nmu)
                if i1 is None:
                    continue
                i2 = _x_interval(QQ(cv), QQ(y * (cu + t * cv)), B0 * nmu, B1 * nmu)
                if i2 is None:
                    continue
                xmin = max(x for x in (i1[0], i2[0]) if x is not None) if (i1[0] is not None or i2[0] is not None) else None
                xmax = min(x for x in (i1[1], i2[1]) if x is not None) if (i1[1] is not None or i2[1] is not None) else None
                if xmin is None or xmax is None:
                    raise AssertionError("unbounded hemisphere apex search")
                for x in range(xmin, xmax + 1):
                    lam = (x, y)
                    ca = QQ(x * cu - n * y * cv, nm)
                    cb = QQ(x * cv + y * (cu + t * cv), nm)
                    key = (ca, cb)
                    if key in seen:
                        continue
                    # keep tangent hemispheres too: they pass through boundary
                    # cusps and feed the singular-cone termination test
                    if form_dist_sq_to_rect(field, (ca, cb), rect) > rsq:
                        continue
                    nl = field.norm(x, y)
                    if gcd(nl, nm) != 1:
                        gens = [field.integer(*lam), field.integer(*mu)]
                        if ideal_norm(gens, field) != 1:
                            continue
                    seen[key] = True
                    out.append(Hemisphere(lam, mu, (ca, cb), rsq))
    return out


def _cut_line(field, ci, ri, cj, rj):
    """Coefficients (alpha, beta, gamma) of L(a,b) >= 0 <=> h_i(z) >= h_j(z)."""
    t, n = field.omega_trace, field.omega_norm
    da, db = ci[0] - cj[0], ci[1] - cj[1]
    alpha = 2 * da + t * db
    beta = t * da + 2 * n * db
    gamma = field.norm(*cj) - field.norm(*ci) + ri - rj
    return alpha, beta, gamma


def _clip(polygon, alpha, beta, gamma):
    """Clip a convex polygon to the half plane alpha*a + beta*b + gamma >= 0."""
    if not polygon:
        return polygon
    vals = [alpha * p[0] + beta * p[1] + gamma for p in polygon]
    if all(v >= 0 for v in vals):
        return polygon
    if all(v <= 0 for v in vals):
        return []
    out = []
    k = len(polygon)
    for i in range(k):
        p, vp = polygon[i], vals[i]
        q, vq = polygon[(i + 1) % k], vals[(i + 1) % k]
        if vp >= 0:
            out.append(p)
        if (vp > 0 and vq < 0) or (vp < 0 and vq > 0):
            s = vp / (vp - vq)
            out.append((p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])))
    # drop consecutive duplicates introduced by vertices on the cut line
    dedup = []
    for p in out:
        if not dedup or p != dedup[-1]:
            dedup.append(p)
    if len(dedup) > 1 and dedup[0] == dedup[-1]:
        dedup.pop()
    return dedup


def _polygon_area2(poly):
    s = QQ(0)
    for i in range(len(poly)):
        p, q = poly[i], poly[(i + 1) % len(poly)]
        s += p[0] * q[1] - p[1] * q[0]
    return s


def _disks_overlap(field, ci, ri, cj, rj):
    d2 = field.norm(ci[0] - cj[0], ci[1] - cj[1])
    a = d2 - ri - rj
    return a < 0 or a * a < 4 * ri * rj


class Polyhedron:
    """Floor cell data: exact vertices, faces per hemisphere, edges, singular points."""

    def __init__(self, field, rect, hemispheres):
        self.field = field
        self.rect = rect
        self.hemispheres = hemispheres  # full enumerated list
        self.vertices = {}              # vid -> ((a, b), hsq)
        self.faces = []                 # (hemisphere, [vid cycle], face polygon index)
        self.edges = {}                 # frozenset({vid, vid}) -> list of face indices
        self.singular = []              # vids with hsq == 0
        self.min_positive_height = None
        self.covered = True             # no two-dimensional uncovered region found

    def vertex_point(self, vid):
        return self.vertices[vid]

    def bottom_face_count(self):
        return len(self.faces)


_BOX_SCALE = 64


def _disk_box(field, hem):
    """Integer bounding box (scaled by _BOX_SCALE) of the disk N(z - c) <= rsq."""
    t, n = field.omega_trace, field.omega_norm
    nm = int(1 / hem.rsq)
    S2 = _BOX_SCALE * _BOX_SCALE
    ea = int(isqrt(S2 * 4 * n // (nm * (4 * n - t * t)))) + 1
    eb = int(isqrt(S2 * 4 // (nm * (4 * n - t * t)))) + 1
    ca, cb = hem.center
    ca_s = int(mpz(ca.numerator * _BOX_SCALE) // mpz(ca.denominator))
    cb_s = int(mpz(cb.numerator * _BOX_SCALE) // mpz(cb.denominator))
    return (ca_s - ea, ca_s + ea + 1, cb_s - eb, cb_s + eb + 1)


def _cut_polygon_against(field, poly, hi, others, boxes, box_i, skip=None):
    """Clip hi's polygon against each hemisphere in others (list of (idx, hem))."""
    for j, hj in others:
        if skip is not None and j == skip:
            continue
        bj = boxes[j]
        if bj[1] < box_i[0] or box_i[1] < bj[0] or bj[3] < box_i[2] or box_i[3] < bj[2]:
            continue
        if not _disks_overlap(field, hi.center, hi.rsq, hj.center, hj.rsq):
            continue
        al, be, ga = _cut_line(field, hi.center, hi.rsq, hj.center, hj.rsq)
        if al == 0 and be == 0:
            if ga < 0:
                return []
            continue
        poly = _clip(poly, al, be, ga)
        if len(poly) < 3:
            return []
    return poly


def compute_floor(hemispheres, field, rect=None):
    """Assemble the floor polyhedron from the hemisphere list.

    Hemispheres are processed by decreasing radius; each polygon is first cut
    against the previously surviving ("active") ones only.  A hemisphere whose
    polygon dies against the actives can never contribute to the floor, so the
    final pairwise pass over actives yields the exact dominance regions.
    """
    if rect is None:
        rect = FundamentalRectangle()
    base = rect.corners()
    hs = hemispheres
    boxes = [_disk_box(field, h) for h in hs]
    order = sorted(range(len(hs)), key=lambda i: -hs[i].rsq)
    active = []
    for i in order:
        hi = hs[i]
        poly = _cut_polygon_against(field, list(base), hi, active, boxes, boxes[i])
        if poly and _polygon_area2(poly) > 0:
            active.append((i, hi))
    # final exact regions: cut every active against all other actives
    covered = True
    polygons = {}
    for i, hi in active:
        poly = _cut_polygon_against(field, list(base), hi, active, boxes, boxes[i], skip=i)
        if not poly or _polygon_area2(poly) <= 0:
            continue
        # the radius-descending pass is only exact where h_i >= 0: corners at
        # negative height are junk; cut them away against whichever wins there
        guard = 0
        while poly and len(poly) >= 3:
            bad = None
            for p in poly:
                if hi.height_at(field, p) < 0:
                    bad = p
                    break
            if bad is None:
                break
            hbad = hi.height_at(field, bad)
            best = None
            for j, hj in active:
                if j == i:
                    continue
                val = hj.height_at(field, bad)
                if val > hbad and (best is None or val > best[1]):
                    best = (hj, val)
            if best is None:
                covered = False  # genuinely uncovered region; list too small
                break
            al, be, ga = _cut_line(field, hi.center, hi.rsq, best[0].center, best[0].rsq)
            poly = _clip(poly, al, be, ga)
            guard += 1
            if guard > 4 * len(active):
                raise AssertionError("junk-removal pass failed to converge")
        if poly and len(poly) >= 3 and _polygon_area2(poly) > 0:
            polygons[i] = poly
    result = _assemble(field, rect, hs, polygons, strict=covered)
    result.covered = covered
    return result


def _assemble(field, rect, hs, polygons, strict=True):
    result = Polyhedron(field, rect, hs)
    coord_ids = {}
    face_cycles = []
    for i in sorted(polygons):
        poly = polygons[i]
        if poly is None:
            continue
        cyc = []
        for p in poly:
            vid = coord_ids.get(p)
            if vid is None:
                vid = len(coord_ids)
                coord_ids[p] = vid
            cyc.append(vid)
        face_cycles.append((i, cyc))
    points = [None] * len(coord_ids)
    for p, vid in coord_ids.items():
        points[vid] = p
    # heights, consistency across incident faces
    heights = [None] * len(points)
    for fi, (i, cyc) in enumerate(face_cycles):
        for vid in cyc:
            h = hs[i].height_at(field, points[vid])
            if heights[vid] is None or h > heights[vid]:
                if strict and heights[vid] is not None:
                    raise AssertionError("inconsistent vertex height across faces")
                heights[vid] = h
            elif strict and heights[vid] != h:
                raise AssertionError("inconsistent vertex height across faces")
    # split polygon sides at vertices lying in their interior (T junctions)
    bucket = {}
    for vid, p in enumerate(points):
        key = (int(mpz(p[0].numerator * 8) // mpz(p[0].denominator)),
               int(mpz(p[1].numerator * 8) // mpz(p[1].denominator)))
        bucket.setdefault(key, []).append(vid)

    def on_segment(p, a, b):
        cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
        if cross != 0:
            return False
        dot = (p[0] - a[0]) * (b[0] - a[0]) + (p[1] - a[1]) * (b[1] - a[1])
        if dot <= 0:
            return False
        ln = (b[0] - a[0]) ** 2 + (b[1] - a[1]) ** 2
        return dot < ln

    final_faces = []
    for (i, cyc) in face_cycles:
        newcyc = []
        kk = len(cyc)
        for idx in range(kk):
            va, vb = cyc[idx], cyc[(idx + 1) % kk]
            a, b = points[va], points[vb]
            newcyc.append(va)
            # candidate interior vertices from buckets along the segment box
            lo0 = min(a[0], b[0])
            hi0 = max(a[0], b[0])
            lo1 = min(a[1], b[1])
            hi1 = max(a[1], b[1])
            cands = set()
            k0l = int(mpz(lo0.numerator * 8) // mpz(lo0.denominator))
            k0h = int(mpz(hi0.numerator * 8) // mpz(hi0.denominator))
            k1l = int(mpz(lo1.numerator * 8) // mpz(lo1.denominator))
            k1h = int(mpz(hi1.numerator * 8) // mpz(hi1.denominator))
            for ka in range(k0l, k0h + 1):
                for kb in range(k1l, k1h + 1):
                    cands.update(bucket.get((ka, kb), ()))
            inside = [v for v in cands
                      if v != va and v != vb and on_segment(points[v], a, b)]
            inside.sort(key=lambda v: (points[v][0] - a[0]) ** 2 + (points[v][1] - a[1]) ** 2)
            newcyc.extend(inside)
        final_faces.append((i, newcyc))

    result.vertices = {vid: (points[vid], heights[vid]) for vid in range(len(points))}
    result.faces = final_faces
    for fi, (i, cyc) in enumerate(final_faces):
        for idx in range(len(cyc)):
            e = frozenset((cyc[idx], cyc[(idx + 1) % len(cyc)]))
            result.edges.setdefault(e, []).append(fi)
    result.singular = [vid for vid, (p, h) in result.vertices.items() if h == 0]
    pos = [h for (p, h) in result.vertices.values() if h > 0]
    result.min_positive_height = min(pos) if pos else None
    return result


def _lcm(a, b):
    from math import gcd
    return a * b // gcd(int(a), int(b))


def cusp_ideal_gens(field, z):
    """Generators (p + q*omega, r) of the cusp ideal for z = (p + q*omega)/r."""
    ra = mpz(z[0].denominator)
    rb = mpz(z[1].denominator)
    r = _lcm(ra, rb)
    p = mpz(z[0].numerator) * (r // ra)
    q = mpz(z[1].numerator) * (r // rb)
    return field.integer(int(p), int(q)), field.integer(int(r), 0)


def _hull(points):
    """Convex hull (counter clockwise) of exact rational points."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _form_dist_sq_to_segment_line(field, p, q):
    """Squared distance (in the norm-form metric) from the origin to the line p-q."""
    v = (q[0] - p[0], q[1] - p[1])
    qv = field.norm(*v)
    bp = field.bilinear(p, v)
    return field.norm(*p) - bp * bp / qv


def singular_cone_ok(field, hemispheres, z0, threshold_sq):
    """Whether hemispheres through z0 dominate every direction with slope >= 2*sqrt(threshold).

    Checked as: the convex hull of the through-hemisphere centers (relative to
    z0) contains the form-metric disk of squared radius 4*threshold_sq.
    """
    grads = []
    for h in hemispheres:
        dz = (h.center[0] - z0[0], h.center[1] - z0[1])
        if field.norm(*dz) == h.rsq:
            grads.append(dz)
    if len(grads) < 3:
        return False
    hull = _hull(grads)
    if len(hull) < 3:
        return False
    k = len(hull)
    for i in range(k):
        p, q = hull[i], hull[(i + 1) % k]
        cross = (q[0] - p[0]) * (-p[1]) - (q[1] - p[1]) * (-p[0])
        if cross <= 0:
            return False  # origin not strictly inside
        if _form_dist_sq_to_segment_line(field, p, q) < 4 * threshold_sq:
            return False
    return True


def swan_terminated(hemispheres, poly, norm_bound, field):
    """Whether no hemisphere with N(mu) > norm_bound can alter the computed floor."""
    if not poly.covered:
        return False
    tnext = QQ(1, norm_bound + 1)
    for vid, (z, h) in poly.vertices.items():
        if h == 0:
            lam, mu = cusp_ideal_gens(field, z)
            if is_principal(lam, mu):
                return False
            if not singular_cone_ok(field, hemispheres, z, tnext):
                return False
        elif h < tnext:
            return False
    return True


def hemisphere_pokes(field, hem, established, rect=None):
    """Whether hem rises strictly above the floor of the established hemispheres."""
    if rect is None:
        rect = FundamentalRectangle()
    poly = list(rect.corners())
    for hj in established:
        if hj.center == hem.center and hj.rsq == hem.rsq:
            return False
        if not _disks_overlap(field, hem.center, hem.rsq, hj.center, hj.rsq):
            continue
        al, be, ga = _cut_line(field, hem.center, hem.rsq, hj.center, hj.rsq)
        if al == 0 and be == 0:
            if ga < 0:
                return False
            continue
        poly = _clip(poly, al, be, ga)
        if len(poly) < 3:
            return False
    return bool(poly) and _polygon_area2(poly) > 0


def compute_polyhedron(field, start_bound=10, max_bound=2 ** 20, rect=None, probe=True):
    """Swan driver: double the norm bound until the floor is provably complete."""
    if rect is None:
        rect = FundamentalRectangle()
    bound = start_bound
    hemis = enumerate_hemispheres(field, bound, rect)
    while bound <= max_bound:
        poly = compute_floor(hemis, field, rect)
        if swan_terminated(hemis, poly, bound, field):
            if not probe:
                return poly, bound
            margin = max(8, bound // 4)
            extra = enumerate_hemispheres(field, bound + margin, rect, min_norm=bound + 1)
            if not any(hemisphere_pokes(field, h, hemis, rect) for h in extra):
                return poly, bound
            hemis.extend(extra)
            bound += margin
            continue
        hemis.extend(enumerate_hemispheres(field, 2 * bound, rect, min_norm=bound + 1))
        bound *= 2
    raise RuntimeError(f"hemisphere search did not terminate below norm {max_bound}")
