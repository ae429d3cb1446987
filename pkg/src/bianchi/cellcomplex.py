"""Equivariant cell complex on the floor of the fundamental polyhedron.

The quotient structure is computed from face pairings: every bottom face of
the polyhedron is matched with its partner(s) under the group, wall cells are
matched across by the two translations, and all vertex and edge orbits are the
unions these maps generate.  Refinement then subdivides edges whose endpoints
are identified (barycentric midpoint) and cones any 2-cell that does not have
three vertices that are unique in their orbit among the cell's vertices.
"""

from gmpy2 import mpq, isqrt, mpz

from .field import QQ, ideal_class_key
from .moebius import GroupElement, UHSPoint, act, act_cusp, identity, translation, elliptic_order
from .swan import cusp_ideal_gens
from .linalg import solve_integer

STAB_TYPES_BY_ORDER = {1: "Trivial", 2: "Z2", 3: "Z3", 4: "D2", 6: "S3", 12: "A4"}


# ---------------------------------------------------------------------------
# identification search
# ---------------------------------------------------------------------------

def _sqrt_rational(x):
    """Exact square root of a non-negative rational, or None."""
    num, den = mpz(x.numerator), mpz(x.denominator)
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn == num and rd * rd == den:
        return QQ(int(rn), int(rd))
    return None


def _enumerate_c(field, norm_bound):
    """Nonzero c in the ring with N(c) <= norm_bound, one per +- pair, plus c = 0."""
    t, n = field.omega_trace, field.omega_norm
    out = [(0, 0)]
    if norm_bound < 1:
        return out
    ymax = int(isqrt(4 * norm_bound // (4 * n - t * t))) + 1
    for y in range(0, ymax + 1):
        lo = QQ(-t * y, 2) - isqrt(norm_bound)
        hi = QQ(-t * y, 2) + isqrt(norm_bound)
        xlo = int(-(-mpz(lo.numerator) // mpz(lo.denominator)))
        xhi = int(mpz(hi.numerator) // mpz(hi.denominator))
        for x in range(xlo, xhi + 1):
            if y == 0 and x <= 0:
                continue
            if field.norm(x, y) <= norm_bound:
                out.append((x, y))
    return out


def _lattice_points_on_circle(field, center, radius_sq):
    """All ring elements d with N(d - center) == radius_sq (center rational pair)."""
    t, n = field.omega_trace, field.omega_norm
    ca, cb = center
    out = []
    if radius_sq < 0:
        return out
    # (n - t^2/4) (y - cb)^2 <= R bounds y
    span_sq = 4 * radius_sq / QQ(4 * n - t * t)
    rootspan = _sqrt_rational(span_sq)
    if rootspan is None:
        lim = QQ(int(isqrt(mpz(span_sq.numerator) // mpz(span_sq.denominator))) + 1)
    else:
        lim = rootspan
    ylo = int(-(-mpz((cb - lim).numerator) // mpz((cb - lim).denominator)))
    yhi = int(mpz((cb + lim).numerator) // mpz((cb + lim).denominator))
    for y in range(ylo, yhi + 1):
        dy = y - cb
        # x^2 + (2*ca... solve (x - ca)^2 + t (x - ca) dy + n dy^2 = R
        # as a quadratic in u = x - ca:  u^2 + t dy u + (n dy^2 - R) = 0
        disc = QQ(t * t) * dy * dy - 4 * (n * dy * dy - radius_sq)
        if disc < 0:
            continue
        root = _sqrt_rational(disc)
        if root is None:
            continue
        for sgn in ((1, -1) if root != 0 else (1,)):
            u = (QQ(-t) * dy + sgn * root) / 2
            x = u + ca
            if x.denominator == 1:
                out.append((int(x), y))
    return out


def _solve_unimodular(field, c, d):
    """(a0, b0) with a0*d - b0*c = 1, or None when (c, d) is not the unit ideal."""
    t, n = field.omega_trace, field.omega_norm

    def mulrow(g):
        # row of coefficients of x*g and (x*omega)*g in terms of (1, omega)
        ga, gb = g
        return [(ga, gb), (-n * gb, ga + t * gb)]

    # unknowns: a = (a1, a2), e = (e1, e2) with a*d + e*c = 1 (then b0 = -e)
    dcols = mulrow(d)
    ccols = mulrow(c)
    matrix = [
        [dcols[0][0], dcols[1][0], ccols[0][0], ccols[1][0]],
        [dcols[0][1], dcols[1][1], ccols[0][1], ccols[1][1]],
    ]
    sol = solve_integer(matrix, [1, 0])
    if sol is None:
        return None
    a = (sol[0], sol[1])
    b = (-sol[2], -sol[3])
    return a, b


def find_identification(field, v, w, collect_all=False):
    """gamma with act(gamma, v) = w for interior points, or None.

    With collect_all=True, returns the complete list (used for stabilisers,
    where v == w); the search over lower-triangular entries is exhaustive
    thanks to N(c)^2 <= 1/(hsq_v * hsq_w).
    """
    (zva, zvb), sv = v
    (zwa, zwb), sw = w
    dd = _sqrt_rational(sv / sw)
    if dd is None:
        return [] if collect_all else None
    found = []
    seen = set()
    # N(c) <= 1/sqrt(sv*sw): exact integer bound
    prod = sv * sw
    bound = int(isqrt(mpz(prod.denominator) // mpz(prod.numerator)))
    while QQ(bound + 1) * QQ(bound + 1) * prod <= 1:
        bound += 1
    zv = (QQ(zva), QQ(zvb))
    zw = (QQ(zwa), QQ(zwb))
    for c in _enumerate_c(field, bound):
        nc = field.norm(*c)
        radius = dd - sv * nc
        if radius < 0:
            continue
        czv = field.mul(c, zv)
        for d in _lattice_points_on_circle(field, czv, radius):
            ab = _solve_unimodular(field, c, d)
            if ab is None:
                continue
            a0, b0 = ab
            # z-image is affine in the shift t along (c, d):  z' = base/D - t
            dmcz = (d[0] - czv[0], d[1] - czv[1])
            az = field.mul(a0, zv)
            azb = (az[0] - b0[0], az[1] - b0[1])
            t1 = field.mul(field.conj(*dmcz), azb)
            t2 = field.mul(field.conj(*c), a0)
            base = ((t1[0] - sv * t2[0]) / dd, (t1[1] - sv * t2[1]) / dd)
            sh = (base[0] - zw[0], base[1] - zw[1])
            if sh[0].denominator != 1 or sh[1].denominator != 1:
                continue
            # with a = a0 + s*c, b = b0 + s*d the image is base/D - s
            shi = (int(sh[0]), int(sh[1]))
            tc = field.mul(shi, c)
            td = field.mul(shi, d)
            g = GroupElement((a0[0] + tc[0], a0[1] + tc[1]),
                             (b0[0] + td[0], b0[1] + td[1]), c, d, field)
            if act(g, UHSPoint(zv, sv)) != UHSPoint(zw, sw):
                continue
            key = g.key()
            if key in seen:
                continue
            seen.add(key)
            if not collect_all:
                return g
            found.append(g.normalized())
    return found if collect_all else None


def stabiliser_elements(field, point):
    """All elements fixing an interior point, as normalized representatives."""
    return find_identification(field, point, point, collect_all=True)


# ---------------------------------------------------------------------------
# the quotient complex
# ---------------------------------------------------------------------------

class VertexInfo:
    __slots__ = ("kind", "point", "cusp", "parent")

    def __init__(self, kind, point=None, cusp=False, parent=None):
        self.kind = kind      # 'geo', 'mid' (edge midpoint) or 'apex' (face cone point)
        self.point = point    # ((a, b), hsq) for geo vertices
        self.cusp = cusp
        self.parent = parent  # owning edge / face id for symbolic vertices


class _UnionFind:
    """Union-find over cells carrying the identifying group element.

    parent[x] = (p, g) with g . x = p, where the action on symbolic cells is
    the induced one.  For edges the transport also carries a parity flag.
    """

    def __init__(self):
        self.parent = {}

    def add(self, x, field):
        if x not in self.parent:
            self.parent[x] = (x, identity(field))

    def find(self, x):
        p, g = self.parent[x]
        if p == x:
            return p, g
        root, gg = self.find(p)
        tot = gg * g
        self.parent[x] = (root, tot)
        return root, tot

    def union(self, x, y, g):
        # g . x = y
        rx, gx = self.find(x)
        ry, gy = self.find(y)
        if rx == ry:
            return False
        # gy . y = ry, so (gy * g * gx^{-1}) . rx = ry
        self.parent[rx] = (ry, gy * g * gx.inverse())
        return True

    def roots(self):
        return sorted({self.find(x)[0] for x in self.parent}, key=_cell_sort_key)


def _cell_sort_key(x):
    return repr(x)


class CellComplex:
    """Quotient cell structure with stabilisers; 2-dimensional (bottom cells only)."""

    def __init__(self, field, poly):
        self.field = field
        self.poly = poly
        self.vertices = {}        # vid -> VertexInfo
        self.edges = {}           # eid -> (v1, v2) ordered
        self.faces = {}           # fid -> dict(cycle=[vids], hemi=index)
        self.vuf = _UnionFind()
        self.euf = _UnionFind()   # over directed edge ids; see _edge_handle
        self.fuf = _UnionFind()
        self.pairings = {}        # fid -> list of (gamma, fid2)
        self.stab_cache = {}      # geo vid -> list of GroupElement (full group)
        self.v_stab = {}          # vertex orbit root -> element list
        self.v_type = {}          # vertex orbit root -> stabiliser type
        self.e_stab = {}          # edge orbit root -> element list (pointwise)
        self.e_type = {}
        self.subdivided_edges = set()
        self.coned_faces = set()

    # --- vertex/point helpers -------------------------------------------

    def vertex_point(self, vid):
        return self.vertices[vid].point

    def is_cusp(self, vid):
        return self.vertices[vid].cusp

    def _act_vertex(self, g, vid):
        """Image vertex id of vid under g (must land on a complex vertex)."""
        info = self.vertices[vid]
        if info.kind == "geo":
            (z, s) = info.point
            img = act(g, UHSPoint(z, s))
            key = ("g", img.z, img.hsq)
            return key if key in self.vertices else None
        if info.kind == "mid":
            e2 = self._act_edge_setwise(g, info.parent)
            return ("m", e2) if e2 is not None and ("m", e2) in self.vertices else None
        # apex
        f2 = self._act_face(g, info.parent)
        return ("a", f2) if f2 is not None and ("a", f2) in self.vertices else None

    def _act_edge_setwise(self, g, eid):
        v1, v2 = self.edges[eid]
        w1 = self._act_vertex(g, v1)
        w2 = self._act_vertex(g, v2)
        if w1 is None or w2 is None:
            return None
        key = _edge_key(w1, w2)
        return key if key in self.edges else None

    def _act_face(self, g, fid):
        cyc = self.faces[fid]["cycle"]
        imgs = []
        for v in cyc:
            w = self._act_vertex(g, v)
            if w is None:
                return None
            imgs.append(w)
        target = frozenset(imgs)
        fid2 = self._face_by_vertexset.get(target)
        return fid2

    # --- stabilisers ------------------------------------------------------

    def geo_stab(self, vid):
        els = self.stab_cache.get(vid)
        if els is None:
            info = self.vertices[vid]
            els = stabiliser_elements(self.field, info.point)
            self.stab_cache[vid] = els
        return els


def _edge_key(v1, v2):
    a, b = sorted((v1, v2), key=_cell_sort_key)
    return (a, b)


def _group_closure(field, elements, limit=64):
    """Closure of a small set of PSL2 elements under multiplication."""
    els = {identity(field).key(): identity(field)}
    for e in elements:
        els[e.key()] = e.normalized()
    changed = True
    while changed:
        changed = False
        cur = list(els.values())
        for x in cur:
            for y in cur:
                z = (x * y).normalized()
                if z.key() not in els:
                    els[z.key()] = z
                    changed = True
                    if len(els) > limit:
                        raise AssertionError("stabiliser closure exceeded bound")
    return sorted(els.values(), key=lambda g: g.key())


def _stab_type_from_elements(field, els):
    order = len(els)
    if order not in STAB_TYPES_BY_ORDER:
        raise AssertionError(f"stabiliser order {order} outside Klein's classification")
    t = STAB_TYPES_BY_ORDER[order]
    if order == 4:
        # D2 or Z4: Z4 cannot occur (no order-4 elliptic elements)
        for g in els:
            if not g.is_identity() and elliptic_order(g) != 2:
                raise AssertionError("order-4 stabiliser with non-involution element")
    if order == 6:
        orders = sorted(1 if g.is_identity() else elliptic_order(g) for g in els)
        if orders != [1, 2, 2, 2, 3, 3]:
            raise AssertionError("order-6 stabiliser is not S3")
    return t


# ---------------------------------------------------------------------------
# building the complex from the polyhedron
# ---------------------------------------------------------------------------

def _face_invariant(field, poly, fid):
    """Isometry invariant of a face: sorted signed squared cosines of its
    dihedral angles with the neighbouring tiling faces."""
    hemi_idx, cyc = poly.faces[fid]
    hi = poly.hemispheres[hemi_idx]
    entries = []
    k = len(cyc)
    for idx in range(k):
        e = frozenset((cyc[idx], cyc[(idx + 1) % k]))
        facelist = poly.edges[e]
        other = [g for g in facelist if g != fid]
        if other:
            hj = poly.hemispheres[poly.faces[other[0]][0]]
            cj, rj = hj.center, hj.rsq
        else:
            # wall edge: neighbour is the translated face across the wall
            va = poly.vertices[cyc[idx]][0]
            vb = poly.vertices[cyc[(idx + 1) % k]][0]
            if va[0] == vb[0]:
                shift = (QQ(-1), QQ(0)) if va[0] > 0 else (QQ(1), QQ(0))
            elif va[1] == vb[1]:
                shift = (QQ(0), QQ(-1)) if va[1] > 0 else (QQ(0), QQ(1))
            else:
                raise AssertionError("edge with one incident face is not on a wall")
            pa = (va[0] + shift[0], va[1] + shift[1])
            pb = (vb[0] + shift[0], vb[1] + shift[1])
            partner = None
            for g2, (hidx2, cyc2) in enumerate(poly.faces):
                pts = {poly.vertices[v][0] for v in cyc2}
                if pa in pts and pb in pts:
                    partner = hidx2
                    break
            if partner is None:
                raise AssertionError("wall edge has no translated partner face")
            hj = poly.hemispheres[partner]
            cj = (hj.center[0] - shift[0], hj.center[1] - shift[1])
            rj = hj.rsq
        num = hi.rsq + rj - field.norm(hi.center[0] - cj[0], hi.center[1] - cj[1])
        entries.append((num * num / (4 * hi.rsq * rj)) * (1 if num >= 0 else -1))
    return (k, tuple(sorted(entries)))


def induce_cell_structure(poly, field=None):
    """Quotient cell structure of the floor with all orbit identifications."""
    field = field or poly.field
    cx = CellComplex(field, poly)
    # tiling cells
    for vid, (z, h) in poly.vertices.items():
        key = ("g", z, h)
        cx.vertices[key] = VertexInfo("geo", point=(z, h), cusp=(h == 0))
    vmap = {vid: ("g",) + tuple([poly.vertices[vid][0], poly.vertices[vid][1]])
            for vid in poly.vertices}
    vmap = {vid: ("g", poly.vertices[vid][0], poly.vertices[vid][1]) for vid in poly.vertices}
    cx._face_by_vertexset = {}
    for fid, (hemi_idx, cyc) in enumerate(poly.faces):
        cycle = [vmap[v] for v in cyc]
        cx.faces[fid] = {"cycle": cycle, "hemi": hemi_idx}
        vs = frozenset(cycle)
        if vs in cx._face_by_vertexset:
            raise AssertionError("two faces share a vertex set")
        cx._face_by_vertexset[vs] = fid
        for idx in range(len(cycle)):
            key = _edge_key(cycle[idx], cycle[(idx + 1) % len(cycle)])
            cx.edges[key] = key
    # face pairing search, bucketed by isometry invariants
    buckets = {}
    for fid in cx.faces:
        buckets.setdefault(_face_invariant(field, poly, fid), []).append(fid)
    cx.maps = [translation(field, (1, 0)), translation(field, (0, 1))]
    cx._pair_count = {fid: 0 for fid in cx.faces}
    for key, fids in sorted(buckets.items(), key=lambda kv: repr(kv[0])):
        for i, f1 in enumerate(fids):
            for f2 in fids[i:]:
                for g in _face_pair_maps(cx, f1, f2):
                    cx.maps.append(g)
                    cx.pairings.setdefault(f1, []).append((g, f2))
                    cx._pair_count[f1] += 1
                    cx._pair_count[f2] += 1
    for fid, cnt in cx._pair_count.items():
        if cnt == 0:
            raise AssertionError(f"face {fid} has no partner under the group")
    _union_phase(cx)
    _finalize_orbits(cx)
    return cx


def _face_pair_maps(cx, f1, f2):
    """All gamma with gamma . f1 = f2 (as cells), from an anchored coset search."""
    field = cx.field
    cyc1 = cx.faces[f1]["cycle"]
    cyc2 = cx.faces[f2]["cycle"]
    interior = [v for v in cyc1 if not cx.vertices[v].cusp]
    if not interior:
        raise AssertionError("face with only cusp vertices; no search anchor")
    anchor = max(interior, key=lambda v: (cx.vertices[v].point[1], repr(v)))
    pt_u = cx.vertices[anchor].point
    stab_u = cx.geo_stab(anchor)
    set2 = frozenset(cyc2)
    out = []
    seen = set()
    for w in cyc2:
        if cx.vertices[w].cusp:
            continue
        pt_w = cx.vertices[w].point
        if _sqrt_rational(pt_u[1] / pt_w[1]) is None:
            continue
        g0 = find_identification(field, pt_u, pt_w)
        if g0 is None:
            continue
        for s in stab_u:
            g = g0 * s
            if g.key() in seen:
                continue
            seen.add(g.key())
            imgs = set()
            ok = True
            for v in cyc1:
                iv = cx._act_vertex(g, v)
                if iv is None or iv not in set2:
                    ok = False
                    break
                imgs.add(iv)
            if ok and imgs == set2:
                out.append(g.normalized())
    return out


def _union_phase(cx):
    """Union all cells under every recorded map; valid wherever images exist."""
    field = cx.field
    for v in cx.vertices:
        cx.vuf.add(v, field)
    for e in cx.edges:
        cx.euf.add(e, field)
    for f in cx.faces:
        cx.fuf.add(f, field)
    for g in cx.maps:
        for v in list(cx.vertices):
            w = cx._act_vertex(g, v)
            if w is not None:
                cx.vuf.union(v, w, g)
        for e in list(cx.edges):
            e2 = cx._act_edge_setwise(g, e)
            if e2 is not None:
                cx.euf.union(e, e2, g)
        for f in list(cx.faces):
            f2 = cx._act_face(g, f)
            if f2 is not None:
                cx.fuf.union(f, f2, g)
    # cusp orbits must agree with ideal classes
    classes = {}
    for v, info in cx.vertices.items():
        if info.cusp:
            lam, mu = cusp_ideal_gens(field, info.point[0])
            classes.setdefault(ideal_class_key(lam, mu), set()).add(cx.vuf.find(v)[0])
    for key, roots in classes.items():
        if len(roots) > 1:
            raise AssertionError("cusps of one ideal class not identified by the pairings")


def _finalize_orbits(cx):
    """Choose representatives, compute stabilisers and types per orbit."""
    field = cx.field
    cx.v_orbits = {}
    for v in cx.vertices:
        cx.v_orbits.setdefault(cx.vuf.find(v)[0], []).append(v)
    cx.v_rep = {}
    for root, members in cx.v_orbits.items():
        geo = [v for v in members if cx.vertices[v].kind == "geo" and not cx.vertices[v].cusp]
        if geo:
            rep = max(geo, key=lambda v: (cx.vertices[v].point[1], repr(v)))
        else:
            rep = min(members, key=repr)
        cx.v_rep[root] = rep
    cx.e_orbits = {}
    for e in cx.edges:
        cx.e_orbits.setdefault(cx.euf.find(e)[0], []).append(e)
    cx.f_orbits = {}
    for f in cx.faces:
        cx.f_orbits.setdefault(cx.fuf.find(f)[0], []).append(f)
    _compute_stabilisers(cx)


def vertex_transport(cx, v):
    """g with act(g, v) = rep(orbit of v)."""
    root, gv = cx.vuf.find(v)
    rep = cx.v_rep[root]
    _, gr = cx.vuf.find(rep)
    return gr.inverse() * gv


def _vertex_stab_list(cx, vid):
    """Full stabiliser element list of any complex vertex (not cusps)."""
    info = cx.vertices[vid]
    field = cx.field
    if info.kind == "geo":
        return cx.geo_stab(vid)
    if info.kind == "mid":
        eid = info.parent
        pw = _edge_pointwise_stab(cx, eid)
        swap = _edge_swap_element(cx, eid)
        gens = list(pw) + ([swap] if swap is not None else [])
        return _group_closure(field, gens)
    # apex
    fid = info.parent
    return _face_setwise_group(cx, fid)


def _edge_pointwise_stab(cx, eid):
    """Elements fixing the edge pointwise: the common fixers of its endpoints."""
    v1, v2 = eid
    i1, i2 = cx.vertices[v1], cx.vertices[v2]
    if i1.cusp or i2.cusp:
        return [identity(cx.field)]
    out = []
    for s in _transported_vertex_stab(cx, v1):
        if cx._act_vertex(s, v2) == v2:
            out.append(s)
    return out


def _transported_vertex_stab(cx, v):
    """Stabiliser of an arbitrary vertex via its orbit representative."""
    root = cx.vuf.find(v)[0]
    rep = cx.v_rep[root]
    els = cx.v_stab.get(root)
    if els is None:
        els = _vertex_stab_list(cx, rep)
        cx.v_stab[root] = els
    g = vertex_transport(cx, v)
    gi = g.inverse()
    return [(gi * s * g).normalized() for s in els]


def _edge_swap_element(cx, eid):
    """gamma mapping the edge to itself with endpoints exchanged, or None."""
    v1, v2 = eid
    i1, i2 = cx.vertices[v1], cx.vertices[v2]
    field = cx.field
    if cx.vuf.find(v1)[0] != cx.vuf.find(v2)[0]:
        return None
    if i1.kind == "geo" and i2.kind == "geo" and not i1.cusp and not i2.cusp:
        g0 = find_identification(field, i1.point, i2.point)
        if g0 is None:
            return None
        for s in _transported_vertex_stab(cx, v1):
            g = g0 * s
            if cx._act_vertex(g, v1) == v2 and cx._act_vertex(g, v2) == v1:
                return g.normalized()
        return None
    # symbolic or cusp endpoints: scan recorded maps and stabiliser conjugates
    for g in cx.maps:
        if cx._act_vertex(g, v1) == v2 and cx._act_vertex(g, v2) == v1:
            return g.normalized()
        gi = g.inverse()
        if cx._act_vertex(gi, v1) == v2 and cx._act_vertex(gi, v2) == v1:
            return gi.normalized()
    # compose a transport v1 -> v2 with stabiliser elements of v1
    g1 = vertex_transport(cx, v1)
    g2 = vertex_transport(cx, v2)
    base = g2.inverse() * g1  # maps v1 to v2
    for s in _transported_vertex_stab(cx, v1):
        g = base * s
        if cx._act_vertex(g, v1) == v2 and cx._act_vertex(g, v2) == v1:
            return g.normalized()
    return None


def _face_setwise_group(cx, fid):
    els = [identity(cx.field)]
    keys = {identity(cx.field).key()}
    for g, _t in cx.pairings.get(fid, ()):  # self-pairings recorded here
        if cx._act_face(g, fid) == fid and g.key() not in keys:
            els.append(g)
            keys.add(g.key())
    for g in list(els):
        gi = g.inverse().normalized()
        if gi.key() not in keys and cx._act_face(gi, fid) == fid:
            els.append(gi)
            keys.add(gi.key())
    return _group_closure(cx.field, els)


def _compute_stabilisers(cx):
    field = cx.field
    cx.v_stab = {}
    cx.v_type = {}
    for root, members in cx.v_orbits.items():
        rep = cx.v_rep[root]
        info = cx.vertices[rep]
        if info.cusp:
            cx.v_type[root] = "Zsquare"
            continue
        els = _vertex_stab_list(cx, rep)
        cx.v_stab[root] = els
        cx.v_type[root] = _stab_type_from_elements(field, els)
    cx.e_stab = {}
    cx.e_type = {}
    for root, members in cx.e_orbits.items():
        els = _edge_pointwise_stab(cx, root)
        cx.e_stab[root] = els
        order = len(els)
        if order not in (1, 2, 3):
            raise AssertionError(f"edge stabiliser of order {order}")
        cx.e_type[root] = {1: "Trivial", 2: "Z2", 3: "Z3"}[order]


# ---------------------------------------------------------------------------
# refinement
# ---------------------------------------------------------------------------

def refine(cx, max_rounds=4):
    """Subdivide until stabilisers fix cells pointwise.

    Round structure: split every edge orbit whose two endpoint orbits agree,
    then cone every 2-cell lacking three orbit-unique vertices; re-derive the
    orbit structure from the recorded maps after each change.
    """
    for _ in range(max_rounds):
        changed = False
        if _subdivide_identified_edges(cx):
            changed = True
        if _cone_deficient_faces(cx):
            changed = True
        if not changed:
            return cx
        _reset_orbits(cx)
        _union_phase(cx)
        _finalize_orbits(cx)
        if not _needs_refinement(cx):
            return cx
    if _needs_refinement(cx):
        raise AssertionError("refinement did not stabilise within the round limit")
    return cx


def _reset_orbits(cx):
    cx.vuf = _UnionFind()
    cx.euf = _UnionFind()
    cx.fuf = _UnionFind()
    cx.v_stab = {}
    cx.v_type = {}
    cx.e_stab = {}
    cx.e_type = {}


def _needs_refinement(cx):
    for root in cx.e_orbits:
        v1, v2 = root
        if cx.vuf.find(v1)[0] == cx.vuf.find(v2)[0]:
            return True
    for root in cx.f_orbits:
        if _unique_vertex_count(cx, root) < 3:
            return True
    return False


def _unique_vertex_count(cx, fid):
    cyc = cx.faces[fid]["cycle"]
    roots = [cx.vuf.find(v)[0] for v in cyc]
    from collections import Counter
    counts = Counter(roots)
    return sum(1 for r in roots if counts[r] == 1)


def _subdivide_identified_edges(cx):
    flagged = []
    for root, members in cx.e_orbits.items():
        v1, v2 = root
        if cx.vuf.find(v1)[0] == cx.vuf.find(v2)[0]:
            flagged.extend(members)
    if not flagged:
        return False
    for eid in flagged:
        v1, v2 = eid
        mid = ("m", eid)
        cx.vertices[mid] = VertexInfo("mid", cusp=False, parent=eid)
        del cx.edges[eid]
        cx.edges[_edge_key(v1, mid)] = _edge_key(v1, mid)
        cx.edges[_edge_key(mid, v2)] = _edge_key(mid, v2)
        cx.subdivided_edges.add(eid)
    pairs = {frozenset(e) for e in flagged}
    for fid, data in cx.faces.items():
        cyc = data["cycle"]
        out = []
        k = len(cyc)
        for idx in range(k):
            a, b = cyc[idx], cyc[(idx + 1) % k]
            out.append(a)
            if frozenset((a, b)) in pairs:
                out.append(("m", _edge_key(a, b)))
        data["cycle"] = out
    _rebuild_face_index(cx)
    return True


def _cone_deficient_faces(cx):
    deficient = []
    for root, members in cx.f_orbits.items():
        if _unique_vertex_count(cx, root) < 3:
            deficient.extend(members)
    if not deficient:
        return False
    for fid in deficient:
        data = cx.faces.pop(fid)
        cyc = data["cycle"]
        apex = ("a", fid)
        cx.vertices[apex] = VertexInfo("apex", cusp=False, parent=fid)
        cx.retired_faces = getattr(cx, "retired_faces", {})
        cx.retired_faces[fid] = cyc
        k = len(cyc)
        for idx in range(k):
            a, b = cyc[idx], cyc[(idx + 1) % k]
            cx.edges[_edge_key(apex, a)] = _edge_key(apex, a)
            tri = ("t", fid, idx)
            cx.faces[tri] = {"cycle": [apex, a, b], "hemi": data["hemi"]}
        cx.coned_faces.add(fid)
        # transfer recorded pairings so the apex stabiliser can be recovered
        cx.pairings.setdefault(fid, cx.pairings.get(fid, []))
    _rebuild_face_index(cx)
    return True


def _rebuild_face_index(cx):
    cx._face_by_vertexset = {}
    for fid, data in cx.faces.items():
        vs = frozenset(data["cycle"])
        if vs in cx._face_by_vertexset:
            raise AssertionError("two faces share a vertex set")
        cx._face_by_vertexset[vs] = fid
    cx._retired_by_vertexset = {}
    for fid, cyc in getattr(cx, "retired_faces", {}).items():
        cx._retired_by_vertexset[frozenset(cyc)] = fid


# ---------------------------------------------------------------------------
# euler characteristics, census
# ---------------------------------------------------------------------------

def euler_check(cx):
    """Equivariant Euler characteristic: sum of (-1)^dim / |stabiliser| over
    finite-stabiliser orbits (cusp orbits contribute zero)."""
    total = QQ(0)
    for root in cx.v_orbits:
        if cx.v_type[root] == "Zsquare":
            continue
        total += QQ(1, len(cx.v_stab[root]))
    for root in cx.e_orbits:
        total -= QQ(1, len(cx.e_stab[root]))
    total += len(cx.f_orbits)
    return total


def naive_euler(cx):
    return len(cx.v_orbits) - len(cx.e_orbits) + len(cx.f_orbits)


def census(cx):
    """Orbit counts per dimension and stabiliser type."""
    out = {0: {}, 1: {}, 2: {}}
    for root in cx.v_orbits:
        t = cx.v_type[root]
        out[0][t] = out[0].get(t, 0) + 1
    for root in cx.e_orbits:
        t = cx.e_type[root]
        out[1][t] = out[1].get(t, 0) + 1
    out[2]["Trivial"] = len(cx.f_orbits)
    return out


def assert_face_pairing(cx):
    """Every 2-cell orbit has an even number of representatives or admits a
    nontrivial self map (exceptional unit fields); used as a structure check."""
    for root, members in cx.f_orbits.items():
        if len(members) % 2 == 0:
            continue
        if cx.field.m in (1, 3):
            continue
        if len(_face_setwise_group(cx, root)) == 1:
            raise AssertionError(f"face orbit {root} has {len(members)} representatives")


def chain_complex(cx):
    """Integer boundary matrices (d1: edges -> vertices, d2: faces -> edges)
    of the quotient cell complex, rows/columns indexed by sorted orbit roots."""
    vroots = sorted(cx.v_orbits, key=repr)
    eroots = sorted(cx.e_orbits, key=repr)
    froots = sorted(cx.f_orbits, key=repr)
    vindex = {r: i for i, r in enumerate(vroots)}
    eindex = {r: i for i, r in enumerate(eroots)}
    d1 = [[0] * len(eroots) for _ in vroots]
    for j, e in enumerate(eroots):
        v1, v2 = e
        d1[vindex[cx.vuf.find(v2)[0]]][j] += 1
        d1[vindex[cx.vuf.find(v1)[0]]][j] -= 1
    d2 = [[0] * len(froots) for _ in eroots]
    for j, f in enumerate(froots):
        cyc = cx.faces[f]["cycle"]
        k = len(cyc)
        for idx in range(k):
            a, b = cyc[idx], cyc[(idx + 1) % k]
            eid = _edge_key(a, b)
            root, g = cx.euf.find(eid)
            # traversal a->b against the canonical orientation of eid, then
            # against the orientation of the orbit representative
            tsign = 1 if (a, b) == eid else -1
            w = cx._act_vertex(g, eid[0])
            psign = 1 if w == root[0] else -1
            d2[eindex[root]][j] += tsign * psign
    return vroots, eroots, froots, d1, d2
