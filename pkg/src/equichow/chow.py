"""
Constructors for the equivariant Chow rings used by the replays.

Sign convention for projective bundles: for a rank ``r`` bundle ``E`` with
fiber hyperplane class ``xi`` the relation is

    xi^r + c_1(E) xi^(r-1) + ... + c_r(E) = 0,

which for the standard representation of GL_3 gives the familiar
``t^3 + c1*t^2 + c2*t + c3``.  Duals negate Chern roots and determinant
twists add a multiple of the root sum to every root.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from .errors import NotSymmetricError, PreconditionError, TriangularizationError, VariableCollisionError
from .poly import ZZ, Polynomial, VariableTable
from .ring import Relation, Ring, RingElement, RingPresentation, make_ring

GL3_CLASSES = ("c1", "c2", "c3")
TORUS_ROOTS = ("l1", "l2", "l3")


@dataclass(frozen=True)
class PointRing:
    group: str  # "GL3" or "T"
    ring: Ring


def gl3_point(domain=ZZ) -> PointRing:
    """CH of BGL_3: Z[c1, c2, c3] with codimensions 1, 2, 3."""
    table = VariableTable(GL3_CLASSES, (1, 2, 3))
    return PointRing("GL3", make_ring(RingPresentation("BGL3", table, domain)))


def torus_point(domain=ZZ) -> PointRing:
    """CH of the maximal torus: Z[l1, l2, l3], all of codimension 1."""
    table = VariableTable(TORUS_ROOTS, (1, 1, 1))
    return PointRing("T", make_ring(RingPresentation("BT", table, domain)))


def elementary_symmetric(vars_: Sequence[Polynomial], k: int, table, domain=ZZ) -> Polynomial:
    acc = Polynomial.zero(table, domain)
    for combo in itertools.combinations(vars_, k):
        term = Polynomial.constant(table, domain, 1)
        for v in combo:
            term = term * v
        acc = acc + term
    return acc


def _swap(f: Polynomial, i: int, j: int) -> Polynomial:
    out = {}
    for e, c in f.terms.items():
        e = list(e)
        e[i], e[j] = e[j], e[i]
        out[tuple(e)] = c
    return Polynomial(f.table, f.domain, out)


def check_symmetric(f: Polynomial, roots: Sequence[str]) -> None:
    idx = [f.table.index(r) for r in roots]
    for a, b in itertools.combinations(range(len(idx)), 2):
        if _swap(f, idx[a], idx[b]) != f:
            raise NotSymmetricError(
                f"{f} is not symmetric under swapping {roots[a]} and {roots[b]}",
                (roots[a], roots[b]))


def symmetrize(f: Polynomial, roots: Sequence[str] = TORUS_ROOTS,
               classes: Sequence[str] = GL3_CLASSES,
               table: Optional[VariableTable] = None) -> Polynomial:
    """Rewrite a symmetric polynomial in ``roots`` through elementary symmetric classes.

    Other variables of ``f`` are treated as coefficients.  The result lives in
    ``table`` (default: ``classes`` with weights 1..k followed by the
    remaining variables of ``f``).  Uses the classical leading-term
    elimination: the lex-largest root monomial ``r1^a1 ... rk^ak`` of a
    symmetric polynomial has ``a1 >= ... >= ak`` and is the leading term of
    ``e1^(a1-a2) ... ek^ak``.

    >>> T = VariableTable(("l1", "l2", "l3"))
    >>> l = [Polynomial.var(T, ZZ, n) for n in T.names]
    >>> str(symmetrize(l[0]**2 + l[1]**2 + l[2]**2))
    'c1^2 - 2*c2'
    """
    roots, classes = tuple(roots), tuple(classes)
    if len(roots) != len(classes):
        raise ValueError("need one class name per root")
    check_symmetric(f, roots)
    k = len(roots)
    src = f.table
    rest = [(n, w) for n, w in src.items() if n not in roots]
    if table is None:
        table = VariableTable.of([(c, i + 1) for i, c in enumerate(classes)] + rest)
    domain = f.domain
    root_pos = [src.index(r) for r in roots]
    rest_pos = [(src.index(n), table.index(n)) for n, _ in rest]
    class_pos = [table.index(c) for c in classes]
    root_polys = [Polynomial.var(src, domain, r) for r in roots]
    e_cache: Dict[int, Polynomial] = {}

    def e(i):
        if i not in e_cache:
            e_cache[i] = elementary_symmetric(root_polys, i, src, domain)
        return e_cache[i]

    remaining = f
    out: Dict[Tuple[int, ...], int] = {}
    n_out = len(table)
    while not remaining.is_zero():
        # lex-largest root exponent vector; ties over coefficients handled together
        lead_exps, lead_c = max(remaining.terms.items(),
                                key=lambda kv: (tuple(kv[0][p] for p in root_pos), kv[0]))
        a = [lead_exps[p] for p in root_pos]
        if any(a[i] < a[i + 1] for i in range(k - 1)):
            raise NotSymmetricError(f"leading root monomial {a} is not a partition", (roots[0], roots[1]))
        powers = [a[i] - (a[i + 1] if i + 1 < k else 0) for i in range(k)]
        cofactor_src = [0] * len(src)
        for p_src, _ in rest_pos:
            cofactor_src[p_src] = lead_exps[p_src]
        sub = Polynomial.monomial(src, domain, cofactor_src, lead_c)
        for i, pw in enumerate(powers):
            if pw:
                sub = sub * e(i + 1) ** pw
        remaining = remaining - sub
        target = [0] * n_out
        for i, pw in enumerate(powers):
            target[class_pos[i]] = pw
        for p_src, p_dst in rest_pos:
            target[p_dst] = lead_exps[p_src]
        key = tuple(target)
        out[key] = out.get(key, 0) + lead_c
    return Polynomial(table, domain, out)


def desymmetrize(g: Polynomial, roots: Sequence[str] = TORUS_ROOTS,
                 classes: Sequence[str] = GL3_CLASSES,
                 table: Optional[VariableTable] = None) -> Polynomial:
    """Substitute ``c_i -> e_i(roots)``; inverse of :func:`symmetrize`."""
    rest = [(n, w) for n, w in g.table.items() if n not in classes]
    if table is None:
        table = VariableTable.of([(r, 1) for r in roots] + rest)
    root_polys = [Polynomial.var(table, g.domain, r) for r in roots]
    images = {c: elementary_symmetric(root_polys, i + 1, table, g.domain) for i, c in enumerate(classes)}
    return g.substitute(images, table)


class ChernRoots:
    """Formal Chern roots: linear forms in root variables of a common table."""

    def __init__(self, roots: Sequence[Polynomial]):
        roots = tuple(roots)
        if roots:
            t = roots[0].table
            if any(r.table != t or r.domain != roots[0].domain for r in roots):
                raise ValueError("Chern roots must share one variable table")
            for r in roots:
                if r and r.codims() != [1]:
                    raise ValueError(f"Chern root {r} is not a linear form")
        self.roots = roots

    @classmethod
    def standard(cls, names: Sequence[str] = TORUS_ROOTS, table=None, domain=ZZ):
        table = table or VariableTable(tuple(names))
        return cls([Polynomial.var(table, domain, n) for n in names])

    @property
    def rank(self):
        return len(self.roots)

    @property
    def table(self):
        return self.roots[0].table

    def dual(self) -> "ChernRoots":
        return ChernRoots([-r for r in self.roots])

    def twisted(self, det_power: int, det_root: Optional[Polynomial] = None) -> "ChernRoots":
        """Tensor with ``det^det_power``; ``det_root`` defaults to the sum of these roots."""
        if det_root is None:
            det_root = sum(self.roots[1:], self.roots[0])
        return ChernRoots([r + det_root.scale(det_power) for r in self.roots])

    def chern_class(self, k: int) -> Polynomial:
        return elementary_symmetric(self.roots, k, self.table, self.roots[0].domain)

    def chern_classes(self) -> List[Polynomial]:
        return [self.chern_class(k) for k in range(1, self.rank + 1)]

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    def __repr__(self):
        return f"ChernRoots([{', '.join(str(r) for r in self.roots)}])"


def sym_power_roots(roots: ChernRoots, d: int) -> ChernRoots:
    """Roots of Sym^d: all sums ``a_1 r_1 + ... + a_k r_k`` with ``sum a_i = d``.

    Ordered by exponent vector, lexicographically descending.
    """
    if d < 0:
        raise ValueError("d must be non-negative")
    k = roots.rank
    vectors = sorted((v for v in itertools.product(range(d + 1), repeat=k) if sum(v) == d), reverse=True)
    zero = Polynomial.zero(roots.table, roots.roots[0].domain)
    out = []
    for v in vectors:
        acc = zero
        for a, r in zip(v, roots.roots):
            if a:
                acc = acc + r.scale(a)
        out.append(acc)
    assert len(out) == comb(k - 1 + d, d)
    return ChernRoots(out)


class BundleData(NamedTuple):
    base: Ring
    chern_classes: Optional[Tuple[RingElement, ...]]
    rank: int
    fiber: str


@dataclass(frozen=True)
class PushforwardHandle:
    base: Ring
    total: Ring
    fiber: str
    rank: int

    def pullback(self, a: RingElement) -> RingElement:
        if a.ring != self.base:
            raise ValueError(f"element of {a.ring.name}, expected {self.base.name}")
        return self.total.normal_form(a.value.reembed(self.total.table))

    def pushforward(self, e: RingElement) -> RingElement:
        return proj_pushforward(e, self)

    def components(self, e: RingElement) -> List[RingElement]:
        """Base coefficients of ``1, xi, ..., xi^(r-1)`` (trailing zeros dropped)."""
        if e.ring != self.total:
            raise ValueError(f"element of {e.ring.name}, expected {self.total.name}")
        top = e.value.degree_in(self.fiber)
        return [self._to_base(e.value.coefficient_in(self.fiber, k)) for k in range(top + 1)]

    def _to_base(self, poly: Polynomial) -> RingElement:
        return RingElement(self.base, poly.reembed(self.base.table))


def projective_bundle(b: BundleData, name: Optional[str] = None) -> Tuple[Ring, PushforwardHandle]:
    """Adjoin the fiber class ``xi`` with ``xi^r + c1 xi^(r-1) + ... + c_r = 0``.

    ``chern_classes=None`` omits the relation and records a degree bound
    ``xi < r`` instead, for bundles whose Chern classes are irrelevant to
    a computation that stays below the rank.
    """
    base, chern, r, fiber = b
    if r < 1:
        raise PreconditionError("rank must be at least 1")
    if fiber in base.table:
        raise VariableCollisionError(f"fiber variable {fiber!r} already names a variable of {base.name}",
                                     (fiber,))
    name = name or f"P({base.name},{r})"
    table = base.table.extend([fiber], [1])
    rels = [Relation(rel.polynomial.reembed(table), rel.leading_variable, rel.leading_degree, rel.opaque)
            for rel in base.relations]
    bounds = dict(base.bounds)
    if chern is None:
        bounds[fiber] = r
    else:
        chern = tuple(chern)
        if len(chern) != r:
            raise PreconditionError(f"expected {r} Chern classes, got {len(chern)}")
        xi = Polynomial.var(table, base.domain, fiber)
        rel = xi ** r
        for i, c in enumerate(chern, start=1):
            cval = c.value if isinstance(c, RingElement) else c
            if cval and cval.codims() != [i]:
                raise PreconditionError(f"Chern class c{i} = {cval} does not have codimension {i}")
            rel = rel + cval.reembed(table) * xi ** (r - i)
        rels.append(Relation.make(rel, fiber))
    total = make_ring(RingPresentation(name, table, base.domain, tuple(rels), None, bounds))
    return total, PushforwardHandle(base, total, fiber, r)


def proj_pushforward(e: RingElement, handle: PushforwardHandle) -> RingElement:
    """Pushforward to the base: the coefficient of ``xi^(r-1)``."""
    if e.ring != handle.total:
        raise ValueError(f"element of {e.ring.name}, expected {handle.total.name}")
    return handle._to_base(e.value.coefficient_in(handle.fiber, handle.rank - 1))


def gm_torsor_quotient(R: Ring, c_top: RingElement, name: Optional[str] = None) -> Ring:
    """Quotient by the top Chern class of the line bundle defining a G_m-torsor.

    ``c_top`` is adjoined as a relation, using as leading variable the
    first variable that appears only linearly, as a bare monomial with unit
    coefficient, and is not already a leading variable.
    """
    f = c_top.value if isinstance(c_top, RingElement) else c_top
    if f.table != R.table:
        f = f.reembed(R.table)
    f = R.reduce(f, allow_opaque=True)
    if f.is_zero():
        return R
    taken = set(R.leading_variables) | set(R.bounds)
    for v in R.table.names:
        if v in taken or f.degree_in(v) != 1:
            continue
        try:
            rel = Relation.make(f, v)
        except Exception:
            continue
        return make_ring(RingPresentation(name or f"{R.name}/({f})", R.table, R.domain,
                                          R.relations + (rel,), None, dict(R.bounds)))
    raise TriangularizationError(f"{f} has no unit-coefficient linear variable to eliminate", (str(f),))
