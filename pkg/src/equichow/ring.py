"""
Quotient rings presented by triangular monic relations.

Every relation is monic (unit leading coefficient) in its own designated
*leading variable*, and no two relations share one.  After construction the
relation set is inter-reduced and checked for termination and local
confluence (all S-pairs reduce to zero), so reduction is a pure substitution
system with unique normal forms.  This is deliberately much weaker than a
general Groebner basis: it covers exactly the projective-bundle and torsor
presentations the replays need.

Relations that would never fire in a given computation may be omitted from a
presentation and replaced by a *degree bound*: ``bound h < 7`` records that
a relation of degree 7 in ``h`` exists but was left out, and any normal form
reaching ``h^7`` raises :class:`DegreeBoundError` instead of silently
returning a wrong answer.

A relation may also be marked *opaque* when its lower coefficients are
placeholders; any reduction that would consult it raises
:class:`OpaqueRelationError`.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Callable, Dict, Iterable, Mapping, Optional, Sequence, Tuple

from .errors import (
    ConfluenceError,
    DegreeBoundError,
    DuplicateLeadingVariableError,
    ExprSyntaxError,
    IncompatibleRingError,
    NonMonicRelationError,
    OpaqueRelationError,
    ParseError,
    PreconditionError,
    RelationNotKilledError,
    TriangularizationError,
)
from .parser import parse_expr
from .poly import GF, ZZ, CoefficientDomain, Polynomial, VariableTable

_MAX_INTERREDUCE_PASSES = 64
_MAX_NAIVE_STEPS = 200_000


@dataclass(frozen=True)
class Relation:
    """``polynomial = 0`` with unit coefficient on ``leading_variable^leading_degree``."""

    polynomial: Polynomial
    leading_variable: str
    leading_degree: int
    opaque: bool = False

    @classmethod
    def make(cls, poly: Polynomial, leading: str, opaque: bool = False) -> "Relation":
        """Validate ``poly`` as monic in ``leading`` and normalize its leading coefficient to 1."""
        table, domain = poly.table, poly.domain
        if leading not in table:
            raise NonMonicRelationError(f"leading variable {leading!r} not in ring", (str(poly),))
        i = table.index(leading)
        d = poly.degree_in(leading)
        if d < 1:
            raise NonMonicRelationError(
                f"relation {poly} does not involve its leading variable {leading}", (str(poly),))
        pure = tuple(d if j == i else 0 for j in range(len(table)))
        lc = poly.terms.get(pure, 0)
        mixed = [e for e in poly.terms if e[i] == d and e != pure]
        if mixed:
            raise NonMonicRelationError(
                f"relation {poly} has terms divisible by {leading}^{d} besides the leading power",
                (str(poly),))
        if not domain.is_unit(lc):
            raise NonMonicRelationError(
                f"relation {poly} is not monic in {leading}: leading coefficient {lc}", (str(poly),))
        inv = domain.inverse(lc)
        if inv != 1:
            poly = poly.scale(inv)
        return cls(poly, leading, d, opaque)

    @property
    def lead_exponents(self) -> Tuple[int, ...]:
        i = self.polynomial.table.index(self.leading_variable)
        return tuple(self.leading_degree if j == i else 0 for j in range(len(self.polynomial.table)))

    @property
    def tail(self) -> Polynomial:
        """Everything except the leading power: ``lead = -tail`` in the ring."""
        lead = Polynomial.monomial(self.polynomial.table, self.polynomial.domain, self.lead_exponents)
        return self.polynomial - lead

    def __str__(self):
        return str(self.polynomial)


@dataclass(frozen=True)
class RingPresentation:
    name: str
    table: VariableTable
    domain: CoefficientDomain = ZZ
    relations: Tuple[Relation, ...] = ()
    elimination_order: Optional[Tuple[str, ...]] = None
    bounds: Mapping[str, int] = field(default_factory=dict)

    def key(self):
        return (self.table, self.domain,
                tuple((r.polynomial, r.leading_variable, r.opaque) for r in self.relations),
                tuple(sorted(self.bounds.items())))


def _divides(lead, exps):
    return all(a <= b for a, b in zip(lead, exps))


def _naive_reduce(poly: Polynomial, relations: Sequence[Relation],
                  pick: Optional[Callable] = None, limit: int = _MAX_NAIVE_STEPS) -> Polynomial:
    """Rewrite one term at a time until nothing is divisible by a leading power.

    ``pick`` chooses which reducible (term, relation) pair fires next; the
    default takes the first term in canonical order and the first relation.
    Used during construction (before termination is known, hence ``limit``)
    and as the second route in confluence tests.
    """
    table, domain = poly.table, poly.domain
    leads = [(r, r.lead_exponents, -r.tail) for r in relations]
    steps = 0
    while True:
        candidates = [(e, c, r, lead, neg_tail) for e, c in poly.sorted_terms()
                      for r, lead, neg_tail in leads if _divides(lead, e)]
        if not candidates:
            return poly
        e, c, r, lead, neg_tail = pick(candidates) if pick else candidates[0]
        cof = tuple(a - b for a, b in zip(e, lead))
        mono = Polynomial.monomial(table, domain, e, c)
        poly = poly - mono + neg_tail * Polynomial.monomial(table, domain, cof, c)
        steps += 1
        if steps > limit:
            raise TriangularizationError(
                f"reduction by {[str(r) for r in relations]} does not terminate",
                tuple(str(r) for r in relations))


def _interreduce(relations: Sequence[Relation]) -> Tuple[Relation, ...]:
    rels = list(relations)
    for _ in range(_MAX_INTERREDUCE_PASSES):
        changed = False
        for i, rel in enumerate(rels):
            others = [r for j, r in enumerate(rels) if j != i]
            if not others:
                continue
            tail = _naive_reduce(rel.tail, others)
            if tail == rel.tail:
                continue
            lead = Polynomial.monomial(tail.table, tail.domain, rel.lead_exponents)
            try:
                new = Relation.make(lead + tail, rel.leading_variable, rel.opaque or
                                    _uses_opaque(rel.tail, others))
            except NonMonicRelationError as exc:
                raise NonMonicRelationError(
                    f"after eliminating other leading variables: {exc}",
                    (str(rel),) + tuple(str(o) for o in others)) from None
            rels[i] = new
            changed = True
        if not changed:
            return tuple(rels)
    raise TriangularizationError("inter-reduction did not stabilize",
                                 tuple(str(r) for r in relations))


def _uses_opaque(poly, relations):
    return any(r.opaque and any(_divides(r.lead_exponents, e) for e in poly.terms) for r in relations)


def _lex_key(exps, positions):
    return tuple(exps[p] for p in positions)


def _order_violation(relations, order, table):
    """First (relation, blocking relation) pair that breaks termination for ``order``."""
    positions = [table.index(v) for v in order]
    by_var = {r.leading_variable: r for r in relations}
    for r in relations:
        lead_key = _lex_key(r.lead_exponents, positions)
        for e in r.tail.terms:
            key = _lex_key(e, positions)
            if key >= lead_key:
                # the earliest leading variable where the tail monomial is not smaller
                for v, p in zip(order, positions):
                    if e[p] != r.lead_exponents[p]:
                        return r, by_var[v]
                return r, r
    return None


def _find_order(relations, table, requested):
    if requested is not None:
        lead_vars = {r.leading_variable for r in relations}
        if set(requested) != lead_vars:
            raise ConfluenceError(
                f"elimination order {list(requested)} must list exactly the leading variables "
                f"{sorted(lead_vars)}")
        bad = _order_violation(relations, requested, table)
        if bad:
            raise ConfluenceError(
                f"relation {bad[0]} is not dominated by its leading power in elimination order "
                f"{list(requested)} (blocked by {bad[1]})", (str(bad[0]), str(bad[1])))
        return tuple(requested)
    lead_vars = [r.leading_variable for r in relations]
    first_bad = None
    candidates = itertools.permutations(lead_vars) if len(lead_vars) <= 7 else [tuple(lead_vars)]
    for order in candidates:
        bad = _order_violation(relations, order, table)
        if bad is None:
            return tuple(order)
        first_bad = first_bad or bad
    raise ConfluenceError(
        f"no elimination order makes reduction terminate; offending pair: "
        f"{first_bad[0]} / {first_bad[1]}", (str(first_bad[0]), str(first_bad[1])))


class Ring:
    """A validated triangular presentation; create with :func:`make_ring`."""

    def __init__(self, presentation: RingPresentation, _validated=False):
        if not _validated:
            raise TypeError("use make_ring() to construct a Ring")
        self.presentation = presentation
        self.name = presentation.name
        self.table = presentation.table
        self.domain = presentation.domain
        self.relations = presentation.relations
        self.elimination_order = presentation.elimination_order
        self.bounds = MappingProxyType(dict(presentation.bounds))
        by_var = {r.leading_variable: r for r in self.relations}
        self._rules = [(by_var[v], by_var[v].lead_exponents, -by_var[v].tail)
                       for v in self.elimination_order]
        self._bound_pos = [(self.table.index(v), b, v) for v, b in sorted(self.bounds.items())]
        self._memo: Dict[Tuple[int, ...], Tuple[Dict, bool]] = {}
        self._key = presentation.key()

    # -- element construction ----------------------------------------
    def __call__(self, x) -> "RingElement":
        if isinstance(x, RingElement):
            if x.ring == self:
                return x
            raise IncompatibleRingError(f"element of {x.ring.name} is not in {self.name}")
        if isinstance(x, str):
            return self.normal_form(parse_expr(x, self.table, self.domain))
        if isinstance(x, int) and not isinstance(x, bool):
            return self.normal_form(Polynomial.constant(self.table, self.domain, x))
        if isinstance(x, Polynomial):
            return self.normal_form(x)
        raise TypeError(f"cannot convert {type(x).__name__} into a ring element")

    def gen(self, name: str) -> "RingElement":
        return self.normal_form(Polynomial.var(self.table, self.domain, name))

    def gens(self) -> Dict[str, "RingElement"]:
        return {n: self.gen(n) for n in self.table.names}

    def zero(self):
        return RingElement(self, Polynomial.zero(self.table, self.domain))

    def one(self):
        return self(1)

    @property
    def leading_variables(self) -> Tuple[str, ...]:
        return tuple(r.leading_variable for r in self.relations)

    # -- reduction ----------------------------------------------------
    def _coerce_poly(self, f: Polynomial) -> Polynomial:
        if f.table != self.table:
            f = f.reembed(self.table)
        if f.domain != self.domain:
            f = f.change_domain(self.domain)
        return f

    def _nf_mono(self, exps, allow_opaque):
        hit = self._memo.get(exps)
        if hit is None:
            hit = self._compute_nf_mono(exps)
            self._memo[exps] = hit
        terms, opaque = hit
        if opaque and not allow_opaque:
            raise OpaqueRelationError(
                f"reducing {Polynomial.monomial(self.table, self.domain, exps)} in {self.name} "
                f"consults an opaque relation")
        return terms

    def _compute_nf_mono(self, exps):
        for rel, lead, neg_tail in self._rules:
            if _divides(lead, exps):
                cof = tuple(a - b for a, b in zip(exps, lead))
                red = self.domain.reduce
                out: Dict[Tuple[int, ...], int] = {}
                opaque = rel.opaque
                for u, c in neg_tail.terms.items():
                    sub = self._memo.get(tuple(a + b for a, b in zip(u, cof)))
                    if sub is None:
                        key = tuple(a + b for a, b in zip(u, cof))
                        sub = self._compute_nf_mono(key)
                        self._memo[key] = sub
                    sub_terms, sub_opaque = sub
                    opaque = opaque or sub_opaque
                    for v, d in sub_terms.items():
                        out[v] = out.get(v, 0) + c * d
                return {v: red(c) for v, c in out.items() if red(c)}, opaque
        return {exps: 1}, False

    def reduce(self, f: Polynomial, allow_opaque: bool = False) -> Polynomial:
        """Normal form of ``f`` as a bare :class:`Polynomial`."""
        f = self._coerce_poly(f)
        if not self._rules:
            out = f
        else:
            red = self.domain.reduce
            acc: Dict[Tuple[int, ...], int] = {}
            for e, c in f.terms.items():
                for v, d in self._nf_mono(e, allow_opaque).items():
                    acc[v] = acc.get(v, 0) + c * d
            out = Polynomial._raw(self.table, self.domain,
                                  {e: red(c) for e, c in acc.items() if red(c)})
        for i, bound, name in self._bound_pos:
            for e in out.terms:
                if e[i] >= bound:
                    raise DegreeBoundError(
                        f"{name}^{e[i]} reached in {self.name}, where the omitted relation of "
                        f"degree {bound} in {name} would fire")
        return out

    def normal_form(self, f: Polynomial, allow_opaque: bool = False) -> "RingElement":
        return RingElement(self, self.reduce(f, allow_opaque))

    def reduce_with_order(self, f: Polynomial, relation_order: Sequence[str],
                          term_choice: str = "first") -> Polynomial:
        """Naive rewriting that prefers relations in ``relation_order``.

        Independent of the memoized reducer; confluence means both agree.
        ``term_choice`` is ``"first"`` (largest term first) or ``"last"``.
        """
        f = self._coerce_poly(f)
        rank = {v: i for i, v in enumerate(relation_order)}
        rels = sorted(self.relations, key=lambda r: rank.get(r.leading_variable, len(rank)))

        def pick(cands):
            if term_choice == "last":
                last_e = cands[-1][0]
                cands = [c for c in cands if c[0] == last_e]
            return cands[0]

        return _naive_reduce(f, rels, pick)

    # -- structure ----------------------------------------------------
    def base_change(self, p: int) -> Tuple["Ring", Callable[["RingElement"], "RingElement"]]:
        return base_change_mod_p(self, p)

    def extended(self, name: str, new_vars: Iterable[Tuple[str, int]] = (),
                 new_relations: Iterable[Tuple[str, str]] = (),
                 bounds: Optional[Mapping[str, int]] = None, opaque: Iterable[str] = ()) -> "Ring":
        """This ring with extra variables, relations ``(expr, leading)`` and bounds."""
        new_vars = list(new_vars)
        table = self.table.extend([n for n, _ in new_vars], [w for _, w in new_vars])
        rels = [Relation(r.polynomial.reembed(table), r.leading_variable, r.leading_degree, r.opaque)
                for r in self.relations]
        opaque = set(opaque)
        for text, lead in new_relations:
            poly = text if isinstance(text, Polynomial) else parse_expr(text, table, self.domain)
            rels.append(Relation.make(poly.reembed(table), lead, opaque=lead in opaque))
        all_bounds = dict(self.bounds)
        all_bounds.update(bounds or {})
        return make_ring(RingPresentation(name, table, self.domain, tuple(rels), None, all_bounds))

    def to_dsl(self) -> str:
        return ring_to_dsl(self)

    def __eq__(self, other):
        return isinstance(other, Ring) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        rels = ", ".join(str(r) for r in self.relations)
        return f"<Ring {self.name} over {self.domain}: {list(self.table.names)} / ({rels})>"

    def __reduce__(self):
        return (make_ring, (self.presentation,))


class RingElement:
    """A normal-form polynomial together with its ring."""

    __slots__ = ("ring", "value")

    def __init__(self, ring: Ring, value: Polynomial):
        self.ring = ring
        self.value = value

    def _other(self, other):
        if isinstance(other, RingElement):
            if other.ring != self.ring:
                raise IncompatibleRingError(
                    f"elements of different rings: {self.ring.name} and {other.ring.name}")
            return other.value
        if isinstance(other, Polynomial):
            return self.ring.reduce(other)
        if isinstance(other, int) and not isinstance(other, bool):
            return Polynomial.constant(self.ring.table, self.ring.domain, other)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return RingElement(self.ring, self.value + o)  # sum of normal forms is normal

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return RingElement(self.ring, self.value - o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return RingElement(self.ring, o - self.value)

    def __neg__(self):
        return RingElement(self.ring, -self.value)

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self.ring.normal_form(self.value * o)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result, base = self.ring.one(), self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, RingElement):
            return self.ring == other.ring and self.value == other.value
        if isinstance(other, int) and not isinstance(other, bool):
            return self.value == Polynomial.constant(self.ring.table, self.ring.domain, other)
        if isinstance(other, str):
            return self == self.ring(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, self.value))

    def __bool__(self):
        return not self.value.is_zero()

    def is_zero(self) -> bool:
        return self.value.is_zero()

    def coefficient_of(self, var: str, k: int) -> "RingElement":
        return coefficient_of(self, var, k)

    def __str__(self):
        return str(self.value)

    def __repr__(self):
        return f"{self.ring.name}({str(self.value)!r})"


def make_ring(presentation: RingPresentation) -> Ring:
    """Validate ``presentation`` and return a ring ready for reduction.

    Steps: reject duplicate leading variables and non-monic relations,
    inter-reduce to triangular form, find an elimination order in which
    every leading power dominates its tail, then check that every S-pair
    reduces to zero.
    """
    table, domain = presentation.table, presentation.domain
    rels = []
    seen = {}
    for r in presentation.relations:
        poly = r.polynomial
        if poly.table != table:
            poly = poly.reembed(table)
        if poly.domain != domain:
            poly = poly.change_domain(domain)
        rel = Relation.make(poly, r.leading_variable, r.opaque)
        if rel.leading_variable in seen:
            raise DuplicateLeadingVariableError(
                f"relations {seen[rel.leading_variable]} and {rel} share leading variable "
                f"{rel.leading_variable}", (str(seen[rel.leading_variable]), str(rel)))
        seen[rel.leading_variable] = rel
        rels.append(rel)
    for v, b in presentation.bounds.items():
        if v not in table:
            raise PreconditionError(f"bound on unknown variable {v!r}")
        if not isinstance(b, int) or b < 1:
            raise PreconditionError(f"bound on {v} must be a positive integer")
        if v in seen:
            raise PreconditionError(f"{v} has both a relation and a degree bound")
    rels = _interreduce(rels)
    order = _find_order(rels, table, presentation.elimination_order)
    validated = RingPresentation(presentation.name, table, domain, tuple(rels), order,
                                 dict(presentation.bounds))
    ring = Ring(validated, _validated=True)
    for a, b in itertools.combinations(rels, 2):
        ma = Polynomial.monomial(table, domain, a.lead_exponents)
        mb = Polynomial.monomial(table, domain, b.lead_exponents)
        s_pair = mb * a.polynomial - ma * b.polynomial
        rest = _reduce_unbounded(ring, s_pair)
        if not rest.is_zero():
            raise ConfluenceError(f"S-pair of {a} and {b} reduces to {rest}, not 0", (str(a), str(b)))
    return ring


def _reduce_unbounded(ring, poly):
    acc = Polynomial.zero(ring.table, ring.domain)
    for e, c in poly.terms.items():
        acc = acc + Polynomial._raw(ring.table, ring.domain,
                                    dict(ring._nf_mono(e, True))).scale(c)
    return acc


def normal_form(f: Polynomial, R: Ring) -> RingElement:
    return R.normal_form(f)


def coefficient_of(e: RingElement, v: str, k: int) -> RingElement:
    """Coefficient of ``v^k`` in the normal form of ``e`` (an element free of ``v``)."""
    if v not in e.ring.table:
        raise KeyError(f"{v!r} is not a variable of {e.ring.name}")
    return RingElement(e.ring, e.value.coefficient_in(v, k))


def base_change_mod_p(R: Ring, p: int) -> Tuple[Ring, Callable[[RingElement], RingElement]]:
    """The same presentation with coefficients in F_p, plus an element transporter."""
    domain = GF(p)  # validates primality
    if R.domain.modulus is not None:
        if R.domain.modulus != p:
            raise IncompatibleRingError(f"cannot reduce a ring over {R.domain} modulo {p}")
        return R, lambda x: R(x)
    rels = tuple(Relation(r.polynomial.change_domain(domain), r.leading_variable,
                          r.leading_degree, r.opaque) for r in R.relations)
    target = make_ring(RingPresentation(f"{R.name}_F{p}", R.table, domain, rels, None, dict(R.bounds)))

    def transport(x):
        if isinstance(x, RingElement):
            if x.ring != R:
                raise IncompatibleRingError(f"element of {x.ring.name}, expected {R.name}")
            x = x.value
        return target.normal_form(x)

    return target, transport


class RingMap:
    """Homomorphism given by variable images; build with :func:`make_ring_map`."""

    def __init__(self, source: Ring, target: Ring, images: Mapping[str, RingElement]):
        self.source = source
        self.target = target
        self.images = MappingProxyType(dict(images))
        self._image_polys = {k: v.value for k, v in images.items()}

    def apply_poly(self, f: Polynomial) -> RingElement:
        f = self.source._coerce_poly(f)
        val = f.substitute(self._image_polys, self.target.table, self.target.domain)
        return self.target.normal_form(val)

    def __call__(self, x) -> RingElement:
        if isinstance(x, RingElement):
            if x.ring != self.source:
                raise IncompatibleRingError(f"element of {x.ring.name}, expected {self.source.name}")
            return self.apply_poly(x.value)
        return self.apply_poly(self.source(x).value)

    def __repr__(self):
        imgs = ", ".join(f"{k}->{v}" for k, v in self.images.items())
        return f"<RingMap {self.source.name} -> {self.target.name}: {imgs}>"


def make_ring_map(src: Ring, dst: Ring, images: Mapping[str, object]) -> RingMap:
    """Build a map from variable images and check that every relation of ``src`` dies."""
    if src.domain.modulus is not None and dst.domain != src.domain:
        raise IncompatibleRingError(f"no ring map from {src.domain} to {dst.domain}")
    missing = [v for v in src.table.names if v not in images]
    if missing:
        raise PreconditionError(f"no image given for {missing}")
    extra = [v for v in images if v not in src.table]
    if extra:
        raise PreconditionError(f"images given for unknown variables {extra}")
    imgs = {v: dst(images[v]) for v in src.table.names}
    phi = RingMap(src, dst, imgs)
    for rel in src.relations:
        image = phi.apply_poly(rel.polynomial)
        if not image.is_zero():
            raise RelationNotKilledError(str(rel), str(image))
    return phi


# -- ring-definition DSL ------------------------------------------------

_STMT_HEAD = re.compile(r"\s*(ring|vars|rel|bound|order)\b")


def _strip_comments(text):
    return "\n".join(line.split("#", 1)[0] for line in text.splitlines())


def parse_ring_dsl(text: str) -> Ring:
    """Parse the ring-definition DSL::

        ring P2 over Z;
        vars c1:1, c2:2, c3:3, t:1;
        rel t^3 + c1*t^2 + c2*t + c3 leading t;
        bound h < 10;        # omitted relation of degree 10 in h
        order t;             # optional elimination order

    A relation line may end with ``opaque``.  Errors carry the statement
    number and an offset inside the statement.
    """
    clean = _strip_comments(text)
    name, domain, table = None, None, None
    rel_specs, bounds, order = [], {}, None
    for idx, stmt in enumerate(clean.split(";"), start=1):
        if not stmt.strip():
            continue
        m = _STMT_HEAD.match(stmt)
        if not m:
            raise ExprSyntaxError(f"statement {idx}: expected ring/vars/rel/bound/order",
                                  stmt.strip(), 0)
        head, body = m.group(1), stmt[m.end():].strip()
        if head == "ring":
            mm = re.fullmatch(r"([A-Za-z][A-Za-z0-9_]*)\s+over\s+(Z|Fp\(\s*(\d+)\s*\))", body)
            if not mm:
                raise ExprSyntaxError(f"statement {idx}: expected 'ring NAME over Z|Fp(p)'", body, 0)
            name = mm.group(1)
            domain = ZZ if mm.group(2) == "Z" else GF(int(mm.group(3)))
        elif head == "vars":
            items = []
            for part in body.split(","):
                mm = re.fullmatch(r"\s*([A-Za-z][A-Za-z0-9_]*)\s*(?::\s*(\d+))?\s*", part)
                if not mm:
                    raise ExprSyntaxError(f"statement {idx}: bad variable declaration {part.strip()!r}",
                                          body, max(body.find(part.strip()), 0))
                items.append((mm.group(1), int(mm.group(2) or 1)))
            try:
                table = VariableTable.of(items)
            except ValueError as exc:
                raise ExprSyntaxError(f"statement {idx}: {exc}", body, 0) from None
        elif head == "rel":
            mm = re.fullmatch(r"(.*?)\s+leading\s+([A-Za-z][A-Za-z0-9_]*)(\s+opaque)?", body, re.S)
            if not mm:
                raise ExprSyntaxError(f"statement {idx}: expected 'rel POLY leading VAR'", body, len(body))
            rel_specs.append((idx, mm.group(1).strip(), mm.group(2), bool(mm.group(3))))
        elif head == "bound":
            mm = re.fullmatch(r"([A-Za-z][A-Za-z0-9_]*)\s*<\s*(\d+)", body)
            if not mm:
                raise ExprSyntaxError(f"statement {idx}: expected 'bound VAR < N'", body, 0)
            bounds[mm.group(1)] = int(mm.group(2))
        elif head == "order":
            order = tuple(v.strip() for v in body.split(",") if v.strip())
    if name is None or table is None:
        raise ExprSyntaxError("ring file needs a 'ring' and a 'vars' statement", text, 0)
    rels = []
    for idx, expr, lead, opaque in rel_specs:
        try:
            poly = parse_expr(expr, table, domain)
        except ParseError as exc:
            raise type(exc)(f"statement {idx}: {exc.message}", exc.text, exc.pos) from None
        rels.append(Relation.make(poly, lead, opaque))
    return make_ring(RingPresentation(name, table, domain, tuple(rels), order, bounds))


def ring_to_dsl(ring: Ring) -> str:
    lines = [f"ring {ring.name} over {ring.domain};",
             "vars " + ", ".join(f"{n}:{w}" for n, w in ring.table.items()) + ";"]
    for r in ring.relations:
        lines.append(f"rel {r.polynomial} leading {r.leading_variable}{' opaque' if r.opaque else ''};")
    for v, b in sorted(ring.bounds.items()):
        lines.append(f"bound {v} < {b};")
    if len(ring.relations) > 1:
        lines.append("order " + ", ".join(ring.elimination_order) + ";")
    return "\n".join(lines) + "\n"
