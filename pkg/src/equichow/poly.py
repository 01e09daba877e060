"""
Exact sparse multivariate polynomials over Z and F_p.

A :class:`Polynomial` is an immutable map from exponent tuples to nonzero
integer coefficients, tied to a :class:`VariableTable` (names plus a positive
codimension weight per variable) and a :class:`CoefficientDomain`.  Python
integers are arbitrary precision, so nothing here can overflow.

Canonical printing sorts terms by codimension (descending) and then
lexicographically by exponent vector in table order (descending)::

    >>> T = VariableTable(("s", "t"))
    >>> s, t = Polynomial.var(T, ZZ, "s"), Polynomial.var(T, ZZ, "t")
    >>> str((s + t) * (s - t))
    's^2 - t^2'
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from types import MappingProxyType
from typing import Dict, Iterable, Mapping, Optional, Tuple

from .errors import IncompatibleRingError

Exponents = Tuple[int, ...]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class CoefficientDomain:
    """Either the integers (``modulus is None``) or the prime field F_p."""

    modulus: Optional[int] = None

    def __post_init__(self):
        if self.modulus is not None and not is_prime(self.modulus):
            raise ValueError(f"modulus must be prime, got {self.modulus}")

    @property
    def kind(self) -> str:
        return "integer-ring" if self.modulus is None else "prime-field"

    @property
    def characteristic(self) -> int:
        return 0 if self.modulus is None else self.modulus

    def reduce(self, c: int) -> int:
        return c if self.modulus is None else c % self.modulus

    def is_unit(self, c: int) -> bool:
        if self.modulus is None:
            return c in (1, -1)
        return c % self.modulus != 0

    def inverse(self, c: int) -> int:
        if self.modulus is None:
            if c not in (1, -1):
                raise ZeroDivisionError(f"{c} is not a unit in Z")
            return c
        return pow(c, -1, self.modulus)

    def __str__(self):
        return "Z" if self.modulus is None else f"Fp({self.modulus})"


ZZ = CoefficientDomain()


def GF(p: int) -> CoefficientDomain:
    return CoefficientDomain(p)


@dataclass(frozen=True)
class VariableTable:
    """Ordered variable names with codimension weights (default 1)."""

    names: Tuple[str, ...]
    weights: Tuple[int, ...] = None
    _index: Mapping[str, int] = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        names = tuple(self.names)
        weights = tuple(self.weights) if self.weights is not None else (1,) * len(names)
        if len(weights) != len(names):
            raise ValueError("one weight per variable is required")
        if len(set(names)) != len(names):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise ValueError(f"duplicate variable names: {dup}")
        for n, w in zip(names, weights):
            if not _is_identifier(n):
                raise ValueError(f"invalid variable name {n!r}")
            if not isinstance(w, int) or w < 1:
                raise ValueError(f"weight of {n} must be a positive integer")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "_index", MappingProxyType({n: i for i, n in enumerate(names)}))

    def __reduce__(self):
        return (VariableTable, (self.names, self.weights))

    @classmethod
    def of(cls, spec: Mapping[str, int] | Iterable[Tuple[str, int]]) -> "VariableTable":
        items = list(spec.items()) if isinstance(spec, Mapping) else list(spec)
        return cls(tuple(n for n, _ in items), tuple(w for _, w in items))

    def __len__(self):
        return len(self.names)

    def __contains__(self, name):
        return name in self._index

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r}") from None

    def weight(self, name: str) -> int:
        return self.weights[self.index(name)]

    def codim(self, exps: Exponents) -> int:
        return sum(e * w for e, w in zip(exps, self.weights))

    def extend(self, names, weights=None) -> "VariableTable":
        names = tuple(names)
        weights = tuple(weights) if weights is not None else (1,) * len(names)
        return VariableTable(self.names + names, self.weights + weights)

    def without(self, drop) -> "VariableTable":
        drop = set(drop)
        keep = [(n, w) for n, w in zip(self.names, self.weights) if n not in drop]
        return VariableTable.of(keep)

    def items(self):
        return zip(self.names, self.weights)


def _is_identifier(name: str) -> bool:
    return (
        isinstance(name, str)
        and bool(name)
        and name[0].isascii()
        and name[0].isalpha()
        and all(ch.isascii() and (ch.isalnum() or ch == "_") for ch in name)
    )


class Polynomial:
    """Immutable sparse polynomial; zero coefficients are never stored."""

    __slots__ = ("table", "domain", "_terms", "_hash")

    def __init__(self, table: VariableTable, domain: CoefficientDomain = ZZ,
                 terms: Optional[Mapping[Exponents, int]] = None):
        self.table = table
        self.domain = domain
        clean: Dict[Exponents, int] = {}
        n = len(table)
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != n:
                raise ValueError(f"exponent vector {exps} does not match {n} variables")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            c = domain.reduce(int(c))
            if c:
                c = domain.reduce(clean.get(exps, 0) + c)
                if c:
                    clean[exps] = c
                else:
                    clean.pop(exps, None)
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, table, domain, terms):
        # terms must already be reduced and zero-free
        obj = cls.__new__(cls)
        obj.table = table
        obj.domain = domain
        obj._terms = terms
        obj._hash = None
        return obj

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, table, domain=ZZ):
        return cls._raw(table, domain, {})

    @classmethod
    def constant(cls, table, domain, c: int):
        return cls(table, domain, {(0,) * len(table): c})

    @classmethod
    def var(cls, table, domain, name: str, power: int = 1):
        exps = [0] * len(table)
        exps[table.index(name)] = power
        return cls(table, domain, {tuple(exps): 1})

    @classmethod
    def monomial(cls, table, domain, exps, c=1):
        return cls(table, domain, {tuple(exps): c})

    # -- introspection ------------------------------------------------
    @property
    def terms(self) -> Mapping[Exponents, int]:
        return MappingProxyType(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_term(self) -> int:
        return self._terms.get((0,) * len(self.table), 0)

    def variables(self) -> Tuple[str, ...]:
        used = [False] * len(self.table)
        for exps in self._terms:
            for i, e in enumerate(exps):
                if e:
                    used[i] = True
        return tuple(n for n, u in zip(self.table.names, used) if u)

    def degree_in(self, name: str) -> int:
        i = self.table.index(name)
        return max((exps[i] for exps in self._terms), default=-1)

    def codims(self):
        return sorted({self.table.codim(e) for e in self._terms})

    def is_homogeneous(self) -> bool:
        return len(self.codims()) <= 1

    def content(self) -> int:
        """gcd of the coefficients (0 for the zero polynomial)."""
        g = 0
        for c in self._terms.values():
            g = gcd(g, c)
        return g

    def sorted_terms(self):
        codim = self.table.codim
        return sorted(self._terms.items(), key=lambda kv: (codim(kv[0]), kv[0]), reverse=True)

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.table != self.table:
                raise IncompatibleRingError(
                    f"variable tables differ: {self.table.names} vs {other.table.names}")
            if other.domain != self.domain:
                raise IncompatibleRingError(f"domains differ: {self.domain} vs {other.domain}")
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return Polynomial.constant(self.table, self.domain, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        red = self.domain.reduce
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = red(out.get(e, 0) + c)
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial._raw(self.table, self.domain, out)

    __radd__ = __add__

    def __neg__(self):
        red = self.domain.reduce
        return Polynomial._raw(self.table, self.domain, {e: red(-c) for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        red = self.domain.reduce
        out: Dict[Exponents, int] = {}
        b_items = list(other._terms.items())
        for ea, ca in self._terms.items():
            for eb, cb in b_items:
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = out.get(e, 0) + ca * cb
        out = {e: red(c) for e, c in out.items()}
        return Polynomial._raw(self.table, self.domain, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.constant(self.table, self.domain, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c: int) -> "Polynomial":
        red = self.domain.reduce
        out = {e: red(v * c) for e, v in self._terms.items()}
        return Polynomial._raw(self.table, self.domain, {e: v for e, v in out.items() if v})

    def exact_div(self, c: int) -> "Polynomial":
        """Divide every coefficient by the integer ``c``; raises if inexact."""
        if self.domain.modulus is not None:
            return self.scale(self.domain.inverse(c))
        out = {}
        for e, v in self._terms.items():
            q, r = divmod(v, c)
            if r:
                raise ArithmeticError(f"{v} not divisible by {c}")
            out[e] = q
        return Polynomial._raw(self.table, self.domain, out)

    def __eq__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            other = Polynomial.constant(self.table, self.domain, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.table == other.table and self.domain == other.domain and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.table, self.domain, frozenset(self._terms.items())))
        return self._hash

    # -- structural operations ----------------------------------------
    def graded_components(self) -> Dict[int, "Polynomial"]:
        buckets: Dict[int, Dict[Exponents, int]] = {}
        for e, c in self._terms.items():
            buckets.setdefault(self.table.codim(e), {})[e] = c
        return {d: Polynomial._raw(self.table, self.domain, t) for d, t in sorted(buckets.items())}

    def coefficient_in(self, name: str, k: int) -> "Polynomial":
        """Coefficient of ``name^k`` as a polynomial free of ``name`` (same table)."""
        i = self.table.index(name)
        out = {}
        for e, c in self._terms.items():
            if e[i] == k:
                out[e[:i] + (0,) + e[i + 1:]] = c
        return Polynomial._raw(self.table, self.domain, out)

    def change_domain(self, domain: CoefficientDomain) -> "Polynomial":
        if domain == self.domain:
            return self
        if self.domain.modulus is not None and domain.modulus != self.domain.modulus:
            raise IncompatibleRingError(f"cannot move coefficients from {self.domain} to {domain}")
        return Polynomial(self.table, domain, self._terms)

    def reduce_mod(self, p: int) -> "Polynomial":
        return self.change_domain(GF(p))

    def reembed(self, table: VariableTable) -> "Polynomial":
        """Re-index into ``table``; every variable actually used must exist there."""
        if table == self.table:
            return self
        mapping = []
        for i, name in enumerate(self.table.names):
            mapping.append(table.index(name) if name in table else None)
        n = len(table)
        out = {}
        for e, c in self._terms.items():
            new = [0] * n
            for i, k in enumerate(e):
                if k:
                    j = mapping[i]
                    if j is None:
                        raise IncompatibleRingError(
                            f"variable {self.table.names[i]} missing from target table")
                    new[j] = k
            out[tuple(new)] = c
        return Polynomial._raw(table, self.domain, out)

    def substitute(self, images: Mapping[str, "Polynomial"], table: VariableTable,
                   domain: Optional[CoefficientDomain] = None) -> "Polynomial":
        """Evaluate at ``images`` (one per variable of ``self.table``) in ``table``.

        Variables without an image are carried over by name when ``table``
        contains them.
        """
        domain = domain or self.domain
        gens = []
        for name in self.table.names:
            if name in images:
                img = images[name]
                if img.table != table:
                    img = img.reembed(table)
                gens.append(img.change_domain(domain))
            elif name in table:
                gens.append(Polynomial.var(table, domain, name))
            else:
                gens.append(None)
        powers = [dict() for _ in gens]

        def power(i, k):
            cache = powers[i]
            if k not in cache:
                if gens[i] is None:
                    raise IncompatibleRingError(f"no image for variable {self.table.names[i]}")
                cache[k] = gens[i] ** k
            return cache[k]

        acc = Polynomial.zero(table, domain)
        one = Polynomial.constant(table, domain, 1)
        for e, c in self._terms.items():
            term = one
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            acc = acc + term.scale(c)
        return acc

    # -- printing -----------------------------------------------------
    def __str__(self):
        if not self._terms:
            return "0"
        pieces = []
        for idx, (e, c) in enumerate(self.sorted_terms()):
            mono = _monomial_str(self.table.names, e)
            mag = abs(c)
            body = mono if (mag == 1 and mono) else (f"{mag}*{mono}" if mono else str(mag))
            if idx == 0:
                pieces.append(("-" if c < 0 else "") + body)
            else:
                pieces.append((" - " if c < 0 else " + ") + body)
        return "".join(pieces)

    def __repr__(self):
        return f"Polynomial({str(self)!r} over {self.domain})"


def _monomial_str(names, exps) -> str:
    parts = []
    for n, k in zip(names, exps):
        if k == 1:
            parts.append(n)
        elif k > 1:
            parts.append(f"{n}^{k}")
    return "*".join(parts)


def arith(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    """Binary ``add``/``sub``/``mul``; both operands must share table and domain."""
    if not isinstance(a, Polynomial) or not isinstance(b, Polynomial):
        raise TypeError("arith expects two Polynomial operands")
    a._coerce(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def graded_components(f: Polynomial) -> Dict[int, Polynomial]:
    return f.graded_components()
