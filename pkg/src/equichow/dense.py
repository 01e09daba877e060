"""
Brute-force dense polynomial arithmetic, used as an independent oracle.

Nothing here touches the sparse engine or the ring machinery: polynomials
are numpy object arrays indexed by exponent vectors, products are explicit
convolutions, and the projective-plane relation is applied by hand.
"""

from __future__ import annotations

from typing import Dict, Sequence, Tuple

import numpy as np


class Dense:
    """Polynomial in a fixed variable list with a fixed per-variable degree cap."""

    def __init__(self, names: Sequence[str], cap: int, array=None):
        self.names = tuple(names)
        self.cap = cap
        shape = (cap + 1,) * len(self.names)
        if array is None:
            array = np.zeros(shape, dtype=object)
            array[...] = 0
        self.a = array

    def like(self, array=None):
        return Dense(self.names, self.cap, array)

    @classmethod
    def const(cls, names, cap, c):
        d = cls(names, cap)
        d.a[(0,) * len(d.names)] = c
        return d

    @classmethod
    def var(cls, names, cap, name, coeff=1):
        d = cls(names, cap)
        idx = [0] * len(d.names)
        idx[d.names.index(name)] = 1
        d.a[tuple(idx)] = coeff
        return d

    @classmethod
    def linear(cls, names, cap, coeffs: Dict[str, int], const=0):
        d = cls.const(names, cap, const)
        for n, c in coeffs.items():
            d = d + cls.var(names, cap, n, c)
        return d

    def __add__(self, other):
        return self.like(self.a + other.a)

    def __sub__(self, other):
        return self.like(self.a - other.a)

    def __neg__(self):
        return self.like(-self.a)

    def scale(self, c):
        return self.like(self.a * c)

    def __mul__(self, other):
        out = self.like()
        mine = [tuple(i) for i in np.argwhere(self.a != 0)]
        theirs = [tuple(j) for j in np.argwhere(other.a != 0)]
        for i in mine:
            for j in theirs:
                k = tuple(x + y for x, y in zip(i, j))
                if max(k) > self.cap:
                    raise OverflowError("dense degree cap exceeded")
                out.a[k] += self.a[i] * other.a[j]
        return out

    def slice_var(self, name, k) -> "Dense":
        """Coefficient of ``name^k`` as a polynomial in the same variables."""
        pos = self.names.index(name)
        out = self.like()
        idx = [slice(None)] * len(self.names)
        idx[pos] = k
        dst = [slice(None)] * len(self.names)
        dst[pos] = 0
        out.a[tuple(dst)] = self.a[tuple(idx)]
        return out

    def shift_var(self, name, k) -> "Dense":
        return self * Dense.var(self.names, self.cap, name) ** k if k else self

    def __pow__(self, k):
        out = Dense.const(self.names, self.cap, 1)
        for _ in range(k):
            out = out * self
        return out

    def mod(self, p):
        if not p:
            return self
        return self.like(np.vectorize(lambda c: c % p, otypes=[object])(self.a))

    def terms(self) -> Dict[Tuple[int, ...], int]:
        return {tuple(int(x) for x in i): int(self.a[tuple(i)]) for i in np.argwhere(self.a != 0)}

    def substitute(self, images: Dict[str, "Dense"]) -> "Dense":
        out = self.like()
        for exps, c in self.terms().items():
            term = Dense.const(self.names, self.cap, c)
            for n, e in zip(self.names, exps):
                if e:
                    base = images.get(n) or Dense.var(self.names, self.cap, n)
                    term = term * base ** e
            out = out + term
        return out

    def __eq__(self, other):
        return self.names == other.names and bool(np.all(self.a == other.a))


def reduce_t_cubic(f: Dense, c: Tuple[Dense, Dense, Dense], name="t") -> Dense:
    """Rewrite t^3 and t^4 through ``t^3 = -c1 t^2 - c2 t - c3`` in a single pass."""
    c1, c2, c3 = c
    t = lambda k: Dense.var(f.names, f.cap, name) ** k
    if any(f.slice_var(name, k).a.any() for k in range(5, f.cap + 1)):
        raise ValueError("oracle handles t-degree at most 4")
    t3 = -(c1 * t(2)) - c2 * t(1) - c3
    t4 = (c1 * c1 - c2) * t(2) + (c1 * c2 - c3) * t(1) + c1 * c3
    out = f.slice_var(name, 0)
    for k, img in ((1, t(1)), (2, t(2)), (3, t3), (4, t4)):
        out = out + f.slice_var(name, k) * img
    return out


C_VARS = ("c1", "c2", "c3", "s", "h", "t")
L_VARS = ("l1", "l2", "l3", "s", "h", "t")


def _c_classes(names, cap):
    return tuple(Dense.var(names, cap, f"c{i}") for i in (1, 2, 3))


def _l_classes(names, cap):
    l1, l2, l3 = (Dense.var(names, cap, f"l{i}") for i in (1, 2, 3))
    return l1 + l2 + l3, l1 * l2 + l1 * l3 + l2 * l3, l1 * l2 * l3


def d1_xi0_c(n: int) -> Dense:
    """t^2-coefficient of the D1 product, computed at the level of c-classes via Vieta."""
    cap = 6
    V = lambda name, k=1: Dense.var(C_VARS, cap, name, k)
    x = V("s") + V("t")
    c1, c2, c3 = _c_classes(C_VARS, cap)
    cubic = x ** 3 - c1 * x * x + c2 * x - c3
    prod = cubic * (V("h") + V("t", n))
    return reduce_t_cubic(prod, (c1, c2, c3)).slice_var("t", 2)


def d1_xi0_lambda(n: int) -> Dense:
    """Same class, expanded factor by factor in the torus roots."""
    cap = 6
    V = lambda name, k=1: Dense.var(L_VARS, cap, name, k)
    prod = Dense.const(L_VARS, cap, 1)
    for i in (1, 2, 3):
        prod = prod * (V("s") + V("t") - V(f"l{i}"))
    prod = prod * (V("h") + V("t", n))
    return reduce_t_cubic(prod, _l_classes(L_VARS, cap)).slice_var("t", 2)


def d2_xi0_c(n: int) -> Dense:
    cap = 6
    V = lambda name, k=1: Dense.var(C_VARS, cap, name, k)
    prod = (V("s") + V("t")) * (V("h") + V("t", n)) * (V("s") + V("h") + V("t", n - 2) - V("c1"))
    return reduce_t_cubic(prod, _c_classes(C_VARS, cap)).slice_var("t", 2)


def c_to_lambda(f: Dense) -> Dense:
    """Re-express a c-level dense polynomial in torus roots (c_i -> e_i)."""
    if f.names != C_VARS:
        raise ValueError("expected c-level variables")
    g = Dense(L_VARS, f.cap)
    for exps, c in f.terms().items():
        term = Dense.const(L_VARS, f.cap, c)
        e = _l_classes(L_VARS, f.cap)
        for i in range(3):
            if exps[i]:
                term = term * e[i] ** exps[i]
        mono = [0, 0, 0] + list(exps[3:])
        term = term * _monomial(L_VARS, f.cap, mono)
        g = g + term
    return g


def _monomial(names, cap, exps):
    d = Dense(names, cap)
    d.a[tuple(exps)] = 1
    return d


def to_string_terms(f: Dense) -> Dict[str, int]:
    """Exponent-free rendering keyed by ``var^k`` products; handy for comparisons."""
    out = {}
    for exps, c in sorted(f.terms().items()):
        key = "*".join(f"{n}^{e}" for n, e in zip(f.names, exps) if e) or "1"
        out[key] = c
    return out
