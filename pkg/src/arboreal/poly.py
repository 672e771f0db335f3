"""Exact sparse multivariate polynomials over the rationals.

Monomials are packed into a single Python integer: the top field holds the
total degree and the remaining fields hold the exponents, one per variable,
in the polynomial's variable order.  With that layout monomial
multiplication is integer addition and the graded lexicographic order is
plain integer order, which keeps products like ``h_6**2`` (degree 64)
cheap enough for exhaustive identity checks.

Coefficients are ``int`` whenever the value is integral and
:class:`fractions.Fraction` otherwise.
"""

from __future__ import annotations

import heapq
import re
from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterable, Iterator, Mapping, Union

import numpy as np

__all__ = [
    "Polynomial",
    "NotDivisible",
    "MissingBindingError",
    "var",
    "const",
    "parse_poly",
    "var_sort_key",
    "to_rational",
]

Coeff = Union[int, Fraction]

_BITS = 16
_FIELD = (1 << _BITS) - 1
_GUARD = 1 << (_BITS - 1)
_MAX_EXP = _GUARD - 1


class MissingBindingError(KeyError):
    """Raised when evaluation meets a variable with no assigned value."""


class NotDivisible:
    """Result of :meth:`Polynomial.divide_exact` when no exact quotient exists.

    ``remainder`` is the partially reduced dividend at the point where the
    leading term stopped being divisible; it is nonzero and serves as a
    counterexample witness.
    """

    __slots__ = ("dividend", "divisor", "remainder")

    def __init__(self, dividend: Polynomial, divisor: Polynomial, remainder: Polynomial):
        self.dividend = dividend
        self.divisor = divisor
        self.remainder = remainder

    def __bool__(self) -> bool:
        return False

    def __repr__(self) -> str:
        return f"NotDivisible(remainder={self.remainder})"


def _num_key(piece: str):
    return (0, int(piece), "") if piece.isdigit() else (1, 0, piece)


def var_sort_key(name: str) -> tuple:
    """Natural ordering key: ``x2 < x10``, and names compare piecewise."""
    return tuple(_num_key(p) for p in re.split(r"(\d+)", name) if p)


def to_rational(value) -> Coeff:
    """Coerce ints, Fractions and decimal/fraction strings to an exact rational."""
    if isinstance(value, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, Rational):
        return to_rational(Fraction(value.numerator, value.denominator))
    if isinstance(value, str):
        return to_rational(Fraction(value.strip()))
    if isinstance(value, float):
        return to_rational(Fraction(value))
    raise TypeError(f"cannot interpret {value!r} as a rational number")


def _norm(c) -> Coeff:
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _shifts(k: int) -> list[int]:
    return [_BITS * (k - 1 - i) for i in range(k)]


def _encode(exps: Iterable[int], k: int) -> int:
    key = 0
    deg = 0
    for e in exps:
        if e < 0 or e > _MAX_EXP:
            raise OverflowError(f"exponent {e} outside supported range")
        key = (key << _BITS) | e
        deg += e
    if deg > _MAX_EXP:
        raise OverflowError(f"total degree {deg} outside supported range")
    return (deg << (_BITS * k)) | key


def _decode(key: int, k: int) -> tuple[int, ...]:
    out = [0] * k
    for i in range(k - 1, -1, -1):
        out[i] = key & _FIELD
        key >>= _BITS
    return tuple(out)


def _guard_mask(k: int) -> int:
    mask = 0
    for _ in range(k + 1):
        mask = (mask << _BITS) | _GUARD
    return mask


class Polynomial:
    """An immutable polynomial with rational coefficients.

    The variable tuple is always the exact support of the polynomial, sorted
    by :func:`var_sort_key`; two polynomials are equal iff their variable
    tuples and term maps agree.
    """

    __slots__ = ("_vars", "_terms", "_hash")

    def __init__(self, variables: tuple[str, ...] = (), terms: Mapping[int, Coeff] | None = None):
        # Internal constructor: callers promise sorted variables and packed keys.
        self._vars = variables
        self._terms = dict(terms) if terms else {}
        self._hash = None

    # ------------------------------------------------------------------ build
    @classmethod
    def _make(cls, variables: tuple[str, ...], terms: dict[int, Coeff]) -> Polynomial:
        terms = {m: c for m, c in terms.items() if c != 0}
        k = len(variables)
        if not terms or k == 0:
            return cls((), {m: c for m, c in terms.items()} if k == 0 else {})
        used = 0
        for m in terms:
            used |= m
        keep = [i for i, s in enumerate(_shifts(k)) if (used >> s) & _FIELD]
        if len(keep) == k:
            return cls(variables, terms)
        new_vars = tuple(variables[i] for i in keep)
        nk = len(new_vars)
        remapped = {}
        for m, c in terms.items():
            exps = _decode(m, k)
            remapped[_encode((exps[i] for i in keep), nk)] = c
        return cls(new_vars, remapped)

    @classmethod
    def constant(cls, value) -> Polynomial:
        c = to_rational(value)
        return cls((), {0: c} if c != 0 else {})

    @classmethod
    def variable(cls, name: str) -> Polynomial:
        if not name or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
            raise ValueError(f"invalid variable name {name!r}")
        return cls((name,), {_encode((1,), 1): 1})

    @classmethod
    def from_dict(cls, terms: Mapping[tuple[tuple[str, int], ...], object]) -> Polynomial:
        """Build from ``{((var, exp), ...): coeff}``; the empty tuple is the constant."""
        names = sorted({v for mono in terms for v, e in mono if e}, key=var_sort_key)
        index = {v: i for i, v in enumerate(names)}
        k = len(names)
        acc: dict[int, Coeff] = {}
        for mono, coeff in terms.items():
            exps = [0] * k
            for v, e in mono:
                exps[index[v]] += e
            key = _encode(exps, k)
            acc[key] = _norm(acc.get(key, 0) + to_rational(coeff))
        return cls._make(tuple(names), acc)

    @staticmethod
    def coerce(value) -> Polynomial:
        if isinstance(value, Polynomial):
            return value
        return Polynomial.constant(value)

    # ------------------------------------------------------------ inspection
    @property
    def variables(self) -> tuple[str, ...]:
        return self._vars

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._vars

    def constant_value(self) -> Coeff:
        if self._vars:
            raise ValueError("polynomial is not constant")
        return self._terms.get(0, 0)

    def __len__(self) -> int:
        return len(self._terms)

    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(self._terms) >> (_BITS * len(self._vars))

    def degree(self, name: str) -> int:
        if name not in self._vars:
            return 0 if self._terms else -1
        shift = _shifts(len(self._vars))[self._vars.index(name)]
        return max((m >> shift) & _FIELD for m in self._terms)

    def terms(self) -> Iterator[tuple[dict[str, int], Coeff]]:
        """Yield ``(exponents, coefficient)`` in descending graded-lex order."""
        k = len(self._vars)
        for m in sorted(self._terms, reverse=True):
            exps = _decode(m, k)
            yield {v: e for v, e in zip(self._vars, exps) if e}, self._terms[m]

    def exponent_items(self) -> list[tuple[tuple[int, ...], Coeff]]:
        k = len(self._vars)
        return [(_decode(m, k), c) for m, c in sorted(self._terms.items(), reverse=True)]

    def coefficient(self, monomial: Mapping[str, int] | None = None) -> Coeff:
        monomial = {v: e for v, e in (monomial or {}).items() if e}
        if any(v not in self._vars for v in monomial):
            return 0
        key = _encode((monomial.get(v, 0) for v in self._vars), len(self._vars))
        return self._terms.get(key, 0)

    def leading_term(self) -> tuple[dict[str, int], Coeff]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        return next(self.terms())

    def depends_on(self, name: str) -> bool:
        return name in self._vars

    # ------------------------------------------------------------- alignment
    def _aligned(self, variables: tuple[str, ...]) -> dict[int, Coeff]:
        if variables == self._vars:
            return self._terms
        k_old, k_new = len(self._vars), len(variables)
        pos = [variables.index(v) for v in self._vars]
        out = {}
        for m, c in self._terms.items():
            exps = [0] * k_new
            for i, e in zip(pos, _decode(m, k_old)):
                exps[i] = e
            out[_encode(exps, k_new)] = c
        return out

    @staticmethod
    def _union(*polys: Polynomial) -> tuple[str, ...]:
        if all(p._vars == polys[0]._vars for p in polys):
            return polys[0]._vars
        names = set()
        for p in polys:
            names.update(p._vars)
        return tuple(sorted(names, key=var_sort_key))

    # ------------------------------------------------------------ arithmetic
    def __add__(self, other) -> Polynomial:
        other = Polynomial.coerce(other)
        u = Polynomial._union(self, other)
        acc = dict(self._aligned(u))
        for m, c in other._aligned(u).items():
            acc[m] = _norm(acc.get(m, 0) + c)
        return Polynomial._make(u, acc)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial(self._vars, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> Polynomial:
        return self + (-Polynomial.coerce(other))

    def __rsub__(self, other) -> Polynomial:
        return Polynomial.coerce(other) + (-self)

    def scale(self, factor) -> Polynomial:
        f = to_rational(factor)
        if f == 0:
            return Polynomial()
        return Polynomial(self._vars, {m: _norm(c * f) for m, c in self._terms.items()})

    def __mul__(self, other) -> Polynomial:
        if not isinstance(other, Polynomial):
            return self.scale(other)
        if not self._terms or not other._terms:
            return Polynomial()
        if self.total_degree() + other.total_degree() > _MAX_EXP:
            raise OverflowError("product degree outside supported range")
        u = Polynomial._union(self, other)
        a = self._aligned(u)
        b = other._aligned(u)
        if len(a) < len(b):
            a, b = b, a
        acc: dict[int, Coeff] = {}
        get = acc.get
        b_items = list(b.items())
        for m1, c1 in a.items():
            for m2, c2 in b_items:
                m = m1 + m2
                acc[m] = get(m, 0) + c1 * c2
        return Polynomial._make(u, {m: _norm(c) for m, c in acc.items()})

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> Polynomial:
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = Polynomial.constant(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __truediv__(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            if not other.is_constant():
                raise TypeError("use divide_exact for polynomial divisors")
            other = other.constant_value()
        f = to_rational(other)
        if f == 0:
            raise ZeroDivisionError("division by zero")
        return self.scale(Fraction(1) / f)

    # ---------------------------------------------------------------- calculus
    def partial(self, name: str) -> Polynomial:
        """Formal partial derivative with respect to ``name``."""
        if name not in self._vars:
            return Polynomial()
        k = len(self._vars)
        shift = _shifts(k)[self._vars.index(name)]
        step = (1 << shift) + (1 << (_BITS * k))
        acc = {}
        for m, c in self._terms.items():
            e = (m >> shift) & _FIELD
            if e:
                acc[m - step] = c * e
        return Polynomial._make(self._vars, acc)

    def gradient(self, names: Iterable[str]) -> dict[str, Polynomial]:
        return {v: self.partial(v) for v in names}

    # ----------------------------------------------------------- substitution
    def rename(self, mapping: Mapping[str, str]) -> Polynomial:
        """Rename variables; several names may be merged into one."""
        if not any(v in mapping for v in self._vars):
            return self
        return self.substitute({old: Polynomial.variable(new) for old, new in mapping.items()})

    def substitute(self, bindings: Mapping[str, object]) -> Polynomial:
        """Compose with ``{var: polynomial}``; unbound variables pass through."""
        active = {v: Polynomial.coerce(b) for v, b in bindings.items() if v in self._vars}
        if not active:
            return self
        k = len(self._vars)
        if all(len(b) == 1 and b.total_degree() == 1 for b in active.values()):
            return self._substitute_monomial(active)
        powers: dict[str, list[Polynomial]] = {v: [Polynomial.constant(1)] for v in active}
        acc = Polynomial()
        chunks: list[Polynomial] = []
        for m, c in self._terms.items():
            exps = _decode(m, k)
            rest = {}
            term = Polynomial.constant(c)
            for v, e in zip(self._vars, exps):
                if not e:
                    continue
                if v in active:
                    cache = powers[v]
                    while len(cache) <= e:
                        cache.append(cache[-1] * active[v])
                    term = term * cache[e]
                else:
                    rest[v] = e
            if rest:
                term = term * Polynomial.from_dict({tuple(rest.items()): 1})
            chunks.append(term)
            if len(chunks) >= 64:
                acc = acc + _sum(chunks)
                chunks = []
        return acc + _sum(chunks)

    def _substitute_monomial(self, active: dict[str, Polynomial]) -> Polynomial:
        # Every binding is c * w for a single variable w.
        images = {}
        for v, b in active.items():
            (mono, c), = b.terms()
            (w, _), = mono.items()
            images[v] = (w, c)
        k = len(self._vars)
        out: dict[tuple, Coeff] = {}
        for m, c in self._terms.items():
            exps: dict[str, int] = {}
            coeff = c
            for v, e in zip(self._vars, _decode(m, k)):
                if not e:
                    continue
                if v in images:
                    w, s = images[v]
                    exps[w] = exps.get(w, 0) + e
                    coeff = coeff * s**e
                else:
                    exps[v] = exps.get(v, 0) + e
            key = tuple(sorted(exps.items()))
            out[key] = out.get(key, 0) + coeff
        return Polynomial.from_dict(out)

    # -------------------------------------------------------------- division
    def divide_exact(self, divisor: Polynomial) -> Polynomial | NotDivisible:
        """Exact quotient ``q`` with ``self == q * divisor``, or :class:`NotDivisible`.

        Leading-term reduction in graded-lex order.  In an integral domain
        the quotient is unique when it exists, so the first leading term
        that fails to divide proves non-divisibility.
        """
        divisor = Polynomial.coerce(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return Polynomial()
        u = Polynomial._union(self, divisor)
        k = len(u)
        guard = _guard_mask(k)
        rem = dict(self._aligned(u))
        b = divisor._aligned(u)
        lt_b = max(b)
        lc_b = b[lt_b]
        b_rest = [(m, c) for m, c in b.items() if m != lt_b]
        heap = [-m for m in rem]
        heapq.heapify(heap)
        quot: dict[int, Coeff] = {}
        while rem:
            m = -heapq.heappop(heap)
            c = rem.get(m)
            if c is None:
                continue
            if ((m | guard) - lt_b) & guard != guard:
                return NotDivisible(self, divisor, Polynomial._make(u, rem))
            t = m - lt_b
            qc = _norm(Fraction(c) / lc_b) if lc_b != 1 else c
            quot[t] = qc
            del rem[m]
            for mb, cb in b_rest:
                key = t + mb
                old = rem.get(key)
                if old is None:
                    rem[key] = _norm(-qc * cb)
                    heapq.heappush(heap, -key)
                else:
                    new = _norm(old - qc * cb)
                    if new == 0:
                        del rem[key]
                    else:
                        rem[key] = new
        return Polynomial._make(u, quot)

    def divides(self, other: Polynomial) -> bool:
        return not isinstance(Polynomial.coerce(other).divide_exact(self), NotDivisible)

    # ------------------------------------------------------------ evaluation
    def evaluate(self, point: Mapping[str, object]) -> Coeff:
        """Exact value at a rational point; every variable must be bound."""
        values = []
        for v in self._vars:
            if v not in point:
                raise MissingBindingError(v)
            values.append(to_rational(point[v]))
        k = len(self._vars)
        total: Coeff = 0
        for m, c in self._terms.items():
            term = c
            for x, e in zip(values, _decode(m, k)):
                if e:
                    term = term * x**e
            total += term
        return _norm(total) if isinstance(total, Fraction) else total

    def evaluate_partial(self, point: Mapping[str, object]) -> Polynomial:
        """Substitute the bound variables by constants, leaving the rest free."""
        return self.substitute({v: Polynomial.constant(point[v]) for v in self._vars if v in point})

    def lambdify(self, names: Iterable[str]) -> Callable[..., np.ndarray]:
        """Float evaluator ``f(*arrays)`` over the given argument order."""
        names = list(names)
        missing = [v for v in self._vars if v not in names]
        if missing:
            raise MissingBindingError(missing[0])
        pos = [names.index(v) for v in self._vars]
        items = [(_decode(m, len(self._vars)), float(c)) for m, c in self._terms.items()]
        plan = _horner_plan(items, 0, len(pos))

        def f(*arrays):
            arrays = [np.asarray(a, dtype=float) for a in arrays]
            shape = np.broadcast(*arrays).shape if arrays else ()
            out = _horner_eval(plan, [arrays[i] for i in pos])
            if np.shape(out) != shape:
                out = np.broadcast_to(out, shape).copy()
            return out

        return f

    def interval_bounds(self, box: Mapping[str, tuple[object, object]]) -> tuple[Fraction, Fraction]:
        """Rigorous (not tight) exact bounds of the polynomial over a box."""
        k = len(self._vars)
        ivs = []
        for v in self._vars:
            if v not in box:
                raise MissingBindingError(v)
            lo, hi = (Fraction(to_rational(t)) for t in box[v])
            ivs.append((min(lo, hi), max(lo, hi)))
        lo_total = hi_total = Fraction(0)
        for m, c in self._terms.items():
            lo, hi = Fraction(c), Fraction(c)
            for (a, b), e in zip(ivs, _decode(m, k)):
                if not e:
                    continue
                cands = [a**e, b**e]
                plo, phi = min(cands), max(cands)
                if e % 2 == 0 and a < 0 < b:
                    plo = Fraction(0)
                prods = [lo * plo, lo * phi, hi * plo, hi * phi]
                lo, hi = min(prods), max(prods)
            lo_total += lo
            hi_total += hi
        return lo_total, hi_total

    # -------------------------------------------------------- comparison/text
    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            try:
                other = Polynomial.constant(other)
            except TypeError:
                return NotImplemented
        return self._vars == other._vars and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._vars, frozenset(self._terms.items())))
        return self._hash

    def sort_key(self) -> tuple:
        """Deterministic total order used to canonicalise lists of polynomials."""
        return (self.total_degree(), len(self), str(self))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for mono, c in self.terms():
            factors = [v if e == 1 else f"{v}^{e}" for v, e in mono.items()]
            mag = abs(c)
            if factors:
                body = "*".join(factors)
                text = body if mag == 1 else f"{mag}*{body}"
            else:
                text = str(mag)
            sign = "-" if c < 0 else "+"
            parts.append((sign, text))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, text in parts[1:]:
            out += f" {sign} {text}"
        return out

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r})"


def _sum(polys: list[Polynomial]) -> Polynomial:
    if not polys:
        return Polynomial()
    u = Polynomial._union(*polys)
    acc: dict[int, Coeff] = {}
    for p in polys:
        for m, c in p._aligned(u).items():
            acc[m] = acc.get(m, 0) + c
    return Polynomial._make(u, {m: _norm(c) for m, c in acc.items()})


def poly_sum(polys: Iterable[Polynomial]) -> Polynomial:
    return _sum([Polynomial.coerce(p) for p in polys])


def poly_prod(polys: Iterable[Polynomial]) -> Polynomial:
    out = Polynomial.constant(1)
    for p in polys:
        out = out * p
    return out


def var(name: str) -> Polynomial:
    return Polynomial.variable(name)


def const(value) -> Polynomial:
    return Polynomial.constant(value)


# ------------------------------------------------------------------- parsing
_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d+)?)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"unexpected input at {text[pos:]!r}")
        num, name, sym = m.groups()
        if num is not None:
            tokens.append(("num", num))
        elif name is not None:
            tokens.append(("name", name))
        else:
            if sym not in "+-*/^()":
                raise ValueError(f"unexpected character {sym!r}")
            tokens.append(("sym", sym))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("end", "")

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, sym: str):
        tok = self.take()
        if tok != ("sym", sym):
            raise ValueError(f"expected {sym!r}, found {tok[1]!r}")

    def expr(self) -> Polynomial:
        out = self.term()
        while self.peek() in (("sym", "+"), ("sym", "-")):
            op = self.take()[1]
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self) -> Polynomial:
        out = self.unary()
        while self.peek() in (("sym", "*"), ("sym", "/")):
            op = self.take()[1]
            rhs = self.unary()
            if op == "*":
                out = out * rhs
            else:
                if not rhs.is_constant():
                    raise ValueError("division by a non-constant polynomial")
                out = out / rhs.constant_value()
        return out

    def unary(self) -> Polynomial:
        if self.peek() == ("sym", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("sym", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        if self.peek() == ("sym", "^"):
            self.take()
            kind, text = self.take()
            if kind != "num" or not text.isdigit():
                raise ValueError("exponent must be a non-negative integer")
            base = base ** int(text)
        return base

    def atom(self) -> Polynomial:
        kind, text = self.take()
        if kind == "num":
            return Polynomial.constant(Fraction(text))
        if kind == "name":
            return Polynomial.variable(text)
        if (kind, text) == ("sym", "("):
            inner = self.expr()
            self.expect(")")
            return inner
        raise ValueError(f"unexpected token {text!r}")


def parse_poly(text: str) -> Polynomial:
    """Parse the canonical text form (and ordinary infix with parentheses)."""
    parser = _Parser(text)
    if not parser.tokens:
        raise ValueError("empty polynomial text")
    out = parser.expr()
    if parser.peek()[0] != "end":
        raise ValueError(f"trailing input near {parser.peek()[1]!r}")
    return out


def _horner_plan(items, level: int, nvars: int):
    """Nested Horner form: a constant, or (level, [(exponent, subplan), ...]) descending."""
    if level == nvars:
        return sum(c for _, c in items)
    groups: dict[int, list] = {}
    for exps, c in items:
        groups.setdefault(exps[level], []).append((exps, c))
    if len(groups) == 1 and 0 in groups:
        return _horner_plan(items, level + 1, nvars)
    return (level, [(e, _horner_plan(g, level + 1, nvars)) for e, g in sorted(groups.items(), reverse=True)])


def _power(x, e: int):
    # short multiplication chains beat the generic pow ufunc
    if e <= 4:
        out = x
        for _ in range(e - 1):
            out = out * x
        return out
    return x**e


def _horner_eval(plan, cols):
    if not isinstance(plan, tuple):
        return plan
    level, parts = plan
    x = cols[level]
    acc = None
    prev = None
    for e, sub in parts:
        val = _horner_eval(sub, cols)
        acc = val if acc is None else acc * _power(x, prev - e) + val
        prev = e
    if prev:
        acc = acc * _power(x, prev)
    return acc
