"""Sparse multivariate polynomials over the rationals.

Exponent tuples map to nonzero :class:`~fractions.Fraction` coefficients.
Everything here is immutable; arithmetic returns new objects.  Variables are
0-based in the Python API (``p.diff(0)`` is d/dx1) and 1-based in the text
grammar (``x1`` .. ``x9``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping, Sequence

Monomial = tuple[int, ...]
Number = int | Fraction


def _frac(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


def monomials_of_degree(nvars: int, d: int) -> list[Monomial]:
    """All exponent vectors of total degree ``d``, in descending lex order."""
    if nvars == 0:
        return [()] if d == 0 else []
    if nvars == 1:
        return [(d,)]
    out = []
    for a in range(d, -1, -1):
        for rest in monomials_of_degree(nvars - 1, d - a):
            out.append((a,) + rest)
    return out


def monomials_up_to(nvars: int, d: int, lo: int = 0) -> list[Monomial]:
    out = []
    for k in range(lo, d + 1):
        out.extend(monomials_of_degree(nvars, k))
    return out


def grlex_key(m: Monomial):
    return (sum(m), m)


class Polynomial:
    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Number] | None = None, nvars: int = 2):
        clean = {}
        if terms:
            for m, c in terms.items():
                if len(m) != nvars:
                    raise ValueError(f"exponent {m} has length {len(m)}, expected {nvars}")
                if c:
                    if any(e < 0 for e in m):
                        raise ValueError(f"negative exponent in {m}")
                    clean[tuple(m)] = _frac(c)
        self.nvars = nvars
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, nvars: int) -> "Polynomial":
        # trusted constructor: terms already clean
        p = object.__new__(cls)
        p.nvars = nvars
        p._terms = terms
        p._hash = None
        return p

    # constructors
    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls._raw({}, nvars)

    @classmethod
    def constant(cls, c: Number, nvars: int) -> "Polynomial":
        return cls({(0,) * nvars: c}, nvars)

    @classmethod
    def var(cls, i: int, nvars: int) -> "Polynomial":
        m = [0] * nvars
        m[i] = 1
        return cls._raw({tuple(m): Fraction(1)}, nvars)

    @classmethod
    def monomial(cls, m: Monomial, c: Number = 1) -> "Polynomial":
        return cls({tuple(m): c}, len(m))

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return self._terms

    def items(self):
        return self._terms.items()

    def coeff(self, m: Monomial) -> Fraction:
        return self._terms.get(tuple(m), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    # comparisons
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other, self.nvars)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    # arithmetic
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(other, self.nvars)
        raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial._raw(out, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({m: -c for m, c in self._terms.items()}, self.nvars)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c: Number) -> "Polynomial":
        c = _frac(c)
        if not c:
            return Polynomial.zero(self.nvars)
        return Polynomial._raw({m: c * v for m, v in self._terms.items()}, self.nvars)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Polynomial._raw(out, self.nvars)

    __rmul__ = __mul__

    def mul_truncated(self, other: "Polynomial", d: int, among: Sequence[int] | None = None) -> "Polynomial":
        """Product with every term of degree > d dropped (degree over ``among`` if given)."""
        idx = range(self.nvars) if among is None else among
        out: dict = {}
        for m1, c1 in self._terms.items():
            d1 = sum(m1[i] for i in idx)
            if d1 > d:
                continue
            for m2, c2 in other._terms.items():
                if d1 + sum(m2[i] for i in idx) > d:
                    continue
                m = tuple(a + b for a, b in zip(m1, m2))
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Polynomial._raw(out, self.nvars)

    def mul_monomial(self, m: Monomial, c: Number = 1) -> "Polynomial":
        c = _frac(c)
        return Polynomial._raw(
            {tuple(a + b for a, b in zip(k, m)): c * v for k, v in self._terms.items()}, self.nvars
        )

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.constant(1, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # degrees
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self._terms), default=-1)

    def order(self) -> int:
        """Lowest total degree of a term; -1 for zero."""
        return min((sum(m) for m in self._terms), default=-1)

    def wdeg(self, weights: Sequence[Number]) -> Fraction:
        """Weighted degree of a weighted-homogeneous polynomial."""
        degs = {sum(_frac(w) * a for w, a in zip(weights, m)) for m in self._terms}
        if len(degs) != 1:
            raise ValueError("polynomial is not weighted homogeneous for these weights")
        return degs.pop()

    def is_homogeneous(self, weights: Sequence[Number] | None = None) -> bool:
        w = weights or (1,) * self.nvars
        return len({sum(_frac(x) * a for x, a in zip(w, m)) for m in self._terms}) <= 1

    def homogeneous_part(self, d: int) -> "Polynomial":
        return Polynomial._raw({m: c for m, c in self._terms.items() if sum(m) == d}, self.nvars)

    def truncate(self, d: int, among: Sequence[int] | None = None) -> "Polynomial":
        """Drop all terms of degree > d (degree over the variables ``among``)."""
        if among is None:
            return Polynomial._raw({m: c for m, c in self._terms.items() if sum(m) <= d}, self.nvars)
        return Polynomial._raw(
            {m: c for m, c in self._terms.items() if sum(m[i] for i in among) <= d}, self.nvars
        )

    def constant_term(self) -> Fraction:
        return self.coeff((0,) * self.nvars)

    def linear_coefficients(self) -> list[Fraction]:
        return [self.coeff(tuple(1 if j == i else 0 for j in range(self.nvars))) for i in range(self.nvars)]

    # calculus
    def diff(self, i: int) -> "Polynomial":
        """Partial derivative with respect to the 0-based variable ``i``."""
        out = {}
        for m, c in self._terms.items():
            e = m[i]
            if e:
                k = m[:i] + (e - 1,) + m[i + 1:]
                out[k] = c * e
        return Polynomial._raw(out, self.nvars)

    def gradient(self) -> list["Polynomial"]:
        return [self.diff(i) for i in range(self.nvars)]

    # evaluation and substitution
    def evaluate(self, point: Sequence[Number]) -> Fraction:
        total = Fraction(0)
        pt = [_frac(v) for v in point]
        for m, c in self._terms.items():
            t = c
            for v, e in zip(pt, m):
                if e:
                    t *= v ** e
            total += t
        return total

    def compose(self, subs: Sequence["Polynomial"], truncate: int | None = None) -> "Polynomial":
        """Substitute ``subs[i]`` for variable i; optionally truncate at degree ``truncate``."""
        if len(subs) != self.nvars:
            raise ValueError("need one substitution per variable")
        nv = subs[0].nvars if subs else 0
        powers: list[dict[int, Polynomial]] = [{0: Polynomial.constant(1, nv)} for _ in subs]

        def pw(i, e):
            cache = powers[i]
            if e not in cache:
                prev = pw(i, e - 1)
                cache[e] = prev * subs[i] if truncate is None else prev.mul_truncated(subs[i], truncate)
            return cache[e]

        result = Polynomial.zero(nv)
        for m, c in self._terms.items():
            t = Polynomial.constant(c, nv)
            for i, e in enumerate(m):
                if e:
                    f = pw(i, e)
                    t = t * f if truncate is None else t.mul_truncated(f, truncate)
            result = result + t
        return result

    def extend(self, nvars: int, offset: int = 0) -> "Polynomial":
        """Embed into a ring with ``nvars`` variables, shifting indices by ``offset``."""
        out = {}
        for m, c in self._terms.items():
            k = [0] * nvars
            k[offset:offset + self.nvars] = m
            out[tuple(k)] = c
        return Polynomial._raw(out, nvars)

    def specialize(self, keep: int, values: Sequence[Number]) -> "Polynomial":
        """Set the trailing variables to ``values``; keep the first ``keep`` variables."""
        vals = [_frac(v) for v in values]
        if keep + len(vals) != self.nvars:
            raise ValueError("wrong number of values")
        out: dict = {}
        for m, c in self._terms.items():
            t = c
            for v, e in zip(vals, m[keep:]):
                if e:
                    t *= v ** e
            if t:
                k = m[:keep]
                s = out.get(k, 0) + t
                if s:
                    out[k] = s
                else:
                    del out[k]
        return Polynomial._raw(out, keep)

    def coefficients_in(self, among: Sequence[int]) -> dict[Monomial, "Polynomial"]:
        """Group terms by their exponents in ``among``; coefficients live in the other variables."""
        rest = [i for i in range(self.nvars) if i not in set(among)]
        groups: dict[Monomial, dict] = {}
        for m, c in self._terms.items():
            key = tuple(m[i] for i in among)
            groups.setdefault(key, {})[tuple(m[i] for i in rest)] = c
        return {k: Polynomial._raw(v, len(rest)) for k, v in groups.items()}

    def variables(self) -> set[int]:
        return {i for m in self._terms for i, e in enumerate(m) if e}

    # printing
    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self._terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r}, nvars={self.nvars})"


def format_polynomial(p: Polynomial, names: Sequence[str] | None = None) -> str:
    """Canonical text: graded-lex descending, explicit ``*``; parses back to ``p``."""
    if names is None:
        names = [f"x{i + 1}" for i in range(p.nvars)]
    if p.is_zero():
        return "0"
    parts = []
    for m, c in p.sorted_terms():
        factors = []
        for name, e in zip(names, m):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        mag = abs(c)
        cs = str(mag.numerator) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}"
        if not factors:
            body = cs
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = cs + "*" + "*".join(factors)
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)


# ---------------------------------------------------------------- jets

@dataclass(frozen=True)
class Jet:
    poly: Polynomial
    order: int

    def __post_init__(self):
        if self.poly.degree() > self.order:
            object.__setattr__(self, "poly", self.poly.truncate(self.order))

    def __add__(self, other: "Jet") -> "Jet":
        k = min(self.order, other.order)
        return Jet((self.poly + other.poly).truncate(k), k)

    def __mul__(self, other: "Jet") -> "Jet":
        k = min(self.order, other.order)
        return Jet(self.poly.mul_truncated(other.poly, k), k)


def truncate(p: Polynomial, d: int) -> Jet:
    if d < 0:
        raise ValueError("truncation degree must be >= 0")
    return Jet(p.truncate(d), d)


def partial_derivative(p: Polynomial, i: int) -> Polynomial:
    """d p / d x_i with 1-based ``i`` (matches the ``x1`` naming)."""
    if not 1 <= i <= p.nvars:
        raise ValueError(f"variable index {i} out of range 1..{p.nvars}")
    return p.diff(i - 1)


# ---------------------------------------------------------------- parser

class PolynomialSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class _Parser:
    def __init__(self, text: str, nvars: int):
        self.text = text
        self.nvars = nvars
        self.tokens = list(self._tokenize(text))
        self.i = 0

    def _tokenize(self, s: str):
        i, n = 0, len(s)
        while i < n:
            ch = s[i]
            if ch.isspace():
                i += 1
            elif ch.isdigit():
                j = i
                while j < n and s[j].isdigit():
                    j += 1
                yield ("int", int(s[i:j]), i)
                i = j
            elif ch == "x":
                j = i + 1
                while j < n and s[j].isdigit():
                    j += 1
                if j == i + 1:
                    raise PolynomialSyntaxError("expected variable index after 'x'", i)
                yield ("var", int(s[i + 1:j]), i)
                i = j
            elif ch in "+-*^()/":
                yield (ch, ch, i)
                i += 1
            else:
                raise PolynomialSyntaxError(f"unexpected character {ch!r}", i)
        yield ("end", None, n)

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            raise PolynomialSyntaxError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        self.i += 1
        return tok

    def parse(self) -> Polynomial:
        p = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise PolynomialSyntaxError(f"unexpected token {tok[1]!r}", tok[2])
        return p

    def expr(self) -> Polynomial:
        p = self.term()
        while self.peek()[0] in "+-":
            op = self.take()[0]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Polynomial:
        p = self.unary()
        while self.peek()[0] == "*":
            self.take()
            p = p * self.unary()
        return p

    def unary(self) -> Polynomial:
        if self.peek()[0] == "-":
            self.take()
            return -self.unary()
        if self.peek()[0] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.peek()
            if tok[0] == "-":
                raise PolynomialSyntaxError("negative exponent", tok[2])
            e = self.take("int")[1]
            base = base ** e
        return base

    def atom(self) -> Polynomial:
        kind, val, pos = self.peek()
        if kind == "int":
            self.take()
            if self.peek()[0] == "/":
                self.take()
                den_tok = self.take("int")
                if den_tok[1] == 0:
                    raise PolynomialSyntaxError("zero denominator", den_tok[2])
                return Polynomial.constant(Fraction(val, den_tok[1]), self.nvars)
            return Polynomial.constant(val, self.nvars)
        if kind == "var":
            self.take()
            if not 1 <= val <= 9:
                raise PolynomialSyntaxError(f"variable x{val} outside x1..x9", pos)
            if val > self.nvars:
                raise PolynomialSyntaxError(f"variable x{val} exceeds nvars={self.nvars}", pos)
            return Polynomial.var(val - 1, self.nvars)
        if kind == "(":
            self.take()
            p = self.expr()
            self.take(")")
            return p
        raise PolynomialSyntaxError(f"unexpected token {val!r}", pos)


def parse_polynomial(text: str, nvars: int) -> Polynomial:
    return _Parser(text, nvars).parse()


# ---------------------------------------------------------------- matrices of polynomials

PolyMatrix = list[list[Polynomial]]


def mat_mul(a: PolyMatrix, b: PolyMatrix, trunc: int | None = None) -> PolyMatrix:
    n, m, k = len(a), len(b[0]), len(b)
    nv = a[0][0].nvars
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            s = Polynomial.zero(nv)
            for t in range(k):
                if a[i][t] and b[t][j]:
                    s = s + (a[i][t] * b[t][j] if trunc is None else a[i][t].mul_truncated(b[t][j], trunc))
            row.append(s)
        out.append(row)
    return out


def transpose(a: PolyMatrix) -> PolyMatrix:
    return [list(r) for r in zip(*a)]


def determinant(a: PolyMatrix) -> Polynomial:
    """Exact determinant by cofactor expansion (intended for n <= 4)."""
    n = len(a)
    if n == 0:
        raise ValueError("empty matrix")
    if n == 1:
        return a[0][0]
    if n == 2:
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]
    nv = a[0][0].nvars
    total = Polynomial.zero(nv)
    for j in range(n):
        if not a[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in a[1:]]
        term = a[0][j] * determinant(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def constant_matrix(rows: Sequence[Sequence[Number]], nvars: int) -> PolyMatrix:
    return [[Polynomial.constant(c, nvars) for c in r] for r in rows]


def identity_matrix(n: int, nvars: int) -> PolyMatrix:
    return constant_matrix([[1 if i == j else 0 for j in range(n)] for i in range(n)], nvars)


# ---------------------------------------------------------------- symmetric matrix germs

class SymMatrixGerm:
    """n x n symmetric matrix of polynomials in r variables, vanishing at 0.

    Stored as the upper triangle; ``entry(i, j)`` works for either order.
    Pass ``check=False`` for symmetric matrices that need not vanish at 0
    (derivatives, tangent vectors).
    """

    __slots__ = ("n", "r", "_upper")

    def __init__(self, entries: Sequence[Sequence[Polynomial | None]], r: int | None = None, check: bool = True):
        n = len(entries)
        upper = {}
        for i in range(n):
            for j in range(i, n):
                e = entries[i][j]
                if e is None and j > i:
                    e = entries[j][i] if len(entries[j]) > i else None
                if e is None:
                    raise ValueError(f"missing entry ({i + 1},{j + 1})")
                upper[i, j] = e
        nv = r if r is not None else next(iter(upper.values())).nvars
        for (i, j), e in upper.items():
            if e.nvars != nv:
                raise ValueError("entries use different variable counts")
            lower = entries[j][i] if j > i and len(entries[j]) > i else None
            if lower is not None and lower != e:
                raise ValueError(f"matrix is not symmetric at ({i + 1},{j + 1})")
            if check and e.constant_term() != 0:
                raise ValueError(f"entry ({i + 1},{j + 1}) does not vanish at the origin")
        self.n = n
        self.r = nv
        self._upper = upper

    @classmethod
    def from_strings(cls, rows: Sequence[Sequence[str | None]], r: int = 2, check: bool = True) -> "SymMatrixGerm":
        n = len(rows)
        ent: list[list[Polynomial | None]] = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                s = rows[i][j] if j < len(rows[i]) else None
                if s is not None and j >= i:
                    ent[i][j] = parse_polynomial(s, r)
                elif s is not None and j < i:
                    ent[i][j] = parse_polynomial(s, r)
        for i in range(n):
            for j in range(i):
                if ent[i][j] is not None and ent[j][i] is None:
                    ent[j][i] = ent[i][j]
        return cls(ent, r=r, check=check)

    @classmethod
    def zero(cls, n: int, r: int) -> "SymMatrixGerm":
        z = Polynomial.zero(r)
        return cls([[z] * n for _ in range(n)], r=r)

    def entry(self, i: int, j: int) -> Polynomial:
        return self._upper[(i, j) if i <= j else (j, i)]

    def upper_entries(self) -> list[Polynomial]:
        return [self._upper[i, j] for i in range(self.n) for j in range(i, self.n)]

    def rows(self) -> PolyMatrix:
        return [[self.entry(i, j) for j in range(self.n)] for i in range(self.n)]

    def __eq__(self, other):
        return isinstance(other, SymMatrixGerm) and self.n == other.n and self._upper == other._upper

    def __hash__(self):
        return hash(tuple(sorted(self._upper.items(), key=lambda t: t[0])))

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self._upper.values())

    def map(self, f, check: bool = False) -> "SymMatrixGerm":
        return SymMatrixGerm([[f(self.entry(i, j)) for j in range(self.n)] for i in range(self.n)], r=None, check=check)

    def truncate(self, d: int) -> "SymMatrixGerm":
        return self.map(lambda p: p.truncate(d), check=False)

    def diff(self, k: int) -> "SymMatrixGerm":
        return self.map(lambda p: p.diff(k), check=False)

    def order(self) -> int:
        orders = [e.order() for e in self._upper.values() if e]
        return min(orders) if orders else -1

    def degree(self) -> int:
        return max(e.degree() for e in self._upper.values())

    def compose(self, phi: Sequence[Polynomial], trunc: int | None = None) -> "SymMatrixGerm":
        return self.map(lambda p: p.compose(phi, truncate=trunc), check=False)

    def congruence(self, x: PolyMatrix, trunc: int | None = None) -> "SymMatrixGerm":
        """X^T A X."""
        prod = mat_mul(transpose(x), mat_mul(self.rows(), x, trunc), trunc)
        return SymMatrixGerm(prod, check=False)

    def det(self) -> Polynomial:
        return determinant(self.rows())

    def adjugate_upper(self) -> list[Polynomial]:
        """(n-1)x(n-1) signed minors of the upper triangle, row-major."""
        rows = self.rows()
        n = self.n
        if n == 1:
            return [Polynomial.constant(1, self.r)]
        out = []
        for i in range(n):
            for j in range(i, n):
                minor = [rows[a][:i] + rows[a][i + 1:] for a in range(n) if a != j]
                m = determinant(minor)
                out.append(m if (i + j) % 2 == 0 else -m)
        return out

    def evaluate(self, point: Sequence[Number]) -> list[list[Fraction]]:
        return [[self.entry(i, j).evaluate(point) for j in range(self.n)] for i in range(self.n)]

    def linear_coefficients(self) -> list[list[list[Fraction]]]:
        """Coefficient matrices C_k of x_k in the 1-jet."""
        return [
            [[self.entry(i, j).linear_coefficients()[k] for j in range(self.n)] for i in range(self.n)]
            for k in range(self.r)
        ]

    def to_strings(self) -> list[list[str | None]]:
        return [[str(self.entry(i, j)) if j >= i else None for j in range(self.n)] for i in range(self.n)]

    def __str__(self):
        return "[" + "; ".join(", ".join(str(self.entry(i, j)) for j in range(self.n)) for i in range(self.n)) + "]"

    def __repr__(self):
        return f"SymMatrixGerm({self})"


def sym(rows: Sequence[Sequence[str | None]], r: int = 2) -> SymMatrixGerm:
    """Shorthand: ``sym([["x1", "x2^2"], [None, "x1*x2"]])``."""
    return SymMatrixGerm.from_strings(rows, r=r)


# ---------------------------------------------------------------- vector fields

@dataclass(frozen=True)
class VectorFieldJet:
    components: tuple[Polynomial, ...]
    order: int

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(c.truncate(self.order) for c in self.components))

    @classmethod
    def from_strings(cls, comps: Sequence[str], order: int, r: int | None = None) -> "VectorFieldJet":
        r = r or len(comps)
        return cls(tuple(parse_polynomial(c, r) for c in comps), order)

    @property
    def r(self) -> int:
        return len(self.components)

    def linear_part(self) -> list[list[Fraction]]:
        """Matrix L with V = L x + ...; row i holds the linear coefficients of V_i."""
        return [c.linear_coefficients() for c in self.components]

    def divergence(self) -> Polynomial:
        return sum((c.diff(i) for i, c in enumerate(self.components)), Polynomial.zero(self.r)).truncate(
            max(self.order - 1, 0)
        )

    def scaled_by(self, f: Polynomial) -> "VectorFieldJet":
        return VectorFieldJet(tuple(f.mul_truncated(c, self.order) for c in self.components), self.order)

    def apply(self, a: SymMatrixGerm) -> SymMatrixGerm:
        """dA(V) = sum_k V_k dA/dx_k."""
        out = None
        for k, v in enumerate(self.components):
            if not v:
                continue
            term = a.diff(k).map(lambda p, v=v: p * v)
            out = term if out is None else _sym_add(out, term)
        return out if out is not None else SymMatrixGerm.zero(a.n, a.r)


def _sym_add(a: SymMatrixGerm, b: SymMatrixGerm) -> SymMatrixGerm:
    return SymMatrixGerm([[a.entry(i, j) + b.entry(i, j) for j in range(a.n)] for i in range(a.n)], check=False)


def euler_field(weights: Sequence[Number], order: int = 1) -> VectorFieldJet:
    r = len(weights)
    return VectorFieldJet(tuple(Polynomial.var(i, r).scale(w) for i, w in enumerate(weights)), max(order, 1))


def common_denominator(values: Iterable[Fraction]) -> int:
    out = 1
    for v in values:
        out = lcm(out, Fraction(v).denominator)
    return out


def random_polynomial(rng, nvars: int, degree: int, nterms: int = 4, lo: int = 0, coeff_range: int = 5) -> Polynomial:
    """Random polynomial with small integer coefficients (test helper)."""
    monos = monomials_up_to(nvars, degree, lo)
    terms = {}
    for _ in range(nterms):
        m = monos[rng.randrange(len(monos))]
        terms[m] = terms.get(m, 0) + rng.randint(-coeff_range, coeff_range)
    return Polynomial(terms, nvars)


__all__ = [
    "Monomial",
    "Polynomial",
    "Jet",
    "SymMatrixGerm",
    "VectorFieldJet",
    "PolynomialSyntaxError",
    "parse_polynomial",
    "format_polynomial",
    "truncate",
    "partial_derivative",
    "monomials_of_degree",
    "monomials_up_to",
    "determinant",
    "mat_mul",
    "transpose",
    "constant_matrix",
    "identity_matrix",
    "euler_field",
    "sym",
]
