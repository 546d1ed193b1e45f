"""Truncated multivariate power series with exact rational coefficients.

A series carries an ordered variable list, a set of *graded* variables and an
order N: only terms whose total degree in the graded variables is at most N
are stored, and every stored coefficient is exact.  Ungraded variables are
polynomial within each graded degree, so no bound is needed for them.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Mapping, Sequence

Exponent = tuple[int, ...]


class SeriesError(ValueError):
    """Ill-posed series operation."""


class TruncationError(SeriesError):
    """A coefficient beyond the computed truncation was requested."""


class DivisionRemainderError(SeriesError):
    """An exact division left a nonzero remainder."""


def _add(a: Exponent, b: Exponent) -> Exponent:
    return tuple(i + j for i, j in zip(a, b))


@dataclass(frozen=True)
class TruncatedSeries:
    variables: tuple[str, ...]
    graded: frozenset[str]
    order: int
    terms: Mapping[Exponent, Fraction]

    def __post_init__(self):
        if len(set(self.variables)) != len(self.variables):
            raise SeriesError("repeated variable")
        if not self.graded <= set(self.variables):
            raise SeriesError("graded variables must be among the variables")
        mask = tuple(v in self.graded for v in self.variables)
        object.__setattr__(self, "_mask", mask)
        clean = {}
        for e, c in self.terms.items():
            if len(e) != len(self.variables):
                raise SeriesError(f"exponent {e} has the wrong length")
            if c and self._deg(e) <= self.order:
                clean[tuple(e)] = Fraction(c)
        object.__setattr__(self, "terms", clean)

    # -- construction ---------------------------------------------------------

    @classmethod
    def zero(cls, variables: Sequence[str], graded: Iterable[str], order: int) -> "TruncatedSeries":
        return cls(tuple(variables), frozenset(graded), order, {})

    @classmethod
    def constant(cls, c, variables: Sequence[str], graded: Iterable[str], order: int) -> "TruncatedSeries":
        return cls(tuple(variables), frozenset(graded), order, {(0,) * len(variables): Fraction(c)})

    @classmethod
    def var(cls, name: str, variables: Sequence[str], graded: Iterable[str], order: int) -> "TruncatedSeries":
        e = tuple(int(v == name) for v in variables)
        if sum(e) != 1:
            raise SeriesError(f"unknown variable {name}")
        return cls(tuple(variables), frozenset(graded), order, {e: Fraction(1)})

    def _like(self, terms: Mapping[Exponent, Fraction], order: int | None = None) -> "TruncatedSeries":
        return TruncatedSeries(self.variables, self.graded, self.order if order is None else order, terms)

    def _deg(self, e: Exponent) -> int:
        return sum(k for k, g in zip(e, self._mask) if g)

    def graded_degree(self, e: Exponent) -> int:
        return self._deg(e)

    def _compatible(self, other: "TruncatedSeries") -> int:
        if self.variables != other.variables or self.graded != other.graded:
            raise SeriesError("series over different variables")
        return min(self.order, other.order)

    def _coerce(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries.constant(other, self.variables, self.graded, self.order)
        return NotImplemented

    # -- ring operations --------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        order = self._compatible(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return self._like(terms, order)

    __radd__ = __add__

    def __neg__(self):
        return self._like({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "TruncatedSeries":
        c = Fraction(c)
        return self._like({e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        order = self._compatible(other)
        by_deg: dict[int, list] = {}
        for e, c in other.terms.items():
            by_deg.setdefault(self._deg(e), []).append((e, c))
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            d1 = self._deg(e1)
            for d2, group in by_deg.items():
                if d1 + d2 > order:
                    continue
                for e2, c2 in group:
                    e = _add(e1, e2)
                    out[e] = out.get(e, 0) + c1 * c2
        return self._like(out, order)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "TruncatedSeries":
        if k < 0:
            return self.inverse() ** (-k)
        result = self.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.variables, self.graded, self.order, self.terms) == (
            other.variables,
            other.graded,
            other.order,
            other.terms,
        )

    def __hash__(self):
        return hash((self.variables, self.order, frozenset(self.terms.items())))

    def one(self) -> "TruncatedSeries":
        return TruncatedSeries.constant(1, self.variables, self.graded, self.order)

    def is_zero(self) -> bool:
        return not self.terms

    def truncate(self, order: int) -> "TruncatedSeries":
        return self._like(self.terms, min(order, self.order))

    # -- analytic operations -------------------------------------------------------

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.variables), Fraction(0))

    def _require_nilpotent(self, what: str) -> None:
        for e in self.terms:
            if self._deg(e) == 0:
                raise SeriesError(f"{what}: non-constant part must have positive graded degree")

    def exp(self) -> "TruncatedSeries":
        """exp(f) for f without constant term."""
        if self.constant_term():
            raise SeriesError("exp needs a zero constant term")
        self._require_nilpotent("exp")
        result = self.one()
        term = self.one()
        for k in range(1, self.order + 1):
            term = (term * self).scale(Fraction(1, k))
            if term.is_zero():
                break
            result = result + term
        return result

    def log(self) -> "TruncatedSeries":
        """log(f) for f with constant term 1."""
        if self.constant_term() != 1:
            raise SeriesError("log needs constant term 1")
        g = self - 1
        g._require_nilpotent("log")
        result = self._like({})
        power = self.one()
        for k in range(1, self.order + 1):
            power = power * g
            if power.is_zero():
                break
            result = result + power.scale(Fraction((-1) ** (k + 1), k))
        return result

    def inverse(self) -> "TruncatedSeries":
        c = self.constant_term()
        if not c:
            raise SeriesError("inverse needs a nonzero constant term")
        g = self.scale(1 / c) - 1
        g._require_nilpotent("inverse")
        result = self.one()
        power = self.one()
        for _ in range(self.order):
            power = -(power * g)
            if power.is_zero():
                break
            result = result + power
        return result.scale(1 / c)

    def substitute_polynomial(self, poly: Mapping[int, "TruncatedSeries"], arg: "TruncatedSeries") -> "TruncatedSeries":
        """Σ poly[k] * arg**k, a polynomial in ``arg`` with series coefficients."""
        result = self._like({})
        power = arg.one()
        for k in range(max(poly, default=-1) + 1):
            if k:
                power = power * arg
            if k in poly:
                result = result + poly[k] * power
        return result

    # -- divided differences --------------------------------------------------------

    def divide_by_difference(self, a: str, b: str) -> "TruncatedSeries":
        """Exact quotient by (a - b); the result is one graded order lower."""
        ia, ib = self.variables.index(a), self.variables.index(b)
        if a not in self.graded or b not in self.graded:
            raise SeriesError("divided differences need graded variables")
        quotient: dict[Exponent, Fraction] = {}
        remainder: dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            p = e[ia]
            base = list(e)
            base[ia] = 0
            for t in range(p):
                q = list(base)
                q[ia] = p - 1 - t
                q[ib] = e[ib] + t
                q = tuple(q)
                quotient[q] = quotient.get(q, 0) + c
            r = list(base)
            r[ib] = e[ib] + p
            r = tuple(r)
            remainder[r] = remainder.get(r, 0) + c
        # only remainder terms within the known range are meaningful
        leftover = {e: c for e, c in remainder.items() if c and self._deg(e) <= self.order}
        if leftover:
            raise DivisionRemainderError(f"division by ({a} - {b}) leaves {len(leftover)} terms")
        return self._like(quotient, self.order - 1)

    # -- variables --------------------------------------------------------------

    def embed(self, variables: Sequence[str], rename: Mapping[str, str] | None = None, graded: Iterable[str] | None = None) -> "TruncatedSeries":
        """Re-express over a larger variable list, optionally renaming first."""
        rename = dict(rename or {})
        names = [rename.get(v, v) for v in self.variables]
        variables = tuple(variables)
        missing = set(names) - set(variables)
        if missing:
            raise SeriesError(f"variables {sorted(missing)} not in target list")
        pos = [variables.index(v) for v in names]
        graded = frozenset(rename.get(v, v) for v in self.graded) if graded is None else frozenset(graded)
        terms = {}
        for e, c in self.terms.items():
            new = [0] * len(variables)
            for i, k in zip(pos, e):
                new[i] = k
            terms[tuple(new)] = c
        return TruncatedSeries(variables, graded, self.order, terms)

    def specialize(self, values: Mapping[str, object], zero_others: bool = False) -> "TruncatedSeries":
        """Substitute numbers for ungraded variables and drop them."""
        values = {k: Fraction(v) for k, v in values.items()}
        unknown = set(values) - set(self.variables)
        if unknown:
            raise SeriesError(f"unknown variables {sorted(unknown)}")
        if set(values) & self.graded:
            raise SeriesError("graded variables cannot be specialized")
        if zero_others:
            for v in self.variables:
                if v not in self.graded and v not in values:
                    values[v] = Fraction(0)
        keep = [i for i, v in enumerate(self.variables) if v not in values]
        drop = [(i, values[v]) for i, v in enumerate(self.variables) if v in values]
        terms: dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            for i, val in drop:
                if e[i]:
                    c = c * val ** e[i]
            if c:
                k = tuple(e[i] for i in keep)
                terms[k] = terms.get(k, 0) + c
        return TruncatedSeries(tuple(self.variables[i] for i in keep), self.graded, self.order, terms)

    # -- coefficients and rendering ----------------------------------------------

    def monomial(self, spec: Mapping[str, int] | str) -> Exponent:
        if isinstance(spec, str):
            spec = parse_monomial(spec)
        unknown = set(spec) - set(self.variables)
        if unknown:
            raise TruncationError(f"variables {sorted(unknown)} are outside this series")
        return tuple(spec.get(v, 0) for v in self.variables)

    def coeff(self, spec: Mapping[str, int] | str | Exponent) -> Fraction:
        """Coefficient of a monomial; raises when it lies beyond the truncation."""
        e = tuple(spec) if isinstance(spec, tuple) else self.monomial(spec)
        if self._deg(e) > self.order:
            raise TruncationError(f"graded degree {self._deg(e)} exceeds order {self.order}")
        return self.terms.get(e, Fraction(0))

    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: (self._deg(t[0]), sum(t[0]), tuple(-k for k in t[0])))

    def render_monomial(self, e: Exponent) -> str:
        parts = []
        for v, k in zip(self.variables, e):
            if k == 1:
                parts.append(v)
            elif k:
                parts.append(f"{v}^{k}")
        return "*".join(parts)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for e, c in self.sorted_terms():
            mono = self.render_monomial(e)
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if not out:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append(("- " if c < 0 else "+ ") + body)
        return " ".join(out)

    def to_json(self) -> dict:
        return {
            "variables": list(self.variables),
            "graded": sorted(self.graded),
            "order": self.order,
            "terms": [
                {"monomial": self.render_monomial(e) or "1", "exponent": list(e), "coefficient": str(c)}
                for e, c in self.sorted_terms()
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


_MONO = re.compile(r"^\s*([A-Za-z][A-Za-z0-9_]*)\s*(?:\^\s*(\d+))?\s*$")


def parse_monomial(text: str) -> dict[str, int]:
    """Parse ``"x1^2,x2^1,q2^3,u^3"`` (commas or ``*`` between factors)."""
    out: dict[str, int] = {}
    if not text.strip() or text.strip() == "1":
        return out
    for part in re.split(r"[,*]", text):
        m = _MONO.match(part)
        if not m:
            raise SeriesError(f"bad monomial factor {part!r}")
        name, k = m.group(1), int(m.group(2) or 1)
        out[name] = out.get(name, 0) + k
    return out


# -- the generating series --------------------------------------------------------


def q_names(K: int) -> list[str]:
    if K < 2:
        raise SeriesError("K must be at least 2")
    return [f"q{k}" for k in range(2, K + 1)]


def q_polynomial(K: int, z: TruncatedSeries) -> TruncatedSeries:
    """Q(z) = sum over 2 <= k <= K of q_k z^(k-1)."""
    poly = {}
    for k in range(2, K + 1):
        name = f"q{k}"
        if name not in z.variables:
            raise SeriesError(f"series has no variable {name}")
        poly[k - 1] = TruncatedSeries.var(name, z.variables, z.graded, z.order)
    return z.substitute_polynomial(poly, z)


def _iterate(step, start: TruncatedSeries, limit: int) -> TruncatedSeries:
    current = start
    for _ in range(limit):
        nxt = step(current)
        if nxt == current:
            return current
        current = nxt
    return current


def _one_var_ring(N: int, K: int, x: str = "x") -> tuple[tuple[str, ...], frozenset[str]]:
    return (x, *q_names(K), "u"), frozenset({x})


def solve_w(N: int, K: int) -> TruncatedSeries:
    """The solution of w = x exp(u Q(w)), to x-degree N."""
    if N < 1:
        raise SeriesError("N must be at least 1")
    variables, graded = _one_var_ring(N, K)
    x = TruncatedSeries.var("x", variables, graded, N)
    u = TruncatedSeries.var("u", variables, graded, N)
    return _iterate(lambda w: x * (u * q_polynomial(K, w)).exp(), x, N + 1)


def solve_wtilde(N: int, K: int) -> TruncatedSeries:
    """The solution of wt = 1 + u wt Q(x wt^2), to x-degree N."""
    if N < 0:
        raise SeriesError("N must be nonnegative")
    variables, graded = _one_var_ring(N, K)
    x = TruncatedSeries.var("x", variables, graded, N)
    u = TruncatedSeries.var("u", variables, graded, N)
    one = x.one()
    return _iterate(lambda t: one + u * t * q_polynomial(K, x * t * t), one, N + 2)


def _two_var_ring(K: int) -> tuple[tuple[str, ...], frozenset[str]]:
    return ("x1", "x2", *q_names(K), "u"), frozenset({"x1", "x2"})


def _pair(f: TruncatedSeries, K: int) -> tuple[TruncatedSeries, TruncatedSeries]:
    variables, graded = _two_var_ring(K)
    return (
        f.embed(variables, {"x": "x1"}, graded),
        f.embed(variables, {"x": "x2"}, graded),
    )


def theorem1_series(N: int, K: int) -> TruncatedSeries:
    """H2 = log((w1-w2)/(x1-x2)) - u (w1 Q(w1) - w2 Q(w2))/(w1 - w2), to total x-degree N."""
    if N < 2:
        raise SeriesError("N must be at least 2")
    w1, w2 = _pair(solve_w(N + 1, K), K)
    u = TruncatedSeries.var("u", w1.variables, w1.graded, N + 1)
    D = (w1 - w2).divide_by_difference("x1", "x2")
    num = (w1 * q_polynomial(K, w1) - w2 * q_polynomial(K, w2)).divide_by_difference("x1", "x2")
    H = D.log() - u.truncate(N) * num * D.inverse()
    return H.truncate(N)


def theorem2_series(N: int, K: int) -> TruncatedSeries:
    """H2~ = log((x1 t1 - x2 t2)^2 / ((x1 - x2)(x1 t1^2 - x2 t2^2))), to total x-degree N."""
    if N < 2:
        raise SeriesError("N must be at least 2")
    t1, t2 = _pair(solve_wtilde(N, K), K)
    variables, graded = t1.variables, t1.graded
    x1 = TruncatedSeries.var("x1", variables, graded, N + 1)
    x2 = TruncatedSeries.var("x2", variables, graded, N + 1)
    t1, t2 = t1.truncate(N + 1), t2.truncate(N + 1)
    t1 = TruncatedSeries(variables, graded, N + 1, t1.terms)
    t2 = TruncatedSeries(variables, graded, N + 1, t2.terms)
    A = (x1 * t1 - x2 * t2).divide_by_difference("x1", "x2")
    B = (x1 * t1 * t1 - x2 * t2 * t2).divide_by_difference("x1", "x2")
    return (A.log().scale(2) - B.log()).truncate(N)


def _integer(value: Fraction, what: str) -> int:
    if value.denominator != 1:
        raise SeriesError(f"{what} is not an integer: {value}")
    return int(value)


def circular_descent_count(n: int, d: int) -> int:
    """n! [x^(n-d) y^d] log((x - y)/(x e^y - y e^x)).

    At n = 1 the series has no term and gives 0, although one circular
    permutation of {1} exists; the identity is meaningful for n >= 2.
    """
    if n < 1 or d < 0 or d > n:
        raise SeriesError("need n >= 1 and 0 <= d <= n")
    variables, graded = ("x", "y"), frozenset({"x", "y"})
    x = TruncatedSeries.var("x", variables, graded, n + 1)
    y = TruncatedSeries.var("y", variables, graded, n + 1)
    f = (x * y.exp() - y * x.exp()).divide_by_difference("x", "y")
    series = -f.log()
    return _integer(factorial(n) * series.coeff((n - d, d)), "circular descent count")


def necklace_series(total: int) -> TruncatedSeries:
    """log(1 + x y z^2 / (1 - z (x + y))), graded by z to degree ``total``."""
    variables, graded = ("x", "y", "z"), frozenset({"z"})
    x = TruncatedSeries.var("x", variables, graded, total)
    y = TruncatedSeries.var("y", variables, graded, total)
    z = TruncatedSeries.var("z", variables, graded, total)
    inner = x * y * z * z * (1 - z * (x + y)).inverse()
    return (1 + inner).log()


def necklace_count(n: int, m: int) -> int:
    """n! m! [x^n y^m z^(n+m)] of :func:`necklace_series`, checked against (n+m-1)!."""
    if n < 1 or m < 1:
        raise SeriesError("need n, m >= 1")
    value = factorial(n) * factorial(m) * necklace_series(n + m).coeff((n, m, n + m))
    count = _integer(value, "necklace count")
    if count != factorial(n + m - 1):
        raise SeriesError(f"necklace series gives {count}, direct count {factorial(n + m - 1)}")
    return count
