"""Permutations of {1..n}, cycle indices and the genus arithmetic of factorizations.

Composition convention: ``multiply(p, q)`` applies ``q`` first, then ``p``.
A factorization ``(s_r, ..., s_1)`` therefore multiplies out as
``multiply(s_r, multiply(..., s_1))`` with ``s_1`` acting first.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence


class CycleNotationError(ValueError):
    """Raised for malformed cycle-notation strings."""


class DegreeMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class Permutation:
    """A bijection on {1..n}; ``images[v - 1]`` is the image of ``v``."""

    images: tuple[int, ...]

    def __post_init__(self):
        n = len(self.images)
        if n < 1:
            raise ValueError("degree must be positive")
        if sorted(self.images) != list(range(1, n + 1)):
            raise ValueError(f"not a bijection of 1..{n}: {self.images}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> "Permutation":
        images = list(range(1, degree + 1))
        seen: set[int] = set()
        for cyc in cycles:
            for v in cyc:
                if not 1 <= v <= degree:
                    raise CycleNotationError(f"symbol {v} out of range 1..{degree}")
                if v in seen:
                    raise CycleNotationError(f"symbol {v} repeated")
                seen.add(v)
            for a, b in zip(cyc, tuple(cyc[1:]) + tuple(cyc[:1])):
                images[a - 1] = b
        return cls(tuple(images))

    @classmethod
    def cycle(cls, points: Sequence[int], degree: int) -> "Permutation":
        return cls.from_cycles([points], degree)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, v: int) -> int:
        return self.images[v - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return multiply(self, other)

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for v, image in enumerate(self.images, 1):
            inv[image - 1] = v
        return Permutation(tuple(inv))

    @cached_property
    def support(self) -> frozenset[int]:
        return frozenset(v for v, image in enumerate(self.images, 1) if v != image)

    def cycles(self, include_fixed: bool = True) -> list[tuple[int, ...]]:
        """Disjoint cycles, each led by its minimum, sorted by minimum."""
        seen = [False] * (self.degree + 1)
        out = []
        for start in range(1, self.degree + 1):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            v = self(start)
            while v != start:
                cyc.append(v)
                seen[v] = True
                v = self(v)
            if include_fixed or len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    @cached_property
    def text(self) -> str:
        return format_cycles(self)

    def is_identity(self) -> bool:
        return not self.support

    def is_cycle(self) -> bool:
        """True when exactly one cycle has length >= 2."""
        return len(self.cycles(include_fixed=False)) == 1

    def __str__(self) -> str:
        return self.text

    def __repr__(self) -> str:
        return f"Permutation({format_cycles(self)!r}, degree={self.degree})"


_TOKEN = re.compile(r"\s*(\(|\)|\d+)")


def parse_cycles(text: str, degree: int | None = None) -> Permutation:
    """Parse a product of disjoint cycles such as ``"(1 5)(2 4 3)"``.

    Symbols may be separated by spaces or commas.  Omitted symbols are fixed.
    When ``degree`` is None it is taken to be the largest symbol that appears.
    """
    cycles: list[list[int]] = []
    current: list[int] | None = None
    pos = 0
    text = text.replace(",", " ").strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise CycleNotationError(f"unexpected character at {pos}: {text[pos:]!r}")
        tok = m.group(1)
        pos = m.end()
        if tok == "(":
            if current is not None:
                raise CycleNotationError("nested parenthesis")
            current = []
        elif tok == ")":
            if current is None:
                raise CycleNotationError("unbalanced ')'")
            cycles.append(current)
            current = None
        else:
            if current is None:
                raise CycleNotationError(f"symbol {tok} outside parentheses")
            current.append(int(tok))
        while pos < len(text) and text[pos].isspace():
            pos += 1
    if current is not None:
        raise CycleNotationError("unclosed '('")
    if any(not cyc for cyc in cycles):
        raise CycleNotationError("empty cycle '()'")
    symbols = [v for cyc in cycles for v in cyc]
    if degree is None:
        if not symbols:
            raise CycleNotationError("cannot infer degree of an empty product")
        degree = max(symbols)
    return Permutation.from_cycles(cycles, degree)


def format_cycles(p: Permutation) -> str:
    """Canonical text: nontrivial cycles led by their minimum, sorted by minimum.

    The fixed point ``(n)`` is appended when ``n`` is fixed, so that the
    degree can be read back from the text.
    """
    parts = ["(" + " ".join(map(str, cyc)) + ")" for cyc in p.cycles(include_fixed=False)]
    if p(p.degree) == p.degree:
        parts.append(f"({p.degree})")
    return "".join(parts)


def multiply(p: Permutation, q: Permutation) -> Permutation:
    """The product ``p q``: apply ``q`` first, then ``p``."""
    if p.degree != q.degree:
        raise DegreeMismatchError(f"degrees differ: {p.degree} vs {q.degree}")
    pim = p.images
    return Permutation(tuple(pim[image - 1] for image in q.images))


def product(factors: Sequence[Permutation], degree: int) -> Permutation:
    """Right-to-left product of ``factors`` (the last factor acts first)."""
    result = Permutation.identity(degree)
    for f in reversed(factors):
        result = multiply(f, result)
    return result


def cycle_type(p: Permutation) -> tuple[int, ...]:
    return tuple(sorted((len(c) for c in p.cycles()), reverse=True))


def are_disjoint(p: Permutation, q: Permutation) -> bool:
    if p.degree != q.degree:
        raise DegreeMismatchError(f"degrees differ: {p.degree} vs {q.degree}")
    return p.support.isdisjoint(q.support)


class UnionFind:
    def __init__(self, items: Iterable[int]):
        self.parent = {x: x for x in items}

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if ry < rx:
            rx, ry = ry, rx
        self.parent[ry] = rx
        return True

    def groups(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return sorted(out.values())


def orbits(factors: Iterable[Permutation], degree: int) -> list[list[int]]:
    """Orbits of the group generated by ``factors`` on {1..degree}."""
    uf = UnionFind(range(1, degree + 1))
    for f in factors:
        if f.degree != degree:
            raise DegreeMismatchError(f"factor of degree {f.degree} in S_{degree}")
        for v in f.support:
            uf.union(v, f(v))
    return uf.groups()


def is_transitive(factors: Sequence[Permutation], degree: int) -> bool:
    return len(orbits(factors, degree)) == 1


# -- cycle indices and genus -------------------------------------------------


@dataclass(frozen=True)
class CycleIndex:
    """Counts ``i_k`` of k-cycle factors, k >= 2, stored as sorted (k, i_k) pairs."""

    items: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        cleaned = []
        for k, count in sorted(self.items):
            if k < 2:
                raise ValueError(f"cycle length {k} < 2 in cycle index")
            if count < 0:
                raise ValueError(f"negative count for k={k}")
            if count:
                cleaned.append((k, count))
        object.__setattr__(self, "items", tuple(cleaned))

    @classmethod
    def of(cls, counts: Mapping[int, int] | None = None, **kw: int) -> "CycleIndex":
        """``CycleIndex.of({2: 3})`` or ``CycleIndex.of(i2=3, i3=1)``."""
        merged = dict(counts or {})
        for key, value in kw.items():
            merged[int(key.lstrip("i"))] = value
        return cls(tuple(merged.items()))

    @classmethod
    def from_lengths(cls, lengths: Iterable[int]) -> "CycleIndex":
        counts: dict[int, int] = {}
        for k in lengths:
            counts[k] = counts.get(k, 0) + 1
        return cls(tuple(counts.items()))

    @classmethod
    def parse(cls, text: str) -> "CycleIndex":
        """Parse ``"2:3,3:1"`` (i_2 = 3, i_3 = 1).  The empty string is the empty index."""
        counts: dict[int, int] = {}
        text = text.strip()
        if not text:
            return cls()
        for chunk in text.split(","):
            try:
                k, count = chunk.split(":")
                counts[int(k)] = counts.get(int(k), 0) + int(count)
            except ValueError:
                raise ValueError(f"bad cycle-index entry {chunk!r}; expected k:count") from None
        return cls(tuple(counts.items()))

    def __getitem__(self, k: int) -> int:
        return dict(self.items).get(k, 0)

    def __bool__(self) -> bool:
        return bool(self.items)

    def as_dict(self) -> dict[int, int]:
        return dict(self.items)

    @property
    def r(self) -> int:
        return sum(count for _, count in self.items)

    @property
    def weight(self) -> int:
        """Sum of (k - 1) i_k: what the factors contribute to the genus inequality."""
        return sum((k - 1) * count for k, count in self.items)

    @property
    def max_length(self) -> int:
        return max((k for k, _ in self.items), default=0)

    def lengths(self) -> list[int]:
        return [k for k, count in self.items for _ in range(count)]

    def __str__(self) -> str:
        return ",".join(f"{k}:{count}" for k, count in self.items)


class Infeasible(enum.Enum):
    SUB_MINIMAL = "sub-minimal"
    PARITY = "parity"

    def __str__(self) -> str:
        return self.value


class InfeasibleIndexError(ValueError):
    """A cycle index that admits no minimal transitive factorization."""

    def __init__(self, reason: str, detail: str = ""):
        self.reason = reason
        super().__init__(f"{reason}: {detail}" if detail else reason)


def genus_of_index(alpha: Sequence[int], index: CycleIndex, extra: int = 0) -> int | Infeasible:
    """Genus g with  sum (k-1) i_k + extra = n + l(alpha) - 2 + 2g.

    ``extra`` is the contribution of additional non-cycle factors (a factor of
    cycle type beta contributes n - l(beta)).  Returns an :class:`Infeasible`
    member instead of a negative or half-integral genus.
    """
    n = sum(alpha)
    if n < 1 or any(a < 1 for a in alpha):
        raise ValueError(f"not a composition: {tuple(alpha)}")
    excess = index.weight + extra - (n + len(alpha) - 2)
    if excess < 0:
        return Infeasible.SUB_MINIMAL
    if excess % 2:
        return Infeasible.PARITY
    return excess // 2


def require_genus_zero(alpha: Sequence[int], index: CycleIndex, extra: int = 0) -> None:
    g = genus_of_index(alpha, index, extra)
    if isinstance(g, Infeasible):
        raise InfeasibleIndexError(
            g.value,
            f"sum (k-1) i_k = {index.weight + extra} but n + l(alpha) - 2 = {sum(alpha) + len(alpha) - 2}",
        )
    if g > 0:
        raise InfeasibleIndexError("positive genus", f"index {index} gives genus {g} for alpha={tuple(alpha)}")


# -- partitions and compositions ---------------------------------------------


def parse_composition(text: str) -> tuple[int, ...]:
    try:
        parts = tuple(int(t) for t in text.replace(" ", "").split(",") if t)
    except ValueError:
        raise ValueError(f"bad composition {text!r}") from None
    if not parts or any(p < 1 for p in parts):
        raise ValueError(f"bad composition {text!r}")
    return parts


def partitions(n: int, max_part: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of n as weakly decreasing tuples, in reverse lexicographic order."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def genus_zero_indices(alpha: Sequence[int], max_k: int | None = None, extra: int = 0) -> list[CycleIndex]:
    """All cycle indices of genus 0 for ``alpha``, with factor lengths in 2..max_k."""
    n = sum(alpha)
    if max_k is None:
        max_k = n
    weight = n + len(alpha) - 2 - extra
    if weight < 0:
        return []
    out = []
    for parts in partitions(weight, max_k - 1) if max_k >= 2 else ([()] if weight == 0 else []):
        out.append(CycleIndex.from_lengths(p + 1 for p in parts))
    return out


def canonical_target(alpha: Sequence[int]) -> Permutation:
    """The permutation whose cycles are the consecutive blocks D_1, D_2, ... of ``alpha``."""
    cycles = []
    start = 1
    for a in alpha:
        cycles.append(tuple(range(start, start + a)))
        start += a
    return Permutation.from_cycles(cycles, sum(alpha))


def permutations_of_type(beta: Sequence[int], n: int) -> Iterator[Permutation]:
    """All permutations of {1..n} with cycle type ``beta`` (in lexicographic image order)."""
    from itertools import permutations as _perms

    target = tuple(sorted(beta, reverse=True))
    for images in _perms(range(1, n + 1)):
        p = Permutation(images)
        if cycle_type(p) == target:
            yield p


# -- factorizations ------------------------------------------------------------


@dataclass(frozen=True)
class Factorization:
    """A tuple ``(s_r, ..., s_1)`` of permutations whose product is ``target``.

    ``factors[0]`` is the leftmost factor ``s_r``; ``s_1`` acts first.
    """

    factors: tuple[Permutation, ...]
    target: Permutation

    def __post_init__(self):
        n = self.target.degree
        for f in self.factors:
            if f.degree != n:
                raise DegreeMismatchError(f"factor {f} is not in S_{n}")
        if product(self.factors, n) != self.target:
            raise ValueError(f"factors do not multiply to {self.target}")

    @classmethod
    def unchecked(cls, factors: tuple[Permutation, ...], target: Permutation):
        """Build without re-verifying the product (for trusted search output)."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "factors", factors)
        object.__setattr__(obj, "target", target)
        return obj

    @property
    def degree(self) -> int:
        return self.target.degree

    @property
    def r(self) -> int:
        return len(self.factors)

    def sigma(self, i: int) -> Permutation:
        """The factor ``s_i`` (1-based, ``s_1`` acts first)."""
        return self.factors[self.r - i]

    def is_transitive(self) -> bool:
        return is_transitive(self.factors, self.degree)

    def genus(self) -> int:
        n = self.degree
        lhs = sum(n - len(f.cycles()) for f in self.factors)
        rhs = n + len(self.target.cycles()) - 2
        return (lhs - rhs) // 2

    def is_minimal_transitive(self) -> bool:
        return self.is_transitive() and self.genus() == 0

    def inverse_reversed(self) -> "Factorization":
        """``(s_1^-1, ..., s_r^-1)``, a factorization of ``target^-1``."""
        return Factorization(tuple(f.inverse() for f in reversed(self.factors)), self.target.inverse())

    def sort_key(self) -> tuple[str, ...]:
        # rightmost factor most significant
        return tuple(f.text for f in reversed(self.factors))

    def __str__(self) -> str:
        inner = ", ".join(str_cycle(f) for f in self.factors)
        return f"({inner})"


class CycleFactorization(Factorization):
    """A minimal transitive factorization into cycles of length >= 2."""

    def __post_init__(self):
        super().__post_init__()
        for f in self.factors:
            if not f.is_cycle():
                raise ValueError(f"factor {f} is not a single cycle")

    @property
    def cycle_index(self) -> CycleIndex:
        return CycleIndex.from_lengths(len(f.support) for f in self.factors)


def str_cycle(p: Permutation) -> str:
    """Cycle notation without the trailing fixed point marker (``"()"`` for the identity)."""
    parts = ["(" + " ".join(map(str, cyc)) + ")" for cyc in p.cycles(include_fixed=False)]
    return "".join(parts) or "()"
