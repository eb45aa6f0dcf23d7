"""Permutations of {1..N} with right-to-left composition.

Points are 1-indexed everywhere a caller can see them.  Internally a
permutation is a tuple of 0-indexed images, which keeps hashing and
conversion to numpy cheap.

``compose(p, q)`` (also ``p * q``) applies ``q`` first, then ``p``.
"""

from __future__ import annotations

import enum
import math
import re
from collections import Counter
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

UINT64_MAX = 2**64 - 1

_degree_cap = 64


class PermutationError(ValueError):
    pass


class MalformedCyclesError(PermutationError):
    pass


class PointRangeError(PermutationError):
    pass


class DegreeMismatchError(PermutationError):
    pass


class OrderOverflowError(OverflowError):
    pass


def degree_cap() -> int:
    return _degree_cap


def set_degree_cap(cap: int) -> int:
    """Set the largest degree accepted by :class:`Permutation`; returns the old cap."""
    global _degree_cap
    if cap < 1:
        raise ValueError("degree cap must be positive")
    old, _degree_cap = _degree_cap, int(cap)
    return old


class Parity(enum.IntEnum):
    EVEN = 0
    ODD = 1

    def __xor__(self, other):
        return Parity(int(self) ^ int(other))

    def __str__(self):
        return self.name.lower()


class Permutation:
    """A bijection of {1..degree}, given by its 1-indexed image list.

    >>> p = Permutation([2, 1, 4, 3, 5, 6, 7, 8])
    >>> p(1), p.degree
    (2, 8)
    >>> p
    Permutation('(1 2)(3 4)', degree=8)
    """

    __slots__ = ("_img", "_hash")

    def __init__(self, images: Iterable[int]):
        img = tuple(int(v) - 1 for v in images)
        _check_bijection(img)
        self._img = img
        self._hash = hash(img)

    @classmethod
    def _raw(cls, img: tuple) -> "Permutation":
        # trusted 0-indexed constructor, no validation
        obj = object.__new__(cls)
        obj._img = img
        obj._hash = hash(img)
        return obj

    @classmethod
    def from_array(cls, arr, validate: bool = True) -> "Permutation":
        """Build from a 0-indexed integer array (the numpy kernels' layout)."""
        img = tuple(int(v) for v in arr)
        if validate:
            _check_bijection(img)
        return cls._raw(img)

    @property
    def degree(self) -> int:
        return len(self._img)

    @property
    def images(self) -> tuple:
        return tuple(v + 1 for v in self._img)

    @property
    def zero_based(self) -> tuple:
        return self._img

    def to_array(self, dtype=np.int8) -> np.ndarray:
        return np.asarray(self._img, dtype=dtype)

    def __call__(self, point: int) -> int:
        if not 1 <= point <= len(self._img):
            raise PointRangeError(f"point {point} outside 1..{len(self._img)}")
        return self._img[point - 1] + 1

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __pow__(self, k: int) -> "Permutation":
        return power(self, k)

    def __invert__(self) -> "Permutation":
        return inverse(self)

    def __eq__(self, other):
        if not isinstance(other, Permutation):
            return NotImplemented
        return self._img == other._img

    def __lt__(self, other: "Permutation") -> bool:
        return self._img < other._img

    def __hash__(self):
        return self._hash

    def __len__(self):
        return len(self._img)

    def __repr__(self):
        return f"Permutation('{to_cycle_string(self)}', degree={self.degree})"

    def __str__(self):
        return to_cycle_string(self)


def _check_bijection(img: tuple) -> None:
    n = len(img)
    if n < 1:
        raise PermutationError("degree must be at least 1")
    if n > _degree_cap:
        raise PermutationError(f"degree {n} exceeds the configured cap {_degree_cap}")
    if sorted(img) != list(range(n)):
        raise PermutationError("image list is not a bijection of 1..degree")


def identity(degree: int) -> Permutation:
    if degree < 1:
        raise PermutationError("degree must be at least 1")
    if degree > _degree_cap:
        raise PermutationError(f"degree {degree} exceeds the configured cap {_degree_cap}")
    return Permutation._raw(tuple(range(degree)))


def from_cycles(degree: int, cycles: Iterable[Sequence[int]]) -> Permutation:
    """Permutation sending each cycle entry to its successor.

    >>> from_cycles(8, [(1, 2), (3, 4)]).images
    (2, 1, 4, 3, 5, 6, 7, 8)
    """
    img = list(identity(degree)._img)
    seen = set()
    for cycle in cycles:
        cycle = [int(c) for c in cycle]
        for c in cycle:
            if not 1 <= c <= degree:
                raise PointRangeError(f"point {c} outside 1..{degree}")
            if c in seen:
                raise MalformedCyclesError(f"point {c} repeated in cycle list")
            seen.add(c)
        for i, c in enumerate(cycle):
            img[c - 1] = cycle[(i + 1) % len(cycle)] - 1
    return Permutation._raw(tuple(img))


def _same_degree(p: Permutation, q: Permutation) -> None:
    if p.degree != q.degree:
        raise DegreeMismatchError(f"degrees differ: {p.degree} vs {q.degree}")


def compose(p: Permutation, q: Permutation) -> Permutation:
    """``p ∘ q``: apply ``q`` first, then ``p``."""
    _same_degree(p, q)
    pi = p._img
    return Permutation._raw(tuple(pi[j] for j in q._img))


def inverse(p: Permutation) -> Permutation:
    inv = [0] * p.degree
    for i, j in enumerate(p._img):
        inv[j] = i
    return Permutation._raw(tuple(inv))


def power(p: Permutation, k: int) -> Permutation:
    if k < 0:
        return power(inverse(p), -k)
    # k can be huge; only k mod each cycle length matters
    img = list(range(p.degree))
    for cycle in _cycles0(p):
        m = len(cycle)
        s = k % m
        for i, c in enumerate(cycle):
            img[c] = cycle[(i + s) % m]
    return Permutation._raw(tuple(img))


def apply(p: Permutation, point: int) -> int:
    return p(point)


def _cycles0(p: Permutation) -> list:
    img = p._img
    seen = [False] * len(img)
    out = []
    for start in range(len(img)):
        if seen[start]:
            continue
        cycle = []
        i = start
        while not seen[i]:
            seen[i] = True
            cycle.append(i)
            i = img[i]
        out.append(cycle)
    return out


def cycle_decompose(p: Permutation) -> list:
    """Canonical cycles: each starts at its minimum, ordered by minimum, 1-cycles kept.

    >>> cycle_decompose(from_cycles(5, [(3, 1)]))
    [(1, 3), (2,), (4,), (5,)]
    """
    # scanning starts in increasing order already yields the canonical form
    return [tuple(c + 1 for c in cycle) for cycle in _cycles0(p)]


class CycleType:
    """Partition of the degree into cycle lengths, 1-cycles included."""

    __slots__ = ("parts",)

    def __init__(self, parts: Iterable[int]):
        parts = tuple(sorted((int(v) for v in parts), reverse=True))
        if not parts or parts[-1] < 1:
            raise ValueError("cycle type needs positive parts")
        object.__setattr__(self, "parts", parts)

    def __setattr__(self, name, value):
        raise AttributeError("CycleType is immutable")

    @property
    def degree(self) -> int:
        return sum(self.parts)

    def multiplicities(self) -> dict:
        return dict(sorted(Counter(self.parts).items()))

    def exp(self) -> str:
        """Exponent notation with ascending lengths, e.g. ``"2^1 6^1"``."""
        return " ".join(f"{length}^{count}" for length, count in self.multiplicities().items())

    @classmethod
    def from_exp(cls, text: str) -> "CycleType":
        parts = []
        for token in text.split():
            length, _, count = token.partition("^")
            parts += [int(length)] * int(count or 1)
        return cls(parts)

    def order(self) -> int:
        return _checked_lcm(self.parts)

    def all_even(self) -> bool:
        return all(v % 2 == 0 for v in self.parts)

    def __eq__(self, other):
        if not isinstance(other, CycleType):
            return NotImplemented
        return self.parts == other.parts

    def __lt__(self, other):
        return self.parts < other.parts

    def __hash__(self):
        return hash(self.parts)

    def __repr__(self):
        return f"CycleType('{self.exp()}')"


def _checked_lcm(values: Iterable[int]) -> int:
    result = reduce(math.lcm, values, 1)
    if result > UINT64_MAX:
        raise OrderOverflowError(f"order {result} does not fit in 64 bits")
    return result


def cycle_type(p: Permutation) -> CycleType:
    return CycleType(len(c) for c in _cycles0(p))


def order(p: Permutation) -> int:
    return _checked_lcm(len(c) for c in _cycles0(p))


def parity(p: Permutation) -> Parity:
    return Parity(sum(len(c) - 1 for c in _cycles0(p)) % 2)


def support(p: Permutation) -> frozenset:
    return frozenset(i + 1 for i, j in enumerate(p._img) if i != j)


def fixes_setwise(p: Permutation, points: Iterable[int]) -> bool:
    points = set(points)
    for s in points:
        if not 1 <= s <= p.degree:
            raise PointRangeError(f"point {s} outside 1..{p.degree}")
    return {p._img[s - 1] + 1 for s in points} == points


def conjugate(g: Permutation, p: Permutation) -> Permutation:
    """``g ∘ p ∘ g⁻¹``."""
    _same_degree(g, p)
    return compose(compose(g, p), inverse(g))


def is_identity(p: Permutation) -> bool:
    return all(i == j for i, j in enumerate(p._img))


def is_involution(p: Permutation) -> bool:
    img = p._img
    return not is_identity(p) and all(img[img[i]] == i for i in range(len(img)))


def commutes(p: Permutation, q: Permutation) -> bool:
    return compose(p, q) == compose(q, p)


def to_cycle_string(p: Permutation) -> str:
    cycles = [c for c in cycle_decompose(p) if len(c) > 1]
    if not cycles:
        return "()"
    return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles)


def to_image_string(p: Permutation) -> str:
    return "[" + ",".join(map(str, p.images)) + "]"


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_permutation(text: str, degree: int | None = None) -> Permutation:
    """Parse ``"[2,1,4,3]"`` or cycle notation such as ``"(1 2)(3 4)"``.

    Cycle notation needs ``degree`` unless the largest listed point is meant.
    """
    text = text.strip()
    if text.startswith("["):
        if not text.endswith("]"):
            raise PermutationError(f"malformed image list: {text!r}")
        body = text[1:-1].strip()
        values = [int(v) for v in re.split(r"[,\s]+", body) if v] if body else []
        p = Permutation(values)
        if degree is not None and p.degree != degree:
            raise DegreeMismatchError(f"expected degree {degree}, got {p.degree}")
        return p
    if _CYCLE_RE.sub("", text).strip():
        raise PermutationError(f"malformed cycle notation: {text!r}")
    cycles = []
    for body in _CYCLE_RE.findall(text):
        tokens = [t for t in re.split(r"[,\s]+", body) if t]
        try:
            cycles.append([int(t) for t in tokens])
        except ValueError as exc:
            raise PermutationError(f"malformed cycle notation: {text!r}") from exc
    if degree is None:
        degree = max((c for cycle in cycles for c in cycle), default=1)
    return from_cycles(degree, [c for c in cycles if c])
