"""Finitely supported integer combinations of isomorphism-class keys.

Keys used across the package:

* ``0``            -- the free rank-one object (``[Z]``, ``[Q]`` or ``[R]`` depending on ``free_label``)
* ``n >= 2``       -- the cyclic group ``Z/n`` (n a prime power once canonicalized)
* ``(q, key)``     -- a graded key: ``key`` placed in cohomological degree ``q``
"""

from __future__ import annotations

from collections.abc import Mapping
from typing import Hashable, Iterator


def _sort_key(key):
    if isinstance(key, tuple):
        return (1,) + tuple(_sort_key(k) for k in key)
    return (0, key)


class K0Class(Mapping):
    __slots__ = ("_coeffs", "free_label")

    def __init__(self, coeffs: Mapping[Hashable, int] | None = None, free_label: str = "Z"):
        self._coeffs = {k: int(v) for k, v in (coeffs or {}).items() if v}
        self.free_label = free_label

    @classmethod
    def zero(cls, free_label: str = "Z") -> K0Class:
        return cls({}, free_label)

    @classmethod
    def generator(cls, key, coeff: int = 1, free_label: str = "Z") -> K0Class:
        return cls({key: coeff}, free_label)

    def _new(self, coeffs) -> K0Class:
        return type(self)(coeffs, self.free_label)

    # Mapping protocol: absent keys read as 0 via get(); [] raises like a dict
    def __getitem__(self, key) -> int:
        return self._coeffs[key]

    def __iter__(self) -> Iterator:
        return iter(sorted(self._coeffs, key=_sort_key))

    def __len__(self) -> int:
        return len(self._coeffs)

    def coeff(self, key) -> int:
        return self._coeffs.get(key, 0)

    def __add__(self, other: K0Class) -> K0Class:
        out = dict(self._coeffs)
        for k, v in other._coeffs.items():
            out[k] = out.get(k, 0) + v
        return self._new(out)

    def __neg__(self) -> K0Class:
        return self._new({k: -v for k, v in self._coeffs.items()})

    def __sub__(self, other: K0Class) -> K0Class:
        return self + (-other)

    def __rmul__(self, n: int) -> K0Class:
        return self._new({k: n * v for k, v in self._coeffs.items()})

    def __mul__(self, n: int) -> K0Class:
        if not isinstance(n, int):
            return NotImplemented
        return n * self

    def __eq__(self, other) -> bool:
        if not isinstance(other, K0Class):
            return NotImplemented
        return self._coeffs == other._coeffs

    __hash__ = None  # type: ignore[assignment]

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def map_keys(self, fn) -> K0Class:
        """Push forward along a key map; ``fn`` returning None drops the key."""
        out: dict = {}
        for k, v in self._coeffs.items():
            nk = fn(k)
            if nk is not None:
                out[nk] = out.get(nk, 0) + v
        return self._new(out)

    def filter(self, pred) -> K0Class:
        return self._new({k: v for k, v in self._coeffs.items() if pred(k)})

    def key_text(self, key) -> str:
        if isinstance(key, tuple):
            q, inner = key
            return f"{self.key_text(inner)}@{q}"
        if key == 0:
            return self.free_label
        return f"Z/{key}"

    def render(self) -> str:
        if not self._coeffs:
            return "0"
        return " ".join(f"{self._coeffs[k]:+d}[{self.key_text(k)}]" for k in self)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.render()!r})"


class FunctorTag:
    """Name plus parameters identifying an additive functor out of a heart.

    Matrix-category tags: ``id``, ``tensor_mod(n)``, ``rational``.
    Motif tags: ``E(n, d)``, ``H(n)``, ``F(n)``, ``G(n)``.
    """

    __slots__ = ("name", "params")

    def __init__(self, name: str, *params: int):
        self.name = name
        self.params = tuple(params)

    def __eq__(self, other) -> bool:
        return isinstance(other, FunctorTag) and (self.name, self.params) == (other.name, other.params)

    def __hash__(self) -> int:
        return hash((self.name, self.params))

    def __lt__(self, other: FunctorTag) -> bool:
        return (self.name, self.params) < (other.name, other.params)

    def __str__(self) -> str:
        if self.name == "tensor_mod":
            return f"(x)Z/{self.params[0]}"
        if self.name == "rational":
            return "(x)Q"
        if self.name in ("F", "G", "H") and self.params:
            return f"{self.name}^{self.params[0]}"
        if self.name == "E" and self.params:
            return f"E^{self.params[0]}[d={self.params[1]}]" if len(self.params) > 1 else f"E^{self.params[0]}"
        if not self.params:
            return self.name
        return f"{self.name}({', '.join(map(str, self.params))})"

    def __repr__(self) -> str:
        return f"FunctorTag({self.name!r}{''.join(', ' + repr(p) for p in self.params)})"

    @classmethod
    def parse(cls, text: str) -> FunctorTag:
        """Accepts ``id``, ``Q``, ``Z/4``, ``G2``, ``F^3``, ``E2`` and ``name(a,b)`` forms."""
        t = text.strip().replace("^", "")
        if t in ("id", "identity"):
            return cls("id")
        if t in ("Q", "rational", "(x)Q"):
            return cls("rational")
        if t.startswith("(x)"):
            t = t[3:]
        if t.startswith("Z/"):
            return cls("tensor_mod", int(t[2:]))
        if "(" in t and t.endswith(")"):
            name, args = t[:-1].split("(", 1)
            return cls(name, *(int(a) for a in args.split(",") if a.strip()))
        if t[:1] in "EFGH" and t[1:].lstrip("-").isdigit():
            return cls(t[0], int(t[1:]))
        raise ValueError(f"cannot parse functor tag {text!r}")
