"""Euler-characteristic classes ``F_K0(M) = sum_i (-1)^i [F(M^i)]`` in K_0^add of the target.

A functor is identified by a ``FunctorTag`` and registered with an evaluator sending a
heart object to an ``FgModule``.  Registration runs an additivity audit on sample
objects.  Classes are ``K0ModClass`` values keyed by ``0`` (free) and prime powers.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Callable, Iterable, Protocol

from weightk import zmod
from weightk.classes import FunctorTag, K0Class
from weightk.errors import Mismatch, NoTensorRegistered, NotPure, UnregisteredFunctor
from weightk.komplex import (
    ChainMap,
    Complex,
    MatObject,
    cone,
    functor_homology,
    module_of_term,
    weight_complex,
)
from weightk.rings import ZZ
from weightk.zmod import FgModule, K0ModClass, k0_class


class GradedObject(Protocol):
    def degrees(self) -> Iterable[int]: ...

    def term(self, i: int): ...


Evaluator = Callable[[object, FunctorTag], FgModule]


@dataclass(frozen=True)
class RegisteredFunctor:
    name: str
    evaluate: Evaluator
    direct_sum: Callable[[object, object], object]
    free_label: str = "Z"


class FunctorRegistry:
    """Append-only map from functor names to evaluators."""

    def __init__(self) -> None:
        self._entries: dict[str, RegisteredFunctor] = {}

    def register(self, name: str, evaluate: Evaluator, direct_sum: Callable[[object, object], object],
                 samples: Iterable[tuple[object, FunctorTag]] = (), free_label: str = "Z") -> None:
        if name in self._entries:
            raise ValueError(f"functor {name!r} is already registered")
        entry = RegisteredFunctor(name, evaluate, direct_sum, free_label)
        audit_additivity(entry, list(samples))
        self._entries[name] = entry

    def get(self, tag: FunctorTag) -> RegisteredFunctor:
        try:
            return self._entries[tag.name]
        except KeyError:
            raise UnregisteredFunctor(f"functor {tag} is not registered") from None

    def __contains__(self, name: str) -> bool:
        return name in self._entries

    def names(self) -> list[str]:
        return sorted(self._entries)


def audit_additivity(entry: RegisteredFunctor, samples: list[tuple[object, FunctorTag]]) -> None:
    """``F(A + B) = F(A) + F(B)`` on every pair of samples (with a shared tag)."""
    for a, tag in samples:
        for b, tag_b in samples:
            if tag_b != tag:
                continue
            lhs = entry.evaluate(entry.direct_sum(a, b), tag)
            rhs = entry.evaluate(a, tag) + entry.evaluate(b, tag)
            if lhs != rhs:
                raise ValueError(f"functor {tag} fails additivity: {lhs} != {rhs}")


def _as_tag(F: FunctorTag | str) -> FunctorTag:
    return FunctorTag.parse(F) if isinstance(F, str) else F


# matrix-category functors


def _matrix_eval(obj: MatObject, tag: FunctorTag) -> FgModule:
    return module_of_term(obj.rank, obj.ring, tag)[0]


def _matrix_sum(a: MatObject, b: MatObject) -> MatObject:
    return MatObject(a.rank + b.rank, a.ring)


REGISTRY = FunctorRegistry()
_samples = [MatObject(r, ZZ) for r in (0, 1, 2)]
REGISTRY.register("id", _matrix_eval, _matrix_sum, [(o, FunctorTag("id")) for o in _samples])
REGISTRY.register("tensor_mod", _matrix_eval, _matrix_sum,
                  [(o, FunctorTag("tensor_mod", n)) for o in _samples for n in (2, 4, 6)])
REGISTRY.register("rational", _matrix_eval, _matrix_sum, [(o, FunctorTag("rational")) for o in _samples],
                  free_label="Q")


# Euler-characteristic classes


def f_k0(C: GradedObject, F: FunctorTag | str, ell: int | None = None,
         registry: FunctorRegistry = REGISTRY) -> K0ModClass:
    """``sum_i (-1)^i [F(C^i)]``."""
    tag = _as_tag(F)
    entry = registry.get(tag)
    label = "Q" if (entry.free_label == "Q" or _ring_is_q(C)) else "Z"
    total = K0ModClass.zero(label)
    for i in C.degrees():
        cls = k0_class(entry.evaluate(C.term(i), tag), ell)
        total = total + K0ModClass(dict(cls), label) * (-1) ** (i % 2)
    return total


def _ring_is_q(C) -> bool:
    ring = getattr(C, "ring", None)
    return ring is not None and ring.is_rationals


def triangle_additivity_check(f: ChainMap, F: FunctorTag | str = "id") -> bool:
    """``F_K0(cone f) = F_K0(target) - F_K0(source)``."""
    return f_k0(cone(f), F) == f_k0(f.target, F) - f_k0(f.source, F)


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    lhs: str = ""
    rhs: str = ""
    detail: str = ""


def section_isomorphism_check(objects: Iterable[MatObject], equivalences: Iterable[ChainMap] = (),
                              F: FunctorTag | str = "id") -> list[CheckResult]:
    """The heart embedding followed by ``F_K0`` is the identity on classes; ``F_K0`` is
    constant along each supplied homotopy equivalence."""
    out = []
    for obj in objects:
        C = Complex.one_term(obj.rank, 0, obj.ring)
        expected = k0_class(_matrix_eval(obj, _as_tag(F)))
        got = f_k0(C, F)
        out.append(CheckResult(f"section rank {obj.rank}", got == expected, got.render(), expected.render()))
    for k, f in enumerate(equivalences):
        a, b = f_k0(f.source, F), f_k0(f.target, F)
        out.append(CheckResult(f"invariance {k}", a == b, a.render(), b.render()))
    return out


def semisimple_formula(C: Complex, F: FunctorTag | str = "rational") -> tuple[K0ModClass, K0ModClass]:
    """``(sum (-1)^i [F(C^i)], sum (-1)^i [H^i(F(C))])`` for a field-valued F."""
    lhs = f_k0(C, F)
    rhs = K0ModClass.zero(lhs.free_label)
    for i in C.degrees():
        dim = functor_homology(C, F, i).free_rank
        if dim:
            rhs = rhs + K0ModClass({0: dim * (-1) ** (i % 2)}, lhs.free_label)
    return lhs, rhs


def pure_object_shortcut(C: Complex, F: FunctorTag | str = "id") -> K0ModClass:
    """``(-1)^j [H^j(F(C))]`` when the weight complex of C is a single term in degree j."""
    W = weight_complex(C)
    s = W.support
    if s is None:
        return f_k0(C, F)
    if s[0] != s[1]:
        raise NotPure(f"weight complex spans degrees {s[0]}..{s[1]}")
    j = s[0]
    value = k0_class(functor_homology(C, F, j)) * (-1) ** (j % 2)
    direct = f_k0(C, F)
    value = K0ModClass(dict(value), direct.free_label)
    if value != direct:
        raise Mismatch(f"shortcut {value.render()} != {direct.render()}")
    return value


# ring structure


def _module_product(a, b) -> dict:
    """Class of ``module(a) (x) module(b)`` on K_0 keys."""
    if a == 0:
        return {b: 1}
    if b == 0:
        return {a: 1}
    g = gcd(a, b)
    return {g: 1} if g > 1 else {}


def _graded_product(a, b) -> dict:
    (p, x), (q, y) = a, b
    out: dict = {}
    table = zmod.kunneth({p: zmod.module_of_key(x)}, {q: zmod.module_of_key(y)})
    for deg, M in table.items():
        for key, c in k0_class(M).items():
            out[(deg, key)] = out.get((deg, key), 0) + c
    return out


TENSOR_RULES: dict[str, Callable[[object, object], dict]] = {
    "matrix": _module_product,
    "motif": _graded_product,
}


def tensor_unit(rule: str):
    if rule not in TENSOR_RULES:
        raise NoTensorRegistered(f"no tensor rule {rule!r}")
    return 0 if rule == "matrix" else (0, 0)


def k0_product(x: K0Class, y: K0Class, rule: str = "matrix") -> K0Class:
    """Bilinear extension of the tensor product on basis keys."""
    try:
        prod = TENSOR_RULES[rule]
    except KeyError:
        raise NoTensorRegistered(f"no tensor rule {rule!r}") from None
    out: dict = {}
    for a, ca in x.items():
        for b, cb in y.items():
            for key, c in prod(a, b).items():
                out[key] = out.get(key, 0) + ca * cb * c
    return type(x)(out, x.free_label)
