"""Coefficient arithmetic over F2.

Four variable modes are supported:

* ``U``     -- F2[U]
* ``UQ``    -- F2[U, Q]/(Q^2)
* ``UV``    -- F2[u, v], where u and v stand for the knot variables
* ``link:n`` -- F2[u1, v1, ..., un, vn] for an n-component link

A coefficient is an immutable set of monomials (addition is symmetric
difference).  Text form: ``U^2*Q + 1``, ``u*v^3``, ``u1^2*v2``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator


class RingError(ValueError):
    pass


@dataclass(frozen=True)
class Ring:
    kind: str
    components: int = 1

    def __post_init__(self) -> None:
        if self.kind not in ("U", "UQ", "UV", "link"):
            raise RingError(f"unknown ring mode {self.kind!r}")
        if self.kind == "link" and self.components < 1:
            raise RingError("link mode needs at least one component")
        if self.kind != "link" and self.components != 1:
            raise RingError("only link mode has several components")

    @staticmethod
    def parse(text: str) -> "Ring":
        text = text.strip()
        if text.startswith("link:"):
            try:
                n = int(text[5:])
            except ValueError:
                raise RingError(f"bad link mode {text!r}") from None
            return Ring("link", n)
        return Ring(text)

    def __str__(self) -> str:
        return f"link:{self.components}" if self.kind == "link" else self.kind

    @property
    def has_q(self) -> bool:
        return self.kind == "UQ"

    @property
    def two_variable(self) -> bool:
        return self.kind in ("UV", "link")

    @property
    def variables(self) -> tuple[str, ...]:
        if self.kind in ("U", "UQ"):
            return ("U",)
        if self.kind == "UV":
            return ("u", "v")
        names: list[str] = []
        for i in range(1, self.components + 1):
            names += [f"u{i}", f"v{i}"]
        return tuple(names)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def var_index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise RingError(f"variable {name!r} not in mode {self}") from None

    # -- gradings ---------------------------------------------------------

    @property
    def grading_length(self) -> int:
        if self.kind in ("U", "UQ"):
            return 1
        if self.kind == "UV":
            return 2
        return 2 + self.components

    def weight(self, mono: "Monomial") -> tuple[int, ...]:
        """Grading change produced by multiplying with ``mono``."""
        e = mono.exps
        if self.kind in ("U", "UQ"):
            return (-2 * e[0] - mono.q,)
        if self.kind == "UV":
            return (-2 * e[0], -2 * e[1])
        us = e[0::2]
        vs = e[1::2]
        alex = tuple(b - a for a, b in zip(us, vs))
        return (-2 * sum(us), -2 * sum(vs)) + alex

    @property
    def differential_degree(self) -> tuple[int, ...]:
        return (-1,) * min(2, self.grading_length) + (0,) * max(0, self.grading_length - 2)

    def swap_grading(self, gr: tuple) -> tuple:
        """Grading seen through the u <-> v exchange."""
        if not self.two_variable:
            return gr
        return (gr[1], gr[0]) + tuple(-a for a in gr[2:])

    def alexander_from_grading(self, gr: tuple) -> tuple:
        if not self.two_variable:
            raise RingError("Alexander grading needs a two-variable mode")
        return tuple(gr[2:]) if self.kind == "link" else (Fraction(gr[0] - gr[1]) / 2,)

    def monomials_of_weight(self, w: tuple) -> list["Monomial"]:
        return list(_monomials_of_weight(self, tuple(Fraction(x) for x in w)))

    # -- helpers for building coefficients --------------------------------

    def zero(self) -> "Coefficient":
        return Coefficient(self, frozenset())

    def one(self) -> "Coefficient":
        return Coefficient(self, frozenset([Monomial((0,) * self.nvars, 0)]))

    def mono(self, *exps: int, q: int = 0) -> "Coefficient":
        if len(exps) != self.nvars:
            raise RingError(f"mode {self} expects {self.nvars} exponents")
        if q and not self.has_q:
            raise RingError(f"Q is not available in mode {self}")
        if q > 1:
            return self.zero()
        return Coefficient(self, frozenset([Monomial(tuple(exps), q)]))

    def parse_coeff(self, text: str) -> "Coefficient":
        return parse_coefficient(text, self)


U_RING = Ring("U")
UQ_RING = Ring("UQ")
UV_RING = Ring("UV")


@dataclass(frozen=True, order=True)
class Monomial:
    exps: tuple[int, ...]
    q: int = 0

    def degree(self) -> int:
        return sum(self.exps) + self.q


def _mono_key(m: Monomial) -> tuple:
    return (m.q, sum(m.exps), m.exps)


@lru_cache(maxsize=65536)
def _monomials_of_weight(ring: Ring, w: tuple) -> tuple[Monomial, ...]:
    if any(x.denominator != 1 for x in w):
        return ()
    w = tuple(int(x) for x in w)
    out: list[Monomial] = []
    if ring.kind in ("U", "UQ"):
        for q in (0, 1) if ring.has_q else (0,):
            r = -w[0] - q
            if r >= 0 and r % 2 == 0:
                out.append(Monomial((r // 2,), q))
        return tuple(out)
    if w[0] > 0 or w[1] > 0 or w[0] % 2 or w[1] % 2:
        return ()
    su, sv = -w[0] // 2, -w[1] // 2
    if ring.kind == "UV":
        return (Monomial((su, sv), 0),)
    alex = w[2:]
    if sum(alex) != sv - su:
        return ()

    def rec(i: int, left: int) -> Iterator[tuple[int, ...]]:
        if i == ring.components - 1:
            a, b = left, left + alex[i]
            if b >= 0:
                yield (a, b)
            return
        for a in range(max(0, -alex[i]), left + 1):
            for rest in rec(i + 1, left - a):
                yield (a, a + alex[i]) + rest

    return tuple(Monomial(e, 0) for e in rec(0, su))


class Coefficient:
    """An F2-linear combination of monomials."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: Iterable[Monomial] = ()) -> None:
        self.ring = ring
        self.terms = terms if isinstance(terms, frozenset) else _xor_all(terms)
        self._hash: int | None = None

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and other in (0, 1):
            return self == (self.ring.one() if other else self.ring.zero())
        if not isinstance(other, Coefficient):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, self.terms))
        return self._hash

    def _check(self, other: "Coefficient") -> None:
        if self.ring != other.ring:
            raise RingError(f"mode mismatch: {self.ring} vs {other.ring}")

    def __add__(self, other: "Coefficient") -> "Coefficient":
        self._check(other)
        return Coefficient(self.ring, self.terms ^ other.terms)

    __sub__ = __add__

    def __mul__(self, other: "Coefficient") -> "Coefficient":
        self._check(other)
        if not self.terms or not other.terms:
            return self.ring.zero()
        acc: set[Monomial] = set()
        for a in self.terms:
            for b in other.terms:
                q = a.q + b.q
                if q > 1:
                    continue
                m = Monomial(tuple(x + y for x, y in zip(a.exps, b.exps)), q)
                if m in acc:
                    acc.remove(m)
                else:
                    acc.add(m)
        return Coefficient(self.ring, frozenset(acc))

    def shift(self, exps: tuple[int, ...], q: int = 0) -> "Coefficient":
        """Multiply by a single monomial (fast path)."""
        return Coefficient(
            self.ring,
            frozenset(Monomial(tuple(x + y for x, y in zip(m.exps, exps)), m.q + q) for m in self.terms
                      if m.q + q <= 1),
        )

    def conj(self) -> "Coefficient":
        """Exchange u_i and v_i.  The identity outside two-variable modes."""
        if not self.ring.two_variable:
            return self
        return Coefficient(self.ring, frozenset(Monomial(_swap_pairs(m.exps), m.q) for m in self.terms))

    def derivative(self, var: int) -> "Coefficient":
        acc: set[Monomial] = set()
        for m in self.terms:
            e = m.exps[var]
            if e % 2:
                exps = m.exps[:var] + (e - 1,) + m.exps[var + 1:]
                acc ^= {Monomial(exps, m.q)}
        return Coefficient(self.ring, frozenset(acc))

    def split_q(self) -> tuple["Coefficient", "Coefficient"]:
        """Write c = c0 + Q c1 and return (c0, c1) as U-mode coefficients."""
        c0 = frozenset(Monomial(m.exps, 0) for m in self.terms if m.q == 0)
        c1 = frozenset(Monomial(m.exps, 0) for m in self.terms if m.q == 1)
        return Coefficient(U_RING, c0), Coefficient(U_RING, c1)

    def convert(self, ring: Ring) -> "Coefficient":
        """Embed into a compatible ring (only U -> UQ and identity)."""
        if ring == self.ring:
            return self
        if self.ring.kind == "U" and ring.kind == "UQ":
            return Coefficient(ring, self.terms)
        if self.ring.kind == "UQ" and ring.kind == "U" and not any(m.q for m in self.terms):
            return Coefficient(ring, self.terms)
        raise RingError(f"cannot convert a {self.ring} coefficient to {ring}")

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def sorted_terms(self) -> list[Monomial]:
        return sorted(self.terms, key=_mono_key)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(render_monomial(m, self.ring) for m in self.sorted_terms())

    def __repr__(self) -> str:
        return f"Coefficient({self.ring}, {str(self)!r})"


def _xor_all(terms: Iterable[Monomial]) -> frozenset[Monomial]:
    acc: set[Monomial] = set()
    for t in terms:
        if t in acc:
            acc.remove(t)
        else:
            acc.add(t)
    return frozenset(acc)


def _swap_pairs(e: tuple[int, ...]) -> tuple[int, ...]:
    out: list[int] = []
    for i in range(0, len(e), 2):
        out += [e[i + 1], e[i]]
    return tuple(out)


def coeff_add(a: Coefficient, b: Coefficient) -> Coefficient:
    return a + b


def coeff_mul(a: Coefficient, b: Coefficient) -> Coefficient:
    return a * b


def collapse_uv(a: Coefficient, strict: bool = True):
    """Substitute U = uv.

    Strict mode rejects any monomial with unequal u and v exponents.  The
    lenient mode returns ``{(du, dv): U-coefficient}`` where ``(du, dv)`` is
    the leftover u or v power of each term.
    """
    if a.ring.kind != "UV":
        raise RingError("collapse_uv needs a UV-mode coefficient")
    if strict:
        terms = []
        for m in a.terms:
            u, v = m.exps
            if u != v:
                raise RingError(f"off-diagonal monomial {render_monomial(m, a.ring)} in strict collapse")
            terms.append(Monomial((u,), 0))
        return Coefficient(U_RING, terms)
    parts: dict[tuple[int, int], list[Monomial]] = {}
    for m in a.terms:
        u, v = m.exps
        k = min(u, v)
        parts.setdefault((u - k, v - k), []).append(Monomial((k,), 0))
    return {res: Coefficient(U_RING, ms) for res, ms in sorted(parts.items())}


# -- text form --------------------------------------------------------------

def render_monomial(m: Monomial, ring: Ring) -> str:
    factors: list[str] = []
    for name, e in zip(ring.variables, m.exps):
        if e == 1:
            factors.append(name)
        elif e > 1:
            factors.append(f"{name}^{e}")
    if m.q:
        factors.append("Q")
    return "*".join(factors) if factors else "1"


_FACTOR = re.compile(r"([A-Za-z][A-Za-z0-9]*)(?:\^(\d+))?$")


def parse_coefficient(text: str, ring: Ring) -> Coefficient:
    text = text.strip()
    if not text:
        raise RingError("empty coefficient")
    if text == "0":
        return ring.zero()
    out = ring.zero()
    for term in text.split("+"):
        term = term.strip()
        if not term:
            raise RingError(f"empty term in {text!r}")
        exps = [0] * ring.nvars
        q = 0
        if term != "1":
            for factor in term.split("*"):
                factor = factor.strip()
                mt = _FACTOR.match(factor)
                if not mt:
                    raise RingError(f"cannot parse factor {factor!r}")
                name, power = mt.group(1), int(mt.group(2) or 1)
                if name == "Q":
                    if not ring.has_q:
                        raise RingError(f"Q is not available in mode {ring}")
                    q += power
                else:
                    exps[ring.var_index(name)] += power
        out = out + (ring.mono(*exps, q=q) if q <= 1 else ring.zero())
    return out
