"""Sparse multivariate polynomials over F_p (and Z/p^N for Witt plumbing).

Polynomials are dictionaries from exponent tuples to nonzero residues.
Groebner machinery (division, Buchberger, elimination, dimension) is
restricted to field mode (N = 1); plain ring arithmetic works for any N.
The Buchberger loop is deliberately plain — coprime-leading-term pruning
only, desk-scale inputs — and fully deterministic, so reduced bases can
be used as golden values.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .modarith import is_prime


class FieldModeError(ValueError):
    """Raised when a Groebner-only operation is asked for over Z/p^N, N > 1."""


class PolyParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True)
class PolyRing:
    """Descriptor of F_p[x_1..x_n] (or Z/p^N coefficients when exponent > 1)."""

    p: int
    names: tuple[str, ...]
    exponent: int = 1

    def __post_init__(self) -> None:
        if not (2 <= self.p < 2 ** 16 and is_prime(self.p)):
            raise ValueError(f"characteristic must be a prime in [2, 2^16), got {self.p}")
        if self.exponent < 1:
            raise ValueError("coefficient exponent must be >= 1")
        if len(set(self.names)) != len(self.names):
            raise ValueError("variable names must be distinct")

    @property
    def nvars(self) -> int:
        return len(self.names)

    @property
    def char(self) -> int:
        return self.p ** self.exponent

    @property
    def field_mode(self) -> bool:
        return self.exponent == 1

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c: int) -> "Polynomial":
        return Polynomial(self, {(0,) * self.nvars: c})

    def variable(self, i: int) -> "Polynomial":
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range")
        exp = tuple(1 if j == i else 0 for j in range(self.nvars))
        return Polynomial(self, {exp: 1})

    def monomial(self, exp: Sequence[int], coef: int = 1) -> "Polynomial":
        return Polynomial(self, {tuple(exp): coef})


@dataclass(frozen=True)
class TermOrder:
    """Monomial order: lex, grevlex, or a two-block elimination order.

    `perm` ranks variables: perm[0] is the most significant variable index.
    For block orders the first `split` entries of perm form the eliminated
    block; blocks are compared by grevlex, first block first.
    """

    kind: str
    perm: tuple[int, ...]
    split: int = 0

    def __post_init__(self) -> None:
        if self.kind not in ("lex", "grevlex", "block"):
            raise ValueError(f"unknown order kind {self.kind!r}")
        if self.kind == "block" and not 0 <= self.split <= len(self.perm):
            raise ValueError("bad block split")

    @staticmethod
    def lex(nvars: int, perm: Optional[Sequence[int]] = None) -> "TermOrder":
        return TermOrder("lex", tuple(perm) if perm is not None else tuple(range(nvars)))

    @staticmethod
    def grevlex(nvars: int, perm: Optional[Sequence[int]] = None) -> "TermOrder":
        return TermOrder("grevlex", tuple(perm) if perm is not None else tuple(range(nvars)))

    @staticmethod
    def elimination(eliminate: Sequence[int], nvars: int) -> "TermOrder":
        """Block order putting the eliminated variables first."""
        elim = sorted(eliminate)
        keep = [i for i in range(nvars) if i not in set(elim)]
        return TermOrder("block", tuple(elim + keep), split=len(elim))

    def key(self, exp: tuple[int, ...]):
        """Sort key; bigger key = bigger monomial."""
        e = tuple(exp[i] for i in self.perm)
        if self.kind == "lex":
            return e
        if self.kind == "grevlex":
            return _grevlex_key(e)
        head, tail = e[: self.split], e[self.split:]
        return (_grevlex_key(head), _grevlex_key(tail))


def _grevlex_key(e: tuple[int, ...]):
    return (sum(e), tuple(-x for x in reversed(e)))


def _exp_mul(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


def _exp_divides(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _exp_div(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x - y for x, y in zip(a, b))


def _exp_lcm(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(max(x, y) for x, y in zip(a, b))


class Polynomial:
    """Immutable sparse polynomial; no zero coefficients are stored."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: Mapping[tuple[int, ...], int]):
        self.ring = ring
        q = ring.char
        clean: dict[tuple[int, ...], int] = {}
        for exp, c in terms.items():
            if len(exp) != ring.nvars or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent tuple {exp}")
            c %= q
            if c:
                clean[exp] = c
        self.terms = clean

    # -- queries ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        zero = (0,) * self.ring.nvars
        return not self.terms or (len(self.terms) == 1 and zero in self.terms)

    def constant_value(self) -> int:
        zero = (0,) * self.ring.nvars
        return self.terms.get(zero, 0)

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def variables_used(self) -> frozenset[int]:
        used = set()
        for exp in self.terms:
            for i, e in enumerate(exp):
                if e:
                    used.add(i)
        return frozenset(used)

    def leading(self, order: TermOrder) -> tuple[tuple[int, ...], int]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        lm = max(self.terms, key=order.key)
        return lm, self.terms[lm]

    def sorted_terms(self, order: TermOrder) -> list[tuple[tuple[int, ...], int]]:
        return [(e, self.terms[e]) for e in sorted(self.terms, key=order.key, reverse=True)]

    # -- arithmetic ------------------------------------------------------

    def _check(self, other: "Polynomial") -> None:
        if self.ring != other.ring:
            raise ValueError("polynomials from different rings")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        out = dict(self.terms)
        q = self.ring.char
        for e, c in other.terms.items():
            v = (out.get(e, 0) + c) % q
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial(self.ring, out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __neg__(self) -> "Polynomial":
        q = self.ring.char
        return Polynomial(self.ring, {e: q - c for e, c in self.terms.items()})

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        q = self.ring.char
        out: dict[tuple[int, ...], int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = _exp_mul(e1, e2)
                v = (out.get(e, 0) + c1 * c2) % q
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return Polynomial(self.ring, out)

    def scale(self, c: int) -> "Polynomial":
        return Polynomial(self.ring, {e: c * v for e, v in self.terms.items()})

    def mul_term(self, exp: tuple[int, ...], coef: int) -> "Polynomial":
        return Polynomial(self.ring, {_exp_mul(e, exp): v * coef for e, v in self.terms.items()})

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base_needed = n > 1
            n >>= 1
            if base_needed and n:
                base = base * base
        return result

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Polynomial) and self.ring == other.ring and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.ring, frozenset(self.terms.items())))

    def substitute(self, images: Mapping[int, "Polynomial"]) -> "Polynomial":
        """Substitute polynomials for variables (indices absent stay themselves)."""
        ring = None
        for img in images.values():
            ring = img.ring
            break
        target = ring if ring is not None else self.ring
        out = Polynomial(target, {})
        for exp, c in self.terms.items():
            term = Polynomial(target, {(0,) * target.nvars: c})
            for i, e in enumerate(exp):
                if not e:
                    continue
                base = images.get(i)
                if base is None:
                    base = target.variable(i)
                term = term * base ** e
            out = out + term
        return out

    # -- characteristic-p specials ----------------------------------------

    def partial(self, i: int) -> "Polynomial":
        if not 0 <= i < self.ring.nvars:
            raise IndexError(f"variable index {i} out of range")
        out: dict[tuple[int, ...], int] = {}
        for exp, c in self.terms.items():
            if exp[i] == 0:
                continue
            e = list(exp)
            mult = e[i]
            e[i] -= 1
            out[tuple(e)] = out.get(tuple(e), 0) + c * mult
        return Polynomial(self.ring, out)

    def pth_root(self) -> Optional["Polynomial"]:
        """h with h^p == self, if every exponent is divisible by p; else None.

        Coefficients are fixed points of x -> x^p over F_p.
        """
        if not self.ring.field_mode:
            raise FieldModeError("p-th roots require field mode")
        p = self.ring.p
        out = {}
        for exp, c in self.terms.items():
            if any(e % p for e in exp):
                return None
            out[tuple(e // p for e in exp)] = c
        return Polynomial(self.ring, out)

    def frobenius_power(self) -> "Polynomial":
        """self^p computed termwise (freshman's dream in characteristic p)."""
        if not self.ring.field_mode:
            return self ** self.ring.p
        p = self.ring.p
        return Polynomial(self.ring, {tuple(e * p for e in exp): c for exp, c in self.terms.items()})

    # -- presentation ------------------------------------------------------

    def to_text(self, order: Optional[TermOrder] = None) -> str:
        if not self.terms:
            return "0"
        order = order or TermOrder.grevlex(self.ring.nvars)
        parts = []
        for exp, c in self.sorted_terms(order):
            factors = []
            if c != 1 or not any(exp):
                factors.append(str(c))
            for i, e in enumerate(exp):
                if e == 1:
                    factors.append(self.ring.names[i])
                elif e > 1:
                    factors.append(f"{self.ring.names[i]}^{e}")
            parts.append("*".join(factors))
        return " + ".join(parts)

    def to_json(self, order: Optional[TermOrder] = None) -> dict:
        order = order or TermOrder.grevlex(self.ring.nvars)
        doc = {
            "vars": list(self.ring.names),
            "p": self.ring.p,
            "terms": [{"exp": list(e), "coef": c} for e, c in self.sorted_terms(order)],
        }
        if self.ring.exponent != 1:
            doc["N"] = self.ring.exponent
        return doc

    def __repr__(self) -> str:
        return self.to_text()


def poly_from_json(doc: Mapping, ring: Optional[PolyRing] = None) -> Polynomial:
    if ring is None:
        ring = PolyRing(int(doc["p"]), tuple(doc["vars"]), int(doc.get("N", 1)))
    terms = {}
    for t in doc["terms"]:
        exp = tuple(int(e) for e in t["exp"])
        terms[exp] = terms.get(exp, 0) + int(t["coef"])
    return Polynomial(ring, terms)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\^)|(\*)|(\+)|(-)|(\()|(\)))")


def parse_polynomial(text: str, ring: PolyRing) -> Polynomial:
    """Parse the textual grammar: integer coefficients, named variables,
    `^` for powers, `*` optional (juxtaposition multiplies)."""
    tokens: list[tuple[str, str, int]] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise PolyParseError(f"unexpected character {stripped[0]!r}", pos)
        kinds = ("int", "name", "pow", "mul", "plus", "minus", "open", "close")
        for g, kind in enumerate(kinds, start=1):
            if m.group(g) is not None:
                tokens.append((kind, m.group(g), m.start(g)))
                break
        pos = m.end()
    index = {name: i for i, name in enumerate(ring.names)}
    cursor = 0

    def peek() -> Optional[str]:
        return tokens[cursor][0] if cursor < len(tokens) else None

    def take() -> tuple[str, str, int]:
        nonlocal cursor
        tok = tokens[cursor]
        cursor += 1
        return tok

    def parse_expr() -> Polynomial:
        sign = 1
        while peek() in ("plus", "minus"):
            if take()[0] == "minus":
                sign = -sign
        result = parse_term().scale(sign)
        while peek() in ("plus", "minus"):
            sign = 1
            while peek() in ("plus", "minus"):
                if take()[0] == "minus":
                    sign = -sign
            result = result + parse_term().scale(sign)
        return result

    def parse_term() -> Polynomial:
        result = parse_factor()
        while True:
            nxt = peek()
            if nxt == "mul":
                take()
                result = result * parse_factor()
            elif nxt in ("int", "name", "open"):
                result = result * parse_factor()
            else:
                return result

    def parse_factor() -> Polynomial:
        base = parse_base()
        if peek() == "pow":
            take()
            if peek() != "int":
                where = tokens[cursor][2] if cursor < len(tokens) else len(text)
                raise PolyParseError("expected integer exponent after '^'", where)
            base = base ** int(take()[1])
        return base

    def parse_base() -> Polynomial:
        if cursor >= len(tokens):
            raise PolyParseError("unexpected end of input", len(text))
        kind, value, where = take()
        if kind == "int":
            return ring.constant(int(value))
        if kind == "name":
            if value not in index:
                raise PolyParseError(f"unknown variable {value!r}", where)
            return ring.variable(index[value])
        if kind == "open":
            inner = parse_expr()
            if peek() != "close":
                raise PolyParseError("unbalanced parenthesis", where)
            take()
            return inner
        raise PolyParseError(f"unexpected token {value!r}", where)

    if not tokens:
        raise PolyParseError("empty polynomial", 0)
    result = parse_expr()
    if cursor != len(tokens):
        raise PolyParseError(f"trailing input {tokens[cursor][1]!r}", tokens[cursor][2])
    return result


# -- division and Groebner bases -----------------------------------------


def _reduce(f: Polynomial, basis: Sequence[Polynomial], order: TermOrder) -> Polynomial:
    """Remainder of multivariate division of f by the basis (full reduction)."""
    ring = f.ring
    p = ring.char
    leads = [(g.leading(order)) for g in basis]
    work = dict(f.terms)
    remainder: dict[tuple[int, ...], int] = {}
    while work:
        lm = max(work, key=order.key)
        lc = work[lm]
        for g, (glm, glc) in zip(basis, leads):
            if _exp_divides(glm, lm):
                qexp = _exp_div(lm, glm)
                qc = (lc * pow(glc, -1, p)) % p
                for e, c in g.terms.items():
                    te = _exp_mul(e, qexp)
                    v = (work.get(te, 0) - qc * c) % p
                    if v:
                        work[te] = v
                    else:
                        work.pop(te, None)
                break
        else:
            remainder[lm] = lc
            del work[lm]
    return Polynomial(ring, remainder)


def _require_field(ring: PolyRing) -> None:
    if not ring.field_mode:
        raise FieldModeError("Groebner operations require coefficient exponent N = 1")


def _autoreduce(basis: list[Polynomial], order: TermOrder) -> tuple[Polynomial, ...]:
    """Minimal, tail-reduced, monic basis sorted by leading monomial."""
    p = basis[0].ring.p if basis else 0
    polys = [g for g in basis if not g.is_zero()]
    changed = True
    while changed:
        changed = False
        polys.sort(key=lambda g: order.key(g.leading(order)[0]))
        for i, g in enumerate(polys):
            others = polys[:i] + polys[i + 1:]
            if not others:
                continue
            r = _reduce(g, others, order)
            if r.terms != g.terms:
                changed = True
                if r.is_zero():
                    polys.pop(i)
                else:
                    polys[i] = r
                break
    monic = []
    for g in polys:
        _, lc = g.leading(order)
        monic.append(g.scale(pow(lc, -1, p)))
    monic.sort(key=lambda g: order.key(g.leading(order)[0]))
    return tuple(monic)


@dataclass(frozen=True)
class Ideal:
    """Ideal with an optional cached reduced Groebner basis.

    The cache is attached by `buchberger` (an explicit call, never a lazy
    side effect); `normal_form` requires it.
    """

    ring: PolyRing
    generators: tuple[Polynomial, ...]
    basis: Optional[tuple[Polynomial, ...]] = None
    basis_order: Optional[TermOrder] = None
    reduced: bool = False

    @staticmethod
    def from_polys(ring: PolyRing, gens: Iterable[Polynomial]) -> "Ideal":
        cleaned = tuple(g for g in gens if not g.is_zero())
        for g in cleaned:
            if g.ring != ring:
                raise ValueError("generator from wrong ring")
        return Ideal(ring, cleaned)

    def with_cache(self, basis: tuple[Polynomial, ...], order: TermOrder) -> "Ideal":
        return Ideal(self.ring, self.generators, basis, order, True)

    def is_trivial_zero(self) -> bool:
        return not self.generators

    def contains_one(self) -> bool:
        if self.basis is None:
            raise ValueError("Groebner cache required; call buchberger first")
        return len(self.basis) == 1 and self.basis[0].is_constant() and not self.basis[0].is_zero()


def buchberger(ideal: Ideal, order: Optional[TermOrder] = None) -> Ideal:
    """Reduced Groebner basis via Buchberger with coprime-pair pruning.

    Deterministic: pairs are processed in order of (lcm degree, lcm, i, j),
    and the reduced basis is unique for a fixed order, so rerunning or
    permuting the generators reproduces the identical cache.
    """
    ring = ideal.ring
    _require_field(ring)
    order = order or TermOrder.grevlex(ring.nvars)
    if ideal.basis is not None and ideal.basis_order == order:
        return ideal
    gens = [g for g in ideal.generators if not g.is_zero()]
    if not gens:
        return ideal.with_cache((), order)
    basis = list(_autoreduce(gens, order))
    if any(g.is_constant() for g in basis):
        return ideal.with_cache((ring.one(),), order)

    def pair_key(i: int, j: int):
        lcm = _exp_lcm(basis[i].leading(order)[0], basis[j].leading(order)[0])
        return (sum(lcm), order.key(lcm), i, j)

    pairs = {(j, i) for i in range(len(basis)) for j in range(i)}
    while pairs:
        i, j = min(pairs, key=lambda ij: pair_key(*ij))
        pairs.discard((i, j))
        gi, gj = basis[i], basis[j]
        lmi, lci = gi.leading(order)
        lmj, lcj = gj.leading(order)
        if _exp_mul(lmi, lmj) == _exp_lcm(lmi, lmj):
            continue  # coprime leading terms: S-polynomial reduces to zero
        lcm = _exp_lcm(lmi, lmj)
        p = ring.p
        s = gi.mul_term(_exp_div(lcm, lmi), pow(lci, -1, p)) - gj.mul_term(
            _exp_div(lcm, lmj), pow(lcj, -1, p)
        )
        r = _reduce(s, basis, order)
        if r.is_zero():
            continue
        if r.is_constant():
            return ideal.with_cache((ring.one(),), order)
        _, lc = r.leading(order)
        basis.append(r.scale(pow(lc, -1, p)))
        new = len(basis) - 1
        pairs.update((k, new) for k in range(new))
    reduced = _autoreduce(basis, order)
    result = ideal.with_cache(reduced, order)
    _verify_cache(result)
    return result


def _verify_cache(ideal: Ideal) -> None:
    """Cache sanity: every generator reduces to zero against the cached
    basis.  The reverse containment holds by construction (basis elements
    arise from S-polynomial reductions of the generators)."""
    order = ideal.basis_order
    assert order is not None and ideal.basis is not None
    if ideal.basis:
        for g in ideal.generators:
            if not _reduce(g, ideal.basis, order).is_zero():
                raise AssertionError("Groebner cache does not reduce a generator to zero")
    else:
        if ideal.generators:
            raise AssertionError("empty basis for a nonzero ideal")


def normal_form(f: Polynomial, ideal: Ideal, order: Optional[TermOrder] = None) -> Polynomial:
    """Unique remainder of f modulo the cached reduced basis; 0 iff f is a member."""
    _require_field(f.ring)
    if ideal.basis is None:
        raise ValueError("Groebner cache required; call buchberger first")
    if order is not None and ideal.basis_order != order:
        raise ValueError("cache was computed under a different order")
    if not ideal.basis:
        return f
    return _reduce(f, ideal.basis, ideal.basis_order)


def eliminate(ideal: Ideal, keep: Iterable[int]) -> Ideal:
    """I ∩ k[keep] via a block elimination order (eliminated block first)."""
    ring = ideal.ring
    _require_field(ring)
    keep_set = frozenset(keep)
    drop = [i for i in range(ring.nvars) if i not in keep_set]
    order = TermOrder.elimination(drop, ring.nvars)
    gb = buchberger(Ideal.from_polys(ring, ideal.generators), order)
    kept = tuple(g for g in gb.basis if g.variables_used() <= keep_set)
    out = Ideal.from_polys(ring, kept)
    return buchberger(out, TermOrder.grevlex(ring.nvars))


def partial_derivative(f: Polynomial, i: int) -> Polynomial:
    return f.partial(i)


def pth_root_poly(f: Polynomial) -> Optional[Polynomial]:
    return f.pth_root()


def pth_root_ideal(ideal: Ideal) -> Ideal:
    """{g : g^p ∈ I}, the preimage of I under x_i -> x_i^p.

    Computed on the graph: in k[x, u] eliminate x from I + (u_i - x_i^p),
    then rename the u-variables back.  Over F_p, g(x)^p = g(x_1^p..x_n^p).
    """
    ring = ideal.ring
    _require_field(ring)
    if not ideal.generators:
        return buchberger(Ideal.from_polys(ring, ()))
    n = ring.nvars
    taken = set(ring.names)
    unames = []
    for name in ring.names:
        candidate = "u_" + name
        while candidate in taken:
            candidate = "_" + candidate
        taken.add(candidate)
        unames.append(candidate)
    big = PolyRing(ring.p, ring.names + tuple(unames))

    def widen(f: Polynomial) -> Polynomial:
        return Polynomial(big, {exp + (0,) * n: c for exp, c in f.terms.items()})

    gens = [widen(g) for g in ideal.generators]
    for i in range(n):
        u_i = big.variable(n + i)
        gens.append(u_i - big.variable(i) ** ring.p)
    graph = Ideal.from_polys(big, gens)
    kept = eliminate(graph, range(n, 2 * n))
    out = []
    for g in kept.basis or ():
        out.append(Polynomial(ring, {exp[n:]: c for exp, c in g.terms.items()}))
    return buchberger(Ideal.from_polys(ring, out))


def krull_dim(ideal: Ideal) -> int:
    """Krull dimension of k[x]/I: the largest variable set independent
    modulo the leading-term ideal of a Groebner basis.  Unit ideal: -1."""
    ring = ideal.ring
    _require_field(ring)
    gb = buchberger(Ideal.from_polys(ring, ideal.generators))
    if gb.contains_one():
        return -1
    supports = [frozenset(i for i, e in enumerate(g.leading(gb.basis_order)[0]) if e) for g in gb.basis]
    n = ring.nvars
    best = 0
    for size in range(n, -1, -1):
        if size <= best:
            break
        for subset_bits in range(1 << n):
            subset = frozenset(i for i in range(n) if subset_bits >> i & 1)
            if len(subset) != size:
                continue
            if all(not s <= subset for s in supports):
                best = size
                break
        if best == size:
            break
    return best


def ideal_equal(a: Ideal, b: Ideal) -> bool:
    """Ideal equality via reduced bases under grevlex."""
    ga = buchberger(Ideal.from_polys(a.ring, a.generators))
    gb = buchberger(Ideal.from_polys(b.ring, b.generators))
    return ga.basis == gb.basis
