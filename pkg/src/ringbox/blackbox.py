"""Finite rings hidden behind opaque element codes.

Concrete rings (integers mod n, direct products, square matrix rings, and
prime-field polynomial quotients) are built from a small description and then
wrapped in a seed-keyed injective encoding.  Downstream code sees only opaque
``ElementCode`` values plus two oracles (add, mul), a generator list, and a
query ledger.

Discipline: nothing outside this module (and the CLI, which decodes results
for display) may branch on the bit content of an ``ElementCode`` except to
compare two codes for equality or use them as dictionary keys.  The encoding
is a keyed bit permutation precisely so that leaking structure through code
bits is not possible by accident.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from math import gcd, lcm

from .errors import (
    DeskCapError,
    InvalidCodeError,
    ParseError,
    RingConstructionError,
)

__all__ = [
    "DESK_CAP",
    "ElementCode",
    "RingSpec",
    "ModularSpec",
    "ProductSpec",
    "MatrixSpec",
    "PolyQuotSpec",
    "QueryLedger",
    "OracleChannel",
    "RingOracle",
    "make_ring",
    "brute_force_enumerate",
    "parse_spec_string",
    "parse_ring_file",
    "parse_element_literal",
    "format_element",
]

DESK_CAP = 1 << 20


@dataclass(frozen=True, slots=True)
class ElementCode:
    """Opaque fixed-width name of one ring element."""

    bits: int
    width: int

    def __repr__(self):
        return f"<code {self.bits:0{(self.width + 3) // 4}x}>"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1 if d == 2 else 2
    return True


class RingSpec:
    """Description of a concrete finite ring; subclasses define the arithmetic
    on canonical element values and an indexing of elements by [0, order)."""

    def validate(self):
        raise NotImplementedError

    def order(self) -> int:
        raise NotImplementedError

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def index_of(self, a) -> int:
        raise NotImplementedError

    def element_at(self, idx: int):
        raise NotImplementedError

    def additive_order(self, a) -> int:
        raise NotImplementedError

    def generator_values(self) -> list:
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError

    def parse_literal(self, text: str):
        raise NotImplementedError

    def format_value(self, a) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class ModularSpec(RingSpec):
    n: int

    def validate(self):
        if self.n < 2:
            raise RingConstructionError(f"modular: n must be >= 2, got n={self.n}")

    def order(self):
        return self.n

    def zero(self):
        return 0

    def one(self):
        return 1

    def add(self, a, b):
        return (a + b) % self.n

    def mul(self, a, b):
        return (a * b) % self.n

    def index_of(self, a):
        return a

    def element_at(self, idx):
        return idx

    def additive_order(self, a):
        return self.n // gcd(self.n, a)

    def generator_values(self):
        return [1]

    def describe(self):
        return f"modular {self.n}"

    def parse_literal(self, text):
        try:
            v = int(text.strip())
        except ValueError:
            raise ParseError(f"expected an integer literal, got {text!r}") from None
        return v % self.n

    def format_value(self, a):
        return str(a)


@dataclass(frozen=True)
class ProductSpec(RingSpec):
    factors: tuple

    def validate(self):
        if len(self.factors) < 2:
            raise RingConstructionError("product: needs at least two factors")
        for f in self.factors:
            f.validate()

    def order(self):
        out = 1
        for f in self.factors:
            out *= f.order()
        return out

    def zero(self):
        return tuple(f.zero() for f in self.factors)

    def one(self):
        return tuple(f.one() for f in self.factors)

    def add(self, a, b):
        return tuple(f.add(x, y) for f, x, y in zip(self.factors, a, b))

    def mul(self, a, b):
        return tuple(f.mul(x, y) for f, x, y in zip(self.factors, a, b))

    def index_of(self, a):
        idx = 0
        for f, x in zip(self.factors, a):
            idx = idx * f.order() + f.index_of(x)
        return idx

    def element_at(self, idx):
        out = []
        for f in reversed(self.factors):
            idx, r = divmod(idx, f.order())
            out.append(f.element_at(r))
        return tuple(reversed(out))

    def additive_order(self, a):
        return lcm(*(f.additive_order(x) for f, x in zip(self.factors, a)))

    def generator_values(self):
        gens = []
        for i, f in enumerate(self.factors):
            for g in f.generator_values():
                tup = tuple(
                    g if j == i else h.zero() for j, h in enumerate(self.factors)
                )
                gens.append(tup)
        gens.append(self.one())
        return gens

    def describe(self):
        inner = ", ".join(f.describe() for f in self.factors)
        return f"product({inner})"

    def parse_literal(self, text):
        text = text.strip()
        if not (text.startswith("(") and text.endswith(")")):
            raise ParseError(f"product literal must be a (tuple), got {text!r}")
        parts = _split_top_level(text[1:-1], ",")
        if len(parts) != len(self.factors):
            raise ParseError(
                f"product literal has {len(parts)} components, expected {len(self.factors)}"
            )
        return tuple(f.parse_literal(p) for f, p in zip(self.factors, parts))

    def format_value(self, a):
        return "(" + ", ".join(f.format_value(x) for f, x in zip(self.factors, a)) + ")"


@dataclass(frozen=True)
class MatrixSpec(RingSpec):
    k: int
    base: RingSpec

    def validate(self):
        if self.k < 1:
            raise RingConstructionError(f"matrix: k must be >= 1, got k={self.k}")
        self.base.validate()

    def order(self):
        return self.base.order() ** (self.k * self.k)

    def zero(self):
        z = self.base.zero()
        return tuple((z,) * self.k for _ in range(self.k))

    def one(self):
        z, o = self.base.zero(), self.base.one()
        return tuple(
            tuple(o if i == j else z for j in range(self.k)) for i in range(self.k)
        )

    def add(self, a, b):
        return tuple(
            tuple(self.base.add(x, y) for x, y in zip(ra, rb))
            for ra, rb in zip(a, b)
        )

    def mul(self, a, b):
        k = self.k
        out = []
        for i in range(k):
            row = []
            for j in range(k):
                acc = self.base.zero()
                for t in range(k):
                    acc = self.base.add(acc, self.base.mul(a[i][t], b[t][j]))
                row.append(acc)
            out.append(tuple(row))
        return tuple(out)

    def index_of(self, a):
        idx = 0
        n = self.base.order()
        for row in a:
            for x in row:
                idx = idx * n + self.base.index_of(x)
        return idx

    def element_at(self, idx):
        n = self.base.order()
        flat = []
        for _ in range(self.k * self.k):
            idx, r = divmod(idx, n)
            flat.append(self.base.element_at(r))
        flat.reverse()
        return tuple(
            tuple(flat[i * self.k : (i + 1) * self.k]) for i in range(self.k)
        )

    def additive_order(self, a):
        return lcm(*(self.base.additive_order(x) for row in a for x in row))

    def generator_values(self):
        if self.k == 1:
            return [((g,),) for g in self.base.generator_values()]
        z = self.base.zero()
        o = self.base.one()
        cycle = tuple(
            tuple(o if j == (i + 1) % self.k else z for j in range(self.k))
            for i in range(self.k)
        )
        gens = [cycle]
        for g in self.base.generator_values():
            gens.append(
                tuple(
                    tuple(g if i == 0 and j == 0 else z for j in range(self.k))
                    for i in range(self.k)
                )
            )
        return gens

    def describe(self):
        return f"matrix {self.k} over {self.base.describe()}"

    def parse_literal(self, text):
        rows = _split_top_level(text.strip(), ";")
        if len(rows) != self.k:
            raise ParseError(f"matrix literal has {len(rows)} rows, expected {self.k}")
        out = []
        for r in rows:
            cells = _split_top_level(r, ",")
            if len(cells) != self.k:
                raise ParseError(
                    f"matrix row has {len(cells)} entries, expected {self.k}"
                )
            out.append(tuple(self.base.parse_literal(c) for c in cells))
        return tuple(out)

    def format_value(self, a):
        return ";".join(
            ",".join(self.base.format_value(x) for x in row) for row in a
        )


@dataclass(frozen=True)
class PolyQuotSpec(RingSpec):
    """Z_p[x] modulo a monic polynomial f (coefficients low-to-high, f[-1]=1)."""

    p: int
    f: tuple

    def validate(self):
        if not _is_prime(self.p):
            raise RingConstructionError(f"polyquot: p must be prime, got p={self.p}")
        if len(self.f) < 2:
            raise RingConstructionError("polyquot: f must have degree >= 1")
        if self.f[-1] % self.p != 1:
            raise RingConstructionError(f"polyquot: f must be monic, got f={list(self.f)}")

    @property
    def deg(self):
        return len(self.f) - 1

    def order(self):
        return self.p ** self.deg

    def zero(self):
        return (0,) * self.deg

    def one(self):
        return (1,) + (0,) * (self.deg - 1)

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def mul(self, a, b):
        d, p = self.deg, self.p
        conv = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    conv[i + j] += x * y
        for i in range(2 * d - 2, d - 1, -1):
            c = conv[i] % p
            conv[i] = 0
            if c:
                for j in range(d):
                    conv[i - d + j] = (conv[i - d + j] - c * self.f[j]) % p
        return tuple(v % p for v in conv[:d])

    def index_of(self, a):
        idx = 0
        for c in reversed(a):
            idx = idx * self.p + c
        return idx

    def element_at(self, idx):
        out = []
        for _ in range(self.deg):
            idx, r = divmod(idx, self.p)
            out.append(r)
        return tuple(out)

    def additive_order(self, a):
        return self.p if any(a) else 1

    def generator_values(self):
        gens = [self.one()]
        if self.deg >= 2:
            gens.append((0, 1) + (0,) * (self.deg - 2))
        else:
            gens.append(((-self.f[0]) % self.p,))
        return gens

    def describe(self):
        return f"polyquot {self.p} {list(self.f)}"

    def parse_literal(self, text):
        text = text.strip()
        if not (text.startswith("[") and text.endswith("]")):
            raise ParseError(f"polyquot literal must be [c0, c1, ...], got {text!r}")
        body = text[1:-1].strip()
        coeffs = [int(c) for c in body.split(",")] if body else []
        if len(coeffs) > self.deg:
            # reduce higher powers through f
            acc = self.zero()
            xpow = self.one()
            xgen = self.generator_values()[1]
            for c in coeffs:
                term = tuple((c * v) % self.p for v in xpow)
                acc = self.add(acc, term)
                xpow = self.mul(xpow, xgen)
            return acc
        coeffs += [0] * (self.deg - len(coeffs))
        return tuple(c % self.p for c in coeffs)

    def format_value(self, a):
        return "[" + ", ".join(str(c) for c in a) + "]"


def _split_top_level(text: str, sep: str) -> list[str]:
    """Split on sep outside any (), [] nesting."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts]


# -- seed-keyed code permutation ---------------------------------------------

_MASK64 = (1 << 64) - 1


def _mix64(x: int) -> int:
    x &= _MASK64
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


class _KeyedPermutation:
    """Feistel-style keyed bijection on b-bit strings (b >= 2)."""

    ROUNDS = 6

    def __init__(self, width: int, key_material: bytes):
        self.width = width
        digest = hashlib.blake2b(key_material, digest_size=8 * self.ROUNDS).digest()
        self._keys = [
            int.from_bytes(digest[8 * i : 8 * (i + 1)], "little")
            for i in range(self.ROUNDS)
        ]
        lo = width // 2
        hi = width - lo
        self._schedule = []
        for _ in range(self.ROUNDS):
            self._schedule.append((hi, lo))
            hi, lo = lo, hi

    def forward(self, x: int) -> int:
        for rk, (hi_bits, lo_bits) in zip(self._keys, self._schedule):
            hi = x >> lo_bits
            lo = x & ((1 << lo_bits) - 1)
            f = _mix64(rk ^ lo) & ((1 << hi_bits) - 1)
            x = (lo << hi_bits) | (hi ^ f)
        return x

    def backward(self, y: int) -> int:
        for rk, (hi_bits, lo_bits) in zip(
            reversed(self._keys), reversed(self._schedule)
        ):
            lo = y >> hi_bits
            mixed = y & ((1 << hi_bits) - 1)
            f = _mix64(rk ^ lo) & ((1 << hi_bits) - 1)
            y = ((mixed ^ f) << lo_bits) | lo
        return y


# -- oracle -------------------------------------------------------------------


@dataclass
class QueryLedger:
    """Counts oracle invocations; monotone unless explicitly reset."""

    add_count: int = 0
    mul_count: int = 0

    def reset(self):
        self.add_count = 0
        self.mul_count = 0

    def total(self) -> int:
        return self.add_count + self.mul_count

    def snapshot(self) -> tuple[int, int]:
        return (self.add_count, self.mul_count)


class OracleChannel:
    """View of a ring's add/mul bound to one ledger (or to none)."""

    __slots__ = ("_ring", "_ledger")

    def __init__(self, ring: "RingOracle", ledger: QueryLedger | None):
        self._ring = ring
        self._ledger = ledger

    @property
    def ring(self):
        return self._ring

    def add(self, a: ElementCode, b: ElementCode) -> ElementCode:
        out = self._ring._raw_add(a, b)
        if self._ledger is not None:
            self._ledger.add_count += 1
        return out

    def mul(self, a: ElementCode, b: ElementCode) -> ElementCode:
        out = self._ring._raw_mul(a, b)
        if self._ledger is not None:
            self._ledger.mul_count += 1
        return out


class RingOracle:
    """Black-box access to a constructed ring.

    ``add``/``mul`` are the metered oracles.  ``unmetered`` is the channel the
    quantum-subroutine simulation layer uses (a stand-in quantum device's
    internal queries are not algorithm queries).  ``verification`` carries its
    own ledger, for brute-force ground-truth paths.

    Methods prefixed with an underscore expose the hidden construction; they
    exist for the simulation cheat layer, brute-force verification, and CLI
    literal decoding only.
    """

    def __init__(self, spec: RingSpec, seed: int):
        spec.validate()
        self.spec = spec
        self.seed = seed
        size = spec.order()
        self._size = size
        self.width = max(1, (size - 1).bit_length()) + 2
        key = f"{spec.describe()}|{seed}".encode()
        self._perm = _KeyedPermutation(self.width, key)
        self.ledger = QueryLedger()
        self.verification_ledger = QueryLedger()
        self._key = (spec.describe(), seed)
        # desk-scale rings memoize the code permutation (pure speedup)
        self._memo = size <= (1 << 16)
        self._enc_cache: dict = {}
        self._dec_cache: dict = {}
        seen = []
        for g in spec.generator_values():
            code = self._encode(g)
            if code not in seen:
                seen.append(code)
        self.generators = tuple(seen)

    # construction-side access (cheat layer / verification / CLI only)

    def _encode(self, value) -> ElementCode:
        if self._memo:
            code = self._enc_cache.get(value)
            if code is None:
                code = ElementCode(
                    self._perm.forward(self.spec.index_of(value)), self.width
                )
                self._enc_cache[value] = code
                self._dec_cache[code.bits] = value
            return code
        return ElementCode(self._perm.forward(self.spec.index_of(value)), self.width)

    def _decode(self, code: ElementCode):
        if not isinstance(code, ElementCode) or code.width != self.width:
            raise InvalidCodeError(f"{code!r} is not a code of this ring")
        if self._memo:
            value = self._dec_cache.get(code.bits)
            if value is not None:
                return value
        if not 0 <= code.bits < (1 << self.width):
            raise InvalidCodeError(f"{code!r} is outside the code space")
        idx = self._perm.backward(code.bits)
        if idx >= self._size:
            raise InvalidCodeError(f"{code!r} does not name a ring element")
        value = self.spec.element_at(idx)
        if self._memo:
            self._dec_cache[code.bits] = value
            self._enc_cache[value] = ElementCode(code.bits, self.width)
        return value

    def _zero_code(self) -> ElementCode:
        return self._encode(self.spec.zero())

    def _one_code(self) -> ElementCode:
        return self._encode(self.spec.one())

    def _additive_order(self, code: ElementCode) -> int:
        return self.spec.additive_order(self._decode(code))

    def _ring_size(self) -> int:
        return self._size

    def _raw_add(self, a, b):
        return self._encode(self.spec.add(self._decode(a), self._decode(b)))

    def _raw_mul(self, a, b):
        return self._encode(self.spec.mul(self._decode(a), self._decode(b)))

    # metered oracle interface

    def add(self, a: ElementCode, b: ElementCode) -> ElementCode:
        out = self._raw_add(a, b)
        self.ledger.add_count += 1
        return out

    def mul(self, a: ElementCode, b: ElementCode) -> ElementCode:
        out = self._raw_mul(a, b)
        self.ledger.mul_count += 1
        return out

    @property
    def metered(self) -> OracleChannel:
        return OracleChannel(self, self.ledger)

    @property
    def unmetered(self) -> OracleChannel:
        return OracleChannel(self, None)

    @property
    def verification(self) -> OracleChannel:
        return OracleChannel(self, self.verification_ledger)

    def __repr__(self):
        return f"RingOracle({self.spec.describe()!r}, seed={self.seed})"


def make_ring(spec: RingSpec, seed: int) -> RingOracle:
    """Construct a metered black-box oracle for the described ring."""
    return RingOracle(spec, seed)


def brute_force_enumerate(ring: RingOracle, cap: int = DESK_CAP) -> set[ElementCode]:
    """All element codes, by closing the generators under add and mul.

    Queries run on the verification channel.  Refuses rings above ``cap``.
    """
    if ring._ring_size() > cap:
        raise DeskCapError(
            f"ring order {ring._ring_size()} exceeds desk-scale cap {cap}"
        )
    chan = ring.verification
    gens = list(ring.generators)

    def additive_closure(basis):
        seen = set(basis)
        frontier = list(basis)
        while frontier:
            x = frontier.pop()
            for g in basis:
                y = chan.add(x, g)
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return seen

    # grow an additive generating list one product at a time; each appended
    # product at least doubles the additive span, so the list stays short
    seen = additive_closure(gens)
    while True:
        extra = None
        for x in seen:
            for g in ring.generators:
                for p in (chan.mul(g, x), chan.mul(x, g)):
                    if p not in seen:
                        extra = p
                        break
                if extra:
                    break
            if extra:
                break
        if extra is None:
            return seen
        gens.append(extra)
        seen = additive_closure(gens)


# -- text formats --------------------------------------------------------------

_SPEC_TOKEN = re.compile(r"\s*(\(|\)|\[[^\]]*\]|,|[^\s(),]+)")


def _tokenize_spec(text: str) -> list[str]:
    tokens, pos = [], 0
    while pos < len(text):
        m = _SPEC_TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"cannot tokenize ring description at {text[pos:]!r}")
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


def parse_spec_string(text: str) -> RingSpec:
    """Parse a compact ring description.

    Grammar::

        modular N
        product(SPEC, SPEC, ...)
        matrix K over SPEC
        polyquot P [c0, c1, ...]
    """
    tokens = _tokenize_spec(text)
    spec, rest = _parse_spec_tokens(tokens)
    if rest:
        raise ParseError(f"trailing tokens in ring description: {rest}")
    spec.validate()
    return spec


def _parse_spec_tokens(tokens: list[str]) -> tuple[RingSpec, list[str]]:
    if not tokens:
        raise ParseError("empty ring description")
    head, rest = tokens[0], tokens[1:]
    if head == "modular":
        if not rest:
            raise ParseError("modular: missing n")
        return ModularSpec(_parse_int(rest[0], "modular n")), rest[1:]
    if head == "product":
        if not rest or rest[0] != "(":
            raise ParseError("product: expected '('")
        rest = rest[1:]
        factors = []
        while True:
            spec, rest = _parse_spec_tokens(rest)
            factors.append(spec)
            if not rest:
                raise ParseError("product: missing ')'")
            if rest[0] == ",":
                rest = rest[1:]
                continue
            if rest[0] == ")":
                return ProductSpec(tuple(factors)), rest[1:]
            raise ParseError(f"product: unexpected token {rest[0]!r}")
    if head == "matrix":
        if len(rest) < 3 or rest[1] != "over":
            raise ParseError("matrix: expected 'matrix K over SPEC'")
        k = _parse_int(rest[0], "matrix k")
        spec, remaining = _parse_spec_tokens(rest[2:])
        return MatrixSpec(k, spec), remaining
    if head == "polyquot":
        if len(rest) < 2 or not rest[1].startswith("["):
            raise ParseError("polyquot: expected 'polyquot P [c0, c1, ...]'")
        p = _parse_int(rest[0], "polyquot p")
        body = rest[1][1:-1].strip()
        coeffs = tuple(
            _parse_int(c.strip(), "polyquot coefficient") % p
            for c in body.split(",")
            if c.strip()
        )
        return PolyQuotSpec(p, coeffs), rest[2:]
    raise ParseError(f"unknown ring kind {head!r}")


def _parse_int(tok: str, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"{what}: expected an integer, got {tok!r}") from None


def parse_ring_file(text: str) -> RingSpec:
    """Parse the key=value ring description format.

    Keys: ring.kind, then ring.n | ring.factors | ring.k + ring.base |
    ring.p + ring.f.  Factor lists and base values use the compact form of
    :func:`parse_spec_string`; ring.f is a coefficient list low-to-high.
    """
    fields = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected key = value, got {line!r}")
        key, val = line.split("=", 1)
        fields[key.strip().lower()] = val.strip()
    kind = fields.get("ring.kind")
    if kind is None:
        raise ParseError("missing ring.kind")
    kind = kind.lower()
    if kind == "modular":
        if "ring.n" not in fields:
            raise ParseError("modular: missing ring.n")
        spec = ModularSpec(_parse_int(fields["ring.n"], "ring.n"))
    elif kind == "product":
        if "ring.factors" not in fields:
            raise ParseError("product: missing ring.factors")
        parts = _split_top_level(fields["ring.factors"], ",")
        spec = ProductSpec(tuple(parse_spec_string(p) for p in parts))
    elif kind == "matrix":
        if "ring.k" not in fields or "ring.base" not in fields:
            raise ParseError("matrix: missing ring.k or ring.base")
        spec = MatrixSpec(
            _parse_int(fields["ring.k"], "ring.k"),
            parse_spec_string(fields["ring.base"]),
        )
    elif kind == "polyquot":
        if "ring.p" not in fields or "ring.f" not in fields:
            raise ParseError("polyquot: missing ring.p or ring.f")
        p = _parse_int(fields["ring.p"], "ring.p")
        coeffs = tuple(
            _parse_int(c.strip(), "ring.f coefficient") % p
            for c in fields["ring.f"].split(",")
            if c.strip()
        )
        spec = PolyQuotSpec(p, coeffs)
    else:
        raise ParseError(f"unknown ring.kind {kind!r}")
    spec.validate()
    return spec


def parse_element_literal(ring: RingOracle, text: str) -> ElementCode:
    """Construction-native literal -> code (CLI input path)."""
    return ring._encode(ring.spec.parse_literal(text))


def format_element(ring: RingOracle, code: ElementCode) -> str:
    """Code -> construction-native literal (CLI output path)."""
    return ring.spec.format_value(ring._decode(code))
