"""Finite algebras as operation tables, terms, products and quotients."""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from itertools import product as iproduct
from typing import Iterable, Sequence, Union

import numpy as np

DEFAULT_MAX_CARRIER = 10**7
# products whose operation tables would exceed this many entries are refused
MAX_TABLE_ENTRIES = 1 << 26


class AlgebraError(ValueError):
    """Malformed algebra, map or term."""


class SignatureMismatch(AlgebraError):
    pass


class NotACongruence(AlgebraError):
    def __init__(self, message, op=None, args=None):
        super().__init__(message)
        self.op = op
        self.args_tuple = args


class CapExceeded(RuntimeError):
    """A configured size cap or step budget was hit; never a silent truncation."""

    def __init__(self, message, reached=None, cap=None):
        super().__init__(message)
        self.reached = reached
        self.cap = cap


def max_carrier() -> int:
    env = os.environ.get("SDW_MAX_CARRIER")
    if env:
        try:
            return int(env)
        except ValueError:
            raise AlgebraError(f"SDW_MAX_CARRIER is not an integer: {env!r}")
    return DEFAULT_MAX_CARRIER


@dataclass(frozen=True)
class Signature:
    symbols: tuple[tuple[str, int], ...]

    def __post_init__(self):
        names = [s for s, _ in self.symbols]
        if len(set(names)) != len(names):
            raise AlgebraError(f"duplicate operation names in signature: {names}")
        for name, arity in self.symbols:
            if not isinstance(arity, int) or arity < 0:
                raise AlgebraError(f"operation {name!r} has invalid arity {arity!r}")

    @classmethod
    def of(cls, *pairs) -> "Signature":
        return cls(tuple((str(n), int(a)) for n, a in pairs))

    def arity(self, name: str) -> int:
        for s, a in self.symbols:
            if s == name:
                return a
        raise AlgebraError(f"unknown operation symbol {name!r}")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(s for s, _ in self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self):
        return len(self.symbols)


class FiniteAlgebra:
    """Carrier {0,...,n-1} with one table per operation symbol.

    Tables are numpy arrays of shape ``(n,) * arity`` (row-major, last
    argument fastest when flattened) and are read-only after construction.
    """

    def __init__(self, name: str, size: int, signature: Signature, tables: dict):
        if not isinstance(size, (int, np.integer)) or size < 1:
            raise AlgebraError(f"algebra size must be a positive integer, got {size!r}")
        self.name = str(name)
        self.size = int(size)
        self.signature = signature
        dtype = np.int32 if size < 2**31 else np.int64
        self.tables: dict[str, np.ndarray] = {}
        missing = [s for s in signature.names if s not in tables]
        if missing:
            raise AlgebraError(f"missing tables for {missing}")
        extra = [s for s in tables if s not in signature.names]
        if extra:
            raise AlgebraError(f"tables given for symbols not in signature: {extra}")
        for sym, arity in signature:
            arr = np.asarray(tables[sym])
            if arr.size != self.size**arity:
                raise AlgebraError(
                    f"table {sym!r}: expected {self.size**arity} entries "
                    f"(size {self.size}, arity {arity}), got {arr.size}")
            if arr.size and (not np.issubdtype(arr.dtype, np.integer)):
                raise AlgebraError(f"table {sym!r} has non-integer entries")
            arr = arr.astype(dtype).reshape((self.size,) * arity)
            if arr.size and (arr.min() < 0 or arr.max() >= self.size):
                bad = np.argwhere((arr < 0) | (arr >= self.size))[0]
                raise AlgebraError(
                    f"table {sym!r}: entry at {tuple(int(x) for x in bad)} out of range")
            arr.setflags(write=False)
            self.tables[sym] = arr
        self._cache: dict = {}

    def __repr__(self):
        ops = ", ".join(f"{s}/{a}" for s, a in self.signature)
        return f"FiniteAlgebra({self.name!r}, size={self.size}, ops=[{ops}])"

    def table(self, sym: str) -> np.ndarray:
        return self.tables[sym]

    def op(self, sym: str, *args: int) -> int:
        t = self.tables[sym]
        if len(args) != t.ndim:
            raise AlgebraError(f"{sym!r} takes {t.ndim} arguments, got {len(args)}")
        return int(t[tuple(args)]) if args else int(t[()])

    @property
    def elements(self) -> range:
        return range(self.size)

    def same_signature(self, other: "FiniteAlgebra") -> bool:
        return self.signature == other.signature

    # -- serialization -------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "size": self.size,
            "signature": [{"name": s, "arity": a} for s, a in self.signature],
            "tables": {s: [int(x) for x in self.tables[s].ravel()] for s in self.signature.names},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def algebra_from_dict(data: dict, source: str = "<dict>") -> FiniteAlgebra:
    def bad(msg):
        raise AlgebraError(f"{source}: {msg}")

    if not isinstance(data, dict):
        bad("top level must be a JSON object")
    for key in ("size", "signature", "tables"):
        if key not in data:
            bad(f"missing key {key!r}")
    sig_raw = data["signature"]
    if not isinstance(sig_raw, list):
        bad("'signature' must be a list")
    pairs = []
    for i, entry in enumerate(sig_raw):
        if not isinstance(entry, dict) or "name" not in entry or "arity" not in entry:
            bad(f"signature entry {i} must be an object with 'name' and 'arity'")
        if not isinstance(entry["arity"], int) or isinstance(entry["arity"], bool):
            bad(f"signature entry {i}: arity must be an integer")
        pairs.append((str(entry["name"]), entry["arity"]))
    tables = data["tables"]
    if not isinstance(tables, dict):
        bad("'tables' must be an object")
    size = data["size"]
    if not isinstance(size, int) or isinstance(size, bool):
        bad("'size' must be an integer")
    for sym, vals in tables.items():
        if not isinstance(vals, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in vals):
            bad(f"table {sym!r} must be a flat list of integers")
    try:
        return FiniteAlgebra(data.get("name", "A"), size, Signature(tuple(pairs)),
                             {k: np.asarray(v, dtype=np.int64) for k, v in tables.items()})
    except AlgebraError as exc:
        bad(str(exc))


def load_algebra(path) -> FiniteAlgebra:
    path = os.fspath(path)
    with open(path) as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AlgebraError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None
    return algebra_from_dict(data, source=path)


def save_algebra(A: FiniteAlgebra, path) -> None:
    with open(path, "w") as fh:
        json.dump(A.to_dict(), fh)
        fh.write("\n")


def algebra_from_functions(name: str, elements: Sequence, ops: Sequence[tuple]) -> FiniteAlgebra:
    """Tabulate ``ops = [(symbol, arity, fn), ...]`` acting on ``elements``."""
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    tables = {}
    for sym, arity, fn in ops:
        flat = [index[fn(*args)] for args in iproduct(elements, repeat=arity)]
        tables[sym] = np.asarray(flat, dtype=np.int64).reshape((n,) * arity)
    return FiniteAlgebra(name, n, Signature.of(*[(s, a) for s, a, _ in ops]), tables)


# -- terms --------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    index: int

    def __str__(self):
        return f"x{self.index}"


@dataclass(frozen=True)
class App:
    symbol: str
    args: tuple = ()

    def __str__(self):
        if not self.args:
            return self.symbol
        return f"{self.symbol}({', '.join(str(a) for a in self.args)})"


Term = Union[Var, App]


def term_vars(t: Term) -> int:
    """Number of variables needed (1 + largest variable index, 0 if none)."""
    if isinstance(t, Var):
        return t.index + 1
    return max((term_vars(a) for a in t.args), default=0)


def term_size(t: Term) -> int:
    if isinstance(t, Var):
        return 1
    return 1 + sum(term_size(a) for a in t.args)


def parse_term(text: str) -> Term:
    """Parse ``mul(x0, inv(x1))`` style terms; bare names are constants."""
    pos = 0
    s = text.strip()

    def skip():
        nonlocal pos
        while pos < len(s) and s[pos].isspace():
            pos += 1

    def name():
        nonlocal pos
        start = pos
        while pos < len(s) and (s[pos].isalnum() or s[pos] in "_"):
            pos += 1
        if start == pos:
            raise AlgebraError(f"term parse error at column {pos + 1} in {text!r}")
        return s[start:pos]

    def parse():
        nonlocal pos
        skip()
        tok = name()
        skip()
        if pos < len(s) and s[pos] == "(":
            pos += 1
            args = []
            skip()
            if pos < len(s) and s[pos] == ")":
                pos += 1
                return App(tok, ())
            while True:
                args.append(parse())
                skip()
                if pos < len(s) and s[pos] == ",":
                    pos += 1
                    continue
                if pos < len(s) and s[pos] == ")":
                    pos += 1
                    break
                raise AlgebraError(f"term parse error at column {pos + 1} in {text!r}")
            return App(tok, tuple(args))
        if tok[0] == "x" and tok[1:].isdigit():
            return Var(int(tok[1:]))
        return App(tok, ())

    t = parse()
    skip()
    if pos != len(s):
        raise AlgebraError(f"trailing input at column {pos + 1} in {text!r}")
    return t


def _check_term(A: FiniteAlgebra, t: Term, nvars: int):
    if isinstance(t, Var):
        if t.index < 0 or t.index >= nvars:
            raise AlgebraError(f"variable x{t.index} out of range (assignment has {nvars} values)")
        return
    arity = A.signature.arity(t.symbol)
    if arity != len(t.args):
        raise AlgebraError(f"{t.symbol!r} has arity {arity} but is applied to {len(t.args)} arguments")
    for a in t.args:
        _check_term(A, a, nvars)


def eval_term(A: FiniteAlgebra, t: Term, assignment: Sequence[int]) -> int:
    """Value of ``t`` under ``assignment`` by bottom-up table lookup."""
    assignment = [int(a) for a in assignment]
    _check_term(A, t, len(assignment))
    for a in assignment:
        if not 0 <= a < A.size:
            raise AlgebraError(f"assignment value {a} not in carrier of size {A.size}")
    memo: dict = {}

    def ev(u):
        key = id(u)
        if key in memo:
            return memo[key]
        if isinstance(u, Var):
            v = assignment[u.index]
        else:
            v = int(A.tables[u.symbol][tuple(ev(c) for c in u.args)])
        memo[key] = v
        return v

    return ev(t)


def eval_term_vec(A: FiniteAlgebra, t: Term, columns: Sequence[np.ndarray]) -> np.ndarray:
    """Evaluate ``t`` on many assignments at once (one array per variable)."""
    _check_term(A, t, len(columns))
    cols = [np.asarray(c) for c in columns]
    shape = np.broadcast_shapes(*[c.shape for c in cols]) if cols else ()
    memo: dict = {}

    def ev(u):
        key = id(u)
        if key in memo:
            return memo[key]
        if isinstance(u, Var):
            v = np.broadcast_to(cols[u.index], shape)
        elif not u.args:
            v = np.full(shape, A.tables[u.symbol][()])
        else:
            v = A.tables[u.symbol][tuple(ev(c) for c in u.args)]
        memo[key] = v
        return v

    return np.asarray(ev(t))


# -- products -----------------------------------------------------------

class ProductCodec:
    """Mixed-radix codec between flat indices and coordinate tuples.

    Factor 0 is the most significant digit.
    """

    def __init__(self, radices: Sequence[int]):
        self.radices = tuple(int(r) for r in radices)
        if not self.radices:
            raise AlgebraError("a product needs at least one factor")
        self.size = math.prod(self.radices)
        self.fits_int64 = self.size < 2**62
        weights = []
        w = 1
        for r in reversed(self.radices):
            weights.append(w)
            w *= r
        self.weights = tuple(reversed(weights))
        if self.fits_int64:
            self._w = np.asarray(self.weights, dtype=np.int64)

    def encode(self, coords: Sequence[int]) -> int:
        if len(coords) != len(self.radices):
            raise AlgebraError(f"expected {len(self.radices)} coordinates, got {len(coords)}")
        code = 0
        for c, r, w in zip(coords, self.radices, self.weights):
            if not 0 <= int(c) < r:
                raise AlgebraError(f"coordinate {c} out of range for factor of size {r}")
            code += int(c) * w
        return code

    def decode(self, code: int) -> tuple[int, ...]:
        out = []
        code = int(code)
        for w, r in zip(self.weights, self.radices):
            out.append((code // w) % r)
        return tuple(out)

    def encode_rows(self, rows: np.ndarray) -> np.ndarray:
        return np.asarray(rows, dtype=np.int64) @ self._w

    def decode_codes(self, codes: np.ndarray) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64)
        out = np.empty((codes.size, len(self.radices)), dtype=np.int64)
        for j, (w, r) in enumerate(zip(self.weights, self.radices)):
            out[:, j] = (codes // w) % r
        return out


def direct_product(factors: Sequence[FiniteAlgebra], cap: int | None = None):
    """Direct product with coordinatewise operations; returns ``(algebra, codec)``."""
    factors = list(factors)
    if not factors:
        raise AlgebraError("direct product of an empty factor list")
    sig = factors[0].signature
    for F in factors[1:]:
        if F.signature != sig:
            raise SignatureMismatch(f"factor {F.name!r} has a different signature than {factors[0].name!r}")
    codec = ProductCodec([F.size for F in factors])
    cap = max_carrier() if cap is None else cap
    if codec.size > cap:
        raise CapExceeded(f"product carrier {codec.size} exceeds cap {cap}", reached=codec.size, cap=cap)
    for sym, arity in sig:
        if codec.size**arity > MAX_TABLE_ENTRIES:
            raise CapExceeded(f"table for {sym!r} would need {codec.size**arity} entries",
                              reached=codec.size**arity, cap=MAX_TABLE_ENTRIES)
    tables = {}
    n = codec.size
    coords = codec.decode_codes(np.arange(n))
    for sym, arity in sig:
        if arity == 0:
            tables[sym] = np.asarray(codec.encode([F.op(sym) for F in factors]))
            continue
        grids = np.indices((n,) * arity).reshape(arity, -1)
        res = np.zeros(grids.shape[1], dtype=np.int64)
        for j, F in enumerate(factors):
            args = tuple(coords[g, j] for g in grids)
            res += F.tables[sym][args].astype(np.int64) * codec.weights[j]
        tables[sym] = res.reshape((n,) * arity)
    name = "x".join(F.name for F in factors)
    return FiniteAlgebra(name, n, sig, tables), codec


# -- homomorphisms and quotients ---------------------------------------

@dataclass
class HomCheck:
    ok: bool
    witness: dict | None = None

    def __bool__(self):
        return self.ok


def is_homomorphism(A: FiniteAlgebra, B: FiniteAlgebra, f: Sequence[int]) -> HomCheck:
    """Whether ``f`` commutes with every operation; first failing tuple otherwise."""
    if A.signature != B.signature:
        return HomCheck(False, {"reason": "signature mismatch"})
    f = np.asarray(f, dtype=np.int64)
    if f.shape != (A.size,):
        return HomCheck(False, {"reason": f"map has {f.size} entries, carrier has {A.size}"})
    if f.size and (f.min() < 0 or f.max() >= B.size):
        return HomCheck(False, {"reason": "map leaves the codomain"})
    for sym, arity in A.signature:
        TA, TB = A.tables[sym], B.tables[sym]
        lhs = f[TA]
        rhs = TB[np.ix_(*([f] * arity))] if arity else TB
        if arity == 0:
            if int(lhs) != int(rhs):
                return HomCheck(False, {"op": sym, "args": [], "f(op(args))": int(lhs), "op(f(args))": int(rhs)})
            continue
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            args = [int(x) for x in bad[0]]
            return HomCheck(False, {"op": sym, "args": args,
                                    "f(op(args))": int(lhs[tuple(args)]),
                                    "op(f(args))": int(rhs[tuple(args)])})
    return HomCheck(True)


def compatibility_violation(A: FiniteAlgebra, rep: np.ndarray):
    """First (op, args_u, args_v) where related arguments give unrelated results, else None."""
    rep = np.asarray(rep)
    for sym, arity in A.signature:
        if arity == 0:
            continue
        T = A.tables[sym]
        # result block must depend only on argument blocks: compare against canonical reps
        for pos in range(arity):
            idx = [slice(None)] * arity
            moved = np.take(T, rep, axis=pos)
            diff = rep[moved] != rep[T]
            if diff.any():
                where = tuple(int(x) for x in np.argwhere(diff)[0])
                other = list(where)
                other[pos] = int(rep[where[pos]])
                return sym, list(where), other
    return None


def quotient(A: FiniteAlgebra, theta) -> tuple[FiniteAlgebra, np.ndarray]:
    """Quotient by a congruence; returns the algebra on blocks and the canonical surjection.

    Blocks are numbered in order of their least element.
    """
    rep = np.asarray(getattr(theta, "rep", theta), dtype=np.int64)
    if rep.shape != (A.size,):
        raise AlgebraError("partition size does not match the algebra")
    bad = compatibility_violation(A, rep)
    if bad is not None:
        sym, u, v = bad
        raise NotACongruence(
            f"not compatible with {sym!r}: arguments {u} and {v} are related but results are not",
            op=sym, args=(u, v))
    reps = np.unique(rep)
    block = np.searchsorted(reps, rep)
    m = reps.size
    tables = {}
    for sym, arity in A.signature:
        T = A.tables[sym]
        if arity == 0:
            tables[sym] = np.asarray(block[T])
            continue
        tables[sym] = block[T[np.ix_(*([reps] * arity))]]
    Q = FiniteAlgebra(f"{A.name}/~", m, A.signature, tables)
    return Q, block
