"""Certificate model, JSON form and the claim-expression language.

A certificate records one lemma outcome: named vertex sets, a list of
claimed inequalities and a trace of the choices that produced it.  Each
claim carries a ``meaning`` written in a tiny expression language so that a
checker can recompute its left-hand side from the graph alone:

    chi(S)  card(S)  count(P)  pow(E, n)  sub(E, E)  mul(E, E)  div(E, E)
    powge(E, n, E)

``S`` names a set of the certificate (``V`` is the whole vertex set unless
the certificate defines its own ``V``), ``count(P)`` is the number of sets
named ``P1, P2, ...``, numbers are written ``7`` or ``3/8``, and
``powge(b, n, t)`` is 1 when ``b**n >= t`` and 0 otherwise.  The last form
keeps thresholds such as ``k**-d * chi(G)`` exact for huge ``d``.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from .exact import fmt, q
from .graph_core import Graph, encode_graph6, from_iter, size, to_list
from .chi_oracles import Oracle, oracle_for

RELATIONS = ("<", "<=", ">=", ">")
SCHEMA_KEYS = ("kind", "lemma", "sets", "claims", "trace", "params")


class CertificateError(ValueError):
    """Malformed certificate or claim expression."""


@dataclass(frozen=True)
class Claim:
    lhs: Fraction
    rel: str
    rhs: Fraction
    meaning: str

    def holds(self) -> bool:
        return relation_holds(self.lhs, self.rel, self.rhs)

    def as_json(self) -> Dict[str, str]:
        return {"lhs": fmt(self.lhs), "rel": self.rel, "rhs": fmt(self.rhs), "meaning": self.meaning}


def relation_holds(lhs: Fraction, rel: str, rhs: Fraction) -> bool:
    if rel == ">=":
        return lhs >= rhs
    if rel == ">":
        return lhs > rhs
    if rel == "<=":
        return lhs <= rhs
    if rel == "<":
        return lhs < rhs
    raise CertificateError(f"unknown relation {rel!r}")


@dataclass
class Certificate:
    kind: str
    lemma: str
    sets: Dict[str, List[int]]
    claims: List[Claim]
    trace: List[Dict[str, Any]] = field(default_factory=list)
    params: Dict[str, Any] = field(default_factory=dict)

    @property
    def bullet(self) -> Optional[str]:
        return self.params.get("bullet")

    def mask(self, name: str) -> int:
        return from_iter(self.sets[name])

    def as_json(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "lemma": self.lemma,
            "params": self.params,
            "sets": {k: list(v) for k, v in self.sets.items()},
            "claims": [c.as_json() for c in self.claims],
            "trace": self.trace,
        }

    def to_json(self) -> str:
        """Canonical serialization: sorted keys, no whitespace variation."""
        return json.dumps(self.as_json(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str | Dict[str, Any]) -> "Certificate":
        obj = json.loads(text) if isinstance(text, str) else text
        if not isinstance(obj, dict):
            raise CertificateError("certificate must be a JSON object")
        for key in ("kind", "lemma", "sets", "claims"):
            if key not in obj:
                raise CertificateError(f"certificate lacks key {key!r}")
        extra = set(obj) - set(SCHEMA_KEYS)
        if extra:
            raise CertificateError(f"unexpected keys {sorted(extra)}")
        sets = obj["sets"]
        if not isinstance(sets, dict):
            raise CertificateError("'sets' must map names to vertex lists")
        clean: Dict[str, List[int]] = {}
        for name, members in sets.items():
            if not isinstance(members, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in members):
                raise CertificateError(f"set {name!r} must be a list of integers")
            clean[name] = list(members)
        claims = []
        for c in obj["claims"]:
            try:
                claims.append(Claim(q(c["lhs"]), c["rel"], q(c["rhs"]), c["meaning"]))
            except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
                raise CertificateError(f"malformed claim {c!r}: {exc}") from None
            if c["rel"] not in RELATIONS:
                raise CertificateError(f"unknown relation {c['rel']!r}")
        return cls(obj["kind"], obj["lemma"], clean, claims, list(obj.get("trace", [])), dict(obj.get("params", {})))


# ---------------------------------------------------------------------------
# claim expressions

_TOKEN = re.compile(r"\s*(?:(\d+/\d+|\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def _tokenize(text: str) -> List[Tuple[str, str]]:
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        num, name, sym = m.groups()
        if num is not None:
            out.append(("num", num))
        elif name is not None:
            out.append(("name", name))
        elif sym is not None and not sym.isspace():
            out.append(("sym", sym))
        pos = m.end()
    return out


def pow_at_least(base: Fraction, e: int, target: Fraction) -> bool:
    """Exact test base**e >= target for rational base >= 0 and integer e >= 0.

    Works for astronomically large e by locating the least exponent that
    crosses the target with exponential then binary search.
    """
    base, target = Fraction(base), Fraction(target)
    if e < 0 or base < 0:
        raise CertificateError("pow_at_least needs base >= 0 and e >= 0")
    if target <= 0:
        return True
    if e == 0:
        return 1 >= target
    if base == 0:
        return False
    if base == 1:
        return 1 >= target
    if base < 1:
        # base**e >= target  <=>  (1/base)**e <= 1/target
        return not _pow_exceeds(1 / base, e, 1 / target)
    return _least_crossing(base, target, strict=False) <= e


def pow_at_most(base: Fraction, e: int, target: Fraction) -> bool:
    """Exact test base**e <= target for rational base > 0 and integer e >= 0."""
    base, target = Fraction(base), Fraction(target)
    if e < 0 or base <= 0:
        raise CertificateError("pow_at_most needs base > 0 and e >= 0")
    if target <= 0:
        return False
    if e == 0 or base == 1:
        return 1 <= target
    if base > 1:
        return not _pow_exceeds(base, e, target)
    # base**e <= target  <=>  (1/base)**e >= 1/target
    return pow_at_least(1 / base, e, 1 / target)


def _pow_exceeds(b: Fraction, e: int, t: Fraction) -> bool:
    """b**e > t for b > 1."""
    return _least_crossing(b, t, strict=True) <= e


def _least_crossing(b: Fraction, t: Fraction, strict: bool) -> int:
    """Least m >= 0 with b**m >= t (or > t when strict), for b > 1."""

    def ok(val: Fraction) -> bool:
        return val > t if strict else val >= t

    if ok(Fraction(1)):
        return 0
    hi, val = 1, b
    while not ok(val):
        hi *= 2
        val = val * val
    lo = hi // 2  # b**lo fails, b**hi succeeds
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(b ** mid):
            hi = mid
        else:
            lo = mid
    return hi


class Evaluator:
    """Evaluates claim meanings against the sets of a certificate."""

    def __init__(self, g: Graph, sets: Dict[str, int], oracle: Optional[Oracle] = None):
        self.g = g
        self.sets = dict(sets)
        self.sets.setdefault("V", g.full)
        self.oracle = oracle or oracle_for(g)

    def __call__(self, meaning: str) -> Fraction:
        toks = _tokenize(meaning)
        val, pos = self._expr(toks, 0)
        if pos != len(toks):
            raise CertificateError(f"trailing input in meaning {meaning!r}")
        return val

    def _expect(self, toks, pos, sym):
        if pos >= len(toks) or toks[pos] != ("sym", sym):
            raise CertificateError(f"expected {sym!r} in claim meaning")
        return pos + 1

    def _setname(self, toks, pos):
        if pos >= len(toks) or toks[pos][0] != "name":
            raise CertificateError("expected a set name")
        return toks[pos][1], pos + 1

    def _int(self, toks, pos):
        if pos >= len(toks) or toks[pos][0] != "num" or "/" in toks[pos][1]:
            raise CertificateError("expected an integer exponent")
        return int(toks[pos][1]), pos + 1

    def _expr(self, toks, pos):
        if pos >= len(toks):
            raise CertificateError("unexpected end of claim meaning")
        kind, text = toks[pos]
        if kind == "num":
            return Fraction(text), pos + 1
        if kind != "name":
            raise CertificateError(f"unexpected symbol {text!r} in claim meaning")
        fn = text
        pos = self._expect(toks, pos + 1, "(")
        if fn in ("chi", "card"):
            name, pos = self._setname(toks, pos)
            if name not in self.sets:
                raise CertificateError(f"claim refers to unknown set {name!r}")
            mask = self.sets[name]
            val = Fraction(self.oracle.chi(mask) if fn == "chi" else size(mask))
        elif fn == "count":
            prefix, pos = self._setname(toks, pos)
            pat = re.compile(re.escape(prefix) + r"\d+$")
            val = Fraction(sum(1 for k in self.sets if pat.match(k)))
        elif fn == "pow":
            base, pos = self._expr(toks, pos)
            pos = self._expect(toks, pos, ",")
            e, pos = self._int(toks, pos)
            val = base ** e
        elif fn in ("sub", "mul", "div"):
            a, pos = self._expr(toks, pos)
            pos = self._expect(toks, pos, ",")
            b, pos = self._expr(toks, pos)
            if fn == "sub":
                val = a - b
            elif fn == "mul":
                val = a * b
            elif b == 0:
                raise CertificateError("division by zero in claim meaning")
            else:
                val = a / b
        elif fn == "powge":
            base, pos = self._expr(toks, pos)
            pos = self._expect(toks, pos, ",")
            e, pos = self._int(toks, pos)
            pos = self._expect(toks, pos, ",")
            t, pos = self._expr(toks, pos)
            val = Fraction(1 if pow_at_least(base, e, t) else 0)
        else:
            raise CertificateError(f"unknown function {fn!r} in claim meaning")
        pos = self._expect(toks, pos, ")")
        return val, pos


# ---------------------------------------------------------------------------
# building certificates

POWER_INLINE_LIMIT = 4096


def power_claim(setname: str, base: Fraction, e: int, scale: Fraction) -> Tuple[str, str, Fraction]:
    """Claim chi(S) >= scale / base**e for base >= 1 and integer e >= 0.

    Small exponents give a literal threshold; huge ones are written as
    ``powge(base, e, div(scale, chi(S))) >= 1``, i.e. base**e * chi(S) >= scale.
    """
    base, scale = Fraction(base), Fraction(scale)
    if base < 1 or e < 0:
        raise CertificateError("power_claim needs base >= 1 and e >= 0")
    if e <= POWER_INLINE_LIMIT:
        return (f"chi({setname})", ">=", scale / base ** e)
    return (f"powge({fmt(base)}, {e}, div({fmt(scale)}, chi({setname})))", ">=", Fraction(1))


def jsonable(value: Any) -> Any:
    """Params and trace values: Fractions become 'p/q', tuples become lists."""
    if isinstance(value, Fraction):
        return fmt(value)
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    raise TypeError(f"cannot serialize {type(value).__name__} into a certificate")


class CertBuilder:
    """Accumulates sets, claims and trace steps for one lemma outcome."""

    def __init__(self, g: Graph, lemma: str, params: Dict[str, Any], mode: str = "strict", klass: str = "B"):
        self.g = g
        self.lemma = lemma
        self.params = {k: jsonable(v) for k, v in params.items()}
        self.mode = mode
        self.klass = klass
        self.sets: Dict[str, int] = {}
        self.claims: List[Claim] = []
        self.trace: List[Dict[str, Any]] = [
            {"step": "input", "graph6": encode_graph6(g).decode(), "lemma": lemma,
             "params": dict(self.params), "mode": mode, "class": klass}
        ]
        self.waivers: List[str] = []

    def note(self, step: str, **info: Any) -> None:
        entry = {"step": step}
        entry.update({k: jsonable(v) for k, v in info.items()})
        self.trace.append(entry)

    def waive(self, what: str) -> None:
        """Record a magnitude gate that relaxed mode skips."""
        self.waivers.append(what)
        self.note("waiver", gate=what)

    def add_set(self, name: str, mask: int) -> None:
        self.sets[name] = mask

    def finish(self, kind: str, bullet: str, claims: List[Tuple[str, str, Fraction]], **extra: Any) -> Certificate:
        # parameters fixed after construction (derived exponents) belong to the replayable input
        self.trace[0]["params"] = dict(self.params)
        ev = Evaluator(self.g, self.sets)
        out = [Claim(ev(m), rel, Fraction(rhs), m) for m, rel, rhs in claims]
        params = dict(self.params)
        params["bullet"] = bullet
        params["mode"] = self.mode
        params.update({k: jsonable(v) for k, v in extra.items()})
        if self.waivers:
            params["waivers"] = list(self.waivers)
        sets = {k: to_list(v) for k, v in self.sets.items()}
        return Certificate(kind, self.lemma, sets, out, list(self.trace), params)


def masks_of(cert: Certificate, n: int) -> Dict[str, int]:
    out = {}
    for name, members in cert.sets.items():
        m = 0
        for v in members:
            m |= 1 << v
        out[name] = m
    return out


def describe(cert: Certificate) -> str:
    parts = [f"{cert.lemma}:{cert.bullet} ({cert.kind})"]
    for name in sorted(cert.sets):
        if not name.startswith("in_"):
            parts.append(f"{name}={cert.sets[name]}")
    return " ".join(parts)


__all__ = [
    "Certificate", "CertBuilder", "CertificateError", "Claim", "Evaluator", "RELATIONS",
    "describe", "jsonable", "masks_of", "pow_at_least", "pow_at_most", "power_claim", "relation_holds",
]
