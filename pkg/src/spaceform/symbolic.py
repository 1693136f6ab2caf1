"""Symbolic tensor algebra for space-form curvature formulas.

Expressions are trilinear combinations built from variables, the Reeb
vector xi, the endomorphism phi, the metric pairing g and the 1-form eta,
with coefficients that are exact rational polynomials in f1, f2, f3.

Two layers:

  * a raw tree (``Raw`` / ``RScalar``): verbatim formulas, parser output
    and fuzz input; may contain unreduced chains like phi(phi(X)),
  * a canonical form (``TensorExpr``): every term is a polynomial
    coefficient times a multiset of scalar factors times a vector atom.

``normalize`` maps raw to canonical by exhaustively applying the
structure identities as left-to-right rewrites:

    phi(phi(X))   -> -X + eta(X) xi          phi(xi)      -> 0
    eta(phi(X))   -> 0                       eta(xi)      -> 1
    g(phi X, phi Y) -> g(X, Y) - eta(X) eta(Y)
    g(phi X, Y)   -> -g(X, phi Y)            g(X, xi)     -> eta(X)
    g(Y, X)       -> g(X, Y)  (name order)   g(X, phi X)  -> 0

Covariant differentiation treats f1, f2, f3 as constants, differentiates
only the structure (eta, xi, phi and the phi slot of g), and drops the
derivatives of bare argument slots, which cancel in curvature
differences.  The rules are

    D eta(Y)    = (f1 - f3) g(D, phi Y)
    D xi        = -(f1 - f3) phi(D)
    D phi(Y)    = (f1 - f3) [g(D, Y) xi - eta(Y) D]
    D g(X, phi Y) = (f1 - f3) [g(D, Y) eta(X) - eta(Y) g(X, D)]
    D g(X, Y)   = 0
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from .pointwise import AmbientSpace, ConnectionKind, FormCoefficients

# ---------------------------------------------------------------------------
# polynomial coefficients in f1, f2, f3
# ---------------------------------------------------------------------------

Monomial = tuple[int, int, int]


def _mono_key(m: Monomial) -> tuple:
    return (-sum(m), m)


@dataclass(frozen=True)
class Poly:
    """Polynomial in f1, f2, f3 with Fraction coefficients, canonically ordered."""

    terms: tuple[tuple[Monomial, Fraction], ...]

    @staticmethod
    def from_dict(d: dict[Monomial, Fraction]) -> "Poly":
        items = [(m, c) for m, c in d.items() if c != 0]
        items.sort(key=lambda mc: _mono_key(mc[0]))
        return Poly(tuple(items))

    @staticmethod
    def const(value) -> "Poly":
        return Poly.from_dict({(0, 0, 0): Fraction(value)})

    @staticmethod
    def sym(name: str) -> "Poly":
        idx = {"f1": 0, "f2": 1, "f3": 2}[name]
        mono = tuple(1 if i == idx else 0 for i in range(3))
        return Poly.from_dict({mono: Fraction(1)})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "Poly") -> "Poly":
        d = dict(self.terms)
        for m, c in other.terms:
            d[m] = d.get(m, Fraction(0)) + c
        return Poly.from_dict(d)

    def __neg__(self) -> "Poly":
        return Poly(tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        d: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2])
                d[m] = d.get(m, Fraction(0)) + c1 * c2
        return Poly.from_dict(d)

    def evaluate(self, coeffs: FormCoefficients) -> float:
        total = 0.0
        for (i, j, k), c in self.terms:
            total += float(c) * coeffs.f1 ** i * coeffs.f2 ** j * coeffs.f3 ** k
        return total

    def text(self) -> str:
        if not self.terms:
            return "0"
        parts: list[str] = []
        for m, c in self.terms:
            syms = []
            for name, e in zip(("f1", "f2", "f3"), m):
                if e == 1:
                    syms.append(name)
                elif e > 1:
                    syms.append(f"{name}^{e}")
            mag = abs(c)
            body = "*".join(syms)
            if not syms:
                body = str(mag)
            elif mag != 1:
                body = f"{mag}*{body}"
            parts.append(("- " if c < 0 else "+ ") + body)
        out = " ".join(parts)
        return out[2:] if out.startswith("+ ") else "-" + out[2:]


P_ONE = Poly.const(1)
P_LAM = Poly.sym("f1") - Poly.sym("f3")


# ---------------------------------------------------------------------------
# canonical factors, atoms, terms
# ---------------------------------------------------------------------------

# factor encodings:  ("dot", a, b) = g(a, b) with a <= b
#                    ("phidot", a, b) = g(a, phi b)
#                    ("eta", a)
Factor = tuple
# atom encodings:    ("var", name) | ("phi", name) | ("xi",)
Atom = tuple

XI_ATOM: Atom = ("xi",)


def _canon_phidot(a: str, b: str) -> tuple[int, Factor | None]:
    if a == b:
        return 0, None  # g(X, phi X) = 0 by skewness
    if a > b:
        return -1, ("phidot", b, a)  # g(a, phi b) = -g(b, phi a)
    return 1, ("phidot", a, b)


@dataclass(frozen=True)
class ScalarExpr:
    """Sum of polynomial-weighted multisets of scalar factors."""

    terms: tuple[tuple[tuple[Factor, ...], Poly], ...]

    @staticmethod
    def from_dict(d: dict[tuple[Factor, ...], Poly]) -> "ScalarExpr":
        items = [(fs, p) for fs, p in d.items() if not p.is_zero]
        items.sort(key=lambda fp: fp[0])
        return ScalarExpr(tuple(items))

    @staticmethod
    def from_poly(p: Poly) -> "ScalarExpr":
        return ScalarExpr.from_dict({(): p})

    @staticmethod
    def single(factor: Factor, sign: int = 1) -> "ScalarExpr":
        p = Poly.const(sign)
        return ScalarExpr.from_dict({(factor,): p})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "ScalarExpr") -> "ScalarExpr":
        d = {fs: p for fs, p in self.terms}
        for fs, p in other.terms:
            d[fs] = d.get(fs, Poly.const(0)) + p
        return ScalarExpr.from_dict(d)

    def __sub__(self, other: "ScalarExpr") -> "ScalarExpr":
        return self + other.scaled(Poly.const(-1))

    def scaled(self, p: Poly) -> "ScalarExpr":
        return ScalarExpr.from_dict({fs: q * p for fs, q in self.terms})

    def __mul__(self, other: "ScalarExpr") -> "ScalarExpr":
        d: dict[tuple[Factor, ...], Poly] = {}
        for fs1, p1 in self.terms:
            for fs2, p2 in other.terms:
                fs = tuple(sorted(fs1 + fs2))
                prod = p1 * p2
                d[fs] = d.get(fs, Poly.const(0)) + prod
        return ScalarExpr.from_dict(d)


S_ONE = ScalarExpr.from_poly(P_ONE)
S_ZERO = ScalarExpr(())


@dataclass(frozen=True)
class TensorExpr:
    """Canonical sum: polynomial coefficient x scalar factors x vector atom."""

    terms: tuple[tuple[tuple[tuple[Factor, ...], Atom], Poly], ...]

    @staticmethod
    def from_dict(d: dict[tuple[tuple[Factor, ...], Atom], Poly]) -> "TensorExpr":
        items = [(key, p) for key, p in d.items() if not p.is_zero]
        items.sort(key=lambda kp: kp[0])
        return TensorExpr(tuple(items))

    @staticmethod
    def zero() -> "TensorExpr":
        return TensorExpr(())

    @staticmethod
    def atom(a: Atom) -> "TensorExpr":
        return TensorExpr.from_dict({((), a): P_ONE})

    @staticmethod
    def var(name: str) -> "TensorExpr":
        return TensorExpr.atom(("var", name))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "TensorExpr") -> "TensorExpr":
        d = {key: p for key, p in self.terms}
        for key, p in other.terms:
            d[key] = d.get(key, Poly.const(0)) + p
        return TensorExpr.from_dict(d)

    def __sub__(self, other: "TensorExpr") -> "TensorExpr":
        return self + other.scaled(Poly.const(-1))

    def scaled(self, p: Poly) -> "TensorExpr":
        return TensorExpr.from_dict({key: q * p for key, q in self.terms})

    def times(self, s: ScalarExpr) -> "TensorExpr":
        d: dict[tuple[tuple[Factor, ...], Atom], Poly] = {}
        for (fs1, a), p1 in self.terms:
            for fs2, p2 in s.terms:
                key = (tuple(sorted(fs1 + fs2)), a)
                d[key] = d.get(key, Poly.const(0)) + p1 * p2
        return TensorExpr.from_dict(d)

    def variables(self) -> set[str]:
        names: set[str] = set()
        for (fs, a), _ in self.terms:
            for fac in fs:
                names.update(fac[1:])
            if a[0] in ("var", "phi"):
                names.add(a[1])
        return names


# smart constructors: the rewrite rules live here --------------------------

def v_phi(e: TensorExpr) -> TensorExpr:
    """Apply phi to a canonical vector expression."""
    out = TensorExpr.zero()
    for (fs, a), p in e.terms:
        if a[0] == "var":
            piece = TensorExpr.from_dict({((), ("phi", a[1])): P_ONE})
        elif a[0] == "phi":
            name = a[1]
            piece = (TensorExpr.var(name).scaled(Poly.const(-1))
                     + TensorExpr.atom(XI_ATOM).times(s_eta_name(name)))
        else:  # phi(xi) = 0
            continue
        out = out + piece.times(ScalarExpr.from_dict({fs: p}))
    return out


def s_eta_name(name: str) -> ScalarExpr:
    return ScalarExpr.single(("eta", name))


def s_eta(e: TensorExpr) -> ScalarExpr:
    """eta applied to a canonical vector expression."""
    out = S_ZERO
    for (fs, a), p in e.terms:
        if a[0] == "var":
            piece = s_eta_name(a[1])
        elif a[0] == "phi":
            continue  # eta(phi X) = 0
        else:
            piece = S_ONE  # eta(xi) = 1
        out = out + piece * ScalarExpr.from_dict({fs: p})
    return out


def _dot_atoms(a: Atom, b: Atom) -> ScalarExpr:
    """g on a pair of atoms, fully canonicalized."""
    if a[0] == "xi" and b[0] == "xi":
        return S_ONE
    if a[0] == "xi":
        return s_eta(TensorExpr.atom(b))
    if b[0] == "xi":
        return s_eta(TensorExpr.atom(a))
    if a[0] == "var" and b[0] == "var":
        lo, hi = sorted((a[1], b[1]))
        return ScalarExpr.single(("dot", lo, hi))
    if a[0] == "var" and b[0] == "phi":
        sign, fac = _canon_phidot(a[1], b[1])
        return ScalarExpr.single(fac, sign) if fac else S_ZERO
    if a[0] == "phi" and b[0] == "var":
        # g(phi a, b) = g(b, phi a) by symmetry; _canon_phidot flips the rest
        sign, fac = _canon_phidot(b[1], a[1])
        return ScalarExpr.single(fac, sign) if fac else S_ZERO
    # g(phi a, phi b) = g(a, b) - eta(a) eta(b)
    lo, hi = sorted((a[1], b[1]))
    return (ScalarExpr.single(("dot", lo, hi))
            - s_eta_name(a[1]) * s_eta_name(b[1]))


def s_dot(u: TensorExpr, v: TensorExpr) -> ScalarExpr:
    """g applied to two canonical vector expressions (bilinear expansion)."""
    out = S_ZERO
    for (fs1, a), p1 in u.terms:
        for (fs2, b), p2 in v.terms:
            weight = ScalarExpr.from_dict({tuple(sorted(fs1 + fs2)): p1 * p2})
            out = out + _dot_atoms(a, b) * weight
    return out


# ---------------------------------------------------------------------------
# raw trees
# ---------------------------------------------------------------------------

class Raw:
    __slots__ = ()


@dataclass(frozen=True)
class RVar(Raw):
    name: str


@dataclass(frozen=True)
class RXi(Raw):
    pass


@dataclass(frozen=True)
class RBasis(Raw):
    index: int  # 1-based coordinate vector; numeric evaluation only


@dataclass(frozen=True)
class RPhi(Raw):
    arg: Raw


@dataclass(frozen=True)
class RSum(Raw):
    parts: tuple[Raw, ...]


@dataclass(frozen=True)
class RScale(Raw):
    coeff: "RScalar"
    arg: Raw


class RScalar:
    __slots__ = ()


@dataclass(frozen=True)
class RNum(RScalar):
    value: Fraction


@dataclass(frozen=True)
class RSym(RScalar):
    name: str  # f1 | f2 | f3


@dataclass(frozen=True)
class RDot(RScalar):
    a: Raw
    b: Raw


@dataclass(frozen=True)
class REta(RScalar):
    a: Raw


@dataclass(frozen=True)
class RSSum(RScalar):
    parts: tuple[RScalar, ...]


@dataclass(frozen=True)
class RSProd(RScalar):
    parts: tuple[RScalar, ...]


def count_vector_terms(raw: Raw) -> int:
    """Leaf vector terms of a raw tree (sums flattened, scales transparent)."""
    if isinstance(raw, RSum):
        return sum(count_vector_terms(p) for p in raw.parts)
    if isinstance(raw, RScale):
        return count_vector_terms(raw.arg)
    return 1


def coefficient_groups(raw: Raw) -> int:
    """Top-level coefficient groups of a stated formula."""
    if isinstance(raw, RSum):
        return len(raw.parts)
    return 1


# ---------------------------------------------------------------------------
# normalization
# ---------------------------------------------------------------------------

def _norm_scalar(s: RScalar) -> ScalarExpr:
    if isinstance(s, RNum):
        return ScalarExpr.from_poly(Poly.const(s.value))
    if isinstance(s, RSym):
        return ScalarExpr.from_poly(Poly.sym(s.name))
    if isinstance(s, RDot):
        return s_dot(_norm_vector(s.a), _norm_vector(s.b))
    if isinstance(s, REta):
        return s_eta(_norm_vector(s.a))
    if isinstance(s, RSSum):
        out = S_ZERO
        for p in s.parts:
            out = out + _norm_scalar(p)
        return out
    if isinstance(s, RSProd):
        out = S_ONE
        for p in s.parts:
            out = out * _norm_scalar(p)
        return out
    raise TypeError(f"not a scalar node: {s!r}")


def _norm_vector(raw: Raw) -> TensorExpr:
    if isinstance(raw, RVar):
        return TensorExpr.var(raw.name)
    if isinstance(raw, RXi):
        return TensorExpr.atom(XI_ATOM)
    if isinstance(raw, RBasis):
        raise ValueError("coordinate basis vectors are numeric-only; "
                         "symbolic normalization rejects them")
    if isinstance(raw, RPhi):
        return v_phi(_norm_vector(raw.arg))
    if isinstance(raw, RSum):
        out = TensorExpr.zero()
        for p in raw.parts:
            out = out + _norm_vector(p)
        return out
    if isinstance(raw, RScale):
        return _norm_vector(raw.arg).times(_norm_scalar(raw.coeff))
    raise TypeError(f"not a vector node: {raw!r}")


def normalize(e: Union[Raw, TensorExpr]) -> TensorExpr:
    """Rewrite to canonical form; idempotent on already-canonical input."""
    if isinstance(e, TensorExpr):
        d: dict[tuple[tuple[Factor, ...], Atom], Poly] = {}
        for key, p in e.terms:
            d[key] = d.get(key, Poly.const(0)) + p
        return TensorExpr.from_dict(d)
    return _norm_vector(e)


# ---------------------------------------------------------------------------
# covariant differentiation (f constants, argument slots dropped)
# ---------------------------------------------------------------------------

def _d_factor(fac: Factor, d: str) -> ScalarExpr:
    if fac[0] == "dot":
        return S_ZERO
    if fac[0] == "phidot":
        a, b = fac[1], fac[2]
        piece = (s_dot(TensorExpr.var(d), TensorExpr.var(b)) * s_eta_name(a)
                 - s_eta_name(b) * s_dot(TensorExpr.var(a), TensorExpr.var(d)))
        return piece.scaled(P_LAM)
    # eta
    a = fac[1]
    sign, pfac = _canon_phidot(d, a)
    if pfac is None:
        return S_ZERO
    return ScalarExpr.single(pfac, sign).scaled(P_LAM)


def _d_atom(a: Atom, d: str) -> TensorExpr:
    if a[0] == "var":
        return TensorExpr.zero()
    if a[0] == "xi":
        return v_phi(TensorExpr.var(d)).scaled(-P_LAM)
    # phi atom: D phi(v) = lam [g(D, v) xi - eta(v) D]
    v = a[1]
    piece = (TensorExpr.atom(XI_ATOM).times(s_dot(TensorExpr.var(d), TensorExpr.var(v)))
             - TensorExpr.var(d).times(s_eta_name(v)))
    return piece.scaled(P_LAM)


def covariant_differentiate(e: TensorExpr, direction: str) -> TensorExpr:
    """Leibniz derivative along a fresh direction variable."""
    if not isinstance(e, TensorExpr):
        raise TypeError("covariant_differentiate expects a normalized TensorExpr")
    if direction in e.variables():
        raise ValueError(f"direction {direction!r} already occurs in the expression")
    out = TensorExpr.zero()
    for (fs, a), p in e.terms:
        for i, fac in enumerate(fs):
            dfac = _d_factor(fac, direction)
            if dfac.is_zero:
                continue
            rest = fs[:i] + fs[i + 1:]
            base = TensorExpr.from_dict({(rest, a): p})
            out = out + base.times(dfac)
        datom = _d_atom(a, direction)
        if not datom.is_zero:
            out = out + datom.times(ScalarExpr.from_dict({fs: p}))
    return out


# ---------------------------------------------------------------------------
# substitution and composition
# ---------------------------------------------------------------------------

def _mapped(mapping: dict[str, Atom], name: str) -> TensorExpr:
    return TensorExpr.atom(mapping.get(name, ("var", name)))


def substitute(e: TensorExpr, mapping: dict[str, Atom]) -> TensorExpr:
    """Simultaneously replace variables by atoms, re-canonicalizing."""
    out = TensorExpr.zero()
    for (fs, a), p in e.terms:
        scalar = ScalarExpr.from_poly(p)
        for fac in fs:
            if fac[0] == "dot":
                piece = s_dot(_mapped(mapping, fac[1]), _mapped(mapping, fac[2]))
            elif fac[0] == "phidot":
                piece = s_dot(_mapped(mapping, fac[1]),
                              v_phi(_mapped(mapping, fac[2])))
            else:
                piece = s_eta(_mapped(mapping, fac[1]))
            scalar = scalar * piece
            if scalar.is_zero:
                break
        if scalar.is_zero:
            continue
        if a[0] == "var":
            vec = _mapped(mapping, a[1])
        elif a[0] == "phi":
            vec = v_phi(_mapped(mapping, a[1]))
        else:
            vec = TensorExpr.atom(XI_ATOM)
        out = out + vec.times(scalar)
    return out


def rename(e: TensorExpr, mapping: dict[str, str]) -> TensorExpr:
    return substitute(e, {k: ("var", v) for k, v in mapping.items()})


def compose_bilinear(U: TensorExpr, first: str, inner: TensorExpr) -> TensorExpr:
    """U(first, inner) for a bilinear U given in slots (X, Y)."""
    out = TensorExpr.zero()
    for (fs, a), p in inner.terms:
        piece = substitute(U, {"X": ("var", first), "Y": a})
        out = out + piece.times(ScalarExpr.from_dict({fs: p}))
    return out


# ---------------------------------------------------------------------------
# connection data: difference tensors and stated curvature formulas
# ---------------------------------------------------------------------------

def difference_tensor(kind: ConnectionKind) -> TensorExpr:
    """U(X, Y) = (modified connection - Levi-Civita), slots named X, Y."""
    X, Y = TensorExpr.var("X"), TensorExpr.var("Y")
    xi = TensorExpr.atom(XI_ATOM)
    if kind is ConnectionKind.LEVI_CIVITA:
        return TensorExpr.zero()
    if kind is ConnectionKind.SEMI_SYM_METRIC:
        return X.times(s_eta(Y)) - xi.times(s_dot(X, Y))
    if kind is ConnectionKind.SEMI_SYM_NON_METRIC:
        return X.times(s_eta(Y))
    svk = (v_phi(X).times(s_eta(Y))
           - xi.times(s_dot(v_phi(X), Y))).scaled(P_LAM)
    if kind is ConnectionKind.SCHOUTEN_VAN_KAMPEN:
        return svk
    if kind is ConnectionKind.TANAKA_WEBSTER:
        return v_phi(Y).times(s_eta(X)) + svk
    raise ValueError(f"unknown connection kind: {kind!r}")


def _num(v) -> RNum:
    return RNum(Fraction(v))


def _sum(*parts: Raw) -> RSum:
    return RSum(tuple(parts))


def _neg(raw: Raw) -> Raw:
    return RScale(_num(-1), raw)


def _scale(c: RScalar, raw: Raw) -> Raw:
    return RScale(c, raw)


_F1, _F2, _F3 = RSym("f1"), RSym("f2"), RSym("f3")
_LAM = RSSum((_F1, RSProd((_num(-1), _F3))))
_LAM2 = RSProd((_LAM, _LAM))


def _brackets() -> tuple[Raw, Raw, Raw]:
    """The three recurring brackets of every stated formula."""
    X, Y, Z = RVar("X"), RVar("Y"), RVar("Z")
    metric = _sum(_scale(RDot(Y, Z), X), _neg(_scale(RDot(X, Z), Y)))
    phi = _sum(_scale(RDot(X, RPhi(Z)), RPhi(Y)),
               _neg(_scale(RDot(Y, RPhi(Z)), RPhi(X))),
               _scale(RSProd((_num(2), RDot(X, RPhi(Y)))), RPhi(Z)))
    eta = _sum(_scale(RSProd((REta(X), REta(Z))), Y),
               _neg(_scale(RSProd((REta(Y), REta(Z))), X)),
               _scale(RSProd((RDot(X, Z), REta(Y))), RXi()),
               _neg(_scale(RSProd((RDot(Y, Z), REta(X))), RXi())))
    return metric, phi, eta


def curvature_formula(kind: ConnectionKind) -> Raw:
    """The stated closed-form curvature, transcribed verbatim as a raw tree.

    Top-level parts are the coefficient groups of the source formula.
    """
    X, Y, Z = RVar("X"), RVar("Y"), RVar("Z")
    metric, phi, eta = _brackets()
    if kind is ConnectionKind.LEVI_CIVITA:
        return _sum(_scale(_F1, metric), _scale(_F2, phi), _scale(_F3, eta))
    if kind is ConnectionKind.SEMI_SYM_METRIC:
        mixed = _sum(_scale(RDot(X, RPhi(Z)), Y),
                     _neg(_scale(RDot(Y, RPhi(Z)), X)),
                     _scale(RDot(Y, Z), RPhi(X)),
                     _neg(_scale(RDot(X, Z), RPhi(Y))))
        return _sum(_scale(RSSum((_F1, _num(-1))), metric),
                    _scale(_F2, phi),
                    _scale(RSSum((_F3, _num(-1))), eta),
                    _scale(_LAM, mixed))
    if kind is ConnectionKind.SEMI_SYM_NON_METRIC:
        mixed = _sum(_scale(RDot(X, RPhi(Z)), Y),
                     _neg(_scale(RDot(Y, RPhi(Z)), X)))
        reeb = _sum(_scale(RSProd((REta(Y), REta(Z))), X),
                    _neg(_scale(RSProd((REta(X), REta(Z))), Y)))
        return _sum(_scale(_F1, metric), _scale(_F2, phi), _scale(_F3, eta),
                    _scale(_LAM, mixed), reeb)
    twist = _sum(_scale(RDot(X, RPhi(Z)), RPhi(Y)),
                 _neg(_scale(RDot(Y, RPhi(Z)), RPhi(X))))
    if kind is ConnectionKind.SCHOUTEN_VAN_KAMPEN:
        return _sum(_scale(_F1, metric), _scale(_F2, phi),
                    _scale(RSSum((_F3, _LAM2)), eta),
                    _scale(_LAM2, twist))
    if kind is ConnectionKind.TANAKA_WEBSTER:
        return _sum(_scale(_F1, metric), _scale(_F2, phi),
                    _scale(RSSum((_F3, _LAM2)), eta),
                    _scale(_LAM2, twist),
                    _scale(RSProd((_num(2), _LAM, RDot(X, RPhi(Y)))), RPhi(Z)))
    raise ValueError(f"unknown connection kind: {kind!r}")


def curvature_from_difference(U: TensorExpr) -> TensorExpr:
    """Derive a modified curvature from its difference tensor U(X, Y).

    For a torsion-free base connection and U = (modified - base),

        R~(X, Y)Z = R(X, Y)Z + (D_X U)(Y, Z) - (D_Y U)(X, Z)
                  + U(X, U(Y, Z)) - U(Y, U(X, Z))

    with all structure derivatives supplied by ``covariant_differentiate``.
    U = 0 returns the normalized base curvature.
    """
    base = normalize(curvature_formula(ConnectionKind.LEVI_CIVITA))
    if U.is_zero:
        return base
    U_YZ = substitute(U, {"X": ("var", "Y"), "Y": ("var", "Z")})
    U_XZ = substitute(U, {"Y": ("var", "Z")})
    d_x = covariant_differentiate(U_YZ, "X")
    d_y = covariant_differentiate(U_XZ, "Y")
    quad_x = compose_bilinear(U, "X", U_YZ)
    quad_y = compose_bilinear(U, "Y", U_XZ)
    return normalize(base + d_x - d_y + quad_x - quad_y)


def expr_equal(a: Union[Raw, TensorExpr], b: Union[Raw, TensorExpr]
               ) -> tuple[bool, TensorExpr]:
    """Structural equality after normalization; returns (equal, difference)."""
    diff = normalize(a) - normalize(b)
    return diff.is_zero, diff


# ---------------------------------------------------------------------------
# numeric evaluation
# ---------------------------------------------------------------------------

def _eval_factor(fac: Factor, space: AmbientSpace,
                 assignment: dict[str, np.ndarray]) -> float:
    if fac[0] == "dot":
        return space.inner(assignment[fac[1]], assignment[fac[2]])
    if fac[0] == "phidot":
        return space.inner(assignment[fac[1]], space.phi @ assignment[fac[2]])
    return space.eta_of(assignment[fac[1]])


def evaluate(e: Union[Raw, TensorExpr], space: AmbientSpace,
             coeffs: FormCoefficients,
             assignment: dict[str, np.ndarray]) -> np.ndarray:
    """Evaluate a vector expression at a point of the model."""
    if isinstance(e, TensorExpr):
        out = np.zeros(space.d)
        for (fs, a), p in e.terms:
            weight = p.evaluate(coeffs)
            for fac in fs:
                weight *= _eval_factor(fac, space, assignment)
            if a[0] == "var":
                vec = assignment[a[1]]
            elif a[0] == "phi":
                vec = space.phi @ assignment[a[1]]
            else:
                vec = space.xi
            out = out + weight * vec
        return out
    return _eval_raw_vector(e, space, coeffs, assignment)


def _eval_raw_vector(raw: Raw, space: AmbientSpace, coeffs: FormCoefficients,
                     assignment: dict[str, np.ndarray]) -> np.ndarray:
    if isinstance(raw, RVar):
        return assignment[raw.name]
    if isinstance(raw, RXi):
        return np.array(space.xi, dtype=float)
    if isinstance(raw, RBasis):
        if not 1 <= raw.index <= space.d:
            raise ValueError(f"basis index out of range: e{raw.index} in dimension {space.d}")
        v = np.zeros(space.d)
        v[raw.index - 1] = 1.0
        return v
    if isinstance(raw, RPhi):
        return space.phi @ _eval_raw_vector(raw.arg, space, coeffs, assignment)
    if isinstance(raw, RSum):
        out = np.zeros(space.d)
        for p in raw.parts:
            out = out + _eval_raw_vector(p, space, coeffs, assignment)
        return out
    if isinstance(raw, RScale):
        return (_eval_raw_scalar(raw.coeff, space, coeffs, assignment)
                * _eval_raw_vector(raw.arg, space, coeffs, assignment))
    raise TypeError(f"not a vector node: {raw!r}")


def evaluate_scalar(s: RScalar, space: AmbientSpace, coeffs: FormCoefficients,
                    assignment: dict[str, np.ndarray]) -> float:
    """Evaluate a scalar expression at a point of the model."""
    return _eval_raw_scalar(s, space, coeffs, assignment)


def _eval_raw_scalar(s: RScalar, space: AmbientSpace, coeffs: FormCoefficients,
                     assignment: dict[str, np.ndarray]) -> float:
    if isinstance(s, RNum):
        return float(s.value)
    if isinstance(s, RSym):
        return {"f1": coeffs.f1, "f2": coeffs.f2, "f3": coeffs.f3}[s.name]
    if isinstance(s, RDot):
        return space.inner(_eval_raw_vector(s.a, space, coeffs, assignment),
                           _eval_raw_vector(s.b, space, coeffs, assignment))
    if isinstance(s, REta):
        return space.eta_of(_eval_raw_vector(s.a, space, coeffs, assignment))
    if isinstance(s, RSSum):
        return sum(_eval_raw_scalar(p, space, coeffs, assignment) for p in s.parts)
    if isinstance(s, RSProd):
        out = 1.0
        for p in s.parts:
            out *= _eval_raw_scalar(p, space, coeffs, assignment)
        return out
    raise TypeError(f"not a scalar node: {s!r}")


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def _factor_text(fac: Factor) -> str:
    if fac[0] == "dot":
        return f"g({fac[1]},{fac[2]})"
    if fac[0] == "phidot":
        return f"g({fac[1]},phi({fac[2]}))"
    return f"eta({fac[1]})"


def _atom_text(a: Atom) -> str:
    if a[0] == "var":
        return a[1]
    if a[0] == "phi":
        return f"phi({a[1]})"
    return "xi"


def serialize(e: TensorExpr) -> str:
    """Deterministic text form, round-trippable through the harness parser."""
    if e.is_zero:
        return "0"
    parts = []
    for (fs, a), p in e.terms:
        bits = [f"({p.text()})"]
        bits.extend(_factor_text(fac) for fac in fs)
        bits.append(_atom_text(a))
        parts.append("*".join(bits))
    return " + ".join(parts)
