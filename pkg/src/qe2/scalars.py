"""Exact coefficient arithmetic for the verification engine.

A :class:`Scalar` is a rational function in a declared tuple of formal
parameters (``omega``, ``k``, ``q``, ...) with Gaussian-rational
coefficients.  Everything is exact: coefficients are pairs of arbitrary
precision rationals, and fractions of polynomials are kept in a canonical
reduced form so that equality of scalars is plain structural equality.

Canonical form of a fraction num/den:

* num is the zero polynomial iff the scalar is zero (then den is 1);
* num and den have no common polynomial factor (multivariate gcd via a
  primitive PRS);
* a monomial denominator carries coefficient 1 (the coefficient is folded
  into the numerator); otherwise den has Gaussian-integer coefficients
  with unit content and its lex-leading coefficient lies in the half-open
  quadrant ``re > 0, im >= 0``.  This realizes "leading coefficient of the
  denominator has positive real part, ties broken by positive imaginary
  part" with a unique representative among the four unit rotations.

Each parameter carries a conjugation rule: ``fixed`` parameters are real
under the star (k, q), ``negated`` ones purely imaginary (omega).  The
rule is declared, never inferred; the nonstandard presets declare omega
negated because that is the unique choice making the star an
antihomomorphism on the quantum commutation relations.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd as _igcd
from typing import Iterable, Mapping

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as _Q


class ScalarError(ArithmeticError):
    pass


class DegenerateScalar(ScalarError):
    """Division by the zero scalar."""


class UnboundParameter(ScalarError):
    """A parameter occurring in the scalar has no assigned value."""


class PoleAtPoint(ScalarError):
    """The denominator vanishes at the evaluation point."""


class GaussRational:
    """An element of Q(i), stored as an exact (re, im) pair."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _Q(re))
        object.__setattr__(self, "im", _Q(im))

    def __setattr__(self, *a):  # immutable
        raise AttributeError("GaussRational is immutable")

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def is_one(self):
        return self.re == 1 and self.im == 0

    def __add__(self, other):
        other = _as_gauss(other)
        return GaussRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_gauss(other)
        return GaussRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return _as_gauss(other).__sub__(self)

    def __neg__(self):
        return GaussRational(-self.re, -self.im)

    def __mul__(self, other):
        other = _as_gauss(other)
        return GaussRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_gauss(other)
        n2 = other.re * other.re + other.im * other.im
        if n2 == 0:
            raise DegenerateScalar("division by zero in Q(i)")
        return GaussRational(
            (self.re * other.re + self.im * other.im) / n2,
            (self.im * other.re - self.re * other.im) / n2,
        )

    def __rtruediv__(self, other):
        return _as_gauss(other).__truediv__(self)

    def inverse(self):
        return GaussRational(1) / self

    def conjugate(self):
        return GaussRational(self.re, -self.im)

    def __pow__(self, n: int):
        out = GaussRational(1)
        base = self if n >= 0 else self.inverse()
        for _ in range(abs(n)):
            out = out * base
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            return self.re == other and self.im == 0
        if not isinstance(other, GaussRational):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussRational({self.re!s}, {self.im!s})"

    def __str__(self):
        return self.text()

    def text(self):
        """Readable form: ``2``, ``i``, ``-3/2*i``, ``1+2*i``."""
        re, im = self.re, self.im
        if im == 0:
            return str(re)
        if im == 1:
            imt = "i"
        elif im == -1:
            imt = "-i"
        else:
            imt = f"{im}*i"
        if re == 0:
            return imt
        sep = "" if imt.startswith("-") else "+"
        return f"{re}{sep}{imt}"


def _as_gauss(x) -> GaussRational:
    if isinstance(x, GaussRational):
        return x
    if isinstance(x, int):
        return GaussRational(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to GaussRational")


GAUSS_ZERO = GaussRational(0)
GAUSS_ONE = GaussRational(1)
GAUSS_I = GaussRational(0, 1)


# ---------------------------------------------------------------------------
# Sparse multivariate polynomials: {exponent tuple -> GaussRational}.
# Exponents are >= 0; fractions of these make up Scalar.  Plain dicts keep
# the inner loops cheap.
# ---------------------------------------------------------------------------


def _padd(p, q):
    r = dict(p)
    for e, c in q.items():
        nc = r.get(e, GAUSS_ZERO) + c
        if nc:
            r[e] = nc
        else:
            r.pop(e, None)
    return r


def _pneg(p):
    return {e: -c for e, c in p.items()}


def _pscale(p, c):
    if not c:
        return {}
    return {e: cc * c for e, cc in p.items()}


def _pmul(p, q):
    r = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            nc = r.get(e, GAUSS_ZERO) + c1 * c2
            if nc:
                r[e] = nc
            else:
                r.pop(e, None)
    return r


def _pshift(p, shift):
    r = {}
    for e, c in p.items():
        ne = tuple(a + b for a, b in zip(e, shift))
        if any(x < 0 for x in ne):
            raise ValueError("negative exponent in polynomial shift")
        r[ne] = c
    return r


def _plead(p):
    return max(p)  # tuple comparison = lex in the declared variable order


def _pdivexact(f, g):
    """Exact polynomial division f / g, or None when g does not divide f."""
    if not g:
        raise ZeroDivisionError
    if not f:
        return {}
    gl = _plead(g)
    gc = g[gl]
    q = {}
    r = dict(f)
    while r:
        rl = _plead(r)
        diff = tuple(a - b for a, b in zip(rl, gl))
        if any(x < 0 for x in diff):
            return None
        c = r[rl] / gc
        q[diff] = c
        for e, cc in g.items():
            ne = tuple(a + b for a, b in zip(e, diff))
            nc = r.get(ne, GAUSS_ZERO) - cc * c
            if nc:
                r[ne] = nc
            else:
                r.pop(ne, None)
    return q


def _pvars(p):
    out = set()
    for e in p:
        for j, x in enumerate(e):
            if x:
                out.add(j)
    return out


def _by_var(p, v):
    """View p as univariate in variable v with polynomial coefficients
    (coefficient keys keep the full exponent tuple with the v slot zeroed)."""
    coeffs = {}
    for e, c in p.items():
        d = e[v]
        e0 = e[:v] + (0,) + e[v + 1 :]
        coeffs.setdefault(d, {})[e0] = c
    return coeffs


def _from_var(coeffs, v):
    p = {}
    for d, sub in coeffs.items():
        for e, c in sub.items():
            p[e[:v] + (d,) + e[v + 1 :]] = c
    return p


def _uni_prem(a, b):
    """Sparse pseudo-remainder loop on {deg: coeff-poly} views.  The result
    is the remainder up to factors of lead(b) in the content, which the
    primitive PRS strips anyway."""
    db = max(b)
    lb = b[db]
    r = {d: dict(s) for d, s in a.items()}
    while r:
        dr = max(r)
        if dr < db:
            break
        lr = r.pop(dr)
        nr = {}
        for dd, sub in r.items():
            m = _pmul(sub, lb)
            if m:
                nr[dd] = m
        for dd, sub in b.items():
            if dd == db:
                continue
            m = _pmul(sub, lr)
            if not m:
                continue
            tgt = dd + dr - db
            merged = _padd(nr.get(tgt, {}), _pneg(m))
            if merged:
                nr[tgt] = merged
            else:
                nr.pop(tgt, None)
        r = nr
    return r


def _pgcd(f, g):
    """Multivariate gcd over Q(i) via a primitive PRS, unit-normalized for
    determinism (gcds are only defined up to units)."""
    if not f:
        return _pnormal_unit(g)
    if not g:
        return _pnormal_unit(f)
    vs = _pvars(f) | _pvars(g)
    if not vs:
        n = len(next(iter(f)))
        return {(0,) * n: GAUSS_ONE}
    v = min(vs)
    fc = _by_var(f, v)
    gc = _by_var(g, v)
    cont_f = _coeff_gcd(fc.values())
    cont_g = _coeff_gcd(gc.values())
    cont = _pgcd(cont_f, cont_g)
    a = {d: _pdivexact(sub, cont_f) for d, sub in fc.items()}
    b = {d: _pdivexact(sub, cont_g) for d, sub in gc.items()}
    if max(a) < max(b):
        a, b = b, a
    while b:
        r = _uni_prem(a, b)
        if r:
            rc = _coeff_gcd(r.values())
            r = {d: _pdivexact(sub, rc) for d, sub in r.items()}
        a, b = b, r
    gg = _from_var(a, v)
    gg = _pdivexact(gg, _coeff_gcd(_by_var(gg, v).values()))
    return _pnormal_unit(_pmul(cont, gg))


def _coeff_gcd(subs):
    g = {}
    for s in subs:
        g = _pgcd(g, s)
    return g


def _pnormal_unit(p):
    """Rotate by a unit of Z[i] so the lex-leading coefficient sits in the
    half-open quadrant re > 0, im >= 0."""
    if not p:
        return dict(p)
    u = _canonical_unit(p[_plead(p)])
    if u.is_one():
        return dict(p)
    return _pscale(p, u)


def _canonical_unit(c: GaussRational) -> GaussRational:
    for u in (GAUSS_ONE, GAUSS_I, -GAUSS_ONE, -GAUSS_I):
        t = c * u
        if t.re > 0 and t.im >= 0:
            return u
    raise DegenerateScalar("zero coefficient has no canonical unit")


def _prat_content(p):
    """Positive rational r such that r*p has Gaussian-integer coefficients
    with coprime rational parts."""
    num_g = 0
    den_l = 1
    for c in p.values():
        for part in (c.re, c.im):
            if part == 0:
                continue
            num_g = _igcd(num_g, abs(int(part.numerator)))
            d = int(part.denominator)
            den_l = den_l * d // _igcd(den_l, d)
    if num_g == 0:
        num_g = 1
    return _Q(den_l, num_g)


def _iround(p, q):
    """Nearest integer to p/q for q > 0 (half rounds up)."""
    return (2 * p + q) // (2 * q)


def _zmod(a, b):
    ax, ay = a
    bx, by = b
    n = bx * bx + by * by
    qx = _iround(ax * bx + ay * by, n)
    qy = _iround(ay * bx - ax * by, n)
    return (ax - (qx * bx - qy * by), ay - (qx * by + qy * bx))


def _zgauss_content(p) -> GaussRational:
    """Gcd over Z[i] of the (integral) coefficients of p."""
    g = (0, 0)
    for c in p.values():
        b = (int(c.re), int(c.im))
        while b != (0, 0):
            g, b = b, _zmod(g, b)
        if g == (1, 0):
            break
    return GaussRational(g[0], g[1])


# ---------------------------------------------------------------------------
# Parameters, contexts, scalars
# ---------------------------------------------------------------------------

STAR_FIXED = "fixed"
STAR_NEGATED = "negated"


@dataclass(frozen=True)
class Parameter:
    """A formal parameter of the coefficient field.

    star_rule 'fixed' means p* = p; 'negated' means p* = -p.
    """

    name: str
    star_rule: str = STAR_FIXED

    def __post_init__(self):
        if self.star_rule not in (STAR_FIXED, STAR_NEGATED):
            raise ValueError(f"unknown star rule {self.star_rule!r}")


class ScalarContext:
    """The coefficient field Q(i)(p1, ..., pn) for a declared parameter
    tuple.  Scalars from different contexts never mix."""

    def __init__(self, parameters: Iterable[Parameter] = ()):
        self.parameters = tuple(parameters)
        names = [p.name for p in self.parameters]
        if len(set(names)) != len(names):
            raise ValueError("duplicate parameter names")
        self.names = tuple(names)
        self._index = {n: j for j, n in enumerate(names)}
        self.nvars = len(names)
        self._zero_exp = (0,) * self.nvars
        self._den_one = {self._zero_exp: GAUSS_ONE}
        self.zero = Scalar(self, {}, dict(self._den_one), _raw=True)
        self.one = self.from_gauss(GAUSS_ONE)
        self.i = self.from_gauss(GAUSS_I)

    def from_gauss(self, g: GaussRational) -> "Scalar":
        if not g:
            return self.zero
        return Scalar(self, {self._zero_exp: g}, dict(self._den_one), _raw=True)

    def from_int(self, n: int) -> "Scalar":
        return self.from_gauss(GaussRational(n))

    def param(self, name: str) -> "Scalar":
        j = self._index.get(name)
        if j is None:
            raise UnboundParameter(f"parameter {name!r} not declared in this context")
        e = tuple(1 if jj == j else 0 for jj in range(self.nvars))
        return Scalar(self, {e: GAUSS_ONE}, dict(self._den_one), _raw=True)

    def has_param(self, name: str) -> bool:
        return name in self._index

    def star_sign(self, j: int) -> int:
        return -1 if self.parameters[j].star_rule == STAR_NEGATED else 1

    def __eq__(self, other):
        return isinstance(other, ScalarContext) and self.parameters == other.parameters

    def __hash__(self):
        return hash(self.parameters)

    def __repr__(self):
        return f"ScalarContext({', '.join(self.names) or 'Q(i)'})"


class Scalar:
    """A canonical-form rational function over a :class:`ScalarContext`."""

    __slots__ = ("ctx", "num", "den", "_h")

    def __init__(self, ctx: ScalarContext, num, den, _raw=False):
        self.ctx = ctx
        if _raw:
            self.num = num
            self.den = den
        else:
            self.num, self.den = _reduce(num, den, ctx.nvars)
        self._h = None

    def is_zero(self):
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def is_one(self):
        return self.num == self.ctx._den_one and self.den == self.ctx._den_one

    def is_polynomial(self):
        return self.den == self.ctx._den_one

    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                raise ScalarError("mixing scalars from different contexts")
            return other
        if isinstance(other, int):
            return self.ctx.from_int(other)
        if isinstance(other, GaussRational):
            return self.ctx.from_gauss(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return Scalar(self.ctx, _padd(self.num, o.num), self.den)
        n = _padd(_pmul(self.num, o.den), _pmul(o.num, self.den))
        return Scalar(self.ctx, n, _pmul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.ctx, _pneg(self.num), dict(self.den), _raw=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.__add__(-o)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self.num or not o.num:
            return self.ctx.zero
        return Scalar(self.ctx, _pmul(self.num, o.num), _pmul(self.den, o.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.num:
            raise DegenerateScalar("division by zero scalar")
        if not self.num:
            return self.ctx.zero
        return Scalar(self.ctx, _pmul(self.num, o.den), _pmul(self.den, o.num))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return o.__truediv__(self)

    def inverse(self):
        return self.ctx.one / self

    def __pow__(self, n: int):
        if n == 0:
            return self.ctx.one
        base = self if n > 0 else self.inverse()
        out = base
        for _ in range(abs(n) - 1):
            out = out * base
        return out

    def conjugate(self):
        """i -> -i on coefficients; each parameter mapped per its star rule."""
        return Scalar(self.ctx, self._conj_poly(self.num), self._conj_poly(self.den))

    def _conj_poly(self, p):
        out = {}
        for e, c in p.items():
            s = 1
            for j, x in enumerate(e):
                if x and self.ctx.star_sign(j) < 0 and x % 2:
                    s = -s
            cc = c.conjugate()
            out[e] = cc if s > 0 else -cc
        return out

    def evaluate(self, assignment: Mapping[str, GaussRational]) -> GaussRational:
        """Evaluate at a point {parameter name: GaussRational}.

        Raises UnboundParameter for a parameter occurring in the scalar
        without a value, PoleAtPoint when the denominator vanishes.
        """
        vals = {}
        for j, name in enumerate(self.ctx.names):
            if name in assignment:
                v = assignment[name]
                vals[j] = v if isinstance(v, GaussRational) else GaussRational(v)
        for p in (self.num, self.den):
            for e in p:
                for j, x in enumerate(e):
                    if x and j not in vals:
                        raise UnboundParameter(
                            f"parameter {self.ctx.names[j]!r} has no value"
                        )
        den = _peval(self.den, vals)
        if not den:
            raise PoleAtPoint("denominator vanishes at the point")
        return _peval(self.num, vals) / den

    def __eq__(self, other):
        if isinstance(other, (int, GaussRational)):
            other = self._coerce(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._h is None:
            self._h = hash(
                (frozenset(self.num.items()), frozenset(self.den.items()))
            )
        return self._h

    def __repr__(self):
        return f"Scalar({self.text()})"

    def __str__(self):
        return self.text()

    def lead_is_negative(self):
        """True when the lex-leading numerator coefficient points into the
        lower/left half plane; used to extract '-' when printing."""
        if not self.num:
            return False
        c = self.num[_plead(self.num)]
        return c.re < 0 or (c.re == 0 and c.im < 0)

    def text(self) -> str:
        """Canonical text.  Polynomial scalars and monomial denominators
        render inside the expression grammar; other denominators use a
        (num)/(den) form that appears in reports only."""
        if not self.num:
            return "0"
        num = _poly_text(self.num, self.ctx.names)
        if self.is_polynomial():
            return num
        if len(self.den) == 1:
            e = next(iter(self.den))
            inv = [f"{self.ctx.names[j]}^-{x}" for j, x in enumerate(e) if x]
            numt = num if len(self.num) == 1 and not num.startswith("-") else f"({num})"
            return "*".join([numt] + inv)
        dent = _poly_text(self.den, self.ctx.names)
        return f"({num})/({dent})"


def _peval(p, vals):
    total = GAUSS_ZERO
    for e, c in p.items():
        term = c
        for j, x in enumerate(e):
            if x:
                term = term * (vals[j] ** x)
        total = total + term
    return total


def _reduce(num, den, nvars):
    """Bring num/den to the canonical form described in the module docs."""
    if not den:
        raise DegenerateScalar("zero denominator")
    one = {(0,) * nvars: GAUSS_ONE}
    if not num:
        return {}, one
    # strip the common monomial factor
    mins = [
        min(min(e[j] for e in num), min(e[j] for e in den)) for j in range(nvars)
    ]
    if any(mins):
        shift = tuple(-m for m in mins)
        num = _pshift(num, shift)
        den = _pshift(den, shift)
    if len(den) > 1:
        g = _pgcd(num, den)
        if len(g) > 1 or any(next(iter(g))):
            num = _pdivexact(num, g)
            den = _pdivexact(den, g)
    if len(den) == 1:
        # monomial denominator: carry coefficient 1
        e = next(iter(den))
        c = den[e]
        if not c.is_one():
            num = _pscale(num, c.inverse())
            den = {e: GAUSS_ONE}
        if not any(e):
            return num, one
        return num, den
    # general denominator: integral, Z[i]-content a unit, leading coeff in
    # the canonical sector
    r = _prat_content(den)
    if r != 1:
        rs = GaussRational(r)
        num = _pscale(num, rs)
        den = _pscale(den, rs)
    zc = _zgauss_content(den)
    if not zc.is_one():
        zi = zc.inverse()
        num = _pscale(num, zi)
        den = _pscale(den, zi)
    u = _canonical_unit(den[_plead(den)])
    if not u.is_one():
        num = _pscale(num, u)
        den = _pscale(den, u)
    return num, den


def _poly_text(p, names) -> str:
    terms = []
    for e in sorted(p, reverse=True):
        c = p[e]
        factors = [
            f"{names[j]}^{x}" if x > 1 else names[j] for j, x in enumerate(e) if x
        ]
        neg = c.re < 0 or (c.re == 0 and c.im < 0)
        cc = -c if neg else c
        if not factors:
            body = cc.text() if (cc.im == 0 or cc.re == 0) else f"({cc.text()})"
        elif cc.is_one():
            body = "*".join(factors)
        else:
            ct = cc.text()
            if cc.im != 0 and cc.re != 0:
                ct = f"({ct})"
            body = "*".join([ct] + factors)
        terms.append(("-" if neg else "+", body))
    sign0, body0 = terms[0]
    out = body0 if sign0 == "+" else f"-{body0}"
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out
