"""Iterated skew-polynomial (Ore tower) rewriting kernel.

An :class:`OreTower` presents an algebra as an iterated extension

    K[g0^&plusmn;] [g1; sigma1, delta1] [g2; sigma2, delta2] ...

with one generator per level.  Level ``L`` commutation data consists of an
algebra endomorphism ``sigma`` and a ``sigma``-twisted derivation
``delta`` of the subalgebra below ``L``, recorded on the lower
generators; the engine derives every swap rule

    g_L * x = sigma(x) * g_L + delta(x)

from them, including the rules for inverse powers of invertible lower
generators via the sandwich identities

    sigma(x^-1) = sigma(x)^-1        delta(x^-1) = -sigma(x)^-1 delta(x) x^-1.

Normal forms are linear combinations of normally ordered monomials
``g0^e0 g1^e1 ... gk^ek`` (integer exponents on invertible generators,
naturals otherwise).  Rewriting terminates because every swap moves a
higher-level letter right past a lower one while the inserted sigma- and
delta-images only involve letters of strictly smaller level (delta may
also reuse the level itself, which shortens the tail instead); this is
the (level, degree)-lexicographic measure underlying the PBW property of
Ore extensions.

Confluence is certified by :func:`diamond_check`: every descending
length-3 word (and its inverse-exponent variants) is reduced along its
two overlap paths, which for Ore-form rules is exactly the endomorphism /
twisted-derivation compatibility of each level with the relations below
it.  Towers failing the check are rejected at load time.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from . import exprio
from .scalars import Parameter, Scalar, ScalarContext


class TowerError(ValueError):
    pass


class NonConfluentTower(TowerError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class Generator:
    name: str
    level: int
    invertible: bool = False


class NCPoly:
    """Normal-form element: a finite map {monomial -> Scalar} over a tower.

    Monomials are exponent tuples indexed by level.  No zero coefficients
    are stored; equality is map equality.
    """

    __slots__ = ("tower", "terms")

    def __init__(self, tower: "OreTower", terms: dict):
        self.tower = tower
        self.terms = terms

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, tower):
        return cls(tower, {})

    @classmethod
    def one(cls, tower):
        return cls(tower, {tower.unit_mono: tower.context.one})

    @classmethod
    def constant(cls, tower, scalar: Scalar):
        if not scalar:
            return cls.zero(tower)
        return cls(tower, {tower.unit_mono: scalar})

    @classmethod
    def generator(cls, tower, idx: int, exp: int = 1):
        if exp == 0:
            return cls.one(tower)
        g = tower.generators[idx]
        if exp < 0 and not g.invertible:
            raise TowerError(f"negative power of non-invertible generator {g.name}")
        mono = tuple(exp if j == idx else 0 for j in range(len(tower.generators)))
        return cls(tower, {mono: tower.context.one})

    @classmethod
    def from_terms(cls, tower, items):
        terms = {}
        for mono, coeff in items:
            if not coeff:
                continue
            c = terms.get(mono)
            c = coeff if c is None else c + coeff
            if c:
                terms[mono] = c
            else:
                terms.pop(mono, None)
        return cls(tower, terms)

    # -- predicates ----------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_one(self):
        return self.as_scalar() is not None and self.as_scalar().is_one()

    def as_scalar(self) -> Optional[Scalar]:
        """The coefficient when the support is at most the unit monomial."""
        if not self.terms:
            return self.tower.context.zero
        if len(self.terms) == 1:
            mono, c = next(iter(self.terms.items()))
            if mono == self.tower.unit_mono:
                return c
        return None

    # -- ring operations --------------------------------------------------
    def _check(self, other):
        if other.tower is not self.tower:
            raise TowerError("mixing elements of different towers")

    def __add__(self, other):
        if isinstance(other, NCPoly):
            self._check(other)
            return NCPoly.from_terms(
                self.tower, list(self.terms.items()) + list(other.terms.items())
            )
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, NCPoly):
            return self + (-other)
        return NotImplemented

    def __neg__(self):
        return NCPoly(self.tower, {m: -c for m, c in self.terms.items()})

    def scale(self, s: Scalar) -> "NCPoly":
        if not s:
            return NCPoly.zero(self.tower)
        return NCPoly(self.tower, {m: c * s for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, NCPoly):
            self._check(other)
            return self.tower.mul(self, other)
        if isinstance(other, Scalar):
            return self.scale(other)
        if isinstance(other, int):
            return self.scale(self.tower.context.from_int(other))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (Scalar, int)):
            return self.__mul__(other)
        return NotImplemented

    def __pow__(self, n: int):
        if n == 0:
            return NCPoly.one(self.tower)
        if n < 0:
            inv = self.unit_inverse()
            return inv ** (-n)
        out = self
        for _ in range(n - 1):
            out = out * self
        return out

    def unit_inverse(self) -> "NCPoly":
        """Inverse of a single-term element supported on invertible
        generators; raises TowerError otherwise."""
        if len(self.terms) != 1:
            raise TowerError("only monomial elements can be inverted")
        mono, c = next(iter(self.terms.items()))
        gens = self.tower.generators
        for j, e in enumerate(mono):
            if e and not gens[j].invertible:
                raise TowerError(
                    f"cannot invert monomial containing {gens[j].name}"
                )
        word = [(j, -e) for j, e in reversed(list(enumerate(mono))) if e]
        inv = self.tower.word_to_poly(word).scale(c.inverse())
        if not (self * inv).is_one():
            raise TowerError("monomial inverse verification failed")
        return inv

    # -- inspection ---------------------------------------------------------
    def max_exponent(self, idx: int) -> int:
        return max((m[idx] for m in self.terms), default=0)

    def min_exponent(self, idx: int) -> int:
        return min((m[idx] for m in self.terms), default=0)

    def max_level(self) -> int:
        """Highest level occurring in the support (-1 for constants)."""
        lvl = -1
        for mono in self.terms:
            t = _top_level(mono)
            if t is not None and t > lvl:
                lvl = t
        return lvl

    def is_invertible_monomial(self) -> bool:
        if len(self.terms) != 1:
            return False
        mono = next(iter(self.terms))
        return all(
            e == 0 or self.tower.generators[j].invertible
            for j, e in enumerate(mono)
        )

    def coefficient(self, mono) -> Scalar:
        return self.terms.get(mono, self.tower.context.zero)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]))

    def __eq__(self, other):
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.tower is other.tower and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"NCPoly({exprio.format_canonical(self)})"

    def __str__(self):
        return exprio.format_canonical(self)


class OreTower:
    """Immutable-after-load presentation of an iterated Ore extension."""

    def __init__(self, name: str, context: ScalarContext, generators):
        self.name = name
        self.context = context
        self.generators = tuple(generators)
        for j, g in enumerate(self.generators):
            if g.level != j:
                raise TowerError("generator levels must be contiguous from 0")
        self._index = {g.name: j for j, g in enumerate(self.generators)}
        n = len(self.generators)
        self.unit_mono = (0,) * n
        # per level >= 1: {lower index -> NCPoly}
        self.sigma = [dict() for _ in range(n)]
        self.delta = [dict() for _ in range(n)]
        self.star_table: Optional[dict] = None
        self._sigma_inv_diag = [dict() for _ in range(n)]
        self.commutative = True
        # caches
        self._push = {}
        self._mono_mul = {}
        self._sigma_pow = {}
        self._delta_pow = {}
        self._sigma_hat = {}
        self._delta_hat = {}

    # -- structure access -------------------------------------------------
    def gen_index(self, name: str) -> Optional[int]:
        return self._index.get(name)

    def gen(self, name: str) -> NCPoly:
        idx = self._index.get(name)
        if idx is None:
            raise TowerError(f"unknown generator {name!r}")
        return NCPoly.generator(self, idx)

    def poly(self, text: str) -> NCPoly:
        """Parse and elaborate an expression in this tower."""
        out = exprio.elaborate_expr(exprio.parse_expr(text), self)
        if not isinstance(out, NCPoly):
            raise TowerError("expected an algebra element, got a tensor")
        return out

    @property
    def nlevels(self):
        return len(self.generators)

    # -- level data installation (used by load_tower) ----------------------
    def _set_level(self, L: int, sigma: dict, delta: dict):
        g = self.generators[L]
        for j, img in sigma.items():
            if img.max_level() >= L:
                raise TowerError(
                    f"sigma image of level {L} must live strictly below it"
                )
            if self.generators[j].invertible:
                if not img.is_invertible_monomial():
                    raise TowerError(
                        f"sigma({self.generators[j].name}) must be an invertible "
                        f"monomial multiple at level {L}"
                    )
        for j, img in delta.items():
            if img.max_level() > L:
                raise TowerError(
                    f"delta image of level {L} may not reference higher levels"
                )
        self.sigma[L] = dict(sigma)
        self.delta[L] = dict(delta)
        ident = all(
            sigma[j] == NCPoly.generator(self, j) for j in sigma
        ) and all(delta[j].is_zero() for j in delta)
        if not ident:
            self.commutative = False
        if g.invertible and L > 0:
            # left-inverse pushes for a non-base invertible generator are
            # only supported for a pure diagonal twist
            diag = {}
            for j, img in sigma.items():
                mono_c = _diagonal_coeff(img, j)
                if mono_c is None or delta[j]:
                    raise TowerError(
                        f"invertible generator {g.name} above the base requires "
                        "a diagonal sigma and zero delta"
                    )
                diag[j] = mono_c
            self._sigma_inv_diag[L] = diag

    # -- core rewriting ------------------------------------------------------
    def mul(self, p: NCPoly, q: NCPoly) -> NCPoly:
        if self.commutative:
            terms = {}
            for m1, c1 in p.terms.items():
                for m2, c2 in q.terms.items():
                    m = tuple(a + b for a, b in zip(m1, m2))
                    c = terms.get(m)
                    c = c1 * c2 if c is None else c + c1 * c2
                    if c:
                        terms[m] = c
                    else:
                        terms.pop(m, None)
            return NCPoly(self, terms)
        acc = {}
        for m1, c1 in p.terms.items():
            for m2, c2 in q.terms.items():
                c = c1 * c2
                if not c:
                    continue
                for mono, cc in self._mono_mul_terms(m1, m2):
                    v = acc.get(mono)
                    v = cc * c if v is None else v + cc * c
                    if v:
                        acc[mono] = v
                    else:
                        acc.pop(mono, None)
        return NCPoly(self, acc)

    def _mono_mul_terms(self, m1, m2):
        key = (m1, m2)
        hit = self._mono_mul.get(key)
        if hit is not None:
            return hit
        top1 = _top_level(m1)
        low2 = _low_level(m2)
        if top1 is None:
            out = ((m2, self.context.one),)
        elif low2 is None or top1 <= low2:
            mono = tuple(a + b for a, b in zip(m1, m2))
            out = ((mono, self.context.one),)
        else:
            poly = NCPoly(self, {m2: self.context.one})
            for L in range(len(m1) - 1, -1, -1):
                e = m1[L]
                if e:
                    poly = self._push_power(L, e, poly)
            out = tuple(poly.terms.items())
        self._mono_mul[key] = out
        return out

    def word_to_poly(self, word) -> NCPoly:
        """Normal form of a raw product word of (generator, exponent)."""
        out = NCPoly.one(self)
        for idx, e in reversed(list(word)):
            if isinstance(idx, str):
                j = self.gen_index(idx)
                if j is None:
                    raise TowerError(f"unknown generator {idx!r}")
                idx = j
            if e:
                out = self._push_power(idx, e, out)
        return out

    def _push_power(self, L: int, e: int, poly: NCPoly) -> NCPoly:
        sign = 1 if e > 0 else -1
        if sign < 0 and not self.generators[L].invertible:
            raise TowerError(
                f"negative power of non-invertible generator "
                f"{self.generators[L].name}"
            )
        for _ in range(abs(e)):
            acc = {}
            for mono, c in poly.terms.items():
                for m2, c2 in self._push_gen(L, sign, mono):
                    v = acc.get(m2)
                    nv = c * c2 if v is None else v + c * c2
                    if nv:
                        acc[m2] = nv
                    else:
                        acc.pop(m2, None)
            poly = NCPoly(self, acc)
        return poly

    def _push_gen(self, L: int, sign: int, mono):
        """g_L^sign * mono as a term tuple, normal-formed."""
        key = (L, sign, mono)
        hit = self._push.get(key)
        if hit is not None:
            return hit
        low = _low_level(mono)
        if low is None or low >= L:
            m = mono[:L] + (mono[L] + sign,) + mono[L + 1 :]
            out = ((m, self.context.one),)
            self._push[key] = out
            return out
        prefix = mono[:L] + (0,) * (len(mono) - L)
        suffix = (0,) * L + mono[L:]
        if sign > 0:
            shat = self._sigma_hat_poly(L, prefix)
            dhat = self._delta_hat_poly(L, prefix)
            acc = {}
            for m, c in shat.terms.items():
                nm = tuple(
                    a + b for a, b in zip(m[:L] + (m[L] + 1,) + m[L + 1 :], suffix)
                )
                acc[nm] = acc.get(nm, self.context.zero) + c
            for m, c in dhat.terms.items():
                nm = tuple(a + b for a, b in zip(m, suffix))
                v = acc.get(nm, self.context.zero) + c
                if v:
                    acc[nm] = v
                else:
                    acc.pop(nm, None)
            out = tuple((m, c) for m, c in acc.items() if c)
        else:
            diag = self._sigma_inv_diag[L]
            if not diag and any(prefix):
                raise TowerError(
                    f"inverse push of {self.generators[L].name} is unsupported"
                )
            coeff = self.context.one
            for j, e in enumerate(prefix):
                if e:
                    coeff = coeff * diag[j] ** (-e)
            m = mono[:L] + (mono[L] - 1,) + mono[L + 1 :]
            out = ((m, coeff),)
        self._push[key] = out
        return out

    def _sigma_img(self, L: int, j: int, e: int) -> NCPoly:
        """sigma_L(g_j^e), derived for negative e via sigma(x^-1)=sigma(x)^-1."""
        key = (L, j, e)
        hit = self._sigma_pow.get(key)
        if hit is not None:
            return hit
        base = self.sigma[L][j]
        if e >= 0:
            out = base ** e
        else:
            out = base.unit_inverse() ** (-e)
        self._sigma_pow[key] = out
        return out

    def _delta_img(self, L: int, j: int, e: int) -> NCPoly:
        """delta_L(g_j^e) via the twisted Leibniz rule; negative powers via
        delta(x^-1) = -sigma(x)^-1 delta(x) x^-1."""
        key = (L, j, e)
        hit = self._delta_pow.get(key)
        if hit is not None:
            return hit
        if e == 0:
            out = NCPoly.zero(self)
        elif e == 1:
            out = self.delta[L][j]
        elif e > 1:
            # delta(g^e) = sigma(g) delta(g^(e-1)) + delta(g) g^(e-1)
            g_pow = NCPoly.generator(self, j, e - 1)
            out = self._sigma_img(L, j, 1) * self._delta_img(L, j, e - 1) + (
                self._delta_img(L, j, 1) * g_pow
            )
        elif e == -1:
            ginv = NCPoly.generator(self, j, -1)
            out = -(self._sigma_img(L, j, -1) * self.delta[L][j] * ginv)
        else:
            # delta(g^e) = sigma(g^(e+1)) delta(g^-1) + delta(g^(e+1)) g^-1
            ginv = NCPoly.generator(self, j, -1)
            out = self._sigma_img(L, j, e + 1) * self._delta_img(L, j, -1) + (
                self._delta_img(L, j, e + 1) * ginv
            )
        self._delta_pow[key] = out
        return out

    def _sigma_hat_poly(self, L: int, prefix) -> NCPoly:
        key = (L, prefix)
        hit = self._sigma_hat.get(key)
        if hit is not None:
            return hit
        out = NCPoly.one(self)
        for j in range(L):
            e = prefix[j]
            if e:
                out = out * self._sigma_img(L, j, e)
        self._sigma_hat[key] = out
        return out

    def _delta_hat_poly(self, L: int, prefix) -> NCPoly:
        """delta_L extended to the prefix monomial by
        delta(xy) = sigma(x) delta(y) + delta(x) y."""
        key = (L, prefix)
        hit = self._delta_hat.get(key)
        if hit is not None:
            return hit
        j = _low_level(prefix)
        if j is None:
            out = NCPoly.zero(self)
        else:
            e = prefix[j]
            rest = prefix[:j] + (0,) + prefix[j + 1 :]
            if not any(rest):
                out = self._delta_img(L, j, e)
            else:
                out = self._sigma_img(L, j, e) * self._delta_hat_poly(L, rest) + (
                    self._delta_img(L, j, e) * self.tower_mono(rest)
                )
        self._delta_hat[key] = out
        return out

    def tower_mono(self, mono) -> NCPoly:
        return NCPoly(self, {mono: self.context.one})

    # -- derived rewrite rules (for reports and morphism checks) -----------
    def derived_rules(self):
        """Yield (word, normal form) for every g_hi^s * g_lo^t swap rule the
        tower induces, with s, t ranging over the allowed unit exponents."""
        rules = []
        n = self.nlevels
        for L in range(1, n):
            s_opts = [1] + ([-1] if self.generators[L].invertible else [])
            for j in range(L):
                t_opts = [1] + ([-1] if self.generators[j].invertible else [])
                for s in s_opts:
                    for t in t_opts:
                        word = ((L, s), (j, t))
                        rules.append((word, self.word_to_poly(word)))
        return rules

    def __repr__(self):
        gens = ",".join(g.name + ("~" if g.invertible else "") for g in self.generators)
        return f"OreTower({self.name}: {gens})"


def _top_level(mono):
    for j in range(len(mono) - 1, -1, -1):
        if mono[j]:
            return j
    return None


def _low_level(mono):
    for j, e in enumerate(mono):
        if e:
            return j
    return None


def _diagonal_coeff(img: NCPoly, j: int) -> Optional[Scalar]:
    """When img = c * g_j, return c; else None."""
    if len(img.terms) != 1:
        return None
    mono, c = next(iter(img.terms.items()))
    expected = tuple(1 if jj == j else 0 for jj in range(len(mono)))
    return c if mono == expected else None


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------


def normal_form(tower: OreTower, word) -> NCPoly:
    """Normal form of a raw product expressed as (generator, exponent)
    pairs; generator entries may be names or level indices."""
    return tower.word_to_poly(word)


def nc_mul(p: NCPoly, q: NCPoly) -> NCPoly:
    return p * q


def commutator(p: NCPoly, q: NCPoly) -> NCPoly:
    return p * q - q * p


def graded_degree(x: NCPoly, gen) -> int:
    """Maximal exponent of ``gen`` over the support of x (x nonzero)."""
    if x.is_zero():
        raise ValueError("the zero element has no graded degree")
    idx = gen if isinstance(gen, int) else x.tower.gen_index(gen)
    if idx is None:
        raise TowerError(f"unknown generator {gen!r}")
    return x.max_exponent(idx)


@dataclass
class SpanSolution:
    coefficients: list          # particular solution, one Scalar per basis element
    nullspace: list             # basis of the solution space of the homogeneous system
    @property
    def unique(self):
        return not self.nullspace


def solve_affine(rows, rhs, ctx):
    """Gauss-Jordan solve of (rows) c = rhs over the scalar field.

    Returns (particular, nullspace_basis) with free variables set to zero,
    or None when the system is inconsistent.
    """
    ncols = len(rows[0]) if rows else 0
    mat = [list(r) + [b] for r, b in zip(rows, rhs)]
    zero, one = ctx.zero, ctx.one
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for rr in range(r, len(mat)):
            if mat[rr][c]:
                pr = rr
                break
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        pv = mat[r][c]
        mat[r] = [v / pv for v in mat[r]]
        for rr in range(len(mat)):
            if rr != r and mat[rr][c]:
                f = mat[rr][c]
                mat[rr] = [a - f * b for a, b in zip(mat[rr], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    for rr in range(r, len(mat)):
        if mat[rr][ncols]:
            return None
    coeffs = [zero] * ncols
    for rr, c in enumerate(pivots):
        coeffs[c] = mat[rr][ncols]
    free = [c for c in range(ncols) if c not in pivots]
    null = []
    for fc in free:
        vec = [zero] * ncols
        vec[fc] = one
        for rr, c in enumerate(pivots):
            vec[c] = -mat[rr][fc]
        null.append(vec)
    return coeffs, null


def span_solve(x: NCPoly, basis: Sequence[NCPoly]) -> Optional[SpanSolution]:
    """Exact solution of sum_i c_i basis_i = x over the scalar field.

    Returns None when x is outside the span.  When the basis is linearly
    independent the solution is unique and ``nullspace`` is empty.
    """
    if not basis:
        return None if not x.is_zero() else SpanSolution([], [])
    tower = basis[0].tower
    ctx = tower.context
    monos = set(x.terms)
    for b in basis:
        monos.update(b.terms)
    ordered = sorted(monos, reverse=True)
    rows = [[b.coefficient(m) for b in basis] for m in ordered]
    rhs = [x.coefficient(m) for m in ordered]
    sol = solve_affine(rows, rhs, ctx)
    if sol is None:
        return None
    return SpanSolution(*sol)


# ---------------------------------------------------------------------------
# Diamond (confluence) check: two-path word rewriting, independent of the
# engine's own association order.
# ---------------------------------------------------------------------------


@dataclass
class DiamondResult:
    ok: bool
    witness_word: Optional[tuple] = None
    left_form: Optional[str] = None
    right_form: Optional[str] = None

    def describe(self):
        if self.ok:
            return "all overlap words reduce consistently"
        w = "*".join(
            f"{name}^{e}" if e != 1 else name for name, e in self.witness_word
        )
        return f"overlap {w}: {self.left_form} != {self.right_form}"


def diamond_check(tower: OreTower, degree: int = 3) -> DiamondResult:
    """Reduce every descending word of the given length along leftmost-first
    and rightmost-first strategies and compare the results (also against
    the engine's own normal form)."""
    if degree < 3:
        raise ValueError("diamond check needs degree >= 3")
    n = tower.nlevels
    letters = []
    for j in range(n):
        letters.append((j, 1))
        if tower.generators[j].invertible:
            letters.append((j, -1))
    for combo in itertools.product(letters, repeat=degree):
        levels = [l for l, _ in combo]
        if any(levels[i] < levels[i + 1] for i in range(len(levels) - 1)):
            continue  # only descending words create overlaps
        left = _word_reduce(tower, combo, leftmost=True)
        right = _word_reduce(tower, combo, leftmost=False)
        engine = tower.word_to_poly(combo)
        if left != right or left != engine:
            names = tuple(
                (tower.generators[j].name, e) for j, e in combo
            )
            return DiamondResult(
                False,
                witness_word=names,
                left_form=exprio.format_canonical(left),
                right_form=exprio.format_canonical(right),
            )
    return DiamondResult(True)


def _word_reduce(tower: OreTower, word, leftmost: bool) -> NCPoly:
    """Rewrite a letter word to normal form, picking redexes at the
    leftmost (or rightmost) position; returns the resulting NCPoly."""
    ctx = tower.context
    result = {}
    stack = [(tuple(word), ctx.one)]
    steps = 0
    while stack:
        w, coeff = stack.pop()
        steps += 1
        if steps > 200000:
            raise NonConfluentTower("rewriting did not terminate", witness=word)
        pos = _find_redex(tower, w, leftmost)
        if pos is None:
            mono = _word_to_mono(tower, w)
            v = result.get(mono, ctx.zero) + coeff
            if v:
                result[mono] = v
            else:
                result.pop(mono, None)
            continue
        for nw, c in _rewrite_at(tower, w, pos):
            stack.append((nw, coeff * c))
    return NCPoly(tower, result)


def _find_redex(tower, w, leftmost):
    rng = range(len(w) - 1) if leftmost else range(len(w) - 2, -1, -1)
    for p in rng:
        (i, si), (j, sj) = w[p], w[p + 1]
        if i == j and si != sj:
            return p
        if i > j:
            return p
    return None


def _rewrite_at(tower, w, p):
    (i, si), (j, sj) = w[p], w[p + 1]
    pre, post = w[:p], w[p + 2 :]
    if i == j and si != sj:
        return [(pre + post, tower.context.one)]
    out = []
    if si == 1:
        # g_i g_j^sj = sigma_i(g_j^sj) g_i + delta_i(g_j^sj)
        s_img = tower._sigma_img(i, j, sj)
        d_img = tower._delta_img(i, j, sj)
        for mono, c in s_img.terms.items():
            out.append((pre + _mono_to_word(mono) + ((i, 1),) + post, c))
        for mono, c in d_img.terms.items():
            out.append((pre + _mono_to_word(mono) + post, c))
    else:
        # inverse letters only for diagonal sigma, zero delta
        diag = tower._sigma_inv_diag[i]
        c = diag[j] ** (-sj)
        out.append((pre + ((j, sj), (i, -1)) + post, c))
    return out


def _mono_to_word(mono):
    word = []
    for j, e in enumerate(mono):
        if e:
            s = 1 if e > 0 else -1
            word.extend([(j, s)] * abs(e))
    return tuple(word)


def _word_to_mono(tower, w):
    mono = [0] * tower.nlevels
    for j, s in w:
        mono[j] += s
    for j, e in enumerate(mono):
        if e < 0 and not tower.generators[j].invertible:
            raise TowerError("negative exponent on non-invertible generator")
    return tuple(mono)


# ---------------------------------------------------------------------------
# Loading presentations
# ---------------------------------------------------------------------------


def load_tower(description: dict, context: Optional[ScalarContext] = None,
               validate: bool = True) -> OreTower:
    """Build a tower from its JSON-style description.

    Expected shape:

        {"name": ...,
         "parameters": [{"name": ..., "star": "fixed"|"negated"}, ...],
         "tower": [{"gen": ..., "invertible": bool,
                    "sigma": {gen: expr}, "delta": {gen: expr}}, ...],
         "star": {gen: expr}}

    Every expr uses the exprio grammar.  Inverse-generator rules are derived
    automatically; the diamond check runs unless ``validate`` is False and
    non-confluent towers are rejected.
    """
    if context is None:
        params = [
            Parameter(p["name"], p.get("star", "fixed"))
            for p in description.get("parameters", ())
        ]
        context = ScalarContext(params)
    gens = []
    for j, spec in enumerate(description["tower"]):
        gens.append(Generator(spec["gen"], j, bool(spec.get("invertible", False))))
    tower = OreTower(description.get("name", "tower"), context, gens)
    for L, spec in enumerate(description["tower"]):
        if L == 0:
            if spec.get("sigma") or spec.get("delta"):
                raise TowerError("level 0 takes no sigma/delta")
            continue
        sigma = {}
        delta = {}
        for j in range(L):
            gname = gens[j].name
            stext = spec.get("sigma", {}).get(gname, gname)
            dtext = spec.get("delta", {}).get(gname, "0")
            simg = tower.poly(stext)
            dimg = tower.poly(dtext)
            if simg.max_level() >= L or dimg.max_level() > L:
                raise TowerError(
                    f"level {L} data for {gname} references a forward level"
                )
            sigma[j] = simg
            delta[j] = dimg
        extra = set(spec.get("sigma", {})) | set(spec.get("delta", {}))
        unknown = extra - {g.name for g in gens[:L]}
        if unknown:
            raise TowerError(
                f"level {L} sigma/delta mention non-lower generators: {sorted(unknown)}"
            )
        tower._set_level(L, sigma, delta)
    star_spec = description.get("star")
    if star_spec:
        table = {}
        for gname, expr in star_spec.items():
            idx = tower.gen_index(gname)
            if idx is None:
                raise TowerError(f"star table mentions unknown generator {gname!r}")
            table[idx] = tower.poly(expr)
        for j, g in enumerate(tower.generators):
            if j not in table:
                raise TowerError(f"star table misses generator {g.name}")
        tower.star_table = table
    if validate:
        res = diamond_check(tower)
        if not res.ok:
            raise NonConfluentTower(
                f"tower {tower.name!r} is not confluent: {res.describe()}",
                witness=res.witness_word,
            )
    return tower
