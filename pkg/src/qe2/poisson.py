"""Poisson brackets on commutative presets and the covariance machinery.

The bracket is stored on generator pairs and extended by the Leibniz rule
through exact partial differentiation (Laurent exponents included, which
realizes {v^-1, f} = -v^-2 {v, f} automatically).  Morphisms into tensor
squares carry the product structure

    {a (x) x, b (x) y} = {a,b} (x) xy + ab (x) {x,y}

which is what multiplicativity of the coproduct and covariance of
coactions mean at the function-algebra level.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from . import exprio
from .hopf import TensorElement
from .ncalg import NCPoly, OreTower, TowerError
from .report import FAIL, PASS, CheckReport
from .scalars import GaussRational


class PoissonError(ValueError):
    pass


def _partial(x: NCPoly, idx: int) -> NCPoly:
    terms = {}
    for mono, c in x.terms.items():
        e = mono[idx]
        if e == 0:
            continue
        m2 = mono[:idx] + (e - 1,) + mono[idx + 1 :]
        add = c * e
        prev = terms.get(m2)
        v = add if prev is None else prev + add
        if v:
            terms[m2] = v
        else:
            terms.pop(m2, None)
    return NCPoly(x.tower, terms)


class PoissonStructure:
    """Antisymmetric bracket table over generator pairs of a commutative
    tower, extended to the whole algebra by bilinearity and Leibniz."""

    def __init__(self, tower: OreTower, table: dict):
        if not tower.commutative:
            raise PoissonError("Poisson structures need a commutative tower")
        self.tower = tower
        self._table = {}
        for (i, j), val in table.items():
            if i == j and not val.is_zero():
                raise PoissonError("{g,g} must vanish")
            if i < j:
                self._table[(i, j)] = val
            else:
                self._table[(j, i)] = -val

    @classmethod
    def load(cls, tower: OreTower, spec: dict) -> "PoissonStructure":
        table = {}
        for key, expr in spec.items():
            a, b = (s.strip() for s in key.split(","))
            ia, ib = tower.gen_index(a), tower.gen_index(b)
            if ia is None or ib is None:
                raise PoissonError(f"bracket table names unknown generator in {key!r}")
            table[(ia, ib)] = tower.poly(expr)
        return cls(tower, table)

    def bracket_gens(self, i: int, j: int) -> NCPoly:
        if i == j:
            return NCPoly.zero(self.tower)
        if i < j:
            return self._table.get((i, j), NCPoly.zero(self.tower))
        return -self._table.get((j, i), NCPoly.zero(self.tower))

    def bracket(self, f: NCPoly, g: NCPoly) -> NCPoly:
        """{f, g} by the Leibniz extension."""
        tower = self.tower
        out = NCPoly.zero(tower)
        n = tower.nlevels
        dfs = [_partial(f, i) for i in range(n)]
        dgs = [_partial(g, j) for j in range(n)]
        for (i, j), pij in self._table.items():
            if pij.is_zero():
                continue
            term = dfs[i] * dgs[j] - dfs[j] * dgs[i]
            if term.is_zero():
                continue
            out = out + term * pij
        return out


def pbracket(f: NCPoly, g: NCPoly, P: PoissonStructure) -> NCPoly:
    return P.bracket(f, g)


def jacobi_report(P: PoissonStructure, suite="jacobi") -> CheckReport:
    """Cyclic sum {f,{g,h}} + {g,{h,f}} + {h,{f,g}} on all generator
    triples; by the derivation property this certifies Jacobi on the
    whole algebra."""
    rep = CheckReport(suite)
    tower = P.tower
    n = tower.nlevels
    gens = [NCPoly.generator(tower, i) for i in range(n)]
    names = [g.name for g in tower.generators]
    ok = True
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                f, g, h = gens[i], gens[j], gens[k]
                s = (
                    P.bracket(f, P.bracket(g, h))
                    + P.bracket(g, P.bracket(h, f))
                    + P.bracket(h, P.bracket(f, g))
                )
                good = s.is_zero()
                ok = ok and good
                rep.add(
                    f"jacobi-({names[i]},{names[j]},{names[k]})",
                    status=PASS if good else FAIL,
                    lhs=exprio.format_canonical(s),
                    rhs="0",
                    witness=""
                    if good
                    else f"cyclic sum on ({names[i]},{names[j]},{names[k]})",
                )
    if n < 3:
        rep.add("jacobi-(trivial: fewer than 3 generators)", status=PASS, rhs="0")
    return rep


# ---------------------------------------------------------------------------
# Morphisms
# ---------------------------------------------------------------------------


class AlgebraMorphism:
    """Algebra map determined by generator images; the target is a tower
    or a tuple of towers (tensor legs)."""

    def __init__(self, source: OreTower, target, images):
        self.source = source
        self.target = target
        self.tensor = isinstance(target, tuple)
        imgs = {}
        for gname, val in images.items():
            idx = source.gen_index(gname)
            if idx is None:
                raise TowerError(f"morphism image for unknown generator {gname!r}")
            imgs[idx] = val
        if len(imgs) != source.nlevels:
            raise TowerError("morphism must give an image for every generator")
        self.images = imgs
        self._mono_cache = {}

    @classmethod
    def load(cls, source: OreTower, target, images_spec: dict) -> "AlgebraMorphism":
        images = {}
        for gname, expr in images_spec.items():
            ast = exprio.parse_expr(expr)
            images[gname] = exprio.elaborate_expr(
                ast, target if isinstance(target, tuple) else target
            )
        return cls(source, target, images)

    def _unit(self):
        if self.tensor:
            return TensorElement.unit(self.target)
        return NCPoly.one(self.target)

    def apply(self, x: NCPoly):
        if x.tower is not self.source:
            raise TowerError("element not in the morphism source")
        out = None
        for mono, c in x.terms.items():
            img = self._apply_mono(mono).scale(c)
            out = img if out is None else out + img
        if out is None:
            out = self._unit().scale(self.source.context.zero)
        return out

    def _apply_mono(self, mono):
        hit = self._mono_cache.get(mono)
        if hit is not None:
            return hit
        out = self._unit()
        for j, e in enumerate(mono):
            if e:
                out = out * (self.images[j] ** e)
        self._mono_cache[mono] = out
        return out

    def validate(self, suite="morphism") -> CheckReport:
        """Images must satisfy every derived relation of the source, and
        invertible generators need invertible images."""
        rep = CheckReport(suite)
        for word, rhs in self.source.derived_rules():
            wname = "*".join(
                f"{self.source.generators[j].name}^{e}"
                if e != 1
                else self.source.generators[j].name
                for j, e in word
            )
            try:
                lhs_img = self._unit()
                for j, e in word:
                    lhs_img = lhs_img * (self.images[j] ** e)
                rhs_img = self.apply(rhs)
            except TowerError as e:
                rep.add(f"respects[{wname}]", status=FAIL, witness=str(e))
                continue
            ok = lhs_img == rhs_img
            rep.add(
                f"respects[{wname}]",
                status=PASS if ok else FAIL,
                lhs=exprio.format_canonical(lhs_img),
                rhs=exprio.format_canonical(rhs_img),
            )
        return rep


def morphism_from_hopf(H) -> AlgebraMorphism:
    """The coproduct as an algebra morphism into the tensor square."""
    tower = H.tower
    images = {
        tower.generators[j].name: H.delta_table[j] for j in range(tower.nlevels)
    }
    return AlgebraMorphism(tower, (tower, tower), images)


def tensor_bracket(
    t1: TensorElement,
    t2: TensorElement,
    P_left: PoissonStructure,
    P_right: PoissonStructure,
) -> TensorElement:
    """Product Poisson structure on a two-leg tensor."""
    legs = t1.legs
    left, right = legs
    out = TensorElement.zero(legs)
    for (ma, mx), ca in t1.terms.items():
        a = left.tower_mono(ma)
        x = right.tower_mono(mx)
        for (mb, my), cb in t2.terms.items():
            b = left.tower_mono(mb)
            y = right.tower_mono(my)
            c = ca * cb
            gpart = P_left.bracket(a, b)
            if not gpart.is_zero():
                out = out + TensorElement.from_legs(legs, [gpart, x * y]).scale(c)
            mpart = P_right.bracket(x, y)
            if not mpart.is_zero():
                out = out + TensorElement.from_legs(legs, [a * b, mpart]).scale(c)
    return out


def poisson_morphism_report(
    phi: AlgebraMorphism,
    P_src: PoissonStructure,
    P_tgt,
    suite="poisson-morphism",
) -> CheckReport:
    """phi({x,y}) = {phi x, phi y} on all generator pairs (suffices by
    Leibniz).  For tensor targets pass a pair (P_left, P_right)."""
    rep = CheckReport(suite)
    src = phi.source
    names = [g.name for g in src.generators]
    val = phi.validate(suite)
    bad = [r for r in val.records if r.status != PASS]
    if bad:
        rep.records.extend(bad)
        return rep
    for i in range(src.nlevels):
        for j in range(i + 1, src.nlevels):
            lhs = phi.apply(P_src.bracket_gens(i, j))
            fi = phi.apply(NCPoly.generator(src, i))
            fj = phi.apply(NCPoly.generator(src, j))
            if phi.tensor:
                P_left, P_right = P_tgt
                rhs = tensor_bracket(fi, fj, P_left, P_right)
            else:
                rhs = P_tgt.bracket(fi, fj)
            ok = lhs == rhs
            rep.add(
                f"poisson-morphism-({names[i]},{names[j]})",
                status=PASS if ok else FAIL,
                lhs=exprio.format_canonical(lhs),
                rhs=exprio.format_canonical(rhs),
                witness="" if ok else "bracket images differ",
            )
    return rep


# ---------------------------------------------------------------------------
# Covariant families
# ---------------------------------------------------------------------------


@dataclass
class CovariantFamily:
    ansatz: list              # candidate bracket monomials (NCPoly)
    particular: Optional[list]  # Scalars, or None when no solution exists
    nullspace: list           # list of Scalar vectors

    @property
    def dimension(self):
        return len(self.nullspace) if self.particular is not None else -1

    @property
    def empty(self):
        return self.particular is None

    def bracket_value(self, coeffs) -> NCPoly:
        tower = self.ansatz[0].tower
        out = NCPoly.zero(tower)
        for c, t in zip(coeffs, self.ansatz):
            out = out + t.scale(c)
        return out

    def contains_vector(self, vec) -> bool:
        if self.particular is None:
            return False
        ctx = self.ansatz[0].tower.context
        diff = [a - b for a, b in zip(vec, self.particular)]
        if not self.nullspace:
            return all(not d for d in diff)
        rows = [[nv[i] for nv in self.nullspace] for i in range(len(diff))]
        from .ncalg import solve_affine

        return solve_affine(rows, diff, ctx) is not None

    def contains_bracket(self, value: NCPoly) -> bool:
        """Decompose a candidate bracket over the ansatz monomials and test
        the affine system."""
        from .ncalg import span_solve

        sol = span_solve(value, self.ansatz)
        if sol is None:
            return False
        return self.contains_vector(sol.coefficients)


def covariant_family_solve(
    coaction: AlgebraMorphism,
    P_G: PoissonStructure,
    ansatz: Sequence[NCPoly],
) -> CovariantFamily:
    """Exact affine set of bracket coefficients making the coaction a
    Poisson morphism.

    The homogeneous-space tower must have exactly two generators (Jacobi
    is then automatic); the unknown bracket is {x, y} = sum_t c_t * t over
    the ansatz monomials.
    """
    if not ansatz:
        raise PoissonError("empty ansatz")
    space = coaction.source
    if space.nlevels != 2:
        raise PoissonError("covariant solving needs a two-generator space")
    if not coaction.tensor or len(coaction.target) != 2:
        raise PoissonError("coaction must land in group (x) space")
    group = coaction.target[0]
    legs = coaction.target
    ctx = space.context
    ax = coaction.apply(NCPoly.generator(space, 0))
    ay = coaction.apply(NCPoly.generator(space, 1))

    # G-part: left-leg brackets
    gpart = TensorElement.zero(legs)
    for (ma, mx), ca in ax.terms.items():
        for (mb, my), cb in ay.terms.items():
            br = P_G.bracket(group.tower_mono(ma), group.tower_mono(mb))
            if br.is_zero():
                continue
            prod = space.tower_mono(mx) * space.tower_mono(my)
            gpart = gpart + TensorElement.from_legs(legs, [br, prod]).scale(ca * cb)

    # per ansatz monomial t: alpha(t) - sum a_i b_j (x) Jac_ij * t
    cols = []
    for t in ansatz:
        col = coaction.apply(t)
        for (ma, mx), ca in ax.terms.items():
            for (mb, my), cb in ay.terms.items():
                xi = space.tower_mono(mx)
                yj = space.tower_mono(my)
                jac = _partial(xi, 0) * _partial(yj, 1) - _partial(xi, 1) * _partial(
                    yj, 0
                )
                if jac.is_zero():
                    continue
                ab = group.tower_mono(ma) * group.tower_mono(mb)
                col = col - TensorElement.from_legs(legs, [ab, jac * t]).scale(
                    ca * cb
                )
        cols.append(col)

    monos = set(gpart.terms)
    for col in cols:
        monos.update(col.terms)
    rows = sorted(monos)
    zero = ctx.zero
    mat = [[col.terms.get(m, zero) for col in cols] for m in rows]
    rhs = [gpart.terms.get(m, zero) for m in rows]
    from .ncalg import solve_affine

    sol = solve_affine(mat, rhs, ctx)
    if sol is None:
        return CovariantFamily(list(ansatz), None, [])
    particular, nullspace = sol
    return CovariantFamily(list(ansatz), particular, nullspace)


# ---------------------------------------------------------------------------
# Pointwise rank and Hamiltonian fields
# ---------------------------------------------------------------------------


def evaluate_poly(
    x: NCPoly, gen_values: dict, param_values: dict
) -> GaussRational:
    """Evaluate a commutative element at exact generator/parameter values."""
    tower = x.tower
    vals = []
    for j, g in enumerate(tower.generators):
        if g.name not in gen_values:
            raise PoissonError(f"no value assigned to generator {g.name}")
        v = gen_values[g.name]
        v = v if isinstance(v, GaussRational) else GaussRational(v)
        if g.invertible and not v:
            raise PoissonError(f"zero assigned to invertible generator {g.name}")
        vals.append(v)
    total = GaussRational(0)
    for mono, c in x.terms.items():
        term = c.evaluate(param_values)
        for j, e in enumerate(mono):
            if e:
                term = term * vals[j] ** e
        total = total + term
    return total


def poisson_matrix_at(P: PoissonStructure, gen_values, param_values):
    n = P.tower.nlevels
    mat = [[GaussRational(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j:
                mat[i][j] = evaluate_poly(
                    P.bracket_gens(i, j), gen_values, param_values
                )
    return mat


def poisson_matrix_rank(P: PoissonStructure, gen_values, param_values) -> int:
    """Exact rank of the evaluated bracket matrix (= the symplectic leaf
    dimension at the point)."""
    mat = poisson_matrix_at(P, gen_values, param_values)
    n = len(mat)
    rank = 0
    rows = [list(r) for r in mat]
    col = 0
    for col in range(n):
        piv = None
        for r in range(rank, n):
            if rows[r][col]:
                piv = r
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pv = rows[rank][col]
        rows[rank] = [x / pv for x in rows[rank]]
        for r in range(n):
            if r != rank and rows[r][col]:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


class HamiltonianFields:
    """X_{g_i} with j-th component {g_i, g_j}, plus the symbolic relation
    checker for combinations sum_i c_i X_{f_i}."""

    def __init__(self, P: PoissonStructure):
        self.P = P
        tower = P.tower
        n = tower.nlevels
        self.components = [
            [P.bracket_gens(i, j) for j in range(n)] for i in range(n)
        ]

    def field(self, gen) -> list:
        idx = gen if isinstance(gen, int) else self.P.tower.gen_index(gen)
        return self.components[idx]

    def combination(self, coeffs: dict) -> list:
        """sum over gens of c_g * X_g, as a component vector of NCPolys."""
        tower = self.P.tower
        n = tower.nlevels
        out = [NCPoly.zero(tower) for _ in range(n)]
        for gen, c in coeffs.items():
            idx = gen if isinstance(gen, int) else tower.gen_index(gen)
            for j in range(n):
                out[j] = out[j] + c * self.components[idx][j]
        return out

    def relation_holds(self, coeffs: dict):
        """(True, None) when the combination vanishes identically, else
        (False, witness text)."""
        vec = self.combination(coeffs)
        names = [g.name for g in self.P.tower.generators]
        for j, comp in enumerate(vec):
            if not comp.is_zero():
                return False, (
                    f"component d/d{names[j]}: {exprio.format_canonical(comp)}"
                )
        return True, None


def hamiltonian_fields(P: PoissonStructure) -> HamiltonianFields:
    return HamiltonianFields(P)


def poisson_ideal_check(
    P: PoissonStructure,
    ideal_gens: Sequence[NCPoly],
    vanish: AlgebraMorphism,
    suite="poisson-ideal",
) -> CheckReport:
    """Pass iff vanish({g, a}) = 0 for every ideal generator g and algebra
    generator a; ``vanish`` is the restriction morphism onto the subgroup
    (its kernel is the subgroup ideal)."""
    rep = CheckReport(suite)
    tower = P.tower
    for g in ideal_gens:
        img = vanish.apply(g)
        if not img.is_zero():
            raise PoissonError(
                "the vanish morphism does not kill the stated ideal generators"
            )
    names = [g.name for g in tower.generators]
    for gi, g in enumerate(ideal_gens):
        for j in range(tower.nlevels):
            br = P.bracket(g, NCPoly.generator(tower, j))
            img = vanish.apply(br)
            ok = img.is_zero()
            rep.add(
                f"poisson-ideal-gen{gi}-vs-{names[j]}",
                status=PASS if ok else FAIL,
                lhs=exprio.format_canonical(img),
                rhs="0",
                witness=""
                if ok
                else f"{{gen{gi}, {names[j]}}} restricts to a nonzero value",
            )
    return rep
