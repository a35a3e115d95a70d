"""Quantum homogeneous-space machinery: coideal checks, subalgebra
membership, quotient maps, Hopf-*-ideal verification, coinvariants, and
the antipode-difference generators of the closure correspondence.

Ideal membership is implemented as kernel membership of a declared
quotient map; identifying that kernel with the two-sided ideal generated
by the preset's listed generators is a documented preset-level assumption
(docs/presets.md sketches the normal-form argument for I = <v-1, n-nb>),
not something the engine re-proves.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from . import exprio
from .hopf import HopfStructure, TensorElement, star_apply
from .ncalg import NCPoly, OreTower, TowerError, span_solve
from .poisson import AlgebraMorphism
from .report import FAIL, PASS, CheckReport


class HomspaceError(ValueError):
    pass


@dataclass
class Decomposition:
    labels: list     # one label per contributing candidate
    coefficients: list
    candidates: list

    def text(self):
        parts = [
            f"{c} * {label}"
            for label, c in zip(self.labels, self.coefficients)
            if c
        ]
        return " + ".join(parts) if parts else "0"


class Subalgebra:
    """Subalgebra of an ambient tower given by generator values and a
    monomial-bound policy that makes membership finitely decidable.

    Policies:

    * ``laurent-times-poly``: the subalgebra is generated by an invertible
      ambient generator v (with its inverse) and one further element m;
      candidates are v^r m^s.  The bounds s <= total degree of x in the
      declared counting generators and |r| <= max |v-exponent| + s are
      sufficient for the shipped cylinder: every m-factor contributes
      exactly one counting generator (so deg_m is bounded by the counting
      degree) and multiplying by v^r shifts the v-exponent range by r.
    * ``words``: candidates are all products of the listed generators up
      to the total degree of x (adequate for polynomial subalgebras like
      the one generated by n).
    """

    def __init__(self, ambient: OreTower, generators: dict, policy: dict):
        self.ambient = ambient
        self.generator_names = list(generators)
        self.generators = dict(generators)  # name -> NCPoly
        self.policy = policy

    @classmethod
    def load(cls, ambient: OreTower, spec: dict) -> "Subalgebra":
        gens = {name: ambient.poly(expr) for name, expr in spec["generators"].items()}
        return cls(ambient, gens, spec.get("policy", {"type": "words"}))

    # -- candidate enumeration ------------------------------------------------
    def _candidates(self, x: NCPoly):
        kind = self.policy.get("type", "words")
        if kind == "laurent-times-poly":
            vname = self.policy["laurent"]
            pname = self.policy["poly"]
            vidx = self.ambient.gen_index(vname)
            counters = [self.ambient.gen_index(c) for c in self.policy["counters"]]
            m = self.generators[pname]
            smax = max(
                (sum(mono[c] for c in counters) for mono in x.terms), default=0
            )
            rmax = max(
                (abs(mono[vidx]) for mono in x.terms), default=0
            ) + smax
            out = []
            mpow = [NCPoly.one(self.ambient)]
            for _ in range(smax):
                mpow.append(mpow[-1] * m)
            for r in range(-rmax, rmax + 1):
                vr = NCPoly.generator(self.ambient, vidx, r) if r else NCPoly.one(self.ambient)
                for s in range(smax + 1):
                    out.append((f"{vname}^{r}*{pname}^{s}", vr * mpow[s]))
            return out
        if kind == "words":
            bound = self.policy.get(
                "bound", max((sum(abs(e) for e in mono) for mono in x.terms), default=0)
            )
            out = [("1", NCPoly.one(self.ambient))]
            frontier = [("", NCPoly.one(self.ambient))]
            for _ in range(bound):
                new = []
                for label, p in frontier:
                    for name in self.generator_names:
                        q = p * self.generators[name]
                        lbl = f"{label}*{name}".lstrip("*")
                        new.append((lbl, q))
                seen = {str(c[1]) for c in out}
                for lbl, q in new:
                    if str(q) not in seen:
                        out.append((lbl, q))
                        seen.add(str(q))
                frontier = new
            return out
        raise HomspaceError(f"unknown membership policy {kind!r}")


def subalgebra_membership(x: NCPoly, B: Subalgebra) -> Optional[Decomposition]:
    """Exact coefficients of x over the policy's candidate monomials, or
    None when x lies outside their span."""
    cands = B._candidates(x)
    sol = span_solve(x, [p for _, p in cands])
    if sol is None:
        return None
    return Decomposition(
        [label for label, _ in cands], sol.coefficients, [p for _, p in cands]
    )


# ---------------------------------------------------------------------------
# Quotient maps
# ---------------------------------------------------------------------------


class QuotientMap(AlgebraMorphism):
    """Algebra morphism with a declared kernel-generator list; its kernel
    is the ideal used for membership tests."""

    def __init__(self, source, target, images, kernel_gens: Sequence[NCPoly]):
        super().__init__(source, target, images)
        self.kernel_gens = list(kernel_gens)

    @classmethod
    def load_quotient(cls, source: OreTower, target: OreTower, spec: dict) -> "QuotientMap":
        images = {}
        for gname, expr in spec["images"].items():
            images[gname] = target.poly(expr)
        kernel = [source.poly(t) for t in spec.get("kernel", ())]
        return cls(source, target, images, kernel)


def quotient_check(pi: QuotientMap, suite="quotient") -> CheckReport:
    """Every derived rewrite rule of the source must hold after
    substitution, and invertible generators must map to invertible
    monomials."""
    rep = pi.validate(suite)
    for j, g in enumerate(pi.source.generators):
        if not g.invertible:
            continue
        try:
            pi.images[j].unit_inverse()
            rep.add(f"invertible-image-{g.name}", status=PASS)
        except TowerError as e:
            rep.add(
                f"invertible-image-{g.name}",
                status=FAIL,
                witness=f"image of {g.name} is not invertible: {e}",
            )
    for idx, g in enumerate(pi.kernel_gens):
        img = pi.apply(g)
        ok = img.is_zero()
        rep.add(
            f"kernel-gen-{idx}",
            status=PASS if ok else FAIL,
            lhs=exprio.format_canonical(img),
            rhs="0",
        )
    return rep


def ideal_member(x: NCPoly, pi: QuotientMap) -> bool:
    """Membership in ker(pi); sound for the declared ideal by the preset
    assumption ker(pi) = <kernel generators>."""
    return pi.apply(x).is_zero()


# ---------------------------------------------------------------------------
# Coideal / Hopf-*-ideal / coinvariants
# ---------------------------------------------------------------------------


def _group_by_left_leg(t: TensorElement):
    """Split a two-leg tensor into {left monomial -> right NCPoly}; sound
    because distinct normal monomials are linearly independent."""
    right_tower = t.legs[1]
    groups = {}
    for (ml, mr), c in t.terms.items():
        g = groups.setdefault(ml, {})
        v = g.get(mr)
        nv = c if v is None else v + c
        if nv:
            g[mr] = nv
        else:
            g.pop(mr, None)
    return {
        ml: NCPoly(right_tower, terms) for ml, terms in groups.items() if terms
    }


def coideal_report(B: Subalgebra, H: HopfStructure, suite="coideal") -> CheckReport:
    """Right-coideal-with-star test: for each generator b, every right leg
    of Delta(b) (grouped by left basis monomial) must lie in B, and b*
    must lie in B."""
    rep = CheckReport(suite)
    amb = B.ambient
    for name, b in B.generators.items():
        db = H.coproduct(b)
        for ml, right in sorted(_group_by_left_leg(db).items()):
            label = exprio.format_canonical(amb.tower_mono(ml))
            dec = subalgebra_membership(right, B)
            ok = dec is not None
            rep.add(
                f"coideal-{name}-leftleg[{label}]",
                status=PASS if ok else FAIL,
                lhs=exprio.format_canonical(right),
                rhs="<element of the subalgebra>",
                witness=""
                if ok
                else f"right leg of Delta({name}) grouped at {label} is outside B",
            )
        bstar = star_apply(b, amb)
        dec = subalgebra_membership(bstar, B)
        ok = dec is not None
        rep.add(
            f"coideal-{name}-star",
            status=PASS if ok else FAIL,
            lhs=exprio.format_canonical(bstar),
            rhs="<element of the subalgebra>",
            witness="" if ok else f"{name}* is outside B",
        )
    return rep


def hopf_star_ideal_report(
    ideal_gens: Sequence[NCPoly],
    pi: QuotientMap,
    H: HopfStructure,
    suite="hopf-star-ideal",
) -> CheckReport:
    """On each stated generator g: (pi (x) pi) Delta(g) = 0 (bilateral
    coideal, since I (x) A + A (x) I is the kernel of pi (x) pi),
    eps(g) = 0, pi(S(g)) = 0 and pi(g*) = 0."""
    rep = CheckReport(suite)
    for g in ideal_gens:
        if not pi.apply(g).is_zero():
            raise HomspaceError("pi does not kill a stated ideal generator")
    for g in ideal_gens:
        gname = exprio.format_canonical(g)
        dg = H.coproduct(g)
        both = dg.map_leg(0, pi.apply, new_tower=pi.target).map_leg(
            1, pi.apply, new_tower=pi.target
        )
        _flag(rep, f"coideal[(pi x pi) delta({gname})]", both.is_zero(), both)
        eps = H.counit(g)
        _flag(
            rep,
            f"counit[eps({gname})]",
            not eps,
            NCPoly.constant(pi.source, eps),
        )
        s_img = pi.apply(H.antipode(g))
        _flag(rep, f"antipode[pi(S({gname}))]", s_img.is_zero(), s_img)
        st_img = pi.apply(star_apply(g, pi.source))
        _flag(rep, f"star[pi(({gname})*)]", st_img.is_zero(), st_img)
    return rep


def _flag(rep, check_id, ok, residual):
    rep.add(
        check_id,
        status=PASS if ok else FAIL,
        lhs=exprio.format_canonical(residual) if residual is not None else "",
        rhs="0",
        witness="" if ok else "nonzero residual",
    )


def coinvariance_check(
    x: NCPoly, pi: QuotientMap, H: HopfStructure, side: str
) -> bool:
    """side='left' tests (pi (x) id) Delta(x) = 1 (x) x; side='right'
    tests (id (x) pi) Delta(x) = x (x) 1."""
    amb = pi.source
    dx = H.coproduct(x)
    if side == "left":
        mapped = dx.map_leg(0, pi.apply, new_tower=pi.target)
        expected = TensorElement.from_legs(
            (pi.target, amb), [NCPoly.one(pi.target), x]
        )
    elif side == "right":
        mapped = dx.map_leg(1, pi.apply, new_tower=pi.target)
        expected = TensorElement.from_legs(
            (amb, pi.target), [x, NCPoly.one(pi.target)]
        )
    else:
        raise ValueError("side must be 'left' or 'right'")
    return mapped == expected


def coinvariance_residual(x: NCPoly, pi: QuotientMap, H: HopfStructure, side: str):
    amb = pi.source
    dx = H.coproduct(x)
    if side == "left":
        mapped = dx.map_leg(0, pi.apply, new_tower=pi.target)
        expected = TensorElement.from_legs(
            (pi.target, amb), [NCPoly.one(pi.target), x]
        )
    else:
        mapped = dx.map_leg(1, pi.apply, new_tower=pi.target)
        expected = TensorElement.from_legs(
            (amb, pi.target), [x, NCPoly.one(pi.target)]
        )
    return mapped - expected


def sigma_generators(
    B: Subalgebra, H: HopfStructure, max_power: int = 2
) -> list:
    """(S^p - eps(.)1)(b) for every subalgebra generator b and
    1 <= p <= max_power, normal-formed.

    Only nonnegative antipode powers are used: invertibility of S is not
    established for these presets, and the closure argument never needs
    negative powers."""
    if max_power < 1:
        raise HomspaceError("max_power must be >= 1")
    out = []
    for name, b in B.generators.items():
        eps = H.counit(b)
        img = b
        for p in range(1, max_power + 1):
            img = H.antipode(img)
            out.append(
                (f"(S^{p} - eps)({name})", img - NCPoly.constant(B.ambient, eps))
            )
    return out
