"""Registered verification suites.

Each check compares engine-derived values against the claims and displayed
values of the source manuscript and yields pass/fail/discrepancy records;
``discrepancy`` marks an engine value that contradicts a displayed value
while the enclosing statement's conclusion still verifies.  Suites never
abort on a failing check.
"""

from __future__ import annotations

import random

from . import catalog, exprio
from .hopf import hopf_axioms_report, respects_relations_report
from .homspace import (
    coideal_report,
    coinvariance_check,
    coinvariance_residual,
    hopf_star_ideal_report,
    ideal_member,
    quotient_check,
    sigma_generators,
)
from .liebialg import (
    WedgeBivector,
    coboundary_solve,
    cocycle_cojacobi_report,
    lie_from_group,
    linearize_poisson,
    stabilizer_invariance_check,
)
from .ncalg import (
    NCPoly,
    diamond_check,
    graded_degree,
    load_tower,
    normal_form,
    span_solve,
)
from .poisson import (
    covariant_family_solve,
    hamiltonian_fields,
    jacobi_report,
    morphism_from_hopf,
    poisson_ideal_check,
    poisson_matrix_rank,
    poisson_morphism_report,
)
from .report import DISCREPANCY, FAIL, PASS, CheckReport
from .scalars import GaussRational

LIE_NAMES = ("J", "X", "Y")


def _summarize(rep_out: CheckReport, check_id, anchor, source: CheckReport, note=""):
    worst = source.worst
    bad = next((r for r in source.records if r.status != PASS), None)
    c = source.counts
    detail = f"{c[PASS]}/{len(source.records)} sub-checks pass"
    rep_out.add(
        check_id,
        anchor=anchor,
        status=worst,
        lhs=bad.lhs_canonical if bad else "",
        rhs=bad.rhs_canonical if bad else "",
        witness=(f"{bad.check_id}: {bad.witness}" if bad else detail)
        + (f"; {note}" if note else ""),
    )


def _ok(rep, check_id, anchor, condition, lhs="", rhs="", witness_fail=""):
    rep.add(
        check_id,
        anchor=anchor,
        status=PASS if condition else FAIL,
        lhs=lhs,
        rhs=rhs,
        witness="" if condition else witness_fail,
    )


def _discrepancy(rep, check_id, anchor, engine, printed, note):
    rep.add(
        check_id,
        anchor=anchor,
        status=DISCREPANCY,
        lhs=engine,
        rhs=printed,
        witness=note,
    )


# ---------------------------------------------------------------------------
# jacobi
# ---------------------------------------------------------------------------


def suite_jacobi(rep: CheckReport, degree_bound: int):
    std = catalog.get_preset("std-poisson")
    nonstd = catalog.get_preset("nonstd-poisson")
    _summarize(rep, "jacobi-std-poisson", "Prop. 2.2", jacobi_report(std.poisson))
    _summarize(rep, "jacobi-nonstd-poisson", "Sec. 3", jacobi_report(nonstd.poisson))
    t = std.tower
    _discrepancy(
        rep,
        "bracket-table-std-n-nb",
        "Sec. 2",
        exprio.format_canonical(std.poisson.bracket(t.gen("n"), t.gen("nb"))),
        "n*nb",
        "multiplicativity of the coproduct (Prop. 2.2) forces {n,nb} = -n*nb; "
        "with the displayed sign the coproduct is not a Poisson morphism",
    )
    tn = nonstd.tower
    _discrepancy(
        rep,
        "bracket-table-nonstd-n-nb",
        "Sec. 3",
        exprio.format_canonical(nonstd.poisson.bracket(tn.gen("n"), tn.gen("nb"))),
        "omega*n - omega*nb",
        "the Jacobi identity forces {n,nb} = omega*(nb-n); the displayed sign "
        "leaves the cyclic sum 2*omega^2*(v-1)^2",
    )


# ---------------------------------------------------------------------------
# multiplicativity
# ---------------------------------------------------------------------------


def suite_multiplicativity(rep: CheckReport, degree_bound: int):
    for pid, anchor in (("std-poisson", "Prop. 2.2"), ("nonstd-poisson", "Sec. 3")):
        b = catalog.get_preset(pid)
        phi = morphism_from_hopf(b.hopf)
        sub = poisson_morphism_report(phi, b.poisson, (b.poisson, b.poisson))
        _summarize(rep, f"multiplicativity-{pid}", anchor, sub)


# ---------------------------------------------------------------------------
# covariance
# ---------------------------------------------------------------------------


def suite_covariance(rep: CheckReport, degree_bound: int):
    cp = catalog.get_preset("coaction-plane")
    sub = poisson_morphism_report(
        cp.coaction, cp.space_poisson, (cp.group_poisson, cp.space_poisson)
    )
    _summarize(rep, "covariance-plane-coaction-k-symbolic", "Prop. 2.6", sub)

    space, group = cp.space_tower, cp.group_tower
    from .poisson import AlgebraMorphism, PoissonStructure

    literal = AlgebraMorphism.load(
        space,
        (group, space),
        {"z": "v (x) z + n (x) 1", "zb": "vb (x) zb + nb (x) 1"},
    )
    literal_fam = covariant_family_solve(literal, cp.group_poisson, cp.ansatz)
    _discrepancy(
        rep,
        "covariance-plane-orientation",
        "Cor. 2.4 / Prop. 2.6",
        "alpha(z) = v (x) z + nb (x) 1 (z paired with nb)",
        "alpha(z) = v (x) z + n (x) 1 (z paired with n)",
        "the displayed pairing admits no covariant bracket at all "
        f"(family empty: {literal_fam.empty}); the engine pairing carries the "
        "displayed family z*zb + k",
    )

    proj = cp.projection
    p_m0 = PoissonStructure(space, {(0, 1): space.poly("z*zb")})
    rep0 = poisson_morphism_report(proj, p_m0, cp.group_poisson)
    _summarize(rep, "covariance-plane-projection-k0", "Cor. 2.4", rep0)
    rep_sym = poisson_morphism_report(proj, cp.space_poisson, cp.group_poisson)
    _ok(
        rep,
        "covariance-plane-projection-k-obstruction",
        "Cor. 2.4",
        not rep_sym.clean,
        lhs="projection fails to be Poisson for symbolic k",
        rhs="k = 0 is the only induced member",
        witness_fail="symbolic-k projection unexpectedly passed",
    )

    cc = catalog.get_preset("coaction-cylinder")
    engine_member = cc.space_tower.poly(cc.raw["engine_family_member"])
    from .poisson import PoissonStructure as PS

    p_m = PS(cc.space_tower, {(0, 1): engine_member})
    sub = poisson_morphism_report(cc.coaction, p_m, (cc.group_poisson, p_m))
    _summarize(rep, "covariance-cylinder-engine-member", "Prop. 3.2", sub)

    nonstd = catalog.get_preset("nonstd-poisson")
    tn = nonstd.tower
    engine_bracket = nonstd.poisson.bracket(tn.gen("v"), tn.poly("vb*nb - v*n"))
    _discrepancy(
        rep,
        "prop32-bracket-printed",
        "Prop. 3.2",
        exprio.format_canonical(engine_bracket),
        "-omega*(v^2 - 1)",
        "Leibniz expansion of {v, vb*nb - v*n} gives omega*(v-1)^2; the "
        "displayed value is not even covariant (see the families suite)",
    )

    for pid, anchor, cid in (
        ("coaction-plane", "Sec. 2", "stabilizer-plane"),
        ("coaction-cylinder", "Rem. 3.4", "stabilizer-cylinder"),
    ):
        b = catalog.get_preset(pid)
        st = b.stabilizer
        sub = stabilizer_invariance_check(
            b.context, st["pushforward"], st["action"], st["delta_image"], st["rho"]
        )
        _summarize(rep, cid, anchor, sub)


# ---------------------------------------------------------------------------
# families
# ---------------------------------------------------------------------------


def suite_families(rep: CheckReport, degree_bound: int):
    cp = catalog.get_preset("coaction-plane")
    fam = covariant_family_solve(cp.coaction, cp.group_poisson, cp.ansatz)
    space = cp.space_tower
    ok = (
        not fam.empty
        and fam.dimension == 1
        and fam.contains_bracket(space.poly("z*zb"))
        and fam.contains_bracket(space.poly("z*zb + k"))
    )
    _ok(
        rep,
        "family-plane-dimension",
        "Prop. 2.6",
        ok,
        lhs=f"affine dimension {fam.dimension}, contains z*zb and z*zb + k",
        rhs="one-parameter family z*zb + k",
        witness_fail="plane family does not match the displayed one",
    )

    cc = catalog.get_preset("coaction-cylinder")
    fam_c = covariant_family_solve(cc.coaction, cc.group_poisson, cc.ansatz)
    sp = cc.space_tower
    _ok(
        rep,
        "family-cylinder-dimension",
        "Prop. 3.5",
        (not fam_c.empty)
        and fam_c.dimension == 1
        and fam_c.contains_bracket(sp.poly(cc.raw["engine_family_member"]))
        and fam_c.contains_bracket(sp.poly("omega*(v - 1)^2")),
        lhs=f"affine dimension {fam_c.dimension}; family omega*v^2 + beta*v + omega",
        rhs="one-parameter affine family",
        witness_fail="cylinder family mismatch",
    )
    printed = sp.poly(cc.raw["printed_family"])
    if fam_c.contains_bracket(printed):
        rep.add(
            "family-cylinder-printed-member",
            anchor="Prop. 3.5",
            status=PASS,
            lhs=cc.raw["printed_family"],
            rhs="member of the solved family",
        )
    else:
        _discrepancy(
            rep,
            "family-cylinder-printed-member",
            "Prop. 3.5",
            "solved family: omega*v^2 + beta*v + omega (beta free); equivalently "
            "omega*(v-1)^2 + k*v",
            cc.raw["printed_family"],
            "the displayed family -omega*(v^2-1) + k solves the covariance "
            "identity for no value of the free coefficient",
        )


# ---------------------------------------------------------------------------
# foliation
# ---------------------------------------------------------------------------


def suite_foliation(rep: CheckReport, degree_bound: int):
    std = catalog.get_preset("std-poisson")
    nonstd = catalog.get_preset("nonstd-poisson")
    one = GaussRational(1)
    zero = GaussRational(0)
    i = GaussRational(0, 1)

    pts = [one, i, GaussRational(3) / 5 + (GaussRational(4) / 5) * i]
    ranks = [
        poisson_matrix_rank(std.poisson, {"v": v0, "n": zero, "nb": zero}, {})
        for v0 in pts
    ]
    _ok(
        rep,
        "rank-std-circle-points",
        "Rem. 2.3",
        ranks == [0, 0, 0],
        lhs=f"ranks {ranks} at v0 in (1, i, (3+4i)/5), n = nb = 0",
        rhs="0-dimensional leaves along the circle subgroup",
    )
    _ok(
        rep,
        "rank-std-generic",
        "Rem. 2.3",
        poisson_matrix_rank(
            std.poisson, {"v": one, "n": one, "nb": GaussRational(2)}, {}
        )
        == 2,
        lhs="rank 2 at a generic point",
        rhs="generic leaves are 2-dimensional",
    )
    w1 = {"omega": one}
    rline = [
        poisson_matrix_rank(nonstd.poisson, {"v": one, "n": t, "nb": t}, w1)
        for t in (zero, one)
    ]
    _ok(
        rep,
        "rank-nonstd-line",
        "Rem. 3.1",
        rline == [0, 0],
        lhs=f"ranks {rline} at v = 1, n = nb",
        rhs="0-dimensional leaves along the real line subgroup",
    )
    _ok(
        rep,
        "rank-nonstd-circle-point",
        "Rem. 3.1",
        poisson_matrix_rank(nonstd.poisson, {"v": i, "n": zero, "nb": zero}, w1) == 2,
        lhs="rank 2 at (i, 0, 0), omega = 1",
        rhs="the circle is not a union of 0-dimensional leaves",
    )

    cyl = catalog.get_preset("cylinder-poisson")
    params = {"omega": one, "k": GaussRational(-2)}
    degenerate = [
        poisson_matrix_rank(cyl.poisson, {"v": pt, "m": zero}, params)
        for pt in (i, -i)
    ]
    _ok(
        rep,
        "rank-cylinder-degenerate",
        "Rem. 3.6",
        degenerate == [0, 0],
        lhs=f"ranks {degenerate} at v = +/- i (omega = 1, k = -2)",
        rhs="omega*v^2 + omega + k = 0 locus has 0-dimensional leaves",
    )
    _ok(
        rep,
        "rank-cylinder-regular",
        "Rem. 3.6",
        poisson_matrix_rank(cyl.poisson, {"v": one, "m": zero}, params) == 2,
        lhs="rank 2 at v = 1",
        rhs="points off the degenerate locus lie in 2-dimensional leaves",
    )

    plane = catalog.get_preset("plane-poisson")
    pk = {"k": GaussRational(-2)}
    _ok(
        rep,
        "rank-plane-hyperbolic",
        "Rem. 2.7",
        poisson_matrix_rank(
            plane.poisson, {"z": GaussRational(1, 1), "zb": GaussRational(1, -1)}, pk
        )
        == 0
        and poisson_matrix_rank(plane.poisson, {"z": one, "zb": one}, pk) == 2,
        lhs="rank 0 on z*zb = -k, rank 2 off it (k = -2)",
        rhs="degenerate locus z*zb = -k",
    )

    # Hamiltonian field relations
    ts = std.tower
    fstd = hamiltonian_fields(std.poisson)
    ok_engine, _ = fstd.relation_holds(
        {"v": ts.poly("v^-1*n*nb"), "n": ts.poly("nb"), "nb": ts.poly("-n")}
    )
    _ok(
        rep,
        "field-relation-std-engine",
        "Rem. 2.3",
        ok_engine,
        lhs="v^-1*n*nb X_v + nb X_n - n X_nb = 0",
        rhs="a pointwise linear relation bounds the leaves by dimension 2",
    )
    printed_ok, witness = fstd.relation_holds(
        {"v": ts.poly("v*n*nb"), "n": ts.poly("nb"), "nb": ts.poly("n")}
    )
    if printed_ok:
        rep.add("field-relation-std-printed", anchor="Rem. 2.3", status=PASS)
    else:
        _discrepancy(
            rep,
            "field-relation-std-printed",
            "Rem. 2.3",
            "vanishing combination: v^-1*n*nb X_v + nb X_n - n X_nb",
            "displayed combination: v*n*nb X_v + nb X_n + n X_nb",
            f"displayed combination does not vanish ({witness}); the geometric "
            "conclusion (generic rank 2) verifies via the engine relation",
        )

    tn = nonstd.tower
    fns = hamiltonian_fields(nonstd.poisson)
    ok_engine, _ = fns.relation_holds(
        {"n": tn.poly("v - v^2"), "nb": tn.poly("v - 1"), "v": tn.poly("n - nb")}
    )
    _ok(
        rep,
        "field-relation-nonstd-engine",
        "Rem. 3.1",
        ok_engine,
        lhs="(v - v^2) X_n + (v - 1) X_nb + (n - nb) X_v = 0",
        rhs="distribution at most 2-dimensional everywhere",
    )
    printed_ok, witness = fns.relation_holds(
        {"n": tn.poly("v - v^2"), "nb": tn.poly("v - 1"), "v": tn.poly("nb - n")}
    )
    if printed_ok:
        rep.add("field-relation-nonstd-printed", anchor="Rem. 3.1", status=PASS)
    else:
        _discrepancy(
            rep,
            "field-relation-nonstd-printed",
            "Rem. 3.1",
            "vanishing combination carries (n - nb) on X_v",
            "displayed combination carries (nb - n) on X_v",
            f"displayed combination does not vanish under the corrected bracket "
            f"table ({witness})",
        )

    # Poisson subgroup loci
    circle = catalog.get_preset("quotient-circle")
    sub = poisson_ideal_check(
        std.poisson,
        [std.tower.gen("n"), std.tower.gen("nb")],
        _vanish_for(std.tower, circle),
    )
    _summarize(rep, "poisson-subgroup-circle-std", "Rem. 2.3", sub)
    qi = catalog.get_preset("quotient-I")
    sub = poisson_ideal_check(
        nonstd.poisson,
        [tn.poly("v - 1"), tn.poly("n - nb")],
        _vanish_for(tn, qi),
    )
    _summarize(rep, "poisson-subgroup-line-nonstd", "Rem. 3.1", sub)
    bad = poisson_ideal_check(
        nonstd.poisson,
        [tn.gen("n"), tn.gen("nb")],
        _vanish_for(tn, circle),
    )
    _ok(
        rep,
        "circle-not-poisson-subgroup-nonstd",
        "Rem. 3.1",
        not bad.clean,
        lhs="restriction of {v,n} to the circle is omega*(1-u) != 0",
        rhs="the circle is not a Poisson subgroup of the nonstandard structure",
        witness_fail="circle unexpectedly closed under the nonstandard bracket",
    )


def _vanish_for(tower, quotient_bundle):
    from .poisson import AlgebraMorphism

    raw = quotient_bundle.raw
    target = load_tower(
        {**raw["target"], "parameters": raw.get("parameters", [])},
        context=tower.context,
    )
    return AlgebraMorphism.load(tower, target, raw["images"])


# ---------------------------------------------------------------------------
# bialgebra
# ---------------------------------------------------------------------------


def suite_bialgebra(rep: CheckReport, degree_bound: int):
    std = catalog.get_preset("std-poisson")
    nonstd = catalog.get_preset("nonstd-poisson")
    lie_preset = catalog.get_preset("e2-lie")
    g_std = lie_from_group(std.tower, std.hopf, names=LIE_NAMES)
    same = all(
        g_std.bracket_basis(i, j) == lie_preset.lie.bracket_basis(i, j)
        for i in range(3)
        for j in range(3)
    )
    _ok(
        rep,
        "bialg-lie-constants",
        "Sec. 2",
        same,
        lhs="[J,X] = -X, [J,Y] = Y, [X,Y] = 0",
        rhs="tangent algebra of the displayed group law",
    )

    d_std = linearize_poisson(std.poisson, names=LIE_NAMES)
    ctx = std.tower.context
    want = {
        0: WedgeBivector(ctx, 3),
        1: WedgeBivector(ctx, 3, {(0, 1): ctx.one}),
        2: WedgeBivector(ctx, 3, {(0, 2): ctx.one}),
    }
    _ok(
        rep,
        "bialg-linearize-std",
        "Sec. 2",
        all(d_std.of(k) == want[k] for k in range(3)),
        lhs="delta(J) = 0, delta(X) = J^X, delta(Y) = J^Y",
        rhs="displayed standard cocommutator",
    )

    d_ns = linearize_poisson(nonstd.poisson, names=LIE_NAMES)
    ctxn = nonstd.tower.context
    w = ctxn.param("omega")
    _ok(
        rep,
        "bialg-linearize-nonstd-p1",
        "Sec. 3",
        (d_ns.of(1) + d_ns.of(2)).is_zero(),
        lhs="delta(P1) = 0 with P1 = X + Y",
        rhs="displayed delta(P1) = 0",
    )
    # delta(P2) = delta(X) - delta(Y) = -2 omega X^Y = -omega P2^P1
    dp2 = d_ns.of(1) - d_ns.of(2)
    engine_txt = "delta(P2) = -omega P2^P1  (= -2*omega X^Y)"
    if dp2 == WedgeBivector(ctxn, 3, {(1, 2): -(w + w)}):
        _discrepancy(
            rep,
            "bialg-delta-p2-printed",
            "Sec. 3",
            engine_txt,
            "delta(P2) = +omega P2^P1",
            "sign differs from the display under P1 = X+Y, P2 = X-Y; the "
            "engine value is the one reproduced by the displayed r-matrix",
        )
    else:
        rep.add("bialg-delta-p2-printed", anchor="Sec. 3", status=FAIL,
                lhs=dp2.text(LIE_NAMES), rhs="-omega P2^P1")
    _discrepancy(
        rep,
        "bialg-delta-j-printed",
        "Sec. 3",
        f"delta(J) = {d_ns.of(0).text(LIE_NAMES)}  (= omega P1^J)",
        "delta(J) = omega J^P2",
        "the linearized delta(J) is proportional to J^P1, not J^P2, under "
        "every natural identification tried",
    )

    for pid, anchor, P in (
        ("std", "Sec. 2", std),
        ("nonstd", "Sec. 3", nonstd),
    ):
        g = lie_from_group(P.tower, P.hopf, names=LIE_NAMES)
        d = linearize_poisson(P.poisson, names=LIE_NAMES)
        sub = cocycle_cojacobi_report(g, d)
        _summarize(rep, f"bialg-cocycle-{pid}", anchor, sub)

    sol_std = coboundary_solve(g_std, d_std)
    _ok(
        rep,
        "bialg-coboundary-std-empty",
        "Sec. 2",
        sol_std.empty,
        lhs="coboundary equation has no solution",
        rhs="the standard cocommutator is non-coboundary",
    )
    g_ns = lie_from_group(nonstd.tower, nonstd.hopf, names=LIE_NAMES)
    sol_ns = coboundary_solve(g_ns, d_ns)
    printed_r = WedgeBivector(ctxn, 3, {(0, 1): w, (0, 2): -w})
    _ok(
        rep,
        "bialg-coboundary-nonstd-rmatrix",
        "Sec. 3",
        (not sol_ns.empty) and sol_ns.contains(ctxn, printed_r),
        lhs="solution set omega*J^(X-Y) + c*X^Y",
        rhs="displayed r-matrix omega J^P2 lies in the solution set",
        witness_fail="displayed r-matrix not recovered",
    )


# ---------------------------------------------------------------------------
# diamond
# ---------------------------------------------------------------------------


def suite_diamond(rep: CheckReport, degree_bound: int):
    for pid, anchor in (
        ("qe2-nonstd", "Sec. 4"),
        ("quantum-cylinder", "Def. 4.1"),
        ("quantum-plane", "Rem. 2.5"),
    ):
        b = catalog.get_preset(pid)
        res = diamond_check(b.tower, degree=max(3, min(degree_bound, 4)))
        _ok(
            rep,
            f"diamond-{pid}",
            anchor,
            res.ok,
            lhs="all overlap words reduce consistently",
            rhs="PBW normal forms are well defined",
            witness_fail=res.describe(),
        )
    raw = dict(catalog.get_preset("qe2-nonstd").raw)
    printed = {
        **raw,
        "tower": [
            raw["tower"][0],
            raw["tower"][1],
            {
                "gen": "nb",
                "sigma": {"v": "v", "n": "n + omega"},
                "delta": {"v": "omega*v^2 - omega*v", "n": "-omega*n"},
            },
        ],
    }
    t_printed = load_tower(printed, validate=False)
    res = diamond_check(t_printed)
    if res.ok:
        rep.add("tower-printed-nonstd-sign", anchor="Sec. 3 / Sec. 4", status=FAIL,
                witness="printed tower unexpectedly confluent")
    else:
        _discrepancy(
            rep,
            "tower-printed-nonstd-sign",
            "Sec. 3 / Sec. 4",
            "engine tower: sigma(n) = n - omega, delta(n) = omega*n "
            "([n,nb] = omega*(nb-n)) is confluent",
            "displayed commutator [n,nb] = omega*(n-nb) quantizes to a "
            "non-confluent tower",
            f"witness overlap: {res.describe()}",
        )


# ---------------------------------------------------------------------------
# hopf-axioms / relations
# ---------------------------------------------------------------------------


def suite_hopf_axioms(rep: CheckReport, degree_bound: int):
    for pid, anchor in (("fun-e2", "Sec. 2"), ("qe2-nonstd", "Sec. 4")):
        b = catalog.get_preset(pid)
        sub = hopf_axioms_report(b.hopf)
        _summarize(rep, f"hopf-axioms-{pid}", anchor, sub)


def suite_relations(rep: CheckReport, degree_bound: int):
    for pid, anchor in (("fun-e2", "Sec. 2"), ("qe2-nonstd", "Sec. 4")):
        b = catalog.get_preset(pid)
        sub = respects_relations_report(b.tower, b.hopf)
        _summarize(rep, f"relations-{pid}", anchor, sub)
    qp = catalog.get_preset("quantum-plane")
    _summarize(
        rep,
        "relations-quantum-plane-star",
        "Rem. 2.5",
        respects_relations_report(qp.tower, None),
    )
    qc = catalog.get_preset("quantum-cylinder")
    sub = respects_relations_report(qc.tower, None, star_status_on_fail=DISCREPANCY)
    if sub.worst == DISCREPANCY:
        bad = next(r for r in sub.records if r.status == DISCREPANCY)
        _discrepancy(
            rep,
            "relations-quantum-cylinder-star",
            "Def. 4.1",
            bad.lhs_canonical,
            bad.rhs_canonical,
            "the displayed star table (m* = -m) is inconsistent with the "
            "displayed relations when omega* = -omega: (v*m)* and "
            "(m*v - omega*(v^2-1))* differ by 2*omega*(v^-2 - 1); the embedded "
            "star is m* = -m + omega*(v - v^-1)",
        )
    else:
        _summarize(rep, "relations-quantum-cylinder-star", "Def. 4.1", sub)

    # Def. 4.1's second displayed relation vs the rule derived from the first
    engine_rhs = qc.tower.poly("m*vb")
    printed_rhs = qc.tower.poly("vb*m + omega*vb - omega*vb^2")
    derived_text = exprio.format_canonical(engine_rhs)
    if engine_rhs == printed_rhs:
        rep.add("def41-second-relation-printed", anchor="Def. 4.1", status=PASS)
    else:
        _discrepancy(
            rep,
            "def41-second-relation-printed",
            "Def. 4.1",
            f"m*vb = {derived_text}  (vb*m = m*vb + omega*(1 - vb^2))",
            "vb*m = m*vb + omega*(vb - vb^2)",
            "the displayed second relation contradicts the one derived from "
            "v*vb = 1 and the first relation",
        )

    amb = catalog.get_preset("qe2-nonstd").tower
    from .ncalg import commutator

    embedded = commutator(amb.gen("v"), amb.poly("vb*nb - v*n"))
    standalone = commutator(qc.tower.gen("v"), qc.tower.gen("m"))
    _discrepancy(
        rep,
        "def41-first-relation-vs-embedded",
        "Def. 4.1 / Prop. 3.2",
        f"embedded [v, vb*nb - v*n] = {exprio.format_canonical(embedded)}",
        f"standalone [v, m] = {exprio.format_canonical(standalone)}",
        "the standalone cylinder uses the displayed bracket; the embedded "
        "generator satisfies the covariant one (omega*(v-1)^2)",
    )


# ---------------------------------------------------------------------------
# coideal / hopf-ideal / closure
# ---------------------------------------------------------------------------


def suite_coideal(rep: CheckReport, degree_bound: int):
    qc = catalog.get_preset("quantum-cylinder")
    qe2 = catalog.get_preset("qe2-nonstd")
    B = qc.embedded_subalgebra
    sub = coideal_report(B, qe2.hopf)
    _summarize(rep, "coideal-cylinder", "Prop. 4.2", sub)

    amb = qe2.tower
    m = amb.poly("vb*nb - v*n")
    dm = qe2.hopf.coproduct(m)
    expected = exprio.elaborate_expr(
        exprio.parse_expr("1 (x) (vb*nb - v*n) + vb*nb (x) vb - v*n (x) v"),
        (amb, amb),
    )
    _ok(
        rep,
        "coideal-delta-m-exact",
        "Prop. 4.2",
        dm == expected,
        lhs=exprio.format_canonical(dm),
        rhs="1 (x) m + vb*nb (x) vb - v*n (x) v",
    )

    # PBW basis: v^r m^s independent, standalone and embedded
    t = qc.tower
    basis = []
    for r in range(-3, 4):
        for s in range(4):
            basis.append(normal_form(t, [("v", r), ("m", s)]))
    sol = span_solve(NCPoly.zero(t), basis)
    ok_standalone = sol is not None and sol.unique and all(
        not c for c in sol.coefficients
    )
    emb = []
    for r in range(-3, 4):
        for s in range(4):
            emb.append(normal_form(amb, [("v", r)]) * m ** s)
    sol_e = span_solve(NCPoly.zero(amb), emb)
    ok_embedded = sol_e is not None and sol_e.unique
    _ok(
        rep,
        "basis-v-r-m-s-independent",
        "Prop. 4.2",
        ok_standalone and ok_embedded,
        lhs="28 elements (|r| <= 3, s <= 3), standalone and embedded",
        rhs="v^r m^s is a vector-space basis",
    )

    rng = random.Random(20240)
    ok_deg = True
    for _ in range(100):
        p = NCPoly.zero(t)
        q = NCPoly.zero(t)
        while p.is_zero():
            p = _random_cyl(t, rng, degree_bound)
        while q.is_zero():
            q = _random_cyl(t, rng, degree_bound)
        if graded_degree(p * q, "m") != graded_degree(p, "m") + graded_degree(
            q, "m"
        ):
            ok_deg = False
            break
    _ok(
        rep,
        "degm-additivity",
        "Prop. 4.2",
        ok_deg,
        lhs="deg_m(p*q) = deg_m(p) + deg_m(q) on 100 random pairs",
        rhs="the cylinder is a domain graded by deg_m",
    )


def _random_cyl(t, rng, degree_bound):
    out = NCPoly.zero(t)
    for _ in range(rng.randint(1, 3)):
        r = rng.randint(-degree_bound // 2, degree_bound // 2)
        s = rng.randint(0, max(1, degree_bound // 2))
        c = t.context.from_int(rng.randint(-4, 4))
        out = out + normal_form(t, [("v", r), ("m", s)]).scale(c)
    return out


def suite_hopf_ideal(rep: CheckReport, degree_bound: int):
    qi = catalog.get_preset("quotient-I")
    qe2 = catalog.get_preset("qe2-nonstd")
    _summarize(rep, "quotient-I-well-defined", "Prop. 4.4", quotient_check(qi.quotient))
    gens = [qe2.tower.poly("v - 1"), qe2.tower.poly("n - nb")]
    sub = hopf_star_ideal_report(gens, qi.quotient, qe2.hopf)
    _summarize(rep, "hopf-star-ideal-I", "Prop. 4.4", sub)


def suite_closure(rep: CheckReport, degree_bound: int):
    qe2 = catalog.get_preset("qe2-nonstd")
    qi = catalog.get_preset("quotient-I")
    qc = catalog.get_preset("quantum-cylinder")
    amb, H, pi = qe2.tower, qe2.hopf, qi.quotient
    m = amb.poly("vb*nb - v*n")

    for cid, x in (
        ("closure-coinvariance-v", amb.gen("v")),
        ("closure-coinvariance-vb", amb.poly("v^-1")),
        ("closure-coinvariance-m", m),
    ):
        _ok(
            rep,
            cid,
            "Prop. 4.4",
            coinvariance_check(x, pi, H, "right"),
            lhs="(id (x) pi) Delta(b) = b (x) 1",
            rhs="b lies in the coinvariant subalgebra",
        )
    _ok(
        rep,
        "closure-coinvariance-n-excluded",
        "Prop. 4.4",
        not coinvariance_check(amb.gen("n"), pi, H, "right")
        and not coinvariance_check(amb.gen("n"), pi, H, "left"),
        lhs="n fails coinvariance on both sides",
        rhs="n does not belong to the closure",
    )
    residual = coinvariance_residual(m, pi, H, "left")
    _discrepancy(
        rep,
        "closure-coinvariance-side-printed",
        "Prop. 4.4",
        "(id (x) pi) Delta(m) = m (x) 1 holds (right coinvariant)",
        "(pi (x) id) Delta(m) = 1 (x) m as displayed",
        "the displayed left-side computation regroups terms across the tensor "
        f"sign; the actual left residual is {exprio.format_canonical(residual)}",
    )

    ok_bounded = True
    for r in range(-2, 3):
        for s in range(3):
            x = normal_form(amb, [("v", r)]) * m ** s
            if not coinvariance_check(x, pi, H, "right"):
                ok_bounded = False
    for bad in (amb.poly("v*n"), amb.gen("nb")):
        if coinvariance_check(bad, pi, H, "right"):
            ok_bounded = False
    _ok(
        rep,
        "closure-coinvariants-bounded",
        "Prop. 4.4",
        ok_bounded,
        lhs="every v^r m^s (|r| <= 2, s <= 2) is right coinvariant; unbalanced "
        "monomials are not",
        rhs="the cylinder matches the coinvariant subalgebra at desk scale",
    )

    B = qc.embedded_subalgebra
    sig = sigma_generators(B, H, max_power=2)
    all_in = all(ideal_member(val, pi) for _, val in sig)
    _ok(
        rep,
        "closure-sigma-outputs-in-ideal",
        "Prop. 4.4",
        all_in,
        lhs="(S^p - eps)(b) in I for b in {v, vb, m}, p <= 2",
        rhs="Sigma(C) is contained in I",
    )
    sig1 = dict(sigma_generators(B, H, max_power=1))
    _ok(
        rep,
        "closure-sigma-vb-exact",
        "Prop. 4.4",
        sig1["(S^1 - eps)(vb)"] == amb.poly("v - 1"),
        lhs=exprio.format_canonical(sig1["(S^1 - eps)(vb)"]),
        rhs="v - 1",
    )
    s_m = sig1["(S^1 - eps)(m)"]
    if s_m == amb.poly("n - nb"):
        rep.add("closure-sigma-m-printed", anchor="Prop. 4.4", status=PASS)
    else:
        _discrepancy(
            rep,
            "closure-sigma-m-printed",
            "Prop. 4.4",
            exprio.format_canonical(s_m),
            "n - nb",
            "difference omega*(v^-1 - v) lies in I (ideal_member true), so the "
            "closure conclusion is unaffected",
        )
    _ok(
        rep,
        "closure-s-n-minus-nb",
        "Prop. 4.4",
        H.antipode(amb.poly("n - nb")) == m,
        lhs=exprio.format_canonical(H.antipode(amb.poly("n - nb"))),
        rhs="vb*nb - v*n  (= m)",
    )
    engine_sv = H.antipode(amb.poly("v - 1"))
    _discrepancy(
        rep,
        "closure-s-v-minus-1-sign",
        "Prop. 4.4",
        exprio.format_canonical(engine_sv),
        "-vb*(1 - v)  (= 1 - vb)",
        "overall sign differs from the display; immaterial to ideal membership",
    )
    gens_ok = ideal_member(
        amb.poly("v - 1") - sig1["(S^1 - eps)(vb)"], pi
    ) and ideal_member(amb.poly("n - nb") - sig1["(S^1 - eps)(m)"], pi)
    _ok(
        rep,
        "closure-ideal-generators-recovered",
        "Prop. 4.4",
        gens_ok,
        lhs="each generator of I differs from a Sigma output by a kernel element",
        rhs="I is contained in the Sigma-generated ideal",
    )


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------


SUITES = {
    "jacobi": (suite_jacobi,),
    "multiplicativity": (suite_multiplicativity,),
    "covariance": (suite_covariance,),
    "families": (suite_families,),
    "foliation": (suite_foliation,),
    "bialgebra": (suite_bialgebra,),
    "diamond": (suite_diamond,),
    "hopf-axioms": (suite_hopf_axioms,),
    "relations": (suite_relations,),
    "coideal": (suite_coideal,),
    "hopf-ideal": (suite_hopf_ideal,),
    "closure": (suite_closure,),
}
SUITES["all"] = tuple(fn for name in (
    "jacobi",
    "multiplicativity",
    "covariance",
    "families",
    "foliation",
    "bialgebra",
    "diamond",
    "hopf-axioms",
    "relations",
    "coideal",
    "hopf-ideal",
    "closure",
) for fn in SUITES[name])


KNOWN_PARAMS = ("omega", "k", "q")


def run_suite(suite: str, params=None, degree_bound: int = 4) -> CheckReport:
    """Run every registered check of the suite; failing checks never abort
    the run.  ``params`` entries are validated against the declared
    parameter names (the registered checks are symbolic or use the pinned
    evaluation points of the acceptance criteria)."""
    if suite not in SUITES:
        raise KeyError(f"unknown suite {suite!r}")
    if params:
        for name in params:
            if name not in KNOWN_PARAMS:
                raise ValueError(f"unknown parameter {name!r}")
    if degree_bound < 2:
        raise ValueError("degree bound must be >= 2")
    rep = CheckReport(suite)
    for fn in SUITES[suite]:
        try:
            fn(rep, degree_bound)
        except Exception as e:  # register, never abort
            rep.add(
                f"internal-error[{fn.__name__}]",
                status=FAIL,
                witness=f"{type(e).__name__}: {e}",
            )
    return rep
