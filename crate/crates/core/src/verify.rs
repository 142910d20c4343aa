//! Named verification suites, the suite registry and the gated pipeline.

use crate::bicross::{conditions, direct_t1, direct_t2, Instance, SideData, A, B, C, D};
use crate::error::{Error, Result};
use crate::mhopf::{integral_checks, pairing_checks, positivity_check, star_checks, verify_mha, Mha};
use crate::report::{check_eq, check_with, Check, Meta, ProbeConfig, Report};
use crate::tensor::{Atom, LinOp, Tag, Vector};

pub const MATCHED_PAIR: &str = "matched-pair";
pub const MODULE_ALGEBRA: &str = "module-algebra";
pub const COMODULE_COALGEBRA: &str = "comodule-coalgebra";
pub const FINITE_SUPPORT: &str = "finite-support";
pub const AB_COMPAT: &str = "ab-compatibility";
pub const CD_COMPAT: &str = "cd-compatibility";
pub const MHA_AXIOMS: &str = "mha-axioms";
pub const INTEGRALS: &str = "integrals";
pub const DUALITY: &str = "duality";
pub const SPECIAL_CASES: &str = "special-cases";
pub const STAR: &str = "star-structure";

pub const SUITES: &[&str] = &[
    MATCHED_PAIR,
    MODULE_ALGEBRA,
    COMODULE_COALGEBRA,
    FINITE_SUPPORT,
    AB_COMPAT,
    CD_COMPAT,
    MHA_AXIOMS,
    INTEGRALS,
    DUALITY,
    SPECIAL_CASES,
    STAR,
];

const MHA_IDS: &[&str] = &[
    "associativity",
    "nondegenerate",
    "t1-bijective",
    "t2-bijective",
    "coassociativity",
    "counit-left",
    "counit-right",
    "antipode-left",
    "antipode-right",
    "regular",
    "antipode-antimultiplicative",
    "delta-multiplicative",
    "counit-multiplicative",
    "unit",
];

const STAR_IDS: &[&str] = &["star-involutive", "star-antimultiplicative", "star-antipode", "star-counit", "star-coproduct"];

const PAIRING_IDS: &[&str] = &["product-coproduct", "coproduct-product", "antipode", "unit-counit"];

const ALGEBRAS: &[&str] = &["A", "B", "C", "D", "AB", "CD"];

/// Every check id, grouped by the suite that owns it.
pub fn registry() -> Vec<(&'static str, Vec<String>)> {
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let mut mha: Vec<String> = ALGEBRAS
        .iter()
        .flat_map(|a| MHA_IDS.iter().map(move |i| format!("mha.{a}.{i}")))
        .collect();
    mha.extend(s(&[
        "mha.AB.t1-direct",
        "mha.AB.t2-direct",
        "mha.AB.delta-closed-form",
        "mha.AB.antipode-closed-form",
        "mha.CD.delta-closed-form",
        "mha.CD.antipode-closed-form",
    ]));
    let mut integrals = Vec::new();
    for a in ["A", "B", "C", "D"] {
        integrals.push(format!("mha.{a}.right-invariance"));
        integrals.push(format!("mha.{a}.right-invariance-left-covered"));
        integrals.push(format!("mha.{a}.left-invariance"));
    }
    integrals.extend(s(&[
        "mha.AB.right-invariance",
        "mha.AB.right-invariance-left-covered",
        "mha.AB.psi-positive",
        "mha.CD.left-invariance",
        "mha.CD.phi-positive",
    ]));
    let mut star: Vec<String> = ALGEBRAS
        .iter()
        .flat_map(|a| STAR_IDS.iter().map(move |i| format!("mha.{a}.{i}")))
        .collect();
    star.extend(s(&["ab.action-star", "ab.coaction-star", "cd.action-star", "cd.coaction-star"]));
    let duality = ["pair.AB-CD", "pair.A-C", "pair.D-B"]
        .iter()
        .flat_map(|p| PAIRING_IDS.iter().map(move |i| format!("{p}.{i}")))
        .collect();
    vec![
        (
            MATCHED_PAIR,
            s(&["mp.tr-action", "mp.tl-action", "mp.tr-product", "mp.tl-product", "mp.identity-acts-trivially", "mp.identity-fixed"]),
        ),
        (
            MODULE_ALGEBRA,
            s(&[
                "ab.module-law",
                "ab.module-unital",
                "ab.twist-multiplicative-b",
                "ab.twist-multiplicative-a",
                "ab.twist-inverse",
                "ab.twist-inverse-matrix",
                "ab.counit-action",
                "ab.bullet-coproduct",
                "ab.smash-closed-form",
                "cd.module-law",
                "cd.module-unital",
                "cd.twist-multiplicative-c",
                "cd.twist-multiplicative-d",
                "cd.twist-inverse",
                "cd.twist-inverse-matrix",
                "cd.counit-action",
                "cd.smash-closed-form",
            ]),
        ),
        (
            COMODULE_COALGEBRA,
            s(&[
                "ab.coaction-coassociative",
                "ab.comodule-coalgebra",
                "ab.coaction-counit-b",
                "ab.coaction-counit-a",
                "ab.cotwist-inverse",
                "cd.coaction-coassociative",
                "cd.comodule-coalgebra",
                "cd.coaction-counit-c",
                "cd.coaction-counit-d",
                "cd.cotwist-inverse",
            ]),
        ),
        (
            FINITE_SUPPORT,
            s(&["ab.finite-support", "ab.coproduct-cotwist-form", "cd.finite-support", "cd.coproduct-cotwist-form"]),
        ),
        (AB_COMPAT, s(&["ab.c1", "ab.c2", "ab.c3"])),
        (CD_COMPAT, s(&["cd.c1", "cd.c2", "cd.c3"])),
        (MHA_AXIOMS, mha),
        (INTEGRALS, integrals),
        (DUALITY, duality),
        (
            SPECIAL_CASES,
            s(&[
                "special.trivial-action.twist-flip",
                "special.trivial-action.smash-tensor",
                "special.trivial-coaction.cotwist-flip",
                "special.trivial-coaction.t1-componentwise",
                "special.trivial-coaction.t2-componentwise",
            ]),
        ),
        (STAR, star),
    ]
}

fn on(op: &LinOp, legs: &[usize], ambient: &[Tag]) -> Result<LinOp> {
    LinOp::on_legs(op, legs, ambient)
}

fn elem_probe(inst: &Instance, cfg: &ProbeConfig, id: &str, shape: &[Tag]) -> crate::report::Probes {
    cfg.basis_probes(id, &inst.uni, shape)
}

fn words(v: &Vector) -> Vec<Atom> {
    v.iter().next().map(|(w, _)| w.clone()).unwrap_or_default()
}

fn singleton(t: Tag, e: crate::group::Elem) -> Vector {
    Vector::basis(vec![Atom::new(t, e)])
}

/// The six matched-pair identities; group atoms of slot 0 are `H`, slot 1 are `K`.
pub fn matched_pair_suite(inst: &Instance, cfg: &ProbeConfig) -> Report {
    let mp = &inst.mp;
    let (h, k) = (&mp.h, &mp.k);
    let (th, tk) = (Tag::group(0), Tag::group(1));
    let mut r = Report::new(MATCHED_PAIR);
    let u = &inst.uni;

    let meta = Meta::new("mp.tr-action", "▸ is a left action", "(hh')▸k = h▸(h'▸k)");
    let p = elem_probe(inst, cfg, &meta.id, &[th, th, tk]);
    r.checks.push(check_with(&meta, &p, u, |v| {
        let w = words(v);
        let (a, b, c) = (&w[0].elem, &w[1].elem, &w[2].elem);
        Ok((singleton(tk, mp.tr(&h.mul(a, b), c)), singleton(tk, mp.tr(a, &mp.tr(b, c)))))
    }));

    let meta = Meta::new("mp.tl-action", "◂ is a right action", "h◂(kk') = (h◂k)◂k'");
    let p = elem_probe(inst, cfg, &meta.id, &[th, tk, tk]);
    r.checks.push(check_with(&meta, &p, u, |v| {
        let w = words(v);
        let (a, b, c) = (&w[0].elem, &w[1].elem, &w[2].elem);
        Ok((singleton(th, mp.tl(a, &k.mul(b, c))), singleton(th, mp.tl(&mp.tl(a, b), c))))
    }));

    let meta = Meta::new("mp.tr-product", "▸ on products", "h▸(kk') = (h▸k)((h◂k)▸k')");
    let p = elem_probe(inst, cfg, &meta.id, &[th, tk, tk]);
    r.checks.push(check_with(&meta, &p, u, |v| {
        let w = words(v);
        let (a, b, c) = (&w[0].elem, &w[1].elem, &w[2].elem);
        let rhs = k.mul(&mp.tr(a, b), &mp.tr(&mp.tl(a, b), c));
        Ok((singleton(tk, mp.tr(a, &k.mul(b, c))), singleton(tk, rhs)))
    }));

    let meta = Meta::new("mp.tl-product", "◂ on products", "(hh')◂k = (h◂(h'▸k))(h'◂k)");
    let p = elem_probe(inst, cfg, &meta.id, &[th, th, tk]);
    r.checks.push(check_with(&meta, &p, u, |v| {
        let w = words(v);
        let (a, b, c) = (&w[0].elem, &w[1].elem, &w[2].elem);
        let rhs = h.mul(&mp.tl(a, &mp.tr(b, c)), &mp.tl(b, c));
        Ok((singleton(th, mp.tl(&h.mul(a, b), c)), singleton(th, rhs)))
    }));

    let meta = Meta::new("mp.identity-acts-trivially", "identities act trivially", "e▸k = k, h◂e = h");
    let p = elem_probe(inst, cfg, &meta.id, &[th, tk]);
    r.checks.push(check_with(&meta, &p, u, |v| {
        let w = words(v);
        let (a, b) = (&w[0].elem, &w[1].elem);
        let l = singleton(tk, mp.tr(&h.identity(), b)).tensor(&singleton(th, mp.tl(a, &k.identity())));
        Ok((l, singleton(tk, b.clone()).tensor(&singleton(th, a.clone()))))
    }));

    let meta = Meta::new("mp.identity-fixed", "identities are fixed", "h▸e = e, e◂k = e");
    let p = elem_probe(inst, cfg, &meta.id, &[th, tk]);
    r.checks.push(check_with(&meta, &p, u, |v| {
        let w = words(v);
        let (a, b) = (&w[0].elem, &w[1].elem);
        let l = singleton(tk, mp.tr(a, &k.identity())).tensor(&singleton(th, mp.tl(&h.identity(), b)));
        Ok((l, singleton(tk, k.identity()).tensor(&singleton(th, h.identity()))))
    }));
    r
}

fn eq(meta: &Meta, lhs: &LinOp, rhs: &LinOp, cfg: &ProbeConfig, inst: &Instance) -> Check {
    check_eq(meta, lhs, rhs, &cfg.probes(&meta.id, &inst.uni, &lhs.input), &inst.uni)
}

fn inverse_pair(meta: &Meta, f: &LinOp, g: &LinOp, cfg: &ProbeConfig, inst: &Instance) -> Result<Check> {
    // g f = ι on the domain of f and f g = ι on its codomain
    let c = eq(meta, &LinOp::compose(g, f)?, &LinOp::identity(f.input.clone()), cfg, inst);
    if !c.passed() {
        return Ok(c);
    }
    let mut c2 = eq(meta, &LinOp::compose(f, g)?, &LinOp::identity(f.output.clone()), cfg, inst);
    if c2.passed() {
        c2.probes = format!("{} both ways", c.probes);
    }
    Ok(c2)
}

fn matrix_inverse(meta: &Meta, f: &LinOp, closed: &LinOp, inst: &Instance) -> Check {
    let u = &inst.uni;
    let Some(n) = u.count(&f.input) else {
        return meta.skip("infinite basis");
    };
    let desc = format!("exhaustive ({n})");
    match crate::matrix::invert(f, u) {
        Err(e) => meta.fail_global(&desc, e.to_string(), f.name.clone(), "invertible".into()),
        Ok(m) => {
            let probes = crate::report::Probes {
                vectors: u.enumerate(&closed.input).expect("finite").into_iter().map(Vector::basis).collect(),
                desc,
            };
            check_eq(meta, closed, &m, &probes, u)
        }
    }
}

fn module_checks_ab(inst: &Instance, cfg: &ProbeConfig) -> Result<Vec<Check>> {
    let s = &inst.ab;
    let (a, b) = (&s.l, &s.rt);
    let mut out = Vec::new();
    let baa = vec![B, A, A];
    let bba = vec![B, B, A];

    let meta = Meta::new("ab.module-law", "right module law", "(b◂a)◂a' = b◂(aa')");
    let lhs = LinOp::chain("◂(◂⊗ι)", vec![on(&s.act, &[0, 1], &baa)?, s.act.clone()])?;
    let rhs = LinOp::chain("◂(ι⊗m_A)", vec![on(&a.mult, &[1, 2], &baa)?, s.act.clone()])?;
    out.push(eq(&meta, &lhs, &rhs, cfg, inst));

    let meta = Meta::new("ab.module-unital", "unital action", "b◂1 = b");
    match &a.unit {
        Some(one) => {
            let (act, one) = (s.act.clone(), one.clone());
            let lhs = LinOp::new("b◂1", vec![B], vec![B], move |w| act.apply(&Vector::basis(w.to_vec()).tensor(&one)));
            out.push(eq(&meta, &lhs, &LinOp::identity(vec![B]), cfg, inst));
        }
        None => out.push(meta.skip("A has no unit")),
    }

    let meta = Meta::new("ab.twist-multiplicative-b", "twist respects the product of B", "R(m_B⊗ι) = (ι⊗m_B)(R⊗ι)(ι⊗R)");
    let lhs = LinOp::chain("R(m_B⊗ι)", vec![on(&b.mult, &[0, 1], &bba)?, s.tw.r.clone()])?;
    let rhs = LinOp::chain(
        "(ι⊗m_B)(R⊗ι)(ι⊗R)",
        vec![on(&s.tw.r, &[1, 2], &bba)?, on(&s.tw.r, &[0, 1], &[B, A, B])?, on(&b.mult, &[1, 2], &[A, B, B])?],
    )?;
    out.push(eq(&meta, &lhs, &rhs, cfg, inst));

    let meta = Meta::new("ab.twist-multiplicative-a", "twist respects the product of A", "R(ι⊗m_A) = (m_A⊗ι)(ι⊗R)(R⊗ι)");
    let lhs = LinOp::chain("R(ι⊗m_A)", vec![on(&a.mult, &[1, 2], &baa)?, s.tw.r.clone()])?;
    let rhs = LinOp::chain(
        "(m_A⊗ι)(ι⊗R)(R⊗ι)",
        vec![on(&s.tw.r, &[0, 1], &baa)?, on(&s.tw.r, &[1, 2], &[A, B, A])?, on(&a.mult, &[0, 1], &[A, A, B])?],
    )?;
    out.push(eq(&meta, &lhs, &rhs, cfg, inst));

    let meta = Meta::new("ab.twist-inverse", "twist inverse", "R^-1 R = ι, R R^-1 = ι");
    out.push(inverse_pair(&meta, &s.tw.r, &s.tw.r_inv, cfg, inst)?);
    let meta = Meta::new("ab.twist-inverse-matrix", "twist inverse equals the matrix inverse", "R^-1 = [R]^-1");
    out.push(matrix_inverse(&meta, &s.tw.r, &s.tw.r_inv, inst));

    let meta = Meta::new("ab.counit-action", "counit is invariant", "ε_B(b◂a) = ε_B(b)ε_A(a)");
    let lhs = LinOp::compose(&b.counit, &s.act)?;
    let rhs = LinOp::op_tensor(&b.counit, &a.counit)?;
    out.push(eq(&meta, &lhs, &rhs, cfg, inst));

    let meta = Meta::new("ab.bullet-coproduct", "coproduct of a moved element", "Δ_B(q◂a) = Δ_B(q)•Δ#(a)");
    let (lhs, rhs) = conditions::ab_bullet(s)?;
    out.push(eq(&meta, &lhs, &rhs, cfg, inst));

    let meta = Meta::new("ab.smash-closed-form", "smash product closed form", "(hδ_k)(h'δ_k') = [k' = h'^-1▸k] hh'δ_k'");
    out.push(eq(&meta, &s.mult()?, &inst.ab_mult_closed(), cfg, inst));
    Ok(out)
}

fn module_checks_cd(inst: &Instance, cfg: &ProbeConfig) -> Result<Vec<Check>> {
    let s = &inst.cd;
    let (c, d) = (&s.l, &s.rt);
    let mut out = Vec::new();
    let ddc = vec![D, D, C];
    let dcc = vec![D, C, C];

    let meta = Meta::new("cd.module-law", "left module law", "d▸(d'▸c) = (dd')▸c");
    let lhs = LinOp::chain("▸(ι⊗▸)", vec![on(&s.act, &[1, 2], &ddc)?, s.act.clone()])?;
    let rhs = LinOp::chain("▸(m_D⊗ι)", vec![on(&d.mult, &[0, 1], &ddc)?, s.act.clone()])?;
    out.push(eq(&meta, &lhs, &rhs, cfg, inst));

    let meta = Meta::new("cd.module-unital", "unital action", "1▸c = c");
    match &d.unit {
        Some(one) => {
            let (act, one) = (s.act.clone(), one.clone());
            let lhs = LinOp::new("1▸c", vec![C], vec![C], move |w| act.apply(&one.tensor(&Vector::basis(w.to_vec()))));
            out.push(eq(&meta, &lhs, &LinOp::identity(vec![C]), cfg, inst));
        }
        None => out.push(meta.skip("D has no unit")),
    }

    let meta = Meta::new("cd.twist-multiplicative-c", "twist respects the product of C", "R(ι⊗m_C) = (m_C⊗ι)(ι⊗R)(R⊗ι)");
    let lhs = LinOp::chain("R(ι⊗m_C)", vec![on(&c.mult, &[1, 2], &dcc)?, s.tw.r.clone()])?;
    let rhs = LinOp::chain(
        "(m_C⊗ι)(ι⊗R)(R⊗ι)",
        vec![on(&s.tw.r, &[0, 1], &dcc)?, on(&s.tw.r, &[1, 2], &[C, D, C])?, on(&c.mult, &[0, 1], &[C, C, D])?],
    )?;
    out.push(eq(&meta, &lhs, &rhs, cfg, inst));

    let meta = Meta::new("cd.twist-multiplicative-d", "twist respects the product of D", "R(m_D⊗ι) = (ι⊗m_D)(R⊗ι)(ι⊗R)");
    let lhs = LinOp::chain("R(m_D⊗ι)", vec![on(&d.mult, &[0, 1], &ddc)?, s.tw.r.clone()])?;
    let rhs = LinOp::chain(
        "(ι⊗m_D)(R⊗ι)(ι⊗R)",
        vec![on(&s.tw.r, &[1, 2], &ddc)?, on(&s.tw.r, &[0, 1], &[D, C, D])?, on(&d.mult, &[1, 2], &[C, D, D])?],
    )?;
    out.push(eq(&meta, &lhs, &rhs, cfg, inst));

    let meta = Meta::new("cd.twist-inverse", "twist inverse", "R^-1 R = ι, R R^-1 = ι");
    out.push(inverse_pair(&meta, &s.tw.r, &s.tw.r_inv, cfg, inst)?);
    let meta = Meta::new("cd.twist-inverse-matrix", "twist inverse equals the matrix inverse", "R^-1 = [R]^-1");
    out.push(matrix_inverse(&meta, &s.tw.r, &s.tw.r_inv, inst));

    let meta = Meta::new("cd.counit-action", "counit is invariant", "ε_C(d▸c) = ε_D(d)ε_C(c)");
    let lhs = LinOp::compose(&c.counit, &s.act)?;
    let rhs = LinOp::op_tensor(&d.counit, &c.counit)?;
    out.push(eq(&meta, &lhs, &rhs, cfg, inst));

    let meta = Meta::new("cd.smash-closed-form", "smash product closed form", "(δ_h k)(δ_g k') = [h = g◂k^-1] δ_h kk'");
    out.push(eq(&meta, &s.mult()?, &inst.cd_mult_closed(), cfg, inst));
    Ok(out)
}

pub fn module_algebra_suite(inst: &Instance, cfg: &ProbeConfig) -> Result<Report> {
    let mut r = Report::new(MODULE_ALGEBRA);
    r.checks.extend(module_checks_ab(inst, cfg)?);
    r.checks.extend(module_checks_cd(inst, cfg)?);
    Ok(r)
}

pub fn comodule_coalgebra_suite(inst: &Instance, cfg: &ProbeConfig) -> Result<Report> {
    let mut r = Report::new(COMODULE_COALGEBRA);
    let s = &inst.ab;
    let (a, b, t) = (&s.l, &s.rt, &s.tw.t);
    let abb = vec![A, B, B];

    let meta = Meta::new("ab.coaction-coassociative", "coaction is coassociative", "(Δ_B⊗ι)Γ = (ι⊗Γ)Γ");
    let lhs = LinOp::chain(
        "(T1^B⊗ι)(ι⊗σ)(T⊗ι)",
        vec![on(t, &[0, 1], &abb)?, LinOp::permute(vec![B, A, B], &[0, 2, 1])?, on(&b.t1, &[0, 1], &[B, B, A])?],
    )?;
    let rhs = LinOp::chain(
        "(ι⊗T)(T⊗ι)(ι⊗T1^B)",
        vec![on(&b.t1, &[1, 2], &abb)?, on(t, &[0, 1], &abb)?, on(t, &[1, 2], &[B, A, B])?],
    )?;
    r.checks.push(eq(&meta, &lhs, &rhs, cfg, inst));

    let meta = Meta::new("ab.comodule-coalgebra", "comodule coalgebra", "(ι_B⊗Δ_A)T = (T⊗ι_A)(ι_A⊗T)(Δ_A⊗ι_B)");
    let aba = vec![A, B, A];
    let da = a.delta.as_ref().ok_or_else(|| Error::PreconditionFailed("A needs a finite coproduct".into()))?;
    let lhs = LinOp::chain("(ι⊗T1^A)(T⊗ι)", vec![on(t, &[0, 1], &aba)?, on(&a.t1, &[1, 2], &[B, A, A])?])?;
    let rhs = LinOp::chain(
        "(T⊗ι)(ι⊗ι⊗m_A)(ι⊗T⊗ι)(Δ_A⊗ι⊗ι)",
        vec![
            on(da, &[0], &aba)?,
            on(t, &[1, 2], &[A, A, B, A])?,
            on(&a.mult, &[2, 3], &[A, B, A, A])?,
            on(t, &[0, 1], &aba)?,
        ],
    )?;
    r.checks.push(eq(&meta, &lhs, &rhs, cfg, inst));

    let meta = Meta::new("ab.coaction-counit-b", "counit of B", "(ε_B⊗ι)T = ι⊗ε_B");
    let lhs = LinOp::chain("(ε_B⊗ι)T", vec![t.clone(), on(&b.counit, &[0], &[B, A])?])?;
    let rhs = on(&b.counit, &[1], &[A, B])?;
    r.checks.push(eq(&meta, &lhs, &rhs, cfg, inst));

    let meta = Meta::new("ab.coaction-counit-a", "counit of A", "(ι⊗ε_A)T = ε_A⊗ι");
    let lhs = LinOp::chain("(ι⊗ε_A)T", vec![t.clone(), on(&a.counit, &[1], &[B, A])?])?;
    let rhs = on(&a.counit, &[0], &[A, B])?;
    r.checks.push(eq(&meta, &lhs, &rhs, cfg, inst));

    let meta = Meta::new("ab.cotwist-inverse", "cotwist inverse", "T^-1 T = ι, T T^-1 = ι");
    r.checks.push(inverse_pair(&meta, t, &s.tw.t_inv, cfg, inst)?);

    let s = &inst.cd;
    let (c, d, t) = (&s.l, &s.rt, &s.tw.t);
    let ccd = vec![C, C, D];
    let meta = Meta::new("cd.coaction-coassociative", "coaction is coassociative", "(Γ⊗ι)Γ = (ι⊗Δ_C)Γ");
    let lhs = LinOp::chain(
        "(ι⊗T2^C)σ12(ι⊗T)",
        vec![on(t, &[1, 2], &ccd)?, LinOp::permute(vec![C, D, C], &[1, 0, 2])?, on(&c.t2, &[1, 2], &[D, C, C])?],
    )?;
    let rhs = LinOp::chain(
        "(T⊗ι)(ι⊗T)(T2^C⊗ι)",
        vec![on(&c.t2, &[0, 1], &ccd)?, on(t, &[1, 2], &ccd)?, on(t, &[0, 1], &[C, D, C])?],
    )?;
    r.checks.push(eq(&meta, &lhs, &rhs, cfg, inst));

    let meta = Meta::new("cd.comodule-coalgebra", "comodule coalgebra", "(Δ_D⊗ι_C)T = (ι_D⊗T)(T⊗ι_D)(ι_C⊗Δ_D)");
    let dcd = vec![D, C, D];
    let dd = d.delta.as_ref().ok_or_else(|| Error::PreconditionFailed("D needs a finite coproduct".into()))?;
    let lhs = LinOp::chain(
        "(m_D⊗ι⊗ι)(Δ_D⊗ι)(ι⊗T)",
        vec![on(t, &[1, 2], &dcd)?, on(dd, &[1], &[D, D, C])?, on(&d.mult, &[0, 1], &[D, D, D, C])?],
    )?;
    let rhs = LinOp::chain(
        "(m_D⊗ι⊗ι)(ι⊗ι⊗T)(ι⊗T⊗ι)(ι⊗ι⊗Δ_D)",
        vec![
            on(dd, &[2], &dcd)?,
            on(t, &[1, 2], &[D, C, D, D])?,
            on(t, &[2, 3], &[D, D, C, D])?,
            on(&d.mult, &[0, 1], &[D, D, D, C])?,
        ],
    )?;
    r.checks.push(eq(&meta, &lhs, &rhs, cfg, inst));

    let meta = Meta::new("cd.coaction-counit-c", "counit of C", "(ι⊗ε_C)T = ε_C⊗ι");
    let lhs = LinOp::chain("(ι⊗ε_C)T", vec![t.clone(), on(&c.counit, &[1], &[D, C])?])?;
    let rhs = on(&c.counit, &[0], &[C, D])?;
    r.checks.push(eq(&meta, &lhs, &rhs, cfg, inst));

    let meta = Meta::new("cd.coaction-counit-d", "counit of D", "(ε_D⊗ι)T = ι⊗ε_D");
    let lhs = LinOp::chain("(ε_D⊗ι)T", vec![t.clone(), on(&d.counit, &[0], &[D, C])?])?;
    let rhs = on(&d.counit, &[1], &[C, D])?;
    r.checks.push(eq(&meta, &lhs, &rhs, cfg, inst));

    let meta = Meta::new("cd.cotwist-inverse", "cotwist inverse", "T^-1 T = ι, T T^-1 = ι");
    r.checks.push(inverse_pair(&meta, t, &s.tw.t_inv, cfg, inst)?);
    Ok(r)
}

/// Multiply leg `leg` of `z` by `x` from the left (`left`) or right.
fn mul_leg(m: &LinOp, z: &Vector, x: &Vector, leg: usize, left: bool) -> Result<Vector> {
    let mut out = Vector::zero();
    for (w, c) in z.iter() {
        let atom = Vector::basis(vec![w[leg].clone()]);
        let prod = if left { m.apply(&x.tensor(&atom))? } else { m.apply(&atom.tensor(x))? };
        for (pw, pc) in prod.iter() {
            let mut nw = w.clone();
            nw[leg] = pw[0].clone();
            out.add_term(nw, c * pc);
        }
    }
    Ok(out)
}

/// Covering a leg of `(ι⊗T)(Δ(a)⊗b)` from either side stays finitely supported.
fn finite_support_check(meta: &Meta, s: &SideData, cfg: &ProbeConfig, inst: &Instance) -> Result<Check> {
    let u = &inst.uni;
    let (covered, lin, m) = match s.side {
        crate::bicross::Side::Ab => {
            // z = (ι_A⊗T)(Δ_A(a)⊗b) on [A,B,A]; the A-leg at 2 is covered.
            let da = s.l.delta.clone().ok_or_else(|| Error::PreconditionFailed("A needs a finite coproduct".into()))?;
            let z = LinOp::chain("(ι⊗T)(Δ_A⊗ι)", vec![on(&da, &[0], &[A, B])?, on(&s.tw.t, &[1, 2], &[A, A, B])?])?;
            (2usize, z, s.l.mult.clone())
        }
        crate::bicross::Side::Cd => {
            // z = (T⊗ι_D)(c⊗Δ_D(d)) on [D,C,D]; the D-leg at 0 is covered.
            let dd = s.rt.delta.clone().ok_or_else(|| Error::PreconditionFailed("D needs a finite coproduct".into()))?;
            let z = LinOp::chain("(T⊗ι)(ι⊗Δ_D)", vec![on(&dd, &[1], &[C, D])?, on(&s.tw.t, &[0, 1], &[C, D, D])?])?;
            (0usize, z, s.rt.mult.clone())
        }
    };
    let t = s.l.shape[0];
    let cover = if s.side == crate::bicross::Side::Ab { t } else { s.rt.shape[0] };
    let mut shape = lin.input.clone();
    shape.push(cover);
    shape.push(cover);
    let probes = cfg.probes(&meta.id, u, &shape);
    Ok(check_with(meta, &probes, u, |v| {
        let mut lr = Vector::zero();
        let mut rl = Vector::zero();
        for (w, c) in v.iter() {
            let z = lin.apply_word(&w[..2])?;
            let x = Vector::basis(vec![w[2].clone()]);
            let y = Vector::basis(vec![w[3].clone()]);
            // (x·z)·y and x·(z·y), each step finitely supported
            let a = mul_leg(&m, &mul_leg(&m, &z, &x, covered, true)?, &y, covered, false)?;
            let b = mul_leg(&m, &mul_leg(&m, &z, &y, covered, false)?, &x, covered, true)?;
            lr.add_scaled(&a, c);
            rl.add_scaled(&b, c);
        }
        Ok((lr, rl))
    }))
}

pub fn finite_support_suite(inst: &Instance, cfg: &ProbeConfig) -> Result<Report> {
    let mut r = Report::new(FINITE_SUPPORT);
    let meta = Meta::new("ab.finite-support", "covered coaction is finitely supported", "(ι⊗T)(Δ_A(a)⊗b)(1⊗1⊗a') ∈ A⊗B⊗A, same from the left");
    r.checks.push(finite_support_check(&meta, &inst.ab, cfg, inst)?);

    let s = &inst.ab;
    let meta = Meta::new("ab.coproduct-cotwist-form", "cotwist form of the comodule coalgebra law", "(ι_A⊗T)(Δ_A⊗ι_B) = (T^-1⊗ι_A)(ι_B⊗Δ_A)T");
    let da = s.l.delta.as_ref().ok_or_else(|| Error::PreconditionFailed("A needs a finite coproduct".into()))?;
    let lhs = LinOp::chain("(ι⊗T)(Δ_A⊗ι)", vec![on(da, &[0], &[A, B])?, on(&s.tw.t, &[1, 2], &[A, A, B])?])?;
    let rhs = LinOp::chain(
        "(T^-1⊗ι)(ι⊗Δ_A)T",
        vec![s.tw.t.clone(), on(da, &[1], &[B, A])?, on(&s.tw.t_inv, &[0, 1], &[B, A, A])?],
    )?;
    r.checks.push(eq(&meta, &lhs, &rhs, cfg, inst));

    let meta = Meta::new("cd.finite-support", "covered coaction is finitely supported", "(d'⊗1⊗1)(T⊗ι)(c⊗Δ_D(d)) ∈ D⊗C⊗D, same from the right");
    r.checks.push(finite_support_check(&meta, &inst.cd, cfg, inst)?);

    let s = &inst.cd;
    let meta = Meta::new("cd.coproduct-cotwist-form", "cotwist form of the comodule coalgebra law", "(T⊗ι_D)(ι_C⊗Δ_D) = (ι_D⊗T^-1)(Δ_D⊗ι_C)T");
    let dd = s.rt.delta.as_ref().ok_or_else(|| Error::PreconditionFailed("D needs a finite coproduct".into()))?;
    let lhs = LinOp::chain("(T⊗ι)(ι⊗Δ_D)", vec![on(dd, &[1], &[C, D])?, on(&s.tw.t, &[0, 1], &[C, D, D])?])?;
    let rhs = LinOp::chain(
        "(ι⊗T^-1)(Δ_D⊗ι)T",
        vec![s.tw.t.clone(), on(dd, &[0], &[D, C])?, on(&s.tw.t_inv, &[1, 2], &[D, D, C])?],
    )?;
    r.checks.push(eq(&meta, &lhs, &rhs, cfg, inst));
    Ok(r)
}

pub fn ab_compat_suite(inst: &Instance, cfg: &ProbeConfig) -> Result<Report> {
    let mut r = Report::new(AB_COMPAT);
    let s = &inst.ab;
    let (l, rr) = conditions::ab_c1(s)?;
    r.checks.push(eq(&Meta::new("ab.c1", "P respects the product of A", "P(ι⊗m_A) = (ι⊗m_A)P13P12"), &l, &rr, cfg, inst));
    let (l, rr) = conditions::ab_c2(s)?;
    r.checks.push(eq(
        &Meta::new("ab.c2", "P respects the coproduct of B", "(Δ_B⊗ι)P = P23P13(Δ_B⊗ι), covered by b⊗1⊗1"),
        &l,
        &rr,
        cfg,
        inst,
    ));
    let (l, rr) = conditions::c3(s)?;
    r.checks.push(eq(&Meta::new("ab.c3", "twist and cotwist commute", "T∘R = T^op∘R^op"), &l, &rr, cfg, inst));
    Ok(r)
}

pub fn cd_compat_suite(inst: &Instance, cfg: &ProbeConfig) -> Result<Report> {
    let mut r = Report::new(CD_COMPAT);
    let s = &inst.cd;
    let (l, rr) = conditions::cd_c1(s)?;
    r.checks.push(eq(&Meta::new("cd.c1", "P respects the product of D", "P(m_D⊗ι) = (m_D⊗ι)P13P23"), &l, &rr, cfg, inst));
    let (l, rr) = conditions::cd_c2(s)?;
    r.checks.push(eq(
        &Meta::new("cd.c2", "P respects the coproduct of C", "(ι⊗Δ_C)P = P12P13(ι⊗Δ_C), covered by 1⊗1⊗c'"),
        &l,
        &rr,
        cfg,
        inst,
    ));
    let (l, rr) = conditions::c3(s)?;
    r.checks.push(eq(&Meta::new("cd.c3", "twist and cotwist commute", "T∘R = T^op∘R^op"), &l, &rr, cfg, inst));
    Ok(r)
}

/// Both smash products, assembled once per run.
#[derive(Clone, Debug)]
pub struct Built {
    pub ab: Mha,
    pub cd: Mha,
}

impl Built {
    pub fn new(inst: &Instance) -> Result<Built> {
        Ok(Built { ab: inst.build_ab()?, cd: inst.build_cd()? })
    }
}

pub fn mha_suite(inst: &Instance, built: &Built, cfg: &ProbeConfig) -> Result<Report> {
    let mut r = Report::new(MHA_AXIOMS);
    for m in [&inst.a, &inst.b, &inst.c, &inst.d, &built.ab, &built.cd] {
        r.checks.extend(verify_mha(m, cfg)?);
    }
    let ab = &built.ab;
    let meta = Meta::new("mha.AB.t1-direct", "six-factor T1# against direct slice evaluation", "T1# = Σ(a_(1)⊗1)Γ(a_(2))Δ_B(b)(1⊗a'b')");
    r.checks.push(eq(&meta, &ab.t1, &direct_t1(&inst.ab)?, cfg, inst));
    let meta = Meta::new("mha.AB.t2-direct", "six-factor T2# against direct slice evaluation", "T2# = (ab⊗1)Σ(a'_(1)⊗1)Γ(a'_(2))Δ_B(b')");
    r.checks.push(eq(&meta, &ab.t2, &direct_t2(&inst.ab)?, cfg, inst));
    let meta = Meta::new("mha.AB.delta-closed-form", "coproduct closed form", "Δ#(hδ_k) = Σ_{k'k''=k} hδ_{k'}⊗(h◂k')δ_{k''}");
    r.checks.push(eq(&meta, &ab.t1, &inst.ab_t1_closed(), cfg, inst));
    let meta = Meta::new("mha.AB.antipode-closed-form", "antipode closed form", "S#(hδ_k) = (h◂k)^-1 δ_{(h▸k)^-1}");
    r.checks.push(eq(&meta, &ab.antipode, &inst.ab_antipode_closed(), cfg, inst));
    let cd = &built.cd;
    let meta = Meta::new("mha.CD.delta-closed-form", "coproduct closed form", "Δ#(δ_h k) = Σ_{h'h''=h} δ_{h'}(h''▸k)⊗δ_{h''}k");
    r.checks.push(eq(&meta, &cd.t1, &inst.cd_t1_closed(), cfg, inst));
    let meta = Meta::new("mha.CD.antipode-closed-form", "antipode closed form", "S#(δ_h k) = δ_{(h◂k)^-1}(h▸k)^-1");
    r.checks.push(eq(&meta, &cd.antipode, &inst.cd_antipode_closed(), cfg, inst));
    Ok(r)
}

pub fn integrals_suite(inst: &Instance, built: &Built, cfg: &ProbeConfig) -> Result<Report> {
    let mut r = Report::new(INTEGRALS);
    for m in [&inst.a, &inst.b, &inst.c, &inst.d, &built.ab, &built.cd] {
        r.checks.extend(integral_checks(m, cfg)?);
    }
    let psi = built.ab.right_integral.clone().ok_or_else(|| Error::PreconditionFailed("AB has no right integral".into()))?;
    r.checks.push(positivity_check(&built.ab, &psi, "psi", cfg)?);
    let phi = built.cd.left_integral.clone().ok_or_else(|| Error::PreconditionFailed("CD has no left integral".into()))?;
    r.checks.push(positivity_check(&built.cd, &phi, "phi", cfg)?);
    Ok(r)
}

pub fn duality_suite(inst: &Instance, built: &Built, cfg: &ProbeConfig) -> Result<Report> {
    let mut r = Report::new(DUALITY);
    r.checks.extend(pairing_checks(&built.ab, &built.cd, "pair.AB-CD", cfg)?);
    r.checks.extend(pairing_checks(&inst.a, &inst.c, "pair.A-C", cfg)?);
    r.checks.extend(pairing_checks(&inst.d, &inst.b, "pair.D-B", cfg)?);
    Ok(r)
}

/// Whether `lhs = rhs` on every probe, used to detect degenerate data.
fn holds(lhs: &LinOp, rhs: &LinOp, cfg: &ProbeConfig, id: &str, inst: &Instance) -> bool {
    let p = cfg.probes(id, &inst.uni, &lhs.input);
    p.vectors.iter().all(|v| matches!((lhs.apply(v), rhs.apply(v)), (Ok(a), Ok(b)) if a == b))
}

pub fn special_cases_suite(inst: &Instance, built: &Built, cfg: &ProbeConfig) -> Result<Report> {
    let mut r = Report::new(SPECIAL_CASES);
    let s = &inst.ab;
    let (a, b) = (&s.l, &s.rt);
    let abab = vec![A, B, A, B];
    let regroup = LinOp::permute(abab, &[0, 2, 1, 3])?;

    let eps_act = on(&a.counit, &[1], &[B, A])?;
    let trivial_action = holds(&s.act, &eps_act, cfg, "special.detect-action", inst);
    let m1 = Meta::new("special.trivial-action.twist-flip", "trivial action gives the flip", "b◂a = ε(a)b ⇒ R = σ");
    let m2 = Meta::new("special.trivial-action.smash-tensor", "trivial action gives the tensor product algebra", "b◂a = ε(a)b ⇒ m# = (m_A⊗m_B)σ23");
    if trivial_action {
        r.checks.push(eq(&m1, &s.tw.r, &LinOp::flip(B, A), cfg, inst));
        let tensor = LinOp::chain("(m_A⊗m_B)σ23", vec![regroup, LinOp::op_tensor(&a.mult, &b.mult)?])?;
        r.checks.push(eq(&m2, &built.ab.mult, &tensor, cfg, inst));
    } else {
        r.checks.push(m1.skip("action is not trivial"));
        r.checks.push(m2.skip("action is not trivial"));
    }

    let trivial_coaction = holds(&s.tw.t, &LinOp::flip(A, B), cfg, "special.detect-coaction", inst);
    let m1 = Meta::new("special.trivial-coaction.cotwist-flip", "trivial coaction gives the flip", "Γ(a) = 1⊗a ⇒ T = σ");
    let m2 = Meta::new("special.trivial-coaction.t1-componentwise", "trivial coaction gives componentwise T1#", "Γ(a) = 1⊗a ⇒ Δ#(ab)(1⊗y) = Δ_A(a)Δ_B(b)(1⊗y)");
    let m3 = Meta::new("special.trivial-coaction.t2-componentwise", "trivial coaction gives componentwise T2#", "Γ(a) = 1⊗a ⇒ (x⊗1)Δ#(a'b') = (x⊗1)Δ_A(a')Δ_B(b')");
    if trivial_coaction {
        r.checks.push(eq(&m1, &s.tw.t, &LinOp::flip(A, B), cfg, inst));
        r.checks.push(eq(&m2, &built.ab.t1, &componentwise_t1(s, &built.ab)?, cfg, inst));
        r.checks.push(eq(&m3, &built.ab.t2, &componentwise_t2(s)?, cfg, inst));
    } else {
        for m in [m1, m2, m3] {
            r.checks.push(m.skip("coaction is not trivial"));
        }
    }
    Ok(r)
}

/// `(Δ_A(a)Δ_B(b))(1⊗y)`: the right leg is covered through a local unit of `y`,
/// then multiplied in the smash product.
fn componentwise_t1(s: &SideData, ab: &Mha) -> Result<LinOp> {
    let da = s.l.delta.clone().ok_or_else(|| Error::PreconditionFailed("A needs a finite coproduct".into()))?;
    let one_a = s.l.unit.clone().ok_or_else(|| Error::PreconditionFailed("A needs a unit".into()))?;
    let (t1b, ma, mult, left_unit) = (s.rt.t1.clone(), s.l.mult.clone(), ab.mult.clone(), ab.left_unit.clone());
    Ok(LinOp::new("Δ_A Δ_B (1⊗y)", vec![A, B, A, B], vec![A, B, A, B], move |w| {
        let y = Vector::basis(w[2..].to_vec());
        // left_unit(y) = 1⊗u with uy = y
        let u = crate::mhopf::local_delta_unit(&left_unit(&y)?, &[1], B);
        let mut out = Vector::zero();
        for (bw, bc) in t1b.apply(&Vector::basis(vec![w[1].clone()]).tensor(&u))?.iter() {
            let z = mult.apply(&one_a.tensor(&Vector::basis(vec![bw[1].clone()])).tensor(&y))?;
            for (aw, ac) in da.apply_word(std::slice::from_ref(&w[0]))?.iter() {
                for (zw, zc) in z.iter() {
                    for (pw, pc) in ma.apply_word(&[aw[1].clone(), zw[0].clone()])?.iter() {
                        let coef = &(bc * ac) * &(zc * pc);
                        out.add_term(vec![aw[0].clone(), bw[0].clone(), pw[0].clone(), zw[1].clone()], coef);
                    }
                }
            }
        }
        Ok(out)
    }))
}

/// `(ab⊗1)Δ_A(a')Δ_B(b')`, with the left leg covered by `ab·a'_(1)`.
fn componentwise_t2(s: &SideData) -> Result<LinOp> {
    let da = s.l.delta.clone().ok_or_else(|| Error::PreconditionFailed("A needs a finite coproduct".into()))?;
    let (r, t2b, ma) = (s.tw.r.clone(), s.rt.t2.clone(), s.l.mult.clone());
    Ok(LinOp::new("(x⊗1)Δ_A Δ_B", vec![A, B, A, B], vec![A, B, A, B], move |w| {
        let mut out = Vector::zero();
        for (sw, sc) in da.apply_word(std::slice::from_ref(&w[2]))?.iter() {
            for (rw, rc) in r.apply_word(&[w[1].clone(), sw[0].clone()])?.iter() {
                for (mw, mc) in ma.apply_word(&[w[0].clone(), rw[0].clone()])?.iter() {
                    for (hw, hc) in t2b.apply_word(&[rw[1].clone(), w[3].clone()])?.iter() {
                        let coef = &(sc * rc) * &(mc * hc);
                        out.add_term(vec![mw[0].clone(), hw[0].clone(), sw[1].clone(), hw[1].clone()], coef);
                    }
                }
            }
        }
        Ok(out)
    }))
}

fn star_of(m: &Mha) -> Result<LinOp> {
    m.star.clone().ok_or_else(|| Error::PreconditionFailed(format!("{} has no involution", m.name)))
}

pub fn star_suite(inst: &Instance, built: &Built, cfg: &ProbeConfig) -> Result<Report> {
    let mut r = Report::new(STAR);
    for m in [&inst.a, &inst.b, &inst.c, &inst.d, &built.ab, &built.cd] {
        r.checks.extend(star_checks(m, cfg)?);
    }
    let s = &inst.ab;
    let (sa, sb) = (star_of(&s.l)?, star_of(&s.rt)?);
    let sa_s = LinOp::compose(&sa, &s.l.antipode)?;
    let meta = Meta::new("ab.action-star", "action and involution", "(b◂a)* = b*◂S(a)*");
    let lhs = LinOp::compose(&sb, &s.act)?;
    let rhs = LinOp::compose(&s.act, &LinOp::op_tensor(&sb, &sa_s)?)?;
    r.checks.push(eq(&meta, &lhs, &rhs, cfg, inst));
    let meta = Meta::new("ab.coaction-star", "coaction and involution", "Γ(S_A(a)*) = ((ι⊗S_A)Γ(a))*");
    let lhs = LinOp::compose(&s.tw.t, &LinOp::op_tensor(&sa_s, &sb)?)?;
    let rhs = LinOp::chain(
        "(*⊗*)(ι⊗S_A)T^op",
        vec![s.tw.t_op.clone(), on(&s.l.antipode, &[1], &[B, A])?, LinOp::op_tensor(&sb, &sa)?],
    )?;
    r.checks.push(eq(&meta, &lhs, &rhs, cfg, inst));

    let s = &inst.cd;
    let (sc, sd) = (star_of(&s.l)?, star_of(&s.rt)?);
    let sd_s = LinOp::compose(&sd, &s.rt.antipode)?;
    let meta = Meta::new("cd.action-star", "action and involution", "(d▸c)* = S(d)*▸c*");
    let lhs = LinOp::compose(&sc, &s.act)?;
    let rhs = LinOp::compose(&s.act, &LinOp::op_tensor(&sd_s, &sc)?)?;
    r.checks.push(eq(&meta, &lhs, &rhs, cfg, inst));
    let meta = Meta::new("cd.coaction-star", "coaction and involution", "Γ(S_D(d)*) = ((S_D⊗ι)Γ(d))*");
    let lhs = LinOp::compose(&s.tw.t_op, &LinOp::op_tensor(&sc, &sd_s)?)?;
    let rhs = LinOp::chain(
        "(*⊗*)(S_D⊗ι)T",
        vec![s.tw.t.clone(), on(&s.rt.antipode, &[0], &[D, C])?, LinOp::op_tensor(&sd, &sc)?],
    )?;
    r.checks.push(eq(&meta, &lhs, &rhs, cfg, inst));
    Ok(r)
}

/// Run one named suite.
pub fn run_suite(inst: &Instance, name: &str, cfg: &ProbeConfig) -> Result<Report> {
    let built = || Built::new(inst);
    match name {
        MATCHED_PAIR => Ok(matched_pair_suite(inst, cfg)),
        MODULE_ALGEBRA => module_algebra_suite(inst, cfg),
        COMODULE_COALGEBRA => comodule_coalgebra_suite(inst, cfg),
        FINITE_SUPPORT => finite_support_suite(inst, cfg),
        AB_COMPAT => ab_compat_suite(inst, cfg),
        CD_COMPAT => cd_compat_suite(inst, cfg),
        MHA_AXIOMS => mha_suite(inst, &built()?, cfg),
        INTEGRALS => integrals_suite(inst, &built()?, cfg),
        DUALITY => duality_suite(inst, &built()?, cfg),
        SPECIAL_CASES => special_cases_suite(inst, &built()?, cfg),
        STAR => star_suite(inst, &built()?, cfg),
        other => Err(Error::UnknownSuite(other.into())),
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct PipelineOptions {
    /// Keep going past a failing gate.
    pub force: bool,
    /// Include the involution suite.
    pub star: bool,
}

/// The gated pipeline: each report is appended; a failing gate stops the run
/// unless `force` is set.
pub fn full_pipeline(inst: &Instance, cfg: &ProbeConfig, opts: PipelineOptions) -> Result<Vec<Report>> {
    let mut out = Vec::new();
    let mut order: Vec<&str> = vec![
        MATCHED_PAIR,
        MODULE_ALGEBRA,
        COMODULE_COALGEBRA,
        FINITE_SUPPORT,
        AB_COMPAT,
        CD_COMPAT,
        MHA_AXIOMS,
        INTEGRALS,
        DUALITY,
        SPECIAL_CASES,
    ];
    if opts.star {
        order.push(STAR);
    }
    let mut built: Option<Built> = None;
    for name in order {
        let report = match name {
            MHA_AXIOMS | INTEGRALS | DUALITY | SPECIAL_CASES | STAR => {
                if built.is_none() {
                    built = Some(Built::new(inst)?);
                }
                let b = built.as_ref().expect("built above");
                match name {
                    MHA_AXIOMS => mha_suite(inst, b, cfg)?,
                    INTEGRALS => integrals_suite(inst, b, cfg)?,
                    DUALITY => duality_suite(inst, b, cfg)?,
                    SPECIAL_CASES => special_cases_suite(inst, b, cfg)?,
                    _ => star_suite(inst, b, cfg)?,
                }
            }
            _ => run_suite(inst, name, cfg)?,
        };
        let ok = report.passed();
        out.push(report);
        if !ok && !opts.force {
            break;
        }
    }
    Ok(out)
}
