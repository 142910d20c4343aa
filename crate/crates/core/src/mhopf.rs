//! Regular multiplier Hopf algebras in operator form.
//!
//! A coproduct is never stored as an element of a tensor space.  It exists
//! through the canonical maps `T1(a⊗b) = Δ(a)(1⊗b)` and
//! `T2(a⊗b) = (a⊗1)Δ(b)`, plus `T4(a⊗b) = (1⊗b)Δ(a)` where available.
//! Multipliers are handled by local units: for a finitely supported `x`
//! the structure supplies `u` with `ux = x` (resp. `xu = x`).

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::group::{Elem, Group};
use crate::matrix;
use crate::report::{check_eq, check_with, Check, Meta, ProbeConfig};
use crate::scalar::Scalar;
use crate::tensor::{Atom, Kind, LinOp, Shape, Tag, Universe, Vector, Word};

pub type UnitFn = Arc<dyn Fn(&Vector) -> Result<Vector> + Send + Sync>;

#[derive(Clone)]
pub struct Mha {
    pub name: String,
    /// Shape of a single basis element (one atom for the components, two for smash products).
    pub shape: Shape,
    pub uni: Universe,
    pub mult: LinOp,
    pub t1: LinOp,
    pub t2: LinOp,
    pub t1_inv: LinOp,
    pub t2_inv: LinOp,
    pub t4: Option<LinOp>,
    pub counit: LinOp,
    pub antipode: LinOp,
    pub antipode_inv: LinOp,
    pub unit: Option<Vector>,
    pub left_unit: UnitFn,
    pub right_unit: UnitFn,
    pub left_integral: Option<LinOp>,
    pub right_integral: Option<LinOp>,
    pub star: Option<LinOp>,
    /// `Δ` itself when it lands in the algebraic tensor product.
    pub delta: Option<LinOp>,
}

impl std::fmt::Debug for Mha {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Mha({})", self.name)
    }
}

impl Mha {
    pub fn width(&self) -> usize {
        self.shape.len()
    }

    pub fn dim(&self) -> Option<usize> {
        self.uni.count(&self.shape)
    }

    /// Shape of the `n`-fold tensor power.
    pub fn pow(&self, n: usize) -> Shape {
        (0..n).flat_map(|_| self.shape.iter().copied()).collect()
    }

    /// Atom positions of the given algebra legs.
    pub fn atoms(&self, legs: &[usize]) -> Vec<usize> {
        let w = self.width();
        legs.iter().flat_map(|&l| (l * w)..((l + 1) * w)).collect()
    }

    /// `op` on algebra legs `legs` of the `n`-fold tensor power `ambient`.
    pub fn on(&self, op: &LinOp, legs: &[usize], ambient: &[Tag]) -> Result<LinOp> {
        LinOp::on_legs(op, &self.atoms(legs), ambient)
    }

    pub fn basis(&self) -> Option<Vec<Word>> {
        self.uni.enumerate(&self.shape)
    }
}

fn atom(tag: Tag, e: Elem) -> Atom {
    Atom::new(tag, e)
}

fn one(tag: Tag, e: Elem) -> Vector {
    Vector::basis(vec![atom(tag, e)])
}

fn two(t: Tag, a: Elem, b: Elem) -> Vector {
    Vector::basis(vec![atom(t, a), atom(t, b)])
}

fn slot_group(uni: &Universe, slot: u8) -> Group {
    uni.group(slot).clone()
}

/// The group algebra `CG` on basis `{g}` with `Δ(g) = g⊗g`.
pub fn group_algebra(uni: &Universe, slot: u8, name: &str) -> Mha {
    let t = Tag::group(slot);
    let g = slot_group(uni, slot);
    let gm = g.clone();
    let mult = LinOp::new("m", vec![t, t], vec![t], move |w| Ok(one(t, gm.mul(&w[0].elem, &w[1].elem))));
    let g1 = g.clone();
    let t1 = LinOp::new("T1", vec![t, t], vec![t, t], move |w| {
        Ok(two(t, w[0].elem.clone(), g1.mul(&w[0].elem, &w[1].elem)))
    });
    let g2 = g.clone();
    let t2 = LinOp::new("T2", vec![t, t], vec![t, t], move |w| {
        Ok(two(t, g2.mul(&w[0].elem, &w[1].elem), w[1].elem.clone()))
    });
    let g3 = g.clone();
    let t1_inv = LinOp::new("T1^-1", vec![t, t], vec![t, t], move |w| {
        Ok(two(t, w[0].elem.clone(), g3.mul(&g3.inv(&w[0].elem), &w[1].elem)))
    });
    let g4 = g.clone();
    let t2_inv = LinOp::new("T2^-1", vec![t, t], vec![t, t], move |w| {
        Ok(two(t, g4.mul(&w[0].elem, &g4.inv(&w[1].elem)), w[1].elem.clone()))
    });
    let g5 = g.clone();
    let t4 = LinOp::new("T4", vec![t, t], vec![t, t], move |w| {
        Ok(two(t, w[0].elem.clone(), g5.mul(&w[1].elem, &w[0].elem)))
    });
    let counit = LinOp::new("ε", vec![t], vec![], |_| Ok(Vector::scalar(Scalar::one())));
    let g6 = g.clone();
    let antipode = LinOp::new("S", vec![t], vec![t], move |w| Ok(one(t, g6.inv(&w[0].elem))));
    let antipode_inv = antipode.clone().renamed("S^-1");
    let g7 = g.clone();
    let integral = LinOp::new("φ", vec![t], vec![], move |w| {
        Ok(if g7.is_identity(&w[0].elem) { Vector::scalar(Scalar::one()) } else { Vector::zero() })
    });
    let g8 = g.clone();
    let star = LinOp::new("*", vec![t], vec![t], move |w| Ok(one(t, g8.inv(&w[0].elem)))).conjugate_linear();
    let delta = LinOp::new("Δ", vec![t], vec![t, t], move |w| Ok(two(t, w[0].elem.clone(), w[0].elem.clone())));
    let unit = one(t, g.identity());
    let u1 = unit.clone();
    let u2 = unit.clone();
    Mha {
        name: name.into(),
        shape: vec![t],
        uni: uni.clone(),
        mult,
        t1,
        t2,
        t1_inv,
        t2_inv,
        t4: Some(t4),
        counit,
        antipode,
        antipode_inv,
        unit: Some(unit),
        left_unit: Arc::new(move |_| Ok(u1.clone())),
        right_unit: Arc::new(move |_| Ok(u2.clone())),
        left_integral: Some(integral.clone()),
        right_integral: Some(integral.renamed("ψ")),
        star: Some(star),
        delta: Some(delta),
    }
}

/// Sum of `δ_k` over the delta atoms found at `positions` of the support.
pub fn local_delta_unit(v: &Vector, positions: &[usize], tag: Tag) -> Vector {
    let mut seen: BTreeSet<Elem> = BTreeSet::new();
    for (w, _) in v.iter() {
        for &p in positions {
            if let Some(a) = w.get(p) {
                if a.tag == tag {
                    seen.insert(a.elem.clone());
                }
            }
        }
    }
    Vector::from_terms(seen.into_iter().map(|e| (vec![atom(tag, e)], Scalar::one())))
}

/// The algebra `F(G)` of finitely supported functions on `G`, basis `{δ_g}`.
pub fn function_algebra(uni: &Universe, slot: u8, name: &str) -> Mha {
    let t = Tag::delta(slot);
    let g = slot_group(uni, slot);
    let mult = LinOp::new("m", vec![t, t], vec![t], move |w| {
        Ok(if w[0].elem == w[1].elem { one(t, w[0].elem.clone()) } else { Vector::zero() })
    });
    let g1 = g.clone();
    let t1 = LinOp::new("T1", vec![t, t], vec![t, t], move |w| {
        Ok(two(t, g1.mul(&w[0].elem, &g1.inv(&w[1].elem)), w[1].elem.clone()))
    });
    let g2 = g.clone();
    let t2 = LinOp::new("T2", vec![t, t], vec![t, t], move |w| {
        Ok(two(t, w[0].elem.clone(), g2.mul(&g2.inv(&w[0].elem), &w[1].elem)))
    });
    let g3 = g.clone();
    let t1_inv = LinOp::new("T1^-1", vec![t, t], vec![t, t], move |w| {
        Ok(two(t, g3.mul(&w[0].elem, &w[1].elem), w[1].elem.clone()))
    });
    let g4 = g.clone();
    let t2_inv = LinOp::new("T2^-1", vec![t, t], vec![t, t], move |w| {
        Ok(two(t, w[0].elem.clone(), g4.mul(&w[0].elem, &w[1].elem)))
    });
    let g5 = g.clone();
    let t4 = LinOp::new("T4", vec![t, t], vec![t, t], move |w| {
        Ok(two(t, g5.mul(&w[0].elem, &g5.inv(&w[1].elem)), w[1].elem.clone()))
    });
    let g6 = g.clone();
    let counit = LinOp::new("ε", vec![t], vec![], move |w| {
        Ok(if g6.is_identity(&w[0].elem) { Vector::scalar(Scalar::one()) } else { Vector::zero() })
    });
    let g7 = g.clone();
    let antipode = LinOp::new("S", vec![t], vec![t], move |w| Ok(one(t, g7.inv(&w[0].elem))));
    let antipode_inv = antipode.clone().renamed("S^-1");
    let integral = LinOp::new("φ", vec![t], vec![], |_| Ok(Vector::scalar(Scalar::one())));
    let star = LinOp::identity(vec![t]).renamed("*").conjugate_linear();
    let unit = g.elements().map(|es| Vector::from_terms(es.into_iter().map(|e| (vec![atom(t, e)], Scalar::one()))));
    Mha {
        name: name.into(),
        shape: vec![t],
        uni: uni.clone(),
        mult,
        t1,
        t2,
        t1_inv,
        t2_inv,
        t4: Some(t4),
        counit,
        antipode,
        antipode_inv,
        unit,
        left_unit: Arc::new(move |v| Ok(local_delta_unit(v, &[0], t))),
        right_unit: Arc::new(move |v| Ok(local_delta_unit(v, &[0], t))),
        left_integral: Some(integral.clone()),
        right_integral: Some(integral.renamed("ψ")),
        star: Some(star),
        delta: None,
    }
}

/// `x ↦ Σ_j (x b_j) ⊗ b_j` (or `b_j x` on the left); injective exactly when
/// multiplication on that side is nondegenerate.
fn separation_map(m: &Mha, left: bool) -> Result<LinOp> {
    let basis = m.basis().ok_or_else(|| Error::PreconditionFailed("infinite basis".into()))?;
    let mult = m.mult.clone();
    let mut out_shape = m.shape.clone();
    out_shape.extend(m.shape.iter().copied());
    let name = if left { "x↦Σ b_j x⊗b_j" } else { "x↦Σ x b_j⊗b_j" };
    Ok(LinOp::new(name, m.shape.clone(), out_shape, move |w| {
        let mut out = Vector::zero();
        for b in &basis {
            let word: Word = if left {
                b.iter().chain(w.iter()).cloned().collect()
            } else {
                w.iter().chain(b.iter()).cloned().collect()
            };
            let prod = mult.apply_word(&word)?;
            out.add_scaled(&prod.tensor(&Vector::basis(b.clone())), &Scalar::one());
        }
        Ok(out)
    }))
}

fn rank_check(meta: &Meta, op: &LinOp, m: &Mha, expected: usize, also: Check) -> Check {
    if also.status == crate::report::Status::Fail {
        return also;
    }
    match matrix::rank(op, &m.uni) {
        Ok(r) if r == expected => {
            let mut c = also;
            c.detail = Some(format!("matrix rank {r} = {expected}"));
            c
        }
        Ok(r) => meta.fail_global(&also.probes, format!("matrix rank {r} < {expected}"), format!("rank {r}"), format!("rank {expected}")),
        Err(e) => meta.fail_global(&also.probes, e.to_string(), "error".into(), "-".into()),
    }
}

fn id(m: &Mha, axiom: &str) -> String {
    format!("mha.{}.{axiom}", m.name)
}

/// The algebra and Hopf axioms in canonical-map form.
pub fn verify_mha(m: &Mha, cfg: &ProbeConfig) -> Result<Vec<Check>> {
    let s1 = m.pow(1);
    let s2 = m.pow(2);
    let s3 = m.pow(3);
    let u = &m.uni;
    let mut out = Vec::new();

    // associativity
    let meta = Meta::new(id(m, "associativity"), "associativity", "m(m⊗ι) = m(ι⊗m)");
    let lhs = LinOp::chain("m(m⊗ι)", vec![m.on(&m.mult, &[0, 1], &s3)?, m.mult.clone()])?;
    let rhs = LinOp::chain("m(ι⊗m)", vec![m.on(&m.mult, &[1, 2], &s3)?, m.mult.clone()])?;
    out.push(check_eq(&meta, &lhs, &rhs, &cfg.probes(&meta.id, u, &s3), u));

    // nondegeneracy
    let meta = Meta::new(id(m, "nondegenerate"), "nondegenerate product", "xA = 0 ⇒ x = 0 and Ax = 0 ⇒ x = 0");
    let probes = cfg.probes(&meta.id, u, &s1);
    let local = check_with(&meta, &probes, u, |x| {
        let r = m.mult.apply(&x.tensor(&(m.right_unit)(x)?))?;
        let l = m.mult.apply(&(m.left_unit)(x)?.tensor(x))?;
        Ok((r.tensor(&l), x.tensor(x)))
    });
    let c = match m.dim() {
        Some(d) => {
            let right = separation_map(m, false)?;
            let left = separation_map(m, true)?;
            let c = rank_check(&meta, &right, m, d, local);
            rank_check(&meta, &left, m, d, c)
        }
        None => {
            let mut c = local;
            if c.passed() {
                c.detail = Some("local units on every probe".into());
            }
            c
        }
    };
    out.push(c);

    // bijectivity of the canonical maps
    for (which, t, tinv) in [("T1", &m.t1, &m.t1_inv), ("T2", &m.t2, &m.t2_inv)] {
        let meta = Meta::new(
            id(m, &format!("{}-bijective", which.to_lowercase())),
            format!("{which} bijective"),
            format!("{which}^-1 {which} = ι = {which} {which}^-1"),
        );
        let probes = cfg.probes(&meta.id, u, &s2);
        let c = check_with(&meta, &probes, u, |x| {
            let a = tinv.apply(&t.apply(x)?)?;
            let b = t.apply(&tinv.apply(x)?)?;
            Ok((a.tensor(&b), x.tensor(x)))
        });
        let c = match m.uni.count(&s2) {
            Some(n) if n <= crate::report::EXHAUSTIVE_LIMIT => rank_check(&meta, t, m, n, c),
            _ => c,
        };
        out.push(c);
    }

    // coassociativity
    let meta = Meta::new(id(m, "coassociativity"), "coassociativity", "(T2⊗ι)(ι⊗T1) = (ι⊗T1)(T2⊗ι)");
    let lhs = LinOp::chain("(T2⊗ι)(ι⊗T1)", vec![m.on(&m.t1, &[1, 2], &s3)?, m.on(&m.t2, &[0, 1], &s3)?])?;
    let rhs = LinOp::chain("(ι⊗T1)(T2⊗ι)", vec![m.on(&m.t2, &[0, 1], &s3)?, m.on(&m.t1, &[1, 2], &s3)?])?;
    out.push(check_eq(&meta, &lhs, &rhs, &cfg.probes(&meta.id, u, &s3), u));

    // counit
    let meta = Meta::new(id(m, "counit-left"), "left counit", "(ε⊗ι)T1 = m");
    let lhs = LinOp::chain("(ε⊗ι)T1", vec![m.t1.clone(), m.on(&m.counit, &[0], &s2)?])?;
    out.push(check_eq(&meta, &lhs, &m.mult, &cfg.probes(&meta.id, u, &s2), u));
    let meta = Meta::new(id(m, "counit-right"), "right counit", "(ι⊗ε)T2 = m");
    let lhs = LinOp::chain("(ι⊗ε)T2", vec![m.t2.clone(), m.on(&m.counit, &[1], &s2)?])?;
    out.push(check_eq(&meta, &lhs, &m.mult, &cfg.probes(&meta.id, u, &s2), u));

    // antipode
    let meta = Meta::new(id(m, "antipode-left"), "left antipode law", "m(S⊗ι)T1 = ε⊗ι");
    let lhs = LinOp::chain("m(S⊗ι)T1", vec![m.t1.clone(), m.on(&m.antipode, &[0], &s2)?, m.mult.clone()])?;
    let rhs = m.on(&m.counit, &[0], &s2)?;
    out.push(check_eq(&meta, &lhs, &rhs, &cfg.probes(&meta.id, u, &s2), u));
    let meta = Meta::new(id(m, "antipode-right"), "right antipode law", "m(ι⊗S)T2 = ι⊗ε");
    let lhs = LinOp::chain("m(ι⊗S)T2", vec![m.t2.clone(), m.on(&m.antipode, &[1], &s2)?, m.mult.clone()])?;
    let rhs = m.on(&m.counit, &[1], &s2)?;
    out.push(check_eq(&meta, &lhs, &rhs, &cfg.probes(&meta.id, u, &s2), u));

    // regularity
    let meta = Meta::new(id(m, "regular"), "bijective antipode", "S^-1 S = ι = S S^-1");
    let probes = cfg.probes(&meta.id, u, &s1);
    let c = check_with(&meta, &probes, u, |x| {
        let a = m.antipode_inv.apply(&m.antipode.apply(x)?)?;
        let b = m.antipode.apply(&m.antipode_inv.apply(x)?)?;
        Ok((a.tensor(&b), x.tensor(x)))
    });
    let c = match m.dim() {
        Some(d) => rank_check(&meta, &m.antipode, m, d, c),
        None => c,
    };
    out.push(c);

    let meta = Meta::new(id(m, "antipode-antimultiplicative"), "antipode reverses products", "S m = m σ (S⊗S)");
    let lhs = LinOp::compose(&m.antipode, &m.mult)?;
    let sw = LinOp::permute(s2.clone(), &m.atoms(&[1, 0]))?;
    let rhs = LinOp::chain("mσ(S⊗S)", vec![LinOp::op_tensor(&m.antipode, &m.antipode)?, sw, m.mult.clone()])?;
    out.push(check_eq(&meta, &lhs, &rhs, &cfg.probes(&meta.id, u, &s2), u));

    // homomorphism properties
    let meta = Meta::new(id(m, "delta-multiplicative"), "coproduct is multiplicative", "T1(m⊗ι) = (m⊗ι)T1_13 T1_23");
    let lhs = LinOp::chain("T1(m⊗ι)", vec![m.on(&m.mult, &[0, 1], &s3)?, m.t1.clone()])?;
    let rhs = LinOp::chain(
        "(m⊗ι)T1_13T1_23",
        vec![m.on(&m.t1, &[1, 2], &s3)?, m.on(&m.t1, &[0, 2], &s3)?, m.on(&m.mult, &[0, 1], &s3)?],
    )?;
    out.push(check_eq(&meta, &lhs, &rhs, &cfg.probes(&meta.id, u, &s3), u));

    let meta = Meta::new(id(m, "counit-multiplicative"), "counit is multiplicative", "ε m = ε⊗ε");
    let lhs = LinOp::compose(&m.counit, &m.mult)?;
    let rhs = LinOp::op_tensor(&m.counit, &m.counit)?;
    out.push(check_eq(&meta, &lhs, &rhs, &cfg.probes(&meta.id, u, &s2), u));

    out.push(unit_check(m, cfg)?);
    Ok(out)
}

/// Unit laws when a unit exists; otherwise a witness that no finitely
/// supported element is a two-sided unit on the basis.
fn unit_check(m: &Mha, cfg: &ProbeConfig) -> Result<Check> {
    let u = &m.uni;
    let s1 = m.pow(1);
    match &m.unit {
        Some(one) => {
            let meta = Meta::new(id(m, "unit"), "unit laws", "m(1⊗x) = x = m(x⊗1)");
            let probes = cfg.probes(&meta.id, u, &s1);
            Ok(check_with(&meta, &probes, u, |x| {
                let l = m.mult.apply(&one.tensor(x))?;
                let r = m.mult.apply(&x.tensor(one))?;
                Ok((l.tensor(&r), x.tensor(x)))
            }))
        }
        None => {
            let meta = Meta::new(id(m, "unit"), "nonunital", "∀u ∃ basis w: uw ≠ w or wu ≠ w");
            let candidates = cfg.sampled(&meta.id, u, &s1);
            let mut rng = cfg.rng(&format!("{}.witness", meta.id));
            for cand in &candidates.vectors {
                let mut found = false;
                for _ in 0..1000 {
                    let w = Vector::basis(u.random_word(&s1, &mut rng));
                    let l = m.mult.apply(&cand.tensor(&w))?;
                    let r = m.mult.apply(&w.tensor(cand))?;
                    if l != w || r != w {
                        found = true;
                        break;
                    }
                }
                if !found {
                    let ce = crate::report::Counterexample {
                        input: u.render(cand),
                        lhs: "acts as a unit on 1000 sampled basis words".into(),
                        rhs: "a failing basis word".into(),
                        trace: Vec::new(),
                    };
                    return Ok(meta.fail(&candidates.desc, None, ce));
                }
            }
            Ok(meta.pass(&candidates.desc, Some("every candidate has a basis witness".into())))
        }
    }
}

/// Invariance of the integrals, in slice form.
pub fn integral_checks(m: &Mha, cfg: &ProbeConfig) -> Result<Vec<Check>> {
    let u = &m.uni;
    let s2 = m.pow(2);
    let mut out = Vec::new();
    if let Some(psi) = &m.right_integral {
        let meta = Meta::new(id(m, "right-invariance"), "right invariance of ψ", "(ψ⊗ι)(Δ(x)(1⊗y)) = ψ(x)y");
        let lhs = LinOp::chain("(ψ⊗ι)T1", vec![m.t1.clone(), m.on(psi, &[0], &s2)?])?;
        let rhs = m.on(psi, &[0], &s2)?;
        out.push(check_eq(&meta, &lhs, &rhs, &cfg.probes(&meta.id, u, &s2), u));
        if let Some(t4) = &m.t4 {
            let meta = Meta::new(id(m, "right-invariance-left-covered"), "right invariance of ψ, covered from the left", "(ψ⊗ι)((1⊗y)Δ(x)) = ψ(x)y");
            let lhs = LinOp::chain("(ψ⊗ι)T4", vec![t4.clone(), m.on(psi, &[0], &s2)?])?;
            out.push(check_eq(&meta, &lhs, &rhs, &cfg.probes(&meta.id, u, &s2), u));
        }
    }
    if let Some(phi) = &m.left_integral {
        let meta = Meta::new(id(m, "left-invariance"), "left invariance of φ", "(ι⊗φ)((y⊗1)Δ(x)) = φ(x)y");
        let lhs = LinOp::chain("(ι⊗φ)T2", vec![m.t2.clone(), m.on(phi, &[1], &s2)?])?;
        let rhs = m.on(phi, &[1], &s2)?;
        out.push(check_eq(&meta, &lhs, &rhs, &cfg.probes(&meta.id, u, &s2), u));
    }
    Ok(out)
}

/// `f(x*x) ≥ 0` on seeded random vectors.
pub fn positivity_check(m: &Mha, f: &LinOp, which: &str, cfg: &ProbeConfig) -> Result<Check> {
    let meta = Meta::new(id(m, &format!("{which}-positive")), format!("positivity of {}", f.name), format!("{}(x*x) ≥ 0", f.name));
    let star = match &m.star {
        Some(s) => s,
        None => return Ok(meta.skip("no involution")),
    };
    let probes = cfg.sampled(&meta.id, &m.uni, &m.shape);
    for x in &probes.vectors {
        let xs = star.apply(x)?;
        let val = f.apply(&m.mult.apply(&xs.tensor(x))?)?.as_scalar();
        if !val.is_nonnegative_real() {
            let ce = crate::report::Counterexample {
                input: m.uni.render(x),
                lhs: val.to_string(),
                rhs: ">= 0".into(),
                trace: Vec::new(),
            };
            return Ok(meta.fail(&probes.desc, None, ce));
        }
    }
    Ok(meta.pass(&probes.desc, None))
}

/// Involution axioms and their compatibility with the Hopf structure.
pub fn star_checks(m: &Mha, cfg: &ProbeConfig) -> Result<Vec<Check>> {
    let u = &m.uni;
    let s1 = m.pow(1);
    let s2 = m.pow(2);
    let mut out = Vec::new();
    let star = match &m.star {
        Some(s) => s.clone(),
        None => {
            out.push(Meta::new(id(m, "star-involutive"), "involution", "x** = x").skip("no involution"));
            return Ok(out);
        }
    };
    let meta = Meta::new(id(m, "star-involutive"), "involution", "x** = x");
    let lhs = LinOp::compose(&star, &star)?;
    out.push(check_eq(&meta, &lhs, &LinOp::identity(s1.clone()), &cfg.probes(&meta.id, u, &s1), u));

    let meta = Meta::new(id(m, "star-antimultiplicative"), "involution reverses products", "(xy)* = y*x*");
    let lhs = LinOp::compose(&star, &m.mult)?;
    let sw = LinOp::permute(s2.clone(), &m.atoms(&[1, 0]))?;
    let rhs = LinOp::chain("mσ(*⊗*)", vec![LinOp::op_tensor(&star, &star)?, sw, m.mult.clone()])?;
    out.push(check_eq(&meta, &lhs, &rhs, &cfg.probes(&meta.id, u, &s2), u));

    let meta = Meta::new(id(m, "star-antipode"), "antipode and involution", "S(S(x)*)* = x");
    let lhs = LinOp::chain("*S*S", vec![m.antipode.clone(), star.clone(), m.antipode.clone(), star.clone()])?;
    out.push(check_eq(&meta, &lhs, &LinOp::identity(s1.clone()), &cfg.probes(&meta.id, u, &s1), u));

    let meta = Meta::new(id(m, "star-counit"), "counit and involution", "ε(x*) = conj ε(x)");
    let lhs = LinOp::compose(&m.counit, &star)?;
    let eps = m.counit.clone();
    let rhs = LinOp::new("conj ε", s1.clone(), vec![], move |w| Ok(eps.apply_word(w)?.conj())).conjugate_linear();
    out.push(check_eq(&meta, &lhs, &rhs, &cfg.probes(&meta.id, u, &s1), u));

    let meta = Meta::new(id(m, "star-coproduct"), "coproduct is a *-homomorphism", "Δ(x*)(1⊗y*) = ((1⊗y)Δ(x))*");
    match &m.t4 {
        Some(t4) => {
            let ss = LinOp::op_tensor(&star, &star)?;
            let lhs = LinOp::chain("T1(*⊗*)", vec![ss.clone(), m.t1.clone()])?;
            let rhs = LinOp::chain("(*⊗*)T4", vec![t4.clone(), ss])?;
            out.push(check_eq(&meta, &lhs, &rhs, &cfg.probes(&meta.id, u, &s2), u));
        }
        None => out.push(meta.skip("no left-covered coproduct slice")),
    }
    Ok(out)
}

/// Pairing of two atoms: a group atom against a delta atom of the same slot.
fn pair_atoms(a: &Atom, b: &Atom) -> Result<bool> {
    if a.tag.slot != b.tag.slot || a.tag.kind == b.tag.kind {
        return Err(Error::GroupMismatch(format!("cannot pair {} with {}", a.tag, b.tag)));
    }
    Ok(a.elem == b.elem)
}

/// `⟨v, w⟩` extended bilinearly from the positionwise canonical pairing.
pub fn pair(v: &Vector, w: &Vector) -> Result<Scalar> {
    let mut total = Scalar::zero();
    for (a, c) in v.iter() {
        for (b, d) in w.iter() {
            if a.len() != b.len() {
                return Err(Error::PairingMismatch(format!("word lengths {} and {}", a.len(), b.len())));
            }
            let mut hit = true;
            for (x, y) in a.iter().zip(b) {
                if !pair_atoms(x, y)? {
                    hit = false;
                    break;
                }
            }
            if hit {
                total += &(c * d);
            }
        }
    }
    Ok(total)
}

/// `Δ(x)` for a unital structure, as `T1(x⊗1)`.
pub fn full_coproduct(m: &Mha, x: &Vector) -> Result<Vector> {
    let one = m.unit.as_ref().ok_or_else(|| Error::PreconditionFailed(format!("{} has no unit", m.name)))?;
    m.t1.apply(&x.tensor(one))
}

fn shapes_dual(a: &[Tag], b: &[Tag]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.slot == y.slot && x.kind != y.kind)
}

/// Adjointness of products, coproducts, antipodes, units and counits under
/// the canonical pairing of two finite structures.
pub fn pairing_checks(x: &Mha, y: &Mha, prefix: &str, cfg: &ProbeConfig) -> Result<Vec<Check>> {
    let names = [
        ("product-coproduct", "product adjoint to coproduct", "⟨xy, z⟩ = ⟨x⊗y, Δz⟩"),
        ("coproduct-product", "coproduct adjoint to product", "⟨x, zw⟩ = ⟨Δx, z⊗w⟩"),
        ("antipode", "antipodes adjoint", "⟨Sx, z⟩ = ⟨x, Sz⟩"),
        ("unit-counit", "units adjoint to counits", "⟨1, z⟩ = ε(z), ⟨x, 1⟩ = ε(x)"),
    ];
    let metas: Vec<Meta> = names.iter().map(|(i, n, a)| Meta::new(format!("{prefix}.{i}"), *n, *a)).collect();
    if !shapes_dual(&x.shape, &y.shape) {
        return Err(Error::GroupMismatch(format!("{} and {} are not dual shapes", x.name, y.name)));
    }
    if x.dim().is_none() || y.dim().is_none() || x.unit.is_none() || y.unit.is_none() {
        return Ok(metas.iter().map(|m| m.skip("pairing checks need finite unital structures")).collect());
    }
    let xb: Vec<Vector> = x.basis().expect("finite").into_iter().map(Vector::basis).collect();
    let yb: Vec<Vector> = y.basis().expect("finite").into_iter().map(Vector::basis).collect();
    let d = xb.len();
    let mut out = Vec::new();
    let uni = &x.uni;

    // Triples are drawn from the basis; large spaces are sampled.
    let triples = |id: &str| -> (Vec<(usize, usize, usize)>, String) {
        if cfg.mode == crate::report::ProbeMode::Exhaustive && d * d * d <= cfg.limit {
            let mut v = Vec::new();
            for i in 0..d {
                for j in 0..d {
                    for k in 0..d {
                        v.push((i, j, k));
                    }
                }
            }
            (v, format!("exhaustive ({})", d * d * d))
        } else {
            let mut rng = cfg.rng(id);
            let n = match cfg.mode {
                crate::report::ProbeMode::Random { count, .. } => count,
                _ => cfg.count,
            };
            let v = (0..n).map(|_| (rng.gen_range(0..d), rng.gen_range(0..d), rng.gen_range(0..d))).collect();
            (v, format!("random basis triples(n={n})"))
        }
    };
    let fail = |meta: &Meta, desc: &str, input: String, l: Scalar, r: Scalar| {
        meta.fail(desc, None, crate::report::Counterexample { input, lhs: l.to_string(), rhs: r.to_string(), trace: Vec::new() })
    };

    let (ts, desc) = triples(&metas[0].id);
    let mut c = metas[0].pass(&desc, None);
    for &(i, j, k) in &ts {
        let l = pair(&x.mult.apply(&xb[i].tensor(&xb[j]))?, &yb[k])?;
        let r = pair(&xb[i].tensor(&xb[j]), &full_coproduct(y, &yb[k])?)?;
        if l != r {
            c = fail(&metas[0], &desc, format!("{} {} {}", uni.render(&xb[i]), uni.render(&xb[j]), uni.render(&yb[k])), l, r);
            break;
        }
    }
    out.push(c);

    let (ts, desc) = triples(&metas[1].id);
    let mut c = metas[1].pass(&desc, None);
    for &(i, j, k) in &ts {
        let l = pair(&xb[i], &y.mult.apply(&yb[j].tensor(&yb[k]))?)?;
        let r = pair(&full_coproduct(x, &xb[i])?, &yb[j].tensor(&yb[k]))?;
        if l != r {
            c = fail(&metas[1], &desc, format!("{} {} {}", uni.render(&xb[i]), uni.render(&yb[j]), uni.render(&yb[k])), l, r);
            break;
        }
    }
    out.push(c);

    let desc = format!("exhaustive ({})", d * d);
    let mut c = metas[2].pass(&desc, None);
    'outer: for a in &xb {
        for b in &yb {
            let l = pair(&x.antipode.apply(a)?, b)?;
            let r = pair(a, &y.antipode.apply(b)?)?;
            if l != r {
                c = fail(&metas[2], &desc, format!("{} {}", uni.render(a), uni.render(b)), l, r);
                break 'outer;
            }
        }
    }
    out.push(c);

    let desc = format!("exhaustive ({})", 2 * d);
    let mut c = metas[3].pass(&desc, None);
    let (x1, y1) = (x.unit.as_ref().expect("unital"), y.unit.as_ref().expect("unital"));
    for (a, b) in xb.iter().zip(&yb) {
        let l1 = pair(x1, b)?;
        let r1 = y.counit.apply(b)?.as_scalar();
        let l2 = pair(a, y1)?;
        let r2 = x.counit.apply(a)?.as_scalar();
        if l1 != r1 {
            c = fail(&metas[3], &desc, uni.render(b), l1, r1);
            break;
        }
        if l2 != r2 {
            c = fail(&metas[3], &desc, uni.render(a), l2, r2);
            break;
        }
    }
    out.push(c);
    Ok(out)
}

/// Which atoms of a shape are delta atoms (used for local units).
pub fn delta_positions(shape: &[Tag]) -> Vec<usize> {
    shape.iter().enumerate().filter(|(_, t)| t.kind == Kind::Delta).map(|(i, _)| i).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteTable;
    use crate::report::Status;

    fn s3_uni() -> Universe {
        let s3 = Group::finite("S3", FiniteTable::from_permutations(3, &[vec![2, 1, 3], vec![2, 3, 1]]).unwrap());
        Universe::new(vec![s3.clone(), s3])
    }

    fn all_pass(cs: &[Check]) {
        for c in cs {
            assert!(c.passed(), "{} failed: {:?}", c.id, c.counterexample);
        }
    }

    #[test]
    fn group_algebra_s3_passes() {
        let u = s3_uni();
        let a = group_algebra(&u, 0, "A");
        let cfg = ProbeConfig::default();
        all_pass(&verify_mha(&a, &cfg).unwrap());
        all_pass(&integral_checks(&a, &cfg).unwrap());
        all_pass(&star_checks(&a, &cfg).unwrap());
    }

    #[test]
    fn function_algebra_passes_finite_and_infinite() {
        let cfg = ProbeConfig::default();
        let u = s3_uni();
        let c = function_algebra(&u, 0, "C");
        all_pass(&verify_mha(&c, &cfg).unwrap());
        let z = Universe::new(vec![Group::integers()]);
        let b = function_algebra(&z, 0, "B");
        let checks = verify_mha(&b, &cfg).unwrap();
        all_pass(&checks);
        let unit = checks.iter().find(|c| c.id == "mha.B.unit").unwrap();
        assert_eq!(unit.name, "nonunital");
        all_pass(&integral_checks(&b, &cfg).unwrap());
    }

    #[test]
    fn function_algebra_on_integers_closed_forms() {
        let z = Universe::new(vec![Group::integers()]);
        let b = function_algebra(&z, 0, "B");
        let t = Tag::delta(0);
        let x = two(t, Elem::int(3), Elem::int(1));
        assert_eq!(b.t1.apply(&x).unwrap(), two(t, Elem::int(2), Elem::int(1)));
        assert_eq!(b.t2.apply(&x).unwrap(), two(t, Elem::int(3), Elem::int(-2)));
    }

    #[test]
    fn corrupted_antipode_fails() {
        let u = s3_uni();
        let mut a = group_algebra(&u, 0, "A");
        a.antipode = LinOp::identity(vec![Tag::group(0)]).renamed("S");
        let checks = verify_mha(&a, &ProbeConfig::default()).unwrap();
        let c = checks.iter().find(|c| c.id == "mha.A.antipode-left").unwrap();
        assert_eq!(c.status, Status::Fail);
        assert!(c.counterexample.is_some());
    }

    #[test]
    fn canonical_pairing_on_s3() {
        let u = s3_uni();
        let a = group_algebra(&u, 0, "A");
        let c = function_algebra(&u, 0, "C");
        let g = u.group(0);
        let t12 = g.parse_elem("(12)").unwrap();
        assert_eq!(pair(&one(Tag::group(0), t12.clone()), &one(Tag::delta(0), t12.clone())).unwrap(), Scalar::one());
        assert_eq!(pair(&one(Tag::group(0), t12), &one(Tag::delta(0), g.identity())).unwrap(), Scalar::zero());
        all_pass(&pairing_checks(&a, &c, "pair.A-C", &ProbeConfig::default()).unwrap());
        assert!(pairing_checks(&a, &a, "x", &ProbeConfig::default()).is_err());
    }

    #[test]
    fn cocommutative_and_commutative() {
        let u = s3_uni();
        let a = group_algebra(&u, 0, "A");
        let c = function_algebra(&u, 0, "C");
        let flip = LinOp::flip(Tag::delta(0), Tag::delta(0));
        for w in u.enumerate(&[Tag::group(0), Tag::group(0)]).unwrap() {
            let x = Vector::basis(w.clone());
            // T1(h⊗b) = h⊗hb and T2(b⊗h) = bh⊗h for group-likes.
            let h = &w[0].elem;
            let b = &w[1].elem;
            assert_eq!(a.t1.apply(&x).unwrap(), two(Tag::group(0), h.clone(), u.group(0).mul(h, b)));
            let y = two(Tag::group(0), b.clone(), h.clone());
            assert_eq!(a.t2.apply(&y).unwrap(), two(Tag::group(0), u.group(0).mul(b, h), h.clone()));
        }
        for w in u.enumerate(&[Tag::delta(0), Tag::delta(0)]).unwrap() {
            let x = Vector::basis(w);
            assert_eq!(c.mult.apply(&x).unwrap(), c.mult.apply(&flip.apply(&x).unwrap()).unwrap());
        }
    }
}
