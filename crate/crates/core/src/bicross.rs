//! Actions, coactions, twist and cotwist maps, and the two bicrossproducts.
//!
//! Tags: `A = CH` (group atoms, slot 0), `B = F(K)` (delta atoms, slot 1),
//! `C = F(H)` (delta atoms, slot 0), `D = CK` (group atoms, slot 1).
//!
//! On the `AB` side `A` acts on `B` from the right and `B` coacts on `A`
//! from the left; on the `CD` side `D` acts on `C` from the left and `C`
//! coacts on `D` from the right.  Both sides share the same shapes for the
//! twist `R: [Rt,L] → [L,Rt]` and cotwist `T: [L,Rt] → [Rt,L]`, where `L` is
//! the left tensor factor of the smash product (`A` or `C`) and `Rt` the right
//! one (`B` or `D`), so the coproduct compositions are written once.

use crate::error::{Error, Result};
use crate::group::Elem;
use crate::matched_pair::MatchedPair;
use crate::mhopf::{function_algebra, group_algebra, local_delta_unit, Mha};
use crate::tensor::{Atom, LinOp, Shape, Tag, Universe, Vector};

pub const A: Tag = Tag::group(0);
pub const B: Tag = Tag::delta(1);
pub const C: Tag = Tag::delta(0);
pub const D: Tag = Tag::group(1);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Ab,
    Cd,
}

/// The twist and cotwist family for one side.
#[derive(Clone, Debug)]
pub struct Twists {
    pub r: LinOp,
    pub r_op: LinOp,
    pub r_inv: LinOp,
    pub t: LinOp,
    pub t_op: LinOp,
    pub t_inv: LinOp,
    /// `P = T^op ∘ R^op` on `[Rt, L]`.
    pub p: LinOp,
}

/// Everything needed for one smash product: the factors, the action and
/// coaction operators, and the derived twists.
#[derive(Clone, Debug)]
pub struct SideData {
    pub side: Side,
    pub l: Mha,
    pub rt: Mha,
    /// `AB`: `b⊗a ↦ b◂a` on `[B,A]`; `CD`: `d⊗c ↦ d▸c` on `[D,C]`.
    pub act: LinOp,
    pub tw: Twists,
}

fn on(op: &LinOp, legs: &[usize], ambient: &[Tag]) -> Result<LinOp> {
    LinOp::on_legs(op, legs, ambient)
}

fn need_delta(m: &Mha) -> Result<&LinOp> {
    m.delta
        .as_ref()
        .ok_or_else(|| Error::PreconditionFailed(format!("{} needs a coproduct with values in the tensor product", m.name)))
}

/// Twists for a right action of `A` on `B` and a left coaction given by `T`, `T^op`.
pub fn ab_twists(a: &Mha, b: &Mha, act: &LinOp, t: &LinOp, t_op: &LinOp) -> Result<Twists> {
    let (ta, tb) = (a.shape[0], b.shape[0]);
    let da = need_delta(a)?;
    let ba: Shape = vec![tb, ta];
    let baa: Shape = vec![tb, ta, ta];
    // R(b⊗a) = a_(1) ⊗ b◂a_(2)
    let split = on(da, &[1], &ba)?;
    let r = LinOp::chain(
        "R",
        vec![split.clone(), LinOp::permute(baa.clone(), &[1, 0, 2])?, on(act, &[1, 2], &[ta, tb, ta])?],
    )?;
    // R^op(b⊗a) = a_(2) ⊗ b◂a_(1)
    let r_op = LinOp::chain(
        "R^op",
        vec![split, LinOp::permute(baa, &[2, 0, 1])?, on(act, &[1, 2], &[ta, tb, ta])?],
    )?;
    // R^-1(a⊗b) = b◂S^-1(a_(2)) ⊗ a_(1)
    let ab: Shape = vec![ta, tb];
    let r_inv = LinOp::chain(
        "R^-1",
        vec![
            on(da, &[0], &ab)?,
            on(&a.antipode_inv, &[1], &[ta, ta, tb])?,
            LinOp::permute(vec![ta, ta, tb], &[2, 1, 0])?,
            on(act, &[0, 1], &[tb, ta, ta])?,
        ],
    )?;
    // T^-1 = σ(S_B^-1⊗ι) T^op (ι⊗S_B) σ
    let t_inv = LinOp::chain(
        "T^-1",
        vec![
            LinOp::flip(tb, ta),
            on(&b.antipode, &[1], &ab)?,
            t_op.clone(),
            on(&b.antipode_inv, &[0], &ba)?,
            LinOp::flip(tb, ta),
        ],
    )?;
    let p = LinOp::chain("P", vec![r_op.clone(), t_op.clone()])?;
    Ok(Twists { r, r_op, r_inv, t: t.clone(), t_op: t_op.clone(), t_inv, p })
}

/// Twists for a left action of `D` on `C` and a right coaction given by `T`, `T^op`.
pub fn cd_twists(c: &Mha, d: &Mha, act: &LinOp, t: &LinOp, t_op: &LinOp) -> Result<Twists> {
    let (tc, td) = (c.shape[0], d.shape[0]);
    let dd = need_delta(d)?;
    let dc: Shape = vec![td, tc];
    let ddc: Shape = vec![td, td, tc];
    let split = on(dd, &[0], &dc)?;
    // R(d⊗c) = d_(1)▸c ⊗ d_(2)
    let r = LinOp::chain(
        "R",
        vec![split.clone(), LinOp::permute(ddc.clone(), &[0, 2, 1])?, on(act, &[0, 1], &[td, tc, td])?],
    )?;
    // R^op(d⊗c) = d_(2)▸c ⊗ d_(1)
    let r_op = LinOp::chain(
        "R^op",
        vec![split, LinOp::permute(ddc, &[1, 2, 0])?, on(act, &[0, 1], &[td, tc, td])?],
    )?;
    // R^-1(c⊗d) = d_(2) ⊗ S^-1(d_(1))▸c
    let cd: Shape = vec![tc, td];
    let r_inv = LinOp::chain(
        "R^-1",
        vec![
            on(dd, &[1], &cd)?,
            on(&d.antipode_inv, &[1], &[tc, td, td])?,
            LinOp::permute(vec![tc, td, td], &[2, 1, 0])?,
            on(act, &[1, 2], &[td, td, tc])?,
        ],
    )?;
    // T^-1 = σ(ι⊗S_C^-1) T^op (S_C⊗ι) σ
    let t_inv = LinOp::chain(
        "T^-1",
        vec![
            LinOp::flip(td, tc),
            on(&c.antipode, &[0], &cd)?,
            t_op.clone(),
            on(&c.antipode_inv, &[1], &dc)?,
            LinOp::flip(td, tc),
        ],
    )?;
    let p = LinOp::chain("P", vec![r_op.clone(), t_op.clone()])?;
    Ok(Twists { r, r_op, r_inv, t: t.clone(), t_op: t_op.clone(), t_inv, p })
}

impl SideData {
    pub fn ab(a: &Mha, b: &Mha, act: LinOp, t: LinOp, t_op: LinOp) -> Result<SideData> {
        let tw = ab_twists(a, b, &act, &t, &t_op)?;
        Ok(SideData { side: Side::Ab, l: a.clone(), rt: b.clone(), act, tw })
    }

    pub fn cd(c: &Mha, d: &Mha, act: LinOp, t: LinOp, t_op: LinOp) -> Result<SideData> {
        let tw = cd_twists(c, d, &act, &t, &t_op)?;
        Ok(SideData { side: Side::Cd, l: c.clone(), rt: d.clone(), act, tw })
    }

    /// Shape `[L, Rt]` of a basis element of the smash product.
    pub fn shape(&self) -> Shape {
        vec![self.l.shape[0], self.rt.shape[0]]
    }

    pub fn square(&self) -> Shape {
        let s = self.shape();
        vec![s[0], s[1], s[0], s[1]]
    }

    /// `Δ#(x)(1⊗y)` as `(T^-1)12 (T1^L)23 T12 R34 (T1^Rt)23 (R^-1)34`.
    pub fn t1(&self) -> Result<LinOp> {
        let s = self.square();
        let (l, rt) = (self.l.shape[0], self.rt.shape[0]);
        let tw = &self.tw;
        LinOp::chain(
            "T1#",
            vec![
                on(&tw.r_inv, &[2, 3], &s)?,
                on(&self.rt.t1, &[1, 2], &[l, rt, rt, l])?,
                on(&tw.r, &[2, 3], &[l, rt, rt, l])?,
                on(&tw.t, &[0, 1], &s)?,
                on(&self.l.t1, &[1, 2], &[rt, l, l, rt])?,
                on(&tw.t_inv, &[0, 1], &[rt, l, l, rt])?,
            ],
        )
    }

    /// `(x⊗1)Δ#(y)` as `(T^-1)34 (T2^Rt)23 T34 R12 (T2^L)23 (R^-1)12`.
    pub fn t2(&self) -> Result<LinOp> {
        let s = self.square();
        let (l, rt) = (self.l.shape[0], self.rt.shape[0]);
        let tw = &self.tw;
        LinOp::chain(
            "T2#",
            vec![
                on(&tw.r_inv, &[0, 1], &s)?,
                on(&self.l.t2, &[1, 2], &[rt, l, l, rt])?,
                on(&tw.r, &[0, 1], &[rt, l, l, rt])?,
                on(&tw.t, &[2, 3], &s)?,
                on(&self.rt.t2, &[1, 2], &[l, rt, rt, l])?,
                on(&tw.t_inv, &[2, 3], &[l, rt, rt, l])?,
            ],
        )
    }

    /// The factors of `T1#` inverted in reverse order.
    pub fn t1_inv(&self) -> Result<LinOp> {
        let s = self.square();
        let (l, rt) = (self.l.shape[0], self.rt.shape[0]);
        let tw = &self.tw;
        LinOp::chain(
            "T1#^-1",
            vec![
                on(&tw.t, &[0, 1], &s)?,
                on(&self.l.t1_inv, &[1, 2], &[rt, l, l, rt])?,
                on(&tw.t_inv, &[0, 1], &[rt, l, l, rt])?,
                on(&tw.r_inv, &[2, 3], &s)?,
                on(&self.rt.t1_inv, &[1, 2], &[l, rt, rt, l])?,
                on(&tw.r, &[2, 3], &[l, rt, rt, l])?,
            ],
        )
    }

    pub fn t2_inv(&self) -> Result<LinOp> {
        let s = self.square();
        let (l, rt) = (self.l.shape[0], self.rt.shape[0]);
        let tw = &self.tw;
        LinOp::chain(
            "T2#^-1",
            vec![
                on(&tw.t, &[2, 3], &s)?,
                on(&self.rt.t2_inv, &[1, 2], &[l, rt, rt, l])?,
                on(&tw.t_inv, &[2, 3], &[l, rt, rt, l])?,
                on(&tw.r_inv, &[0, 1], &s)?,
                on(&self.l.t2_inv, &[1, 2], &[rt, l, l, rt])?,
                on(&tw.r, &[0, 1], &[rt, l, l, rt])?,
            ],
        )
    }

    /// `(1⊗y)Δ#(x)` on the `AB` side, using the finite coproduct of `A`.
    pub fn t4(&self) -> Result<LinOp> {
        if self.side != Side::Ab {
            return Err(Error::PreconditionFailed("left-covered slice is only built on the AB side".into()));
        }
        let (ta, tb) = (self.l.shape[0], self.rt.shape[0]);
        let da = need_delta(&self.l)?;
        let b4 = self.rt.t4.as_ref().ok_or_else(|| Error::PreconditionFailed("B has no T4".into()))?;
        let tw = &self.tw;
        LinOp::chain(
            "T4#",
            vec![
                // x = ab written as b̃ã
                on(&tw.r_inv, &[0, 1], &[ta, tb, ta, tb])?,
                // (1⊗b')Δ_B(b̃)
                on(b4, &[0, 3], &[tb, ta, ta, tb])?,
                on(da, &[1], &[tb, ta, ta, tb])?,
                // b̃_(1) ã_(1) = R(b̃_(1)⊗ã_(1))
                on(&tw.r, &[0, 1], &[tb, ta, ta, ta, tb])?,
                // (β⊗1)Γ(ã_(2)) with β = b̃_(1)◂ã
                on(&tw.t_op, &[2, 1], &[ta, tb, ta, ta, tb])?,
                // b'' α' = R(b''⊗α')
                on(&tw.r, &[4, 1], &[ta, ta, tb, ta, tb])?,
                on(&self.l.mult, &[3, 4], &[ta, tb, tb, ta, ta])?,
                LinOp::permute(vec![ta, tb, tb, ta], &[0, 2, 3, 1])?,
            ],
        )
    }

    /// Smash product `m = (m_L⊗m_Rt)(ι⊗R⊗ι)`.
    pub fn mult(&self) -> Result<LinOp> {
        let s = self.square();
        let (l, rt) = (self.l.shape[0], self.rt.shape[0]);
        LinOp::chain(
            "m#",
            vec![
                on(&self.tw.r, &[1, 2], &s)?,
                on(&self.l.mult, &[0, 1], &[l, l, rt, rt])?,
                on(&self.rt.mult, &[1, 2], &[l, rt, rt])?,
            ],
        )
    }

    /// `S# = R(S_Rt⊗S_L)T`.
    pub fn antipode(&self) -> Result<LinOp> {
        LinOp::chain(
            "S#",
            vec![self.tw.t.clone(), LinOp::op_tensor(&self.rt.antipode, &self.l.antipode)?, self.tw.r.clone()],
        )
    }

    pub fn antipode_inv(&self) -> Result<LinOp> {
        LinOp::chain(
            "S#^-1",
            vec![
                self.tw.r_inv.clone(),
                LinOp::op_tensor(&self.rt.antipode_inv, &self.l.antipode_inv)?,
                self.tw.t_inv.clone(),
            ],
        )
    }

    /// `(xy)* = y*x*`, so `(l rt)* = R(rt*⊗l*)`.
    pub fn star(&self) -> Result<Option<LinOp>> {
        let (Some(sl), Some(sr)) = (&self.l.star, &self.rt.star) else { return Ok(None) };
        let (l, rt) = (self.l.shape[0], self.rt.shape[0]);
        Ok(Some(LinOp::chain(
            "*#",
            vec![LinOp::op_tensor(sl, sr)?, LinOp::flip(l, rt), self.tw.r.clone()],
        )?))
    }

    /// Assemble the multiplier Hopf algebra on `L⊗Rt`.
    pub fn assemble(&self, name: &str) -> Result<Mha> {
        let shape = self.shape();
        let (l, rt) = (self.l.shape[0], self.rt.shape[0]);
        let counit = LinOp::op_tensor(&self.l.counit, &self.rt.counit)?.renamed("ε#");
        let unit = match (&self.l.unit, &self.rt.unit) {
            (Some(x), Some(y)) => Some(x.tensor(y)),
            _ => None,
        };
        let (left_unit, right_unit): (crate::mhopf::UnitFn, crate::mhopf::UnitFn) = match self.side {
            Side::Ab => {
                // (1⊗u)(a⊗b) = a⊗b once u covers the B-legs of R^-1(a⊗b).
                let r_inv = self.tw.r_inv.clone();
                let one_a = self.l.unit.clone().ok_or_else(|| Error::PreconditionFailed("A needs a unit".into()))?;
                let one_a2 = one_a.clone();
                (
                    std::sync::Arc::new(move |x: &Vector| Ok(one_a.tensor(&local_delta_unit(&r_inv.apply(x)?, &[0], rt)))),
                    std::sync::Arc::new(move |x: &Vector| Ok(one_a2.tensor(&local_delta_unit(x, &[1], rt)))),
                )
            }
            Side::Cd => {
                let r_inv = self.tw.r_inv.clone();
                let one_d = self.rt.unit.clone().ok_or_else(|| Error::PreconditionFailed("D needs a unit".into()))?;
                let one_d2 = one_d.clone();
                (
                    std::sync::Arc::new(move |x: &Vector| Ok(local_delta_unit(x, &[0], l).tensor(&one_d))),
                    std::sync::Arc::new(move |x: &Vector| Ok(local_delta_unit(&r_inv.apply(x)?, &[1], l).tensor(&one_d2))),
                )
            }
        };
        let (left_integral, right_integral) = match self.side {
            Side::Ab => {
                let psi = match (&self.l.right_integral, &self.rt.right_integral) {
                    (Some(x), Some(y)) => Some(LinOp::op_tensor(x, y)?.renamed("ψ#")),
                    _ => None,
                };
                (None, psi)
            }
            Side::Cd => {
                let phi = match (&self.l.left_integral, &self.rt.left_integral) {
                    (Some(x), Some(y)) => Some(LinOp::op_tensor(x, y)?.renamed("φ#")),
                    _ => None,
                };
                (phi, None)
            }
        };
        let t4 = if self.side == Side::Ab { Some(self.t4()?.memoized()) } else { None };
        Ok(Mha {
            name: name.into(),
            shape,
            uni: self.l.uni.clone(),
            mult: self.mult()?.memoized(),
            t1: self.t1()?.memoized(),
            t2: self.t2()?.memoized(),
            t1_inv: self.t1_inv()?.memoized(),
            t2_inv: self.t2_inv()?.memoized(),
            t4,
            counit,
            antipode: self.antipode()?.memoized(),
            antipode_inv: self.antipode_inv()?.memoized(),
            unit,
            left_unit,
            right_unit,
            left_integral,
            right_integral,
            star: self.star()?,
            delta: None,
        })
    }
}

/// `Δ#(ab)(1⊗a'b')` evaluated from `Δ#(ab) = (a_(1)⊗1)Γ(a_(2))Δ_B(b)` for
/// group-like basis elements of `A`, without the six-factor composition.
pub fn direct_t1(s: &SideData) -> Result<LinOp> {
    let (ta, tb) = (s.l.shape[0], s.rt.shape[0]);
    let da = need_delta(&s.l)?.clone();
    let (act, t, s_inv, t1b, ma) = (s.act.clone(), s.tw.t.clone(), s.l.antipode_inv.clone(), s.rt.t1.clone(), s.l.mult.clone());
    Ok(LinOp::new("Δ#(x)(1⊗y) direct", vec![ta, tb, ta, tb], vec![ta, tb, ta, tb], move |w| {
        let (a, b, a2, b2) = (&w[0], &w[1], &w[2], &w[3]);
        let mut out = Vector::zero();
        // b' ◂ S^-1(a'), then Δ_B(b)(1⊗(b'◂S^-1 a'))
        let sa = s_inv.apply_word(std::slice::from_ref(a2))?;
        for (sw, sc) in sa.iter() {
            let moved = act.apply_word(&[b2.clone(), sw[0].clone()])?;
            for (mw, mc) in moved.iter() {
                let y = t1b.apply_word(&[b.clone(), mw[0].clone()])?;
                for (yw, yc) in y.iter() {
                    // (y_2 ◂ a') sits to the right of a' in the second leg
                    let z = act.apply_word(&[yw[1].clone(), a2.clone()])?;
                    let split = da.apply_word(std::slice::from_ref(a))?;
                    for (aw, ac) in split.iter() {
                        let g = t.apply_word(&[aw[1].clone(), yw[0].clone()])?;
                        for (gw, gc) in g.iter() {
                            let prod = ma.apply_word(&[gw[1].clone(), a2.clone()])?;
                            for (pw, pc) in prod.iter() {
                                for (zw, zc) in z.iter() {
                                    let coef = sc * mc;
                                    let coef = &(&coef * yc) * &(ac * gc);
                                    let coef = &coef * &(pc * zc);
                                    out.add_term(
                                        vec![aw[0].clone(), gw[0].clone(), pw[0].clone(), zw[0].clone()],
                                        coef,
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }))
}

/// `(ab⊗1)Δ#(a'b')` evaluated from the defining formula.
pub fn direct_t2(s: &SideData) -> Result<LinOp> {
    let (ta, tb) = (s.l.shape[0], s.rt.shape[0]);
    let da = need_delta(&s.l)?.clone();
    let (r, t_op, t2b, ma) = (s.tw.r.clone(), s.tw.t_op.clone(), s.rt.t2.clone(), s.l.mult.clone());
    Ok(LinOp::new("(x⊗1)Δ#(y) direct", vec![ta, tb, ta, tb], vec![ta, tb, ta, tb], move |w| {
        let (a, b, a2, b2) = (&w[0], &w[1], &w[2], &w[3]);
        let mut out = Vector::zero();
        for (sw, sc) in da.apply_word(std::slice::from_ref(a2))?.iter() {
            // ab·a'_(1) = (m_A⊗ι)(a⊗R(b⊗a'_(1)))
            for (rw, rc) in r.apply_word(&[b.clone(), sw[0].clone()])?.iter() {
                for (mw, mc) in ma.apply_word(&[a.clone(), rw[0].clone()])?.iter() {
                    // (β⊗1)Γ(a'_(2))
                    for (gw, gc) in t_op.apply_word(&[sw[1].clone(), rw[1].clone()])?.iter() {
                        for (hw, hc) in t2b.apply_word(&[gw[0].clone(), b2.clone()])?.iter() {
                            let coef = &(sc * rc) * &(mc * gc);
                            let coef = &coef * hc;
                            out.add_term(vec![mw[0].clone(), hw[0].clone(), gw[1].clone(), hw[1].clone()], coef);
                        }
                    }
                }
            }
        }
        Ok(out)
    }))
}

fn basis1(t: Tag, e: Elem) -> Atom {
    Atom::new(t, e)
}

/// The matched-pair instance: groups, the four component algebras and both sides.
#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub mp: MatchedPair,
    pub uni: Universe,
    pub a: Mha,
    pub b: Mha,
    pub c: Mha,
    pub d: Mha,
    pub ab: SideData,
    pub cd: SideData,
}

/// `δ_k◂h = δ_{h^-1▸k}` on `[B,A]`.
pub fn ab_action(mp: &MatchedPair) -> LinOp {
    let mp = mp.clone();
    LinOp::new("◂", vec![B, A], vec![B], move |w| {
        let h_inv = mp.h.inv(&w[1].elem);
        Ok(Vector::basis(vec![basis1(B, mp.tr(&h_inv, &w[0].elem))]))
    })
}

/// `T(h⊗δ_k) = δ_k⊗(h◂k)`; returns `(T, T^op)`, which coincide here.
pub fn ab_coaction(mp: &MatchedPair) -> (LinOp, LinOp) {
    let mp = mp.clone();
    let t = LinOp::new("T", vec![A, B], vec![B, A], move |w| {
        Ok(Vector::basis(vec![w[1].clone(), basis1(A, mp.tl(&w[0].elem, &w[1].elem))]))
    });
    (t.clone(), t.renamed("T^op"))
}

/// `k▸δ_h = δ_{h◂k^-1}` on `[D,C]`.
pub fn cd_action(mp: &MatchedPair) -> LinOp {
    let mp = mp.clone();
    LinOp::new("▸", vec![D, C], vec![C], move |w| {
        let k_inv = mp.k.inv(&w[0].elem);
        Ok(Vector::basis(vec![basis1(C, mp.tl(&w[1].elem, &k_inv))]))
    })
}

/// `T(δ_h⊗k) = (h▸k)⊗δ_h`; returns `(T, T^op)`.
pub fn cd_coaction(mp: &MatchedPair) -> (LinOp, LinOp) {
    let mp = mp.clone();
    let t = LinOp::new("T", vec![C, D], vec![D, C], move |w| {
        Ok(Vector::basis(vec![basis1(D, mp.tr(&w[0].elem, &w[1].elem)), w[0].clone()]))
    });
    (t.clone(), t.renamed("T^op"))
}

impl Instance {
    pub fn from_matched_pair(name: &str, mp: &MatchedPair) -> Result<Instance> {
        let uni = Universe::new(vec![mp.h.clone(), mp.k.clone()]);
        let a = group_algebra(&uni, 0, "A");
        let b = function_algebra(&uni, 1, "B");
        let c = function_algebra(&uni, 0, "C");
        let d = group_algebra(&uni, 1, "D");
        let (t, t_op) = ab_coaction(mp);
        let ab = SideData::ab(&a, &b, ab_action(mp), t, t_op)?;
        let (t, t_op) = cd_coaction(mp);
        let cd = SideData::cd(&c, &d, cd_action(mp), t, t_op)?;
        Ok(Instance { name: name.into(), mp: mp.clone(), uni, a, b, c, d, ab, cd })
    }

    /// Replace the `AB` action and coaction (for user-supplied or corrupted data).
    pub fn with_ab(mut self, act: LinOp, t: LinOp, t_op: LinOp) -> Result<Instance> {
        self.ab = SideData::ab(&self.a, &self.b, act, t, t_op)?;
        Ok(self)
    }

    pub fn with_cd(mut self, act: LinOp, t: LinOp, t_op: LinOp) -> Result<Instance> {
        self.cd = SideData::cd(&self.c, &self.d, act, t, t_op)?;
        Ok(self)
    }

    pub fn build_ab(&self) -> Result<Mha> {
        self.ab.assemble("AB")
    }

    pub fn build_cd(&self) -> Result<Mha> {
        self.cd.assemble("CD")
    }

    pub fn is_finite(&self) -> bool {
        self.mp.h.is_finite() && self.mp.k.is_finite()
    }

    /// `Δ#(hδ_k)(1⊗h'δ_l)` from `Δ#(hδ_k) = Σ_{k'k''=k} hδ_{k'} ⊗ (h◂k')δ_{k''}`.
    pub fn ab_t1_closed(&self) -> LinOp {
        let mp = self.mp.clone();
        LinOp::new("T1# closed form", vec![A, B, A, B], vec![A, B, A, B], move |w| {
            let (h, k, h2, l) = (&w[0].elem, &w[1].elem, &w[2].elem, &w[3].elem);
            // (h◂k')δ_{k''} · h'δ_l ≠ 0 forces k'' = h'▸l.
            let k2 = mp.tr(h2, l);
            let k1 = mp.k.mul(k, &mp.k.inv(&k2));
            let g = mp.h.mul(&mp.tl(h, &k1), h2);
            Ok(Vector::basis(vec![
                basis1(A, h.clone()),
                basis1(B, k1),
                basis1(A, g),
                basis1(B, l.clone()),
            ]))
        })
    }

    /// `Δ#(δ_h k)(1⊗δ_g k')` from `Δ#(δ_h k) = Σ_{h'h''=h} δ_{h'}(h''▸k) ⊗ δ_{h''}k`.
    pub fn cd_t1_closed(&self) -> LinOp {
        let mp = self.mp.clone();
        LinOp::new("T1# closed form", vec![C, D, C, D], vec![C, D, C, D], move |w| {
            let (h, k, g, k2) = (&w[0].elem, &w[1].elem, &w[2].elem, &w[3].elem);
            // δ_{h''}k · δ_g k' ≠ 0 forces h'' = g◂k^-1.
            let h2 = mp.tl(g, &mp.k.inv(k));
            let h1 = mp.h.mul(h, &mp.h.inv(&h2));
            Ok(Vector::basis(vec![
                basis1(C, h1),
                basis1(D, mp.tr(&h2, k)),
                basis1(C, h2),
                basis1(D, mp.k.mul(k, k2)),
            ]))
        })
    }

    /// `S#(hδ_k) = (h◂k)^-1 δ_{(h▸k)^-1}`.
    pub fn ab_antipode_closed(&self) -> LinOp {
        let mp = self.mp.clone();
        LinOp::new("S# closed form", vec![A, B], vec![A, B], move |w| {
            let (h, k) = (&w[0].elem, &w[1].elem);
            Ok(Vector::basis(vec![
                basis1(A, mp.h.inv(&mp.tl(h, k))),
                basis1(B, mp.k.inv(&mp.tr(h, k))),
            ]))
        })
    }

    /// `S#(δ_h k) = δ_{(h◂k)^-1} (h▸k)^-1`.
    pub fn cd_antipode_closed(&self) -> LinOp {
        let mp = self.mp.clone();
        LinOp::new("S# closed form", vec![C, D], vec![C, D], move |w| {
            let (h, k) = (&w[0].elem, &w[1].elem);
            Ok(Vector::basis(vec![
                basis1(C, mp.h.inv(&mp.tl(h, k))),
                basis1(D, mp.k.inv(&mp.tr(h, k))),
            ]))
        })
    }

    /// `(hδ_k)(h'δ_{k'}) = [k' = h'^-1▸k] hh'δ_{k'}`.
    pub fn ab_mult_closed(&self) -> LinOp {
        let mp = self.mp.clone();
        LinOp::new("m# closed form", vec![A, B, A, B], vec![A, B], move |w| {
            let (h, k, h2, k2) = (&w[0].elem, &w[1].elem, &w[2].elem, &w[3].elem);
            if *k2 != mp.tr(&mp.h.inv(h2), k) {
                return Ok(Vector::zero());
            }
            Ok(Vector::basis(vec![basis1(A, mp.h.mul(h, h2)), basis1(B, k2.clone())]))
        })
    }

    /// `(δ_h k)(δ_g k') = [h = g◂k^-1] δ_h kk'`.
    pub fn cd_mult_closed(&self) -> LinOp {
        let mp = self.mp.clone();
        LinOp::new("m# closed form", vec![C, D, C, D], vec![C, D], move |w| {
            let (h, k, g, k2) = (&w[0].elem, &w[1].elem, &w[2].elem, &w[3].elem);
            if *h != mp.tl(g, &mp.k.inv(k)) {
                return Ok(Vector::zero());
            }
            Ok(Vector::basis(vec![basis1(C, h.clone()), basis1(D, mp.k.mul(k, k2))]))
        })
    }
}

/// The three compatibility conditions on the `AB` side as `(lhs, rhs)` pairs.
pub mod conditions {
    use super::*;

    /// `P(ι⊗m_A)` and `(ι⊗m_A)P13P12` on `[B,A,A]`.
    pub fn ab_c1(s: &SideData) -> Result<(LinOp, LinOp)> {
        let (ta, tb) = (s.l.shape[0], s.rt.shape[0]);
        let baa = vec![tb, ta, ta];
        let lhs = LinOp::chain("P(ι⊗m_A)", vec![on(&s.l.mult, &[1, 2], &baa)?, s.tw.p.clone()])?;
        let rhs = LinOp::chain(
            "(ι⊗m_A)P13P12",
            vec![on(&s.tw.p, &[0, 1], &baa)?, on(&s.tw.p, &[0, 2], &baa)?, on(&s.l.mult, &[1, 2], &baa)?],
        )?;
        Ok((lhs, rhs))
    }

    /// `(Δ_B⊗ι)P = P23P13(Δ_B⊗ι)` with the first leg covered by `b` from the
    /// left, as maps on `[B,B,A]` taking `b⊗q⊗a`.
    pub fn ab_c2(s: &SideData) -> Result<(LinOp, LinOp)> {
        let (ta, tb) = (s.l.shape[0], s.rt.shape[0]);
        let bba = vec![tb, tb, ta];
        let lhs = LinOp::chain("(T2^B⊗ι)(ι⊗P)", vec![on(&s.tw.p, &[1, 2], &bba)?, on(&s.rt.t2, &[0, 1], &bba)?])?;
        let p13 = on(&s.tw.p, &[0, 2], &bba)?;
        let p23 = on(&s.tw.p, &[1, 2], &bba)?;
        let (r_inv, t2b, mb) = (s.tw.r_inv.clone(), s.rt.t2.clone(), s.rt.mult.clone());
        let rhs = LinOp::new("(b⊗1⊗1)P23P13(Δ_B(q)⊗a)", bba.clone(), bba, move |w| {
            let (b, q, a) = (&w[0], &w[1], &w[2]);
            let u = local_delta_unit(&r_inv.apply_word(&[a.clone(), b.clone()])?, &[0], tb);
            let cov = t2b.apply(&u.tensor(&Vector::basis(vec![q.clone()])))?;
            let v = cov.tensor(&Vector::basis(vec![a.clone()]));
            let v = p23.apply(&p13.apply(&v)?)?;
            let mut out = Vector::zero();
            for (vw, vc) in v.iter() {
                for (pw, pc) in mb.apply_word(&[b.clone(), vw[0].clone()])?.iter() {
                    out.add_term(vec![pw[0].clone(), vw[1].clone(), vw[2].clone()], vc * pc);
                }
            }
            Ok(out)
        });
        Ok((lhs, rhs))
    }

    /// `T∘R` and `T^op∘R^op` on `[Rt, L]`.
    pub fn c3(s: &SideData) -> Result<(LinOp, LinOp)> {
        Ok((
            LinOp::compose(&s.tw.t, &s.tw.r)?,
            LinOp::compose(&s.tw.t_op, &s.tw.r_op)?,
        ))
    }

    /// `Δ_B(q◂a)` against `Δ_B(q)•Δ#(a)`, both covered by `b` on the left: on `[B,B,A]`.
    pub fn ab_bullet(s: &SideData) -> Result<(LinOp, LinOp)> {
        let (ta, tb) = (s.l.shape[0], s.rt.shape[0]);
        let bba = vec![tb, tb, ta];
        let lhs = LinOp::chain("T2^B(ι⊗◂)", vec![on(&s.act, &[1, 2], &bba)?, s.rt.t2.clone()])?;
        let (_, c2) = ab_c2(s)?;
        let rhs = LinOp::chain("(ι⊗ι⊗ε_A)(b⊗1⊗1)P23P13(Δ_B⊗ι)", vec![c2, on(&s.l.counit, &[2], &bba)?])?;
        Ok((lhs, rhs))
    }

    /// `P(m_D⊗ι)` and `(m_D⊗ι)P13P23` on `[D,D,C]`.
    pub fn cd_c1(s: &SideData) -> Result<(LinOp, LinOp)> {
        let (tc, td) = (s.l.shape[0], s.rt.shape[0]);
        let ddc = vec![td, td, tc];
        let lhs = LinOp::chain("P(m_D⊗ι)", vec![on(&s.rt.mult, &[0, 1], &ddc)?, s.tw.p.clone()])?;
        let rhs = LinOp::chain(
            "(m_D⊗ι)P13P23",
            vec![on(&s.tw.p, &[1, 2], &ddc)?, on(&s.tw.p, &[0, 2], &ddc)?, on(&s.rt.mult, &[0, 1], &ddc)?],
        )?;
        Ok((lhs, rhs))
    }

    /// `(ι⊗Δ_C)P = P12P13(ι⊗Δ_C)` with the last leg covered by `c'` from the
    /// right, as maps on `[D,C,C]` taking `d⊗c⊗c'`.
    pub fn cd_c2(s: &SideData) -> Result<(LinOp, LinOp)> {
        let (tc, td) = (s.l.shape[0], s.rt.shape[0]);
        let dcc = vec![td, tc, tc];
        let lhs = LinOp::chain("(ι⊗T1^C)(P⊗ι)", vec![on(&s.tw.p, &[0, 1], &dcc)?, on(&s.l.t1, &[1, 2], &dcc)?])?;
        let p12 = on(&s.tw.p, &[0, 1], &dcc)?;
        let p13 = on(&s.tw.p, &[0, 2], &dcc)?;
        let (r_inv, t1c, mc) = (s.tw.r_inv.clone(), s.l.t1.clone(), s.l.mult.clone());
        let rhs = LinOp::new("P12[P13(d⊗Δ_C(c))(1⊗1⊗c')]", dcc.clone(), dcc, move |w| {
            let (d, c, c2) = (&w[0], &w[1], &w[2]);
            let u = local_delta_unit(&r_inv.apply_word(&[c2.clone(), d.clone()])?, &[1], tc);
            let cov = t1c.apply(&Vector::basis(vec![c.clone()]).tensor(&u))?;
            let v = p13.apply(&Vector::basis(vec![d.clone()]).tensor(&cov))?;
            let mut out = Vector::zero();
            for (vw, vc) in v.iter() {
                for (pw, pc) in mc.apply_word(&[vw[2].clone(), c2.clone()])?.iter() {
                    out.add_term(vec![vw[0].clone(), vw[1].clone(), pw[0].clone()], vc * pc);
                }
            }
            p12.apply(&out)
        });
        Ok((lhs, rhs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn agree(lhs: &LinOp, rhs: &LinOp, uni: &Universe) {
        for w in uni.enumerate(&lhs.input).unwrap() {
            let x = Vector::basis(w.clone());
            assert_eq!(lhs.apply(&x).unwrap(), rhs.apply(&x).unwrap(), "{} vs {} at {}", lhs.name, rhs.name, uni.render_word(&w));
        }
    }

    fn closed_forms(inst: &Instance) {
        let u = &inst.uni;
        let mp = inst.mp.clone();
        let r_inv_closed = LinOp::new("R^-1 closed", vec![A, B], vec![B, A], move |w| {
            Ok(Vector::basis(vec![basis1(B, mp.tr(&w[0].elem, &w[1].elem)), w[0].clone()]))
        });
        agree(&inst.ab.tw.r_inv, &r_inv_closed, u);
        let mp = inst.mp.clone();
        let t_inv_closed = LinOp::new("T^-1 closed", vec![B, A], vec![A, B], move |w| {
            let k_inv = mp.k.inv(&w[0].elem);
            Ok(Vector::basis(vec![basis1(A, mp.tl(&w[1].elem, &k_inv)), w[0].clone()]))
        });
        agree(&inst.ab.tw.t_inv, &t_inv_closed, u);
        agree(&inst.ab.antipode().unwrap(), &inst.ab_antipode_closed(), u);
        agree(&inst.cd.antipode().unwrap(), &inst.cd_antipode_closed(), u);
        agree(&inst.ab.mult().unwrap(), &inst.ab_mult_closed(), u);
        agree(&inst.cd.mult().unwrap(), &inst.cd_mult_closed(), u);
        agree(&inst.ab.t1().unwrap(), &inst.ab_t1_closed(), u);
        agree(&inst.cd.t1().unwrap(), &inst.cd_t1_closed(), u);
        agree(&inst.ab.t1().unwrap(), &direct_t1(&inst.ab).unwrap(), u);
        agree(&inst.ab.t2().unwrap(), &direct_t2(&inst.ab).unwrap(), u);
    }

    #[test]
    fn s3_closed_forms() {
        closed_forms(&catalog::s3().unwrap());
        closed_forms(&catalog::s3_swapped().unwrap());
    }

    #[test]
    fn inverses_round_trip_on_s3() {
        let inst = catalog::s3_swapped().unwrap();
        let u = &inst.uni;
        for side in [&inst.ab, &inst.cd] {
            let pairs = [
                (side.t1().unwrap(), side.t1_inv().unwrap()),
                (side.t2().unwrap(), side.t2_inv().unwrap()),
                (side.tw.r.clone(), side.tw.r_inv.clone()),
                (side.tw.t.clone(), side.tw.t_inv.clone()),
                (side.antipode().unwrap(), side.antipode_inv().unwrap()),
            ];
            for (f, g) in pairs {
                for w in u.enumerate(&f.input).unwrap() {
                    let x = Vector::basis(w);
                    assert_eq!(g.apply(&f.apply(&x).unwrap()).unwrap(), x, "{}", f.name);
                }
            }
        }
    }

    #[test]
    fn left_covered_slice_on_s3() {
        let inst = catalog::s3_swapped().unwrap();
        let u = &inst.uni;
        let mp = inst.mp.clone();
        let closed = LinOp::new("T4# closed", vec![A, B, A, B], vec![A, B, A, B], move |w| {
            // Σ_{k'k''=k} hδ_{k'} ⊗ (h'δ_l)((h◂k')δ_{k''})
            let (h, k, h2, l) = (&w[0].elem, &w[1].elem, &w[2].elem, &w[3].elem);
            let mut out = Vector::zero();
            for k1 in mp.k.elements().unwrap() {
                let k2 = mp.k.mul(&mp.k.inv(&k1), k);
                let g = mp.tl(h, &k1);
                if k2 != mp.tr(&mp.h.inv(&g), l) {
                    continue;
                }
                out.add_term(
                    vec![basis1(A, h.clone()), basis1(B, k1.clone()), basis1(A, mp.h.mul(h2, &g)), basis1(B, k2)],
                    crate::scalar::Scalar::one(),
                );
            }
            Ok(out)
        });
        agree(&inst.ab.t4().unwrap(), &closed, u);
    }
}
