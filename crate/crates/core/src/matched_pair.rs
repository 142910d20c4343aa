//! Exact factorizations `G = KH` and the matched pairs they induce.
//!
//! For `h ∈ H`, `k ∈ K` the product `hk` factors uniquely as `k'h'`; we write
//! `h▸k = k'` and `h◂k = h'`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::group::{Elem, Group, GroupKind};

pub type BinFn = Arc<dyn Fn(&Elem, &Elem) -> Elem + Send + Sync>;
pub type EmbedFn = Arc<dyn Fn(&Elem) -> Elem + Send + Sync>;

/// How a built-in family subgroup sits inside `Z[1/m] ⋊ Z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorRole {
    /// `Z[1/m]`, embedded as `n ↦ (n, 0)`.
    Normal,
    /// `Z`, embedded as `q ↦ (0, q)`.
    Acting,
}

/// A subgroup together with its embedding into the ambient group.
#[derive(Clone)]
pub struct Subgroup {
    pub group: Group,
    pub embed: EmbedFn,
    pub role: Option<FactorRole>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subgroup").field("group", &self.group.name).field("role", &self.role).finish()
    }
}

impl Subgroup {
    /// A subgroup of a finite table group sharing the parent's encodings.
    pub fn finite(group: Group) -> Subgroup {
        Subgroup { group, embed: Arc::new(|e: &Elem| e.clone()), role: None }
    }

    /// One of the two factors of a semidirect family group.
    pub fn factor(parent: &Group, name: &str, role: FactorRole) -> Result<Subgroup> {
        let m = match &parent.kind {
            GroupKind::Semidirect { m } => m.to_i64().ok_or_else(|| Error::BadParams("m too large".into()))?,
            _ => return Err(Error::BadParams(format!("{} is not a semidirect family group", parent.name))),
        };
        let (group, embed): (Group, EmbedFn) = match role {
            FactorRole::Normal => (Group::localized(m)?, Arc::new(|n: &Elem| Elem::pair(n.clone(), Elem::int(0)))),
            FactorRole::Acting => (Group::integers(), Arc::new(|q: &Elem| Elem::pair(Elem::int(0), q.clone()))),
        };
        Ok(Subgroup { group: group.with_name(name), embed, role: Some(role) })
    }
}

/// Write `g = k·h` with `k ∈ K`, `h ∈ H`.
pub fn factorize(g: &Group, k: &Subgroup, h: &Subgroup, x: &Elem) -> Result<(Elem, Elem)> {
    match (&g.kind, k.role, h.role) {
        (GroupKind::Finite { .. }, _, _) => {
            let ks = k.group.elements().ok_or_else(|| Error::BadParams("finite group with infinite subgroup".into()))?;
            let mut found = Vec::new();
            for kk in ks {
                let cand = g.mul(&g.inv(&(k.embed)(&kk)), x);
                if h.group.contains(&cand) {
                    found.push((kk, cand));
                }
            }
            match found.len() {
                0 => Err(Error::NoFactorization(format!("{} is not in {}·{}", g.label(x), k.group.name, h.group.name))),
                1 => Ok(found.pop().expect("one element")),
                n => Err(Error::AmbiguousFactorization(format!(
                    "{} has {n} factorizations over {}·{}",
                    g.label(x),
                    k.group.name,
                    h.group.name
                ))),
            }
        }
        (GroupKind::Semidirect { m }, Some(FactorRole::Normal), Some(FactorRole::Acting)) => {
            let _ = m;
            let (n, q) = pair_parts(x)?;
            Ok((n, q))
        }
        (GroupKind::Semidirect { m }, Some(FactorRole::Acting), Some(FactorRole::Normal)) => {
            // (n, q) = (0, q)(m^{-q} n, 0)
            let (n, q) = pair_parts(x)?;
            let e = q_of(&q).to_integer().to_i32().ok_or_else(|| Error::BadParams("exponent too large".into()))?;
            let base = BigRational::from_integer(m.clone());
            let scale = if e >= 0 { num_traits::pow(base.recip(), e as usize) } else { num_traits::pow(base, (-e) as usize) };
            Ok((q, Elem::Q(scale * q_of(&n))))
        }
        _ => Err(Error::NotExactFactorization(format!(
            "no factorization rule for {} = {}·{}",
            g.name, k.group.name, h.group.name
        ))),
    }
}

fn pair_parts(x: &Elem) -> Result<(Elem, Elem)> {
    match x {
        Elem::Pair(a, b) => Ok((a.as_ref().clone(), b.as_ref().clone())),
        _ => Err(Error::BadParams(format!("expected a pair element, got {x}"))),
    }
}

fn q_of(e: &Elem) -> BigRational {
    match e {
        Elem::Q(r) => r.clone(),
        _ => panic!("expected rational element"),
    }
}

/// The ambient group and the two embeddings, when a pair came from a factorization.
#[derive(Clone)]
pub struct Source {
    pub g: Group,
    pub embed_h: EmbedFn,
    pub embed_k: EmbedFn,
}

#[derive(Clone)]
pub struct MatchedPair {
    pub h: Group,
    pub k: Group,
    /// `h▸k ∈ K`.
    pub tr: BinFn,
    /// `h◂k ∈ H`.
    pub tl: BinFn,
    pub source: Option<Source>,
}

impl fmt::Debug for MatchedPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MatchedPair").field("h", &self.h.name).field("k", &self.k.name).finish()
    }
}

impl MatchedPair {
    pub fn tr(&self, h: &Elem, k: &Elem) -> Elem {
        (self.tr)(h, k)
    }

    pub fn tl(&self, h: &Elem, k: &Elem) -> Elem {
        (self.tl)(h, k)
    }

    /// Derive `▸` and `◂` from `hk = (h▸k)(h◂k)` in `G = KH`.
    pub fn from_factorization(g: &Group, h: &Subgroup, k: &Subgroup) -> Result<MatchedPair> {
        let source = Source { g: g.clone(), embed_h: h.embed.clone(), embed_k: k.embed.clone() };
        if let (Some(gs), Some(hs), Some(ks)) = (g.elements(), h.group.elements(), k.group.elements()) {
            if hs.len() * ks.len() != gs.len() {
                return Err(Error::NotExactFactorization(format!(
                    "|{}|·|{}| = {} but |{}| = {}",
                    k.group.name,
                    h.group.name,
                    hs.len() * ks.len(),
                    g.name,
                    gs.len()
                )));
            }
            for x in &gs {
                factorize(g, k, h, x).map_err(|e| Error::NotExactFactorization(e.to_string()))?;
            }
            let mut table: HashMap<(Elem, Elem), (Elem, Elem)> = HashMap::new();
            for hh in &hs {
                for kk in &ks {
                    let prod = g.mul(&(h.embed)(hh), &(k.embed)(kk));
                    table.insert((hh.clone(), kk.clone()), factorize(g, k, h, &prod)?);
                }
            }
            let table = Arc::new(table);
            let t2 = table.clone();
            return Ok(MatchedPair {
                h: h.group.clone(),
                k: k.group.clone(),
                tr: Arc::new(move |a, b| table[&(a.clone(), b.clone())].0.clone()),
                tl: Arc::new(move |a, b| t2[&(a.clone(), b.clone())].1.clone()),
                source: Some(source),
            });
        }
        // Infinite families: the factorization rule is closed-form, so
        // evaluate it on demand.  Probe it once to surface a missing rule.
        factorize(g, k, h, &g.identity()).map_err(|e| Error::NotExactFactorization(e.to_string()))?;
        let (g1, h1, k1) = (g.clone(), h.clone(), k.clone());
        let (g2, h2, k2) = (g.clone(), h.clone(), k.clone());
        Ok(MatchedPair {
            h: h.group.clone(),
            k: k.group.clone(),
            tr: Arc::new(move |a, b| {
                let prod = g1.mul(&(h1.embed)(a), &(k1.embed)(b));
                factorize(&g1, &k1, &h1, &prod).expect("family factorization is total").0
            }),
            tl: Arc::new(move |a, b| {
                let prod = g2.mul(&(h2.embed)(a), &(k2.embed)(b));
                factorize(&g2, &k2, &h2, &prod).expect("family factorization is total").1
            }),
            source: Some(source),
        })
    }

    /// A pair given by explicit tables over finite `H` and `K`.
    pub fn explicit(
        h: Group,
        k: Group,
        tr: HashMap<(Elem, Elem), Elem>,
        tl: HashMap<(Elem, Elem), Elem>,
    ) -> Result<MatchedPair> {
        let (hs, ks) = match (h.elements(), k.elements()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::BadParams("explicit matched pairs need finite groups".into())),
        };
        for hh in &hs {
            for kk in &ks {
                let key = (hh.clone(), kk.clone());
                let missing = |which: &str| {
                    Error::BadParams(format!("{which} {} {} is not given", h.label(hh), k.label(kk)))
                };
                let a = tr.get(&key).ok_or_else(|| missing("tr"))?;
                let b = tl.get(&key).ok_or_else(|| missing("tl"))?;
                if !k.contains(a) || !h.contains(b) {
                    return Err(Error::BadParams(format!("action value out of range at ({}, {})", h.label(hh), k.label(kk))));
                }
            }
        }
        let tr = Arc::new(tr);
        let tl = Arc::new(tl);
        Ok(MatchedPair {
            h,
            k,
            tr: Arc::new(move |a, b| tr[&(a.clone(), b.clone())].clone()),
            tl: Arc::new(move |a, b| tl[&(a.clone(), b.clone())].clone()),
            source: None,
        })
    }

    /// `Z[1/m] ⋊ Z` with `K = Z[1/m]` normal: `h▸k = m^h k`, `h◂k = h`.
    pub fn semidirect_family(m: i64) -> Result<MatchedPair> {
        let g = Group::semidirect(m)?;
        let k = Subgroup::factor(&g, "K", FactorRole::Normal)?;
        let h = Subgroup::factor(&g, "H", FactorRole::Acting)?;
        MatchedPair::from_factorization(&g, &h, &k)
    }

    /// The same family with the roles swapped: `H = Z[1/m]` normal, so the
    /// action is trivial and `h◂k = k⁻¹hk` is not.
    pub fn semidirect_family_swapped(m: i64) -> Result<MatchedPair> {
        let g = Group::semidirect(m)?;
        let h = Subgroup::factor(&g, "H", FactorRole::Normal)?;
        let k = Subgroup::factor(&g, "K", FactorRole::Acting)?;
        MatchedPair::from_factorization(&g, &h, &k)
    }

    /// Replace `▸` at a single point, for negative controls.
    pub fn with_tr_override(&self, h: Elem, k: Elem, value: Elem) -> MatchedPair {
        let old = self.tr.clone();
        let mut out = self.clone();
        out.tr = Arc::new(move |a, b| if *a == h && *b == k { value.clone() } else { old(a, b) });
        out
    }

    /// Replace `◂` everywhere.
    pub fn with_tl(&self, tl: BinFn) -> MatchedPair {
        let mut out = self.clone();
        out.tl = tl;
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteTable;

    fn s3_pair() -> (Group, Subgroup, Subgroup) {
        let g = Group::finite("S3", FiniteTable::from_permutations(3, &[vec![2, 1, 3], vec![2, 3, 1]]).unwrap());
        let k = g.subgroup_generated("K", &[g.parse_elem("(123)").unwrap()]).unwrap();
        let h = g.subgroup_generated("H", &[g.parse_elem("(12)").unwrap()]).unwrap();
        (g, Subgroup::finite(k), Subgroup::finite(h))
    }

    #[test]
    fn factorize_s3() {
        let (g, k, h) = s3_pair();
        let (kk, hh) = factorize(&g, &k, &h, &g.identity()).unwrap();
        assert!(g.is_identity(&kk) && g.is_identity(&hh));
        let x = g.parse_elem("(23)").unwrap();
        let (kk, hh) = factorize(&g, &k, &h, &x).unwrap();
        assert_eq!(g.label(&hh), "(12)");
        assert_eq!(g.mul(&kk, &hh), x);
    }

    #[test]
    fn normal_k_gives_conjugation() {
        let (g, k, h) = s3_pair();
        let mp = MatchedPair::from_factorization(&g, &h, &k).unwrap();
        for hh in mp.h.elements().unwrap() {
            for kk in mp.k.elements().unwrap() {
                assert_eq!(mp.tr(&hh, &kk), g.mul(&g.mul(&hh, &kk), &g.inv(&hh)));
                assert_eq!(mp.tl(&hh, &kk), hh);
            }
        }
    }

    #[test]
    fn overlapping_subgroups_are_rejected() {
        let (g, _, h) = s3_pair();
        let err = MatchedPair::from_factorization(&g, &h, &h.clone()).unwrap_err();
        assert!(matches!(err, Error::NotExactFactorization(_)));
        let err = factorize(&g, &h, &h, &g.identity()).unwrap_err();
        assert!(matches!(err, Error::AmbiguousFactorization(_)));
    }

    #[test]
    fn semidirect_closed_form() {
        let mp = MatchedPair::semidirect_family(2).unwrap();
        let h = Elem::int(1);
        let k = Elem::rat(3, 2);
        assert_eq!(mp.tr(&h, &k), Elem::int(3));
        assert_eq!(mp.tl(&h, &k), Elem::int(1));
    }

    #[test]
    fn swapped_semidirect_has_conjugation_coaction() {
        let mp = MatchedPair::semidirect_family_swapped(2).unwrap();
        // h = 3 ∈ Z[1/2], k = 1 ∈ Z: k⁻¹hk = m^{-1}·3 = 3/2, h▸k = k.
        assert_eq!(mp.tl(&Elem::int(3), &Elem::int(1)), Elem::rat(3, 2));
        assert_eq!(mp.tr(&Elem::int(3), &Elem::int(1)), Elem::int(1));
    }
}
