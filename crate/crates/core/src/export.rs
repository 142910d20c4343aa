//! Structure-constant export (`.sc`) for finite smash products, plus the
//! table form of finite groups.
//!
//! ```text
//! bicross-sc 1
//! algebra AB
//! dim 12
//! basis 0 e⊗d_e
//! mult 0 0 : 1@0
//! T1 i j : c@k,l c@k,l
//! T2 i j : c@k,l
//! S i : c@k
//! counit i : c
//! ```
//!
//! Indices refer to `basis` lines; coefficients use the canonical
//! `p/q+r/s*i` form.  Only nonzero entries are written, in index order.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::group::Group;
use crate::mhopf::Mha;
use crate::scalar::Scalar;
use crate::tensor::{Vector, Word};

/// `c@k,l` entries of a canonical map, keyed by the input pair.
pub type PairTable = BTreeMap<(usize, usize), Vec<(Scalar, usize, usize)>>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StructureConstants {
    pub algebra: String,
    pub basis: Vec<String>,
    pub mult: BTreeMap<(usize, usize), Vec<(Scalar, usize)>>,
    pub t1: PairTable,
    pub t2: PairTable,
    pub antipode: BTreeMap<usize, Vec<(Scalar, usize)>>,
    pub counit: BTreeMap<usize, Scalar>,
}

fn expand1(v: &Vector, index: &BTreeMap<Word, usize>) -> Result<Vec<(Scalar, usize)>> {
    v.iter()
        .map(|(w, c)| {
            let k = index.get(w).ok_or_else(|| Error::ShapeMismatch("image outside the basis".into()))?;
            Ok((c.clone(), *k))
        })
        .collect::<Result<Vec<_>>>()
        .map(sorted1)
}

fn sorted1(mut v: Vec<(Scalar, usize)>) -> Vec<(Scalar, usize)> {
    v.sort_by_key(|(_, k)| *k);
    v
}

fn expand2(v: &Vector, index: &BTreeMap<Word, usize>, width: usize) -> Result<Vec<(Scalar, usize, usize)>> {
    let mut out = Vec::new();
    for (w, c) in v.iter() {
        let (a, b) = w.split_at(width);
        let i = index.get(a).ok_or_else(|| Error::ShapeMismatch("image outside the basis".into()))?;
        let j = index.get(b).ok_or_else(|| Error::ShapeMismatch("image outside the basis".into()))?;
        out.push((c.clone(), *i, *j));
    }
    out.sort_by_key(|(_, i, j)| (*i, *j));
    Ok(out)
}

impl StructureConstants {
    /// Tabulate the structure of a finite algebra on its enumerated basis.
    pub fn from_mha(m: &Mha) -> Result<StructureConstants> {
        let basis = m
            .basis()
            .ok_or_else(|| Error::PreconditionFailed(format!("{} has an infinite basis; nothing to export", m.name)))?;
        let index: BTreeMap<Word, usize> = basis.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let labels = basis
            .iter()
            .map(|w| w.iter().map(|a| m.uni.render_atom(a)).collect::<Vec<_>>().join("⊗"))
            .collect();
        let mut sc = StructureConstants { algebra: m.name.clone(), basis: labels, ..Default::default() };
        let width = m.width();
        for (i, x) in basis.iter().enumerate() {
            let xv = Vector::basis(x.clone());
            for (j, y) in basis.iter().enumerate() {
                let xy = xv.tensor(&Vector::basis(y.clone()));
                let p = m.mult.apply(&xy)?;
                if !p.is_zero() {
                    sc.mult.insert((i, j), expand1(&p, &index)?);
                }
                let t1 = m.t1.apply(&xy)?;
                if !t1.is_zero() {
                    sc.t1.insert((i, j), expand2(&t1, &index, width)?);
                }
                let t2 = m.t2.apply(&xy)?;
                if !t2.is_zero() {
                    sc.t2.insert((i, j), expand2(&t2, &index, width)?);
                }
            }
            let s = m.antipode.apply(&xv)?;
            if !s.is_zero() {
                sc.antipode.insert(i, expand1(&s, &index)?);
            }
            let e = m.counit.apply(&xv)?.as_scalar();
            if !e.is_zero() {
                sc.counit.insert(i, e);
            }
        }
        Ok(sc)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "bicross-sc 1");
        let _ = writeln!(s, "algebra {}", self.algebra);
        let _ = writeln!(s, "dim {}", self.basis.len());
        for (i, b) in self.basis.iter().enumerate() {
            let _ = writeln!(s, "basis {i} {b}");
        }
        let one = |v: &[(Scalar, usize)]| v.iter().map(|(c, k)| format!("{c}@{k}")).collect::<Vec<_>>().join(" ");
        let two = |v: &[(Scalar, usize, usize)]| v.iter().map(|(c, k, l)| format!("{c}@{k},{l}")).collect::<Vec<_>>().join(" ");
        for ((i, j), v) in &self.mult {
            let _ = writeln!(s, "mult {i} {j} : {}", one(v));
        }
        for ((i, j), v) in &self.t1 {
            let _ = writeln!(s, "T1 {i} {j} : {}", two(v));
        }
        for ((i, j), v) in &self.t2 {
            let _ = writeln!(s, "T2 {i} {j} : {}", two(v));
        }
        for (i, v) in &self.antipode {
            let _ = writeln!(s, "S {i} : {}", one(v));
        }
        for (i, c) in &self.counit {
            let _ = writeln!(s, "counit {i} : {c}");
        }
        s
    }

    pub fn parse(text: &str) -> Result<StructureConstants> {
        let mut sc = StructureConstants::default();
        let mut dim = None;
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, "bicross-sc 1")) => {}
            _ => return Err(Error::parse(1, "expected header `bicross-sc 1`")),
        }
        for (n, line) in lines {
            let ln = n + 1;
            let err = |m: &str| Error::parse(ln, m.to_string());
            let (head, body) = match line.split_once(" : ") {
                Some((h, b)) => (h, Some(b)),
                None => (line, None),
            };
            let t: Vec<&str> = head.split(' ').collect();
            let idx = |k: usize| -> Result<usize> {
                t.get(k).and_then(|x| x.parse().ok()).ok_or_else(|| Error::parse(ln, "bad index"))
            };
            let terms1 = |b: &str| -> Result<Vec<(Scalar, usize)>> {
                b.split(' ')
                    .map(|term| {
                        let (c, k) = term.split_once('@').ok_or_else(|| Error::parse(ln, "expected c@k"))?;
                        let k = k.parse().map_err(|_| Error::parse(ln, "bad index"))?;
                        Ok((Scalar::parse(c).map_err(|e| e.at_line(ln))?, k))
                    })
                    .collect()
            };
            let terms2 = |b: &str| -> Result<Vec<(Scalar, usize, usize)>> {
                b.split(' ')
                    .map(|term| {
                        let (c, kl) = term.split_once('@').ok_or_else(|| Error::parse(ln, "expected c@k,l"))?;
                        let (k, l) = kl.split_once(',').ok_or_else(|| Error::parse(ln, "expected c@k,l"))?;
                        let k = k.parse().map_err(|_| Error::parse(ln, "bad index"))?;
                        let l = l.parse().map_err(|_| Error::parse(ln, "bad index"))?;
                        Ok((Scalar::parse(c).map_err(|e| e.at_line(ln))?, k, l))
                    })
                    .collect()
            };
            match (t[0], body) {
                ("algebra", None) if t.len() == 2 => sc.algebra = t[1].into(),
                ("dim", None) => dim = Some(idx(1)?),
                ("basis", None) if t.len() == 3 => {
                    if idx(1)? != sc.basis.len() {
                        return Err(err("basis lines out of order"));
                    }
                    sc.basis.push(t[2].into());
                }
                ("mult", Some(b)) => {
                    sc.mult.insert((idx(1)?, idx(2)?), terms1(b)?);
                }
                ("T1", Some(b)) => {
                    sc.t1.insert((idx(1)?, idx(2)?), terms2(b)?);
                }
                ("T2", Some(b)) => {
                    sc.t2.insert((idx(1)?, idx(2)?), terms2(b)?);
                }
                ("S", Some(b)) => {
                    sc.antipode.insert(idx(1)?, terms1(b)?);
                }
                ("counit", Some(b)) => {
                    sc.counit.insert(idx(1)?, Scalar::parse(b).map_err(|e| e.at_line(ln))?);
                }
                _ => return Err(err("unrecognized line")),
            }
        }
        if dim != Some(sc.basis.len()) {
            return Err(Error::parse(text.lines().count(), "dim does not match the basis"));
        }
        Ok(sc)
    }
}

/// A finite group in `.grp` table syntax, rows written with labels.
pub fn group_table_text(g: &Group) -> Result<String> {
    let elems = g.elements().ok_or_else(|| Error::PreconditionFailed(format!("{} is not finite", g.name)))?;
    let labels: Vec<String> = elems.iter().map(|e| g.label(e)).collect();
    let mut s = format!("group {} table {} {}\n", g.name, elems.len(), labels.join(" "));
    for a in &elems {
        let row: Vec<String> = elems.iter().map(|b| g.label(&g.mul(a, b))).collect();
        let _ = writeln!(s, "{}", row.join(" "));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn s3_export_round_trips() {
        let inst = catalog::s3().unwrap();
        let ab = inst.build_ab().unwrap();
        let sc = StructureConstants::from_mha(&ab).unwrap();
        assert_eq!(sc.basis.len(), 6);
        assert_eq!(sc.counit.len(), 2);
        let text = sc.render();
        let back = StructureConstants::parse(&text).unwrap();
        assert_eq!(back, sc);
        assert_eq!(back.render(), text);
    }

    #[test]
    fn group_table_round_trips() {
        let inst = catalog::s3().unwrap();
        let parent = inst.mp.source.as_ref().unwrap().g.clone();
        let text = group_table_text(&parent).unwrap();
        let groups = crate::input::parse_groups(&text).unwrap();
        let g = &groups["S3"];
        assert_eq!(g.table().unwrap().rows(), parent.table().unwrap().rows());
        assert_eq!(group_table_text(g).unwrap(), text);
    }

    #[test]
    fn infinite_structures_do_not_export() {
        let inst = catalog::dyadic(2).unwrap();
        assert!(matches!(StructureConstants::from_mha(&inst.build_ab().unwrap()), Err(Error::PreconditionFailed(_))));
    }
}
