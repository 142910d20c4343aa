//! Exact sparse elimination over `Q(i)` for operators on finite shapes.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::tensor::{LinOp, Universe, Vector, Word};

/// A row in echelon form keyed by its leading word, carrying the
/// combination of input basis vectors that produced it.
struct Row {
    v: Vector,
    combo: Vector,
}

struct Echelon {
    rows: BTreeMap<Word, Row>,
    track: bool,
}

impl Echelon {
    fn new(track: bool) -> Echelon {
        Echelon { rows: BTreeMap::new(), track }
    }

    /// Reduce `v` by the existing pivots; returns true if it added a pivot.
    fn insert(&mut self, mut v: Vector, mut combo: Vector) -> bool {
        loop {
            let hit = v
                .iter()
                .find(|(w, _)| self.rows.contains_key(*w))
                .map(|(w, c)| (w.clone(), c.clone()));
            let Some((w, c)) = hit else { break };
            let row = &self.rows[&w];
            let neg = -c;
            v.add_scaled(&row.v, &neg);
            if self.track {
                combo.add_scaled(&row.combo, &neg);
            }
        }
        let lead = v.iter().next().map(|(w, c)| (w.clone(), c.clone()));
        match lead {
            None => false,
            Some((w, c)) => {
                let inv = c.inv().expect("leading coefficient is nonzero");
                let v = v.scale(&inv);
                let combo = if self.track { combo.scale(&inv) } else { combo };
                self.rows.insert(w, Row { v, combo });
                true
            }
        }
    }
}

fn images(op: &LinOp, uni: &Universe) -> Result<Vec<(Word, Vector)>> {
    let basis = uni
        .enumerate(&op.input)
        .ok_or_else(|| Error::NotInvertible(format!("{} has an infinite domain", op.name)))?;
    basis
        .into_iter()
        .map(|w| {
            let img = op.apply_word(&w)?;
            Ok((w, img))
        })
        .collect()
}

/// Rank of the matrix of `op` on the enumerated basis of its input shape.
pub fn rank(op: &LinOp, uni: &Universe) -> Result<usize> {
    let mut e = Echelon::new(false);
    let mut r = 0;
    for (_, img) in images(op, uni)? {
        if e.insert(img, Vector::zero()) {
            r += 1;
        }
    }
    Ok(r)
}

/// Matrix inverse of `op` as a basis-table operator.
pub fn invert(op: &LinOp, uni: &Universe) -> Result<LinOp> {
    if op.conj {
        return Err(Error::NotInvertible("matrix inversion of a conjugate-linear map".into()));
    }
    let n_out = uni
        .count(&op.output)
        .ok_or_else(|| Error::NotInvertible(format!("{} has an infinite codomain", op.name)))?;
    let imgs = images(op, uni)?;
    if imgs.len() != n_out {
        return Err(Error::NotInvertible(format!("{} is not square ({} -> {n_out})", op.name, imgs.len())));
    }
    let mut e = Echelon::new(true);
    for (w, img) in imgs {
        if !e.insert(img, Vector::basis(w)) {
            return Err(Error::NotInvertible(format!("{} is singular", op.name)));
        }
    }
    // Back substitution, largest pivot first, so every row becomes a unit vector.
    let keys: Vec<Word> = e.rows.keys().rev().cloned().collect();
    let mut solved: HashMap<Word, Vector> = HashMap::new();
    let mut reduced: BTreeMap<Word, Vector> = BTreeMap::new();
    for k in keys {
        let row = &e.rows[&k];
        let mut combo = row.combo.clone();
        for (w, c) in row.v.iter() {
            if *w == k {
                continue;
            }
            let other = reduced.get(w).expect("later pivots are already solved");
            combo.add_scaled(other, &-c.clone());
        }
        reduced.insert(k.clone(), combo.clone());
        solved.insert(k, combo);
    }
    let table = Arc::new(solved);
    Ok(LinOp::new(format!("{}^-1", op.name), op.output.clone(), op.input.clone(), move |w| {
        table.get(w).cloned().ok_or_else(|| Error::NotInvertible("word outside the enumerated basis".into()))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Elem, FiniteTable, Group};
    use crate::scalar::Scalar;
    use crate::tensor::{Atom, Tag};

    const A: Tag = Tag::group(0);

    fn scaled(op: &LinOp, c: Scalar) -> LinOp {
        let g = op.clone();
        LinOp::new("scaled", op.input.clone(), op.output.clone(), move |w| Ok(g.apply_word(w)?.scale(&c)))
    }

    fn uni() -> Universe {
        let s3 = Group::finite("S3", FiniteTable::from_permutations(3, &[vec![2, 1, 3], vec![2, 3, 1]]).unwrap());
        Universe::new(vec![s3])
    }

    #[test]
    fn flip_is_its_own_inverse() {
        let u = uni();
        let f = LinOp::flip(A, A);
        let inv = invert(&f, &u).unwrap();
        for w in u.enumerate(&[A, A]).unwrap() {
            assert_eq!(inv.apply_word(&w).unwrap(), f.apply_word(&w).unwrap());
        }
    }

    #[test]
    fn dense_inverse_round_trip() {
        let u = uni();
        let g = u.group(0).clone();
        // x ↦ x + (1+i)·x·(12), invertible since (12) has order 2 and (1+i)² ≠ 1.
        let t = g.parse_elem("(12)").unwrap();
        let op = LinOp::new("M", vec![A], vec![A], move |w| {
            let mut v = Vector::basis(w.to_vec());
            v.add_term(vec![Atom::new(A, g.mul(&w[0].elem, &t))], Scalar::from_parts(1, 1, 1, 1));
            Ok(v)
        });
        assert_eq!(rank(&op, &u).unwrap(), 6);
        let inv = invert(&op, &u).unwrap();
        for w in u.enumerate(&[A]).unwrap() {
            let x = Vector::basis(w);
            assert_eq!(inv.apply(&op.apply(&x).unwrap()).unwrap(), x);
            assert_eq!(op.apply(&inv.apply(&x).unwrap()).unwrap(), x);
        }
        assert_eq!(rank(&scaled(&op, Scalar::from_int(3)), &u).unwrap(), 6);
    }

    #[test]
    fn singular_is_detected() {
        let u = uni();
        let e = Elem::Idx(0);
        let op = LinOp::new("collapse", vec![A], vec![A], move |_| Ok(Vector::basis(vec![Atom::new(A, e.clone())])));
        assert_eq!(rank(&op, &u).unwrap(), 1);
        assert!(matches!(invert(&op, &u), Err(Error::NotInvertible(_))));
    }
}
