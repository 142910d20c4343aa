//! Finitely supported vectors on tagged tensor words and linear operators
//! acting on them, with leg-numbered application.
//!
//! A basis word is a sequence of atoms; each atom is a group element tagged
//! with the algebra it indexes.  `Group` atoms are basis elements `h` of a
//! group algebra, `Delta` atoms are point masses `δ_k` of a function
//! algebra.  The `slot` selects which group of the matched pair the element
//! lives in (0 for `H`, 1 for `K`).
//!
//! Leg indices are zero-based in the API.  When an operator preserves the
//! number of legs it selects, its output legs are written back to the
//! selected positions in order.  Otherwise the selected legs are removed and
//! the output legs are inserted at the position of the leftmost selected leg.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use rand::Rng;

use crate::error::{Error, Result};
use crate::group::{Elem, Group};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Group,
    Delta,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tag {
    pub kind: Kind,
    pub slot: u8,
}

impl Tag {
    pub const fn group(slot: u8) -> Tag {
        Tag { kind: Kind::Group, slot }
    }
    pub const fn delta(slot: u8) -> Tag {
        Tag { kind: Kind::Delta, slot }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = if self.slot == 0 { "H" } else { "K" };
        match self.kind {
            Kind::Group => write!(f, "C{g}"),
            Kind::Delta => write!(f, "F{g}"),
        }
    }
}

pub type Shape = Vec<Tag>;

pub fn shape_str(s: &[Tag]) -> String {
    let parts: Vec<String> = s.iter().map(|t| t.to_string()).collect();
    format!("[{}]", parts.join(","))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub tag: Tag,
    pub elem: Elem,
}

impl Atom {
    pub fn new(tag: Tag, elem: Elem) -> Atom {
        Atom { tag, elem }
    }
}

pub type Word = Vec<Atom>;

pub fn word_shape(w: &[Atom]) -> Shape {
    w.iter().map(|a| a.tag).collect()
}

/// A finite formal linear combination of basis words, zero-free.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector {
    terms: BTreeMap<Word, Scalar>,
}

impl Vector {
    pub fn zero() -> Vector {
        Vector::default()
    }

    pub fn basis(w: Word) -> Vector {
        let mut terms = BTreeMap::new();
        terms.insert(w, Scalar::one());
        Vector { terms }
    }

    pub fn scalar(c: Scalar) -> Vector {
        let mut v = Vector::zero();
        v.add_term(Vec::new(), c);
        v
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, Scalar)>) -> Vector {
        let mut v = Vector::zero();
        for (w, c) in terms {
            v.add_term(w, c);
        }
        v
    }

    pub fn add_term(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c·v`.
    pub fn add_scaled(&mut self, v: &Vector, c: &Scalar) {
        for (w, d) in &v.terms {
            let p = if c.is_one() { d.clone() } else { c * d };
            self.add_term(w.clone(), p);
        }
    }

    pub fn add(&self, v: &Vector) -> Vector {
        let mut out = self.clone();
        out.add_scaled(v, &Scalar::one());
        out
    }

    pub fn sub(&self, v: &Vector) -> Vector {
        let mut out = self.clone();
        out.add_scaled(v, &Scalar::from_int(-1));
        out
    }

    pub fn scale(&self, c: &Scalar) -> Vector {
        let mut out = Vector::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &[Atom]) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    /// The coefficient of the empty word, i.e. the value of a functional.
    pub fn as_scalar(&self) -> Scalar {
        self.coefficient(&[])
    }

    pub fn tensor(&self, other: &Vector) -> Vector {
        let mut out = Vector::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let mut w = w1.clone();
                w.extend(w2.iter().cloned());
                out.add_term(w, c1 * c2);
            }
        }
        out
    }

    /// Distinct atoms appearing at position `pos` of the support.
    pub fn atoms_at(&self, pos: usize) -> Vec<Atom> {
        let mut out: Vec<Atom> = self.terms.keys().filter_map(|w| w.get(pos).cloned()).collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn conj(&self) -> Vector {
        Vector { terms: self.terms.iter().map(|(w, c)| (w.clone(), c.conj())).collect() }
    }
}

pub type OpFn = Arc<dyn Fn(&[Atom]) -> Result<Vector> + Send + Sync>;

/// A linear (or conjugate-linear) map defined by its action on basis words.
#[derive(Clone)]
pub struct LinOp {
    pub name: String,
    pub input: Shape,
    pub output: Shape,
    /// Conjugate-linear: coefficients are conjugated before the basis action.
    pub conj: bool,
    stages: Option<Arc<Vec<LinOp>>>,
    f: OpFn,
}

impl fmt::Debug for LinOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} -> {}", self.name, shape_str(&self.input), shape_str(&self.output))
    }
}

impl LinOp {
    pub fn new(
        name: impl Into<String>,
        input: Shape,
        output: Shape,
        f: impl Fn(&[Atom]) -> Result<Vector> + Send + Sync + 'static,
    ) -> LinOp {
        LinOp { name: name.into(), input, output, conj: false, stages: None, f: Arc::new(f) }
    }

    pub fn conjugate_linear(mut self) -> LinOp {
        self.conj = !self.conj;
        self
    }

    pub fn renamed(mut self, name: impl Into<String>) -> LinOp {
        self.name = name.into();
        self
    }

    /// The same map with basis images cached, for operators evaluated on
    /// the same words many times.
    pub fn memoized(&self) -> LinOp {
        let cache: Mutex<HashMap<Word, Vector>> = Mutex::new(HashMap::new());
        let g = self.f.clone();
        let f = move |w: &[Atom]| {
            if let Some(v) = cache.lock().expect("cache lock").get(w) {
                return Ok(v.clone());
            }
            let v = g(w)?;
            cache.lock().expect("cache lock").insert(w.to_vec(), v.clone());
            Ok(v)
        };
        LinOp { f: Arc::new(f), ..self.clone() }
    }

    pub fn identity(shape: Shape) -> LinOp {
        LinOp::new("id", shape.clone(), shape, |w| Ok(Vector::basis(w.to_vec())))
    }

    /// Output leg `i` is input leg `perm[i]`.
    pub fn permute(input: Shape, perm: &[usize]) -> Result<LinOp> {
        let mut seen = vec![false; input.len()];
        if perm.len() != input.len() {
            return Err(Error::BadLegIndex(format!("permutation {perm:?} of {} legs", input.len())));
        }
        for &p in perm {
            if p >= input.len() || seen[p] {
                return Err(Error::BadLegIndex(format!("{perm:?} is not a permutation")));
            }
            seen[p] = true;
        }
        let output = perm.iter().map(|&p| input[p]).collect();
        let perm = perm.to_vec();
        let name = format!("perm{:?}", perm.iter().map(|p| p + 1).collect::<Vec<_>>());
        Ok(LinOp::new(name, input, output, move |w| Ok(Vector::basis(perm.iter().map(|&p| w[p].clone()).collect()))))
    }

    pub fn flip(a: Tag, b: Tag) -> LinOp {
        LinOp::permute(vec![a, b], &[1, 0]).expect("valid").renamed("flip")
    }

    /// Apply to a single basis word.
    pub fn apply_word(&self, w: &[Atom]) -> Result<Vector> {
        if w.len() != self.input.len() || w.iter().zip(&self.input).any(|(a, t)| a.tag != *t) {
            return Err(Error::ShapeMismatch(format!(
                "{} expects {}, got {}",
                self.name,
                shape_str(&self.input),
                shape_str(&word_shape(w))
            )));
        }
        (self.f)(w)
    }

    pub fn apply(&self, v: &Vector) -> Result<Vector> {
        let mut out = Vector::zero();
        for (w, c) in v.iter() {
            let img = self.apply_word(w)?;
            if self.conj {
                out.add_scaled(&img, &c.conj());
            } else {
                out.add_scaled(&img, c);
            }
        }
        Ok(out)
    }

    /// Intermediate values of a staged chain, one entry per stage.
    pub fn trace(&self, v: &Vector) -> Vec<(String, std::result::Result<Vector, Error>)> {
        let mut out = Vec::new();
        match &self.stages {
            Some(stages) => {
                let mut cur = v.clone();
                for s in stages.iter() {
                    match s.apply(&cur) {
                        Ok(next) => {
                            out.push((s.name.clone(), Ok(next.clone())));
                            cur = next;
                        }
                        Err(e) => {
                            out.push((s.name.clone(), Err(e)));
                            break;
                        }
                    }
                }
            }
            None => out.push((self.name.clone(), self.apply(v))),
        }
        out
    }

    /// Stages in application order: `stages[0]` acts first.
    pub fn chain(name: impl Into<String>, stages: Vec<LinOp>) -> Result<LinOp> {
        let first = stages.first().ok_or_else(|| Error::ShapeMismatch("empty chain".into()))?;
        for pair in stages.windows(2) {
            if pair[0].output != pair[1].input {
                return Err(Error::ShapeMismatch(format!(
                    "cannot compose {} after {}: {} vs {}",
                    pair[1].name,
                    pair[0].name,
                    shape_str(&pair[0].output),
                    shape_str(&pair[1].input)
                )));
            }
        }
        let input = first.input.clone();
        let output = stages.last().expect("nonempty").output.clone();
        let conj = stages.iter().filter(|s| s.conj).count() % 2 == 1;
        let stages = Arc::new(stages);
        let st = stages.clone();
        let mut op = LinOp::new(name, input, output, move |w| {
            let mut cur = Vector::basis(w.to_vec());
            for s in st.iter() {
                cur = s.apply(&cur)?;
            }
            Ok(cur)
        });
        op.conj = conj;
        op.stages = Some(stages);
        Ok(op)
    }

    /// `outer ∘ inner`.
    pub fn compose(outer: &LinOp, inner: &LinOp) -> Result<LinOp> {
        let name = format!("{}∘{}", outer.name, inner.name);
        LinOp::chain(name, vec![inner.clone(), outer.clone()])
    }

    /// `F ⊗ G` on the concatenated shape.
    pub fn op_tensor(f: &LinOp, g: &LinOp) -> Result<LinOp> {
        if f.conj != g.conj {
            return Err(Error::ShapeMismatch(format!(
                "cannot tensor linear and conjugate-linear maps ({} ⊗ {})",
                f.name, g.name
            )));
        }
        let n = f.input.len();
        let mut input = f.input.clone();
        input.extend(g.input.iter().copied());
        let mut output = f.output.clone();
        output.extend(g.output.iter().copied());
        let (f2, g2) = (f.clone(), g.clone());
        let mut op = LinOp::new(format!("({}⊗{})", f.name, g.name), input, output, move |w| {
            Ok(f2.apply_word(&w[..n])?.tensor(&g2.apply_word(&w[n..])?))
        });
        op.conj = f.conj;
        Ok(op)
    }

    /// `F` acting on the legs `legs` of `ambient`, identity elsewhere.
    pub fn on_legs(f: &LinOp, legs: &[usize], ambient: &[Tag]) -> Result<LinOp> {
        if legs.len() != f.input.len() {
            return Err(Error::BadLegIndex(format!("{} takes {} legs, {} given", f.name, f.input.len(), legs.len())));
        }
        let mut used = vec![false; ambient.len()];
        for (i, &l) in legs.iter().enumerate() {
            if l >= ambient.len() || used[l] {
                return Err(Error::BadLegIndex(format!("leg {} invalid for {}", l + 1, shape_str(ambient))));
            }
            used[l] = true;
            if ambient[l] != f.input[i] {
                return Err(Error::ShapeMismatch(format!(
                    "{} expects {} on leg {}, found {}",
                    f.name,
                    f.input[i],
                    l + 1,
                    ambient[l]
                )));
            }
        }
        let same = f.output.len() == legs.len();
        let first = legs.iter().copied().min().unwrap_or(0);
        let output: Shape = if same {
            let mut o = ambient.to_vec();
            for (i, &l) in legs.iter().enumerate() {
                o[l] = f.output[i];
            }
            o
        } else {
            let mut o: Shape = Vec::new();
            for (i, t) in ambient.iter().enumerate() {
                if i == first {
                    o.extend(f.output.iter().copied());
                }
                if !used[i] {
                    o.push(*t);
                }
            }
            if legs.is_empty() {
                o.extend(f.output.iter().copied());
            }
            o
        };
        let legs_v = legs.to_vec();
        let g = f.clone();
        let label: Vec<String> = legs.iter().map(|l| (l + 1).to_string()).collect();
        let name = format!("{}_{{{}}}", f.name, label.join(""));
        let mut op = LinOp::new(name, ambient.to_vec(), output, move |w| {
            let sel: Word = legs_v.iter().map(|&l| w[l].clone()).collect();
            let img = g.apply_word(&sel)?;
            let mut out = Vector::zero();
            for (iw, c) in img.iter() {
                let nw: Word = if same {
                    let mut nw = w.to_vec();
                    for (i, &l) in legs_v.iter().enumerate() {
                        nw[l] = iw[i].clone();
                    }
                    nw
                } else {
                    let mut nw = Vec::with_capacity(w.len() + iw.len());
                    for (i, a) in w.iter().enumerate() {
                        if i == first {
                            nw.extend(iw.iter().cloned());
                        }
                        if !used[i] {
                            nw.push(a.clone());
                        }
                    }
                    if legs_v.is_empty() {
                        nw.extend(iw.iter().cloned());
                    }
                    nw
                };
                out.add_term(nw, c.clone());
            }
            Ok(out)
        });
        op.conj = f.conj;
        Ok(op)
    }
}

/// The groups that the slots of atoms refer to.
#[derive(Clone, Debug)]
pub struct Universe {
    pub groups: Vec<Group>,
}

impl Universe {
    pub fn new(groups: Vec<Group>) -> Universe {
        Universe { groups }
    }

    pub fn group(&self, slot: u8) -> &Group {
        &self.groups[slot as usize]
    }

    /// Number of basis words of a shape, or `None` when infinite.
    pub fn count(&self, shape: &[Tag]) -> Option<usize> {
        let mut n: usize = 1;
        for t in shape {
            n = n.checked_mul(self.group(t.slot).order()?)?;
        }
        Some(n)
    }

    /// All basis words of a shape in lexicographic order.
    pub fn enumerate(&self, shape: &[Tag]) -> Option<Vec<Word>> {
        let mut words: Vec<Word> = vec![Vec::new()];
        for t in shape {
            let elems = self.group(t.slot).elements()?;
            let mut next = Vec::with_capacity(words.len() * elems.len());
            for w in &words {
                for e in &elems {
                    let mut nw = w.clone();
                    nw.push(Atom::new(*t, e.clone()));
                    next.push(nw);
                }
            }
            words = next;
        }
        Some(words)
    }

    pub fn random_word<R: Rng + ?Sized>(&self, shape: &[Tag], rng: &mut R) -> Word {
        shape.iter().map(|t| Atom::new(*t, self.group(t.slot).random(rng))).collect()
    }

    /// A random vector with one to four terms and small nonzero coefficients.
    pub fn random_vector<R: Rng + ?Sized>(&self, shape: &[Tag], rng: &mut R) -> Vector {
        let mut terms = rng.gen_range(1..=4);
        if let Some(n) = self.count(shape) {
            terms = terms.min(n);
        }
        let mut v = Vector::zero();
        while v.len() < terms {
            let w = self.random_word(shape, rng);
            let c = random_scalar(rng);
            v.add_term(w, c);
        }
        v
    }

    pub fn render_atom(&self, a: &Atom) -> String {
        let l = self.group(a.tag.slot).label(&a.elem);
        match a.tag.kind {
            Kind::Group => l,
            Kind::Delta => format!("d_{l}"),
        }
    }

    pub fn render_word(&self, w: &[Atom]) -> String {
        let parts: Vec<String> = w.iter().map(|a| self.render_atom(a)).collect();
        format!("[{}]", parts.join("⊗"))
    }

    pub fn render(&self, v: &Vector) -> String {
        if v.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = v
            .iter()
            .map(|(w, c)| {
                if w.is_empty() {
                    c.to_string()
                } else if c.is_one() {
                    self.render_word(w)
                } else {
                    format!("({c}){}", self.render_word(w))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

/// A small nonzero Gaussian rational.
pub fn random_scalar<R: Rng + ?Sized>(rng: &mut R) -> Scalar {
    loop {
        let p = rng.gen_range(-3..=3);
        let q = rng.gen_range(1..=3);
        let r = if rng.gen_bool(0.5) { rng.gen_range(-2..=2) } else { 0 };
        let s = Scalar::from_parts(p, q, r, 1);
        if !s.is_zero() {
            return s;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteTable;

    fn uni() -> Universe {
        let s3 = Group::finite("S3", FiniteTable::from_permutations(3, &[vec![2, 1, 3], vec![2, 3, 1]]).unwrap());
        Universe::new(vec![s3.clone(), s3])
    }

    const A: Tag = Tag::group(0);
    const B: Tag = Tag::delta(1);

    fn atom(t: Tag, i: u32) -> Atom {
        Atom::new(t, Elem::Idx(i))
    }

    #[test]
    fn tensor_is_bilinear() {
        let v = Vector::basis(vec![atom(B, 1)]).scale(&Scalar::from_int(2));
        let w = Vector::basis(vec![atom(A, 2)]).scale(&Scalar::from_int(3));
        let t = v.tensor(&w);
        assert_eq!(t.len(), 1);
        assert_eq!(t.coefficient(&[atom(B, 1), atom(A, 2)]), Scalar::from_int(6));
    }

    #[test]
    fn flip_on_first_two_legs() {
        let f = LinOp::flip(A, A);
        let op = LinOp::on_legs(&f, &[0, 1], &[A, A, A]).unwrap();
        let x = Vector::basis(vec![atom(A, 1), atom(A, 2), atom(A, 3)]);
        assert_eq!(op.apply(&x).unwrap(), Vector::basis(vec![atom(A, 2), atom(A, 1), atom(A, 3)]));
    }

    #[test]
    fn shrinking_op_renumbers() {
        let eps = LinOp::new("eps", vec![A], vec![], |_| Ok(Vector::scalar(Scalar::one())));
        assert!(LinOp::on_legs(&eps, &[1], &[A, B, A]).is_err());
        let x = Vector::basis(vec![atom(A, 1), atom(A, 2), atom(A, 3)]);
        let op = LinOp::on_legs(&eps, &[1], &[A, A, A]).unwrap();
        assert_eq!(op.output, vec![A, A]);
        assert_eq!(op.apply(&x).unwrap(), Vector::basis(vec![atom(A, 1), atom(A, 3)]));
    }

    #[test]
    fn legs_13_equals_conjugated_by_flips() {
        let u = uni();
        // A non-symmetric operator on [A,A]: x⊗y ↦ x⊗xy.
        let g = u.group(0).clone();
        let f = LinOp::new("F", vec![A, A], vec![A, A], move |w| {
            Ok(Vector::basis(vec![w[0].clone(), Atom::new(A, g.mul(&w[0].elem, &w[1].elem))]))
        });
        let direct = LinOp::on_legs(&f, &[0, 2], &[A, A, A]).unwrap();
        let flip23 = LinOp::on_legs(&LinOp::flip(A, A), &[1, 2], &[A, A, A]).unwrap();
        let f12 = LinOp::on_legs(&f, &[0, 1], &[A, A, A]).unwrap();
        let via = LinOp::chain("via", vec![flip23.clone(), f12, flip23]).unwrap();
        for w in u.enumerate(&[A, A, A]).unwrap() {
            let x = Vector::basis(w);
            assert_eq!(direct.apply(&x).unwrap(), via.apply(&x).unwrap());
        }
    }

    #[test]
    fn composition_checks_shapes() {
        let eps = LinOp::new("eps", vec![A], vec![], |_| Ok(Vector::scalar(Scalar::one())));
        assert!(LinOp::compose(&eps, &LinOp::identity(vec![B])).is_err());
        let c = LinOp::compose(&eps, &LinOp::identity(vec![A])).unwrap();
        assert_eq!(c.apply(&Vector::basis(vec![atom(A, 4)])).unwrap().as_scalar(), Scalar::one());
    }

    #[test]
    fn conjugate_linear_apply() {
        let star = LinOp::identity(vec![A]).conjugate_linear();
        let x = Vector::basis(vec![atom(A, 1)]).scale(&Scalar::i());
        assert_eq!(star.apply(&x).unwrap(), Vector::basis(vec![atom(A, 1)]).scale(&-Scalar::i()));
    }
}
