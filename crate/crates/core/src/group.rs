//! Groups with canonical element encodings.
//!
//! Finite groups are multiplication tables; subgroups of a finite group keep
//! the parent's indices so that equality of elements is equality of
//! encodings across the whole construction.  Permutations use the
//! convention `(στ)(x) = σ(τ(x))`: the right-hand factor acts first.
//!
//! Three infinite families are built in: the integers, the localization
//! `Z[1/m]` (both additive, encoded as reduced rationals) and the semidirect
//! product `Z[1/m] ⋊ Z` whose generator acts by multiplication by `m`,
//! encoded as pairs `(n, q)` standing for `n·q` with
//! `(n, q)(n', q') = (n + m^q n', q + q')`.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    /// Index into a finite multiplication table.
    Idx(u32),
    /// Element of an additive subgroup of the rationals.
    Q(BigRational),
    /// `(n, q)` in a semidirect product, meaning `n·q`.
    Pair(Box<Elem>, Box<Elem>),
}

impl Elem {
    pub fn int(n: i64) -> Elem {
        Elem::Q(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn rat(p: i64, q: i64) -> Elem {
        Elem::Q(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn pair(a: Elem, b: Elem) -> Elem {
        Elem::Pair(Box::new(a), Box::new(b))
    }

    fn as_q(&self) -> &BigRational {
        match self {
            Elem::Q(r) => r,
            other => panic!("expected a rational element, got {other:?}"),
        }
    }

    fn as_pair(&self) -> (&Elem, &Elem) {
        match self {
            Elem::Pair(a, b) => (a, b),
            other => panic!("expected a pair element, got {other:?}"),
        }
    }

    fn as_idx(&self) -> u32 {
        match self {
            Elem::Idx(i) => *i,
            other => panic!("expected a table element, got {other:?}"),
        }
    }
}

/// A finite group given by its full multiplication table.
#[derive(Debug)]
pub struct FiniteTable {
    pub n: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    pub identity: u32,
    labels: Vec<String>,
    by_label: HashMap<String, u32>,
    /// Image sequences (1-based) when the table came from permutations.
    perms: Option<Vec<Vec<usize>>>,
}

impl FiniteTable {
    /// Build and validate a table; `rows[i][j]` is the index of `g_i g_j`.
    pub fn from_rows(rows: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::BadParams("empty multiplication table".into()));
        }
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::BadParams(format!("row {i} has {} entries, expected {n}", r.len())));
            }
            if r.iter().any(|&x| x >= n) {
                return Err(Error::BadParams(format!("row {i} has an entry out of range")));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|j| rows[e][j] == j && rows[j][e] == j))
            .ok_or_else(|| Error::BadParams("table has no identity element".into()))?;
        let mut inv = vec![0u32; n];
        for i in 0..n {
            let j = (0..n)
                .find(|&j| rows[i][j] == identity && rows[j][i] == identity)
                .ok_or_else(|| Error::BadParams(format!("element {i} has no inverse")))?;
            inv[i] = j as u32;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = rows[a][b];
                for c in 0..n {
                    if rows[ab][c] != rows[a][rows[b][c]] {
                        return Err(Error::BadParams(format!("table is not associative at ({a},{b},{c})")));
                    }
                }
            }
        }
        let labels = match labels {
            Some(l) => {
                if l.len() != n {
                    return Err(Error::BadParams(format!("{} labels for {n} elements", l.len())));
                }
                l
            }
            None => (0..n).map(|i| format!("g{i}")).collect(),
        };
        let mut by_label = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if by_label.insert(l.clone(), i as u32).is_some() {
                return Err(Error::BadParams(format!("duplicate label `{l}`")));
            }
        }
        let mul = rows.into_iter().flatten().map(|x| x as u32).collect();
        Ok(FiniteTable { n, mul, inv, identity: identity as u32, labels, by_label, perms: None })
    }

    /// The group generated by permutations of `{1..degree}` given as image
    /// sequences.  Elements are sorted lexicographically by image sequence.
    pub fn from_permutations(degree: usize, gens: &[Vec<usize>]) -> Result<Self> {
        let id: Vec<usize> = (1..=degree).collect();
        for g in gens {
            check_perm(degree, g)?;
        }
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(id.clone());
        queue.push_back(id);
        while let Some(p) = queue.pop_front() {
            for g in gens {
                let q = compose(&p, g);
                if seen.insert(q.clone()) {
                    queue.push_back(q);
                }
            }
        }
        let elems: Vec<Vec<usize>> = seen.into_iter().collect();
        let index: HashMap<&Vec<usize>, usize> = elems.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let n = elems.len();
        let mut rows = vec![vec![0usize; n]; n];
        for i in 0..n {
            for j in 0..n {
                rows[i][j] = index[&compose(&elems[i], &elems[j])];
            }
        }
        let labels = elems.iter().map(|p| cycle_label(p)).collect();
        let mut t = FiniteTable::from_rows(rows, Some(labels))?;
        t.perms = Some(elems);
        Ok(t)
    }

    pub fn mul_idx(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.n + b as usize]
    }

    pub fn inv_idx(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    pub fn label(&self, a: u32) -> &str {
        &self.labels[a as usize]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn lookup(&self, token: &str) -> Result<u32> {
        if let Some(&i) = self.by_label.get(token) {
            return Ok(i);
        }
        if let Some(perms) = &self.perms {
            let degree = perms[0].len();
            let p = parse_cycles(degree, token)?;
            if let Some(i) = perms.iter().position(|q| *q == p) {
                return Ok(i as u32);
            }
            return Err(Error::BadParams(format!("permutation `{token}` is not in the group")));
        }
        Err(Error::BadParams(format!("unknown element `{token}`")))
    }

    /// Multiplication table rows as indices.
    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.mul[i * self.n + j] as usize).collect()).collect()
    }
}

fn check_perm(degree: usize, p: &[usize]) -> Result<()> {
    if p.len() != degree {
        return Err(Error::BadParams(format!("permutation {p:?} does not have degree {degree}")));
    }
    let mut seen = vec![false; degree + 1];
    for &x in p {
        if x == 0 || x > degree || seen[x] {
            return Err(Error::BadParams(format!("{p:?} is not a permutation of 1..{degree}")));
        }
        seen[x] = true;
    }
    Ok(())
}

/// `(σ∘τ)(x) = σ(τ(x))` on image sequences.
pub fn compose(sigma: &[usize], tau: &[usize]) -> Vec<usize> {
    tau.iter().map(|&x| sigma[x - 1]).collect()
}

/// Disjoint cycle notation, smallest point first, fixed points omitted.
pub fn cycle_label(p: &[usize]) -> String {
    let n = p.len();
    let sep = if n > 9 { "," } else { "" };
    let mut seen = vec![false; n + 1];
    let mut out = String::new();
    for start in 1..=n {
        if seen[start] || p[start - 1] == start {
            continue;
        }
        let mut cyc = vec![start];
        seen[start] = true;
        let mut x = p[start - 1];
        while x != start {
            seen[x] = true;
            cyc.push(x);
            x = p[x - 1];
        }
        let body: Vec<String> = cyc.iter().map(|c| c.to_string()).collect();
        out.push('(');
        out.push_str(&body.join(sep));
        out.push(')');
    }
    if out.is_empty() {
        "e".into()
    } else {
        out
    }
}

/// Parse a product of cycles such as `(12)(345)` or `(1,10)`.  The
/// product is read with the same convention as [`compose`].
pub fn parse_cycles(degree: usize, token: &str) -> Result<Vec<usize>> {
    let bad = |m: &str| Error::BadParams(format!("bad permutation `{token}`: {m}"));
    let mut result: Vec<usize> = (1..=degree).collect();
    if token == "e" {
        return Ok(result);
    }
    let mut rest = token;
    let mut cycles = Vec::new();
    while !rest.is_empty() {
        let body = rest.strip_prefix('(').ok_or_else(|| bad("expected `(`"))?;
        let close = body.find(')').ok_or_else(|| bad("unclosed cycle"))?;
        let inner = &body[..close];
        rest = &body[close + 1..];
        let pts: Vec<usize> = if inner.contains(',') {
            inner.split(',').map(|t| t.trim().parse::<usize>().map_err(|_| bad("bad point"))).collect::<Result<_>>()?
        } else {
            inner.chars().map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| bad("bad point"))).collect::<Result<_>>()?
        };
        if pts.iter().any(|&x| x == 0 || x > degree) {
            return Err(bad("point out of range"));
        }
        let uniq: BTreeSet<_> = pts.iter().collect();
        if uniq.len() != pts.len() {
            return Err(bad("repeated point in a cycle"));
        }
        let mut cyc: Vec<usize> = (1..=degree).collect();
        for i in 0..pts.len() {
            cyc[pts[i] - 1] = pts[(i + 1) % pts.len()];
        }
        cycles.push(cyc);
    }
    for c in cycles {
        result = compose(&result, &c);
    }
    Ok(result)
}

#[derive(Clone, Debug)]
pub enum GroupKind {
    /// A subgroup (possibly all) of a finite table group.
    Finite { table: Arc<FiniteTable>, members: Arc<Vec<u32>> },
    Integers,
    /// `Z[1/m]` under addition.
    Localized { m: BigInt },
    /// `Z[1/m] ⋊ Z`.
    Semidirect { m: BigInt },
}

#[derive(Clone, Debug)]
pub struct Group {
    pub name: String,
    pub kind: GroupKind,
}

fn rat_pow(m: &BigInt, e: &BigRational) -> BigRational {
    let e = e.to_integer().to_i32().expect("exponent out of range");
    let base = BigRational::from_integer(m.clone());
    if e >= 0 {
        num_traits::pow(base, e as usize)
    } else {
        num_traits::pow(base.recip(), (-e) as usize)
    }
}

/// True when every prime factor of `d` divides `m`.
fn divides_power_of(d: &BigInt, m: &BigInt) -> bool {
    let mut d = d.clone();
    loop {
        if d.is_one() {
            return true;
        }
        let g = d.gcd(m);
        if g.is_one() {
            return false;
        }
        while (&d % &g).is_zero() {
            d /= &g;
        }
    }
}

impl Group {
    pub fn finite(name: impl Into<String>, table: FiniteTable) -> Group {
        let members = (0..table.n as u32).collect();
        Group { name: name.into(), kind: GroupKind::Finite { table: Arc::new(table), members: Arc::new(members) } }
    }

    pub fn integers() -> Group {
        Group { name: "Z".into(), kind: GroupKind::Integers }
    }

    pub fn localized(m: i64) -> Result<Group> {
        if m < 2 {
            return Err(Error::BadParams(format!("localization needs m >= 2, got {m}")));
        }
        Ok(Group { name: format!("Z[1/{m}]"), kind: GroupKind::Localized { m: BigInt::from(m) } })
    }

    pub fn semidirect(m: i64) -> Result<Group> {
        if m < 2 {
            return Err(Error::BadParams(format!("semidirect product needs m >= 2, got {m}")));
        }
        Ok(Group { name: format!("Z[1/{m}]xZ"), kind: GroupKind::Semidirect { m: BigInt::from(m) } })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Group {
        self.name = name.into();
        self
    }

    pub fn table(&self) -> Option<&Arc<FiniteTable>> {
        match &self.kind {
            GroupKind::Finite { table, .. } => Some(table),
            _ => None,
        }
    }

    pub fn identity(&self) -> Elem {
        match &self.kind {
            GroupKind::Finite { table, .. } => Elem::Idx(table.identity),
            GroupKind::Integers | GroupKind::Localized { .. } => Elem::Q(BigRational::zero()),
            GroupKind::Semidirect { .. } => Elem::pair(Elem::int(0), Elem::int(0)),
        }
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match &self.kind {
            GroupKind::Finite { table, .. } => Elem::Idx(table.mul_idx(a.as_idx(), b.as_idx())),
            GroupKind::Integers | GroupKind::Localized { .. } => Elem::Q(a.as_q() + b.as_q()),
            GroupKind::Semidirect { m } => {
                let (n1, q1) = a.as_pair();
                let (n2, q2) = b.as_pair();
                let n = n1.as_q() + rat_pow(m, q1.as_q()) * n2.as_q();
                Elem::pair(Elem::Q(n), Elem::Q(q1.as_q() + q2.as_q()))
            }
        }
    }

    pub fn inv(&self, a: &Elem) -> Elem {
        match &self.kind {
            GroupKind::Finite { table, .. } => Elem::Idx(table.inv_idx(a.as_idx())),
            GroupKind::Integers | GroupKind::Localized { .. } => Elem::Q(-a.as_q().clone()),
            GroupKind::Semidirect { m } => {
                let (n, q) = a.as_pair();
                let nq = -q.as_q().clone();
                let nn = -(rat_pow(m, &nq) * n.as_q());
                Elem::pair(Elem::Q(nn), Elem::Q(nq))
            }
        }
    }

    pub fn is_identity(&self, a: &Elem) -> bool {
        *a == self.identity()
    }

    /// All elements in canonical order, or `None` for an infinite group.
    pub fn elements(&self) -> Option<Vec<Elem>> {
        match &self.kind {
            GroupKind::Finite { members, .. } => Some(members.iter().map(|&i| Elem::Idx(i)).collect()),
            _ => None,
        }
    }

    pub fn order(&self) -> Option<usize> {
        match &self.kind {
            GroupKind::Finite { members, .. } => Some(members.len()),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    /// Whether `a` is a valid encoding of an element of this group.
    pub fn contains(&self, a: &Elem) -> bool {
        match (&self.kind, a) {
            (GroupKind::Finite { members, .. }, Elem::Idx(i)) => members.binary_search(i).is_ok(),
            (GroupKind::Integers, Elem::Q(r)) => r.is_integer(),
            (GroupKind::Localized { m }, Elem::Q(r)) => divides_power_of(r.denom(), m),
            (GroupKind::Semidirect { m }, Elem::Pair(n, q)) => match (n.as_ref(), q.as_ref()) {
                (Elem::Q(n), Elem::Q(q)) => q.is_integer() && divides_power_of(n.denom(), m),
                _ => false,
            },
            _ => false,
        }
    }

    /// A pseudo-random element; uniform for finite groups, small-height
    /// normal forms for the infinite families.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        match &self.kind {
            GroupKind::Finite { members, .. } => Elem::Idx(members[rng.gen_range(0..members.len())]),
            GroupKind::Integers => Elem::int(rng.gen_range(-4..=4)),
            GroupKind::Localized { m } => random_localized(m, rng),
            GroupKind::Semidirect { m } => Elem::pair(random_localized(m, rng), Elem::int(rng.gen_range(-3..=3))),
        }
    }

    pub fn label(&self, a: &Elem) -> String {
        match (&self.kind, a) {
            (GroupKind::Finite { table, .. }, Elem::Idx(i)) => table.label(*i).to_string(),
            (_, e) => plain_label(e),
        }
    }

    /// Parse an element token in this group's notation.
    pub fn parse_elem(&self, token: &str) -> Result<Elem> {
        let e = match &self.kind {
            GroupKind::Finite { table, .. } => Elem::Idx(table.lookup(token)?),
            GroupKind::Integers | GroupKind::Localized { .. } => Elem::Q(parse_q(token)?),
            GroupKind::Semidirect { .. } => {
                let inner = token
                    .strip_prefix('(')
                    .and_then(|t| t.strip_suffix(')'))
                    .ok_or_else(|| Error::BadParams(format!("expected `(n,q)`, got `{token}`")))?;
                let (a, b) = inner
                    .split_once(',')
                    .ok_or_else(|| Error::BadParams(format!("expected `(n,q)`, got `{token}`")))?;
                Elem::pair(Elem::Q(parse_q(a.trim())?), Elem::Q(parse_q(b.trim())?))
            }
        };
        if !self.contains(&e) {
            return Err(Error::BadParams(format!("`{token}` is not an element of {}", self.name)));
        }
        Ok(e)
    }

    /// The finite subgroup with the given members; closure is checked.
    pub fn subgroup_from_elements(&self, name: &str, elems: &[Elem]) -> Result<Group> {
        let table = self
            .table()
            .ok_or_else(|| Error::BadParams(format!("{} is infinite; list subgroups by factor", self.name)))?
            .clone();
        let mut members: Vec<u32> = elems.iter().map(|e| e.as_idx()).collect();
        members.sort_unstable();
        members.dedup();
        let set: BTreeSet<u32> = members.iter().copied().collect();
        if !set.contains(&table.identity) {
            return Err(Error::BadParams(format!("subgroup {name} does not contain the identity")));
        }
        for &a in &members {
            if !set.contains(&table.inv_idx(a)) {
                return Err(Error::BadParams(format!("subgroup {name} is not closed under inverses")));
            }
            for &b in &members {
                if !set.contains(&table.mul_idx(a, b)) {
                    return Err(Error::BadParams(format!("subgroup {name} is not closed under multiplication")));
                }
            }
        }
        Ok(Group { name: name.into(), kind: GroupKind::Finite { table, members: Arc::new(members) } })
    }

    /// The subgroup generated by `gens`.
    pub fn subgroup_generated(&self, name: &str, gens: &[Elem]) -> Result<Group> {
        if self.table().is_none() {
            return Err(Error::BadParams(format!("{} is infinite; list subgroups by factor", self.name)));
        }
        let mut seen: BTreeSet<Elem> = BTreeSet::new();
        let id = self.identity();
        let mut queue = VecDeque::from([id.clone()]);
        seen.insert(id);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = self.mul(&x, g);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        let elems: Vec<Elem> = seen.into_iter().collect();
        self.subgroup_from_elements(name, &elems)
    }
}

fn random_localized<R: Rng + ?Sized>(m: &BigInt, rng: &mut R) -> Elem {
    let a = BigInt::from(rng.gen_range(-9i64..=9));
    let j: usize = rng.gen_range(0..=2);
    Elem::Q(BigRational::new(a, num_traits::pow(m.clone(), j)))
}

fn parse_q(t: &str) -> Result<BigRational> {
    let bad = || Error::BadParams(format!("bad rational `{t}`"));
    let (n, d) = t.split_once('/').unwrap_or((t, "1"));
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

fn fmt_q(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn plain_label(e: &Elem) -> String {
    match e {
        Elem::Idx(i) => format!("#{i}"),
        Elem::Q(r) => fmt_q(r),
        Elem::Pair(a, b) => format!("({},{})", plain_label(a), plain_label(b)),
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&plain_label(self))
    }
}

/// Exhaustive (or probe-based for infinite groups) check of the group laws.
pub fn check_group_laws(g: &Group, sample: &[Elem]) -> std::result::Result<(), String> {
    let e = g.identity();
    for a in sample {
        if g.mul(&e, a) != *a || g.mul(a, &e) != *a {
            return Err(format!("identity law fails at {}", g.label(a)));
        }
        if !g.is_identity(&g.mul(a, &g.inv(a))) || !g.is_identity(&g.mul(&g.inv(a), a)) {
            return Err(format!("inverse law fails at {}", g.label(a)));
        }
        for b in sample {
            for c in sample {
                if g.mul(&g.mul(a, b), c) != g.mul(a, &g.mul(b, c)) {
                    return Err(format!("associativity fails at ({}, {}, {})", g.label(a), g.label(b), g.label(c)));
                }
            }
        }
    }
    Ok(())
}
