//! Check results, probe selection and report rendering.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Error;
use crate::tensor::{LinOp, Tag, Universe, Vector};

/// Spaces with at most this many basis words are enumerated exhaustively.
pub const EXHAUSTIVE_LIMIT: usize = 10_000;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_COUNT: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub input: String,
    pub lhs: String,
    pub rhs: String,
    pub trace: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub id: String,
    pub name: String,
    pub anchor: String,
    pub status: Status,
    pub probes: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

impl Check {
    pub fn skipped(id: impl Into<String>, name: &str, anchor: &str, why: impl Into<String>) -> Check {
        Check {
            id: id.into(),
            name: name.into(),
            anchor: anchor.into(),
            status: Status::Skipped,
            probes: "none".into(),
            detail: Some(why.into()),
            counterexample: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(suite: &str) -> Report {
        Report { suite: suite.into(), checks: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn count(&self, s: Status) -> usize {
        self.checks.iter().filter(|c| c.status == s).count()
    }

    pub fn find(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn render_text(&self) -> String {
        let mut out = format!(
            "suite {}: {} pass, {} fail, {} skipped\n",
            self.suite,
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skipped)
        );
        for c in &self.checks {
            let st = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
            };
            out.push_str(&format!("  [{st}] {} ({}) {{{}}} probes: {}\n", c.id, c.name, c.anchor, c.probes));
            if let Some(d) = &c.detail {
                out.push_str(&format!("         {d}\n"));
            }
            if let Some(ce) = &c.counterexample {
                out.push_str(&format!("         input: {}\n         lhs:   {}\n         rhs:   {}\n", ce.input, ce.lhs, ce.rhs));
                for t in &ce.trace {
                    out.push_str(&format!("           {t}\n"));
                }
            }
        }
        out
    }
}

/// Render several reports as one JSON document with stable key order.
pub fn render_json(reports: &[Report]) -> String {
    serde_json::to_string_pretty(reports).expect("reports serialize") + "\n"
}

pub fn render_text(reports: &[Report]) -> String {
    reports.iter().map(Report::render_text).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbeMode {
    /// Enumerate when small enough, otherwise fall back to seeded probes.
    Exhaustive,
    Random { seed: u64, count: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProbeConfig {
    pub mode: ProbeMode,
    /// Seed and count used when exhaustive mode falls back to sampling.
    pub seed: u64,
    pub count: usize,
    /// Largest space enumerated in exhaustive mode.
    pub limit: usize,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig { mode: ProbeMode::Exhaustive, seed: DEFAULT_SEED, count: DEFAULT_COUNT, limit: EXHAUSTIVE_LIMIT }
    }
}

/// FNV-1a, so that each check draws an independent deterministic stream.
fn fnv(s: &str) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

pub struct Probes {
    pub vectors: Vec<Vector>,
    pub desc: String,
}

impl ProbeConfig {
    pub fn exhaustive() -> ProbeConfig {
        ProbeConfig::default()
    }

    pub fn random(seed: u64, count: usize) -> ProbeConfig {
        ProbeConfig { mode: ProbeMode::Random { seed, count }, seed, count, limit: EXHAUSTIVE_LIMIT }
    }

    /// Raise (or lower) the enumeration cap of exhaustive mode.
    pub fn with_limit(mut self, limit: usize) -> ProbeConfig {
        self.limit = limit;
        self
    }

    pub fn rng(&self, id: &str) -> ChaCha8Rng {
        let seed = match self.mode {
            ProbeMode::Exhaustive => self.seed,
            ProbeMode::Random { seed, .. } => seed,
        };
        ChaCha8Rng::seed_from_u64(seed ^ fnv(id))
    }

    fn random_count(&self) -> (u64, usize) {
        match self.mode {
            ProbeMode::Exhaustive => (self.seed, self.count),
            ProbeMode::Random { seed, count } => (seed, count),
        }
    }

    /// Probe vectors for the check `id` on words of `shape`.
    pub fn probes(&self, id: &str, uni: &Universe, shape: &[Tag]) -> Probes {
        if self.mode == ProbeMode::Exhaustive {
            if let Some(n) = uni.count(shape) {
                if n <= self.limit {
                    let vectors = uni.enumerate(shape).expect("finite").into_iter().map(Vector::basis).collect();
                    return Probes { vectors, desc: format!("exhaustive ({n})") };
                }
            }
        }
        self.sampled(id, uni, shape)
    }

    /// Seeded random vectors regardless of mode.
    pub fn sampled(&self, id: &str, uni: &Universe, shape: &[Tag]) -> Probes {
        let (seed, count) = self.random_count();
        let mut rng = self.rng(id);
        let vectors = (0..count).map(|_| uni.random_vector(shape, &mut rng)).collect();
        Probes { vectors, desc: format!("random(seed={seed}, n={count})") }
    }

    /// Basis words only, for checks whose inputs must be basis elements.
    pub fn basis_probes(&self, id: &str, uni: &Universe, shape: &[Tag]) -> Probes {
        if self.mode == ProbeMode::Exhaustive {
            if let Some(n) = uni.count(shape) {
                if n <= self.limit {
                    let vectors = uni.enumerate(shape).expect("finite").into_iter().map(Vector::basis).collect();
                    return Probes { vectors, desc: format!("exhaustive ({n})") };
                }
            }
        }
        let (seed, count) = self.random_count();
        let mut rng = self.rng(id);
        let vectors = (0..count).map(|_| Vector::basis(uni.random_word(shape, &mut rng))).collect();
        Probes { vectors, desc: format!("random basis(seed={seed}, n={count})") }
    }
}

/// Identity metadata shared by every check constructor.
#[derive(Clone, Debug)]
pub struct Meta {
    pub id: String,
    pub name: String,
    pub anchor: String,
}

impl Meta {
    pub fn new(id: impl Into<String>, name: impl Into<String>, anchor: impl Into<String>) -> Meta {
        Meta { id: id.into(), name: name.into(), anchor: anchor.into() }
    }

    pub fn skip(&self, why: impl Into<String>) -> Check {
        Check::skipped(self.id.clone(), &self.name, &self.anchor, why)
    }

    pub fn pass(&self, probes: &str, detail: Option<String>) -> Check {
        Check {
            id: self.id.clone(),
            name: self.name.clone(),
            anchor: self.anchor.clone(),
            status: Status::Pass,
            probes: probes.into(),
            detail,
            counterexample: None,
        }
    }

    pub fn fail(&self, probes: &str, detail: Option<String>, ce: Counterexample) -> Check {
        Check {
            id: self.id.clone(),
            name: self.name.clone(),
            anchor: self.anchor.clone(),
            status: Status::Fail,
            probes: probes.into(),
            detail,
            counterexample: Some(ce),
        }
    }

    /// A failure that is not tied to a specific probe (e.g. a rank deficit).
    pub fn fail_global(&self, probes: &str, detail: String, lhs: String, rhs: String) -> Check {
        self.fail(probes, Some(detail), Counterexample { input: "-".into(), lhs, rhs, trace: Vec::new() })
    }
}

fn show(uni: &Universe, r: &Result<Vector, Error>) -> String {
    match r {
        Ok(v) => uni.render(v),
        Err(e) => format!("error: {e}"),
    }
}

fn render_trace(uni: &Universe, side: &str, op: &LinOp, v: &Vector) -> Vec<String> {
    let tr = op.trace(v);
    if tr.len() <= 1 {
        return Vec::new();
    }
    tr.iter().map(|(name, r)| format!("{side} after {name}: {}", show(uni, r))).collect()
}

/// `lhs = rhs` on every probe vector; the first mismatch is recorded.
pub fn check_eq(meta: &Meta, lhs: &LinOp, rhs: &LinOp, probes: &Probes, uni: &Universe) -> Check {
    for v in &probes.vectors {
        let l = lhs.apply(v);
        let r = rhs.apply(v);
        let equal = matches!((&l, &r), (Ok(a), Ok(b)) if a == b);
        if !equal {
            let mut trace = render_trace(uni, "lhs", lhs, v);
            trace.extend(render_trace(uni, "rhs", rhs, v));
            let ce = Counterexample { input: uni.render(v), lhs: show(uni, &l), rhs: show(uni, &r), trace };
            return meta.fail(&probes.desc, None, ce);
        }
    }
    meta.pass(&probes.desc, None)
}

/// A probe-wise predicate returning both evaluated sides.
pub fn check_with<F>(meta: &Meta, probes: &Probes, uni: &Universe, mut f: F) -> Check
where
    F: FnMut(&Vector) -> Result<(Vector, Vector), Error>,
{
    for v in &probes.vectors {
        match f(v) {
            Ok((l, r)) if l == r => {}
            Ok((l, r)) => {
                let ce = Counterexample { input: uni.render(v), lhs: uni.render(&l), rhs: uni.render(&r), trace: Vec::new() };
                return meta.fail(&probes.desc, None, ce);
            }
            Err(e) => {
                let ce = Counterexample { input: uni.render(v), lhs: format!("error: {e}"), rhs: "-".into(), trace: Vec::new() };
                return meta.fail(&probes.desc, Some(e.to_string()), ce);
            }
        }
    }
    meta.pass(&probes.desc, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{FiniteTable, Group};
    use crate::tensor::Tag;

    fn uni() -> Universe {
        let s3 = Group::finite("S3", FiniteTable::from_permutations(3, &[vec![2, 1, 3], vec![2, 3, 1]]).unwrap());
        Universe::new(vec![s3, Group::integers()])
    }

    #[test]
    fn exhaustive_on_small_and_random_on_infinite() {
        let u = uni();
        let cfg = ProbeConfig::default();
        let p = cfg.probes("x", &u, &[Tag::group(0), Tag::group(0)]);
        assert_eq!(p.vectors.len(), 36);
        let q = cfg.probes("x", &u, &[Tag::delta(1)]);
        assert_eq!(q.vectors.len(), DEFAULT_COUNT);
        assert!(q.desc.starts_with("random"));
    }

    #[test]
    fn random_probes_are_deterministic_and_id_dependent() {
        let u = uni();
        let cfg = ProbeConfig::random(7, 20);
        let a = cfg.probes("alpha", &u, &[Tag::delta(1)]).vectors;
        let b = cfg.probes("alpha", &u, &[Tag::delta(1)]).vectors;
        let c = cfg.probes("beta", &u, &[Tag::delta(1)]).vectors;
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn check_eq_reports_counterexample() {
        let u = uni();
        let cfg = ProbeConfig::default();
        let id = LinOp::identity(vec![Tag::group(0), Tag::group(0)]);
        let flip = LinOp::flip(Tag::group(0), Tag::group(0));
        let p = cfg.probes("f", &u, &id.input);
        let m = Meta::new("t.flip", "flip is identity", "σ = ι");
        let c = check_eq(&m, &id, &flip, &p, &u);
        assert_eq!(c.status, Status::Fail);
        let ce = c.counterexample.unwrap();
        assert_ne!(ce.lhs, ce.rhs);
        assert!(check_eq(&m, &id, &id, &p, &u).passed());
    }
}
