//! The line-oriented `.grp` input format.
//!
//! ```text
//! # S3 = A3·⟨(12)⟩
//! group S3 perm 3 (12) (123)
//! subgroup K of S3 generators (123)
//! subgroup H of S3 elements e (12)
//! matchedpair S3 K H
//! ```
//!
//! Permutations are disjoint cycles like `(12)(345)` or image sequences
//! like `2,1,3`; products compose right to left, so `(στ)(x) = σ(τ(x))`.
//! A table group is `group <name> table <n> [labels...]` followed by `n`
//! rows of `n` labels (or 0-based indices), row `i` column `j` being `g_i g_j`.
//! Built-in families: `family integers`, `family dyadic <m>` (`Z[1/m]`) and
//! `family semidirect <m>` (`Z[1/m] ⋊ Z`); the factors of the latter are
//! declared with `subgroup <name> of <G> factor normal|acting`.
//! Explicit actions: `matchedpair explicit <H> <K>` followed by complete
//! `tr h k -> k'` and `tl h k -> h'` tables.

use std::collections::{BTreeMap, HashMap};

use crate::bicross::Instance;
use crate::error::{Error, Result};
use crate::group::{parse_cycles, Elem, FiniteTable, Group};
use crate::matched_pair::{FactorRole, MatchedPair, Subgroup};

enum Pair {
    Derived { g: String, k: String, h: String, line: usize },
    Explicit { h: String, k: String, tr: HashMap<(Elem, Elem), Elem>, tl: HashMap<(Elem, Elem), Elem>, line: usize },
}

#[derive(Default)]
struct Doc {
    groups: BTreeMap<String, Group>,
    subgroups: BTreeMap<String, (String, Subgroup)>,
    pair: Option<Pair>,
}

fn tokens(line: &str) -> Vec<&str> {
    let body = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    body.split_whitespace().collect()
}

fn parse_perm(degree: usize, tok: &str) -> Result<Vec<usize>> {
    if tok.starts_with('(') || tok == "e" {
        return parse_cycles(degree, tok);
    }
    tok.trim_matches(|c| c == '[' || c == ']')
        .split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|_| Error::BadParams(format!("bad image sequence `{tok}`"))))
        .collect()
}

fn int_param(t: Option<&&str>, what: &str) -> Result<i64> {
    t.ok_or_else(|| Error::BadParams(format!("missing {what}")))?
        .parse::<i64>()
        .map_err(|_| Error::BadParams(format!("{what} must be an integer")))
}

impl Doc {
    fn group(&self, name: &str) -> Result<Group> {
        if let Some(g) = self.groups.get(name) {
            return Ok(g.clone());
        }
        if let Some((_, s)) = self.subgroups.get(name) {
            return Ok(s.group.clone());
        }
        Err(Error::BadParams(format!("unknown group `{name}`")))
    }

    fn elem(&self, group: &str, tok: &str) -> Result<Elem> {
        self.group(group)?.parse_elem(tok)
    }
}

fn parse_doc(text: &str) -> Result<(Doc, usize)> {
    let lines: Vec<&str> = text.lines().collect();
    let mut doc = Doc::default();
    let mut i = 0;
    while i < lines.len() {
        let lineno = i + 1;
        let t = tokens(lines[i]);
        i += 1;
        if t.is_empty() {
            continue;
        }
        let at = |e: Error| e.at_line(lineno);
        match t[0] {
            "group" => {
                if t.len() < 3 {
                    return Err(Error::parse(lineno, "expected `group <name> perm|table|family ...`"));
                }
                let name = t[1].to_string();
                if doc.groups.contains_key(&name) || doc.subgroups.contains_key(&name) {
                    return Err(Error::parse(lineno, format!("`{name}` is already defined")));
                }
                let g = match t[2] {
                    "perm" => {
                        let degree = int_param(t.get(3), "degree").map_err(at)? as usize;
                        let gens = t[4..].iter().map(|g| parse_perm(degree, g)).collect::<Result<Vec<_>>>().map_err(at)?;
                        Group::finite(name.clone(), FiniteTable::from_permutations(degree, &gens).map_err(at)?)
                    }
                    "table" => {
                        let n = int_param(t.get(3), "order").map_err(at)? as usize;
                        let labels: Option<Vec<String>> =
                            if t.len() > 4 { Some(t[4..].iter().map(|s| s.to_string()).collect()) } else { None };
                        let mut rows = Vec::with_capacity(n);
                        while rows.len() < n {
                            let Some(l) = lines.get(i) else {
                                return Err(Error::parse(i + 1, format!("table `{name}` ends after {} rows", rows.len())));
                            };
                            let row_no = i + 1;
                            i += 1;
                            let r = tokens(l);
                            if r.is_empty() {
                                continue;
                            }
                            let row = r
                                .iter()
                                .map(|x| match &labels {
                                    Some(ls) => ls
                                        .iter()
                                        .position(|l| l == x)
                                        .or_else(|| x.parse::<usize>().ok())
                                        .ok_or_else(|| Error::parse(row_no, format!("unknown label `{x}`"))),
                                    None => x.parse::<usize>().map_err(|_| Error::parse(row_no, format!("bad index `{x}`"))),
                                })
                                .collect::<Result<Vec<_>>>()?;
                            rows.push(row);
                        }
                        Group::finite(name.clone(), FiniteTable::from_rows(rows, labels).map_err(at)?)
                    }
                    "family" => match t.get(3).copied() {
                        Some("integers") => Group::integers().with_name(name.clone()),
                        Some("dyadic") => Group::localized(int_param(t.get(4), "m").map_err(at)?).map_err(at)?.with_name(name.clone()),
                        Some("semidirect") => {
                            Group::semidirect(int_param(t.get(4), "m").map_err(at)?).map_err(at)?.with_name(name.clone())
                        }
                        Some(other) => return Err(at(Error::UnknownFamily(other.into()))),
                        None => return Err(Error::parse(lineno, "missing family name")),
                    },
                    other => return Err(Error::parse(lineno, format!("unknown group kind `{other}`"))),
                };
                doc.groups.insert(name, g);
            }
            "subgroup" => {
                if t.len() < 5 || t[2] != "of" {
                    return Err(Error::parse(lineno, "expected `subgroup <name> of <group> elements|generators|factor ...`"));
                }
                let (name, parent) = (t[1], t[3]);
                let g = doc.groups.get(parent).cloned().ok_or_else(|| Error::parse(lineno, format!("unknown group `{parent}`")))?;
                let sub = match t[4] {
                    "elements" | "generators" => {
                        let elems = t[5..].iter().map(|x| g.parse_elem(x)).collect::<Result<Vec<_>>>().map_err(at)?;
                        let s = if t[4] == "elements" {
                            g.subgroup_from_elements(name, &elems)
                        } else {
                            g.subgroup_generated(name, &elems)
                        };
                        Subgroup::finite(s.map_err(at)?)
                    }
                    "factor" => {
                        let role = match t.get(5).copied() {
                            Some("normal") => FactorRole::Normal,
                            Some("acting") => FactorRole::Acting,
                            _ => return Err(Error::parse(lineno, "expected `factor normal` or `factor acting`")),
                        };
                        Subgroup::factor(&g, name, role).map_err(at)?
                    }
                    other => return Err(Error::parse(lineno, format!("unknown subgroup form `{other}`"))),
                };
                doc.subgroups.insert(name.to_string(), (parent.to_string(), sub));
            }
            "matchedpair" => {
                if doc.pair.is_some() {
                    return Err(Error::parse(lineno, "only one matchedpair per file"));
                }
                if t.get(1) == Some(&"explicit") {
                    if t.len() != 4 {
                        return Err(Error::parse(lineno, "expected `matchedpair explicit <H> <K>`"));
                    }
                    for n in &t[2..4] {
                        doc.group(n).map_err(at)?;
                    }
                    doc.pair = Some(Pair::Explicit {
                        h: t[2].into(),
                        k: t[3].into(),
                        tr: HashMap::new(),
                        tl: HashMap::new(),
                        line: lineno,
                    });
                } else {
                    if t.len() != 4 {
                        return Err(Error::parse(lineno, "expected `matchedpair <G> <K> <H>`"));
                    }
                    doc.pair = Some(Pair::Derived { g: t[1].into(), k: t[2].into(), h: t[3].into(), line: lineno });
                }
            }
            "tr" | "tl" => {
                if t.len() != 5 || t[3] != "->" {
                    return Err(Error::parse(lineno, format!("expected `{} h k -> value`", t[0])));
                }
                let (hname, kname) = match &doc.pair {
                    Some(Pair::Explicit { h, k, .. }) => (h.clone(), k.clone()),
                    _ => return Err(Error::parse(lineno, "action lines need a preceding `matchedpair explicit`")),
                };
                let h = doc.elem(&hname, t[1]).map_err(at)?;
                let k = doc.elem(&kname, t[2]).map_err(at)?;
                let v = doc.elem(if t[0] == "tr" { &kname } else { &hname }, t[4]).map_err(at)?;
                if let Some(Pair::Explicit { tr, tl, .. }) = &mut doc.pair {
                    let table = if t[0] == "tr" { tr } else { tl };
                    if table.insert((h, k), v).is_some() {
                        return Err(Error::parse(lineno, format!("duplicate `{}` entry", t[0])));
                    }
                }
            }
            other => return Err(Error::parse(lineno, format!("unknown directive `{other}`"))),
        }
    }
    Ok((doc, lines.len()))
}

/// The groups declared in a document (a matched pair is not required).
pub fn parse_groups(text: &str) -> Result<BTreeMap<String, Group>> {
    Ok(parse_doc(text)?.0.groups)
}

/// Parse a `.grp` document into a matched-pair instance.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let (mut doc, n_lines) = parse_doc(text)?;
    match doc.pair.take() {
        None => Err(Error::parse(n_lines.max(1), "no matchedpair declared")),
        Some(Pair::Derived { g, k, h, line }) => {
            let gg = doc.groups.get(&g).cloned().ok_or_else(|| Error::parse(line, format!("unknown group `{g}`")))?;
            let sub = |n: &str| -> Result<Subgroup> {
                match doc.subgroups.get(n) {
                    Some((parent, s)) if *parent == g => Ok(s.clone()),
                    Some(_) => Err(Error::parse(line, format!("`{n}` is not a subgroup of `{g}`"))),
                    None => Err(Error::parse(line, format!("unknown subgroup `{n}`"))),
                }
            };
            let (kk, hh) = (sub(&k)?, sub(&h)?);
            let mp = MatchedPair::from_factorization(&gg, &hh, &kk)?;
            Instance::from_matched_pair(&g, &mp)
        }
        Some(Pair::Explicit { h, k, tr, tl, line }) => {
            let (hg, kg) = (doc.group(&h).map_err(|e| e.at_line(line))?, doc.group(&k).map_err(|e| e.at_line(line))?);
            let mp = MatchedPair::explicit(hg, kg, tr, tl).map_err(|e| e.at_line(line))?;
            Instance::from_matched_pair(&format!("{h}-{k}"), &mp)
        }
    }
}

pub fn read_instance(path: &std::path::Path) -> Result<Instance> {
    parse_instance(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const S3: &str = "# S3 with K normal\ngroup S3 perm 3 (12) 2,3,1\nsubgroup K of S3 generators (123)\nsubgroup H of S3 elements e (12)\nmatchedpair S3 K H\n";

    #[test]
    fn parses_s3() {
        let inst = parse_instance(S3).unwrap();
        assert_eq!(inst.mp.h.order(), Some(2));
        assert_eq!(inst.mp.k.order(), Some(3));
        let h = inst.mp.h.parse_elem("(12)").unwrap();
        let k = inst.mp.k.parse_elem("(123)").unwrap();
        assert_eq!(inst.mp.k.label(&inst.mp.tr(&h, &k)), "(132)");
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = "group S3 perm 3 (12) (123)\n\nsubgroup K of S4 generators (123)\n";
        assert_eq!(parse_instance(bad).unwrap_err(), Error::parse(3, "unknown group `S4`"));
        let bad = "group S3 perm 3 (12) (124)\n";
        assert!(matches!(parse_instance(bad), Err(Error::Parse { line: 1, .. })));
        let bad = "group Z family rationals\n";
        assert!(matches!(parse_instance(bad), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn table_and_family_inputs() {
        let t = "group C2 table 2 e a\ne a\na e\ngroup C3 table 3 e b c\ne b c\nb c e\nc e b\n\
                 matchedpair explicit C2 C3\n\
                 tr e e -> e\ntr e b -> b\ntr e c -> c\ntr a e -> e\ntr a b -> c\ntr a c -> b\n\
                 tl e e -> e\ntl e b -> e\ntl e c -> e\ntl a e -> a\ntl a b -> a\ntl a c -> a\n";
        let inst = parse_instance(t).unwrap();
        assert_eq!(inst.name, "C2-C3");
        let f = "group G family semidirect 2\nsubgroup K of G factor normal\nsubgroup H of G factor acting\nmatchedpair G K H\n";
        let inst = parse_instance(f).unwrap();
        let (h, k) = (Elem::int(1), Elem::rat(3, 2));
        assert_eq!(inst.mp.tr(&h, &k), Elem::int(3));
        assert_eq!(inst.mp.tl(&h, &k), Elem::int(1));
    }

    #[test]
    fn incomplete_explicit_table_is_rejected() {
        let t = "group C2 table 2 e a\ne a\na e\nmatchedpair explicit C2 C2\ntr e e -> e\n";
        assert!(matches!(parse_instance(t), Err(Error::Parse { line: 4, .. })));
    }
}
