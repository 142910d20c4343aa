//! Standard matched-pair instances.

use crate::bicross::Instance;
use crate::error::Result;
use crate::group::{FiniteTable, Group};
use crate::matched_pair::{MatchedPair, Subgroup};

fn perm_group(name: &str, degree: usize, gens: &[&str]) -> Result<Group> {
    let gens = gens
        .iter()
        .map(|g| crate::group::parse_cycles(degree, g))
        .collect::<Result<Vec<_>>>()?;
    Ok(Group::finite(name, FiniteTable::from_permutations(degree, &gens)?))
}

fn factor(g: &Group, k_gens: &[&str], h_gens: &[&str]) -> Result<MatchedPair> {
    let parse = |gens: &[&str]| gens.iter().map(|s| g.parse_elem(s)).collect::<Result<Vec<_>>>();
    let k = g.subgroup_generated("K", &parse(k_gens)?)?;
    let h = g.subgroup_generated("H", &parse(h_gens)?)?;
    MatchedPair::from_factorization(g, &Subgroup::finite(h), &Subgroup::finite(k))
}

/// `S3 = A3·⟨(12)⟩`; `K` is normal, so the coaction is trivial.
pub fn s3() -> Result<Instance> {
    let g = perm_group("S3", 3, &["(12)", "(123)"])?;
    Instance::from_matched_pair("S3", &factor(&g, &["(123)"], &["(12)"])?)
}

/// `S3 = ⟨(12)⟩·A3`; now `H` is normal and the action is trivial.
pub fn s3_swapped() -> Result<Instance> {
    let g = perm_group("S3", 3, &["(12)", "(123)"])?;
    Instance::from_matched_pair("S3-swapped", &factor(&g, &["(12)"], &["(123)"])?)
}

/// `⟨(12),(345)⟩ ≤ S5`, a direct product: both actions trivial.
pub fn c6() -> Result<Instance> {
    let g = perm_group("C6", 5, &["(12)", "(345)"])?;
    Instance::from_matched_pair("C6", &factor(&g, &["(345)"], &["(12)"])?)
}

/// `A5 = A4·⟨(12345)⟩`, neither factor normal.
pub fn a5() -> Result<Instance> {
    let g = perm_group("A5", 5, &["(123)", "(12345)"])?;
    Instance::from_matched_pair("A5", &factor(&g, &["(123)", "(12)(34)"], &["(12345)"])?)
}

/// `Z[1/m] ⋊ Z` with `K = Z[1/m]`: infinite, `B = F(K)` nonunital.
pub fn dyadic(m: i64) -> Result<Instance> {
    Instance::from_matched_pair(&format!("Z[1/{m}]xZ"), &MatchedPair::semidirect_family(m)?)
}

/// The same group with `H = Z[1/m]`, giving a nontrivial coaction.
pub fn dyadic_swapped(m: i64) -> Result<Instance> {
    Instance::from_matched_pair(&format!("Z[1/{m}]xZ-swapped"), &MatchedPair::semidirect_family_swapped(m)?)
}
