//! Coxeter systems, reflection representations, words and enumerated groups.

pub mod cache;
pub mod group;
pub mod reflection;
pub mod roots;
pub mod types;
pub mod word;

pub use group::{DihedralElement, GroupTable, DEFAULT_CAP};
pub use reflection::ReflectionRep;
pub use roots::RootSystem;
pub use types::{Component, CoxeterSystem, CoxeterType};
pub use word::Word;

use crate::error::{Error, Result};

/// Parse a type spec.
pub fn parse_type(spec: &str) -> Result<CoxeterSystem> {
    CoxeterSystem::parse(spec)
}

/// Direct product with the generators of `b` numbered after those of `a`.
pub fn direct_product(a: &CoxeterSystem, b: &CoxeterSystem) -> CoxeterSystem {
    a.direct_product(b)
}

/// Generator numbering options.
///
/// `table2` keeps the diagram numbering. `example73` reverses the nodes,
/// which for H3 moves the 5-bond onto {2,3}. `perm:p1,p2,…` makes new
/// generator `i` the old generator `p_i` (1-based).
pub fn apply_labeling(sys: &CoxeterSystem, labeling: &str) -> Result<CoxeterSystem> {
    let n = sys.rank();
    match labeling {
        "" | "table2" => Ok(sys.clone()),
        "example73" => sys.relabel(&(0..n).rev().collect::<Vec<_>>()),
        other => {
            let body = other
                .strip_prefix("perm:")
                .ok_or_else(|| Error::Precondition(format!("unknown labeling {other:?}")))?;
            let perm = body
                .split(',')
                .map(|p| match p.trim().parse::<usize>() {
                    Ok(v) if v >= 1 => Ok(v - 1),
                    _ => Err(Error::Precondition(format!("bad permutation entry {p:?}"))),
                })
                .collect::<Result<Vec<_>>>()?;
            if perm.len() != n {
                return Err(Error::Precondition(format!("permutation needs {n} entries")));
            }
            sys.relabel(&perm)
        }
    }
}
