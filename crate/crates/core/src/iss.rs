//! Independent signature sequences and their matrices: graded greedy
//! selection, direct-product splicing, the parabolic/cuspidal pipeline for
//! exceptional types, and exact verification.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::combinat::{factorial, partitions};
use crate::conjugacy::{enumerate_classes, ClassTable};
use crate::coxeter::{CoxeterSystem, CoxeterType, GroupTable, Word};
use crate::cuspdata::{from_classes, tie_words, CuspidalDatum, TieWord};
use crate::error::{Error, Result};
use crate::signatures::{signature_vectors, GradedStream, SignatureVector, DEFAULT_BUDGET, EXTENDED_BUDGET};

/// A signature sequence with its matrix. Column `j` is the class containing
/// `class_reps[j]`; row `i` is `V_{signatures[i]}` in that column order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IssReport {
    pub type_spec: String,
    pub rank: usize,
    pub signatures: Vec<Vec<u32>>,
    pub class_reps: Vec<Word>,
    pub matrix: Vec<Vec<BigUint>>,
    pub triangular: bool,
    pub diagonal_nonzero: bool,
}

impl IssReport {
    pub fn new(
        type_spec: String,
        rank: usize,
        signatures: Vec<Vec<u32>>,
        class_reps: Vec<Word>,
        matrix: Vec<Vec<BigUint>>,
    ) -> IssReport {
        let triangular = matrix.iter().enumerate().all(|(i, row)| row.iter().skip(i + 1).all(Zero::is_zero));
        let diagonal_nonzero = matrix.len() == class_reps.len()
            && matrix.iter().enumerate().all(|(i, row)| row.get(i).is_some_and(|x| !x.is_zero()));
        IssReport { type_spec, rank, signatures, class_reps, matrix, triangular, diagonal_nonzero }
    }

    /// The one-row report of the trivial group.
    pub fn trivial() -> IssReport {
        IssReport::new("A0".into(), 0, vec![vec![]], vec![Word::empty()], vec![vec![BigUint::one()]])
    }

    /// Rows from full class vectors, columns taken in `order` (class ids).
    pub fn from_vectors(
        sys: &CoxeterSystem,
        classes: &ClassTable,
        vectors: &[SignatureVector],
        order: &[usize],
    ) -> IssReport {
        let matrix = vectors.iter().map(|v| order.iter().map(|&c| v.entries[c].clone()).collect()).collect();
        IssReport::new(
            sys.type_spec(),
            sys.rank(),
            vectors.iter().map(|v| v.alpha.clone()).collect(),
            order.iter().map(|&c| classes.rep_word(c).clone()).collect(),
            matrix,
        )
    }

    pub fn len(&self) -> usize {
        self.signatures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signatures.is_empty()
    }

    pub fn class_names(&self) -> Vec<String> {
        self.class_reps.iter().map(|w| format!("C({w})")).collect()
    }

    /// Class ids of the columns in an enumerated table.
    pub fn class_order(&self, t: &GroupTable, classes: &ClassTable) -> Vec<usize> {
        self.class_reps.iter().map(|w| classes.class_of_word(t, w)).collect()
    }

    /// Move position `p` (signature entry and generator letter) to `positions[p]`.
    pub fn relabel(&self, positions: &[usize]) -> IssReport {
        let n = positions.len();
        let signatures = self
            .signatures
            .iter()
            .map(|a| {
                let mut out = vec![0; n];
                for (p, &x) in a.iter().enumerate() {
                    out[positions[p]] = x;
                }
                out
            })
            .collect();
        let class_reps = self.class_reps.iter().map(|w| w.map_letters(|l| positions[l as usize] as u8)).collect();
        IssReport { signatures, class_reps, ..self.clone() }
    }

    /// Replace column representatives by the table's canonical ones.
    pub fn bind(&mut self, t: &GroupTable, classes: &ClassTable) {
        self.class_reps = self.class_order(t, classes).into_iter().map(|c| classes.rep_word(c).clone()).collect();
    }

    pub fn to_json(&self) -> IssJson {
        IssJson {
            type_spec: self.type_spec.clone(),
            rank: self.rank,
            class_order: self.class_names(),
            class_reps: self.class_reps.iter().map(Word::to_one_based).collect(),
            signatures: self.signatures.clone(),
            matrix: self.matrix.iter().map(|r| r.iter().map(BigUint::to_string).collect()).collect(),
            triangular: self.triangular,
            diagonal_nonzero: self.diagonal_nonzero,
        }
    }

    /// Rebuild from JSON; the flags are recomputed from the matrix.
    pub fn from_json(j: &IssJson) -> Result<IssReport> {
        let class_reps = j.class_reps.iter().map(|w| Word::from_one_based(w)).collect::<Result<Vec<_>>>()?;
        let matrix = j
            .matrix
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| x.parse::<BigUint>().map_err(|_| Error::Format(format!("bad matrix entry {x:?}"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IssReport::new(j.type_spec.clone(), j.rank, j.signatures.clone(), class_reps, matrix))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IssJson {
    #[serde(rename = "type")]
    pub type_spec: String,
    pub rank: usize,
    pub class_order: Vec<String>,
    pub class_reps: Vec<Vec<usize>>,
    pub signatures: Vec<Vec<u32>>,
    pub matrix: Vec<Vec<String>>,
    pub triangular: bool,
    pub diagonal_nonzero: bool,
}

/// Keep the first vector, then every vector whose support adds exactly one
/// uncovered class, until all classes are covered. Columns follow the order
/// of first coverage.
pub fn greedy_triangular<I>(stream: I, sys: &CoxeterSystem, classes: &ClassTable) -> Result<IssReport>
where
    I: IntoIterator<Item = Result<SignatureVector>>,
{
    let r = classes.len();
    let mut covered = vec![false; r];
    let mut order = Vec::with_capacity(r);
    let mut rows = Vec::with_capacity(r);
    for v in stream {
        let v = v?;
        let fresh: Vec<usize> = v.support().into_iter().filter(|&c| !covered[c]).collect();
        if let [c] = fresh[..] {
            covered[c] = true;
            order.push(c);
            rows.push(v);
            if rows.len() == r {
                break;
            }
        }
    }
    if rows.len() < r {
        return Err(Error::StreamExhausted {
            covered: rows.len(),
            total: r,
            uncovered: (0..r).filter(|&c| !covered[c]).map(|c| classes.name(c)).collect(),
        });
    }
    Ok(IssReport::from_vectors(sys, classes, &rows, &order))
}

/// Report for a given signature list; columns in order of first coverage,
/// ties inside a row broken by class id.
pub fn report_for_signatures(
    sys: &CoxeterSystem,
    t: &GroupTable,
    classes: &ClassTable,
    alphas: &[Vec<u32>],
) -> Result<IssReport> {
    let vectors = signature_vectors(t, classes, alphas, DEFAULT_BUDGET)?;
    let mut covered = vec![false; classes.len()];
    let mut order = Vec::new();
    for v in &vectors {
        for c in v.support() {
            if !covered[c] {
                covered[c] = true;
                order.push(c);
            }
        }
    }
    order.extend((0..classes.len()).filter(|&c| !covered[c]));
    Ok(IssReport::from_vectors(sys, classes, &vectors, &order))
}

/// Splice two reports: rows `αᵢ || βⱼ` nested with `i` outer, entries
/// `(|αᵢ|+|βⱼ|)!/(|αᵢ|!|βⱼ|!) · xᵢₖ · yⱼₗ`.
pub fn iss_direct_product(a: &IssReport, b: &IssReport) -> IssReport {
    let shift = a.rank as u8;
    let class_reps: Vec<Word> = a
        .class_reps
        .iter()
        .flat_map(|u| b.class_reps.iter().map(move |v| u.concat(&v.map_letters(|l| l + shift))))
        .collect();
    let mut signatures = Vec::with_capacity(a.len() * b.len());
    let mut matrix = Vec::with_capacity(a.len() * b.len());
    for (al, xrow) in a.signatures.iter().zip(&a.matrix) {
        for (be, yrow) in b.signatures.iter().zip(&b.matrix) {
            let (la, lb) = (al.iter().sum::<u32>() as u64, be.iter().sum::<u32>() as u64);
            let m = factorial(la + lb) / (factorial(la) * factorial(lb));
            let m = &m;
            let row: Vec<BigUint> = xrow.iter().flat_map(|x| yrow.iter().map(move |y| m * x * y)).collect();
            let mut s = al.clone();
            s.extend_from_slice(be);
            signatures.push(s);
            matrix.push(row);
        }
    }
    let type_spec = match (a.rank, b.rank) {
        (0, _) => b.type_spec.clone(),
        (_, 0) => a.type_spec.clone(),
        _ => format!("{}x{}", a.type_spec, b.type_spec),
    };
    IssReport::new(type_spec, a.rank + b.rank, signatures, class_reps, matrix)
}

/// A lower triangular ISS for `sys`, built per irreducible component and
/// spliced. Classical and dihedral components use the graded greedy; H3, H4
/// and F4 use the parabolic/cuspidal pipeline, as does E6 when `extended`.
pub fn iss_for(sys: &CoxeterSystem, extended: bool) -> Result<IssReport> {
    let mut report = IssReport::trivial();
    let mut positions = Vec::with_capacity(sys.rank());
    for comp in sys.components() {
        report = iss_direct_product(&report, &iss_irreducible(comp.kind, extended)?);
        positions.extend_from_slice(&comp.nodes);
    }
    let canonical = positions.iter().enumerate().all(|(p, &v)| p == v);
    if !canonical {
        report = report.relabel(&positions);
    }
    if !canonical || sys.components().len() > 1 {
        let (t, classes) = enumerate_classes(sys)?;
        report.bind(&t, &classes);
    }
    report.type_spec = sys.type_spec();
    Ok(report)
}

fn iss_irreducible(kind: CoxeterType, extended: bool) -> Result<IssReport> {
    let sys = CoxeterSystem::irreducible(kind);
    match kind {
        CoxeterType::H(_) | CoxeterType::F4 => pipeline_iss(&sys, extended),
        CoxeterType::E(6) if extended => pipeline_iss(&sys, extended),
        CoxeterType::E(_) => Err(Error::Unsupported(format!(
            "ISS construction for {kind} (E6 runs under extended mode; E7 and E8 are not enumerated)"
        ))),
        _ => greedy_iss(&sys),
    }
}

/// The graded-lex greedy on an enumerated group.
pub fn greedy_iss(sys: &CoxeterSystem) -> Result<IssReport> {
    let (t, classes) = enumerate_classes(sys)?;
    let max_len = (sys.longest_length() + sys.rank()) as u32;
    greedy_triangular(GradedStream::new(&t, &classes, max_len, DEFAULT_BUDGET), sys, &classes)
}

/// NSS from maximal parabolics plus CSS from minimal lengths and tie words.
pub fn pipeline_iss(sys: &CoxeterSystem, extended: bool) -> Result<IssReport> {
    let (t, classes) = enumerate_classes(sys)?;
    let budget = if extended { EXTENDED_BUDGET } else { DEFAULT_BUDGET };
    let nss = nss_from_parabolics(sys, &t, &classes, extended)?;
    let data = from_classes(sys, &t, &classes)?;
    let css = css_from_lengths(sys, &t, &classes, &data, &tie_words(&sys.type_spec()), budget)?;
    Ok(assemble_iss(sys, &classes, &nss, &css))
}

/// One half (or both) of an ISS split into non-cuspidal and cuspidal parts.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NssCssParts {
    pub non_cuspidal_order: Vec<usize>,
    pub nss_rows: Vec<SignatureVector>,
    pub cuspidal_order: Vec<usize>,
    pub css_rows: Vec<SignatureVector>,
}

impl NssCssParts {
    pub fn nss_signatures(&self) -> Vec<Vec<u32>> {
        self.nss_rows.iter().map(|v| v.alpha.clone()).collect()
    }

    pub fn css_signatures(&self) -> Vec<Vec<u32>> {
        self.css_rows.iter().map(|v| v.alpha.clone()).collect()
    }
}

/// Lift the ISS of each maximal parabolic by zero padding and keep, for each
/// non-cuspidal class, the first lift (parabolic order, then row order) whose
/// diagonal class fuses into it.
///
/// Every non-cuspidal class meets a maximal parabolic, and maximal parabolics
/// come first in `parabolic_subsets`, so restricting to them selects the same
/// lifts as running over all proper parabolics.
pub fn nss_from_parabolics(
    sys: &CoxeterSystem,
    t: &GroupTable,
    classes: &ClassTable,
    extended: bool,
) -> Result<NssCssParts> {
    let n = sys.rank();
    let mut seen = vec![false; classes.len()];
    let mut order = Vec::new();
    let mut sigs = Vec::new();
    let wanted = (0..classes.len()).filter(|&c| !classes.is_cuspidal(c)).count();
    for (j, sub) in sys.parabolic_subsets().into_iter().filter(|(j, _)| j.len() + 1 == n) {
        if order.len() == wanted {
            break;
        }
        let local = iss_for(&sub, extended)?;
        if !(local.triangular && local.diagonal_nonzero) {
            return Err(Error::Precondition(format!("parabolic {} ISS is not triangular", sub.type_spec())));
        }
        for (alpha, rep) in local.signatures.iter().zip(&local.class_reps) {
            let c = classes.class_of_word(t, &rep.map_letters(|l| j[l as usize] as u8));
            if classes.is_cuspidal(c) {
                return Err(Error::Precondition(format!("parabolic word {rep} fused into a cuspidal class")));
            }
            if seen[c] {
                continue;
            }
            seen[c] = true;
            order.push(c);
            let mut lifted = vec![0; n];
            for (p, &x) in alpha.iter().enumerate() {
                lifted[j[p]] = x;
            }
            sigs.push(lifted);
        }
    }
    if order.len() < wanted {
        return Err(Error::StreamExhausted {
            covered: order.len(),
            total: wanted,
            uncovered: (0..classes.len()).filter(|&c| !classes.is_cuspidal(c) && !seen[c]).map(|c| classes.name(c)).collect(),
        });
    }
    let nss_rows = signature_vectors(t, classes, &sigs, DEFAULT_BUDGET)?;
    Ok(NssCssParts { non_cuspidal_order: order, nss_rows, ..Default::default() })
}

/// CSS from minimal-length representatives. Classes of strictly larger
/// length than all earlier ones take the signature of their representative;
/// in a tie pair the designated tie word's class comes first, and its
/// signature is checked to miss the partner.
pub fn css_from_lengths(
    sys: &CoxeterSystem,
    t: &GroupTable,
    classes: &ClassTable,
    data: &[CuspidalDatum],
    ties: &[TieWord],
    budget: u128,
) -> Result<NssCssParts> {
    let n = sys.rank();
    let mut data = data.to_vec();
    data.sort_by_key(|d| d.gp_index);
    let mut ids = Vec::with_capacity(data.len());
    let mut reps = Vec::with_capacity(data.len());
    for d in &data {
        let w = d.rep_word.clone().ok_or_else(|| Error::MissingDatum(format!("{} has no representative", d.name)))?;
        let c = classes.class_of_word(t, &w);
        if !classes.is_cuspidal(c) {
            return Err(Error::Precondition(format!("{} is not cuspidal", d.name)));
        }
        ids.push(c);
        reps.push(w);
    }

    let mut order = Vec::new();
    let mut sigs = Vec::new();
    let mut checks = Vec::new();
    let mut k = 0;
    while k < data.len() {
        let mut e = k + 1;
        while e < data.len() && data[e].min_length == data[k].min_length {
            e += 1;
        }
        match e - k {
            1 => {
                sigs.push(reps[k].signature(n));
                order.push(ids[k]);
            }
            2 => {
                let (x, y) = (data[k].gp_index, data[k + 1].gp_index);
                let tie = ties
                    .iter()
                    .find(|tw| (tw.index, tw.partner) == (x, y) || (tw.index, tw.partner) == (y, x))
                    .ok_or_else(|| Error::MissingTieWord(format!("{} Cus{x}/Cus{y}", sys.type_spec())))?;
                let w = Word::parse(tie.word, n)?;
                let (own, partner) = if tie.index == x { (k, k + 1) } else { (k + 1, k) };
                if classes.class_of_word(t, &w) != ids[own] {
                    return Err(Error::Precondition(format!("tie word {} is not in Cus{}", tie.word, tie.index)));
                }
                sigs.push(w.signature(n));
                order.push(ids[own]);
                checks.push((sigs.len() - 1, ids[partner]));
                sigs.push(reps[partner].signature(n));
                order.push(ids[partner]);
            }
            m => {
                return Err(Error::Unsupported(format!(
                    "{m} cuspidal classes share minimal length {}",
                    data[k].min_length
                )))
            }
        }
        k = e;
    }
    let css_rows = signature_vectors(t, classes, &sigs, budget)?;
    for (row, partner) in checks {
        if !css_rows[row].entries[partner].is_zero() {
            return Err(Error::Precondition(format!(
                "tie signature {:?} meets the partner class {}",
                css_rows[row].alpha,
                classes.name(partner)
            )));
        }
    }
    Ok(NssCssParts { cuspidal_order: order, css_rows, ..Default::default() })
}

/// Non-cuspidal classes then cuspidal ones; NSS rows then CSS rows.
pub fn assemble_iss(sys: &CoxeterSystem, classes: &ClassTable, nss: &NssCssParts, css: &NssCssParts) -> IssReport {
    let order: Vec<usize> = nss.non_cuspidal_order.iter().chain(&css.cuspidal_order).copied().collect();
    let rows: Vec<SignatureVector> = nss.nss_rows.iter().chain(&css.css_rows).cloned().collect();
    IssReport::from_vectors(sys, classes, &rows, &order)
}

/// Outcome of recomputing a report from scratch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsmVerdict {
    pub rows: usize,
    pub classes: usize,
    pub recomputed_match: bool,
    pub triangular: bool,
    pub diagonal_nonzero: bool,
    pub determinant_nonzero: bool,
    pub failures: Vec<String>,
}

impl IsmVerdict {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Recompute every row, then check triangularity, the diagonal and the
/// determinant of the recomputed matrix.
pub fn verify_ism(report: &IssReport, t: &GroupTable, classes: &ClassTable, budget: u128) -> Result<IsmVerdict> {
    let r = classes.len();
    let mut failures = Vec::new();
    if report.len() != r {
        failures.push(format!("{} rows for {r} classes", report.len()));
    }
    let order = report.class_order(t, classes);
    let mut hit = vec![false; r];
    for &c in &order {
        if std::mem::replace(&mut hit[c], true) {
            failures.push(format!("class {} appears twice among the columns", classes.name(c)));
        }
    }
    if order.len() != r {
        failures.push(format!("{} columns for {r} classes", order.len()));
    }
    let vectors = signature_vectors(t, classes, &report.signatures, budget)?;
    let matrix: Vec<Vec<BigUint>> =
        vectors.iter().map(|v| order.iter().map(|&c| v.entries[c].clone()).collect()).collect();
    let recomputed_match = matrix == report.matrix;
    if !recomputed_match {
        failures.push("recomputed vectors differ from the reported matrix".into());
    }
    let check = IssReport::new(report.type_spec.clone(), report.rank, report.signatures.clone(), report.class_reps.clone(), matrix);
    if !check.triangular {
        failures.push("not lower triangular".into());
    }
    if !check.diagonal_nonzero {
        failures.push("zero on the diagonal".into());
    }
    let square = check.matrix.len() == check.class_reps.len();
    let determinant_nonzero = square && !bareiss_det(&check.matrix).is_zero();
    if !determinant_nonzero {
        failures.push("determinant is zero".into());
    }
    Ok(IsmVerdict {
        rows: report.len(),
        classes: r,
        recomputed_match,
        triangular: check.triangular,
        diagonal_nonzero: check.diagonal_nonzero,
        determinant_nonzero,
        failures,
    })
}

/// Fraction-free Gaussian elimination.
pub fn bareiss_det(m: &[Vec<BigUint>]) -> BigInt {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|x| BigInt::from(x.clone())).collect()).collect();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let d = if n == 0 { BigInt::one() } else { a[n - 1][n - 1].clone() };
    if negate {
        -d
    } else {
        d
    }
}

/// `α(μ)`: runs of `p−1` ones separated by single zeros, so every word is a
/// product of disjoint cycles of lengths `p₁, p₂, …`.
pub fn partition_signature(mu: &[u32]) -> Vec<u32> {
    let mut out = Vec::new();
    for (k, &p) in mu.iter().enumerate() {
        if k > 0 {
            out.push(0);
        }
        out.extend(std::iter::repeat(1).take(p.saturating_sub(1) as usize));
    }
    out
}

/// The ISS `α(μ)` over all partitions of `n`, on `A_{n−1}`.
pub fn partition_iss(n: u32) -> Result<IssReport> {
    if n < 2 {
        return Err(Error::InvalidPartition(format!("S{n} has no generators")));
    }
    let sys = CoxeterSystem::irreducible(CoxeterType::A(n as usize - 1));
    let (t, classes) = enumerate_classes(&sys)?;
    let alphas: Vec<Vec<u32>> = partitions(n).iter().map(|mu| partition_signature(mu)).collect();
    report_for_signatures(&sys, &t, &classes, &alphas)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(spec: &str) -> (CoxeterSystem, GroupTable, ClassTable) {
        let sys = CoxeterSystem::parse(spec).unwrap();
        let (t, c) = enumerate_classes(&sys).unwrap();
        (sys, t, c)
    }

    fn nums(v: &[u32]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn a2_greedy() {
        let r = greedy_iss(&CoxeterSystem::parse("A2").unwrap()).unwrap();
        assert_eq!(r.signatures, vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
        assert!(r.triangular && r.diagonal_nonzero);
        assert_eq!(r.class_names(), vec!["C(e)", "C(1)", "C(12)"]);
    }

    #[test]
    fn b2_greedy_ends_with_central_element() {
        let r = greedy_iss(&CoxeterSystem::parse("B2").unwrap()).unwrap();
        assert_eq!(r.len(), 5);
        assert_eq!(r.signatures.last().unwrap(), &vec![2, 2]);
        assert_eq!(r.class_reps.last().unwrap(), &Word::parse("1212", 2).unwrap());
        assert!(r.triangular && r.diagonal_nonzero);
    }

    #[test]
    fn a1_squared_product() {
        let a1 = greedy_iss(&CoxeterSystem::parse("A1").unwrap()).unwrap();
        let p = iss_direct_product(&a1, &a1);
        assert_eq!(p.signatures, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        let diag: Vec<BigUint> = (0..4).map(|i| p.matrix[i][i].clone()).collect();
        assert_eq!(diag, nums(&[1, 1, 1, 2]));
        let (_, t, c) = setup("A1xA1");
        assert!(verify_ism(&p, &t, &c, DEFAULT_BUDGET).unwrap().passed());
    }

    #[test]
    fn trivial_splice_is_identity() {
        let b2 = greedy_iss(&CoxeterSystem::parse("B2").unwrap()).unwrap();
        assert_eq!(iss_direct_product(&IssReport::trivial(), &b2), b2);
        assert_eq!(iss_direct_product(&b2, &IssReport::trivial()), b2);
    }

    #[test]
    fn h3_pipeline() {
        let (sys, t, c) = setup("H3");
        let nss = nss_from_parabolics(&sys, &t, &c, false).unwrap();
        assert_eq!(nss.non_cuspidal_order.len(), 6);
        for row in &nss.nss_rows {
            for k in c.cuspidal_classes() {
                assert!(row.entries[k].is_zero());
            }
        }
        let r = iss_for(&sys, false).unwrap();
        assert_eq!(r.len(), 10);
        assert!(r.triangular && r.diagonal_nonzero);
        assert!(verify_ism(&r, &t, &c, DEFAULT_BUDGET).unwrap().passed());
    }

    #[test]
    fn a2_through_parabolics() {
        let (sys, t, c) = setup("A2");
        let nss = nss_from_parabolics(&sys, &t, &c, false).unwrap();
        let names: Vec<String> = nss.non_cuspidal_order.iter().map(|&k| c.name(k)).collect();
        assert_eq!(names, vec!["C(e)", "C(1)"]);
        assert_eq!(nss.nss_signatures(), vec![vec![0, 0], vec![1, 0]]);
    }

    #[test]
    fn duplicated_row_fails() {
        let (sys, t, c) = setup("A2");
        let mut r = greedy_iss(&sys).unwrap();
        r.signatures[2] = r.signatures[1].clone();
        r.matrix[2] = r.matrix[1].clone();
        let v = verify_ism(&r, &t, &c, DEFAULT_BUDGET).unwrap();
        assert!(!v.passed());
        assert!(!v.determinant_nonzero);
    }

    #[test]
    fn relabeled_and_product_systems() {
        let sys = CoxeterSystem::parse("A1xB2").unwrap().relabel(&[1, 0, 2]).unwrap();
        let r = iss_for(&sys, false).unwrap();
        let (t, c) = enumerate_classes(&sys).unwrap();
        assert!(verify_ism(&r, &t, &c, DEFAULT_BUDGET).unwrap().passed());
    }

    #[test]
    fn partition_iss_is_diagonal() {
        let r = partition_iss(4).unwrap();
        assert_eq!(r.signatures[0], vec![1, 1, 1]);
        assert_eq!(r.signatures[2], vec![1, 0, 1]);
        let diag: Vec<BigUint> = (0..5).map(|i| r.matrix[i][i].clone()).collect();
        assert_eq!(diag, nums(&[6, 2, 2, 1, 1]));
        for (i, row) in r.matrix.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                assert!(i == j || x.is_zero());
            }
        }
    }

    #[test]
    fn determinant() {
        let m = vec![nums(&[2, 1, 0]), nums(&[1, 3, 1]), nums(&[0, 1, 4])];
        assert_eq!(bareiss_det(&m), BigInt::from(18));
        let m = vec![nums(&[0, 1]), nums(&[1, 0])];
        assert_eq!(bareiss_det(&m), BigInt::from(-1));
    }

    #[test]
    fn json_round_trip() {
        let r = greedy_iss(&CoxeterSystem::parse("B2").unwrap()).unwrap();
        let back = IssReport::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }
}
