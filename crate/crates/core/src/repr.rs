//! Matrix representations of Coxeter groups and their multivariate
//! characteristic polynomials `d(S,ρ) = det[x₀I + x₁ρ(s₁) + ⋯ + xₙρ(sₙ)]`.

use std::collections::HashMap;
use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::combinat::partitions;
use crate::conjugacy::enumerate_classes;
use crate::coxeter::{CoxeterSystem, CoxeterType, GroupTable, ReflectionRep, Word};
use crate::error::{Error, Result};
use crate::exact::{poly_det, Matrix, MultiPoly, QuadField, QuadScalar, ScalarJson};
use crate::iss::{iss_for, verify_ism};
use crate::signatures::DEFAULT_BUDGET;

/// One matrix per generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    pub name: String,
    pub degree: usize,
    pub matrices: Vec<Matrix>,
}

impl Representation {
    pub fn new(name: impl Into<String>, matrices: Vec<Matrix>) -> Result<Representation> {
        let degree = matrices.first().map_or(0, Matrix::rows);
        for m in &matrices {
            if m.rows() != degree || m.cols() != degree {
                return Err(Error::InvalidRepresentation(format!(
                    "generator matrix is {}x{}, expected {degree}x{degree}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(Representation { name: name.into(), degree, matrices })
    }

    /// Every generator acts as `c`.
    pub fn scalar(name: &str, rank: usize, c: i64) -> Representation {
        let m = Matrix::from_ints(&[&[c]]);
        Representation { name: name.into(), degree: 1, matrices: vec![m; rank] }
    }

    pub fn trivial(rank: usize) -> Representation {
        Representation::scalar("trivial", rank, 1)
    }

    pub fn sign(rank: usize) -> Representation {
        Representation::scalar("sign", rank, -1)
    }

    pub fn rank(&self) -> usize {
        self.matrices.len()
    }

    /// Check `ρ(sᵢ)² = I` and `(ρ(sᵢ)ρ(sⱼ))^{mᵢⱼ} = I`.
    pub fn validate(&self, sys: &CoxeterSystem) -> Result<()> {
        if self.rank() != sys.rank() {
            return Err(Error::InvalidRepresentation(format!(
                "{} generators for a rank {} system",
                self.rank(),
                sys.rank()
            )));
        }
        for i in 0..self.rank() {
            for j in i..self.rank() {
                let p = self.matrices[i].try_mul(&self.matrices[j])?;
                let m = if i == j { 1 } else { sys.m(i, j) };
                if !p.pow(m)?.is_identity() {
                    return Err(Error::InvalidRepresentation(format!(
                        "{}: relation of order {m} fails for generators {} and {}",
                        self.name,
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn word_matrix(&self, w: &Word) -> Result<Matrix> {
        w.letters().iter().try_fold(Matrix::identity(self.degree), |acc, &l| acc.try_mul(&self.matrices[l as usize]))
    }

    pub fn character(&self, w: &Word) -> Result<QuadScalar> {
        self.word_matrix(w)?.trace()
    }

    pub fn direct_sum(&self, o: &Representation) -> Result<Representation> {
        if self.rank() != o.rank() {
            return Err(Error::DimensionMismatch("direct sum of representations of different rank".into()));
        }
        let matrices = self.matrices.iter().zip(&o.matrices).map(|(a, b)| a.direct_sum(b)).collect();
        Ok(Representation { name: format!("{}+{}", self.name, o.name), degree: self.degree + o.degree, matrices })
    }

    /// `P ρ P⁻¹`.
    pub fn conjugate(&self, p: &Matrix) -> Result<Representation> {
        let inv = p.inverse()?;
        let matrices = self.matrices.iter().map(|m| p.try_mul(m)?.try_mul(&inv)).collect::<Result<Vec<_>>>()?;
        Ok(Representation { matrices, ..self.clone() })
    }

    pub fn to_json(&self) -> RepresentationJson {
        RepresentationJson {
            degree: self.degree,
            generators: self.matrices.iter().map(|m| m.data().iter().map(|x| ScalarIn::Full(x.to_json())).collect()).collect(),
        }
    }

    pub fn from_json(name: &str, j: &RepresentationJson) -> Result<Representation> {
        let matrices = j
            .generators
            .iter()
            .map(|g| {
                let data = g.iter().map(ScalarIn::to_scalar).collect::<Result<Vec<_>>>()?;
                Matrix::new(j.degree, j.degree, data)
            })
            .collect::<Result<Vec<_>>>()?;
        let r = Representation::new(name, matrices)?;
        if r.degree != j.degree && !r.matrices.is_empty() {
            return Err(Error::InvalidRepresentation("degree does not match the matrices".into()));
        }
        Ok(Representation { degree: j.degree, ..r })
    }

    pub fn load(path: &Path) -> Result<Representation> {
        let text = std::fs::read_to_string(path)?;
        let j: RepresentationJson = serde_json::from_str(&text)?;
        Representation::from_json(&path.display().to_string(), &j)
    }
}

/// Representation file: `{degree, generators: [[row-major scalars]]}`.
/// Scalars are integers, `"p/q"` strings, or full scalar objects.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentationJson {
    pub degree: usize,
    pub generators: Vec<Vec<ScalarIn>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarIn {
    Int(i64),
    Text(String),
    Full(ScalarJson),
}

impl ScalarIn {
    fn to_scalar(&self) -> Result<QuadScalar> {
        match self {
            ScalarIn::Int(n) => Ok(QuadScalar::from_int(*n)),
            ScalarIn::Text(s) => s
                .trim()
                .parse::<BigRational>()
                .map(QuadScalar::from_rational)
                .map_err(|_| Error::Format(format!("bad scalar {s:?}"))),
            ScalarIn::Full(j) => QuadScalar::from_json(j),
        }
    }
}

/// `det(Σₖ xₖ Mₖ)` in `family.len()` variables.
pub fn linear_det(family: &[Matrix]) -> Result<MultiPoly> {
    let arity = family.len();
    let n = family.first().map_or(0, Matrix::rows);
    let mut entries = vec![vec![MultiPoly::zero(arity); n]; n];
    for (k, m) in family.iter().enumerate() {
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch("matrices of unequal size".into()));
        }
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                let c = m.get(i, j);
                if !c.is_zero() {
                    *e = e.try_add(&MultiPoly::term(arity, unit(arity, k), c.clone()))?;
                }
            }
        }
    }
    poly_det(&entries)
}

fn unit(arity: usize, k: usize) -> Vec<u32> {
    let mut e = vec![0; arity];
    e[k] = 1;
    e
}

pub fn d_poly(rep: &Representation) -> Result<MultiPoly> {
    let mut family = vec![Matrix::identity(rep.degree)];
    family.extend(rep.matrices.iter().cloned());
    linear_det(&family)
}

/// `d` with `x₀ := 1`.
pub fn d_tilde(rep: &Representation) -> Result<MultiPoly> {
    d_poly(rep)?.substitute(0, &QuadScalar::one())
}

pub fn reflection_rep(sys: &CoxeterSystem) -> Result<Representation> {
    Representation::new("reflection", ReflectionRep::new(sys)?.generator_matrices())
}

/// Row index of each entry `0..n`; two tableaux with the same rows give the
/// same tabloid.
type Tabloid = Vec<u8>;

fn check_partition(lambda: &[u32]) -> Result<u32> {
    if lambda.is_empty() || lambda.contains(&0) || lambda.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidPartition(format!("{lambda:?} is not a weakly decreasing list of positive parts")));
    }
    Ok(lambda.iter().sum())
}

fn standard_tableaux(lambda: &[u32]) -> Vec<Vec<Vec<u8>>> {
    let n: u32 = lambda.iter().sum();
    fn rec(k: u8, n: u8, lambda: &[u32], t: &mut Vec<Vec<u8>>, out: &mut Vec<Vec<Vec<u8>>>) {
        if k == n {
            out.push(t.clone());
            return;
        }
        for r in 0..lambda.len() {
            let len = t[r].len();
            if len < lambda[r] as usize && (r == 0 || t[r - 1].len() > len) {
                t[r].push(k);
                rec(k + 1, n, lambda, t, out);
                t[r].pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(0, n as u8, lambda, &mut vec![Vec::new(); lambda.len()], &mut out);
    out
}

fn tabloid_of(t: &[Vec<u8>], n: usize) -> Tabloid {
    let mut rows = vec![0u8; n];
    for (r, row) in t.iter().enumerate() {
        for &x in row {
            rows[x as usize] = r as u8;
        }
    }
    rows
}

/// `e_t = Σ_{σ ∈ C_t} sgn(σ)·{σt}` over the column stabilizer of `t`.
fn polytabloid(t: &[Vec<u8>], n: usize) -> HashMap<Tabloid, i64> {
    let width = t.first().map_or(0, Vec::len);
    let columns: Vec<Vec<u8>> =
        (0..width).map(|j| t.iter().filter(|row| row.len() > j).map(|row| row[j]).collect()).collect();
    let base = tabloid_of(t, n);
    let mut out: HashMap<Tabloid, i64> = HashMap::new();
    // one permutation per column, combined as a mixed-radix odometer
    let perms: Vec<Vec<(Vec<u8>, i64)>> = columns.iter().map(|c| signed_permutations(c)).collect();
    let mut idx = vec![0usize; perms.len()];
    loop {
        let mut tab = base.clone();
        let mut sign = 1;
        for (col, (choices, &pick)) in columns.iter().zip(perms.iter().zip(&idx)) {
            let (image, s) = &choices[pick];
            sign *= s;
            // σ moves col[p] to image[p], keeping its row
            for (from, to) in col.iter().zip(image) {
                tab[*to as usize] = base[*from as usize];
            }
        }
        *out.entry(tab).or_insert(0) += sign;
        let mut k = 0;
        while k < idx.len() {
            idx[k] += 1;
            if idx[k] < perms[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == idx.len() {
            break;
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

/// All rearrangements of `items` with their signs.
fn signed_permutations(items: &[u8]) -> Vec<(Vec<u8>, i64)> {
    let n = items.len();
    let mut idx: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    loop {
        let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| idx[i] > idx[j]).count();
        out.push((idx.iter().map(|&i| items[i]).collect(), if inversions % 2 == 0 { 1 } else { -1 }));
        if !crate::combinat::next_permutation(&mut idx) {
            return out;
        }
    }
}

/// Young's natural representation on standard polytabloids. The matrix of
/// `sᵢ` expresses `sᵢ·e_t = e_{sᵢt}` in the standard basis, solved exactly
/// on the standard tabloids, where the basis is unitriangular.
pub fn young_natural(lambda: &[u32]) -> Result<Representation> {
    let n = check_partition(lambda)? as usize;
    let name = format!("({})", lambda.iter().map(u32::to_string).collect::<Vec<_>>().join(","));
    let tabs = standard_tableaux(lambda);
    let f = tabs.len();
    let basis: Vec<HashMap<Tabloid, i64>> = tabs.iter().map(|t| polytabloid(t, n)).collect();
    let keys: Vec<Tabloid> = tabs.iter().map(|t| tabloid_of(t, n)).collect();
    let restrict = |v: &HashMap<Tabloid, i64>| -> Vec<QuadScalar> {
        keys.iter().map(|k| QuadScalar::from_int(v.get(k).copied().unwrap_or(0))).collect()
    };
    let mut s = Matrix::zeros(f, f);
    for (k, b) in basis.iter().enumerate() {
        for (j, x) in restrict(b).into_iter().enumerate() {
            s.set(j, k, x);
        }
    }
    let s_inv = s.inverse()?;
    let mut matrices = Vec::with_capacity(n.saturating_sub(1));
    for i in 0..n.saturating_sub(1) as u8 {
        let mut m = Matrix::zeros(f, f);
        for (k, t) in tabs.iter().enumerate() {
            let moved: Vec<Vec<u8>> = t
                .iter()
                .map(|row| row.iter().map(|&x| if x == i { i + 1 } else if x == i + 1 { i } else { x }).collect())
                .collect();
            let v = polytabloid(&moved, n);
            let rhs = Matrix::new(f, 1, restrict(&v))?;
            let x = s_inv.try_mul(&rhs)?;
            // the solution must reproduce v on every tabloid, not only the standard ones
            let mut check: HashMap<Tabloid, QuadScalar> = HashMap::new();
            for (c, b) in basis.iter().enumerate() {
                let coeff = x.get(c, 0);
                for (tab, &val) in b {
                    let e = check.entry(tab.clone()).or_default();
                    *e = e.try_add(&coeff.scale_int(val))?;
                }
            }
            check.retain(|_, val| !val.is_zero());
            let expect: HashMap<Tabloid, QuadScalar> = v.iter().map(|(t, &c)| (t.clone(), QuadScalar::from_int(c))).collect();
            if check != expect {
                return Err(Error::InvalidRepresentation(format!("straightening failed for {name}")));
            }
            for c in 0..f {
                m.set(c, k, x.get(c, 0).clone());
            }
        }
        matrices.push(m);
    }
    if n == 1 {
        return Ok(Representation { name, degree: 1, matrices: vec![] });
    }
    Representation::new(name, matrices)
}

/// `cos(2πk/m)` when it lies in Q, Q(√2) or Q(√5).
fn cos_two_pi(k: u32, m: u32) -> Option<QuadScalar> {
    let g = k.gcd(&m).max(1);
    let (k, m) = (k / g % (m / g).max(1), m / g);
    let q = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
    let quad = |a: (i64, i64), b: (i64, i64), field| QuadScalar::new(q(a.0, a.1), q(b.0, b.1), field).ok();
    let k = k.min(m - k.min(m));
    match (m, k) {
        (1, _) => Some(QuadScalar::one()),
        (2, _) => Some(QuadScalar::from_int(-1)),
        (3, _) => Some(QuadScalar::from_ratio(-1, 2)),
        (4, _) => Some(QuadScalar::zero()),
        (6, _) => Some(QuadScalar::from_ratio(1, 2)),
        (5, 1) => quad((-1, 4), (1, 4), QuadField::Sqrt5),
        (5, 2) => quad((-1, 4), (-1, 4), QuadField::Sqrt5),
        (8, 1) => quad((0, 1), (1, 2), QuadField::Sqrt2),
        (8, 3) => quad((0, 1), (-1, 2), QuadField::Sqrt2),
        (10, 1) => quad((1, 4), (1, 4), QuadField::Sqrt5),
        (10, 3) => quad((1, 4), (-1, 4), QuadField::Sqrt5),
        _ => None,
    }
}

/// All irreducibles of `I₂(m)`: the degree-1 characters and, for
/// `1 ≤ k < m/2`, `s₁ ↦ [[-1,1],[0,1]]`, `s₂ ↦ [[1,0],[b,-1]]` with
/// `b = 2 + 2cos(2πk/m)`, so that `s₁s₂` has trace `2cos(2πk/m)`.
pub fn dihedral_catalog(m: u32) -> Result<Vec<Representation>> {
    if m < 2 {
        return Err(Error::Unsupported(format!("dihedral order {m}")));
    }
    let mut out = vec![Representation::trivial(2), Representation::sign(2)];
    if m % 2 == 0 {
        let mixed = |name: &str, a: i64, b: i64| Representation {
            name: name.into(),
            degree: 1,
            matrices: vec![Matrix::from_ints(&[&[a]]), Matrix::from_ints(&[&[b]])],
        };
        out.push(mixed("eps12", -1, 1));
        out.push(mixed("eps21", 1, -1));
    }
    for k in 1..m.div_ceil(2) {
        let c = cos_two_pi(k, m).ok_or_else(|| {
            Error::Unsupported(format!("I2({m}) needs cos(2π·{k}/{m}) outside Q(√2), Q(√5)"))
        })?;
        let b = QuadScalar::from_int(2).try_add(&c.scale_int(2))?;
        let s1 = Matrix::from_ints(&[&[-1, 1], &[0, 1]]);
        let s2 = Matrix::from_rows(vec![vec![QuadScalar::one(), QuadScalar::zero()], vec![b, QuadScalar::from_int(-1)]])?;
        out.push(Representation::new(format!("rho{k}"), vec![s1, s2])?);
    }
    Ok(out)
}

/// Left-regular permutation matrices of every element, indexed by element id.
pub fn regular_matrices(t: &GroupTable) -> Result<Vec<Matrix>> {
    let n = t.order();
    if n > 12 {
        return Err(Error::RegularTooLarge(n));
    }
    Ok((0..n as u32)
        .map(|g| {
            let mut m = Matrix::zeros(n, n);
            for h in 0..n as u32 {
                m.set(t.mul(g, h) as usize, h as usize, QuadScalar::one());
            }
            m
        })
        .collect())
}

/// `ρ(g)` for every element id.
pub fn element_matrices(rep: &Representation, t: &GroupTable) -> Result<Vec<Matrix>> {
    (0..t.order() as u32).map(|g| rep.word_matrix(&t.reduced_word(g))).collect()
}

/// The group determinant `det(Σ_g x_g λ(g))`, one variable per element id
/// (x₀ is the identity).
pub fn group_determinant(t: &GroupTable) -> Result<MultiPoly> {
    linear_det(&regular_matrices(t)?)
}

/// Irreducibles with their polynomials, sorted by degree (stable).
#[derive(Clone, Debug)]
pub struct PolyCatalog {
    pub type_spec: String,
    pub entries: Vec<(Representation, MultiPoly)>,
    /// Whether `Σ deg² = |W|`, i.e. every irreducible is present.
    pub complete: bool,
}

impl PolyCatalog {
    pub fn new(sys: &CoxeterSystem, reps: Vec<Representation>) -> Result<PolyCatalog> {
        let mut entries = Vec::with_capacity(reps.len());
        for r in reps {
            r.validate(sys)?;
            let d = d_poly(&r)?;
            entries.push((r, d));
        }
        entries.sort_by_key(|(r, _)| r.degree);
        let squares: u128 = entries.iter().map(|(r, _)| (r.degree * r.degree) as u128).sum();
        Ok(PolyCatalog { type_spec: sys.type_spec(), entries, complete: squares == sys.order() })
    }

    pub fn names(&self) -> Vec<String> {
        self.entries.iter().map(|(r, _)| r.name.clone()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&(Representation, MultiPoly)> {
        self.entries.iter().find(|(r, _)| r.name == name)
    }

    /// Pairs of entries with equal polynomials.
    pub fn duplicates(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for (i, (a, p)) in self.entries.iter().enumerate() {
            for (b, q) in &self.entries[i + 1..] {
                if p == q {
                    out.push((a.name.clone(), b.name.clone()));
                }
            }
        }
        out
    }

    /// Multiplicities `kᵢ` with `p = Π dᵢ^{kᵢ}`, catalog order, zero entries
    /// dropped. Trial division in catalog order, backtracking if a branch
    /// strands a remainder.
    pub fn decompose(&self, p: &MultiPoly) -> Result<Vec<(String, u32)>> {
        if let Some((_, d)) = self.entries.first() {
            if d.arity() != p.arity() {
                return Err(Error::DimensionMismatch(format!(
                    "polynomial in {} variables, catalog in {}",
                    p.arity(),
                    d.arity()
                )));
            }
        }
        let mut mult = vec![0u32; self.entries.len()];
        let mut leftover = p.clone();
        if self.search(p, 0, &mut mult, &mut leftover)? {
            return Ok(self.entries.iter().zip(mult).filter(|(_, k)| *k > 0).map(|((r, _), k)| (r.name.clone(), k)).collect());
        }
        Err(Error::NotInSemigroup { terms: leftover.len() })
    }

    fn search(&self, p: &MultiPoly, start: usize, mult: &mut [u32], leftover: &mut MultiPoly) -> Result<bool> {
        if p.is_one() {
            return Ok(true);
        }
        if p.len() < leftover.len() {
            *leftover = p.clone();
        }
        for j in start..self.entries.len() {
            if let Some(q) = p.exact_div(&self.entries[j].1)? {
                mult[j] += 1;
                if self.search(&q, j, mult, leftover)? {
                    return Ok(true);
                }
                mult[j] -= 1;
            }
        }
        Ok(false)
    }
}

/// Built-in irreducibles: Young's natural representations for type A, the
/// dihedral list for rank-2 types, and otherwise trivial, sign and
/// reflection (a partial catalog).
pub fn catalog_for(sys: &CoxeterSystem) -> Result<PolyCatalog> {
    let reps = match sys.components() {
        [c] if c.nodes.iter().enumerate().all(|(p, &v)| p == v) => match c.kind {
            CoxeterType::A(n) => partitions(n as u32 + 1).iter().map(|mu| young_natural(mu)).collect::<Result<Vec<_>>>()?,
            CoxeterType::I2(m) => dihedral_catalog(m)?,
            CoxeterType::B(2) => dihedral_catalog(4)?,
            _ => partial_catalog(sys)?,
        },
        _ => partial_catalog(sys)?,
    };
    PolyCatalog::new(sys, reps)
}

fn partial_catalog(sys: &CoxeterSystem) -> Result<Vec<Representation>> {
    let mut reps = vec![Representation::trivial(sys.rank()), Representation::sign(sys.rank())];
    if let Ok(r) = reflection_rep(sys) {
        reps.push(r);
    }
    Ok(reps)
}

/// Parse `reflection|sign|trivial|young:3,1|file:<path>`.
pub fn rep_from_spec(sys: &CoxeterSystem, spec: &str) -> Result<Representation> {
    let rep = match spec {
        "reflection" => reflection_rep(sys)?,
        "sign" => Representation::sign(sys.rank()),
        "trivial" => Representation::trivial(sys.rank()),
        other => {
            if let Some(parts) = other.strip_prefix("young:") {
                let lambda = parts
                    .split(',')
                    .map(|p| p.trim().parse::<u32>().map_err(|_| Error::InvalidPartition(parts.into())))
                    .collect::<Result<Vec<_>>>()?;
                young_natural(&lambda)?
            } else if let Some(path) = other.strip_prefix("file:") {
                Representation::load(Path::new(path))?
            } else if let Some(name) = other.strip_prefix("dihedral:") {
                let m = match sys.components() {
                    [c] if c.kind.rank() == 2 => sys.m(0, 1),
                    _ => return Err(Error::Precondition("dihedral representations need a rank-2 type".into())),
                };
                dihedral_catalog(m)?
                    .into_iter()
                    .find(|r| r.name == name)
                    .ok_or_else(|| Error::Precondition(format!("no dihedral representation {name:?}")))?
            } else {
                return Err(Error::Precondition(format!("unknown representation {other:?}")));
            }
        }
    };
    rep.validate(sys)?;
    Ok(rep)
}

/// `d(T_m, ρ↓) = d(T_n, ρ)(x₀, …, x_{m−1}, 0, …, 0)`, dropping the dead variables.
pub fn restrict_poly(p: &MultiPoly, m: usize) -> Result<MultiPoly> {
    let n = p.arity();
    if m == 0 || m >= n {
        return Err(Error::Precondition(format!("restriction from S{n} to S{m} needs 1 <= m < n")));
    }
    let mut q = p.clone();
    for v in m..n {
        q = q.substitute(v, &QuadScalar::zero())?;
    }
    q.project(&(0..m).collect::<Vec<_>>())
}

/// Parse text such as `x0^2 - x1^2 + x1*x2` or `x_0^2-x_1^2+x_1x_2` with
/// integer or `p/q` coefficients.
pub fn parse_poly(text: &str, arity: usize) -> Result<MultiPoly> {
    let bad = |why: &str| Error::Format(format!("cannot parse polynomial {text:?}: {why}"));
    let s: String = text.chars().filter(|c| !c.is_whitespace() && *c != '{' && *c != '}').collect();
    let mut out = MultiPoly::zero(arity);
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let mut sign = 1i64;
        if bytes[i] == b'+' || bytes[i] == b'-' {
            sign = if bytes[i] == b'-' { -1 } else { 1 };
            i += 1;
        }
        let start = i;
        while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'/') {
            i += 1;
        }
        let mut coeff = if start == i {
            QuadScalar::one()
        } else {
            QuadScalar::from_rational(s[start..i].parse::<BigRational>().map_err(|_| bad("coefficient"))?)
        };
        if sign < 0 {
            coeff = -coeff;
        }
        let mut exps = vec![0u32; arity];
        while i < bytes.len() && (bytes[i] == b'x' || bytes[i] == b'*') {
            if bytes[i] == b'*' {
                i += 1;
                continue;
            }
            i += 1;
            if i < bytes.len() && bytes[i] == b'_' {
                i += 1;
            }
            let vs = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let v: usize = s[vs..i].parse().map_err(|_| bad("variable index"))?;
            if v >= arity {
                return Err(bad("variable index out of range"));
            }
            let mut k = 1;
            if i < bytes.len() && bytes[i] == b'^' {
                i += 1;
                let ks = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                k = s[ks..i].parse().map_err(|_| bad("exponent"))?;
            }
            exps[v] += k;
        }
        if i < bytes.len() && bytes[i] != b'+' && bytes[i] != b'-' {
            return Err(bad("unexpected character"));
        }
        out = out.try_add(&MultiPoly::term(arity, exps, coeff))?;
    }
    Ok(out)
}

/// Outcome of checking that polynomials separate the catalog.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MainTheoremReport {
    pub type_spec: String,
    pub catalog: Vec<String>,
    pub complete: bool,
    pub duplicates: Vec<(String, String)>,
    pub sums_checked: usize,
    pub sums_failed: Vec<String>,
    /// `None` when the ISS check was not requested or is unavailable.
    pub ism_invertible: Option<bool>,
}

impl MainTheoremReport {
    pub fn passed(&self) -> bool {
        self.duplicates.is_empty() && self.sums_failed.is_empty() && self.ism_invertible != Some(false)
    }
}

/// Distinctness of the catalog, unique recovery of `samples` random direct
/// sums (1 to 3 distinct irreducibles, multiplicities 1 to 3), and when
/// `check_iss` is set an invertible ISM for `sys`.
pub fn verify_main_theorem(
    sys: &CoxeterSystem,
    catalog: &PolyCatalog,
    samples: usize,
    seed: u64,
    check_iss: bool,
) -> Result<MainTheoremReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sums_failed = Vec::new();
    let len = catalog.entries.len();
    for _ in 0..samples {
        if len == 0 {
            break;
        }
        let k = rng.gen_range(1..=len.min(3));
        let mut picks: Vec<usize> = sample(&mut rng, len, k).into_vec();
        picks.sort_unstable();
        let mut expect = Vec::new();
        let mut sum: Option<Representation> = None;
        for &j in &picks {
            let times = rng.gen_range(1..=3u32);
            let r = &catalog.entries[j].0;
            for _ in 0..times {
                sum = Some(match sum {
                    None => r.clone(),
                    Some(s) => s.direct_sum(r)?,
                });
            }
            expect.push((r.name.clone(), times));
        }
        let sum = sum.expect("at least one summand");
        let label = expect.iter().map(|(n, k)| format!("{k}{n}")).collect::<Vec<_>>().join("+");
        match catalog.decompose(&d_poly(&sum)?) {
            Ok(got) if got == expect => {}
            Ok(got) => sums_failed.push(format!("{label} decomposed as {got:?}")),
            Err(e) => sums_failed.push(format!("{label}: {e}")),
        }
    }
    let ism_invertible = if check_iss {
        match iss_for(sys, false) {
            Ok(report) => {
                let (t, classes) = enumerate_classes(sys)?;
                Some(verify_ism(&report, &t, &classes, DEFAULT_BUDGET)?.passed())
            }
            Err(Error::Unsupported(_)) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    Ok(MainTheoremReport {
        type_spec: sys.type_spec(),
        catalog: catalog.names(),
        complete: catalog.complete,
        duplicates: catalog.duplicates(),
        sums_checked: samples,
        sums_failed,
        ism_invertible,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str, arity: usize) -> MultiPoly {
        parse_poly(text, arity).unwrap()
    }

    #[test]
    fn s3_table() {
        assert_eq!(d_poly(&young_natural(&[3]).unwrap()).unwrap(), p("x0+x1+x2", 3));
        assert_eq!(d_poly(&young_natural(&[1, 1, 1]).unwrap()).unwrap(), p("x0-x1-x2", 3));
        let r = young_natural(&[2, 1]).unwrap();
        assert_eq!(d_poly(&r).unwrap(), p("x_0^2-x_1^2-x_2^2+x_1x_2", 3));
        assert_eq!(d_tilde(&r).unwrap(), p("1-x1^2-x2^2+x1*x2", 3));
        let chi: Vec<i64> = ["", "1", "12"]
            .iter()
            .map(|w| r.character(&Word::parse(w, 2).unwrap()).unwrap().to_i64().unwrap())
            .collect();
        assert_eq!(chi, vec![2, 0, -1]);
    }

    #[test]
    fn young_matrices_satisfy_relations() {
        for n in 1..=5u32 {
            let sys = CoxeterSystem::parse(&format!("A{}", n.max(2) - 1)).unwrap();
            let mut squares = 0;
            for mu in partitions(n) {
                let r = young_natural(&mu).unwrap();
                squares += r.degree * r.degree;
                if n >= 2 {
                    r.validate(&sys).unwrap();
                }
                assert!(r.matrices.iter().flat_map(|m| m.data().iter()).all(|x| x.to_i64().is_some()));
            }
            assert_eq!(squares, (1..=n as usize).product::<usize>());
        }
        assert!(young_natural(&[1, 2]).is_err());
    }

    #[test]
    fn dihedral_catalogs() {
        for m in [3u32, 4, 5, 6, 8, 10] {
            let sys = CoxeterSystem::from_matrix(vec![vec![1, m], vec![m, 1]]).unwrap();
            let cat = dihedral_catalog(m).unwrap();
            let squares: usize = cat.iter().map(|r| r.degree * r.degree).sum();
            assert_eq!(squares, 2 * m as usize, "I2({m})");
            for r in &cat {
                r.validate(&sys).unwrap();
            }
            let pc = PolyCatalog::new(&sys, cat).unwrap();
            assert!(pc.complete);
            assert!(pc.duplicates().is_empty(), "I2({m})");
        }
        assert!(dihedral_catalog(7).is_err());
    }

    #[test]
    fn decomposition_and_restriction() {
        let sys = CoxeterSystem::parse("A2").unwrap();
        let cat = catalog_for(&sys).unwrap();
        let prod = p("x0+x1+x2", 3).try_mul(&p("x0-x1-x2", 3)).unwrap().try_mul(&p("x0^2-x1^2-x2^2+x1*x2", 3)).unwrap();
        let got = cat.decompose(&prod).unwrap();
        assert_eq!(got, vec![("(3)".to_string(), 1), ("(1,1,1)".to_string(), 1), ("(2,1)".to_string(), 1)]);
        assert!(matches!(cat.decompose(&p("x0+x1", 3)), Err(Error::NotInSemigroup { .. })));

        let r31 = d_poly(&young_natural(&[3, 1]).unwrap()).unwrap();
        let down = restrict_poly(&r31, 3).unwrap();
        assert_eq!(down, p("x0^3-x1^3-x2^3+x0^2x1+x0^2x2-x0x1^2-x0x2^2+x0x1x2", 3));
        assert_eq!(cat.decompose(&down).unwrap(), vec![("(3)".to_string(), 1), ("(2,1)".to_string(), 1)]);
        let r22 = d_poly(&young_natural(&[2, 2]).unwrap()).unwrap();
        assert_eq!(cat.decompose(&restrict_poly(&r22, 3).unwrap()).unwrap(), vec![("(2,1)".to_string(), 1)]);
    }

    #[test]
    fn regular_rep_of_small_groups() {
        let sys = CoxeterSystem::parse("A1").unwrap();
        let (t, _) = enumerate_classes(&sys).unwrap();
        assert_eq!(group_determinant(&t).unwrap(), p("x0^2-x1^2", 2));
        let sys = CoxeterSystem::parse("A2").unwrap();
        let (t, _) = enumerate_classes(&sys).unwrap();
        let big = group_determinant(&t).unwrap();
        assert_eq!(big.total_degree(), Some(6));
        let mut prod = MultiPoly::one(6);
        for mu in partitions(3) {
            let r = young_natural(&mu).unwrap();
            let d = linear_det(&element_matrices(&r, &t).unwrap()).unwrap();
            prod = prod.try_mul(&d.pow(r.degree as u32).unwrap()).unwrap();
        }
        assert_eq!(big, prod);
        let sys = CoxeterSystem::parse("A3").unwrap();
        let (t, _) = enumerate_classes(&sys).unwrap();
        assert!(matches!(group_determinant(&t), Err(Error::RegularTooLarge(24))));
    }

    #[test]
    fn reflection_and_scalars() {
        let sys = CoxeterSystem::parse("B3").unwrap();
        let r = reflection_rep(&sys).unwrap();
        assert_eq!(r.degree, 3);
        assert_eq!(r.character(&Word::empty()).unwrap(), QuadScalar::from_int(3));
        r.validate(&sys).unwrap();
        assert_eq!(d_poly(&Representation::trivial(3)).unwrap(), p("x0+x1+x2+x3", 4));
    }

    #[test]
    fn json_file_round_trip() {
        let r = young_natural(&[2, 1]).unwrap();
        let back = Representation::from_json("(2,1)", &r.to_json()).unwrap();
        assert_eq!(back, r);
        let j: RepresentationJson = serde_json::from_str(r#"{"degree":1,"generators":[[-1],["-1/1"]]}"#).unwrap();
        let s = Representation::from_json("s", &j).unwrap();
        assert_eq!(s, Representation { name: "s".into(), ..Representation::sign(2) });
    }

    #[test]
    fn main_theorem_small() {
        let sys = CoxeterSystem::parse("A3").unwrap();
        let cat = catalog_for(&sys).unwrap();
        let rep = verify_main_theorem(&sys, &cat, 10, 7, true).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert!(rep.complete);
    }
}
