//! Sparse exact polynomials: univariate in λ and multivariate in x₀..xₙ.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::quad::{QuadScalar, ScalarJson};
use crate::error::{Error, Result};

/// Polynomial in λ with ascending coefficients, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<QuadScalar>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<QuadScalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| QuadScalar::from_int(c)).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::from_ints(&[1])
    }

    /// `λ − r`.
    pub fn linear(r: QuadScalar) -> Self {
        Self::new(vec![-r, QuadScalar::one()])
    }

    pub fn coeffs(&self) -> &[QuadScalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn eval(&self, x: &QuadScalar) -> Result<QuadScalar> {
        let mut acc = QuadScalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.try_mul(x)?.try_add(c)?;
        }
        Ok(acc)
    }

    pub fn try_mul(&self, o: &UniPoly) -> Result<UniPoly> {
        if self.is_zero() || o.is_zero() {
            return Ok(UniPoly::zero());
        }
        let mut out = vec![QuadScalar::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].try_add(&a.try_mul(b)?)?;
            }
        }
        Ok(UniPoly::new(out))
    }

    pub fn pow(&self, e: u32) -> Result<UniPoly> {
        let mut acc = UniPoly::one();
        for _ in 0..e {
            acc = acc.try_mul(self)?;
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> Vec<ScalarJson> {
        self.coeffs.iter().map(QuadScalar::to_json).collect()
    }

    pub fn from_json(v: &[ScalarJson]) -> Result<Self> {
        Ok(Self::new(v.iter().map(QuadScalar::from_json).collect::<Result<_>>()?))
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => "λ".to_string(),
                _ => format!("λ^{k}"),
            };
            write_term(f, c, &mono, first)?;
            first = false;
        }
        Ok(())
    }
}

fn write_term<W: fmt::Write>(f: &mut W, c: &QuadScalar, mono: &str, first: bool) -> fmt::Result {
    let text = c.to_string();
    let compound = !c.is_rational() && !c.rational_part().is_zero();
    let body = if mono.is_empty() {
        if compound { format!("({text})") } else { text }
    } else if c.is_one() {
        mono.to_string()
    } else if (-c).is_one() {
        format!("-{mono}")
    } else if compound {
        format!("({text}){mono}")
    } else {
        format!("{text}{mono}")
    };
    if first || body.starts_with('-') {
        write!(f, "{body}")
    } else {
        write!(f, "+{body}")
    }
}

/// Integer product, or `None` on overflow.
fn mul_small(a: &BTreeMap<Monomial, i128>, b: &BTreeMap<Monomial, i128>) -> Option<BTreeMap<Monomial, i128>> {
    let mut acc: HashMap<Vec<u32>, i128> = HashMap::with_capacity(a.len() * b.len() / 4 + 1);
    for (m1, c1) in a {
        for (m2, c2) in b {
            let e = m1.0.iter().zip(&m2.0).map(|(x, y)| x + y).collect();
            let t = c1.checked_mul(*c2)?;
            let slot = acc.entry(e).or_insert(0);
            *slot = slot.checked_add(t)?;
        }
    }
    Some(acc.into_iter().filter(|(_, c)| *c != 0).map(|(e, c)| (Monomial(e), c)).collect())
}

/// Integer division by a divisor with unit leading coefficient: the outer
/// `None` is overflow, the inner one a nonzero remainder.
fn div_small(
    mut rem: BTreeMap<Monomial, i128>,
    d: &BTreeMap<Monomial, i128>,
    lm: &Monomial,
    unit: i128,
) -> Option<Option<BTreeMap<Monomial, i128>>> {
    let mut quot = BTreeMap::new();
    while let Some((rm, rc)) = rem.pop_last() {
        if !lm.divides(&rm) {
            return Some(None);
        }
        let e: Vec<u32> = rm.0.iter().zip(&lm.0).map(|(a, b)| a - b).collect();
        let q = rc.checked_mul(unit)?;
        for (m, c) in d.iter().rev().skip(1) {
            let key = Monomial(m.0.iter().zip(&e).map(|(a, b)| a + b).collect());
            let t = c.checked_mul(q)?;
            let slot = rem.entry(key.clone()).or_insert(0);
            *slot = slot.checked_sub(t)?;
            if *slot == 0 {
                rem.remove(&key);
            }
        }
        quot.insert(Monomial(e), q);
    }
    Some(Some(quot))
}

/// Exponent vector ordered graded-lexicographically (total degree first,
/// then x₀ dominating x₁ and so on).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in `arity` variables x₀..x_{arity−1}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    arity: usize,
    terms: BTreeMap<Monomial, QuadScalar>,
}

/// Wire form of one term.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exponents: Vec<u32>,
    pub coeff: ScalarJson,
}

impl MultiPoly {
    pub fn zero(arity: usize) -> Self {
        MultiPoly { arity, terms: BTreeMap::new() }
    }

    pub fn constant(arity: usize, c: QuadScalar) -> Self {
        Self::term(arity, vec![0; arity], c)
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, QuadScalar::one())
    }

    pub fn var(arity: usize, i: usize) -> Self {
        let mut e = vec![0; arity];
        e[i] = 1;
        Self::term(arity, e, QuadScalar::one())
    }

    pub fn term(arity: usize, exponents: Vec<u32>, c: QuadScalar) -> Self {
        assert_eq!(exponents.len(), arity, "exponent arity");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial(exponents), c);
        }
        MultiPoly { arity, terms }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().next().is_some_and(|(m, c)| m.degree() == 0 && c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &QuadScalar)> {
        self.terms.iter().rev().map(|(m, c)| (m.0.as_slice(), c))
    }

    pub fn coeff(&self, exponents: &[u32]) -> QuadScalar {
        self.terms.get(&Monomial(exponents.to_vec())).cloned().unwrap_or_default()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    fn check_arity(&self, o: &MultiPoly) -> Result<()> {
        if self.arity != o.arity {
            return Err(Error::DimensionMismatch(format!(
                "polynomial arity {} vs {}",
                self.arity, o.arity
            )));
        }
        Ok(())
    }

    fn add_term(&mut self, m: Monomial, c: QuadScalar) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = v.try_add(&c)?;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
        Ok(())
    }

    pub fn try_add(&self, o: &MultiPoly) -> Result<MultiPoly> {
        self.check_arity(o)?;
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn try_sub(&self, o: &MultiPoly) -> Result<MultiPoly> {
        self.try_add(&o.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &QuadScalar) -> Result<MultiPoly> {
        let mut out = MultiPoly::zero(self.arity);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.try_mul(k)?)?;
        }
        Ok(out)
    }

    pub fn try_mul(&self, o: &MultiPoly) -> Result<MultiPoly> {
        self.check_arity(o)?;
        if let (Some(a), Some(b)) = (self.small_ints(), o.small_ints()) {
            if let Some(p) = mul_small(&a, &b) {
                return Ok(MultiPoly::from_small(self.arity, p));
            }
        }
        let mut out = MultiPoly::zero(self.arity);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let e = m1.0.iter().zip(&m2.0).map(|(a, b)| a + b).collect();
                out.add_term(Monomial(e), c1.try_mul(c2)?)?;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<MultiPoly> {
        let mut acc = MultiPoly::one(self.arity);
        for _ in 0..e {
            acc = acc.try_mul(self)?;
        }
        Ok(acc)
    }

    fn leading(&self) -> Option<(&Monomial, &QuadScalar)> {
        self.terms.iter().next_back()
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &MultiPoly) -> Result<Option<MultiPoly>> {
        self.check_arity(d)?;
        let (lm, lc) = d.leading().ok_or(Error::DivisionByZero)?;
        let (lm, lc) = (lm.clone(), lc.clone());
        if let (Some(a), Some(b), Some(unit)) = (self.small_ints(), d.small_ints(), lc.to_i64()) {
            if unit.abs() == 1 {
                if let Some(q) = div_small(a, &b, &lm, unit as i128) {
                    return Ok(q.map(|q| MultiPoly::from_small(self.arity, q)));
                }
            }
        }
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero(self.arity);
        while let Some((rm, rc)) = rem.leading() {
            if !lm.divides(rm) {
                return Ok(None);
            }
            let e: Vec<u32> = rm.0.iter().zip(&lm.0).map(|(a, b)| a - b).collect();
            let q = rc.try_div(&lc)?;
            for (m, c) in &d.terms {
                let prod = m.0.iter().zip(&e).map(|(a, b)| a + b).collect();
                rem.add_term(Monomial(prod), -c.try_mul(&q)?)?;
            }
            quot.add_term(Monomial(e), q)?;
        }
        Ok(Some(quot))
    }

    /// Coefficients as machine integers, when they all are.
    fn small_ints(&self) -> Option<BTreeMap<Monomial, i128>> {
        self.terms.iter().map(|(m, c)| c.to_i64().map(|k| (m.clone(), k as i128))).collect()
    }

    fn from_small(arity: usize, terms: BTreeMap<Monomial, i128>) -> MultiPoly {
        let terms = terms
            .into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|(m, c)| (m, QuadScalar::from_bigint(c.into())))
            .collect();
        MultiPoly { arity, terms }
    }

    /// Substitute `x_var := value`, keeping the arity.
    pub fn substitute(&self, var: usize, value: &QuadScalar) -> Result<MultiPoly> {
        let mut out = MultiPoly::zero(self.arity);
        for (m, c) in &self.terms {
            let k = m.0[var];
            let mut e = m.0.clone();
            e[var] = 0;
            out.add_term(Monomial(e), c.try_mul(&value.pow(k))?)?;
        }
        Ok(out)
    }

    /// Keep only the listed variables, in the listed order. Fails if a
    /// dropped variable still occurs.
    pub fn project(&self, keep: &[usize]) -> Result<MultiPoly> {
        let mut out = MultiPoly::zero(keep.len());
        for (m, c) in &self.terms {
            let live: u32 = keep.iter().map(|&i| m.0[i]).sum();
            if live != m.degree() {
                return Err(Error::Precondition("dropped variable still occurs".into()));
            }
            out.add_term(Monomial(keep.iter().map(|&i| m.0[i]).collect()), c.clone())?;
        }
        Ok(out)
    }

    /// Evaluate at a point.
    pub fn eval(&self, point: &[QuadScalar]) -> Result<QuadScalar> {
        let mut acc = QuadScalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(&m.0) {
                t = t.try_mul(&x.pow(k))?;
            }
            acc = acc.try_add(&t)?;
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> Vec<TermJson> {
        self.terms()
            .map(|(e, c)| TermJson { exponents: e.to_vec(), coeff: c.to_json() })
            .collect()
    }

    pub fn from_json(terms: &[TermJson]) -> Result<MultiPoly> {
        let arity = terms
            .first()
            .map(|t| t.exponents.len())
            .ok_or_else(|| Error::Format("polynomial without terms has no arity".into()))?;
        let mut out = MultiPoly::zero(arity);
        for t in terms {
            if t.exponents.len() != arity {
                return Err(Error::Format("terms of unequal arity".into()));
            }
            out.add_term(Monomial(t.exponents.clone()), QuadScalar::from_json(&t.coeff)?)?;
        }
        Ok(out)
    }

    pub fn to_latex(&self) -> String {
        self.render(|i, k| {
            if k == 1 { format!("x_{{{i}}}") } else { format!("x_{{{i}}}^{{{k}}}") }
        }, "")
    }

    fn render(&self, var: impl Fn(usize, u32) -> String, sep: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (idx, (e, c)) in self.terms().enumerate() {
            let mono: Vec<String> =
                e.iter().enumerate().filter(|(_, &k)| k > 0).map(|(i, &k)| var(i, k)).collect();
            let mono = mono.join(sep);
            let _ = write_term(&mut s, c, &mono, idx == 0);
        }
        s
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.render(|i, k| if k == 1 { format!("x{i}") } else { format!("x{i}^{k}") }, "*");
        write!(f, "{s}")
    }
}
