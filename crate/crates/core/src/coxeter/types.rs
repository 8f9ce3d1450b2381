//! Finite Coxeter types, Coxeter matrices and their recognition.

use std::fmt;

use crate::error::{Error, Result};

/// An irreducible finite Coxeter type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoxeterType {
    A(usize),
    B(usize),
    D(usize),
    E(usize),
    F4,
    H(usize),
    I2(u32),
}

impl CoxeterType {
    pub fn rank(self) -> usize {
        match self {
            CoxeterType::A(n) | CoxeterType::B(n) | CoxeterType::D(n) => n,
            CoxeterType::E(n) | CoxeterType::H(n) => n,
            CoxeterType::F4 => 4,
            CoxeterType::I2(_) => 2,
        }
    }

    /// True for E, F and H; these take the parabolic pipeline.
    pub fn is_exceptional(self) -> bool {
        matches!(self, CoxeterType::E(_) | CoxeterType::F4 | CoxeterType::H(_))
    }

    pub fn order(self) -> u128 {
        let fact = |n: usize| (1..=n as u128).product::<u128>();
        match self {
            CoxeterType::A(n) => fact(n + 1),
            CoxeterType::B(n) => (1u128 << n) * fact(n),
            CoxeterType::D(n) => (1u128 << (n - 1)) * fact(n),
            CoxeterType::E(6) => 51_840,
            CoxeterType::E(7) => 2_903_040,
            CoxeterType::E(_) => 696_729_600,
            CoxeterType::F4 => 1152,
            CoxeterType::H(3) => 120,
            CoxeterType::H(_) => 14_400,
            CoxeterType::I2(m) => 2 * m as u128,
        }
    }

    /// Edges `(i, j, m_ij)` of the diagram, 0-based, in canonical numbering.
    fn edges(self) -> Vec<(usize, usize, u32)> {
        let path = |n: usize| (0..n.saturating_sub(1)).map(|i| (i, i + 1, 3)).collect::<Vec<_>>();
        match self {
            CoxeterType::A(n) => path(n),
            CoxeterType::B(n) => {
                let mut e = path(n);
                e[n - 2].2 = 4;
                e
            }
            CoxeterType::D(n) => {
                let mut e = path(n - 1);
                e.push((n - 3, n - 1, 3));
                e
            }
            CoxeterType::E(n) => {
                let mut e = vec![(0, 2, 3), (1, 3, 3)];
                e.extend((2..n - 1).map(|i| (i, i + 1, 3)));
                e
            }
            CoxeterType::F4 => vec![(0, 1, 3), (1, 2, 4), (2, 3, 3)],
            CoxeterType::H(n) => {
                let mut e = path(n);
                e[0].2 = 5;
                e
            }
            CoxeterType::I2(m) => vec![(0, 1, m)],
        }
    }

    pub fn coxeter_matrix(self) -> Vec<Vec<u32>> {
        let n = self.rank();
        let mut m = vec![vec![2; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        for (i, j, w) in self.edges() {
            m[i][j] = w;
            m[j][i] = w;
        }
        m
    }

    /// Length of the longest element, i.e. the number of positive roots.
    pub fn longest_length(self) -> usize {
        match self {
            CoxeterType::A(n) => n * (n + 1) / 2,
            CoxeterType::B(n) => n * n,
            CoxeterType::D(n) => n * (n - 1),
            CoxeterType::E(6) => 36,
            CoxeterType::E(7) => 63,
            CoxeterType::E(_) => 120,
            CoxeterType::F4 => 24,
            CoxeterType::H(3) => 15,
            CoxeterType::H(_) => 60,
            CoxeterType::I2(m) => m as usize,
        }
    }

    fn parse_atom(atom: &str, spec: &str) -> Result<CoxeterType> {
        let err = |reason: &str| Error::TypeParse { spec: spec.to_string(), reason: reason.into() };
        if let Some(rest) = atom.strip_prefix("I2(") {
            let m: u32 = rest
                .strip_suffix(')')
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| err("expected I2(m)"))?;
            if m < 5 {
                return Err(err("I2(m) needs m >= 5; use A1xA1, A2 or B2"));
            }
            return Ok(CoxeterType::I2(m));
        }
        let mut chars = atom.chars();
        let letter = chars.next().ok_or_else(|| err("empty atom"))?;
        let n: usize = chars.as_str().parse().map_err(|_| err(&format!("bad atom {atom:?}")))?;
        let t = match (letter, n) {
            ('A', n) if n >= 1 => CoxeterType::A(n),
            ('B', n) if n >= 2 => CoxeterType::B(n),
            ('D', n) if n >= 4 => CoxeterType::D(n),
            ('E', 6..=8) => CoxeterType::E(n),
            ('F', 4) => CoxeterType::F4,
            ('H', 3 | 4) => CoxeterType::H(n),
            ('A' | 'B' | 'D' | 'E' | 'F' | 'H', _) => {
                return Err(err(&format!("no finite type {atom}")));
            }
            _ => return Err(err(&format!("unknown atom {atom:?}"))),
        };
        if t.rank() > 64 {
            return Err(err("rank above 64 is not supported"));
        }
        Ok(t)
    }
}

impl fmt::Display for CoxeterType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoxeterType::A(n) => write!(f, "A{n}"),
            CoxeterType::B(n) => write!(f, "B{n}"),
            CoxeterType::D(n) => write!(f, "D{n}"),
            CoxeterType::E(n) => write!(f, "E{n}"),
            CoxeterType::F4 => write!(f, "F4"),
            CoxeterType::H(n) => write!(f, "H{n}"),
            CoxeterType::I2(m) => write!(f, "I2({m})"),
        }
    }
}

/// One irreducible component. `nodes[k]` is the generator playing canonical
/// node `k` of the diagram.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Component {
    pub kind: CoxeterType,
    pub nodes: Vec<usize>,
}

/// A Coxeter matrix together with its decomposition into irreducible types.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoxeterSystem {
    matrix: Vec<Vec<u32>>,
    components: Vec<Component>,
}

impl CoxeterSystem {
    /// Parse `TYPE := ATOM ("x" ATOM)*`.
    pub fn parse(spec: &str) -> Result<CoxeterSystem> {
        let trimmed = spec.trim();
        if trimmed.is_empty() {
            return Err(Error::TypeParse { spec: spec.into(), reason: "empty".into() });
        }
        let mut sys = CoxeterSystem::trivial();
        for atom in trimmed.split('x') {
            let t = CoxeterType::parse_atom(atom.trim(), spec)?;
            sys = sys.direct_product(&CoxeterSystem::irreducible(t));
        }
        Ok(sys)
    }

    pub fn irreducible(t: CoxeterType) -> CoxeterSystem {
        CoxeterSystem {
            matrix: t.coxeter_matrix(),
            components: vec![Component { kind: t, nodes: (0..t.rank()).collect() }],
        }
    }

    pub fn trivial() -> CoxeterSystem {
        CoxeterSystem { matrix: vec![], components: vec![] }
    }

    /// Build from an arbitrary Coxeter matrix, recognizing every component.
    pub fn from_matrix(matrix: Vec<Vec<u32>>) -> Result<CoxeterSystem> {
        let n = matrix.len();
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidCoxeterMatrix("not square".into()));
            }
            if row[i] != 1 {
                return Err(Error::InvalidCoxeterMatrix(format!("m[{i}][{i}] != 1")));
            }
            for j in 0..n {
                if i != j && (row[j] < 2 || row[j] != matrix[j][i]) {
                    return Err(Error::InvalidCoxeterMatrix(format!(
                        "bad entry m[{i}][{j}] = {}",
                        row[j]
                    )));
                }
            }
        }
        let mut seen = vec![false; n];
        let mut components = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut k = 0;
            while k < comp.len() {
                let v = comp[k];
                for w in 0..n {
                    if !seen[w] && matrix[v][w] >= 3 {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
                k += 1;
            }
            comp.sort_unstable();
            components.push(recognize(&matrix, &comp)?);
        }
        Ok(CoxeterSystem { matrix, components })
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<u32>] {
        &self.matrix
    }

    pub fn m(&self, i: usize, j: usize) -> u32 {
        self.matrix[i][j]
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn is_irreducible(&self) -> bool {
        self.components.len() == 1
    }

    /// Canonical text form, e.g. `A1xB2`; the trivial system prints as `A0`.
    pub fn type_spec(&self) -> String {
        if self.components.is_empty() {
            return "A0".into();
        }
        self.components.iter().map(|c| c.kind.to_string()).collect::<Vec<_>>().join("x")
    }

    pub fn order(&self) -> u128 {
        self.components.iter().map(|c| c.kind.order()).fold(1u128, u128::saturating_mul)
    }

    pub fn longest_length(&self) -> usize {
        self.components.iter().map(|c| c.kind.longest_length()).sum()
    }

    /// Block-diagonal product; generators of `b` follow those of `a`.
    pub fn direct_product(&self, b: &CoxeterSystem) -> CoxeterSystem {
        let (na, nb) = (self.rank(), b.rank());
        let mut matrix = vec![vec![2; na + nb]; na + nb];
        for i in 0..na {
            for j in 0..na {
                matrix[i][j] = self.matrix[i][j];
            }
        }
        for i in 0..nb {
            for j in 0..nb {
                matrix[na + i][na + j] = b.matrix[i][j];
            }
        }
        let mut components = self.components.clone();
        components.extend(b.components.iter().map(|c| Component {
            kind: c.kind,
            nodes: c.nodes.iter().map(|&v| v + na).collect(),
        }));
        CoxeterSystem { matrix, components }
    }

    /// The system on generators `j` (in the given order).
    pub fn subsystem(&self, j: &[usize]) -> Result<CoxeterSystem> {
        let matrix = j.iter().map(|&a| j.iter().map(|&b| self.matrix[a][b]).collect()).collect();
        CoxeterSystem::from_matrix(matrix)
    }

    /// Renumber generators: new generator `i` is old generator `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<CoxeterSystem> {
        let n = self.rank();
        let mut check = perm.to_vec();
        check.sort_unstable();
        if check != (0..n).collect::<Vec<_>>() {
            return Err(Error::InvalidCoxeterMatrix(format!("{perm:?} is not a permutation")));
        }
        self.subsystem(perm)
    }

    /// All proper subsets `J` (size descending, then lexicographic) with the
    /// induced systems. Indices inside each subsystem follow `J`.
    pub fn parabolic_subsets(&self) -> Vec<(Vec<usize>, CoxeterSystem)> {
        let n = self.rank();
        let mut subsets: Vec<Vec<usize>> = (0u64..(1u64 << n))
            .filter(|&mask| mask.count_ones() as usize != n)
            .map(|mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect())
            .collect();
        subsets.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        subsets
            .into_iter()
            .map(|j| {
                let sub = self.subsystem(&j).expect("subsystems of finite systems are finite");
                (j, sub)
            })
            .collect()
    }
}

impl fmt::Display for CoxeterSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.type_spec())
    }
}

fn not_finite(matrix: &[Vec<u32>], comp: &[usize]) -> Error {
    let rows: Vec<String> = comp
        .iter()
        .map(|&a| comp.iter().map(|&b| matrix[a][b].to_string()).collect::<Vec<_>>().join(" "))
        .collect();
    Error::NotFinite(format!("component on generators {comp:?} with matrix [{}]", rows.join("; ")))
}

/// Identify the type of a connected component and a canonical node order.
/// Among orders realizing the canonical diagram the lexicographically
/// smallest is chosen, so the result is deterministic under automorphisms.
fn recognize(matrix: &[Vec<u32>], comp: &[usize]) -> Result<Component> {
    let k = comp.len();
    let adj = |v: usize| -> Vec<usize> {
        comp.iter().copied().filter(|&w| w != v && matrix[v][w] >= 3).collect()
    };
    let candidates: Vec<(CoxeterType, Vec<usize>)> = match k {
        1 => vec![(CoxeterType::A(1), comp.to_vec())],
        2 => {
            let t = match matrix[comp[0]][comp[1]] {
                3 => CoxeterType::A(2),
                4 => CoxeterType::B(2),
                m => CoxeterType::I2(m),
            };
            vec![(t, comp.to_vec())]
        }
        _ => {
            let edges: usize = comp.iter().map(|&v| adj(v).len()).sum::<usize>() / 2;
            if edges != k - 1 {
                return Err(not_finite(matrix, comp));
            }
            let degrees: Vec<usize> = comp.iter().map(|&v| adj(v).len()).collect();
            let branch: Vec<usize> =
                comp.iter().zip(&degrees).filter(|(_, &d)| d >= 3).map(|(&v, _)| v).collect();
            if branch.is_empty() {
                path_candidates(comp, &adj)
            } else if branch.len() == 1 && adj(branch[0]).len() == 3 {
                branch_candidates(branch[0], &adj)
            } else {
                return Err(not_finite(matrix, comp));
            }
        }
    };
    candidates
        .into_iter()
        .filter(|(t, nodes)| {
            let canon = t.coxeter_matrix();
            (0..k).all(|a| (0..k).all(|b| matrix[nodes[a]][nodes[b]] == canon[a][b]))
        })
        .min_by(|a, b| a.1.cmp(&b.1))
        .map(|(kind, nodes)| Component { kind, nodes })
        .ok_or_else(|| not_finite(matrix, comp))
}

fn walk(start: usize, adj: &dyn Fn(usize) -> Vec<usize>, avoid: usize) -> Vec<usize> {
    let mut out = vec![start];
    let (mut prev, mut cur) = (avoid, start);
    loop {
        let next: Vec<usize> = adj(cur).into_iter().filter(|&w| w != prev).collect();
        match next.as_slice() {
            [w] => {
                out.push(*w);
                prev = cur;
                cur = *w;
            }
            _ => return out,
        }
    }
}

fn path_candidates(comp: &[usize], adj: &dyn Fn(usize) -> Vec<usize>) -> Vec<(CoxeterType, Vec<usize>)> {
    let ends: Vec<usize> = comp.iter().copied().filter(|&v| adj(v).len() == 1).collect();
    let k = comp.len();
    let mut out = Vec::new();
    for &e in &ends {
        let p = walk(e, adj, usize::MAX);
        for t in [CoxeterType::A(k), CoxeterType::B(k), CoxeterType::F4, CoxeterType::H(k)] {
            if t.rank() == k && (t != CoxeterType::H(k) || (3..=4).contains(&k)) {
                out.push((t, p.clone()));
            }
        }
    }
    out
}

fn branch_candidates(center: usize, adj: &dyn Fn(usize) -> Vec<usize>) -> Vec<(CoxeterType, Vec<usize>)> {
    let arms: Vec<Vec<usize>> = adj(center).into_iter().map(|w| walk(w, adj, center)).collect();
    let k = 1 + arms.iter().map(Vec::len).sum::<usize>();
    let mut out = Vec::new();
    for perm in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
        let (a, b, c) = (&arms[perm[0]], &arms[perm[1]], &arms[perm[2]]);
        // D_k: long arm a (far end first), center, then the two short arms
        if b.len() == 1 && c.len() == 1 && k >= 4 {
            let mut nodes: Vec<usize> = a.iter().rev().copied().collect();
            nodes.push(center);
            nodes.push(b[0]);
            nodes.push(c[0]);
            out.push((CoxeterType::D(k), nodes));
        }
        // E_k: a is the arm 3–1, b the single node 2, c the arm 5, 6, …
        if a.len() == 2 && b.len() == 1 && (6..=8).contains(&k) {
            let mut nodes = vec![a[1], b[0], a[0], center];
            nodes.extend(c.iter().copied());
            out.push((CoxeterType::E(k), nodes));
        }
    }
    out
}
