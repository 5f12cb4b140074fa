//! Exact root systems in Bourbaki coordinates.
//!
//! All arithmetic is over `Rational64`. Nodes are numbered from 1 as in the
//! Bourbaki tables.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Q = Rational64;
pub type QVec = Vec<Q>;

/// Default cap on the size of a computed Weyl orbit.
pub const DEFAULT_ORBIT_BOUND: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootSysError {
    #[error("rank {rank} is not admissible for family {family}")]
    InvalidRank { family: Family, rank: usize },
    #[error("node {j} out of range 1..={rank}")]
    IndexOutOfRange { j: usize, rank: usize },
    #[error("Weyl orbit exceeds bound {bound}")]
    OrbitTooLarge { bound: usize },
    #[error("node {j} is not an Euler node")]
    NotEuler { j: usize },
    #[error("vector has length {got}, ambient dimension is {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("unknown root system family `{0}`")]
    UnknownFamily(String),
}

pub type Result<T> = std::result::Result<T, RootSysError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    BC,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::E => "E",
            Family::F => "F",
            Family::G => "G",
            Family::BC => "BC",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = RootSysError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Family::A),
            "B" => Ok(Family::B),
            "C" => Ok(Family::C),
            "D" => Ok(Family::D),
            "E" => Ok(Family::E),
            "F" => Ok(Family::F),
            "G" => Ok(Family::G),
            "BC" => Ok(Family::BC),
            other => Err(RootSysError::UnknownFamily(other.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootSystemSpec {
    pub family: Family,
    pub rank: usize,
}

impl RootSystemSpec {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A | Family::BC => rank >= 1,
            Family::B => rank >= 2,
            Family::C => rank >= 3,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(Self { family, rank })
        } else {
            Err(RootSysError::InvalidRank { family, rank })
        }
    }

    /// Number of roots of the type.
    pub fn root_count(&self) -> usize {
        let n = self.rank;
        match self.family {
            Family::A => n * (n + 1),
            Family::B | Family::C => 2 * n * n,
            Family::D => 2 * n * (n - 1),
            Family::E => [72, 126, 240][n - 6],
            Family::F => 48,
            Family::G => 12,
            Family::BC => 2 * n * n + 2 * n,
        }
    }
}

impl fmt::Display for RootSystemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coweight {
    pub vector: QVec,
    pub node: usize,
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    spec: RootSystemSpec,
    ambient_dim: usize,
    roots: Vec<QVec>,
    simple_roots: Vec<QVec>,
    cartan_matrix: Vec<Vec<i64>>,
    orbit_bound: usize,
}

fn q(n: i64) -> Q {
    Q::from_integer(n)
}

fn unit(dim: usize, i: usize, c: Q) -> QVec {
    let mut v = vec![Q::zero(); dim];
    v[i] = c;
    v
}

fn diff(dim: usize, i: usize, j: usize) -> QVec {
    let mut v = vec![Q::zero(); dim];
    v[i] = q(1);
    v[j] = q(-1);
    v
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

/// Orthogonal reflection of `v` in the hyperplane of `alpha`.
pub fn reflect(v: &[Q], alpha: &[Q]) -> QVec {
    let c = q(2) * dot(v, alpha) / dot(alpha, alpha);
    v.iter().zip(alpha).map(|(x, a)| x - c * a).collect()
}

fn simple_roots_of(spec: RootSystemSpec) -> (usize, Vec<QVec>) {
    let n = spec.rank;
    match spec.family {
        Family::A => (n + 1, (0..n).map(|i| diff(n + 1, i, i + 1)).collect()),
        Family::B | Family::C | Family::D | Family::BC => {
            let mut s: Vec<QVec> = (0..n.saturating_sub(1)).map(|i| diff(n, i, i + 1)).collect();
            let last = match spec.family {
                Family::B | Family::BC => unit(n, n - 1, q(1)),
                Family::C => unit(n, n - 1, q(2)),
                _ => {
                    let mut v = vec![Q::zero(); n];
                    v[n - 2] = q(1);
                    v[n - 1] = q(1);
                    v
                }
            };
            s.push(last);
            (n, s)
        }
        Family::E => {
            let h = Q::new(1, 2);
            let mut a1 = vec![-h; 8];
            a1[0] = h;
            a1[7] = h;
            let mut a2 = vec![Q::zero(); 8];
            a2[0] = q(1);
            a2[1] = q(1);
            let mut s = vec![a1, a2, diff(8, 1, 0)];
            for i in 2..7 {
                s.push(diff(8, i, i - 1));
            }
            s.truncate(n);
            (8, s)
        }
        Family::F => {
            let h = Q::new(1, 2);
            (
                4,
                vec![diff(4, 1, 2), diff(4, 2, 3), unit(4, 3, q(1)), vec![h, -h, -h, -h]],
            )
        }
        Family::G => (3, vec![diff(3, 0, 1), vec![q(-2), q(1), q(1)]]),
    }
}

/// Closure of `seeds` under the reflections in `mirrors`.
fn reflection_closure(seeds: &[QVec], mirrors: &[QVec], bound: usize) -> Result<BTreeSet<QVec>> {
    let mut seen: BTreeSet<QVec> = seeds.iter().cloned().collect();
    let mut queue: VecDeque<QVec> = seeds.iter().cloned().collect();
    while let Some(v) = queue.pop_front() {
        for a in mirrors {
            let w = reflect(&v, a);
            if !seen.contains(&w) {
                if seen.len() >= bound {
                    return Err(RootSysError::OrbitTooLarge { bound });
                }
                seen.insert(w.clone());
                queue.push_back(w);
            }
        }
    }
    Ok(seen)
}

/// Solve `m x = b` exactly; `m` must be square and invertible.
fn solve_exact(m: &[QVec], b: &[Q]) -> QVec {
    let n = m.len();
    let mut a: Vec<QVec> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(*bi);
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).expect("singular Gram matrix");
        a.swap(col, piv);
        let p = a[col][col];
        for x in a[col].iter_mut() {
            *x /= p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for c in col..=n {
                    let t = a[col][c];
                    a[r][c] -= f * t;
                }
            }
        }
    }
    a.iter().map(|r| r[n]).collect()
}

/// Build the full root system of the given type.
pub fn build_root_system(spec: RootSystemSpec) -> Result<RootSystem> {
    let spec = RootSystemSpec::new(spec.family, spec.rank)?;
    let (ambient_dim, simple) = simple_roots_of(spec);
    let mut roots = reflection_closure(&simple, &simple, DEFAULT_ORBIT_BOUND)?;
    if spec.family == Family::BC {
        for i in 0..spec.rank {
            roots.insert(unit(ambient_dim, i, q(2)));
            roots.insert(unit(ambient_dim, i, q(-2)));
        }
    }
    debug_assert_eq!(roots.len(), spec.root_count());
    let cartan_matrix = simple
        .iter()
        .map(|ai| {
            simple
                .iter()
                .map(|aj| {
                    let c = q(2) * dot(ai, aj) / dot(aj, aj);
                    *c.numer() / *c.denom()
                })
                .collect()
        })
        .collect();
    Ok(RootSystem {
        spec,
        ambient_dim,
        roots: roots.into_iter().collect(),
        simple_roots: simple,
        cartan_matrix,
        orbit_bound: DEFAULT_ORBIT_BOUND,
    })
}

impl RootSystem {
    pub fn spec(&self) -> RootSystemSpec {
        self.spec
    }

    pub fn rank(&self) -> usize {
        self.spec.rank
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// All roots in canonical (lexicographic) order.
    pub fn roots(&self) -> &[QVec] {
        &self.roots
    }

    pub fn simple_roots(&self) -> &[QVec] {
        &self.simple_roots
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan_matrix
    }

    pub fn with_orbit_bound(mut self, bound: usize) -> Self {
        self.orbit_bound = bound;
        self
    }

    fn check_node(&self, j: usize) -> Result<()> {
        if (1..=self.rank()).contains(&j) {
            Ok(())
        } else {
            Err(RootSysError::IndexOutOfRange { j, rank: self.rank() })
        }
    }

    fn gram(&self) -> Vec<QVec> {
        self.simple_roots
            .iter()
            .map(|a| self.simple_roots.iter().map(|b| dot(a, b)).collect())
            .collect()
    }

    /// Coefficients of `v` (in the span of the roots) in the simple-root basis.
    pub fn simple_coordinates(&self, v: &[Q]) -> QVec {
        let rhs: QVec = self.simple_roots.iter().map(|a| dot(a, v)).collect();
        solve_exact(&self.gram(), &rhs)
    }

    /// The element `h_j` of the span of the roots with `alpha_k(h_j) = delta_jk`.
    pub fn fundamental_coweight(&self, j: usize) -> Result<Coweight> {
        self.check_node(j)?;
        let rhs: QVec = (1..=self.rank()).map(|k| if k == j { Q::one() } else { Q::zero() }).collect();
        let x = solve_exact(&self.gram(), &rhs);
        let mut h = vec![Q::zero(); self.ambient_dim];
        for (xm, a) in x.iter().zip(&self.simple_roots) {
            for (hi, ai) in h.iter_mut().zip(a) {
                *hi += xm * ai;
            }
        }
        Ok(Coweight { vector: h, node: j })
    }

    /// Values `alpha(v)` over all roots.
    pub fn pairings(&self, v: &[Q]) -> Vec<Q> {
        self.roots.iter().map(|a| dot(a, v)).collect()
    }

    pub fn is_euler_node(&self, j: usize) -> Result<bool> {
        let h = self.fundamental_coweight(j)?;
        Ok(self.pairings(&h.vector).iter().all(|p| p.abs() <= Q::one() && p.is_integer()))
    }

    pub fn euler_nodes(&self) -> BTreeSet<usize> {
        (1..=self.rank())
            .filter(|&j| self.is_euler_node(j).expect("valid node"))
            .collect()
    }

    /// Closure of `{v}` under the simple reflections, sorted.
    pub fn weyl_orbit(&self, v: &[Q]) -> Result<Vec<QVec>> {
        if v.len() != self.ambient_dim {
            return Err(RootSysError::DimensionMismatch { expected: self.ambient_dim, got: v.len() });
        }
        Ok(reflection_closure(&[v.to_vec()], &self.simple_roots, self.orbit_bound)?
            .into_iter()
            .collect())
    }

    /// Whether `-h_j` lies in the Weyl orbit of the Euler coweight `h_j`.
    pub fn is_symmetric_euler(&self, j: usize) -> Result<bool> {
        if !self.is_euler_node(j)? {
            return Err(RootSysError::NotEuler { j });
        }
        let h = self.fundamental_coweight(j)?.vector;
        let neg: QVec = h.iter().map(|x| -x).collect();
        Ok(self.weyl_orbit(&h)?.binary_search(&neg).is_ok())
    }

    /// The permutation `sigma` of nodes with `-w0(alpha_j) = alpha_sigma(j)`, 1-based.
    pub fn opposition_involution(&self) -> Vec<usize> {
        let mut v = vec![Q::zero(); self.ambient_dim];
        for j in 1..=self.rank() {
            let h = self.fundamental_coweight(j).expect("valid node").vector;
            for (vi, hi) in v.iter_mut().zip(&h) {
                *vi += hi;
            }
        }
        let mut word = Vec::new();
        while let Some(i) = self.simple_roots.iter().position(|a| dot(a, &v) > Q::zero()) {
            v = reflect(&v, &self.simple_roots[i]);
            word.push(i);
        }
        self.simple_roots
            .iter()
            .map(|a| {
                let mut w = a.clone();
                for &i in &word {
                    w = reflect(&w, &self.simple_roots[i]);
                }
                let target: QVec = w.iter().map(|x| -x).collect();
                1 + self
                    .simple_roots
                    .iter()
                    .position(|b| *b == target)
                    .expect("-w0 permutes simple roots")
            })
            .collect()
    }

    /// Counts `(d+, d0, d-)` of the 3-grading defined by an Euler node.
    pub fn grading_dimensions(&self, j: usize) -> Result<(usize, usize, usize)> {
        if !self.is_euler_node(j)? {
            return Err(RootSysError::NotEuler { j });
        }
        let h = self.fundamental_coweight(j)?.vector;
        let p = self.pairings(&h);
        let plus = p.iter().filter(|x| **x == Q::one()).count();
        let minus = p.iter().filter(|x| **x == -Q::one()).count();
        let zero = p.iter().filter(|x| x.is_zero()).count();
        Ok((plus, self.rank() + zero, minus))
    }
}

/// Convert an exact vector to floating point.
pub fn to_f64(v: &[Q]) -> Vec<f64> {
    v.iter().map(|x| *x.numer() as f64 / *x.denom() as f64).collect()
}
