//! Finite groups, group gradings of `M_n`, and homogeneity of superoperators.
//!
//! Group elements are indices `0..order` into an explicit multiplication
//! table. `C^n` carries a basis labelled by group elements, and a matrix unit
//! `E_pq` gets degree `s_p s_q⁻¹` on the [`Side::Left`] and `s_p⁻¹ s_q` on the
//! [`Side::Right`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, TolerancePolicy};
use crate::scalar::Scalar;
use crate::superop::Superoperator;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GroupJson", into = "GroupJson")]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    names: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct GroupJson {
    order: usize,
    table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    names: Option<Vec<String>>,
}

impl TryFrom<GroupJson> for FiniteGroup {
    type Error = Error;
    fn try_from(g: GroupJson) -> Result<Self> {
        if g.table.len() != g.order {
            return Err(Error::InvalidGroup(format!(
                "order {} but {} table rows",
                g.order,
                g.table.len()
            )));
        }
        FiniteGroup::new(g.table, g.names)
    }
}

impl From<FiniteGroup> for GroupJson {
    fn from(g: FiniteGroup) -> Self {
        GroupJson {
            order: g.order(),
            table: g.table,
            names: Some(g.names),
        }
    }
}

impl FiniteGroup {
    /// Validates closure, associativity, identity and inverses of `table`,
    /// where `table[a][b]` is the index of `ab`.
    pub fn new(table: Vec<Vec<usize>>, names: Option<Vec<String>>) -> Result<Self> {
        let m = table.len();
        if m == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if table.iter().any(|row| row.len() != m || row.iter().any(|&x| x >= m)) {
            return Err(Error::InvalidGroup("table is not an m×m table over 0..m".into()));
        }
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!("not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        let identity = (0..m)
            .find(|&e| (0..m).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::InvalidGroup("no identity".into()))?;
        let inverse = (0..m)
            .map(|a| {
                (0..m)
                    .find(|&b| table[a][b] == identity && table[b][a] == identity)
                    .ok_or_else(|| Error::InvalidGroup(format!("element {a} has no inverse")))
            })
            .collect::<Result<Vec<_>>>()?;
        let names = match names {
            Some(ns) if ns.len() != m => {
                return Err(Error::InvalidGroup(format!("{} names for order {m}", ns.len())));
            }
            Some(ns) => ns,
            None => (0..m).map(|i| i.to_string()).collect(),
        };
        Ok(Self {
            table,
            identity,
            inverse,
            names,
        })
    }

    fn from_elements<T: Clone + PartialEq>(
        elems: &[T],
        mul: impl Fn(&T, &T) -> T,
        name: impl Fn(&T) -> String,
    ) -> Self {
        let index = |x: &T| elems.iter().position(|y| y == x).expect("closed under multiplication");
        let table = elems
            .iter()
            .map(|a| elems.iter().map(|b| index(&mul(a, b))).collect())
            .collect();
        Self::new(table, Some(elems.iter().map(name).collect())).expect("valid construction")
    }

    /// `ℤ/m`, element `k` is `k mod m`.
    pub fn cyclic(m: usize) -> Self {
        assert!(m > 0, "cyclic group of order 0");
        let elems: Vec<usize> = (0..m).collect();
        Self::from_elements(&elems, |a, b| (a + b) % m, |a| a.to_string())
    }

    /// Symmetric group on `k` points, permutations in lexicographic order,
    /// composed as functions: `(στ)(i) = σ(τ(i))`. Element 0 is the identity.
    pub fn symmetric(k: usize) -> Self {
        assert!((1..=5).contains(&k), "symmetric(k) supports 1 ≤ k ≤ 5");
        let elems = permutations(k);
        Self::from_elements(
            &elems,
            |s, t| t.iter().map(|&i| s[i]).collect::<Vec<_>>(),
            |p| cycle_name(p),
        )
    }

    /// Dihedral group of order `2k`: element `a + k·b` is `r^a s^b`.
    pub fn dihedral(k: usize) -> Self {
        assert!(k >= 1, "dihedral group needs k ≥ 1");
        let elems: Vec<(usize, usize)> = (0..2).flat_map(|b| (0..k).map(move |a| (a, b))).collect();
        Self::from_elements(
            &elems,
            |&(a, b), &(c, e)| {
                let c = if b == 1 { (k - c) % k } else { c };
                ((a + c) % k, (b + e) % 2)
            },
            |&(a, b)| match (a, b) {
                (0, 0) => "e".into(),
                (a, 0) => format!("r{a}"),
                (0, _) => "s".into(),
                (a, _) => format!("r{a}s"),
            },
        )
    }

    /// Quaternion group `{±1, ±i, ±j, ±k}`.
    pub fn quaternion() -> Self {
        // (negative, unit) with unit 0..4 = 1, i, j, k
        const UNIT: [[(bool, usize); 4]; 4] = [
            [(false, 0), (false, 1), (false, 2), (false, 3)],
            [(false, 1), (true, 0), (false, 3), (true, 2)],
            [(false, 2), (true, 3), (true, 0), (false, 1)],
            [(false, 3), (false, 2), (true, 1), (true, 0)],
        ];
        let elems: Vec<(bool, usize)> = [false, true]
            .into_iter()
            .flat_map(|s| (0..4).map(move |u| (s, u)))
            .collect();
        Self::from_elements(
            &elems,
            |&(s, u), &(t, v)| {
                let (neg, w) = UNIT[u][v];
                (s ^ t ^ neg, w)
            },
            |&(s, u)| format!("{}{}", if s { "-" } else { "" }, ["1", "i", "j", "k"][u]),
        )
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// Index of the element called `name`.
    pub fn find(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// `a b a⁻¹`.
    pub fn conjugate(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.inv(a))
    }

    pub fn is_central(&self, a: usize) -> bool {
        (0..self.order()).all(|b| self.mul(a, b) == self.mul(b, a))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| self.is_central(a))
    }

    fn check(&self, a: usize) -> Result<()> {
        if a < self.order() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: a,
                size: self.order(),
            })
        }
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    let mut p: Vec<usize> = (0..k).collect();
    loop {
        out.push(p.clone());
        // next lexicographic permutation
        let Some(i) = (1..k).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..k).rev().find(|&j| p[j] > p[i - 1]).expect("exists");
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

fn cycle_name(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cycle = vec![];
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cycle.push((i + 1).to_string());
            i = p[i];
        }
        out.push_str(&format!("({})", cycle.join(" ")));
    }
    if out.is_empty() {
        "e".into()
    } else {
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Self {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

impl std::str::FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            other => Err(Error::InvalidInput(format!("unknown side {other:?}"))),
        }
    }
}

/// Grading of `M_n` by a finite group: basis vector `i` has degree `labels[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
    group: FiniteGroup,
    labels: Vec<usize>,
    side: Side,
}

impl Grading {
    pub fn new(group: FiniteGroup, labels: Vec<usize>, side: Side) -> Result<Self> {
        for &s in &labels {
            group.check(s)?;
        }
        Ok(Self { group, labels, side })
    }

    /// The regular grading on `ℂΓ`: basis vector `e_h` has degree `h`.
    pub fn regular(group: FiniteGroup, side: Side) -> Self {
        let labels = (0..group.order()).collect();
        Self { group, labels, side }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Same labels, other side.
    pub fn flipped(&self) -> Self {
        Self {
            side: self.side.flip(),
            ..self.clone()
        }
    }

    /// Degree of the matrix unit `E_pq`.
    pub fn unit_degree(&self, p: usize, q: usize) -> usize {
        let (sp, sq) = (self.labels[p], self.labels[q]);
        match self.side {
            Side::Left => self.group.mul(sp, self.group.inv(sq)),
            Side::Right => self.group.mul(self.group.inv(sp), sq),
        }
    }
}

/// Permutation matrix of `h ↦ γh` on `ℂΓ`: entry `(γh, h)` is 1.
pub fn left_translation<S: Scalar>(group: &FiniteGroup, gamma: usize) -> Result<Matrix<S>> {
    group.check(gamma)?;
    let m = group.order();
    let mut out = Matrix::zeros(m);
    for h in 0..m {
        out[(group.mul(gamma, h), h)] = S::one();
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Homogeneity {
    /// The zero matrix, homogeneous of every degree.
    Zero,
    Degree(usize),
    Inhomogeneous,
}

/// Degree of `x` if all of its nonzero matrix-unit components share one degree.
pub fn homogeneous_degree<S: Scalar>(x: &Matrix<S>, g: &Grading, tol: &TolerancePolicy) -> Homogeneity {
    assert_eq!(x.n(), g.n(), "matrix size must match the grading");
    let scale = x.max_abs();
    let mut found = None;
    for p in 0..x.n() {
        for q in 0..x.n() {
            if x[(p, q)].is_negligible(scale, tol.rank_rel_tol) {
                continue;
            }
            let deg = g.unit_degree(p, q);
            match found {
                None => found = Some(deg),
                Some(d) if d != deg => return Homogeneity::Inhomogeneous,
                Some(_) => {}
            }
        }
    }
    found.map_or(Homogeneity::Zero, Homogeneity::Degree)
}

/// A matrix unit whose image is not homogeneous of the unit's own degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradingWitness {
    pub p: usize,
    pub q: usize,
    pub degree: usize,
    pub image: Homogeneity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedReport {
    pub graded: bool,
    pub witness: Option<GradingWitness>,
}

/// Whether `phi` is a graded map: every matrix unit `E_pq` is sent to zero or
/// to a matrix homogeneous of the same degree as `E_pq`.
pub fn is_graded_superop<S: Scalar>(phi: &Superoperator<S>, g: &Grading, tol: &TolerancePolicy) -> GradedReport {
    assert_eq!(phi.n(), g.n(), "superoperator size must match the grading");
    for p in 0..g.n() {
        for q in 0..g.n() {
            let degree = g.unit_degree(p, q);
            let image = homogeneous_degree(&phi.image(p, q), g, tol);
            if !matches!(image, Homogeneity::Zero) && image != Homogeneity::Degree(degree) {
                return GradedReport {
                    graded: false,
                    witness: Some(GradingWitness { p, q, degree, image }),
                };
            }
        }
    }
    GradedReport {
        graded: true,
        witness: None,
    }
}

/// `x ↦ Y x Y*` for `Y` the left translation by `gamma`.
pub fn translation_conjugation<S: Scalar>(group: &FiniteGroup, gamma: usize) -> Result<Superoperator<S>> {
    let y = left_translation::<S>(group, gamma)?;
    Ok(crate::superop::superop_from_kraus(&crate::superop::KrausTuple::new(
        vec![y],
    )?))
}

/// Same map for the entrywise conjugate `Ȳ` of the Kraus operator.
pub fn conjugate_translation_conjugation<S: Scalar>(group: &FiniteGroup, gamma: usize) -> Result<Superoperator<S>> {
    let y = left_translation::<S>(group, gamma)?.conj();
    Ok(crate::superop::superop_from_kraus(&crate::superop::KrausTuple::new(
        vec![y],
    )?))
}

/// A pair `(γ, γ′)` where conjugation by `Y = L_γ` is not graded on the left,
/// with `γ′` the witness degree, while conjugation by `Ȳ` is graded on the right.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Asymmetry {
    pub gamma: usize,
    pub gamma_prime: usize,
}

/// Exhaustive search over `γ` for the left/right asymmetry.
pub fn find_asymmetry<S: Scalar>(group: &FiniteGroup, tol: &TolerancePolicy) -> Option<Asymmetry> {
    let left = Grading::regular(group.clone(), Side::Left);
    let right = left.flipped();
    (0..group.order()).find_map(|gamma| {
        let l = is_graded_superop(&translation_conjugation::<S>(group, gamma).ok()?, &left, tol);
        let r = is_graded_superop(&conjugate_translation_conjugation::<S>(group, gamma).ok()?, &right, tol);
        match (l.witness, r.graded) {
            (Some(w), true) => Some(Asymmetry {
                gamma,
                gamma_prime: w.degree,
            }),
            _ => None,
        }
    })
}
