//! Graded chain complexes over Z2 and over the ring of finite `T`-sums,
//! chain maps, chain homotopies, mapping cones, homology and exactness.
//!
//! Degrees are a contiguous range `min..=max`. The boundary in degree `k`
//! is a `dim(k-1) x dim(k)` matrix; columns are source generators.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::f2::{F2Matrix, F2Vector};
use crate::omega::{OmegaElement, OmegaMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("degree {degree}: boundary has shape {found:?}, expected {expected:?}")]
    BoundaryShape {
        degree: i32,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("boundary given for degree {0} outside the generator range")]
    BoundaryOutOfRange(i32),
    #[error("{0}")]
    NotAComplex(BoundaryViolation),
    #[error("degree {degree}: map matrix has shape {found:?}, expected {expected:?}")]
    MapShape {
        degree: i32,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("maps do not share source and target complexes")]
    Incompatible,
    #[error("{op} needs a degree shift of {expected}, got {found}")]
    Shift {
        op: &'static str,
        expected: i32,
        found: i32,
    },
    #[error("homology over the T-ring needs a boundary with constant (T^0) entries; degree {0} is not")]
    NonConstantBoundary(i32),
    #[error("chain of length {found} in degree {degree}, expected {expected}")]
    ChainLength { degree: i32, expected: usize, found: usize },
}

/// First place where `∂∘∂` fails to vanish.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryViolation {
    /// Degree `k` with `∂_{k-1} ∘ ∂_k ≠ 0`.
    pub degree: i32,
    pub generator: String,
    /// A degree `k-2` generator hit by `∂∂(generator)`.
    pub hits: String,
}

impl fmt::Display for BoundaryViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "boundary squared is nonzero at degree {}: generator `{}` reaches `{}`",
            self.degree, self.generator, self.hits
        )
    }
}

/// A graded Z2 chain complex with labelled generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    min_degree: i32,
    generators: Vec<Vec<String>>,
    boundaries: Vec<F2Matrix>,
}

impl ChainComplex {
    /// Builds and validates a complex. `generators[i]` lives in degree
    /// `min_degree + i`; missing boundaries are zero.
    pub fn new(
        min_degree: i32,
        generators: Vec<Vec<String>>,
        boundaries: BTreeMap<i32, F2Matrix>,
    ) -> Result<Self, ComplexError> {
        let c = Self::new_unchecked(min_degree, generators, boundaries)?;
        c.validate().map_err(ComplexError::NotAComplex)?;
        Ok(c)
    }

    /// Checks shapes but not `∂² = 0`.
    pub fn new_unchecked(
        min_degree: i32,
        generators: Vec<Vec<String>>,
        mut boundaries: BTreeMap<i32, F2Matrix>,
    ) -> Result<Self, ComplexError> {
        let max_degree = min_degree + generators.len() as i32 - 1;
        if let Some(&k) = boundaries.keys().find(|&&k| k < min_degree || k > max_degree) {
            return Err(ComplexError::BoundaryOutOfRange(k));
        }
        let dim = |k: i32| {
            if k < min_degree || k > max_degree {
                0
            } else {
                generators[(k - min_degree) as usize].len()
            }
        };
        let mut mats = Vec::with_capacity(generators.len());
        for k in min_degree..=max_degree {
            let expected = (dim(k - 1), dim(k));
            let m = boundaries
                .remove(&k)
                .unwrap_or_else(|| F2Matrix::zeros(expected.0, expected.1));
            if m.shape() != expected {
                return Err(ComplexError::BoundaryShape {
                    degree: k,
                    expected,
                    found: m.shape(),
                });
            }
            mats.push(m);
        }
        Ok(Self {
            min_degree,
            generators,
            boundaries: mats,
        })
    }

    /// A complex with the given generator counts and zero boundary, with
    /// labels `g{k}_{i}`.
    pub fn with_zero_boundary(min_degree: i32, dims: &[usize]) -> Self {
        let generators = dims
            .iter()
            .enumerate()
            .map(|(i, &n)| (0..n).map(|j| format!("g{}_{}", min_degree + i as i32, j)).collect())
            .collect();
        Self::new(min_degree, generators, BTreeMap::new()).expect("zero boundary is a complex")
    }

    pub fn empty() -> Self {
        Self {
            min_degree: 0,
            generators: Vec::new(),
            boundaries: Vec::new(),
        }
    }

    pub fn min_degree(&self) -> i32 {
        self.min_degree
    }

    pub fn max_degree(&self) -> i32 {
        self.min_degree + self.generators.len() as i32 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.min_degree..=self.max_degree()
    }

    fn index(&self, k: i32) -> Option<usize> {
        (k >= self.min_degree && k <= self.max_degree()).then(|| (k - self.min_degree) as usize)
    }

    pub fn dim(&self, k: i32) -> usize {
        self.index(k).map_or(0, |i| self.generators[i].len())
    }

    pub fn total_dim(&self) -> usize {
        self.generators.iter().map(Vec::len).sum()
    }

    pub fn labels(&self, k: i32) -> &[String] {
        self.index(k).map_or(&[], |i| &self.generators[i])
    }

    pub fn generators(&self) -> &[Vec<String>] {
        &self.generators
    }

    /// `(degree, position)` of a generator label.
    pub fn find(&self, label: &str) -> Option<(i32, usize)> {
        self.degrees()
            .find_map(|k| self.labels(k).iter().position(|l| l == label).map(|i| (k, i)))
    }

    /// `∂_k : C_k → C_{k-1}`, zero (of the right shape) outside the range.
    pub fn boundary(&self, k: i32) -> F2Matrix {
        match self.index(k) {
            Some(i) => self.boundaries[i].clone(),
            None => F2Matrix::zeros(self.dim(k - 1), self.dim(k)),
        }
    }

    pub fn boundary_ref(&self, k: i32) -> Option<&F2Matrix> {
        self.index(k).map(|i| &self.boundaries[i])
    }

    pub fn boundaries(&self) -> BTreeMap<i32, F2Matrix> {
        self.degrees().map(|k| (k, self.boundary(k))).collect()
    }

    /// Confirms `∂_{k-1} ∘ ∂_k = 0` in every degree, or reports the first
    /// failing degree and generator.
    pub fn validate(&self) -> Result<(), BoundaryViolation> {
        for k in self.degrees() {
            let dd = self
                .boundary(k - 1)
                .compose(&self.boundary(k))
                .expect("adjacent shapes agree");
            if let Some((r, c)) = dd.first_nonzero() {
                return Err(BoundaryViolation {
                    degree: k,
                    generator: self.labels(k)[c].clone(),
                    hits: self.labels(k - 2)[r].clone(),
                });
            }
        }
        Ok(())
    }

    /// Reorders the generators of each degree by `perm[k][new] = old`.
    pub fn permuted(&self, perm: &BTreeMap<i32, Vec<usize>>) -> ChainComplex {
        let p = |k: i32| -> Vec<usize> { perm.get(&k).cloned().unwrap_or_else(|| (0..self.dim(k)).collect()) };
        let generators = self
            .degrees()
            .map(|k| p(k).iter().map(|&o| self.labels(k)[o].clone()).collect())
            .collect();
        let boundaries = self
            .degrees()
            .map(|k| {
                let (rows, cols) = (p(k - 1), p(k));
                let old = self.boundary(k);
                let mut m = F2Matrix::zeros(rows.len(), cols.len());
                for (i, &ri) in rows.iter().enumerate() {
                    for (j, &cj) in cols.iter().enumerate() {
                        m.set(i, j, old.get(ri, cj));
                    }
                }
                (k, m)
            })
            .collect();
        ChainComplex::new(self.min_degree, generators, boundaries).expect("permutation preserves ∂²=0")
    }

    /// Extension of scalars to the T-ring.
    pub fn tensor_omega(&self) -> OmegaComplex {
        OmegaComplex {
            min_degree: self.min_degree,
            generators: self.generators.clone(),
            boundaries: self.boundaries.iter().map(OmegaMatrix::from_f2).collect(),
        }
    }

    /// `Some(x)` with `∂x = chain` when `chain` (degree `k`) is a boundary.
    pub fn boundary_preimage(&self, k: i32, chain: &F2Vector) -> Option<F2Vector> {
        self.boundary(k + 1).solve(chain)
    }

    pub fn is_cycle(&self, k: i32, chain: &F2Vector) -> bool {
        self.boundary(k).mul_vec(chain).is_zero()
    }

    pub fn chain_from_labels(&self, k: i32, labels: &[String]) -> Option<F2Vector> {
        let mut v = F2Vector::zeros(self.dim(k));
        for l in labels {
            let i = self.labels(k).iter().position(|g| g == l)?;
            v.flip(i);
        }
        Some(v)
    }

    pub fn chain_labels(&self, k: i32, chain: &F2Vector) -> Vec<String> {
        chain.ones().map(|i| self.labels(k)[i].clone()).collect()
    }
}

/// Per-degree Betti numbers over Z2, keyed by degree.
pub type BettiNumbers = BTreeMap<i32, usize>;

/// `dim H_k = dim ker ∂_k − rank ∂_{k+1}` for every degree.
pub fn homology_dims(c: &ChainComplex) -> BettiNumbers {
    c.degrees()
        .map(|k| (k, c.dim(k) - c.boundary(k).rank() - c.boundary(k + 1).rank()))
        .collect()
}

/// Betti numbers as a plain list starting at the minimum degree.
pub fn betti_vec(c: &ChainComplex) -> Vec<usize> {
    homology_dims(c).into_values().collect()
}

/// A chosen basis of `H_k` together with the data needed to express any
/// cycle in it.
#[derive(Debug, Clone)]
pub struct HomologyDegree {
    pub degree: i32,
    /// Cycle representatives of a basis of `H_k`.
    pub representatives: Vec<F2Vector>,
    boundary_basis: Vec<F2Vector>,
    /// Columns `[boundary basis | representatives]`.
    frame: F2Matrix,
}

impl HomologyDegree {
    pub fn compute(c: &ChainComplex, k: i32) -> Self {
        let n = c.dim(k);
        let boundary_basis = c.boundary(k + 1).column_space_basis();
        let mut columns = boundary_basis.clone();
        let mut representatives = Vec::new();
        let mut rank = columns.len();
        for z in c.boundary(k).kernel_basis() {
            columns.push(z.clone());
            let r = F2Matrix::from_columns(n, &columns).rank();
            if r > rank {
                rank = r;
                representatives.push(z);
            } else {
                columns.pop();
            }
        }
        let frame = F2Matrix::from_columns(n, &columns);
        Self {
            degree: k,
            representatives,
            boundary_basis,
            frame,
        }
    }

    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    /// Coordinates of the class of `cycle` in the representative basis.
    /// `None` when `cycle` is not a cycle.
    pub fn coordinates(&self, cycle: &F2Vector) -> Option<F2Vector> {
        let x = self.frame.solve(cycle)?;
        let b = self.boundary_basis.len();
        Some(x.slice(b, x.len()))
    }

    pub fn chain_of(&self, coords: &F2Vector) -> F2Vector {
        let n = self.frame.rows();
        let mut out = F2Vector::zeros(n);
        for i in coords.ones() {
            out.add_assign(&self.representatives[i]);
        }
        out
    }
}

/// Homology bases in every degree of a complex.
#[derive(Debug, Clone)]
pub struct Homology {
    degrees: BTreeMap<i32, HomologyDegree>,
}

impl Homology {
    pub fn compute(c: &ChainComplex) -> Self {
        Self {
            degrees: c.degrees().map(|k| (k, HomologyDegree::compute(c, k))).collect(),
        }
    }

    /// The degree `k` part; an empty basis outside the range.
    pub fn degree(&self, k: i32) -> HomologyDegree {
        self.degrees.get(&k).cloned().unwrap_or_else(|| HomologyDegree {
            degree: k,
            representatives: Vec::new(),
            boundary_basis: Vec::new(),
            frame: F2Matrix::zeros(0, 0),
        })
    }

    pub fn dims(&self) -> BettiNumbers {
        self.degrees.iter().map(|(&k, h)| (k, h.dim())).collect()
    }
}

/// A degree-`shift` map of Z2 chain complexes; `matrix(k)` sends source
/// degree `k` to target degree `k + shift`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainMap {
    source: ChainComplex,
    target: ChainComplex,
    shift: i32,
    matrices: BTreeMap<i32, F2Matrix>,
}

/// A square `∂ f = f ∂` failing at one entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommutationViolation {
    /// Source degree `k` of the square `C_k → D_{k+s-1}`.
    pub degree: i32,
    pub source_generator: String,
    pub target_generator: String,
}

impl fmt::Display for CommutationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "map does not commute with the boundary in degree {}: `{}` → `{}` differs",
            self.degree, self.source_generator, self.target_generator
        )
    }
}

impl ChainMap {
    /// Checks matrix shapes; commutation is checked by [`ChainMap::is_chain_map`].
    pub fn new(
        source: ChainComplex,
        target: ChainComplex,
        shift: i32,
        mut matrices: BTreeMap<i32, F2Matrix>,
    ) -> Result<Self, ComplexError> {
        let mut full = BTreeMap::new();
        for k in source.degrees() {
            let expected = (target.dim(k + shift), source.dim(k));
            let m = matrices
                .remove(&k)
                .unwrap_or_else(|| F2Matrix::zeros(expected.0, expected.1));
            if m.shape() != expected {
                return Err(ComplexError::MapShape {
                    degree: k,
                    expected,
                    found: m.shape(),
                });
            }
            full.insert(k, m);
        }
        if let Some((&k, m)) = matrices.iter().find(|(_, m)| !m.is_zero()) {
            return Err(ComplexError::MapShape {
                degree: k,
                expected: (0, 0),
                found: m.shape(),
            });
        }
        Ok(Self {
            source,
            target,
            shift,
            matrices: full,
        })
    }

    pub fn identity(c: &ChainComplex) -> Self {
        let matrices = c.degrees().map(|k| (k, F2Matrix::identity(c.dim(k)))).collect();
        Self {
            source: c.clone(),
            target: c.clone(),
            shift: 0,
            matrices,
        }
    }

    pub fn zero(source: &ChainComplex, target: &ChainComplex, shift: i32) -> Self {
        Self::new(source.clone(), target.clone(), shift, BTreeMap::new()).expect("zero map")
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }

    pub fn matrix(&self, k: i32) -> F2Matrix {
        self.matrices
            .get(&k)
            .cloned()
            .unwrap_or_else(|| F2Matrix::zeros(self.target.dim(k + self.shift), self.source.dim(k)))
    }

    pub fn matrices(&self) -> &BTreeMap<i32, F2Matrix> {
        &self.matrices
    }

    pub fn apply(&self, k: i32, chain: &F2Vector) -> F2Vector {
        self.matrix(k).mul_vec(chain)
    }

    /// Verifies `∂ f = f ∂` degree by degree.
    pub fn is_chain_map(&self) -> Result<(), CommutationViolation> {
        let s = self.shift;
        for k in self.source.degrees() {
            let lhs = self.target.boundary(k + s).compose(&self.matrix(k)).expect("shapes");
            let rhs = self.matrix(k - 1).compose(&self.source.boundary(k)).expect("shapes");
            let diff = lhs.add(&rhs).expect("shapes");
            if let Some((r, c)) = diff.first_nonzero() {
                return Err(CommutationViolation {
                    degree: k,
                    source_generator: self.source.labels(k)[c].clone(),
                    target_generator: self.target.labels(k + s - 1)[r].clone(),
                });
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &ChainMap) -> Result<ChainMap, ComplexError> {
        if self.source != other.source || self.target != other.target || self.shift != other.shift {
            return Err(ComplexError::Incompatible);
        }
        let matrices = self
            .matrices
            .iter()
            .map(|(&k, m)| (k, m.add(&other.matrix(k)).expect("shapes")))
            .collect();
        Ok(ChainMap {
            matrices,
            ..self.clone()
        })
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &ChainMap) -> Result<ChainMap, ComplexError> {
        if first.target != self.source {
            return Err(ComplexError::Incompatible);
        }
        let matrices = first
            .source
            .degrees()
            .map(|k| {
                let m = self.matrix(k + first.shift).compose(&first.matrix(k)).expect("shapes");
                (k, m)
            })
            .collect();
        Ok(ChainMap {
            source: first.source.clone(),
            target: self.target.clone(),
            shift: self.shift + first.shift,
            matrices,
        })
    }

    /// The matrix of `f_* : H_k(source) → H_{k+shift}(target)` in the
    /// representative bases.
    pub fn induced(&self, k: i32, hs: &Homology, ht: &Homology) -> F2Matrix {
        let src = hs.degree(k);
        let tgt = ht.degree(k + self.shift);
        let cols: Vec<F2Vector> = src
            .representatives
            .iter()
            .map(|z| {
                tgt.coordinates(&self.apply(k, z))
                    .expect("chain maps send cycles to cycles")
            })
            .collect();
        F2Matrix::from_columns(tgt.dim(), &cols)
    }

    /// Extension of scalars.
    pub fn tensor_omega(&self) -> OmegaChainMap {
        OmegaChainMap {
            source: self.source.tensor_omega(),
            target: self.target.tensor_omega(),
            shift: self.shift,
            matrices: self
                .matrices
                .iter()
                .map(|(&k, m)| (k, OmegaMatrix::from_f2(m)))
                .collect(),
        }
    }
}

/// A degree `+1` map `h` used as a chain homotopy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainHomotopy {
    map: ChainMap,
}

impl ChainHomotopy {
    pub fn new(
        source: ChainComplex,
        target: ChainComplex,
        matrices: BTreeMap<i32, F2Matrix>,
    ) -> Result<Self, ComplexError> {
        Ok(Self {
            map: ChainMap::new(source, target, 1, matrices)?,
        })
    }

    pub fn zero(source: &ChainComplex, target: &ChainComplex) -> Self {
        Self {
            map: ChainMap::zero(source, target, 1),
        }
    }

    pub fn matrix(&self, k: i32) -> F2Matrix {
        self.map.matrix(k)
    }

    pub fn as_map(&self) -> &ChainMap {
        &self.map
    }

    /// The degree-0 map `h∂ + ∂h`.
    pub fn boundary_commutator(&self) -> ChainMap {
        let (s, t) = (self.map.source(), self.map.target());
        let matrices = s
            .degrees()
            .map(|k| {
                let a = self.matrix(k - 1).compose(&s.boundary(k)).expect("shapes");
                let b = t.boundary(k + 1).compose(&self.matrix(k)).expect("shapes");
                (k, a.add(&b).expect("shapes"))
            })
            .collect();
        ChainMap::new(s.clone(), t.clone(), 0, matrices).expect("shapes")
    }

    pub fn tensor_omega(&self) -> OmegaChainMap {
        self.map.tensor_omega()
    }
}

/// Solves `h∂ + ∂h = target` for a degree-0 map `target : S → T`.
///
/// The unknowns are the entries of every `h_k : S_k → T_{k+1}`; the system
/// is assembled over F2 and solved by elimination.
pub fn solve_null_homotopy(target_map: &ChainMap) -> Option<ChainHomotopy> {
    assert_eq!(target_map.shift(), 0);
    let (s, t) = (target_map.source(), target_map.target());
    // variable offsets for h_k
    let mut offsets = BTreeMap::new();
    let mut nvars = 0;
    for k in s.degrees() {
        offsets.insert(k, nvars);
        nvars += t.dim(k + 1) * s.dim(k);
    }
    let var = |k: i32, r: usize, c: usize| offsets[&k] + r * s.dim(k) + c;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for k in s.degrees() {
        let ds = s.boundary(k);
        let dt = t.boundary(k + 1);
        let goal = target_map.matrix(k);
        for i in 0..t.dim(k) {
            for j in 0..s.dim(k) {
                let mut eq = F2Vector::zeros(nvars);
                // (h_{k-1} ∂^S_k)[i][j] = Σ_l h_{k-1}[i][l] ∂^S_k[l][j]
                if offsets.contains_key(&(k - 1)) {
                    for l in 0..s.dim(k - 1) {
                        if ds.get(l, j) {
                            eq.flip(var(k - 1, i, l));
                        }
                    }
                }
                // (∂^T_{k+1} h_k)[i][j] = Σ_l ∂^T_{k+1}[i][l] h_k[l][j]
                for l in 0..t.dim(k + 1) {
                    if dt.get(i, l) {
                        eq.flip(var(k, l, j));
                    }
                }
                rows.push(eq);
                rhs.push(goal.get(i, j));
            }
        }
    }
    let system = F2Matrix::from_row_vectors(nvars, rows);
    let x = system.solve(&F2Vector::from_bits(rhs))?;
    let matrices = s
        .degrees()
        .map(|k| {
            let mut m = F2Matrix::zeros(t.dim(k + 1), s.dim(k));
            for r in 0..t.dim(k + 1) {
                for c in 0..s.dim(k) {
                    m.set(r, c, x.get(var(k, r, c)));
                }
            }
            (k, m)
        })
        .collect();
    Some(ChainHomotopy::new(s.clone(), t.clone(), matrices).expect("shapes"))
}

/// A basis of the space of degree-0 chain maps `S → T`.
pub fn chain_map_basis(s: &ChainComplex, t: &ChainComplex) -> Vec<ChainMap> {
    let mut offsets = BTreeMap::new();
    let mut nvars = 0;
    for k in s.degrees() {
        offsets.insert(k, nvars);
        nvars += t.dim(k) * s.dim(k);
    }
    let var = |k: i32, r: usize, c: usize| offsets[&k] + r * s.dim(k) + c;
    let mut rows = Vec::new();
    for k in s.degrees() {
        let ds = s.boundary(k);
        let dt = t.boundary(k);
        // (∂^T_k f_k + f_{k-1} ∂^S_k)[i][j] = 0 for i in T_{k-1}, j in S_k
        for i in 0..t.dim(k - 1) {
            for j in 0..s.dim(k) {
                let mut eq = F2Vector::zeros(nvars);
                for l in 0..t.dim(k) {
                    if dt.get(i, l) {
                        eq.flip(var(k, l, j));
                    }
                }
                if offsets.contains_key(&(k - 1)) {
                    for l in 0..s.dim(k - 1) {
                        if ds.get(l, j) {
                            eq.flip(var(k - 1, i, l));
                        }
                    }
                }
                rows.push(eq);
            }
        }
    }
    F2Matrix::from_row_vectors(nvars, rows)
        .kernel_basis()
        .into_iter()
        .map(|x| {
            let matrices = s
                .degrees()
                .map(|k| {
                    let mut m = F2Matrix::zeros(t.dim(k), s.dim(k));
                    for r in 0..t.dim(k) {
                        for c in 0..s.dim(k) {
                            m.set(r, c, x.get(var(k, r, c)));
                        }
                    }
                    (k, m)
                })
                .collect();
            ChainMap::new(s.clone(), t.clone(), 0, matrices).expect("shapes")
        })
        .collect()
}

/// Generator label prefixes used by [`mapping_cone_named`].
pub const CONE_TARGET_PREFIX: &str = "t:";
pub const CONE_SOURCE_PREFIX: &str = "s:";

/// The mapping cone of a degree-0 chain map `f : S → T`:
/// `Cone_k = T_k ⊕ S_{k-1}` with `∂(x, y) = (∂x + f(y), ∂y)`.
pub fn mapping_cone(f: &ChainMap) -> Result<ChainComplex, ComplexError> {
    mapping_cone_named(f, CONE_TARGET_PREFIX, CONE_SOURCE_PREFIX)
}

pub fn mapping_cone_named(
    f: &ChainMap,
    target_prefix: &str,
    source_prefix: &str,
) -> Result<ChainComplex, ComplexError> {
    if f.shift() != 0 {
        return Err(ComplexError::Shift {
            op: "mapping cone",
            expected: 0,
            found: f.shift(),
        });
    }
    let (s, t) = (f.source(), f.target());
    let lo = t.min_degree().min(s.min_degree() + 1);
    let hi = t.max_degree().max(s.max_degree() + 1);
    let generators: Vec<Vec<String>> = (lo..=hi)
        .map(|k| {
            t.labels(k)
                .iter()
                .map(|l| format!("{target_prefix}{l}"))
                .chain(s.labels(k - 1).iter().map(|l| format!("{source_prefix}{l}")))
                .collect()
        })
        .collect();
    let mut boundaries = BTreeMap::new();
    for k in lo..=hi {
        let (tk, sk1) = (t.dim(k), s.dim(k - 1));
        let (tk1, sk2) = (t.dim(k - 1), s.dim(k - 2));
        let mut m = F2Matrix::zeros(tk1 + sk2, tk + sk1);
        let dt = t.boundary(k);
        for (r, c) in dt.nonzero_entries() {
            m.set(r, c, true);
        }
        for (r, c) in f.matrix(k - 1).nonzero_entries() {
            m.set(r, tk + c, true);
        }
        for (r, c) in s.boundary(k - 1).nonzero_entries() {
            m.set(tk1 + r, tk + c, true);
        }
        boundaries.insert(k, m);
    }
    ChainComplex::new(lo, generators, boundaries)
}

/// The maps `T → Cone` (inclusion) and `Cone → S[-1]` (projection) of the
/// cone triangle.
pub fn cone_maps(f: &ChainMap, cone: &ChainComplex) -> (ChainMap, ChainMap) {
    let (s, t) = (f.source(), f.target());
    let inclusion = t
        .degrees()
        .map(|k| {
            let mut m = F2Matrix::zeros(cone.dim(k), t.dim(k));
            for i in 0..t.dim(k) {
                m.set(i, i, true);
            }
            (k, m)
        })
        .collect();
    let projection = cone
        .degrees()
        .map(|k| {
            let tk = t.dim(k);
            let mut m = F2Matrix::zeros(s.dim(k - 1), cone.dim(k));
            for i in 0..s.dim(k - 1) {
                m.set(i, tk + i, true);
            }
            (k, m)
        })
        .collect();
    (
        ChainMap::new(t.clone(), cone.clone(), 0, inclusion).expect("shapes"),
        ChainMap::new(cone.clone(), s.clone(), -1, projection).expect("shapes"),
    )
}

/// Why `H(A) --f--> H(B) --g--> H(C)` fails to be exact in some degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactnessViolation {
    /// Degree of the middle group `H_k(B)`.
    pub degree: i32,
    /// `rank(g_* f_*)`, nonzero when the composite does not vanish.
    pub composite_rank: usize,
    pub image_rank: usize,
    pub kernel_dim: usize,
}

impl fmt::Display for ExactnessViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "not exact at degree {}: rank(g∘f)={}, rank im f={}, dim ker g={}",
            self.degree, self.composite_rank, self.image_rank, self.kernel_dim
        )
    }
}

/// Verifies `im f_* = ker g_*` in every degree of the middle complex.
pub fn check_exactness(f: &ChainMap, g: &ChainMap) -> Result<Result<(), ExactnessViolation>, ComplexError> {
    if f.target() != g.source() {
        return Err(ComplexError::Incompatible);
    }
    let ha = Homology::compute(f.source());
    let hb = Homology::compute(f.target());
    let hc = Homology::compute(g.target());
    Ok(check_exactness_with(f, g, &ha, &hb, &hc))
}

/// [`check_exactness`] with precomputed homology bases.
pub fn check_exactness_with(
    f: &ChainMap,
    g: &ChainMap,
    ha: &Homology,
    hb: &Homology,
    hc: &Homology,
) -> Result<(), ExactnessViolation> {
    for k in f.target().degrees() {
        let fs = f.induced(k - f.shift(), ha, hb);
        let gs = g.induced(k, hb, hc);
        let composite_rank = gs.compose(&fs).expect("composable").rank();
        let image_rank = fs.rank();
        let kernel_dim = hb.degree(k).dim() - gs.rank();
        if composite_rank != 0 || image_rank != kernel_dim {
            return Err(ExactnessViolation {
                degree: k,
                composite_rank,
                image_rank,
                kernel_dim,
            });
        }
    }
    Ok(())
}

/// A graded complex whose boundary has entries in the T-ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaComplex {
    min_degree: i32,
    generators: Vec<Vec<String>>,
    boundaries: Vec<OmegaMatrix>,
}

impl OmegaComplex {
    pub fn new(
        min_degree: i32,
        generators: Vec<Vec<String>>,
        mut boundaries: BTreeMap<i32, OmegaMatrix>,
    ) -> Result<Self, ComplexError> {
        let max_degree = min_degree + generators.len() as i32 - 1;
        if let Some(&k) = boundaries.keys().find(|&&k| k < min_degree || k > max_degree) {
            return Err(ComplexError::BoundaryOutOfRange(k));
        }
        let dim = |k: i32| {
            if k < min_degree || k > max_degree {
                0
            } else {
                generators[(k - min_degree) as usize].len()
            }
        };
        let mut mats = Vec::new();
        for k in min_degree..=max_degree {
            let expected = (dim(k - 1), dim(k));
            let m = boundaries
                .remove(&k)
                .unwrap_or_else(|| OmegaMatrix::zeros(expected.0, expected.1));
            if m.shape() != expected {
                return Err(ComplexError::BoundaryShape {
                    degree: k,
                    expected,
                    found: m.shape(),
                });
            }
            mats.push(m);
        }
        let c = Self {
            min_degree,
            generators,
            boundaries: mats,
        };
        c.validate().map_err(ComplexError::NotAComplex)?;
        Ok(c)
    }

    pub fn min_degree(&self) -> i32 {
        self.min_degree
    }

    pub fn max_degree(&self) -> i32 {
        self.min_degree + self.generators.len() as i32 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.min_degree..=self.max_degree()
    }

    fn index(&self, k: i32) -> Option<usize> {
        (k >= self.min_degree && k <= self.max_degree()).then(|| (k - self.min_degree) as usize)
    }

    pub fn dim(&self, k: i32) -> usize {
        self.index(k).map_or(0, |i| self.generators[i].len())
    }

    pub fn labels(&self, k: i32) -> &[String] {
        self.index(k).map_or(&[], |i| &self.generators[i])
    }

    pub fn generators(&self) -> &[Vec<String>] {
        &self.generators
    }

    pub fn boundary(&self, k: i32) -> OmegaMatrix {
        match self.index(k) {
            Some(i) => self.boundaries[i].clone(),
            None => OmegaMatrix::zeros(self.dim(k - 1), self.dim(k)),
        }
    }

    pub fn validate(&self) -> Result<(), BoundaryViolation> {
        for k in self.degrees() {
            let dd = self
                .boundary(k - 1)
                .compose(&self.boundary(k))
                .expect("adjacent shapes agree");
            if let Some((r, c, _)) = dd.first_nonzero() {
                return Err(BoundaryViolation {
                    degree: k,
                    generator: self.labels(k)[c].clone(),
                    hits: self.labels(k - 2)[r].clone(),
                });
            }
        }
        Ok(())
    }

    /// The underlying Z2 complex when every boundary entry is `0` or `T^0`.
    pub fn constant_part(&self) -> Result<ChainComplex, ComplexError> {
        let mut boundaries = BTreeMap::new();
        for k in self.degrees() {
            let m = self
                .boundary(k)
                .as_constant()
                .ok_or(ComplexError::NonConstantBoundary(k))?;
            boundaries.insert(k, m);
        }
        ChainComplex::new(self.min_degree, self.generators.clone(), boundaries)
    }
}

/// Free ranks of the homology of `C ⊗ Ω`. Only constant boundaries are
/// supported: for those the homology is `H(C) ⊗ Ω` degreewise.
pub fn omega_homology_dims(c: &OmegaComplex) -> Result<BettiNumbers, ComplexError> {
    Ok(homology_dims(&c.constant_part()?))
}

/// A map of T-ring complexes with a degree shift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaChainMap {
    source: OmegaComplex,
    target: OmegaComplex,
    shift: i32,
    matrices: BTreeMap<i32, OmegaMatrix>,
}

impl OmegaChainMap {
    pub fn new(
        source: OmegaComplex,
        target: OmegaComplex,
        shift: i32,
        mut matrices: BTreeMap<i32, OmegaMatrix>,
    ) -> Result<Self, ComplexError> {
        let mut full = BTreeMap::new();
        for k in source.degrees() {
            let expected = (target.dim(k + shift), source.dim(k));
            let m = matrices
                .remove(&k)
                .unwrap_or_else(|| OmegaMatrix::zeros(expected.0, expected.1));
            if m.shape() != expected {
                return Err(ComplexError::MapShape {
                    degree: k,
                    expected,
                    found: m.shape(),
                });
            }
            full.insert(k, m);
        }
        Ok(Self {
            source,
            target,
            shift,
            matrices: full,
        })
    }

    pub fn identity(c: &OmegaComplex) -> Self {
        let matrices = c.degrees().map(|k| (k, OmegaMatrix::identity(c.dim(k)))).collect();
        Self {
            source: c.clone(),
            target: c.clone(),
            shift: 0,
            matrices,
        }
    }

    pub fn zero(source: &OmegaComplex, target: &OmegaComplex, shift: i32) -> Self {
        Self::new(source.clone(), target.clone(), shift, BTreeMap::new()).expect("zero map")
    }

    pub fn source(&self) -> &OmegaComplex {
        &self.source
    }

    pub fn target(&self) -> &OmegaComplex {
        &self.target
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }

    pub fn matrix(&self, k: i32) -> OmegaMatrix {
        self.matrices
            .get(&k)
            .cloned()
            .unwrap_or_else(|| OmegaMatrix::zeros(self.target.dim(k + self.shift), self.source.dim(k)))
    }

    pub fn matrices(&self) -> &BTreeMap<i32, OmegaMatrix> {
        &self.matrices
    }

    pub fn is_chain_map(&self) -> Result<(), OmegaCommutationViolation> {
        let s = self.shift;
        for k in self.source.degrees() {
            let lhs = self.target.boundary(k + s).compose(&self.matrix(k)).expect("shapes");
            let rhs = self.matrix(k - 1).compose(&self.source.boundary(k)).expect("shapes");
            let diff = lhs.add(&rhs).expect("shapes");
            if let Some((r, c, e)) = diff.first_nonzero() {
                return Err(OmegaCommutationViolation {
                    degree: k,
                    source_generator: self.source.labels(k)[c].clone(),
                    target_generator: self.target.labels(k + s - 1)[r].clone(),
                    discrepancy: e.to_string(),
                });
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &OmegaChainMap) -> Result<OmegaChainMap, ComplexError> {
        if self.source != other.source || self.target != other.target || self.shift != other.shift {
            return Err(ComplexError::Incompatible);
        }
        let matrices = self
            .matrices
            .iter()
            .map(|(&k, m)| (k, m.add(&other.matrix(k)).expect("shapes")))
            .collect();
        Ok(OmegaChainMap {
            matrices,
            ..self.clone()
        })
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &OmegaChainMap) -> Result<OmegaChainMap, ComplexError> {
        if first.target != self.source {
            return Err(ComplexError::Incompatible);
        }
        let matrices = first
            .source
            .degrees()
            .map(|k| {
                (
                    k,
                    self.matrix(k + first.shift).compose(&first.matrix(k)).expect("shapes"),
                )
            })
            .collect();
        Ok(OmegaChainMap {
            source: first.source.clone(),
            target: self.target.clone(),
            shift: self.shift + first.shift,
            matrices,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OmegaCommutationViolation {
    pub degree: i32,
    pub source_generator: String,
    pub target_generator: String,
    pub discrepancy: String,
}

impl fmt::Display for OmegaCommutationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "map does not commute with the boundary in degree {}: `{}` → `{}` off by {}",
            self.degree, self.source_generator, self.target_generator, self.discrepancy
        )
    }
}

/// How the operator sum is read before testing it for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Projection {
    /// The sum itself must vanish.
    None,
    /// `Π+ ∘ (sum) ∘ Π-` must vanish.
    NonnegAfterNonpos,
}

/// A nonzero entry of a homotopy identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityWitness {
    pub degree: i32,
    pub source_generator: String,
    pub target_generator: String,
    /// The surviving entry, after projection when one is applied.
    pub value: String,
}

impl fmt::Display for IdentityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "identity fails in degree {} at `{}` → `{}`: {}",
            self.degree, self.source_generator, self.target_generator, self.value
        )
    }
}

/// Evaluates `Σ maps + h∂ + ∂h`, optionally as `Π+(·)Π-`, and confirms the
/// zero map.
///
/// `Π+ X Π-` vanishes exactly when no entry of `X` has a term `T^λ` with
/// `λ >= 0`: an input `T^μ z` with `μ <= 0` meets an entry term `T^λ` at
/// `T^{λ+μ}`, and `μ = 0` is the worst case.
pub fn check_homotopy_identity(
    maps: &[OmegaChainMap],
    h: &OmegaChainMap,
    project: Projection,
) -> Result<Result<(), IdentityWitness>, ComplexError> {
    if h.shift() != 1 {
        return Err(ComplexError::Shift {
            op: "homotopy",
            expected: 1,
            found: h.shift(),
        });
    }
    let (s, t) = (h.source(), h.target());
    for m in maps {
        if m.source() != s || m.target() != t || m.shift() != 0 {
            return Err(ComplexError::Incompatible);
        }
    }
    for k in s.degrees() {
        let mut total = h.matrix(k - 1).compose(&s.boundary(k)).expect("shapes");
        total = total
            .add(&t.boundary(k + 1).compose(&h.matrix(k)).expect("shapes"))
            .expect("shapes");
        for m in maps {
            total = total.add(&m.matrix(k)).expect("shapes");
        }
        let reduced = match project {
            Projection::None => total,
            Projection::NonnegAfterNonpos => total.proj_nonneg(),
        };
        if let Some((r, c, e)) = reduced.first_nonzero() {
            return Ok(Err(IdentityWitness {
                degree: k,
                source_generator: s.labels(k)[c].clone(),
                target_generator: t.labels(k)[r].clone(),
                value: e.to_string(),
            }));
        }
    }
    Ok(Ok(()))
}

/// The Z2 form of [`check_homotopy_identity`] without projection.
pub fn check_homotopy_identity_z2(
    maps: &[ChainMap],
    h: &ChainHomotopy,
) -> Result<Result<(), IdentityWitness>, ComplexError> {
    let lifted: Vec<OmegaChainMap> = maps.iter().map(ChainMap::tensor_omega).collect();
    check_homotopy_identity(&lifted, &h.tensor_omega(), Projection::None)
}

/// A chain of the T-ring complex, stored as one Z2 chain per exponent.
pub fn omega_chain_slices(column: &[OmegaElement]) -> BTreeMap<crate::omega::Exponent, F2Vector> {
    let mut out: BTreeMap<crate::omega::Exponent, F2Vector> = BTreeMap::new();
    for (i, e) in column.iter().enumerate() {
        for x in e.exponents() {
            out.entry(x.clone())
                .or_insert_with(|| F2Vector::zeros(column.len()))
                .flip(i);
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::omega::Exponent;

    fn labels(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn circle() -> ChainComplex {
        ChainComplex::new(0, vec![labels(&["v"]), labels(&["e"])], BTreeMap::new()).unwrap()
    }

    fn torus() -> ChainComplex {
        ChainComplex::new(
            0,
            vec![labels(&["v"]), labels(&["a", "b"]), labels(&["f"])],
            BTreeMap::new(),
        )
        .unwrap()
    }

    fn rp2() -> ChainComplex {
        // v; a with ∂a = v + v = 0; f with ∂f = 2a = 0
        ChainComplex::new(0, vec![labels(&["v"]), labels(&["a"]), labels(&["f"])], BTreeMap::new()).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(circle().validate().is_ok());
        assert!(torus().validate().is_ok());
        let bad = ChainComplex::new_unchecked(
            0,
            vec![labels(&["x"]), labels(&["y"]), labels(&["z"])],
            BTreeMap::from([
                (1, F2Matrix::from_rows(&[vec![1]])),
                (2, F2Matrix::from_rows(&[vec![1]])),
            ]),
        )
        .unwrap();
        let v = bad.validate().unwrap_err();
        assert_eq!((v.degree, v.generator.as_str(), v.hits.as_str()), (2, "z", "x"));
    }

    #[test]
    fn shape_errors() {
        let err = ChainComplex::new(
            0,
            vec![labels(&["v"]), labels(&["e"])],
            BTreeMap::from([(1, F2Matrix::zeros(2, 1))]),
        )
        .unwrap_err();
        assert!(matches!(err, ComplexError::BoundaryShape { degree: 1, .. }));
        let err = ChainComplex::new(0, vec![labels(&["v"])], BTreeMap::from([(3, F2Matrix::zeros(0, 0))])).unwrap_err();
        assert_eq!(err, ComplexError::BoundaryOutOfRange(3));
    }

    #[test]
    fn homology_examples() {
        assert_eq!(betti_vec(&circle()), vec![1, 1]);
        assert_eq!(betti_vec(&torus()), vec![1, 2, 1]);
        assert_eq!(betti_vec(&rp2()), vec![1, 1, 1]);
        // an interval: two vertices joined by an edge
        let interval = ChainComplex::new(
            0,
            vec![labels(&["p", "q"]), labels(&["e"])],
            BTreeMap::from([(1, F2Matrix::from_rows(&[vec![1], vec![1]]))]),
        )
        .unwrap();
        assert_eq!(betti_vec(&interval), vec![1, 0]);
    }

    #[test]
    fn homology_coordinates() {
        let c = torus();
        let h = HomologyDegree::compute(&c, 1);
        assert_eq!(h.dim(), 2);
        let ab = F2Vector::from_u8(&[1, 1]);
        let coords = h.coordinates(&ab).unwrap();
        assert_eq!(h.chain_of(&coords), ab);
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let c = torus();
        let cone = mapping_cone(&ChainMap::identity(&c)).unwrap();
        assert!(homology_dims(&cone).values().all(|&d| d == 0));
    }

    #[test]
    fn cone_of_zero_map_is_a_sum() {
        let c = torus();
        let cone = mapping_cone(&ChainMap::zero(&c, &c, 0)).unwrap();
        assert_eq!(betti_vec(&cone), vec![1, 3, 3, 1]);
    }

    #[test]
    fn cone_of_dehn_twist_plus_identity() {
        let c = torus();
        let twist = F2Matrix::from_rows(&[vec![1, 1], vec![0, 1]]);
        let g = ChainMap::new(
            c.clone(),
            c.clone(),
            0,
            BTreeMap::from([(0, F2Matrix::identity(1)), (1, twist), (2, F2Matrix::identity(1))]),
        )
        .unwrap();
        let k = g.add(&ChainMap::identity(&c)).unwrap();
        let cone = mapping_cone(&k).unwrap();
        // brute force: H_k(cone) = coker(k_*)_k ⊕ ker(k_*)_{k-1}; k_* is
        // zero except [[0,1],[0,0]] on H_1, so ranks (1, 2-1+1, 1+1, 1)
        assert_eq!(betti_vec(&cone), vec![1, 2, 2, 1]);
    }

    #[test]
    fn chain_map_checks() {
        let c = torus();
        assert!(ChainMap::identity(&c).is_chain_map().is_ok());
        let any = ChainMap::new(
            c.clone(),
            c.clone(),
            0,
            BTreeMap::from([(1, F2Matrix::from_rows(&[vec![0, 1], vec![1, 1]]))]),
        )
        .unwrap();
        assert!(any.is_chain_map().is_ok());
        // RP²-like target with nonzero ∂ on the 2-cell: X = (v, a, f), ∂f = a.
        let disk = ChainComplex::new(
            0,
            vec![labels(&["v"]), labels(&["a"]), labels(&["f"])],
            BTreeMap::from([(2, F2Matrix::from_rows(&[vec![1]]))]),
        )
        .unwrap();
        // send the 2-cell of rp2 (∂ = 0) to f, whose boundary is a ≠ 0
        let bad = ChainMap::new(rp2(), disk, 0, BTreeMap::from([(2, F2Matrix::identity(1))])).unwrap();
        let v = bad.is_chain_map().unwrap_err();
        assert_eq!(
            (v.degree, v.source_generator.as_str(), v.target_generator.as_str()),
            (2, "f", "a")
        );
    }

    #[test]
    fn homotopy_identity_examples() {
        let c = torus();
        let id = ChainMap::identity(&c);
        let h0 = ChainHomotopy::zero(&c, &c);
        assert!(check_homotopy_identity_z2(&[id.clone(), id.clone()], &h0)
            .unwrap()
            .is_ok());
        assert!(check_homotopy_identity_z2(&[id], &h0).unwrap().is_err());
    }

    #[test]
    fn projected_identity_ignores_negative_exponents() {
        let c = torus().tensor_omega();
        let h = OmegaChainMap::zero(&c, &c, 1);
        let mut m = OmegaChainMap::identity(&c).matrices().clone();
        m.get_mut(&1)
            .unwrap()
            .set(0, 1, OmegaElement::monomial(Exponent::new(-1, 1)));
        let perturbed = OmegaChainMap::new(c.clone(), c.clone(), 0, m).unwrap();
        let id = OmegaChainMap::identity(&c);
        let ok = check_homotopy_identity(&[id.clone(), perturbed.clone()], &h, Projection::NonnegAfterNonpos);
        assert!(ok.unwrap().is_ok());
        let strict = check_homotopy_identity(&[id, perturbed], &h, Projection::None).unwrap();
        assert_eq!(strict.unwrap_err().value, "1*T^(-1)");
    }

    #[test]
    fn exactness_examples() {
        let c = torus();
        let zero = ChainComplex::with_zero_boundary(0, &[0, 0, 0]);
        let into = ChainMap::zero(&zero, &c, 0);
        let id = ChainMap::identity(&c);
        let out = ChainMap::zero(&c, &zero, 0);
        // 0 → C → C by the identity is exact at the middle
        assert!(check_exactness(&into, &id).unwrap().is_ok());
        assert!(check_exactness(&id, &out).unwrap().is_ok());
        let v = check_exactness(&into, &out).unwrap().unwrap_err();
        assert_eq!((v.degree, v.image_rank, v.kernel_dim), (0, 0, 1));
        assert!(check_exactness(&id, &into).is_err());
    }

    #[test]
    fn null_homotopy_solver() {
        let interval = ChainComplex::new(
            0,
            vec![labels(&["p", "q"]), labels(&["e"])],
            BTreeMap::from([(1, F2Matrix::from_rows(&[vec![1], vec![1]]))]),
        )
        .unwrap();
        // Id + (collapse to p) is null-homotopic on the contractible interval
        let collapse = ChainMap::new(
            interval.clone(),
            interval.clone(),
            0,
            BTreeMap::from([(0, F2Matrix::from_rows(&[vec![1, 1], vec![0, 0]]))]),
        )
        .unwrap();
        assert!(collapse.is_chain_map().is_ok());
        let r = collapse.add(&ChainMap::identity(&interval)).unwrap();
        let h = solve_null_homotopy(&r).expect("homotopic");
        assert_eq!(h.boundary_commutator(), r);
        // the identity of the circle is not null-homotopic
        assert!(solve_null_homotopy(&ChainMap::identity(&circle())).is_none());
    }

    #[test]
    fn chain_map_space() {
        let c = torus();
        // zero boundary: every degree-preserving map is a chain map
        assert_eq!(chain_map_basis(&c, &c).len(), 1 + 4 + 1);
        for f in chain_map_basis(&c, &c) {
            assert!(f.is_chain_map().is_ok());
        }
    }

    #[test]
    fn reordering_preserves_homology() {
        let interval = ChainComplex::new(
            0,
            vec![labels(&["p", "q", "r"]), labels(&["e", "d"])],
            BTreeMap::from([(1, F2Matrix::from_rows(&[vec![1, 0], vec![1, 1], vec![0, 1]]))]),
        )
        .unwrap();
        let perm = BTreeMap::from([(0, vec![2, 0, 1]), (1, vec![1, 0])]);
        assert_eq!(homology_dims(&interval.permuted(&perm)), homology_dims(&interval));
    }

    #[test]
    fn omega_complex_constant_part() {
        let c = torus().tensor_omega();
        assert_eq!(
            omega_homology_dims(&c).unwrap(),
            BTreeMap::from([(0, 1), (1, 2), (2, 1)])
        );
    }
}
