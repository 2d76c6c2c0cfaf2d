//! Finite cell complexes with acyclic matchings (discrete gradient fields)
//! and the Morse chain complexes they produce.
//!
//! Unmatched cells are the critical cells. The Morse boundary of a critical
//! cell counts gradient V-paths to critical cells one dimension down, mod 2.
//! Continuation and pushforward maps go through the cellular chains using
//! the stabilized flow `Φ = 1 + ∂V + V∂`.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::complexes::{ChainComplex, ChainMap, CommutationViolation, ComplexError};
use crate::f2::{F2Matrix, F2Vector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorseError {
    #[error("duplicate cell label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown cell `{0}`")]
    UnknownCell(String),
    #[error("incidence `{coface}` > `{face}` is not between adjacent dimensions")]
    NonAdjacentIncidence { coface: String, face: String },
    #[error("cellular boundary does not square to zero: {0}")]
    NotAComplex(String),
    #[error("matched pair (`{0}`, `{1}`) is not a face-coface pair with odd incidence")]
    NotAFacePair(String, String),
    #[error("cell `{0}` appears in more than one matched pair")]
    MatchedTwice(String),
    #[error("matching is not acyclic: {0}")]
    Cyclic(MatchingCycle),
    #[error("the two matchings live on different cell complexes")]
    DifferentComplexes,
    #[error("not a cellular automorphism: {0}")]
    NotAnAutomorphism(String),
    #[error("supplied matrices are not a chain map: {0}")]
    NotAChainMap(CommutationViolation),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Position of a cell: its dimension and index within that dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellId {
    pub dim: usize,
    pub index: usize,
}

/// A finite regular cell complex with Z2 incidences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellComplex {
    cells: Vec<Vec<String>>,
    /// `faces[d][i]`: indices of the (d-1)-cells with odd incidence on cell (d, i).
    faces: Vec<Vec<Vec<usize>>>,
    lookup: HashMap<String, CellId>,
}

impl CellComplex {
    /// `incidence` lists (coface, face) label pairs; a pair listed twice
    /// cancels, matching a degree-2 attaching map.
    pub fn new(cells: Vec<Vec<String>>, incidence: &[(String, String)]) -> Result<Self, MorseError> {
        let mut lookup = HashMap::new();
        for (d, layer) in cells.iter().enumerate() {
            for (i, l) in layer.iter().enumerate() {
                if lookup.insert(l.clone(), CellId { dim: d, index: i }).is_some() {
                    return Err(MorseError::DuplicateLabel(l.clone()));
                }
            }
        }
        let mut parity: BTreeMap<(CellId, usize), bool> = BTreeMap::new();
        for (coface, face) in incidence {
            let c = *lookup
                .get(coface)
                .ok_or_else(|| MorseError::UnknownCell(coface.clone()))?;
            let f = *lookup.get(face).ok_or_else(|| MorseError::UnknownCell(face.clone()))?;
            if c.dim != f.dim + 1 {
                return Err(MorseError::NonAdjacentIncidence {
                    coface: coface.clone(),
                    face: face.clone(),
                });
            }
            *parity.entry((c, f.index)).or_default() ^= true;
        }
        let mut faces: Vec<Vec<Vec<usize>>> = cells.iter().map(|l| vec![Vec::new(); l.len()]).collect();
        for ((c, f), odd) in parity {
            if odd {
                faces[c.dim][c.index].push(f);
            }
        }
        let complex = Self { cells, faces, lookup };
        complex
            .chain_complex_unchecked()
            .validate()
            .map_err(|v| MorseError::NotAComplex(v.to_string()))?;
        Ok(complex)
    }

    pub fn dimension(&self) -> usize {
        self.cells.len().saturating_sub(1)
    }

    pub fn count(&self, dim: usize) -> usize {
        self.cells.get(dim).map_or(0, Vec::len)
    }

    pub fn total_cells(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    pub fn cells(&self) -> &[Vec<String>] {
        &self.cells
    }

    pub fn label(&self, id: CellId) -> &str {
        &self.cells[id.dim][id.index]
    }

    pub fn id(&self, label: &str) -> Option<CellId> {
        self.lookup.get(label).copied()
    }

    /// Faces of `id` with odd incidence.
    pub fn faces(&self, id: CellId) -> &[usize] {
        &self.faces[id.dim][id.index]
    }

    pub fn is_face(&self, face: CellId, coface: CellId) -> bool {
        coface.dim == face.dim + 1 && self.faces(coface).contains(&face.index)
    }

    /// All (coface, face) label pairs with odd incidence.
    pub fn incidence_pairs(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for (d, layer) in self.faces.iter().enumerate().skip(1) {
            for (i, fs) in layer.iter().enumerate() {
                for &f in fs {
                    out.push((self.cells[d][i].clone(), self.cells[d - 1][f].clone()));
                }
            }
        }
        out
    }

    /// The cellular boundary `∂_d` as a `count(d-1) x count(d)` matrix.
    pub fn boundary_matrix(&self, dim: usize) -> F2Matrix {
        let rows = if dim == 0 { 0 } else { self.count(dim - 1) };
        let mut m = F2Matrix::zeros(rows, self.count(dim));
        for (i, fs) in self.faces.get(dim).into_iter().flatten().enumerate() {
            for &f in fs {
                m.set(f, i, true);
            }
        }
        m
    }

    fn chain_complex_unchecked(&self) -> ChainComplex {
        let boundaries = (1..self.cells.len())
            .map(|d| (d as i32, self.boundary_matrix(d)))
            .collect();
        ChainComplex::new_unchecked(0, self.cells.clone(), boundaries).expect("shapes are consistent")
    }

    /// The cellular chain complex.
    pub fn chain_complex(&self) -> ChainComplex {
        let c = self.chain_complex_unchecked();
        debug_assert!(c.validate().is_ok());
        c
    }

    /// `∂` of a d-chain, as a (d-1)-chain.
    pub fn boundary_of(&self, dim: usize, chain: &F2Vector) -> F2Vector {
        if dim == 0 {
            return F2Vector::zeros(0);
        }
        let mut out = F2Vector::zeros(self.count(dim - 1));
        for i in chain.ones() {
            for &f in &self.faces[dim][i] {
                out.flip(f);
            }
        }
        out
    }
}

/// A closed V-path: a sequence of cells of one dimension, each reaching the
/// next through the coface it is matched with.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchingCycle {
    pub dim: usize,
    pub cells: Vec<String>,
}

impl fmt::Display for MatchingCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V-path cycle in dimension {}: {}", self.dim, self.cells.join(" -> "))
    }
}

/// A cell complex with a partial matching of faces to cofaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorseData {
    complex: CellComplex,
    /// `up[d][i]`: the (d+1)-cell matched with (d, i).
    up: Vec<Vec<Option<usize>>>,
    /// `down[d][i]`: the (d-1)-cell matched with (d, i).
    down: Vec<Vec<Option<usize>>>,
}

impl MorseData {
    /// Builds the matching from (face, coface) label pairs. Checks that each
    /// pair is a face pair and no cell is reused; acyclicity is left to
    /// [`MorseData::validate_matching`].
    pub fn new(complex: CellComplex, pairs: &[(String, String)]) -> Result<Self, MorseError> {
        let mut data = Self::unmatched(complex);
        for (face, coface) in pairs {
            let f = data
                .complex
                .id(face)
                .ok_or_else(|| MorseError::UnknownCell(face.clone()))?;
            let c = data
                .complex
                .id(coface)
                .ok_or_else(|| MorseError::UnknownCell(coface.clone()))?;
            data.add_pair(f, c)?;
        }
        Ok(data)
    }

    pub fn unmatched(complex: CellComplex) -> Self {
        let up = complex.cells.iter().map(|l| vec![None; l.len()]).collect();
        let down = complex.cells.iter().map(|l| vec![None; l.len()]).collect();
        Self { complex, up, down }
    }

    pub fn add_pair(&mut self, face: CellId, coface: CellId) -> Result<(), MorseError> {
        if !self.complex.is_face(face, coface) {
            return Err(MorseError::NotAFacePair(
                self.complex.label(face).to_string(),
                self.complex.label(coface).to_string(),
            ));
        }
        for id in [face, coface] {
            if self.is_matched(id) {
                return Err(MorseError::MatchedTwice(self.complex.label(id).to_string()));
            }
        }
        self.up[face.dim][face.index] = Some(coface.index);
        self.down[coface.dim][coface.index] = Some(face.index);
        Ok(())
    }

    pub fn remove_pair(&mut self, face: CellId, coface: CellId) {
        self.up[face.dim][face.index] = None;
        self.down[coface.dim][coface.index] = None;
    }

    pub fn complex(&self) -> &CellComplex {
        &self.complex
    }

    pub fn is_matched(&self, id: CellId) -> bool {
        self.up[id.dim][id.index].is_some() || self.down[id.dim][id.index].is_some()
    }

    pub fn partner_up(&self, id: CellId) -> Option<CellId> {
        self.up[id.dim][id.index].map(|index| CellId { dim: id.dim + 1, index })
    }

    /// (face, coface) label pairs, ordered by face position.
    pub fn pairs(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for (d, layer) in self.up.iter().enumerate() {
            for (i, m) in layer.iter().enumerate() {
                if let Some(j) = m {
                    out.push((self.complex.cells[d][i].clone(), self.complex.cells[d + 1][*j].clone()));
                }
            }
        }
        out
    }

    /// Indices of critical cells in each dimension.
    pub fn critical(&self) -> Vec<Vec<usize>> {
        (0..self.complex.cells.len())
            .map(|d| {
                (0..self.complex.count(d))
                    .filter(|&i| !self.is_matched(CellId { dim: d, index: i }))
                    .collect()
            })
            .collect()
    }

    /// Successors of `index` in the V-path digraph on `dim`-cells.
    fn vpath_successors(&self, dim: usize, index: usize) -> impl Iterator<Item = usize> + '_ {
        let coface = self.up[dim][index];
        coface
            .into_iter()
            .flat_map(move |c| self.complex.faces[dim + 1][c].iter().copied())
            .filter(move |&f| f != index)
    }

    /// Topological order of the `dim`-cells under the V-path relation, or
    /// the cells of one cycle.
    fn vpath_order(&self, dim: usize) -> Result<Vec<usize>, Vec<usize>> {
        let n = self.complex.count(dim);
        let mut indegree = vec![0usize; n];
        for i in 0..n {
            for j in self.vpath_successors(dim, i) {
                indegree[j] += 1;
            }
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(i) = queue.pop_front() {
            order.push(i);
            for j in self.vpath_successors(dim, i) {
                indegree[j] -= 1;
                if indegree[j] == 0 {
                    queue.push_back(j);
                }
            }
        }
        if order.len() == n {
            return Ok(order);
        }
        // every remaining cell has a predecessor among the remaining cells;
        // walking backwards must revisit a cell
        let remaining: Vec<bool> = indegree.iter().map(|&d| d > 0).collect();
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        for i in (0..n).filter(|&i| remaining[i]) {
            for j in self.vpath_successors(dim, i) {
                if remaining[j] {
                    preds[j].push(i);
                }
            }
        }
        let start = (0..n).find(|&i| remaining[i]).expect("a cycle exists");
        let mut seen = vec![usize::MAX; n];
        let mut walk = Vec::new();
        let mut cur = start;
        while seen[cur] == usize::MAX {
            seen[cur] = walk.len();
            walk.push(cur);
            cur = preds[cur][0];
        }
        let mut cycle: Vec<usize> = walk[seen[cur]..].to_vec();
        cycle.reverse();
        Err(cycle)
    }

    /// Ok iff the V-path relation has no closed loop in any dimension.
    pub fn validate_matching(&self) -> Result<(), MatchingCycle> {
        for dim in 0..self.complex.cells.len() {
            if let Err(cycle) = self.vpath_order(dim) {
                let mut cells: Vec<String> = cycle.iter().map(|&i| self.complex.cells[dim][i].clone()).collect();
                cells.push(cells[0].clone());
                return Err(MatchingCycle { dim, cells });
            }
        }
        Ok(())
    }

    /// `V` on a d-chain: each cell matched upward goes to its partner.
    fn apply_v(&self, dim: usize, chain: &F2Vector) -> F2Vector {
        let mut out = F2Vector::zeros(self.complex.count(dim + 1));
        for i in chain.ones() {
            if let Some(j) = self.up[dim][i] {
                out.flip(j);
            }
        }
        out
    }

    /// The stabilized flow `Φ^∞(c)` of a d-chain, `Φ = 1 + ∂V + V∂`.
    pub fn flow(&self, dim: usize, chain: &F2Vector) -> F2Vector {
        let mut cur = chain.clone();
        // a V-path visits each cell at most once, so the flow stabilizes
        // after at most (number of d-cells + 1) steps
        for _ in 0..=self.complex.count(dim) + 1 {
            let mut next = cur.clone();
            if dim + 1 < self.complex.cells.len() {
                next.add_assign(&self.complex.boundary_of(dim + 1, &self.apply_v(dim, &cur)));
            }
            if dim > 0 {
                next.add_assign(&self.apply_v(dim - 1, &self.complex.boundary_of(dim, &cur)));
            }
            if next == cur {
                return cur;
            }
            cur = next;
        }
        panic!("flow did not stabilize; matching is not acyclic")
    }
}

/// A Morse complex: generators are critical cells, boundary counts V-paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorseComplex {
    pub complex: ChainComplex,
    /// Indices of the critical cells in each dimension.
    pub critical: Vec<Vec<usize>>,
}

impl MorseComplex {
    pub fn chain_complex(&self) -> &ChainComplex {
        &self.complex
    }
}

/// Builds the Morse complex of a valid matching.
pub fn build_morse_complex(d: &MorseData) -> Result<MorseComplex, MorseError> {
    d.validate_matching().map_err(MorseError::Cyclic)?;
    let critical = d.critical();
    let cx = &d.complex;
    let ndim = cx.cells.len();
    let generators: Vec<Vec<String>> = critical
        .iter()
        .enumerate()
        .map(|(dim, idx)| idx.iter().map(|&i| cx.cells[dim][i].clone()).collect())
        .collect();
    let mut boundaries = BTreeMap::new();
    for dim in 1..ndim {
        let order = d.vpath_order(dim - 1).expect("validated");
        let mut m = F2Matrix::zeros(critical[dim - 1].len(), critical[dim].len());
        let position: HashMap<usize, usize> = critical[dim - 1].iter().enumerate().map(|(p, &i)| (i, p)).collect();
        for (col, &alpha) in critical[dim].iter().enumerate() {
            let counts = gradient_path_counts(d, dim, alpha, &order);
            for f in counts.ones() {
                if let Some(&row) = position.get(&f) {
                    m.set(row, col, true);
                }
            }
        }
        boundaries.insert(dim as i32, m);
    }
    let complex = ChainComplex::new(0, generators, boundaries)?;
    Ok(MorseComplex { complex, critical })
}

/// Mod-2 numbers of gradient paths from the faces of critical cell `alpha`
/// to each (dim-1)-cell where a path can stop. Cells matched upward are
/// pushed along their V-path in topological order; what remains on
/// critical cells is the count.
fn gradient_path_counts(d: &MorseData, dim: usize, alpha: usize, order: &[usize]) -> F2Vector {
    let cx = &d.complex;
    let mut x = cx.boundary_of(dim, &F2Vector::unit(cx.count(dim), alpha));
    for &sigma in order {
        if !x.get(sigma) {
            continue;
        }
        if let Some(tau) = d.up[dim - 1][sigma] {
            if tau == alpha {
                continue;
            }
            for &f in &cx.faces[dim][tau] {
                x.flip(f);
            }
        }
    }
    x
}

/// `ι`: critical cells of `d` into cellular chains, `α ↦ Φ^∞(α)`.
pub fn lift(d: &MorseData, morse: &MorseComplex, dim: usize, chain: &F2Vector) -> F2Vector {
    let mut cellular = F2Vector::zeros(d.complex.count(dim));
    for p in chain.ones() {
        cellular.flip(morse.critical[dim][p]);
    }
    d.flow(dim, &cellular)
}

/// `π`: cellular chains onto critical cells, `c ↦ Φ^∞(c)|crit`.
pub fn project(d: &MorseData, morse: &MorseComplex, dim: usize, chain: &F2Vector) -> F2Vector {
    let flowed = d.flow(dim, chain);
    F2Vector::from_bits(morse.critical[dim].iter().map(|&i| flowed.get(i)))
}

/// The chain map `MC(a) → MC(b)` given by `π_b ∘ ι_a`.
pub fn continuation_map(a: &MorseData, b: &MorseData) -> Result<ChainMap, MorseError> {
    if a.complex != b.complex {
        return Err(MorseError::DifferentComplexes);
    }
    let ma = build_morse_complex(a)?;
    let mb = build_morse_complex(b)?;
    Ok(continuation_between(a, &ma, b, &mb))
}

pub(crate) fn continuation_between(a: &MorseData, ma: &MorseComplex, b: &MorseData, mb: &MorseComplex) -> ChainMap {
    let matrices = (0..a.complex.cells.len())
        .map(|dim| {
            let cols: Vec<F2Vector> = (0..ma.critical[dim].len())
                .map(|p| {
                    let cell = lift(a, ma, dim, &F2Vector::unit(ma.critical[dim].len(), p));
                    project(b, mb, dim, &cell)
                })
                .collect();
            (dim as i32, F2Matrix::from_columns(mb.critical[dim].len(), &cols))
        })
        .collect();
    ChainMap::new(ma.complex.clone(), mb.complex.clone(), 0, matrices).expect("shapes")
}

/// A dimension-preserving bijection of cells, `image[d][i]` being the image
/// of cell (d, i).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellularMap {
    pub image: Vec<Vec<usize>>,
}

impl CellularMap {
    pub fn identity(cx: &CellComplex) -> Self {
        Self {
            image: cx.cells.iter().map(|l| (0..l.len()).collect()).collect(),
        }
    }

    /// From a label map; cells not mentioned are fixed.
    pub fn from_labels(cx: &CellComplex, map: &BTreeMap<String, String>) -> Result<Self, MorseError> {
        let mut out = Self::identity(cx);
        for (from, to) in map {
            let f = cx.id(from).ok_or_else(|| MorseError::UnknownCell(from.clone()))?;
            let t = cx.id(to).ok_or_else(|| MorseError::UnknownCell(to.clone()))?;
            if f.dim != t.dim {
                return Err(MorseError::NotAnAutomorphism(format!(
                    "`{from}` and `{to}` differ in dimension"
                )));
            }
            out.image[f.dim][f.index] = t.index;
        }
        Ok(out)
    }

    /// Checks bijectivity and that incidences are carried to incidences.
    pub fn validate(&self, cx: &CellComplex) -> Result<(), MorseError> {
        for (d, img) in self.image.iter().enumerate() {
            let mut seen = vec![false; cx.count(d)];
            for &j in img {
                if j >= seen.len() || std::mem::replace(&mut seen[j], true) {
                    return Err(MorseError::NotAnAutomorphism(format!(
                        "not a bijection in dimension {d}"
                    )));
                }
            }
        }
        for d in 1..cx.cells.len() {
            for i in 0..cx.count(d) {
                let mut mapped: Vec<usize> = cx.faces[d][i].iter().map(|&f| self.image[d - 1][f]).collect();
                mapped.sort_unstable();
                let mut actual = cx.faces[d][self.image[d][i]].clone();
                actual.sort_unstable();
                if mapped != actual {
                    return Err(MorseError::NotAnAutomorphism(format!(
                        "faces of `{}` are not sent to faces of `{}`",
                        cx.cells[d][i], cx.cells[d][self.image[d][i]]
                    )));
                }
            }
        }
        Ok(())
    }

    fn apply(&self, dim: usize, chain: &F2Vector) -> F2Vector {
        let mut out = F2Vector::zeros(chain.len());
        for i in chain.ones() {
            out.flip(self.image[dim][i]);
        }
        out
    }
}

/// The self-map of `MC(d)` realizing a cellular automorphism followed by
/// the retraction back onto the critical cells: `π ∘ A ∘ ι`.
pub fn pushforward_map(d: &MorseData, auto: &CellularMap) -> Result<ChainMap, MorseError> {
    auto.validate(&d.complex)?;
    let m = build_morse_complex(d)?;
    let matrices = (0..d.complex.cells.len())
        .map(|dim| {
            let n = m.critical[dim].len();
            let cols: Vec<F2Vector> = (0..n)
                .map(|p| project(d, &m, dim, &auto.apply(dim, &lift(d, &m, dim, &F2Vector::unit(n, p)))))
                .collect();
            (dim as i32, F2Matrix::from_columns(n, &cols))
        })
        .collect();
    Ok(ChainMap::new(m.complex.clone(), m.complex.clone(), 0, matrices)?)
}

/// A self-map of `MC(d)` supplied directly as matrices, for actions no
/// cellular automorphism realizes. Shapes and `∂f = f∂` are checked.
pub fn ingest_chain_map(morse: &MorseComplex, matrices: BTreeMap<i32, F2Matrix>) -> Result<ChainMap, MorseError> {
    let f = ChainMap::new(morse.complex.clone(), morse.complex.clone(), 0, matrices)?;
    f.is_chain_map().map_err(MorseError::NotAChainMap)?;
    Ok(f)
}

/// Adds matchable pairs in the given order whenever both cells are free and
/// the matching stays acyclic.
pub fn greedy_matching(complex: CellComplex, candidates: &[(CellId, CellId)]) -> MorseData {
    let mut d = MorseData::unmatched(complex);
    for &(face, coface) in candidates {
        if d.is_matched(face) || d.is_matched(coface) || !d.complex.is_face(face, coface) {
            continue;
        }
        d.add_pair(face, coface).expect("checked");
        if d.vpath_order(face.dim).is_err() {
            d.remove_pair(face, coface);
        }
    }
    d
}

/// Every (face, coface) pair with odd incidence, in a fixed order.
pub fn face_pairs(cx: &CellComplex) -> Vec<(CellId, CellId)> {
    let mut out = Vec::new();
    for d in 1..cx.cells.len() {
        for i in 0..cx.count(d) {
            for &f in &cx.faces[d][i] {
                out.push((CellId { dim: d - 1, index: f }, CellId { dim: d, index: i }));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{betti_vec, Homology};

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    fn pairs(v: &[(&str, &str)]) -> Vec<(String, String)> {
        v.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    }

    fn circle() -> CellComplex {
        CellComplex::new(
            vec![s(&["v0", "v1"]), s(&["e0", "e1"])],
            &pairs(&[("e0", "v0"), ("e0", "v1"), ("e1", "v0"), ("e1", "v1")]),
        )
        .unwrap()
    }

    fn interval() -> CellComplex {
        CellComplex::new(vec![s(&["v0", "v1"]), s(&["e"])], &pairs(&[("e", "v0"), ("e", "v1")])).unwrap()
    }

    /// Two triangles glued along two edges: an annulus-like strip whose
    /// matching can be made to loop.
    fn two_triangles() -> CellComplex {
        CellComplex::new(
            vec![s(&["a", "b", "c"]), s(&["ab", "bc", "ca", "ab2"]), s(&["t1", "t2"])],
            &pairs(&[
                ("ab", "a"),
                ("ab", "b"),
                ("bc", "b"),
                ("bc", "c"),
                ("ca", "c"),
                ("ca", "a"),
                ("ab2", "a"),
                ("ab2", "b"),
                ("t1", "ab"),
                ("t1", "bc"),
                ("t1", "ca"),
                ("t2", "ab2"),
                ("t2", "bc"),
                ("t2", "ca"),
            ]),
        )
        .unwrap()
    }

    fn sphere() -> CellComplex {
        CellComplex::new(
            vec![s(&["v0", "v1"]), s(&["e0", "e1"]), s(&["f0", "f1"])],
            &pairs(&[
                ("e0", "v0"),
                ("e0", "v1"),
                ("e1", "v0"),
                ("e1", "v1"),
                ("f0", "e0"),
                ("f0", "e1"),
                ("f1", "e0"),
                ("f1", "e1"),
            ]),
        )
        .unwrap()
    }

    #[test]
    fn cell_complex_errors() {
        let bad = CellComplex::new(vec![s(&["v"]), s(&["v"])], &[]);
        assert_eq!(bad.unwrap_err(), MorseError::DuplicateLabel("v".into()));
        let bad = CellComplex::new(vec![s(&["v"]), s(&["e"]), s(&["f"])], &pairs(&[("f", "v")]));
        assert!(matches!(bad.unwrap_err(), MorseError::NonAdjacentIncidence { .. }));
        // an edge with one endpoint followed by a face on it: ∂∂ ≠ 0
        let bad = CellComplex::new(vec![s(&["v"]), s(&["e"]), s(&["f"])], &pairs(&[("e", "v"), ("f", "e")]));
        assert!(matches!(bad.unwrap_err(), MorseError::NotAComplex(_)));
        // a doubly listed incidence cancels
        let loopy = CellComplex::new(vec![s(&["v"]), s(&["e"])], &pairs(&[("e", "v"), ("e", "v")])).unwrap();
        assert!(loopy.faces(CellId { dim: 1, index: 0 }).is_empty());
    }

    #[test]
    fn matching_validation() {
        let d = MorseData::unmatched(circle());
        assert!(d.validate_matching().is_ok());
        let d = MorseData::new(interval(), &pairs(&[("v0", "e")])).unwrap();
        assert!(d.validate_matching().is_ok());
        // bc and ca are faces of both triangles: bc → ca via t1, ca → bc via t2
        let d = MorseData::new(two_triangles(), &pairs(&[("bc", "t1"), ("ca", "t2"), ("a", "ab2")])).unwrap();
        let cycle = d.validate_matching().unwrap_err();
        assert_eq!(cycle.dim, 1);
        assert_eq!(cycle.cells.first(), cycle.cells.last());
        assert_eq!(cycle.cells.len(), 3);
        assert!(cycle.cells.contains(&"bc".to_string()) && cycle.cells.contains(&"ca".to_string()));
        assert!(matches!(build_morse_complex(&d), Err(MorseError::Cyclic(_))));
    }

    #[test]
    fn matching_errors() {
        let err = MorseData::new(interval(), &pairs(&[("e", "v0")])).unwrap_err();
        assert!(matches!(err, MorseError::NotAFacePair(..)));
        let err = MorseData::new(circle(), &pairs(&[("v0", "e0"), ("v0", "e1")])).unwrap_err();
        assert_eq!(err, MorseError::MatchedTwice("v0".into()));
    }

    #[test]
    fn circle_morse_complex() {
        let d = MorseData::new(circle(), &pairs(&[("v1", "e0")])).unwrap();
        let m = build_morse_complex(&d).unwrap();
        assert_eq!(m.complex.labels(0), &["v0".to_string()]);
        assert_eq!(m.complex.labels(1), &["e1".to_string()]);
        assert!(m.complex.boundary(1).is_zero());
        assert_eq!(betti_vec(&m.complex), vec![1, 1]);
    }

    #[test]
    fn sphere_morse_complex() {
        let d = MorseData::new(sphere(), &pairs(&[("v1", "e0"), ("e1", "f0")])).unwrap();
        let m = build_morse_complex(&d).unwrap();
        assert_eq!(m.complex.total_dim(), 2);
        assert_eq!(betti_vec(&m.complex), vec![1, 0, 1]);
        assert_eq!(betti_vec(&sphere().chain_complex()), vec![1, 0, 1]);
    }

    #[test]
    fn vpath_boundary_agrees_with_flow() {
        // ∂^M = π ∂ ι, computed through the flow instead of path counting
        let cx = two_triangles();
        let d = greedy_matching(cx.clone(), &face_pairs(&cx));
        let m = build_morse_complex(&d).unwrap();
        for dim in 1..cx.cells.len() {
            for p in 0..m.critical[dim].len() {
                let up = lift(&d, &m, dim, &F2Vector::unit(m.critical[dim].len(), p));
                let via_flow = project(&d, &m, dim - 1, &cx.boundary_of(dim, &up));
                assert_eq!(via_flow, m.complex.boundary(dim as i32).column(p));
            }
        }
    }

    #[test]
    fn continuation_between_matchings() {
        let cx = circle();
        let a = MorseData::new(cx.clone(), &pairs(&[("v1", "e0")])).unwrap();
        let b = MorseData::new(cx.clone(), &pairs(&[("v0", "e1")])).unwrap();
        let f = continuation_map(&a, &b).unwrap();
        assert!(f.is_chain_map().is_ok());
        let (ha, hb) = (Homology::compute(f.source()), Homology::compute(f.target()));
        for k in 0..=1 {
            assert_eq!(f.induced(k, &ha, &hb).rank(), 1);
        }
        let same = continuation_map(&a, &a).unwrap();
        assert_eq!(same, ChainMap::identity(same.source()));
        assert_eq!(
            continuation_map(&a, &MorseData::unmatched(interval())),
            Err(MorseError::DifferentComplexes)
        );
    }

    #[test]
    fn pushforward_identity_and_errors() {
        let d = MorseData::new(circle(), &pairs(&[("v1", "e0")])).unwrap();
        let id = pushforward_map(&d, &CellularMap::identity(d.complex())).unwrap();
        assert_eq!(id, ChainMap::identity(id.source()));
        let swap = BTreeMap::from([("e0".to_string(), "v0".to_string())]);
        assert!(CellularMap::from_labels(d.complex(), &swap).is_err());
        let not_auto = CellularMap {
            image: vec![vec![0, 0], vec![0, 1]],
        };
        assert!(matches!(
            pushforward_map(&d, &not_auto),
            Err(MorseError::NotAnAutomorphism(_))
        ));
    }
}
