//! Filtered section-counting maps over the T-ring, built from tables of
//! moduli counts, and the checks that turn them into a monodromy verdict.
//!
//! A table entry `(x, y, α, E, n)` contributes `n·T^{-E}` to the matrix
//! entry `y ← x`. Entries below the lower energy bound are rejected; entries
//! above the summation cap are dropped and recorded.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complexes::{
    check_homotopy_identity, omega_chain_slices, solve_null_homotopy, ChainComplex, ChainMap, ComplexError, Homology,
    IdentityWitness, OmegaChainMap, OmegaCommutationViolation, Projection,
};
use crate::f2::{F2Matrix, F2Vector};
use crate::hofer::GateResult;
use crate::omega::{Exponent, OmegaElement, OmegaMatrix};
use crate::wang::{monodromy_trivial_via_i, WangComplex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    G,
    GInverse,
    Glued,
    ConeExtension,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::G => "g",
            Direction::GInverse => "g_inverse",
            Direction::Glued => "glued",
            Direction::ConeExtension => "cone_extension",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnergyCaps {
    pub h_plus: Exponent,
    pub h_minus: Exponent,
    pub epsilon: Exponent,
}

/// Admissible energies `lower <= E <= cap`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Window {
    pub lower: Exponent,
    pub cap: Exponent,
}

impl EnergyCaps {
    pub fn validate(&self) -> Result<(), SeidelError> {
        for (name, v) in [
            ("h_plus", &self.h_plus),
            ("h_minus", &self.h_minus),
            ("epsilon", &self.epsilon),
        ] {
            if v.is_negative() {
                return Err(SeidelError::InvalidCaps(format!("{name} = {v} is negative")));
            }
        }
        Ok(())
    }

    pub fn window(&self, direction: Direction) -> Window {
        let eps = &self.epsilon;
        let plus = &self.h_plus + eps;
        let minus = &self.h_minus + eps;
        match direction {
            Direction::G | Direction::ConeExtension => Window {
                lower: -&plus,
                cap: minus,
            },
            Direction::GInverse => Window {
                lower: -&minus,
                cap: plus,
            },
            Direction::Glued => {
                let total = &plus + &minus;
                Window {
                    lower: -&total,
                    cap: total,
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    pub source: String,
    pub target: String,
    pub class: String,
    pub energy: Exponent,
    pub count: u8,
}

impl fmt::Display for TableEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} -> {} [class {}, energy {}, count {}]",
            self.source, self.target, self.class, self.energy, self.count
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuliTable {
    pub direction: Direction,
    pub energy_caps: EnergyCaps,
    pub entries: Vec<TableEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeidelError {
    #[error("invalid energy caps: {0}")]
    InvalidCaps(String),
    #[error("entry {index}: count {count} is not 0 or 1")]
    CountNotBinary { index: usize, count: u8 },
    #[error("entry {index} repeats source, target and class of an earlier entry")]
    DuplicateEntry { index: usize },
    #[error("class `{class}` has energies {first} and {second}")]
    ClassEnergyMismatch {
        class: String,
        first: Exponent,
        second: Exponent,
    },
    #[error("entry {index} ({entry}) violates the lower energy bound {bound}")]
    BelowLowerBound {
        index: usize,
        entry: Box<TableEntry>,
        bound: Exponent,
    },
    #[error("unknown {side} generator `{label}`")]
    UnknownGenerator { label: String, side: &'static str },
    #[error("entry {index} ({entry}) changes degree by {shift}")]
    DegreeMismatch {
        index: usize,
        entry: Box<TableEntry>,
        shift: i32,
    },
    #[error("table has direction {found}, expected {expected}")]
    WrongDirection { expected: Direction, found: Direction },
    #[error("filtered map is not a chain map: {0}")]
    NotAChainMap(OmegaCommutationViolation),
    #[error("dataset has no `{0}` table")]
    MissingTable(Direction),
    #[error("dataset has more than one `{0}` table")]
    DuplicateTable(Direction),
    #[error("tables disagree on energy caps; one epsilon and one pair of norms is shared by all windows")]
    CapsDiffer,
    #[error("chain is not a cycle in degree {0}")]
    NotACycle(i32),
    #[error("extension does not restrict to the given map: {0}")]
    RestrictionMismatch(IdentityWitness),
    #[error("glued degree-0 part is not homotopic to the identity at exponent {0}")]
    NotHomotopicToIdentity(Exponent),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

impl ModuliTable {
    /// Checks caps, counts, duplicates, class energies and the lower bound.
    pub fn validate(&self) -> Result<(), SeidelError> {
        self.energy_caps.validate()?;
        let window = self.energy_caps.window(self.direction);
        let mut seen = HashSet::new();
        let mut class_energy: HashMap<&str, &Exponent> = HashMap::new();
        for (index, e) in self.entries.iter().enumerate() {
            if e.count > 1 {
                return Err(SeidelError::CountNotBinary { index, count: e.count });
            }
            if !seen.insert((&e.source, &e.target, &e.class)) {
                return Err(SeidelError::DuplicateEntry { index });
            }
            if let Some(prev) = class_energy.insert(&e.class, &e.energy) {
                if prev != &e.energy {
                    return Err(SeidelError::ClassEnergyMismatch {
                        class: e.class.clone(),
                        first: prev.clone(),
                        second: e.energy.clone(),
                    });
                }
            }
            if e.energy < window.lower {
                return Err(SeidelError::BelowLowerBound {
                    index,
                    entry: Box::new(e.clone()),
                    bound: window.lower.clone(),
                });
            }
        }
        Ok(())
    }

    fn expect_direction(&self, expected: Direction) -> Result<(), SeidelError> {
        if self.direction != expected {
            return Err(SeidelError::WrongDirection {
                expected,
                found: self.direction,
            });
        }
        Ok(())
    }
}

/// One summand of a matrix entry: the classes it was glued from and their
/// total energy. The entry contributes `T^{-energy}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Term {
    pub classes: Vec<String>,
    pub energy: Exponent,
}

type TermSet = BTreeSet<Term>;

/// Where each matrix entry's terms come from, keyed by
/// `(source degree, target index, source index)`. Terms are kept mod 2.
pub type Provenance = BTreeMap<(i32, usize, usize), TermSet>;

fn toggle_term(p: &mut Provenance, key: (i32, usize, usize), term: Term) {
    let set = p.entry(key).or_default();
    if !set.remove(&term) {
        set.insert(term);
    }
    if set.is_empty() {
        p.remove(&key);
    }
}

/// An Ω-linear map with the table terms behind each entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredMap {
    pub map: OmegaChainMap,
    pub provenance: Provenance,
    /// Entries dropped because their energy exceeds the cap.
    pub filtered: Vec<TableEntry>,
}

impl FilteredMap {
    pub fn from_constant(f: &ChainMap) -> Self {
        let mut provenance = Provenance::new();
        for (&k, m) in f.matrices() {
            for (r, c) in m.nonzero_entries() {
                toggle_term(
                    &mut provenance,
                    (k, r, c),
                    Term {
                        classes: Vec::new(),
                        energy: Exponent::zero(),
                    },
                );
            }
        }
        Self {
            map: f.tensor_omega(),
            provenance,
            filtered: Vec::new(),
        }
    }

    pub fn identity(c: &ChainComplex) -> Self {
        Self::from_constant(&ChainMap::identity(c))
    }

    pub fn zero(source: &ChainComplex, target: &ChainComplex, shift: i32) -> Self {
        Self::from_constant(&ChainMap::zero(source, target, shift))
    }

    /// True when every matrix entry equals the mod-2 sum of its terms.
    pub fn provenance_consistent(&self) -> bool {
        let mut rebuilt: BTreeMap<i32, OmegaMatrix> = self
            .map
            .source()
            .degrees()
            .map(|k| {
                (
                    k,
                    OmegaMatrix::zeros(self.map.target().dim(k + self.map.shift()), self.map.source().dim(k)),
                )
            })
            .collect();
        for (&(k, r, c), terms) in &self.provenance {
            let Some(m) = rebuilt.get_mut(&k) else { return false };
            if r >= m.rows() || c >= m.cols() {
                return false;
            }
            for t in terms {
                m.entry_mut(r, c).toggle(-&t.energy);
            }
        }
        rebuilt.iter().all(|(&k, m)| *m == self.map.matrix(k))
    }

    /// `(degree, source, target, term)` lines, for reports.
    pub fn describe(&self) -> Vec<String> {
        let (s, t, shift) = (self.map.source(), self.map.target(), self.map.shift());
        let mut out = Vec::new();
        for (&(k, r, c), terms) in &self.provenance {
            for term in terms {
                out.push(format!(
                    "{} -> {}: T^({}) via [{}]",
                    s.labels(k)[c],
                    t.labels(k + shift)[r],
                    -&term.energy,
                    term.classes.join(", ")
                ));
            }
        }
        out
    }
}

struct Assembled {
    parts: BTreeMap<i32, (BTreeMap<i32, OmegaMatrix>, Provenance)>,
    filtered: Vec<TableEntry>,
}

fn assemble(t: &ModuliTable, src: &ChainComplex, dst: &ChainComplex, shifts: &[i32]) -> Result<Assembled, SeidelError> {
    t.validate()?;
    let window = t.energy_caps.window(t.direction);
    let mut parts: BTreeMap<i32, (BTreeMap<i32, OmegaMatrix>, Provenance)> = BTreeMap::new();
    for &s in shifts {
        let mats = src
            .degrees()
            .map(|k| (k, OmegaMatrix::zeros(dst.dim(k + s), src.dim(k))))
            .collect();
        parts.insert(s, (mats, Provenance::new()));
    }
    let mut filtered = Vec::new();
    for (index, e) in t.entries.iter().enumerate() {
        let (ks, i) = src.find(&e.source).ok_or_else(|| SeidelError::UnknownGenerator {
            label: e.source.clone(),
            side: "source",
        })?;
        let (kt, j) = dst.find(&e.target).ok_or_else(|| SeidelError::UnknownGenerator {
            label: e.target.clone(),
            side: "target",
        })?;
        let shift = kt - ks;
        let Some((mats, prov)) = parts.get_mut(&shift) else {
            return Err(SeidelError::DegreeMismatch {
                index,
                entry: Box::new(e.clone()),
                shift,
            });
        };
        if e.count == 0 {
            continue;
        }
        if e.energy > window.cap {
            filtered.push(e.clone());
            continue;
        }
        mats.get_mut(&ks)
            .expect("source degree")
            .entry_mut(j, i)
            .toggle(-&e.energy);
        toggle_term(
            prov,
            (ks, j, i),
            Term {
                classes: vec![e.class.clone()],
                energy: e.energy.clone(),
            },
        );
    }
    Ok(Assembled { parts, filtered })
}

fn take_part(
    a: &mut Assembled,
    shift: i32,
    src: &ChainComplex,
    dst: &ChainComplex,
) -> Result<FilteredMap, SeidelError> {
    let (mats, provenance) = a.parts.remove(&shift).expect("requested shift");
    let map = OmegaChainMap::new(src.tensor_omega(), dst.tensor_omega(), shift, mats)?;
    Ok(FilteredMap {
        map,
        provenance,
        filtered: std::mem::take(&mut a.filtered),
    })
}

/// `Φ_g` (direction `g`) or `Φ_{g⁻¹}` (direction `g_inverse`) from a table.
pub fn build_phi(t: &ModuliTable, src: &ChainComplex, dst: &ChainComplex) -> Result<FilteredMap, SeidelError> {
    if !matches!(t.direction, Direction::G | Direction::GInverse) {
        return Err(SeidelError::WrongDirection {
            expected: Direction::G,
            found: t.direction,
        });
    }
    let mut a = assemble(t, src, dst, &[0])?;
    let f = take_part(&mut a, 0, src, dst)?;
    f.map.is_chain_map().map_err(SeidelError::NotAChainMap)?;
    Ok(f)
}

/// The degree-0 part `I_R` (identity when the table has none) and the
/// degree +1 part `h` of a `glued` table.
pub fn build_glued(t: &ModuliTable, c: &ChainComplex) -> Result<(FilteredMap, FilteredMap), SeidelError> {
    t.expect_direction(Direction::Glued)?;
    let mut a = assemble(t, c, c, &[0, 1])?;
    let filtered = a.filtered.clone();
    let i_r = take_part(&mut a, 0, c, c)?;
    let i_r = if i_r.provenance.is_empty() {
        FilteredMap {
            filtered,
            ..FilteredMap::identity(c)
        }
    } else {
        FilteredMap { filtered, ..i_r }
    };
    let h = take_part(&mut a, 1, c, c)?;
    Ok((i_r, h))
}

/// `outer ∘ inner`; terms multiply along each path, classes concatenate in
/// order of traversal and energies add.
pub fn compose_filtered(outer: &FilteredMap, inner: &FilteredMap) -> Result<FilteredMap, SeidelError> {
    let map = outer.map.after(&inner.map)?;
    let s = inner.map.shift();
    let mut by_column: HashMap<(i32, usize), Vec<(usize, &TermSet)>> = HashMap::new();
    for (&(k, r, c), terms) in &outer.provenance {
        by_column.entry((k, c)).or_default().push((r, terms));
    }
    let mut provenance = Provenance::new();
    for (&(k, l, j), inner_terms) in &inner.provenance {
        for (i, outer_terms) in by_column.get(&(k + s, l)).into_iter().flatten() {
            for a in inner_terms {
                for b in outer_terms.iter() {
                    let mut classes = a.classes.clone();
                    classes.extend(b.classes.iter().cloned());
                    toggle_term(
                        &mut provenance,
                        (k, *i, j),
                        Term {
                            classes,
                            energy: &a.energy + &b.energy,
                        },
                    );
                }
            }
        }
    }
    Ok(FilteredMap {
        map,
        provenance,
        filtered: Vec::new(),
    })
}

/// `Π+(I_R + Ψ + h∂ + ∂h)Π- = 0`.
pub fn check_lemma3(
    i_r: &FilteredMap,
    psi: &FilteredMap,
    h: &FilteredMap,
) -> Result<Result<(), IdentityWitness>, SeidelError> {
    Ok(check_homotopy_identity(
        &[i_r.map.clone(), psi.map.clone()],
        &h.map,
        Projection::NonnegAfterNonpos,
    )?)
}

/// `Π+(Id + Φ_{g⁻¹}Φ_g + H∂ + ∂H)Π- = 0`.
pub fn check_lemma4(phi_comp: &FilteredMap, big_h: &FilteredMap) -> Result<Result<(), IdentityWitness>, SeidelError> {
    let id = OmegaChainMap::identity(phi_comp.map.source());
    Ok(check_homotopy_identity(
        &[id, phi_comp.map.clone()],
        &big_h.map,
        Projection::NonnegAfterNonpos,
    )?)
}

/// The Z2 map carried by exponent `λ` of a constant-boundary Ω-map.
pub fn slice_map(f: &OmegaChainMap, source: &ChainComplex, target: &ChainComplex, exponent: &Exponent) -> ChainMap {
    let matrices = f.matrices().iter().map(|(&k, m)| (k, m.slice(exponent))).collect();
    ChainMap::new(source.clone(), target.clone(), f.shift(), matrices).expect("slice keeps shapes")
}

fn exponents_of(f: &OmegaChainMap) -> BTreeSet<Exponent> {
    f.matrices().values().flat_map(|m| m.exponent_support()).collect()
}

/// Turns the `h` of the glued identity into an `H` for the
/// `Id + Φ_{g⁻¹}Φ_g` identity by adding, at each exponent `λ >= 0`, a
/// null-homotopy of the slice of `I_R + Id`.
pub fn derive_lemma4_homotopy(
    i_r: &FilteredMap,
    h: &FilteredMap,
    c: &ChainComplex,
) -> Result<FilteredMap, SeidelError> {
    let diff = i_r.map.add(&OmegaChainMap::identity(i_r.map.source()))?;
    let mut out = h.clone();
    for lambda in exponents_of(&diff) {
        if lambda.is_negative() {
            continue;
        }
        let slice = slice_map(&diff, c, c, &lambda);
        let k = solve_null_homotopy(&slice).ok_or_else(|| SeidelError::NotHomotopicToIdentity(lambda.clone()))?;
        for (deg, m) in k.as_map().matrices() {
            for (r, col) in m.nonzero_entries() {
                out.map = add_monomial(&out.map, *deg, r, col, &lambda);
                toggle_term(
                    &mut out.provenance,
                    (*deg, r, col),
                    Term {
                        classes: vec!["homotopy".to_string()],
                        energy: -&lambda,
                    },
                );
            }
        }
    }
    Ok(out)
}

fn add_monomial(f: &OmegaChainMap, k: i32, r: usize, c: usize, exponent: &Exponent) -> OmegaChainMap {
    let mut mats = f.matrices().clone();
    mats.get_mut(&k)
        .expect("degree in range")
        .entry_mut(r, c)
        .toggle(exponent.clone());
    OmegaChainMap::new(f.source().clone(), f.target().clone(), f.shift(), mats).expect("shapes unchanged")
}

fn apply(m: &OmegaMatrix, v: &[OmegaElement]) -> Vec<OmegaElement> {
    (0..m.rows())
        .map(|r| {
            let mut acc = OmegaElement::zero();
            for (c, x) in v.iter().enumerate() {
                if !x.is_zero() && !m.get(r, c).is_zero() {
                    acc.add_assign(&(m.get(r, c) * x));
                }
            }
            acc
        })
        .collect()
}

fn lift_chain(v: &F2Vector) -> Vec<OmegaElement> {
    (0..v.len()).map(|i| OmegaElement::from_bit(v.get(i))).collect()
}

/// A preimage under the constant boundary, found slice by slice; `None`
/// when some slice is not a boundary.
pub fn omega_boundary_preimage(c: &ChainComplex, k: i32, chain: &[OmegaElement]) -> Option<Vec<OmegaElement>> {
    let mut out = vec![OmegaElement::zero(); c.dim(k + 1)];
    for (lambda, slice) in omega_chain_slices(chain) {
        let pre = c.boundary_preimage(k, &slice)?;
        for i in pre.ones() {
            out[i].toggle(lambda.clone());
        }
    }
    Some(out)
}

fn render_chain(labels: &[String], chain: &[OmegaElement]) -> Vec<String> {
    chain
        .iter()
        .zip(labels)
        .filter(|(e, _)| !e.is_zero())
        .map(|(e, l)| format!("({e})·{l}"))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Corollary2Verdict {
    /// The cycle bounds already; nothing to show.
    ZeroClass { bounding_chain: Vec<String> },
    /// Some exponent slice of `Φ_g(c⊗1)` is a nonzero class.
    NonzeroImage { exponent: Exponent, image: Vec<String> },
    /// `[c] ≠ 0` but `Φ_g(c⊗1)` bounds: the identity used to rule this
    /// out must fail on these data.
    Inconsistent { image_preimage: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Corollary2Report {
    pub degree: i32,
    pub cycle: Vec<String>,
    #[serde(flatten)]
    pub verdict: Corollary2Verdict,
    /// Whether `c⊗1 = Π+(Φ_{g⁻¹}Φ_g(c⊗1) + ∂H(c⊗1))` holds for this cycle.
    pub replay_holds: bool,
}

/// Replays the injectivity argument for one cycle of the source complex.
pub fn corollary2_injectivity(
    phi: &FilteredMap,
    phi_comp: &FilteredMap,
    big_h: &FilteredMap,
    src: &ChainComplex,
    dst: &ChainComplex,
    degree: i32,
    cycle: &F2Vector,
) -> Result<Corollary2Report, SeidelError> {
    if cycle.len() != src.dim(degree) {
        return Err(ComplexError::ChainLength {
            degree,
            expected: src.dim(degree),
            found: cycle.len(),
        }
        .into());
    }
    if !src.is_cycle(degree, cycle) {
        return Err(SeidelError::NotACycle(degree));
    }
    let c = lift_chain(cycle);
    let comp = apply(&phi_comp.map.matrix(degree), &c);
    let hc = apply(&big_h.map.matrix(degree), &c);
    let dhc = apply(&src.tensor_omega().boundary(degree + 1), &hc);
    let replay: Vec<OmegaElement> = comp.iter().zip(&dhc).map(|(a, b)| (a + b).proj_nonneg()).collect();
    let replay_holds = replay == c;
    let labels = src.labels(degree);
    let verdict = if let Some(d) = src.boundary_preimage(degree, cycle) {
        Corollary2Verdict::ZeroClass {
            bounding_chain: src.chain_labels(degree + 1, &d),
        }
    } else {
        let image = apply(&phi.map.matrix(degree), &c);
        let nonzero = omega_chain_slices(&image)
            .into_iter()
            .find(|(_, slice)| dst.boundary_preimage(degree, slice).is_none());
        match nonzero {
            Some((exponent, _)) => Corollary2Verdict::NonzeroImage {
                exponent,
                image: render_chain(dst.labels(degree), &image),
            },
            None => {
                let pre = omega_boundary_preimage(dst, degree, &image).expect("every slice bounds");
                Corollary2Verdict::Inconsistent {
                    image_preimage: render_chain(dst.labels(degree + 1), &pre),
                }
            }
        }
    };
    Ok(Corollary2Report {
        degree,
        cycle: labels
            .iter()
            .zip(0..)
            .filter(|(_, i)| cycle.get(*i))
            .map(|(l, _)| l.clone())
            .collect(),
        verdict,
        replay_holds,
    })
}

/// Rank data of `Φ⁰_* : H_k(src) → H_k(dst ⊗ Ω)` per degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InjectivityReport {
    pub injective: bool,
    /// `(dim H_k(src), rank of Φ⁰_*)` per degree.
    pub ranks: BTreeMap<i32, (usize, usize)>,
    /// A nonzero class in the kernel, as a cycle.
    pub kernel_class: Option<(i32, Vec<String>)>,
}

/// A class maps to zero iff every exponent slice of its image bounds, so
/// `Φ⁰_*` is injective iff the slice-wise induced maps, stacked, have full
/// column rank.
pub fn phi0_injectivity(phi: &FilteredMap, src: &ChainComplex, dst: &ChainComplex) -> InjectivityReport {
    let (hs, ht) = (Homology::compute(src), Homology::compute(dst));
    let exps = exponents_of(&phi.map);
    let mut ranks = BTreeMap::new();
    let mut kernel_class = None;
    for k in src.degrees() {
        let n = hs.degree(k).dim();
        let mut stacked = F2Matrix::zeros(0, n);
        for lambda in &exps {
            let m = slice_map(&phi.map, src, dst, lambda).induced(k, &hs, &ht);
            stacked = stacked.vstack(&m).expect("same column count");
        }
        let rank = stacked.rank();
        if rank < n && kernel_class.is_none() {
            let coords = stacked.kernel_basis().remove(0);
            kernel_class = Some((k, src.chain_labels(k, &hs.degree(k).chain_of(&coords))));
        }
        ranks.insert(k, (n, rank));
    }
    InjectivityReport {
        injective: kernel_class.is_none(),
        ranks,
        kernel_class,
    }
}

/// `Φ̃_g` on the cone from a `cone_extension` table, checked to be a chain
/// map that restricts to `phi` along the inclusion of the minus fiber.
pub fn build_phi_tilde(
    t: &ModuliTable,
    wang: &WangComplex,
    dst: &ChainComplex,
    phi: &FilteredMap,
) -> Result<FilteredMap, SeidelError> {
    t.expect_direction(Direction::ConeExtension)?;
    let mut a = assemble(t, &wang.cone, dst, &[0])?;
    let tilde = take_part(&mut a, 0, &wang.cone, dst)?;
    tilde.map.is_chain_map().map_err(SeidelError::NotAChainMap)?;
    let restricted = tilde.map.after(&wang.i.tensor_omega())?;
    for k in wang.minus.degrees() {
        let (got, want) = (restricted.matrix(k), phi.map.matrix(k));
        if got.shape() != want.shape() {
            return Err(ComplexError::Incompatible.into());
        }
        if let Some((r, c, _)) = got.add(&want).expect("same shape").first_nonzero() {
            return Err(SeidelError::RestrictionMismatch(IdentityWitness {
                degree: k,
                source_generator: wang.minus.labels(k)[c].clone(),
                target_generator: dst.labels(k)[r].clone(),
                value: format!("extension gives {}, map gives {}", got.get(r, c), want.get(r, c)),
            }));
        }
    }
    Ok(tilde)
}

/// A named pass/fail result citing the operation that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub check: String,
    pub operation: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
}

impl CheckOutcome {
    pub fn pass(check: &str, operation: &str) -> Self {
        Self {
            check: check.into(),
            operation: operation.into(),
            pass: true,
            witness: None,
        }
    }

    pub fn fail(check: &str, operation: &str, witness: impl Serialize) -> Self {
        Self {
            check: check.into(),
            operation: operation.into(),
            pass: false,
            witness: Some(serde_json::to_value(witness).expect("witnesses serialize")),
        }
    }

    pub fn from_result<W: Serialize>(check: &str, operation: &str, r: Result<(), W>) -> Self {
        match r {
            Ok(()) => Self::pass(check, operation),
            Err(w) => Self::fail(check, operation, w),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Dataset {
    pub tables: Vec<ModuliTable>,
}

impl Dataset {
    pub fn table(&self, d: Direction) -> Option<&ModuliTable> {
        self.tables.iter().find(|t| t.direction == d)
    }

    /// At most one table per direction, `g` and `g_inverse` present, and a
    /// single set of caps (one epsilon for every window).
    pub fn validate(&self) -> Result<(), SeidelError> {
        let mut seen = BTreeSet::new();
        for t in &self.tables {
            if !seen.insert(t.direction) {
                return Err(SeidelError::DuplicateTable(t.direction));
            }
            t.validate()?;
        }
        for d in [Direction::G, Direction::GInverse] {
            if !seen.contains(&d) {
                return Err(SeidelError::MissingTable(d));
            }
        }
        if self.tables.windows(2).any(|w| w[0].energy_caps != w[1].energy_caps) {
            return Err(SeidelError::CapsDiffer);
        }
        Ok(())
    }

    pub fn caps(&self) -> Option<&EnergyCaps> {
        self.tables.first().map(|t| &t.energy_caps)
    }

    /// Toggles the count of one entry.
    pub fn flip_count(&self, table: usize, entry: usize) -> Dataset {
        let mut out = self.clone();
        let e = &mut out.tables[table].entries[entry];
        e.count ^= 1;
        out
    }

    /// `(table, entry)` positions of every entry.
    pub fn positions(&self) -> Vec<(usize, usize)> {
        self.tables
            .iter()
            .enumerate()
            .flat_map(|(t, tab)| (0..tab.entries.len()).map(move |e| (t, e)))
            .collect()
    }
}

/// Every map built from a dataset over one fiber complex.
#[derive(Debug, Clone)]
pub struct DatasetMaps {
    pub phi: FilteredMap,
    pub phi_inverse: FilteredMap,
    pub psi: FilteredMap,
    pub i_r: FilteredMap,
    pub h: FilteredMap,
    pub big_h: FilteredMap,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetOutcome {
    pub checks: Vec<CheckOutcome>,
}

impl DatasetOutcome {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| !c.pass)
    }

    pub fn get(&self, check: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.check == check)
    }
}

/// Builds every map and runs both homotopy identities, stopping at the
/// first construction failure. The fiber complex serves as both ends.
pub fn run_dataset(ds: &Dataset, c: &ChainComplex) -> (DatasetOutcome, Option<DatasetMaps>) {
    let mut checks = Vec::new();
    macro_rules! stage {
        ($name:expr, $op:expr, $e:expr) => {
            match $e {
                Ok(v) => {
                    checks.push(CheckOutcome::pass($name, $op));
                    v
                }
                Err(err) => {
                    checks.push(CheckOutcome::fail($name, $op, err.to_string()));
                    return (DatasetOutcome { checks }, None);
                }
            }
        };
    }
    stage!("dataset valid", "seidel_filtered::Dataset::validate", ds.validate());
    let g = ds.table(Direction::G).expect("validated");
    let gi = ds.table(Direction::GInverse).expect("validated");
    let phi = stage!("phi_g chain map", "seidel_filtered::build_phi", build_phi(g, c, c));
    let phi_inverse = stage!(
        "phi_g_inverse chain map",
        "seidel_filtered::build_phi",
        build_phi(gi, c, c)
    );
    let psi = stage!(
        "composition",
        "seidel_filtered::compose_filtered",
        compose_filtered(&phi_inverse, &phi)
    );
    let (i_r, h) = match ds.table(Direction::Glued) {
        Some(t) => stage!("glued maps", "seidel_filtered::build_glued", build_glued(t, c)),
        None => (FilteredMap::identity(c), FilteredMap::zero(c, c, 1)),
    };
    let lemma3 = check_lemma3(&i_r, &psi, &h).expect("endomorphisms of one complex");
    checks.push(CheckOutcome::from_result(
        "gluing homotopy identity",
        "seidel_filtered::check_lemma3",
        lemma3,
    ));
    let big_h = stage!(
        "glued degree-0 part homotopic to identity",
        "seidel_filtered::derive_lemma4_homotopy",
        derive_lemma4_homotopy(&i_r, &h, c)
    );
    let lemma4 = check_lemma4(&psi, &big_h).expect("endomorphisms of one complex");
    checks.push(CheckOutcome::from_result(
        "inverse homotopy identity",
        "seidel_filtered::check_lemma4",
        lemma4,
    ));
    (
        DatasetOutcome { checks },
        Some(DatasetMaps {
            phi,
            phi_inverse,
            psi,
            i_r,
            h,
            big_h,
        }),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Theorem1Verdict {
    /// Gate and every identity pass, so the monodromy acts trivially.
    MonodromyTrivial,
    /// A hypothesis fails; nothing is concluded.
    Inconclusive { failed: Vec<String> },
    /// Every hypothesis passes but the cone says otherwise: the data
    /// cannot come from a geometric configuration.
    Inconsistent { detail: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem1Report {
    pub gate: GateResult,
    pub identities: Vec<CheckOutcome>,
    #[serde(flatten)]
    pub verdict: Theorem1Verdict,
    /// The verdict of the inclusion criterion on the same cone.
    pub wang_trivial: bool,
    pub cross_check: String,
}

pub fn theorem1_verdict(gate: GateResult, wang: &WangComplex, identities: Vec<CheckOutcome>) -> Theorem1Report {
    let wang_trivial = monodromy_trivial_via_i(wang).trivial;
    let mut failed: Vec<String> = identities.iter().filter(|c| !c.pass).map(|c| c.check.clone()).collect();
    if !gate.pass {
        failed.insert(0, "energy gate".to_string());
    }
    let (verdict, cross_check) = if !failed.is_empty() {
        let note = if wang_trivial {
            "cone: trivial"
        } else {
            "cone: nontrivial"
        };
        (
            Theorem1Verdict::Inconclusive { failed },
            format!("no conclusion to compare ({note})"),
        )
    } else if wang_trivial {
        (
            Theorem1Verdict::MonodromyTrivial,
            "agrees with the inclusion criterion".to_string(),
        )
    } else {
        let detail = "all hypotheses pass but the inclusion has a kernel".to_string();
        (Theorem1Verdict::Inconsistent { detail: detail.clone() }, detail)
    };
    Theorem1Report {
        gate,
        identities,
        verdict,
        wang_trivial,
        cross_check,
    }
}

/// Runs the dataset, the injectivity replay and, when a `cone_extension`
/// table is present, the extension check.
pub fn theorem1_checks(ds: &Dataset, wang: &WangComplex) -> Vec<CheckOutcome> {
    let c = &wang.minus;
    let (outcome, maps) = run_dataset(ds, c);
    let mut checks = outcome.checks;
    let Some(maps) = maps else { return checks };
    let inj = phi0_injectivity(&maps.phi, c, &wang.plus);
    checks.push(if inj.injective {
        CheckOutcome::pass(
            "injectivity on fiber homology",
            "seidel_filtered::corollary2_injectivity",
        )
    } else {
        CheckOutcome::fail(
            "injectivity on fiber homology",
            "seidel_filtered::corollary2_injectivity",
            &inj,
        )
    });
    match ds.table(Direction::ConeExtension) {
        Some(t) => {
            let r = build_phi_tilde(t, wang, &wang.plus, &maps.phi)
                .map(|_| ())
                .map_err(|e| e.to_string());
            checks.push(CheckOutcome::from_result(
                "extension restricts to phi_g",
                "seidel_filtered::build_phi_tilde",
                r,
            ));
        }
        None => checks.push(CheckOutcome::fail(
            "extension restricts to phi_g",
            "seidel_filtered::build_phi_tilde",
            "dataset has no cone_extension table",
        )),
    }
    checks
}
