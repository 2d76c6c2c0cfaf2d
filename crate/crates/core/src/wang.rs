//! The mapping-cone model of a fibration over a circle.
//!
//! With `k = phi + phi_g : plus → minus`, the cone has
//! `Cone_n = minus_n ⊕ plus_{n-1}` and boundary
//! `(x₋, x₊) ↦ (∂x₋ + k(x₊), ∂x₊)`. The maps
//! `i : minus → Cone`, `j : Cone → plus[-1]` and `k` form the Wang long
//! exact sequence, and the monodromy acts trivially on homology iff `i_*`
//! is injective.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::complexes::{
    check_exactness_with, cone_maps, homology_dims, mapping_cone_named, BettiNumbers, BoundaryViolation, ChainComplex,
    ChainMap, CommutationViolation, ComplexError, ExactnessViolation, Homology,
};
use crate::f2::F2Matrix;

pub const MINUS_PREFIX: &str = "minus:";
pub const PLUS_PREFIX: &str = "plus:";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WangError {
    #[error("`{map}` must go from the plus complex to the minus complex")]
    WrongEnds { map: &'static str },
    #[error("`{map}` has degree shift {shift}, expected 0")]
    Shift { map: &'static str, shift: i32 },
    #[error("cone boundary does not square to zero, `phi + phi_g` is not a chain map: {0}")]
    ConeNotAComplex(BoundaryViolation),
    #[error("`{map}` is not a chain map: {violation}")]
    NotAChainMap {
        map: &'static str,
        violation: CommutationViolation,
    },
    #[error("no identification of the fibers in degree {degree}: {reason}")]
    IdentificationUnavailable { degree: i32, reason: String },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// The cone complex with the maps of its long exact sequence.
#[derive(Debug, Clone)]
pub struct WangComplex {
    pub minus: ChainComplex,
    pub plus: ChainComplex,
    pub phi: ChainMap,
    pub phi_g: ChainMap,
    /// `phi + phi_g : plus → minus`.
    pub k: ChainMap,
    pub cone: ChainComplex,
    /// `minus → cone`, `x ↦ (x, 0)`.
    pub i: ChainMap,
    /// `cone → plus`, `(x₋, x₊) ↦ x₊`, degree −1.
    pub j: ChainMap,
}

pub fn build_wang(
    minus: ChainComplex,
    plus: ChainComplex,
    phi: ChainMap,
    phi_g: ChainMap,
) -> Result<WangComplex, WangError> {
    for (name, f) in [("phi", &phi), ("phi_g", &phi_g)] {
        if f.source() != &plus || f.target() != &minus {
            return Err(WangError::WrongEnds { map: name });
        }
        if f.shift() != 0 {
            return Err(WangError::Shift {
                map: name,
                shift: f.shift(),
            });
        }
    }
    let k = phi.add(&phi_g)?;
    let cone = match mapping_cone_named(&k, MINUS_PREFIX, PLUS_PREFIX) {
        Ok(c) => c,
        Err(ComplexError::NotAComplex(v)) => return Err(WangError::ConeNotAComplex(v)),
        Err(e) => return Err(e.into()),
    };
    for (name, f) in [("phi", &phi), ("phi_g", &phi_g)] {
        f.is_chain_map()
            .map_err(|violation| WangError::NotAChainMap { map: name, violation })?;
    }
    let (i, j) = cone_maps(&k, &cone);
    Ok(WangComplex {
        minus,
        plus,
        phi,
        phi_g,
        k,
        cone,
        i,
        j,
    })
}

impl WangComplex {
    pub fn betti_cone(&self) -> BettiNumbers {
        homology_dims(&self.cone)
    }

    pub fn homologies(&self) -> WangHomology {
        WangHomology {
            minus: Homology::compute(&self.minus),
            plus: Homology::compute(&self.plus),
            cone: Homology::compute(&self.cone),
        }
    }
}

/// Homology bases of the three complexes of a Wang sequence.
#[derive(Debug, Clone)]
pub struct WangHomology {
    pub minus: Homology,
    pub plus: Homology,
    pub cone: Homology,
}

/// A nonzero class of `H(minus)` killed by `i_*`, with a cone chain whose
/// boundary is its image.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelWitness {
    pub degree: i32,
    pub cycle: Vec<String>,
    pub bounding_chain: Vec<String>,
}

impl fmt::Display for KernelWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "degree {}: [{}] maps to the boundary of {}",
            self.degree,
            self.cycle.join(" + "),
            self.bounding_chain.join(" + ")
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ViaInclusionVerdict {
    pub trivial: bool,
    pub kernel_witness: Option<KernelWitness>,
}

pub fn monodromy_trivial_via_i(w: &WangComplex) -> ViaInclusionVerdict {
    monodromy_trivial_via_i_with(w, &w.homologies())
}

pub fn monodromy_trivial_via_i_with(w: &WangComplex, h: &WangHomology) -> ViaInclusionVerdict {
    for k in w.minus.degrees() {
        let induced = w.i.induced(k, &h.minus, &h.cone);
        if let Some(coords) = induced.kernel_basis().into_iter().next() {
            let hk = h.minus.degree(k);
            let z = hk.chain_of(&coords);
            let image = w.i.apply(k, &z);
            let preimage = w.cone.boundary_preimage(k, &image).expect("the class dies in the cone");
            return ViaInclusionVerdict {
                trivial: false,
                kernel_witness: Some(KernelWitness {
                    degree: k,
                    cycle: w.minus.chain_labels(k, &z),
                    bounding_chain: w.cone.chain_labels(k + 1, &preimage),
                }),
            };
        }
    }
    ViaInclusionVerdict {
        trivial: true,
        kernel_witness: None,
    }
}

/// Matrix of `phi_g_* ∘ (phi_*)⁻¹` on `H_k(minus)` per degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DirectVerdict {
    pub trivial: bool,
    pub first_nontrivial_degree: Option<i32>,
    pub monodromy: BTreeMap<i32, Vec<Vec<u8>>>,
}

pub fn monodromy_trivial_direct(w: &WangComplex) -> Result<DirectVerdict, WangError> {
    monodromy_trivial_direct_with(w, &w.homologies())
}

pub fn monodromy_trivial_direct_with(w: &WangComplex, h: &WangHomology) -> Result<DirectVerdict, WangError> {
    let mut monodromy = BTreeMap::new();
    let mut first = None;
    let degrees = w.minus.min_degree().min(w.plus.min_degree())..=w.minus.max_degree().max(w.plus.max_degree());
    for k in degrees {
        let phi = w.phi.induced(k, &h.plus, &h.minus);
        let inverse = phi.inverse().ok_or_else(|| WangError::IdentificationUnavailable {
            degree: k,
            reason: format!(
                "phi induces a {}x{} map of rank {} on homology",
                phi.rows(),
                phi.cols(),
                phi.rank()
            ),
        })?;
        let m = w.phi_g.induced(k, &h.plus, &h.minus).compose(&inverse).expect("square");
        if m != F2Matrix::identity(m.rows()) && first.is_none() {
            first = Some(k);
        }
        monodromy.insert(k, m.to_rows());
    }
    Ok(DirectVerdict {
        trivial: first.is_none(),
        first_nontrivial_degree: first,
        monodromy,
    })
}

/// Position of the long exact sequence where exactness is checked: the
/// middle group of the triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SequencePosition {
    /// `H(plus) -k-> H(minus) -i-> H(cone)`
    Minus,
    /// `H(minus) -i-> H(cone) -j-> H(plus)[-1]`
    Cone,
    /// `H(cone) -j-> H(plus)[-1] -k-> H(minus)[-1]`
    Plus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WangExactnessViolation {
    pub position: SequencePosition,
    pub violation: ExactnessViolation,
}

impl fmt::Display for WangExactnessViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {:?}: {}", self.position, self.violation)
    }
}

pub fn verify_wang_exactness(w: &WangComplex) -> Result<(), WangExactnessViolation> {
    verify_wang_exactness_with(w, &w.homologies())
}

pub fn verify_wang_exactness_with(w: &WangComplex, h: &WangHomology) -> Result<(), WangExactnessViolation> {
    let triples = [
        (SequencePosition::Minus, &w.k, &w.i, &h.plus, &h.minus, &h.cone),
        (SequencePosition::Cone, &w.i, &w.j, &h.minus, &h.cone, &h.plus),
        (SequencePosition::Plus, &w.j, &w.k, &h.cone, &h.plus, &h.minus),
    ];
    for (position, f, g, ha, hb, hc) in triples {
        check_exactness_with(f, g, ha, hb, hc).map_err(|violation| WangExactnessViolation { position, violation })?;
    }
    Ok(())
}
