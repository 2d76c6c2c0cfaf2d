//! Seeded generators of random instances for the property suites.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::complexes::{chain_map_basis, ChainComplex, ChainHomotopy, ChainMap};
use crate::f2::{F2Matrix, F2Vector};
use crate::morse::{face_pairs, greedy_matching, CellComplex, MorseData};

fn simplex_label(vertices: &[usize]) -> String {
    let parts: Vec<String> = vertices.iter().map(usize::to_string).collect();
    format!("s{}", parts.join("_"))
}

/// A random simplicial complex of dimension at most `max_dim` with at most
/// `max_cells` simplices, built by adding random simplices with their faces.
pub fn random_simplicial_complex<R: Rng>(rng: &mut R, max_cells: usize, max_dim: usize) -> CellComplex {
    let nverts = rng.gen_range(3..=7).min(max_cells.max(1));
    let mut simplices: BTreeSet<Vec<usize>> = (0..nverts).map(|v| vec![v]).collect();
    for _ in 0..40 {
        let dim = rng.gen_range(1..=max_dim.min(nverts - 1).max(1));
        let mut verts: Vec<usize> = (0..nverts).collect();
        verts.shuffle(rng);
        let mut top = verts[..=dim.min(nverts - 1)].to_vec();
        top.sort_unstable();
        let closure = faces_closure(&top);
        let new: Vec<&Vec<usize>> = closure.iter().filter(|s| !simplices.contains(*s)).collect();
        if simplices.len() + new.len() <= max_cells {
            simplices.extend(closure.iter().cloned());
        }
    }
    let top_dim = simplices.iter().map(|s| s.len() - 1).max().unwrap_or(0);
    let mut cells: Vec<Vec<String>> = vec![Vec::new(); top_dim + 1];
    let mut incidence = Vec::new();
    for s in &simplices {
        cells[s.len() - 1].push(simplex_label(s));
        if s.len() > 1 {
            for skip in 0..s.len() {
                let face: Vec<usize> = s
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v)
                    .collect();
                incidence.push((simplex_label(s), simplex_label(&face)));
            }
        }
    }
    CellComplex::new(cells, &incidence).expect("simplicial complexes are valid cell complexes")
}

fn faces_closure(simplex: &[usize]) -> Vec<Vec<usize>> {
    let n = simplex.len();
    (1u32..(1 << n))
        .map(|mask| (0..n).filter(|&i| mask & (1 << i) != 0).map(|i| simplex[i]).collect())
        .collect()
}

/// A greedy acyclic matching over the face pairs in random order.
pub fn random_matching<R: Rng>(rng: &mut R, complex: CellComplex) -> MorseData {
    let mut pairs = face_pairs(&complex);
    pairs.shuffle(rng);
    greedy_matching(complex, &pairs)
}

fn random_vector<R: Rng>(rng: &mut R, len: usize) -> F2Vector {
    F2Vector::from_bits((0..len).map(|_| rng.gen_bool(0.5)))
}

fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> F2Matrix {
    F2Matrix::from_row_vectors(cols, (0..rows).map(|_| random_vector(rng, cols)).collect())
}

/// A random complex in degrees `0..=top` with at most `max_total`
/// generators. Each boundary column is a random combination of cycles one
/// degree down, so `∂² = 0` by construction.
pub fn random_chain_complex<R: Rng>(rng: &mut R, max_total: usize) -> ChainComplex {
    let top = rng.gen_range(1..=3usize);
    let mut dims = vec![0usize; top + 1];
    let budget = rng.gen_range(top + 1..=max_total.max(top + 1));
    for d in dims.iter_mut() {
        *d = 1;
    }
    for _ in top + 1..budget {
        dims[rng.gen_range(0..=top)] += 1;
    }
    let generators: Vec<Vec<String>> = dims
        .iter()
        .enumerate()
        .map(|(k, &n)| (0..n).map(|i| format!("c{k}_{i}")).collect())
        .collect();
    let mut boundaries = BTreeMap::new();
    let mut prev = F2Matrix::zeros(0, dims[0]);
    for k in 1..=top {
        let cycles = prev.kernel_basis();
        let coeffs = random_matrix(rng, cycles.len(), dims[k]);
        let basis = F2Matrix::from_columns(dims[k - 1], &cycles);
        // sparsify a little so that homology is usually nonzero
        let mut m = basis.compose(&coeffs).expect("shapes");
        if rng.gen_bool(0.5) {
            for c in 0..dims[k] {
                if rng.gen_bool(0.3) {
                    for r in 0..dims[k - 1] {
                        m.set(r, c, false);
                    }
                }
            }
        }
        boundaries.insert(k as i32, m.clone());
        prev = m;
    }
    ChainComplex::new(0, generators, boundaries).expect("∂² = 0 by construction")
}

/// A uniformly random element of the space of degree-0 chain maps `s → t`.
pub fn random_chain_map<R: Rng>(rng: &mut R, s: &ChainComplex, t: &ChainComplex) -> ChainMap {
    let mut out = ChainMap::zero(s, t, 0);
    for b in chain_map_basis(s, t) {
        if rng.gen_bool(0.5) {
            out = out.add(&b).expect("same shape");
        }
    }
    out
}

/// A random degree +1 map `s → t`.
pub fn random_homotopy<R: Rng>(rng: &mut R, s: &ChainComplex, t: &ChainComplex) -> ChainHomotopy {
    let matrices = s
        .degrees()
        .map(|k| (k, random_matrix(rng, t.dim(k + 1), s.dim(k))))
        .collect();
    ChainHomotopy::new(s.clone(), t.clone(), matrices).expect("shapes")
}

/// `∂h + h∂` for a random `h`.
pub fn random_null_homotopic<R: Rng>(rng: &mut R, s: &ChainComplex, t: &ChainComplex) -> ChainMap {
    random_homotopy(rng, s, t).boundary_commutator()
}

/// Inputs for a Wang cone over a random complex: `(complex, phi, phi_g)`,
/// both maps self-maps of the complex. `phi` is homotopic to the identity;
/// in about a third of the instances `phi_g` is homotopic to `phi`.
pub fn random_wang_instance<R: Rng>(rng: &mut R, max_total: usize) -> (ChainComplex, ChainMap, ChainMap) {
    let c = random_chain_complex(rng, max_total);
    let phi = ChainMap::identity(&c)
        .add(&random_null_homotopic(rng, &c, &c))
        .expect("same shape");
    let phi_g = if rng.gen_bool(1.0 / 3.0) {
        phi.add(&random_null_homotopic(rng, &c, &c)).expect("same shape")
    } else {
        random_chain_map(rng, &c, &c)
    };
    (c, phi, phi_g)
}
