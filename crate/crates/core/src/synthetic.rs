//! Seeded datasets that satisfy both homotopy identities by construction,
//! and single-count mutations of them.
//!
//! `Φ_g = A + Σ N_i T^{-e_i} + Σ P_j T^{f_j}` with `A` homotopic to the
//! identity, `N_i` chain maps at positive energy and `P_j` null-homotopic at
//! negative energy; `Φ_{g⁻¹}` likewise. The glued table carries an `I_R`
//! homotopic to the identity and, at every exponent `λ >= 0`, a
//! null-homotopy of the slice of `I_R + Φ_{g⁻¹}Φ_g`.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use crate::complexes::{solve_null_homotopy, ChainComplex, ChainMap, OmegaChainMap};
use crate::models;
use crate::omega::{Exponent, OmegaMatrix};
use crate::random::{random_chain_map, random_null_homotopic, random_simplicial_complex};
use crate::seidel::{run_dataset, slice_map, Dataset, Direction, EnergyCaps, ModuliTable, TableEntry};

/// A fiber complex for the generator: the grid torus or the cellular
/// complex of a small random simplicial complex.
pub fn synthetic_complex<R: Rng>(rng: &mut R) -> ChainComplex {
    if rng.gen_bool(0.25) {
        models::torus_grid_complex().chain_complex()
    } else {
        random_simplicial_complex(rng, 14, 2).chain_complex()
    }
}

fn pick_caps<R: Rng>(rng: &mut R) -> EnergyCaps {
    let choices = ["1/4", "1/3", "1/2", "1", "3/2"];
    let mut pick = || choices[rng.gen_range(0..choices.len())].parse().expect("literal");
    EnergyCaps {
        h_plus: pick(),
        h_minus: pick(),
        epsilon: "1/100".parse().expect("literal"),
    }
}

/// Distinct exponents in `(0, bound]`.
fn distinct_fractions<R: Rng>(rng: &mut R, bound: &Exponent, n: usize) -> Vec<Exponent> {
    let mut fracs: Vec<(i64, i64)> = vec![(1, 1), (1, 2), (1, 3), (2, 3), (1, 4), (3, 4), (1, 5), (2, 5)];
    let mut out = Vec::new();
    while out.len() < n && !fracs.is_empty() {
        let (p, q) = fracs.swap_remove(rng.gen_range(0..fracs.len()));
        out.push(Exponent::from_rational(
            bound.to_rational() * Exponent::new(p, q).to_rational(),
        ));
    }
    out
}

fn near_identity<R: Rng>(rng: &mut R, c: &ChainComplex) -> ChainMap {
    let id = ChainMap::identity(c);
    if rng.gen_bool(0.5) {
        id
    } else {
        id.add(&random_null_homotopic(rng, c, c)).expect("same shape")
    }
}

fn monomial(f: &ChainMap, exponent: &Exponent) -> OmegaChainMap {
    let om = f.tensor_omega();
    let mats = om
        .matrices()
        .keys()
        .map(|&k| (k, OmegaMatrix::monomial_times(&f.matrix(k), exponent)))
        .collect();
    OmegaChainMap::new(om.source().clone(), om.target().clone(), f.shift(), mats).expect("shapes")
}

/// `A + Σ N T^{-e} + Σ P T^{f}` with energies inside the window.
fn filtered_automorphism<R: Rng>(rng: &mut R, c: &ChainComplex, lower: &Exponent, cap: &Exponent) -> OmegaChainMap {
    let mut out = near_identity(rng, c).tensor_omega();
    let n_pos = rng.gen_range(0..=2);
    for e in distinct_fractions(rng, cap, n_pos) {
        let n = random_chain_map(rng, c, c);
        out = out.add(&monomial(&n, &-&e)).expect("same shape");
    }
    if rng.gen_bool(0.5) {
        let bound = -lower;
        for f in distinct_fractions(rng, &bound, 1) {
            let p = random_null_homotopic(rng, c, c);
            out = out.add(&monomial(&p, &f)).expect("same shape");
        }
    }
    out
}

fn table_from_maps(direction: Direction, caps: &EnergyCaps, prefix: &str, maps: &[&OmegaChainMap]) -> ModuliTable {
    let mut classes: BTreeMap<Exponent, String> = BTreeMap::new();
    let mut entries = Vec::new();
    for f in maps {
        let (s, t, shift) = (f.source(), f.target(), f.shift());
        for (&k, m) in f.matrices() {
            for (r, col, e) in m.entries() {
                for lambda in e.exponents() {
                    let energy = -lambda;
                    let n = classes.len();
                    let class = classes
                        .entry(energy.clone())
                        .or_insert_with(|| format!("{prefix}{n}"))
                        .clone();
                    entries.push(TableEntry {
                        source: s.labels(k)[col].clone(),
                        target: t.labels(k + shift)[r].clone(),
                        class,
                        energy,
                        count: 1,
                    });
                }
            }
        }
    }
    ModuliTable {
        direction,
        energy_caps: caps.clone(),
        entries,
    }
}

/// Adds a count-0 entry reusing an existing class, when a free slot exists.
fn add_zero_count<R: Rng>(rng: &mut R, t: &mut ModuliTable, c: &ChainComplex) {
    if t.entries.is_empty() {
        return;
    }
    let template = t.entries[rng.gen_range(0..t.entries.len())].clone();
    let (ks, _) = c.find(&template.source).expect("own label");
    let (kt, _) = c.find(&template.target).expect("own label");
    let (sources, targets) = (c.labels(ks), c.labels(kt));
    for _ in 0..8 {
        let source = sources[rng.gen_range(0..sources.len())].clone();
        let target = targets[rng.gen_range(0..targets.len())].clone();
        let taken = t
            .entries
            .iter()
            .any(|e| e.source == source && e.target == target && e.class == template.class);
        if !taken {
            t.entries.push(TableEntry {
                source,
                target,
                count: 0,
                ..template
            });
            return;
        }
    }
}

/// A dataset over `c` passing every identity check.
pub fn synthetic_dataset<R: Rng>(rng: &mut R, c: &ChainComplex) -> Dataset {
    let caps = pick_caps(rng);
    let wg = caps.window(Direction::G);
    let wi = caps.window(Direction::GInverse);
    let phi = filtered_automorphism(rng, c, &wg.lower, &wg.cap);
    let phi_inv = filtered_automorphism(rng, c, &wi.lower, &wi.cap);
    let i_r = near_identity(rng, c).tensor_omega();
    let defect = i_r
        .add(&phi_inv.after(&phi).expect("same complex"))
        .expect("same shape");
    let mut h_mats: BTreeMap<i32, OmegaMatrix> = c
        .degrees()
        .map(|k| (k, OmegaMatrix::zeros(c.dim(k + 1), c.dim(k))))
        .collect();
    let exps: std::collections::BTreeSet<Exponent> =
        defect.matrices().values().flat_map(|m| m.exponent_support()).collect();
    for lambda in exps.into_iter().filter(|l| !l.is_negative()) {
        let k =
            solve_null_homotopy(&slice_map(&defect, c, c, &lambda)).expect("defect is null-homotopic by construction");
        for (&deg, m) in k.as_map().matrices() {
            for (r, col) in m.nonzero_entries() {
                h_mats
                    .get_mut(&deg)
                    .expect("degree")
                    .entry_mut(r, col)
                    .toggle(lambda.clone());
            }
        }
    }
    let om = c.tensor_omega();
    let h = OmegaChainMap::new(om.clone(), om.clone(), 1, h_mats).expect("shapes");
    let mut tables = vec![
        table_from_maps(Direction::G, &caps, "u", &[&phi]),
        table_from_maps(Direction::GInverse, &caps, "v", &[&phi_inv]),
    ];
    let id = OmegaChainMap::identity(&om);
    let glued_maps: Vec<&OmegaChainMap> = if i_r == id { vec![&h] } else { vec![&i_r, &h] };
    let glued = table_from_maps(Direction::Glued, &caps, "w", &glued_maps);
    if !glued.entries.is_empty() {
        tables.push(glued);
    }
    for t in tables.iter_mut() {
        if rng.gen_bool(0.3) {
            add_zero_count(rng, t, c);
        }
    }
    Dataset { tables }
}

/// Which kind of entry a mutation touched.
pub fn entry_category(ds: &Dataset, table: usize, entry: usize) -> String {
    let t = &ds.tables[table];
    let e = &t.entries[entry];
    let sign = if e.energy.is_positive() {
        "positive energy"
    } else if e.energy.is_negative() {
        "negative energy"
    } else {
        "zero energy"
    };
    let zero = if e.count == 0 { ", count 0" } else { "" };
    format!("{} {sign}{zero}", t.direction)
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct MutationTally {
    pub total: usize,
    pub detected: usize,
    /// `(category, total, detected)`.
    pub by_category: BTreeMap<String, (usize, usize)>,
    /// Which check caught each detected mutation.
    pub by_stage: BTreeMap<String, usize>,
}

impl MutationTally {
    pub fn rate(&self) -> f64 {
        if self.total == 0 {
            1.0
        } else {
            self.detected as f64 / self.total as f64
        }
    }

    pub fn merge(&mut self, other: MutationTally) {
        self.total += other.total;
        self.detected += other.detected;
        for (k, (t, d)) in other.by_category {
            let e = self.by_category.entry(k).or_default();
            e.0 += t;
            e.1 += d;
        }
        for (k, n) in other.by_stage {
            *self.by_stage.entry(k).or_default() += n;
        }
    }
}

/// Flips every count of `ds` in turn and records which flips some check
/// reports.
pub fn mutation_sweep(ds: &Dataset, c: &ChainComplex) -> MutationTally {
    let mut tally = MutationTally::default();
    for (t, e) in ds.positions() {
        let category = entry_category(ds, t, e);
        let (outcome, _) = run_dataset(&ds.flip_count(t, e), c);
        let slot = tally.by_category.entry(category).or_default();
        slot.0 += 1;
        tally.total += 1;
        if let Some(fail) = outcome.first_failure() {
            slot.1 += 1;
            tally.detected += 1;
            *tally.by_stage.entry(fail.check.clone()).or_default() += 1;
        }
    }
    tally
}
