//! Standard small cell complexes with matchings, and the monodromy models
//! built on them. Used by the self-test, the fixtures and the test suites.

use std::collections::BTreeMap;

use crate::complexes::{ChainComplex, ChainMap};
use crate::f2::F2Matrix;
use crate::morse::{build_morse_complex, ingest_chain_map, CellComplex, MorseComplex, MorseData};
use crate::seidel::{Dataset, Direction, EnergyCaps, ModuliTable, TableEntry};
use crate::wang::MINUS_PREFIX;

fn labels(v: &[&str]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn build(cells: &[&[&str]], incidence: &[(&str, &[&str])], matching: &[(&str, &str)]) -> MorseData {
    let cells = cells.iter().map(|l| labels(l)).collect();
    let incidence: Vec<(String, String)> = incidence
        .iter()
        .flat_map(|(c, fs)| fs.iter().map(move |f| (c.to_string(), f.to_string())))
        .collect();
    let complex = CellComplex::new(cells, &incidence).expect("model complexes are valid");
    let pairs: Vec<(String, String)> = matching.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    MorseData::new(complex, &pairs).expect("model matchings are valid")
}

/// Two vertices joined by two edges; one vertex-edge pair matched.
pub fn circle() -> MorseData {
    build(
        &[&["v0", "v1"], &["e0", "e1"]],
        &[("e0", &["v0", "v1"]), ("e1", &["v0", "v1"])],
        &[("v1", "e0")],
    )
}

/// Two hemispheres on a circle of two edges; only the bottom vertex and
/// the top face stay critical.
pub fn sphere() -> MorseData {
    build(
        &[&["v0", "v1"], &["e0", "e1"], &["f0", "f1"]],
        &[
            ("e0", &["v0", "v1"]),
            ("e1", &["v0", "v1"]),
            ("f0", &["e0", "e1"]),
            ("f1", &["e0", "e1"]),
        ],
        &[("v1", "e0"), ("e1", "f0")],
    )
}

/// One vertex, two loops and one square with boundary `aba⁻¹b⁻¹`; every
/// incidence is even, so all four cells are critical.
pub fn minimal_torus() -> MorseData {
    build(
        &[&["p"], &["a", "b"], &["f"]],
        &[("a", &["p", "p"]), ("b", &["p", "p"]), ("f", &["a", "a", "b", "b"])],
        &[],
    )
}

fn grid_cells() -> [&'static [&'static str]; 3] {
    [
        &["v00", "v10", "v01", "v11"],
        &["h00", "h10", "h01", "h11", "u00", "u10", "u01", "u11"],
        &["f00", "f10", "f01", "f11"],
    ]
}

/// The torus as a 2x2 grid of squares: 4 vertices, 8 edges, 4 faces.
/// `hij` joins `vij` to `v(i+1)j`, `uij` joins `vij` to `vi(j+1)`.
pub fn torus_grid_complex() -> CellComplex {
    torus_grid(&[]).complex().clone()
}

fn torus_grid(matching: &[(&str, &str)]) -> MorseData {
    build(
        &grid_cells(),
        &[
            ("h00", &["v00", "v10"]),
            ("h10", &["v10", "v00"]),
            ("h01", &["v01", "v11"]),
            ("h11", &["v11", "v01"]),
            ("u00", &["v00", "v01"]),
            ("u10", &["v10", "v11"]),
            ("u01", &["v01", "v00"]),
            ("u11", &["v11", "v10"]),
            ("f00", &["h00", "h01", "u00", "u10"]),
            ("f10", &["h10", "h11", "u10", "u00"]),
            ("f01", &["h01", "h00", "u01", "u11"]),
            ("f11", &["h11", "h10", "u11", "u01"]),
        ],
        matching,
    )
}

/// The grid torus with a perfect matching leaving `v00`, `h11`, `u01`, `f00`.
pub fn torus_perfect() -> MorseData {
    torus_grid(&[
        ("v10", "h00"),
        ("v01", "u00"),
        ("v11", "h01"),
        ("u10", "f10"),
        ("h10", "f11"),
        ("u11", "f01"),
    ])
}

/// The grid torus with a matching that leaves one vertex, four edges and
/// three faces critical. Every degree-1 Morse chain is a cycle.
pub fn torus_four_edges() -> MorseData {
    torus_grid(&[("v10", "h00"), ("v01", "u00"), ("v11", "h01"), ("u10", "f10")])
}

/// The grid torus with no matched pairs.
pub fn torus_unmatched() -> MorseData {
    torus_grid(&[])
}

/// A disk whose boundary, split into edges `a` and `b`, is glued
/// antipodally: each edge appears twice on the face.
pub fn projective_plane() -> MorseData {
    build(
        &[&["p", "q"], &["a", "b"], &["f"]],
        &[("a", &["p", "q"]), ("b", &["p", "q"]), ("f", &["a", "a", "b", "b"])],
        &[("q", "a")],
    )
}

/// A 2x2 grid with a flip in the vertical identification.
pub fn klein_bottle() -> MorseData {
    build(
        &[
            &["A", "B", "C", "D"],
            &["h0", "h1", "h2", "h3", "u0", "u1", "u2", "u3"],
            &["F0", "F1", "F2", "F3"],
        ],
        &[
            ("h0", &["A", "B"]),
            ("h1", &["B", "A"]),
            ("h2", &["C", "D"]),
            ("h3", &["D", "C"]),
            ("u0", &["A", "C"]),
            ("u1", &["B", "D"]),
            ("u2", &["C", "A"]),
            ("u3", &["D", "B"]),
            ("F0", &["h0", "h2", "u0", "u1"]),
            ("F1", &["h1", "h3", "u1", "u0"]),
            ("F2", &["h2", "h1", "u2", "u3"]),
            ("F3", &["h3", "h0", "u3", "u2"]),
        ],
        &[
            ("B", "h0"),
            ("C", "u0"),
            ("D", "h2"),
            ("u1", "F1"),
            ("h1", "F2"),
            ("h3", "F3"),
        ],
    )
}

/// Interval: two vertices, one edge.
pub fn interval() -> MorseData {
    build(&[&["v0", "v1"], &["e"]], &[("e", &["v0", "v1"])], &[])
}

pub fn morse(d: &MorseData) -> MorseComplex {
    build_morse_complex(d).expect("model matchings are acyclic")
}

/// The Dehn twist `a ↦ a, b ↦ a + b` on the minimal torus, as a chain map.
pub fn dehn_twist(torus: &MorseComplex) -> ChainMap {
    let mut m = BTreeMap::new();
    m.insert(1, F2Matrix::from_rows(&[vec![1, 1], vec![0, 1]]));
    for k in [0, 2] {
        m.insert(k, F2Matrix::identity(torus.complex.dim(k)));
    }
    ingest_chain_map(torus, m).expect("the twist commutes with the zero boundary")
}

/// Wang inputs `(fiber, phi, phi_g)` for the Dehn twist on the minimal torus.
pub fn dehn_twist_wang() -> (MorseComplex, ChainMap, ChainMap) {
    let t = morse(&minimal_torus());
    let twist = dehn_twist(&t);
    (t.clone(), ChainMap::identity(&t.complex), twist)
}

/// Wang inputs with identity monodromy on the minimal torus.
pub fn trivial_torus_wang() -> (MorseComplex, ChainMap, ChainMap) {
    let t = morse(&minimal_torus());
    let id = ChainMap::identity(&t.complex);
    (t, id.clone(), id)
}

/// Wang inputs with identity monodromy on the circle.
pub fn circle_wang() -> (MorseComplex, ChainMap, ChainMap) {
    let c = morse(&circle());
    let id = ChainMap::identity(&c.complex);
    (c, id.clone(), id)
}

/// Caps matching the separable Hamiltonian `t·x` on `x ∈ [-1, 1]`:
/// one-sided norms 1/2 and 1/2, with epsilon 1/100.
pub fn standard_caps() -> EnergyCaps {
    EnergyCaps {
        h_plus: "1/2".parse().expect("literal"),
        h_minus: "1/2".parse().expect("literal"),
        epsilon: "1/100".parse().expect("literal"),
    }
}

fn constant_entry(source: String, target: &str, class: &str) -> TableEntry {
    TableEntry {
        source,
        target: target.to_string(),
        class: class.to_string(),
        energy: "0".parse().expect("literal"),
        count: 1,
    }
}

fn constant_table(c: &ChainComplex, direction: Direction, caps: &EnergyCaps) -> ModuliTable {
    let entries = c
        .generators()
        .iter()
        .flatten()
        .map(|l| constant_entry(l.clone(), l, "constant"))
        .collect();
    ModuliTable {
        direction,
        energy_caps: caps.clone(),
        entries,
    }
}

/// Constant sections only: both maps and the extension over the cone of a
/// trivial-monodromy fiber are identities at energy 0.
pub fn trivial_dataset(c: &ChainComplex, caps: &EnergyCaps) -> Dataset {
    let extension = ModuliTable {
        direction: Direction::ConeExtension,
        energy_caps: caps.clone(),
        entries: c
            .generators()
            .iter()
            .flatten()
            .map(|l| constant_entry(format!("{MINUS_PREFIX}{l}"), l, "constant"))
            .collect(),
    };
    Dataset {
        tables: vec![
            constant_table(c, Direction::G, caps),
            constant_table(c, Direction::GInverse, caps),
            extension,
        ],
    }
}

/// Data pretending the Dehn twist on the minimal torus is a section map
/// with inverse the identity; no extension over the cone exists.
pub fn dehn_dataset(caps: &EnergyCaps) -> Dataset {
    let c = morse(&minimal_torus()).complex;
    let mut g = constant_table(&c, Direction::G, caps);
    g.entries.push(constant_entry("b".to_string(), "a", "twist"));
    Dataset {
        tables: vec![g, constant_table(&c, Direction::GInverse, caps)],
    }
}
