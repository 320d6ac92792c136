//! The orbit graph and the cocycle reading of closedness for the gradient
//! field.
//!
//! Vertices are orbits (cone points), one edge per multi-index; weighting
//! edges with Fourier coefficients turns Y0-closedness into cycle sums
//! vanishing everywhere except the degree-0 loop.
//!
//! ```bash
//! cargo run --example orbit_graph
//! ```

use fockforms::exactgen::{gen_exact, OrbitFunction};
use fockforms::field::{expansion_to_coeffs, VectorField};
use fockforms::graph::OrbitGraph;
use fockforms::hermite::HermiteExpansion;
use fockforms::multiindex::LatticePoint;

fn main() {
    // degree 0: a single vertex with a loop
    let g0 = OrbitGraph::build(0, 1);
    println!("degree 0: {} vertex, {} loop edge", g0.vertices().len(), g0.edges().len());

    // degree 1: a bidirectional chain with labeled edges
    let g1 = OrbitGraph::build(1, 4);
    println!("\ndegree 1, bound 4 (src | dst | label | weight):");
    print!("{}", g1.dump());
    println!("components: {}", g1.component_count());

    // degree 2: the cone adjacency z → z-e, z → z+e_i
    let g2 = OrbitGraph::build(2, 3);
    println!(
        "\ndegree 2, bound 3: {} vertices, {} edges, {} component, bijection with multi-indices: {}",
        g2.vertices().len(),
        g2.edges().len(),
        g2.component_count(),
        g2.edge_bijection_check(2)
    );

    // weights from a closed function cancel around cycles
    let gradient = expansion_to_coeffs(
        &(HermiteExpansion::x(1) - HermiteExpansion::x(0)),
        1,
        6,
    )
    .unwrap();
    let report = g1.assign_weights(&gradient).unwrap().cycle_check().unwrap();
    println!(
        "\nx_1 - x_0 (Y0-closed): {} cycles checked, max |sum| = {:.2e}, cocycle: {}",
        report.cycles_checked, report.max_abs_cycle_sum, report.ok
    );

    // x_0 is not Y0-closed: the 0→1→0 cycle sums to 1
    let x0_coeffs = expansion_to_coeffs(&HermiteExpansion::x(0), 1, 6).unwrap();
    let weighted = g1.assign_weights(&x0_coeffs).unwrap();
    let report = weighted.cycle_check().unwrap();
    println!(
        "x_0 (not Y0-closed): cocycle: {}, worst cycle sum = {}",
        report.ok,
        report.worst_cycle.as_ref().unwrap().sum
    );
    for &id in &report.worst_cycle.unwrap().edge_ids {
        let e = &weighted.edges()[id];
        println!(
            "  {} -> {}  label {}  weight {}",
            weighted.vertices()[e.src],
            weighted.vertices()[e.dst],
            e.label,
            e.weight.unwrap()
        );
    }

    // exact functions put finitely many nonzero weights on each component
    let c = OrbitFunction::indicator(LatticePoint::new(vec![2])).unwrap();
    let xi = gen_exact(&VectorField::y0(), &c, 10).unwrap();
    let weighted = OrbitGraph::build(1, 10).assign_weights(&xi).unwrap();
    let nonzero = weighted.edges().iter().filter(|e| e.weight != Some(0.0)).count();
    println!(
        "\nexact function from orbit (2): {nonzero} nonzero weights among {} edges, cocycle: {}",
        weighted.edges().len(),
        weighted.cycle_check().unwrap().ok
    );
}
