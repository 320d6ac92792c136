//! Generating exact functions from orbit functions, by both routes.
//!
//! A finitely supported function c on the orbit space lifts to an
//! S̃_N-invariant lattice function; the transport operator applied to the
//! lift gives the Fourier coefficients of an exact function. The symbolic
//! construction Σ_o c(o) D_0[Σ_n τ^n H_(R(o)+δ_0)] produces the same
//! function term by term.
//!
//! ```bash
//! cargo run --example exact_functions
//! ```

use fockforms::exactgen::{gen_exact, gen_exact_degree0, gen_exact_symbolic, OrbitFunction};
use fockforms::field::{expansion_to_coeffs, VectorField, COEFF_TOL};
use fockforms::multiindex::LatticePoint;

fn main() {
    let fields = [
        ("Y0", VectorField::y0()),
        ("X0", VectorField::x0()),
        ("d3-d0", VectorField::d3_minus_d0()),
    ];

    // the indicator of the origin orbit
    let c = OrbitFunction::indicator(LatticePoint::new(vec![0])).unwrap();
    for (name, field) in &fields {
        let lattice = gen_exact(field, &c, 2).unwrap();
        let symbolic = gen_exact_symbolic(field, &c);
        println!("{name}: c = indicator of orbit (0)");
        println!("  symbolic construction: {symbolic}");
        print!("  coefficient field:    ");
        for (z, v) in lattice.iter() {
            print!(" ξ̂({z}) = {v};");
        }
        println!();
        let check = expansion_to_coeffs(&symbolic, 1, lattice.window()).unwrap();
        println!("  routes agree: {}", check == lattice);
        println!(
            "  passes closedness: {}",
            field.is_closed_coeffs(&lattice, COEFF_TOL).closed
        );
    }

    // a degree-2 example
    let c = OrbitFunction::new(
        2,
        [
            (LatticePoint::new(vec![0, 1]), 1.0),
            (LatticePoint::new(vec![1, 1]), -0.5),
        ],
    )
    .unwrap();
    let xi = gen_exact(&VectorField::x0(), &c, 2).unwrap();
    println!("\nX0, degree-2 c supported on (0,1) and (1,1):");
    println!("  generated {} coefficients on window {}", xi.len(), xi.window());
    println!(
        "  closedness: {}",
        VectorField::x0().is_closed_coeffs(&xi, COEFF_TOL).closed
    );

    // degree 0: constants are exact exactly when Σ a_k ≠ 0
    println!("\ndegree-0 component per unit of g = x_0 (Σ a_k):");
    for (name, field) in [("d0", VectorField::d0())].iter().chain(fields.iter()) {
        println!("  {name:<6} {}", gen_exact_degree0(field));
    }
}
