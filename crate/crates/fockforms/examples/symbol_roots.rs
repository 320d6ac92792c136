//! Unit-circle roots of the transport symbol p(x) = Σ a_k x^k.
//!
//! The roots obstruct inverting T c = ξ̂ in ℓ²; their phases feed the
//! spectral mask. A double root (X0) splits under the eigensolver and is
//! recovered by phase clustering.
//!
//! ```bash
//! cargo run --example symbol_roots
//! ```

use fockforms::field::VectorField;
use fockforms::transport::{unit_circle_roots, Symbol, ROOT_TOL};

fn main() {
    let fields = [
        ("d0", VectorField::d0()),
        ("Y0", VectorField::y0()),
        ("X0", VectorField::x0()),
        ("d3-d0", VectorField::d3_minus_d0()),
    ];

    println!("{:<8} {:<28} {}", "field", "p(x)", "unit-circle roots (phase × multiplicity)");
    for (name, field) in &fields {
        let p: Vec<String> = field
            .iter()
            .map(|(k, a)| match k {
                0 => format!("{a}"),
                1 => format!("{a}·x"),
                _ => format!("{a}·x^{k}"),
            })
            .collect();
        let roots = unit_circle_roots(field, ROOT_TOL);
        let rendered = if roots.is_empty() {
            "none".to_string()
        } else {
            roots
                .iter()
                .map(|(phase, mult)| format!("{phase:+.6} ×{mult}"))
                .collect::<Vec<_>>()
                .join(", ")
        };
        println!("{name:<8} {:<28} {rendered}", p.join(" + "));
    }

    // the symbol at phase 0 is the coefficient sum
    println!("\np(e^(i·0)) = Σ a_k:");
    for (name, field) in &fields {
        let symbol = Symbol::new(field);
        println!("  {name:<8} {:+.3}", symbol.eval(0.0).re);
    }
}
