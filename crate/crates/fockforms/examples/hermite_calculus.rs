//! Hermite expansions: evaluation, translation, projections, and quadrature
//! inner products against the Gaussian measure.
//!
//! ```bash
//! cargo run --example hermite_calculus
//! ```

use fockforms::hermite::{factorial, hermite_eval, inner_product, Configuration, HermiteExpansion};
use fockforms::multiindex::MultiIndex;

fn main() {
    println!("H_i(x) under the 1/i! normalization:");
    for i in 0..=4u32 {
        let values: Vec<String> = [-1.0, 0.0, 0.5, 2.0]
            .iter()
            .map(|&x| format!("H_{i}({x}) = {:+.4}", hermite_eval(i, x)))
            .collect();
        println!("  {}", values.join("   "));
    }

    // the squared norm of H_I is Π 1/i_n!
    println!("\nsquared norms <H_I, H_I> = Π 1/i_n!:");
    for index in [
        MultiIndex::delta(0),
        MultiIndex::from_pairs([(0, 2)]),
        MultiIndex::from_pairs([(0, 2), (1, 1)]),
        MultiIndex::from_pairs([(0, 3), (2, 2)]),
    ] {
        let e = HermiteExpansion::from_terms([(index.clone(), 1.0)]);
        let analytic: f64 = index.iter().map(|(_, c)| 1.0 / factorial(c)).product();
        println!(
            "  I = {index:<10} quadrature {:+.12}   analytic {:+.12}",
            inner_product(&e, &e),
            analytic
        );
    }

    // distinct basis elements are orthogonal
    let a = HermiteExpansion::from_terms([(MultiIndex::from_pairs([(0, 2)]), 1.0)]);
    let b = HermiteExpansion::from_terms([(MultiIndex::from_pairs([(1, 2)]), 1.0)]);
    println!("\n<H_(0:2), H_(1:2)> = {:+.2e}", inner_product(&a, &b));

    // expansions form an algebra under +, -, scaling, and translation
    let gradient = HermiteExpansion::x(1) - HermiteExpansion::x(0);
    println!("\nξ = {gradient}");
    println!("τ²ξ = {}", gradient.translate(2));
    println!("‖ξ‖² = {}", gradient.norm_sq());

    let mut config = Configuration::new();
    config.insert(0, 0.25);
    config.insert(1, -1.5);
    println!("ξ(x_0 = 0.25, x_1 = -1.5) = {}", gradient.eval(&config).unwrap());

    let mixed = gradient.clone() + HermiteExpansion::from_terms([(MultiIndex::from_pairs([(0, 2)]), 3.0)]);
    println!("\ndegree slices of {mixed}:");
    for degree in 0..=2 {
        println!("  degree {degree}: {}", mixed.project(degree));
    }
}
