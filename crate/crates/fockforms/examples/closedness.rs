//! Closedness verification, symbolically and through Fourier coefficients.
//!
//! The fourth-order field X_0 = ∂_1 - 2∂_0 + ∂_{-1} has closed functions
//! that the gradient field Y_0 = ∂_1 - ∂_0 rejects; both checks locate the
//! violation.
//!
//! ```bash
//! cargo run --example closedness
//! ```

use fockforms::field::{expansion_to_coeffs, VectorField, COEFF_TOL};
use fockforms::hermite::HermiteExpansion;

fn verdict(closed: bool) -> &'static str {
    if closed {
        "closed"
    } else {
        "NOT closed"
    }
}

fn main() {
    let x0 = VectorField::x0();
    let y0 = VectorField::y0();

    let examples = [
        ("1", HermiteExpansion::constant(1.0)),
        ("x_0", HermiteExpansion::x(0)),
        ("x_2 + x_-2", HermiteExpansion::x(2) + HermiteExpansion::x(-2)),
        (
            "x_1 + x_-1 - 2 x_0",
            HermiteExpansion::x(1) + HermiteExpansion::x(-1) + HermiteExpansion::x(0) * -2.0,
        ),
        ("x_1 - x_0", HermiteExpansion::x(1) - HermiteExpansion::x(0)),
    ];

    println!("symbolic check D_n(τ^m ξ) = D_m(τ^n ξ), |m|,|n| <= 5, exact arithmetic:");
    println!("{:<22} {:>12} {:>12}", "ξ", "X0", "Y0");
    for (name, exp) in &examples {
        println!(
            "{name:<22} {:>12} {:>12}",
            verdict(x0.is_closed_symbolic(exp, 5, 0.0).closed),
            verdict(y0.is_closed_symbolic(exp, 5, 0.0).closed)
        );
    }

    // locate a violation
    let report = y0.is_closed_symbolic(&HermiteExpansion::x(0), 3, 0.0);
    let v = &report.violations[0];
    println!("\nx_0 against Y0 fails first at (n, m) = ({}, {}), |diff| = {}", v.n, v.m, v.max_abs_diff);

    // the same verdicts through the coefficient relations on a window
    println!("\ncoefficient check Σ_k a_k ξ̂_(I+δ_(n+k)) = Σ_k a_k ξ̂_(τ^n(I+δ_k)), window 6:");
    for (name, exp) in &examples[1..] {
        let coeffs = expansion_to_coeffs(exp, 1, 6).unwrap();
        let rx = x0.is_closed_coeffs(&coeffs, COEFF_TOL);
        let ry = y0.is_closed_coeffs(&coeffs, COEFF_TOL);
        println!(
            "{name:<22} X0: {:<12} Y0: {:<12} ({} conditions checked)",
            verdict(rx.closed),
            verdict(ry.closed),
            rx.pairs_checked
        );
    }

    let coeffs = expansion_to_coeffs(&HermiteExpansion::x(0), 1, 6).unwrap();
    let report = y0.is_closed_coeffs(&coeffs, COEFF_TOL);
    println!("\nx_0 against Y0 coefficient violations:");
    for v in &report.violations {
        println!("  n = {:>2}, I = [{}]: lhs = {} rhs = {}", v.n, v.base, v.lhs, v.rhs);
    }
}
