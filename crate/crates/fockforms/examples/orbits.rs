//! Multi-index coding, the dot action, orbit shadows, and cone canonical
//! forms.
//!
//! ```bash
//! cargo run --example orbits
//! ```

use fockforms::multiindex::{enumerate_orbits, LatticePoint, MultiIndex};
use fockforms::symmetry::{canonicalize, Region};

fn main() {
    // a configuration with one particle at site -1 and two at site 3
    let index = MultiIndex::from_pairs([(-1, 1), (3, 2)]);
    println!("multi-index   {index}");
    println!("degree        {}", index.degree());
    println!("coding z_I    ({})", index.encode());

    println!("\norbit shadow (all same degree, one nonnegative representative):");
    for member in index.orbit() {
        let marker = if member == index.representative() { "  <- representative" } else { "" };
        println!("  {member}{marker}");
    }
    println!("cone point    ({})", index.cone_point());

    // the group-theoretic canonical form agrees with the orbit construction
    let z = LatticePoint::new(vec![3, -2, 1]);
    println!("\ncanonicalize({z}) = ({})", canonicalize(&z));

    // degree-2 orbits are nondecreasing nonnegative pairs
    println!("\ndegree-2 orbits with coordinates <= 2:");
    for cone in enumerate_orbits(2, 2) {
        println!("  ({cone})");
    }

    // the invariant truncation region P_2 in two dimensions is a hexagon
    let region = Region::p_region(2, 2);
    println!("\nP_2 in dimension 2 ({} points):", region.len());
    for point in region.points() {
        println!("  ({point})");
    }
}
