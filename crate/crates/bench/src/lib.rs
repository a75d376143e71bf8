//! Fixtures shared by the benchmarks in `benches/`.

use kotriple_core::dga::{exterior_example, odd_line_example};
use kotriple_core::exemplars::build_exemplar;
use kotriple_core::{KOClass, RealSpectralTriple, StarDGA, Variant};

/// The factor pair with the largest product Hilbert space (8 × 8 × 2 = 128).
pub fn largest_pair() -> (RealSpectralTriple, RealSpectralTriple) {
    let one = build_exemplar(KOClass::new(1, Variant::Upper))
        .expect("exemplar builds")
        .triple;
    (one.clone(), one)
}

/// Two even factors of dimension 8 each.
pub fn even_pair() -> (RealSpectralTriple, RealSpectralTriple) {
    let c = KOClass::new(2, Variant::Lower);
    let t = build_exemplar(c).expect("exemplar builds").triple;
    (t.clone(), t)
}

pub fn dga_factors() -> (StarDGA, StarDGA) {
    (exterior_example(), odd_line_example())
}
