use fgdom::presentation::Presentation;
use fgdom::representation::{fg_from_framed_with, holonomy_from_fg_with};
use fgdom::surface::standard_triangulation;
use num_complex::Complex64 as C64;
use rand::Rng;
use rand::SeedableRng;

fn main() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let mut tested = 0;
    for (g, k) in [(0usize, 3usize), (0, 4), (0, 5), (1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3), (3, 1), (3, 2)] {
        let mut tri = standard_triangulation(g, k).unwrap();
        for step in 0..30 {
            let e = rng.random_range(0..tri.num_edges());
            if let Ok(next) = tri.flip(e) {
                tri = next;
            }
            let pres = match Presentation::new(&tri) {
                Ok(p) => p,
                Err(err) => panic!("S_{{{g},{k}}} step {step}: {err}"),
            };
            // Round-trip a random coordinate vector through the machinery.
            let coords: Vec<C64> = (0..tri.num_edges())
                .map(|_| C64::from_polar(rng.random_range(0.5..2.0), rng.random_range(-2.5..2.5)))
                .collect();
            let rep = holonomy_from_fg_with(&tri, &pres, &coords).unwrap();
            assert!(rep.relation_residual() < 1e-7, "S_{{{g},{k}}} step {step}: residual");
            let back = fg_from_framed_with(&rep, &pres).unwrap();
            for (x, y) in coords.iter().zip(&back) {
                assert!((x - y).norm() < 1e-7, "S_{{{g},{k}}} step {step}: roundtrip");
            }
            tested += 1;
        }
    }
    println!("stress ok: {tested} triangulations across 11 surface types");
}
