use kupweb::diagram::moves::{apply_move, enumerate_moves, MoveKind};
use kupweb::fuzz::random_virtual_diagram;
use kupweb::sl3::bracket;
use rand::rngs::StdRng;
use rand::SeedableRng;

#[test]
fn r3_sites_preserve_the_bracket() {
    let mut rng = StdRng::seed_from_u64(123);
    for trial in 0..150 {
        let d = random_virtual_diagram(3 + trial % 3, &mut rng);
        let b = bracket(&d);
        for (k, s) in enumerate_moves(&d) {
            if k != MoveKind::R3 {
                continue;
            }
            let out = apply_move(&d, &s).unwrap();
            let b2 = bracket(&out);
            if b2 != b {
                panic!("R3 changed the bracket: {} via {} -> {}", d.code(), s, out.code());
            }
        }
    }
}
