use brank::generators;
use brank::strassen::commutation_holds_on_span;
use std::time::Instant;

#[test]
fn timing() {
    let w = generators::random_rank_r(4, 4, 4, 4, 0, 3).unwrap();
    for mode in 1..=3 {
        let space = w.tensor.slice_space(mode);
        for p in 1..=3 {
            let t0 = Instant::now();
            let c = commutation_holds_on_span(&space.slices, p).unwrap();
            println!("mode {mode} p {p}: {:?} holds={}", t0.elapsed(), c.holds);
        }
    }
}
