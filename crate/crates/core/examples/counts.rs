use std::time::Instant;
use tamari::{simplicial::enumerate_hst, zonotopal::enumerate_bruhat, Limits};

fn main() {
    let lim = Limits::default();
    for (n, dim) in [(4, 2), (5, 2), (6, 2), (7, 2), (4, 3), (5, 3), (6, 3), (7, 3), (5, 4), (6, 4), (7, 4)] {
        let t = Instant::now();
        let e = enumerate_bruhat(n, dim, &lim).unwrap();
        println!("B({n},{dim}) = {} covers={} {:?}", e.elements.len(), e.poset.covers().len(), t.elapsed());
    }
    for (n, d) in [(4, 1), (5, 1), (6, 1), (7, 1), (6, 2), (7, 2), (8, 2), (9, 2), (5, 3), (6, 3), (7, 3), (6, 4), (7, 4), (8, 4)] {
        let t = Instant::now();
        let e = enumerate_hst(n, d, &lim).unwrap();
        println!("S({n},{d}) = {} {:?}", e.elements.len(), t.elapsed());
    }
}
