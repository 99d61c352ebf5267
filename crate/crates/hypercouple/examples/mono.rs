// scratch: reproduce the failing monotonicity instance
use hypercouple::conditional::*;
use hypercouple::graph::Edge;
use hypercouple::prob::rat;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let s = EdgeSpace::new(5).unwrap();
    let all: Vec<Edge> = hypercouple::graph::SimpleGraph::complete(5).edges();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for case in 0..100 {
        let k = rng.gen_range(1..=3);
        let target_edges: Vec<Edge> = all.choose_multiple(&mut rng, k).copied().collect();
        let target = s.mask_of(&target_edges);
        let mut failed = Vec::new();
        for _ in 0..rng.gen_range(0..3) {
            let k = rng.gen_range(1..=3);
            let f: Vec<Edge> = all.choose_multiple(&mut rng, k).copied().collect();
            failed.push(s.mask_of(&f));
        }
        let mut extra_edges: Vec<Edge> = vec![*target_edges.choose(&mut rng).unwrap()];
        let k = rng.gen_range(1..=2);
        extra_edges.extend(all.choose_multiple(&mut rng, k).copied());
        let extra = s.mask_of(&extra_edges);
        let before = ConditionalQuery { target, constraint: HistoryConstraint::plain(failed.clone()), p: rat(1, 2) };
        let mut with = failed.clone();
        with.push(extra);
        let after = ConditionalQuery { target, constraint: HistoryConstraint::plain(with), p: rat(1, 2) };
        if let (Ok(a), Ok(b)) = (brute_force_conditional(&before), brute_force_conditional(&after)) {
            if b > a {
                println!("case {case}: VIOLATION");
                println!("  target = {:?}", target_edges);
                println!("  failed = {:?}", failed.iter().map(|&f| dump_mask(&s, f)).collect::<Vec<_>>());
                println!("  extra  = {}", dump_mask(&s, extra));
                println!("  before = {a}  after = {b}");
                return;
            }
        }
    }
    println!("no violation reproduced");
}

fn dump_mask(s: &EdgeSpace, mask: u128) -> String {
    let mut out = Vec::new();
    let mut m = mask;
    while m != 0 {
        let b = m.trailing_zeros();
        m &= m - 1;
        let e = s.edge_of_bit(b);
        out.push(format!("{}-{}", e.u(), e.v()));
    }
    out.join(",")
}
