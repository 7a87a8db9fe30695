//! Exhaustive winner determination for small combinatorial auctions.

use rand::Rng;

/// A bid on a bundle; resources are bits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bundle {
    pub bid: f64,
    pub reads: u32,
    pub writes: u32,
}

pub fn conflict(a: &Bundle, b: &Bundle) -> bool {
    a.writes & b.writes != 0 || a.writes & b.reads != 0 || a.reads & b.writes != 0
}

pub fn conflict_free(bundles: &[Bundle], chosen: &[usize]) -> bool {
    chosen
        .iter()
        .enumerate()
        .all(|(n, &i)| chosen[n + 1..].iter().all(|&j| i != j && !conflict(&bundles[i], &bundles[j])))
}

/// Maximum total bid over all conflict-free subsets, with one optimal
/// subset.
pub fn optimum(bundles: &[Bundle]) -> (f64, Vec<usize>) {
    assert!(bundles.len() <= 20, "exhaustive search is exponential");
    let n = bundles.len();
    let mut conflicts = vec![0u32; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && conflict(&bundles[i], &bundles[j]) {
                conflicts[i] |= 1 << j;
            }
        }
    }
    let mut best = (0.0, 0u32);
    for set in 0u32..(1 << n) {
        let ok = (0..n).all(|i| set & (1 << i) == 0 || conflicts[i] & set == 0);
        if ok {
            let v: f64 = (0..n).filter(|i| set & (1 << i) != 0).map(|i| bundles[i].bid).sum();
            if v > best.0 {
                best = (v, set);
            }
        }
    }
    (best.0, (0..n).filter(|i| best.1 & (1 << i) != 0).collect())
}

/// Number of distinct written resources.
pub fn written_resources(bundles: &[Bundle]) -> u32 {
    bundles.iter().fold(0, |acc, b| acc | b.writes).count_ones()
}

/// Random auction with up to `max_tasks` bundles over `resources`
/// resources. With `reads`, bundles may also read resources.
pub fn random_auction(rng: &mut impl Rng, max_tasks: usize, resources: u32, reads: bool) -> Vec<Bundle> {
    let n = rng.gen_range(1..=max_tasks);
    (0..n)
        .map(|_| {
            let mut writes = 0;
            while writes == 0 {
                writes = rng.gen_range(0..(1u32 << resources));
            }
            let reads = if reads { rng.gen_range(0..(1u32 << resources)) & !writes } else { 0 };
            Bundle {
                bid: rng.gen_range(0..=100) as f64 / 4.0,
                reads,
                writes,
            }
        })
        .collect()
}
