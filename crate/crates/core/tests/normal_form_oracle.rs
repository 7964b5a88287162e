//! Word-length counts of the enumerated tilings against two combinatorial
//! oracles that never touch the geometry: Tits' solution of the word problem
//! (a word is reduced iff no word braid-equivalent to it has a repeated
//! letter), and the growth series of the triangle group from Steinberg's
//! formula over its finite parabolic subgroups.

use std::collections::{BTreeSet, HashSet, VecDeque};

mod common;

use common::steinberg_counts;
use polylimit::experiments::tits_tiling;
use polylimit::reflection::CoxeterData;

type Orders = [[u32; 3]; 3];

/// All words reachable from `w` by braid moves.
fn braid_closure(w: &[u8], m: &Orders) -> HashSet<Vec<u8>> {
    let mut seen = HashSet::from([w.to_vec()]);
    let mut queue = VecDeque::from([w.to_vec()]);
    while let Some(x) = queue.pop_front() {
        for s in 0..3u8 {
            for t in 0..3u8 {
                if s == t {
                    continue;
                }
                let len = m[s as usize][t as usize] as usize;
                if len > x.len() {
                    continue;
                }
                for start in 0..=x.len() - len {
                    let alternating =
                        (0..len).all(|k| x[start + k] == if k % 2 == 0 { s } else { t });
                    if alternating {
                        let mut y = x.clone();
                        for k in 0..len {
                            y[start + k] = if k % 2 == 0 { t } else { s };
                        }
                        if seen.insert(y.clone()) {
                            queue.push_back(y);
                        }
                    }
                }
            }
        }
    }
    seen
}

fn is_reduced(closure: &HashSet<Vec<u8>>) -> bool {
    closure.iter().all(|w| w.windows(2).all(|p| p[0] != p[1]))
}

/// Number of elements of each length `0..=max_len`, by listing reduced words
/// and grouping them into braid classes.
fn tits_counts(m: &Orders, max_len: usize) -> (Vec<usize>, Vec<HashSet<Vec<u8>>>) {
    let mut counts = vec![1];
    let mut classes: Vec<HashSet<Vec<u8>>> = vec![HashSet::from([vec![]])];
    let mut frontier: Vec<Vec<u8>> = vec![vec![]];
    for _ in 1..=max_len {
        let mut seen: HashSet<Vec<u8>> = HashSet::new();
        let mut next = vec![];
        let mut count = 0;
        for w in &frontier {
            for s in 0..3u8 {
                if w.last() == Some(&s) {
                    continue;
                }
                let mut x = w.clone();
                x.push(s);
                if seen.contains(&x) {
                    continue;
                }
                let closure = braid_closure(&x, m);
                if !is_reduced(&closure) {
                    seen.extend(closure);
                    continue;
                }
                count += 1;
                next.extend(closure.iter().cloned());
                seen.extend(closure.iter().cloned());
                classes.push(closure);
            }
        }
        counts.push(count);
        frontier = next;
    }
    (counts, classes)
}

const CASES: [(u32, u32, u32); 3] = [(4, 4, 4), (3, 4, 5), (3, 3, 4)];

#[test]
fn oracles_agree_with_each_other() {
    for (a, b, c) in CASES {
        let data = CoxeterData::new(a, b, c, 0.0).unwrap();
        let (counts, _) = tits_counts(&data.orders(), 8);
        let series: Vec<usize> = steinberg_counts([a, b, c], 8)
            .iter()
            .map(|&x| x as usize)
            .collect();
        assert_eq!(counts, series, "({a}, {b}, {c})");
    }
}

#[test]
fn known_growth_of_444() {
    assert_eq!(
        steinberg_counts([4, 4, 4], 14),
        vec![1, 3, 6, 12, 21, 36, 63, 108, 186, 321, 552, 951, 1638, 2820, 4857]
    );
}

#[test]
fn tilings_match_normal_form_oracle() {
    for (a, b, c) in CASES {
        let (_, classes) = tits_counts(&CoxeterData::new(a, b, c, 0.0).unwrap().orders(), 8);
        for s in [0.0, 0.5, 1.0, -1.0] {
            let data = CoxeterData::new(a, b, c, s).unwrap();
            let (tiling, _) = tits_tiling(&data, 8).unwrap();
            let counts = tiling.length_counts();
            let expected: Vec<usize> = steinberg_counts([a, b, c], 8)
                .iter()
                .map(|&x| x as usize)
                .collect();
            assert_eq!(counts, expected, "({a}, {b}, {c}) s = {s}");
            // every tile word is reduced, and no two tiles share a braid class
            let mut hit = BTreeSet::new();
            for tile in &tiling.tiles {
                let w: Vec<u8> = tile.word.iter().map(|g| g - 1).collect();
                let class = classes
                    .iter()
                    .position(|cl| cl.contains(&w))
                    .unwrap_or_else(|| panic!("word {} is not reduced", tile.word_string()));
                assert!(
                    hit.insert(class),
                    "two tiles in class of {}",
                    tile.word_string()
                );
            }
        }
    }
}

#[test]
fn deeper_counts_match_growth_series() {
    for (a, b, c) in [(4, 4, 4), (3, 4, 5)] {
        let expected: Vec<usize> = steinberg_counts([a, b, c], 10)
            .iter()
            .map(|&x| x as usize)
            .collect();
        for s in [0.0, 0.5, 1.0] {
            let (tiling, _) = tits_tiling(&CoxeterData::new(a, b, c, s).unwrap(), 10).unwrap();
            assert_eq!(tiling.length_counts(), expected, "({a}, {b}, {c}) s = {s}");
        }
    }
}
