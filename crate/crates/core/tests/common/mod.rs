#![allow(dead_code)]

/// Decodes a Prüfer sequence over `n` nodes into its tree's links.
pub fn prufer_tree(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut links = Vec::with_capacity(n - 1);
    for &s in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        links.push((leaf, s));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    links.push((rest[0], rest[1]));
    links
}

/// Number of reduced Steiner trees over `r` labeled terminals, counted as
/// labeled trees on `r + k` nodes whose `k` extra nodes all have degree at
/// least 3, divided by `k!`. A tree automorphism fixing every leaf is
/// trivial, and all leaves are terminals, so the division is exact.
pub fn prufer_division_count(r: usize) -> u64 {
    if r <= 2 {
        return 1;
    }
    let mut total = 0u64;
    for k in 0..=r - 2 {
        let n = r + k;
        let len = n - 2;
        let mut count = 0u64;
        let mut seq = vec![0usize; len];
        loop {
            let mut occ = vec![0usize; n];
            for &s in &seq {
                occ[s] += 1;
            }
            // Degree is occurrences plus one.
            if (r..n).all(|b| occ[b] >= 2) {
                count += 1;
            }
            let mut i = 0;
            while i < len {
                seq[i] += 1;
                if seq[i] < n {
                    break;
                }
                seq[i] = 0;
                i += 1;
            }
            if i == len {
                break;
            }
        }
        let fact: u64 = (1..=k as u64).product();
        assert_eq!(count % fact, 0);
        total += count / fact;
    }
    total
}

#[test]
fn prufer_roundtrip_small() {
    let links = prufer_tree(&[3, 3], 4);
    assert_eq!(links.len(), 3);
    assert!(links.iter().all(|&(a, b)| a == 3 || b == 3));
}
