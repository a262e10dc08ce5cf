//! Two-symbol subalphabets on which both strings stay imbalanced.

use crate::error::{Error, Result};
use crate::types::{count_ids, counts_balanced, is_balanced, same_alphabet, SymbolString};

fn restricted_imbalanced(ids: &[u8], pair: [u8; 2], radius: f64) -> bool {
    let (mut c0, mut c1) = (0usize, 0usize);
    for &c in ids {
        if c == pair[0] {
            c0 += 1;
        } else if c == pair[1] {
            c1 += 1;
        }
    }
    !counts_balanced(&[c0, c1], c0 + c1, radius)
}

/// True iff the restrictions of both `a` and `b` to `pair` are not
/// `rho/s`-balanced, each measured against its own length.
pub fn verify_pair(a: &SymbolString, b: &SymbolString, pair: [u8; 2], rho: f64) -> bool {
    let s = a.sigma();
    if pair[0] == pair[1] || pair.iter().any(|&p| p as usize >= s) || same_alphabet(a, b).is_err() {
        return false;
    }
    let radius = rho / s as f64;
    restricted_imbalanced(a.ids(), pair, radius) && restricted_imbalanced(b.ids(), pair, radius)
}

/// Find `{σ, τ}` such that both restrictions are not `rho/s`-balanced.
///
/// Symbols are ordered by their count in `a` (ascending, ties by id). The
/// largest adjacent gap `j` is located, then the `s - 1` sets
/// `{σ_s, σ_{j-1}}, …, {σ_j, σ_{j-1}}, {σ_j, σ_{j-2}}, …, {σ_j, σ_1}` are
/// tried in that order. The returned pair is sorted by id.
pub fn find_imbalanced_pair(a: &SymbolString, b: &SymbolString, rho: f64) -> Result<[u8; 2]> {
    same_alphabet(a, b)?;
    let s = a.sigma();
    if s < 3 {
        return Err(Error::Precondition(format!(
            "pair search needs an alphabet of size at least 3, got {s}"
        )));
    }
    if is_balanced(a, rho) || is_balanced(b, rho) {
        return Err(Error::Precondition(format!(
            "both inputs must be imbalanced at radius {rho}"
        )));
    }
    let counts = count_ids(a.ids(), s);
    let mut order: Vec<u8> = (0..s as u8).collect();
    order.sort_by_key(|&id| counts[id as usize]);

    // 0-based: gap between order[j-1] and order[j]
    let mut j = 1;
    for k in 2..s {
        let gap = |k: usize| counts[order[k] as usize] - counts[order[k - 1] as usize];
        if gap(k) > gap(j) {
            j = k;
        }
    }
    let gap = counts[order[j] as usize] - counts[order[j - 1] as usize];
    if (gap * s) as f64 <= rho * a.len() as f64 {
        return Err(Error::Contradiction(format!(
            "no count gap above rho/s·n (largest gap {gap}, n = {})",
            a.len()
        )));
    }

    let upper = (j..s).rev().map(|k| [order[k], order[j - 1]]);
    let lower = (0..j.saturating_sub(1)).rev().map(|k| [order[j], order[k]]);
    for pair in upper.chain(lower) {
        if verify_pair(a, b, pair, rho) {
            let mut pair = pair;
            pair.sort_unstable();
            return Ok(pair);
        }
    }
    Err(Error::Contradiction(
        "no two-symbol subalphabet leaves both strings imbalanced".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{restrict, Alphabet};
    use rand::{Rng, SeedableRng};
    use std::sync::Arc;

    fn from_counts(al: &Arc<Alphabet>, counts: &[usize]) -> SymbolString {
        let ids = counts
            .iter()
            .enumerate()
            .flat_map(|(k, &c)| std::iter::repeat_n(k as u8, c))
            .collect();
        SymbolString::new(al.clone(), ids).unwrap()
    }

    #[test]
    fn counts_example() {
        let al = Arc::new(Alphabet::canonical(3).unwrap());
        let a = from_counts(&al, &[6, 3, 3]);
        let b = from_counts(&al, &[3, 6, 3]);
        let pair = find_imbalanced_pair(&a, &b, 0.1).unwrap();
        assert!(pair.contains(&0));
        assert!(verify_pair(&a, &b, pair, 0.1));
        // restricted strings really are imbalanced at rho/s on their own length
        for x in [&a, &b] {
            let r = restrict(x, &pair).unwrap();
            assert!(!is_balanced(&r.restricted, 0.1 / 3.0));
        }
        assert!(!verify_pair(&a, &b, [1, 2], 0.1));
    }

    #[test]
    fn identical_imbalanced_inputs() {
        let al = Arc::new(Alphabet::canonical(4).unwrap());
        let a = from_counts(&al, &[1, 2, 9, 20]);
        let pair = find_imbalanced_pair(&a, &a, 0.1).unwrap();
        // largest gap is between 9 and 20, first set is {σ_s, σ_{j-1}}
        assert_eq!(pair, [2, 3]);
    }

    #[test]
    fn preconditions() {
        let al = Arc::new(Alphabet::canonical(3).unwrap());
        let balanced = from_counts(&al, &[4, 4, 4]);
        let skewed = from_counts(&al, &[10, 1, 1]);
        assert!(matches!(
            find_imbalanced_pair(&balanced, &skewed, 0.1),
            Err(Error::Precondition(_))
        ));
        let x = SymbolString::binary("0001").unwrap();
        assert!(matches!(
            find_imbalanced_pair(&x, &x, 0.1),
            Err(Error::Precondition(_))
        ));
        let p = SymbolString::binary("0101").unwrap();
        assert!(!verify_pair(&p, &p, [0, 1], 0.01));
        assert!(!verify_pair(&skewed, &skewed, [0, 0], 0.1));
    }

    #[test]
    fn never_contradicts_on_random_imbalanced_pairs() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let rho = 0.05;
        let mut checked = 0;
        while checked < 3000 {
            let s = rng.random_range(3..=6);
            let al = Arc::new(Alphabet::canonical(s).unwrap());
            let gen = |rng: &mut rand::rngs::StdRng| {
                let n = rng.random_range(50..=500);
                let w: Vec<f64> = (0..s).map(|_| rng.random::<f64>() + 0.05).collect();
                let total: f64 = w.iter().sum();
                let ids: Vec<u8> = (0..n)
                    .map(|_| {
                        let mut u = rng.random::<f64>() * total;
                        for (k, &wk) in w.iter().enumerate() {
                            if u < wk {
                                return k as u8;
                            }
                            u -= wk;
                        }
                        (s - 1) as u8
                    })
                    .collect();
                SymbolString::new(al.clone(), ids).unwrap()
            };
            let a = gen(&mut rng);
            let b = gen(&mut rng);
            if is_balanced(&a, rho) || is_balanced(&b, rho) {
                continue;
            }
            let pair = find_imbalanced_pair(&a, &b, rho).unwrap();
            assert!(verify_pair(&a, &b, pair, rho));
            checked += 1;
        }
    }
}
