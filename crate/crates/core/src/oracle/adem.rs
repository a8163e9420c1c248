//! Admissible-basis straightening via the Adem relations
//! `Sq^a Sq^b = Σ_j C(b−1−j, a−2j) Sq^{a+b−j} Sq^j` for `a < 2b`.

use std::collections::BTreeSet;

/// `C(n, k) mod 2` by Lucas; zero outside `0 ≤ k ≤ n`.
pub fn binom_mod2(n: i64, k: i64) -> bool {
    n >= 0 && k >= 0 && k <= n && (k & !n) == 0
}

pub fn is_admissible(word: &[u32]) -> bool {
    word.windows(2).all(|w| w[0] >= 2 * w[1]) && !word.contains(&0)
}

/// The admissible words summing to `Sq^{w_1} ⋯ Sq^{w_k}`.
pub fn adem_straighten(word: &[u32]) -> BTreeSet<Vec<u32>> {
    let mut out = BTreeSet::new();
    let mut stack = vec![word.iter().copied().filter(|&x| x != 0).collect::<Vec<u32>>()];
    while let Some(w) = stack.pop() {
        let Some(i) = (0..w.len().saturating_sub(1)).find(|&i| w[i] < 2 * w[i + 1]) else {
            if !out.remove(&w) {
                out.insert(w);
            }
            continue;
        };
        let (a, b) = (w[i] as i64, w[i + 1] as i64);
        for j in 0..=a / 2 {
            if !binom_mod2(b - 1 - j, a - 2 * j) {
                continue;
            }
            let mut v = w[..i].to_vec();
            v.push((a + b - j) as u32);
            if j > 0 {
                v.push(j as u32);
            }
            v.extend_from_slice(&w[i + 2..]);
            stack.push(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(ws: &[&[u32]]) -> BTreeSet<Vec<u32>> {
        ws.iter().map(|w| w.to_vec()).collect()
    }

    #[test]
    fn small_relations() {
        assert!(adem_straighten(&[1, 1]).is_empty());
        assert_eq!(adem_straighten(&[2, 2]), set(&[&[3, 1]]));
        assert_eq!(adem_straighten(&[1, 2]), set(&[&[3]]));
        assert_eq!(adem_straighten(&[3, 1]), set(&[&[3, 1]]));
        assert_eq!(adem_straighten(&[2, 3]), set(&[&[5], &[4, 1]]));
    }

    #[test]
    fn output_is_admissible() {
        for a in 0..8 {
            for b in 0..8 {
                for c in 0..8 {
                    assert!(adem_straighten(&[a, b, c]).iter().all(|w| is_admissible(w)));
                }
            }
        }
    }
}
