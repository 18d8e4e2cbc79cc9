use super::datum::RootDatum;
use super::weyl::{Elem, WeylGroup};

/// `β_j = s_{i_1} ⋯ s_{i_{j-1}} α_{i_j}` in character coordinates.
pub fn beta_sequence(d: &RootDatum, word: &[usize]) -> Vec<Vec<i32>> {
    (0..word.len())
        .map(|j| {
            word[..j]
                .iter()
                .rev()
                .fold(d.simple_roots[word[j] - 1].clone(), |v, &i| d.reflect_char(i, &v))
        })
        .collect()
}

/// `γ^∨_j = s_{i_ℓ}^{ε_ℓ} ⋯ s_{i_{j+1}}^{ε_{j+1}} α^∨_{i_j}` in cocharacter
/// coordinates, where `ε_k = 1` exactly when `k ∈ J`.
pub fn gamma_sequence(d: &RootDatum, word: &[usize], subset: &[bool]) -> Vec<Vec<i32>> {
    (0..word.len())
        .map(|j| {
            (j + 1..word.len())
                .filter(|&k| subset[k])
                .fold(d.simple_coroots[word[j] - 1].clone(), |v, k| d.reflect_cochar(word[k], &v))
        })
        .collect()
}

/// Root-side analogue of [`gamma_sequence`], used for the Langlands-dual formulas.
pub fn gamma_roots(d: &RootDatum, word: &[usize], subset: &[bool]) -> Vec<Vec<i32>> {
    (0..word.len())
        .map(|j| {
            (j + 1..word.len())
                .filter(|&k| subset[k])
                .fold(d.simple_roots[word[j] - 1].clone(), |v, k| d.reflect_char(word[k], &v))
        })
        .collect()
}

/// Coroot-side analogue of [`beta_sequence`].
pub fn beta_coroots(d: &RootDatum, word: &[usize]) -> Vec<Vec<i32>> {
    (0..word.len())
        .map(|j| {
            word[..j]
                .iter()
                .rev()
                .fold(d.simple_coroots[word[j] - 1].clone(), |v, &i| d.reflect_cochar(i, &v))
        })
        .collect()
}

/// Ordered product of the letters selected by `subset`.
pub fn subword_product(g: &WeylGroup, word: &[usize], subset: &[bool]) -> Elem {
    word.iter()
        .zip(subset)
        .rev()
        .filter(|(_, &b)| b)
        .fold(g.identity(), |acc, (&i, _)| g.lmul_simple(i, acc))
}

/// Bit mask to membership vector.
pub fn mask_to_subset(mask: u64, len: usize) -> Vec<bool> {
    (0..len).map(|k| mask >> k & 1 == 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::DatumKind;

    fn e(n: usize, a: usize, b: usize) -> Vec<i32> {
        let mut v = vec![0; n];
        v[a - 1] += 1;
        v[b - 1] -= 1;
        v
    }

    #[test]
    fn a3_worked_example() {
        let d = RootDatum::new(DatumKind::GL(4)).unwrap();
        let g = WeylGroup::new(d.clone()).unwrap();
        let word = [1, 2, 3, 2, 1, 3];
        let betas = beta_sequence(&d, &word);
        let expect_b = [e(4, 1, 2), e(4, 1, 3), e(4, 1, 4), e(4, 3, 4), e(4, 2, 4), e(4, 3, 1)];
        assert_eq!(betas, expect_b);
        let subset = [false, true, false, true, true, false];
        let gammas = gamma_sequence(&d, &word, &subset);
        let expect_g = [e(4, 2, 1), e(4, 3, 1), e(4, 1, 4), e(4, 1, 3), e(4, 1, 2), e(4, 3, 4)];
        assert_eq!(gammas, expect_g);
        assert_eq!(subword_product(&g, &word, &subset), g.simple(1));
    }
}
