//! Small combinatorial helpers shared by the coverage and model modules.

/// Exact binomial coefficient C(n, r).
pub(crate) fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        // The running product is always divisible by i + 1.
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Visits every t-sized combination of `0..k` in ascending lexicographic order.
pub(crate) fn for_each_combination(k: usize, t: usize, mut f: impl FnMut(&[usize])) {
    debug_assert!(t >= 1 && t <= k);
    let mut combo: Vec<usize> = (0..t).collect();
    loop {
        f(&combo);
        let mut i = t;
        while i > 0 && combo[i - 1] == k - t + (i - 1) {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        combo[i - 1] += 1;
        for j in i..t {
            combo[j] = combo[j - 1] + 1;
        }
    }
}

/// Lexicographic rank of a t-combination of `0..k`; the inverse of the
/// enumeration order used by [`for_each_combination`].
pub(crate) fn combination_rank(k: usize, combo: &[usize]) -> usize {
    let t = combo.len();
    let mut rank: u128 = 0;
    let mut next = 0usize;
    for (i, &c) in combo.iter().enumerate() {
        for skipped in next..c {
            rank += binomial(k - 1 - skipped, t - 1 - i);
        }
        next = c + 1;
    }
    usize::try_from(rank).expect("combination rank exceeds usize")
}
