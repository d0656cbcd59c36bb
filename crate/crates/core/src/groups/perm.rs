//! Plain permutations of `{0, …, n-1}` stored as image vectors.

/// `(p ∘ q)(i) = p[q[i]]`: apply `q` first.
pub fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&i| p[i]).collect()
}

pub fn inverse(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &pi) in p.iter().enumerate() {
        inv[pi] = i;
    }
    inv
}

pub fn identity(n: usize) -> Vec<usize> {
    (0..n).collect()
}

pub fn is_bijection(p: &[usize], degree: usize) -> bool {
    if p.len() != degree {
        return false;
    }
    let mut seen = vec![false; degree];
    for &i in p {
        if i >= degree || seen[i] {
            return false;
        }
        seen[i] = true;
    }
    true
}

/// All permutations of `n` points in lexicographic order, identity first.
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = identity(n);
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
}

/// Cycles of `p`, each listed as `[i, p(i), p(p(i)), …]` starting from its least point.
pub fn cycles(p: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut cyc = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cyc.push(i);
            i = p[i];
        }
        out.push(cyc);
    }
    out
}

/// The long cycle `i ↦ i+1 mod k`.
pub fn long_cycle(k: usize) -> Vec<usize> {
    (0..k).map(|i| (i + 1) % k).collect()
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_and_cycles() {
        let all = all_permutations(3);
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], vec![0, 1, 2]);
        assert_eq!(cycles(&[1, 0, 2]), vec![vec![0, 1], vec![2]]);
        assert_eq!(cycles(&long_cycle(4)).len(), 1);
        assert_eq!(all_permutations(0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn composition_convention() {
        let p = vec![1, 2, 0];
        let q = vec![1, 0, 2];
        // (p∘q)(0) = p(q(0)) = p(1) = 2
        assert_eq!(compose(&p, &q)[0], 2);
        assert_eq!(compose(&p, &inverse(&p)), identity(3));
    }
}
