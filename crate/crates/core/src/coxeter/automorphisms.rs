use std::collections::BTreeSet;

use super::{Gen, TwistedSystem};

/// All permutations of S preserving the Coxeter matrix.
fn diagram_automorphisms(sys: &TwistedSystem) -> Vec<Vec<Gen>> {
    let n = sys.rank();
    let mut out = Vec::new();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        sys: &TwistedSystem,
        k: usize,
        image: &mut Vec<Gen>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<Gen>>,
    ) {
        let n = sys.rank();
        if k == n {
            out.push(image.clone());
            return;
        }
        for c in 0..n {
            if used[c] || (0..k).any(|j| sys.m(k, j) != sys.m(c, image[j])) {
                continue;
            }
            image[k] = c;
            used[c] = true;
            go(sys, k + 1, image, used, out);
            used[c] = false;
        }
        image[k] = usize::MAX;
    }
    go(sys, 0, &mut image, &mut used, &mut out);
    out
}

/// One diagram involution from each conjugacy class of involutions (the
/// identity included) in the automorphism group of the Coxeter diagram.
/// Each representative is the lexicographically least member of its class.
pub fn standard_automorphisms(sys: &TwistedSystem) -> Vec<Vec<Gen>> {
    let group = diagram_automorphisms(sys);
    let n = sys.rank();
    let involutions: Vec<&Vec<Gen>> = group
        .iter()
        .filter(|g| (0..n).all(|i| g[g[i]] == i))
        .collect();
    let mut reps: BTreeSet<Vec<Gen>> = BTreeSet::new();
    for inv in involutions {
        let class = group.iter().map(|g| {
            // g·inv·g⁻¹
            let mut ginv = vec![0; n];
            for i in 0..n {
                ginv[g[i]] = i;
            }
            (0..n).map(|i| g[inv[ginv[i]]]).collect::<Vec<Gen>>()
        });
        reps.insert(class.min().unwrap());
    }
    reps.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::preset;

    #[test]
    fn path_graph_has_two_classes() {
        let s = preset("A", 3, "id").unwrap();
        assert_eq!(
            standard_automorphisms(&s),
            vec![vec![0, 1, 2], vec![2, 1, 0]]
        );
    }

    #[test]
    fn b3_has_only_the_identity() {
        let s = preset("B", 3, "id").unwrap();
        assert_eq!(standard_automorphisms(&s), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn affine_a_odd_rank_has_four_classes() {
        // The identity, a reflection through two vertices, a reflection
        // through edges, and the half rotation.
        let s = preset("affine-A", 5, "id").unwrap();
        let reps = standard_automorphisms(&s);
        assert_eq!(reps.len(), 4);
        let fixed: Vec<usize> = reps
            .iter()
            .map(|r| (0..6).filter(|&i| r[i] == i).count())
            .collect();
        let mut sorted = fixed.clone();
        sorted.sort();
        assert_eq!(sorted, vec![0, 0, 2, 6]);
    }
}
