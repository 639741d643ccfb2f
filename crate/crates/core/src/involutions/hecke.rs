use std::collections::HashMap;

use super::TwistedInvolution;
use crate::coxeter::{GroupElement, Side, TwistedSystem, Word};

/// All reduced words of `v`, sorted canonically.
pub fn reduced_words(sys: &TwistedSystem, v: &GroupElement) -> Vec<Word> {
    fn rec(
        sys: &TwistedSystem,
        v: &GroupElement,
        memo: &mut HashMap<GroupElement, Vec<Word>>,
    ) -> Vec<Word> {
        if v.length() == 0 {
            return vec![Vec::new()];
        }
        if let Some(w) = memo.get(v) {
            return w.clone();
        }
        let mut out = Vec::new();
        for s in v.right_descents() {
            let u = v.mul_gen(sys, s, Side::Right);
            for mut w in rec(sys, &u, memo) {
                w.push(s);
                out.push(w);
            }
        }
        memo.insert(v.clone(), out.clone());
        out
    }
    let mut out = rec(sys, v, &mut HashMap::new());
    sys.sort_words(&mut out);
    out
}

/// Reduced words of every v with (v⁻¹)*∘v = z and ℓ(v) ≤ `bound`.
///
/// Since (v⁻¹)*∘v lies above v in Bruhat order, every such v has length at
/// most ℓ(z), so the search is finite even in infinite groups.
pub fn enumerate_hecke_words(
    sys: &TwistedSystem,
    z: &TwistedInvolution,
    bound: usize,
) -> Vec<Word> {
    let bound = bound.min(z.element.length());
    // Breadth-first over v, carrying d(v) = (v⁻¹)*∘v; d(vs) = s*∘d(v)∘s.
    let mut layer: HashMap<GroupElement, TwistedInvolution> = HashMap::new();
    layer.insert(sys.identity(), TwistedInvolution::identity(sys));
    let mut hits: Vec<GroupElement> = Vec::new();
    for len in 0..=bound {
        for (v, d) in &layer {
            if d.element == z.element {
                hits.push(v.clone());
            }
        }
        if len == bound {
            break;
        }
        let mut next = HashMap::new();
        for (v, d) in &layer {
            for s in sys.gens() {
                if v.is_right_descent(s) {
                    continue;
                }
                let dn = if d.element.is_right_descent(s) {
                    d.clone()
                } else {
                    d.up(sys, s)
                };
                // Only continue while d(v) stays below z.
                if !sys.bruhat_le(&dn.element, &z.element) {
                    continue;
                }
                next.entry(v.mul_gen(sys, s, Side::Right)).or_insert(dn);
            }
        }
        layer = next;
    }
    let mut out: Vec<Word> = hits.iter().flat_map(|v| reduced_words(sys, v)).collect();
    sys.sort_words(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::preset;
    use crate::involutions::{enumerate_involution_words, InvolutionTable};

    #[test]
    fn a1_hecke_words() {
        let sys = preset("A", 1, "id").unwrap();
        let z = TwistedInvolution::from_word(&sys, &[0]);
        assert_eq!(enumerate_hecke_words(&sys, &z, 10), vec![vec![0]]);
    }

    #[test]
    fn a2_longest_element_by_brute_force() {
        let sys = preset("A", 2, "id").unwrap();
        let z = TwistedInvolution::from_word(&sys, &[0, 1]);
        let got = enumerate_hecke_words(&sys, &z, 10);
        let mut expected = Vec::new();
        for v in sys.all_elements().unwrap() {
            let d = sys.demazure(&v.inverse().twisted(&sys), &v);
            if d == z.element {
                expected.extend(reduced_words(&sys, &v));
            }
        }
        sys.sort_words(&mut expected);
        assert_eq!(got, expected);
        // (1,2), (2,1), (1,2,1) and (2,1,2)
        assert_eq!(got.len(), 4);
    }

    #[test]
    fn hecke_words_contain_involution_words() {
        let sys = preset("A", 3, "id").unwrap();
        let table = InvolutionTable::new(&sys, None).unwrap();
        for i in 0..table.len() {
            let z = table.get(i);
            let hecke = enumerate_hecke_words(&sys, z, 10);
            for w in enumerate_involution_words(&sys, z) {
                assert!(hecke.contains(&w));
            }
        }
    }
}
