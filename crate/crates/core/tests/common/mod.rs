#![allow(dead_code)]

use invbraid::braidsys::BraidSystem;
use invbraid::engine::{
    eliminate_descents, expand_tree, relevant_pairs, Elimination, EngineConfig,
};
use invbraid::involutions::{InvolutionTable, Theta};
use invbraid::TwistedSystem;

/// Whether the constant system `b` is realized by (x, z), both given as
/// table indices.
pub fn realizes(table: &InvolutionTable, b: &BraidSystem, x: usize, z: usize) -> bool {
    let xe = &table.get(x).element;
    for s in b.domain() {
        match b.sigma.constant_column(s) {
            Some(col) if col == xe.column(s) => {}
            _ => return false,
        }
    }
    let r = &table.words(x)[0];
    [&b.left, &b.right].iter().all(|w| {
        let mut full = r.clone();
        full.extend(w.iter());
        table.follow(&full) == Some(z)
    })
}

/// Every x ≤ y (Bruhat) that realizes `b` together with z.
pub fn realizers_below(table: &InvolutionTable, b: &BraidSystem, y: usize, z: usize) -> Vec<usize> {
    let sys = table.system();
    (0..table.len())
        .filter(|&x| {
            sys.bruhat_le(&table.get(x).element, &table.get(y).element) && realizes(table, b, x, z)
        })
        .collect()
}

#[derive(Debug, Default)]
pub struct RealizableReport {
    pub roots: usize,
    pub eliminations: usize,
    pub outputs: usize,
    pub failures: Vec<String>,
}

/// Follows realized systems down from every realized root through
/// expansion and descent elimination, checking that no realized branch is
/// invalid or periodic and that outputs are realized below their input.
pub fn realizable_branches(sys: &TwistedSystem) -> RealizableReport {
    let table = InvolutionTable::new(sys, None).unwrap();
    let cfg = EngineConfig::default();
    let mut rep = RealizableReport::default();
    for (s, t) in relevant_pairs(sys) {
        for y in 0..table.len() {
            let ye = &table.get(y).element;
            if ye.is_right_descent(s) || ye.is_right_descent(t) {
                continue;
            }
            let theta = table.get(y).theta_shape(sys, s, t);
            if theta == Theta::Other {
                continue;
            }
            let root = BraidSystem::root(sys, s, t, theta).unwrap();
            let mut left = table.words(y)[0].clone();
            left.extend(&root.left);
            let Some(z) = table.follow(&left) else {
                rep.failures.push(format!(
                    "root for y#{y} does not extend to an involution word"
                ));
                continue;
            };
            if !realizes(&table, &root, y, z) {
                rep.failures
                    .push(format!("root {:?} not realized by y#{y}", theta));
                continue;
            }
            rep.roots += 1;
            let mut stack = vec![(root, y)];
            while let Some((b, y)) = stack.pop() {
                let ye = table.get(y).element.clone();
                for r in sys.boundary(&b.domain()) {
                    if !ye.is_right_descent(r) {
                        continue;
                    }
                    let tree = match expand_tree(sys, &b, r, &cfg) {
                        Ok(t) => t,
                        Err(e) => {
                            rep.failures.push(format!("expansion failed: {e}"));
                            continue;
                        }
                    };
                    let realized: Vec<(&BraidSystem, usize)> = tree
                        .constant_leaves()
                        .into_iter()
                        .flat_map(|leaf| {
                            realizers_below(&table, leaf, y, z)
                                .into_iter()
                                .map(move |x| (leaf, x))
                        })
                        .collect();
                    if realized.is_empty() {
                        rep.failures.push(format!(
                            "no leaf of the tree at r={} is realized",
                            sys.label(r)
                        ));
                        continue;
                    }
                    for (leaf, x) in realized {
                        rep.eliminations += 1;
                        match eliminate_descents(sys, leaf, &cfg) {
                            Ok(Elimination::Output { system, .. }) => {
                                rep.outputs += 1;
                                let below = realizers_below(&table, &system, x, z);
                                match below.first() {
                                    Some(&x1) => stack.push((system, x1)),
                                    None => rep
                                        .failures
                                        .push("output not realized below its input".into()),
                                }
                            }
                            Ok(Elimination::Redundant { .. }) => {}
                            Ok(Elimination::Invalid { step }) => rep
                                .failures
                                .push(format!("realized branch became invalid at step {step}")),
                            Ok(Elimination::Periodic(w)) => rep.failures.push(format!(
                                "periodicity fired on a realized branch (p={}, q={})",
                                w.p, w.q
                            )),
                            Err(e) => rep.failures.push(format!("elimination failed: {e}")),
                        }
                    }
                }
            }
        }
    }
    rep
}
