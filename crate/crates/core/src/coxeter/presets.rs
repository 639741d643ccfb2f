//! Named Coxeter systems with their standard labelings.
//!
//! Finite types use labels `1..=n`, affine types `0..=n`. The product
//! ²(X×X) uses `1..=n` for the first factor and `~1..=~n` for the second,
//! with the twist exchanging the factors.

use super::{Gen, TwistedSystem};
use crate::error::{Error, Result};
use crate::numfield::{BondOrder, INFINITY};

/// The family part of a type descriptor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Finite(char),
    Affine(char),
    Dihedral(BondOrder),
    Product(char),
}

/// Parses names such as `A`, `affine-C`, `~C`, `C~`, `I2(5)`, `2xB`,
/// `product-B`.
pub fn parse_family(name: &str) -> Result<Family> {
    let t = name.trim();
    let bad = || Error::InvalidSystem(format!("unknown type {name:?}"));
    let letter = |s: &str| -> Result<char> {
        let mut cs = s.chars();
        match (cs.next(), cs.next()) {
            (Some(c), None) if c.is_ascii_alphabetic() => Ok(c.to_ascii_uppercase()),
            _ => Err(bad()),
        }
    };
    if let Some(rest) = t.strip_prefix("I2(").and_then(|r| r.strip_suffix(')')) {
        let m = if rest == "inf" || rest == "∞" {
            INFINITY
        } else {
            rest.parse().map_err(|_| bad())?
        };
        return Ok(Family::Dihedral(m));
    }
    for p in ["affine-", "~"] {
        if let Some(rest) = t.strip_prefix(p) {
            return Ok(Family::Affine(letter(rest)?));
        }
    }
    if let Some(rest) = t.strip_suffix('~') {
        return Ok(Family::Affine(letter(rest)?));
    }
    for p in ["product-", "2x", "2×"] {
        if let Some(rest) = t.strip_prefix(p) {
            return Ok(Family::Product(letter(rest)?));
        }
    }
    Ok(Family::Finite(letter(t)?))
}

/// Builds a preset. For `I` the rank argument is the bond order m.
pub fn preset(kind: &str, rank: usize, twist: &str) -> Result<TwistedSystem> {
    let family = match parse_family(kind)? {
        Family::Finite('I') => Family::Dihedral(rank as BondOrder),
        f => f,
    };
    let (name, labels, m) = diagram(family, rank)?;
    let twist = resolve_twist(family, &labels, &m, twist)?;
    let name =
        if twist.iter().enumerate().all(|(i, &t)| i == t) || matches!(family, Family::Product(_)) {
            name
        } else {
            format!("2{name}")
        };
    TwistedSystem::new(name, labels, m, twist, None)
}

type Diagram = (String, Vec<String>, Vec<Vec<BondOrder>>);

fn with_edges(n: usize, edges: &[(usize, usize, BondOrder)]) -> Vec<Vec<BondOrder>> {
    let mut m = vec![vec![2; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    for &(a, b, v) in edges {
        m[a][b] = v;
        m[b][a] = v;
    }
    m
}

fn path(from: usize, to: usize) -> Vec<(usize, usize, BondOrder)> {
    (from..to).map(|i| (i, i + 1, 3)).collect()
}

fn finite_edges(letter: char, n: usize) -> Result<Vec<(usize, usize, BondOrder)>> {
    let bad = || {
        Err(Error::InvalidSystem(format!(
            "type {letter}{n} does not exist"
        )))
    };
    // Zero-based indices; label k+1 sits at index k.
    let e = match letter {
        'A' if n >= 1 => path(0, n - 1),
        'B' | 'C' if n >= 2 => {
            let mut e = path(0, n - 2);
            e.push((n - 2, n - 1, 4));
            e
        }
        'D' if n >= 4 => {
            let mut e = path(0, n - 2);
            e.push((n - 3, n - 1, 3));
            e
        }
        'E' if (6..=8).contains(&n) => {
            let mut e = vec![(0, 2, 3), (1, 3, 3)];
            e.extend(path(2, n - 1));
            e
        }
        'F' if n == 4 => vec![(0, 1, 3), (1, 2, 4), (2, 3, 3)],
        'G' if n == 2 => vec![(0, 1, 6)],
        'H' if n == 3 || n == 4 => {
            let mut e = vec![(0, 1, 5)];
            e.extend(path(1, n - 1));
            e
        }
        _ => return bad(),
    };
    Ok(e)
}

fn diagram(family: Family, n: usize) -> Result<Diagram> {
    match family {
        Family::Finite(letter) => {
            let edges = finite_edges(letter, n)?;
            let labels = (1..=n).map(|i| i.to_string()).collect();
            Ok((format!("{letter}{n}"), labels, with_edges(n, &edges)))
        }
        Family::Dihedral(m) => {
            if m < 2 {
                return Err(Error::InvalidSystem(format!("I2({m}) needs m ≥ 2")));
            }
            let name = if m == INFINITY {
                "I2(inf)".to_string()
            } else {
                format!("I2({m})")
            };
            Ok((
                name,
                vec!["1".into(), "2".into()],
                with_edges(2, &[(0, 1, m)]),
            ))
        }
        Family::Affine(letter) => {
            let edges = affine_edges(letter, n)?;
            let labels = (0..=n).map(|i| i.to_string()).collect();
            Ok((format!("~{letter}{n}"), labels, with_edges(n + 1, &edges)))
        }
        Family::Product(letter) => {
            let base = finite_edges(letter, n)?;
            let mut edges = base.clone();
            edges.extend(base.iter().map(|&(a, b, v)| (a + n, b + n, v)));
            let mut labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
            labels.extend((1..=n).map(|i| format!("~{i}")));
            Ok((
                format!("2({letter}{n}x{letter}{n})"),
                labels,
                with_edges(2 * n, &edges),
            ))
        }
    }
}

fn affine_edges(letter: char, n: usize) -> Result<Vec<(usize, usize, BondOrder)>> {
    let bad = || {
        Err(Error::InvalidSystem(format!(
            "type ~{letter}{n} does not exist"
        )))
    };
    // Index i carries label i.
    let e = match letter {
        'A' if n == 1 => vec![(0, 1, INFINITY)],
        'A' if n >= 2 => {
            let mut e = path(0, n);
            e.push((n, 0, 3));
            e
        }
        'B' if n >= 3 => {
            let mut e = vec![(0, 2, 3), (1, 2, 3)];
            e.extend(path(2, n - 1));
            e.push((n - 1, n, 4));
            e
        }
        'C' if n >= 2 => {
            let mut e = vec![(0, 1, 4)];
            e.extend(path(1, n - 1));
            e.push((n - 1, n, 4));
            e
        }
        'D' if n >= 4 => {
            let mut e = vec![(0, 2, 3), (1, 2, 3)];
            e.extend(path(2, n - 1));
            e.push((n - 2, n, 3));
            e
        }
        'E' if (6..=8).contains(&n) => {
            let mut e = vec![(1, 3, 3), (2, 4, 3)];
            e.extend(path(3, n));
            let attach = match n {
                6 => 2,
                7 => 1,
                _ => 8,
            };
            e.push((0, attach, 3));
            e
        }
        'F' if n == 4 => vec![(0, 1, 3), (1, 2, 3), (2, 3, 4), (3, 4, 3)],
        'G' if n == 2 => vec![(0, 1, 3), (1, 2, 6)],
        _ => return bad(),
    };
    Ok(e)
}

fn resolve_twist(
    family: Family,
    labels: &[String],
    m: &[Vec<BondOrder>],
    spec: &str,
) -> Result<Vec<Gen>> {
    let n = labels.len();
    let ident: Vec<Gen> = (0..n).collect();
    let pairs = |ps: &[(usize, usize)]| {
        let mut t = ident.clone();
        for &(a, b) in ps {
            t[a] = b;
            t[b] = a;
        }
        t
    };
    let spec = spec.trim();
    let twist = match (spec, family) {
        ("id" | "identity" | "", Family::Product(_)) => {
            // ²(X×X) always exchanges the factors.
            let h = n / 2;
            (0..n).map(|i| if i < h { i + h } else { i - h }).collect()
        }
        ("swap", Family::Product(_)) => (0..n).map(|i| (i + n / 2) % n).collect(),
        ("id" | "identity" | "", _) => ident,
        ("reverse", Family::Affine(_))
        | ("reverse", Family::Finite(_))
        | ("swap", Family::Dihedral(_)) => (0..n).map(|i| n - 1 - i).collect(),
        ("mirror", Family::Affine('A')) => (0..n).map(|i| (n - i) % n).collect(),
        ("rotate", Family::Affine('A')) if n.is_multiple_of(2) => {
            (0..n).map(|i| (i + n / 2) % n).collect()
        }
        ("flip", Family::Finite('D')) | ("flip", Family::Affine('D')) => pairs(&[(n - 2, n - 1)]),
        ("flip", Family::Finite('E')) if n == 6 => pairs(&[(0, 5), (2, 4)]),
        _ => {
            let mut ps = Vec::new();
            for part in spec.split(',') {
                let (a, b) = part
                    .split_once('-')
                    .ok_or_else(|| Error::InvalidSystem(format!("unknown twist {spec:?}")))?;
                let find = |l: &str| {
                    labels
                        .iter()
                        .position(|x| x == l.trim())
                        .ok_or_else(|| Error::UnknownGenerator(l.trim().to_string()))
                };
                ps.push((find(a)?, find(b)?));
            }
            pairs(&ps)
        }
    };
    for i in 0..n {
        if twist[twist[i]] != i || (0..n).any(|j| m[twist[i]][twist[j]] != m[i][j]) {
            return Err(Error::InvalidSystem(format!(
                "twist {spec:?} is not a diagram involution"
            )));
        }
    }
    Ok(twist)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a3_identity() {
        let s = preset("A", 3, "id").unwrap();
        assert_eq!(s.labels(), &["1", "2", "3"]);
        assert_eq!((s.m(0, 1), s.m(1, 2), s.m(0, 2)), (3, 3, 2));
        assert!(s.twist_is_identity());
    }

    #[test]
    fn c4_affine_reverse() {
        let s = preset("affine-C", 4, "reverse").unwrap();
        assert_eq!(s.m(0, 1), 4);
        assert_eq!(s.m(1, 2), 3);
        assert_eq!(s.m(3, 4), 4);
        assert_eq!(s.m(0, 2), 2);
        for i in 0..5 {
            assert_eq!(s.star(i), 4 - i);
        }
    }

    #[test]
    fn product_system() {
        let s = preset("2xA", 2, "swap").unwrap();
        assert_eq!(s.rank(), 4);
        assert_eq!(s.m(0, 1), 3);
        assert_eq!(s.m(2, 3), 3);
        assert_eq!(s.m(0, 2), 2);
        assert_eq!(s.m(0, 3), 2);
        assert_eq!(s.star(0), 2);
        assert_eq!(s.label(3), "~2");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(preset("D", 3, "id").is_err());
        assert!(preset("I", 7, "id").is_err());
        assert!(preset("B", 3, "reverse").is_err());
        assert!(preset("Q", 3, "id").is_err());
    }

    #[test]
    fn type_b_has_the_double_bond_at_the_end() {
        let s = preset("B", 5, "id").unwrap();
        assert_eq!(s.m(3, 4), 4);
        assert_eq!(s.m(0, 1), 3);
        let d = preset("D", 7, "id").unwrap();
        assert_eq!(d.m(4, 5), 3);
        assert_eq!(d.m(4, 6), 3);
        assert_eq!(d.m(5, 6), 2);
    }
}
