use std::cmp::Ordering;
use std::fmt;

/// An ordinal below ω^ω in Cantor normal form, `Σ ω^i · c_i`.
///
/// Stored as `(c_0, …, c_k)` with `c_k ≠ 0`; the empty vector is 0.
#[derive(Clone, Default, PartialEq, Eq, Hash, Debug)]
pub struct OrdinalCNF {
    coeffs: Vec<u64>,
}

impl OrdinalCNF {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds from `(c_0, …, c_k)`, dropping trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        OrdinalCNF { coeffs }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Parses the printed form, e.g. `w^2*1+w*1+2`.
    pub fn parse(s: &str) -> Option<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s == "0" {
            return Some(Self::zero());
        }
        let mut coeffs = Vec::new();
        for part in s.split('+') {
            let (idx, c) = match part.strip_prefix('w') {
                None => (0usize, part.parse().ok()?),
                Some(rest) => {
                    let (pow, c) = rest.split_once('*')?;
                    let pow = if pow.is_empty() {
                        1
                    } else {
                        pow.strip_prefix('^')?.parse().ok()?
                    };
                    (pow, c.parse().ok()?)
                }
            };
            if coeffs.len() <= idx {
                coeffs.resize(idx + 1, 0);
            }
            coeffs[idx] = c;
        }
        Some(Self::from_coeffs(coeffs))
    }
}

impl Ord for OrdinalCNF {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for OrdinalCNF {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for OrdinalCNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, c)| match i {
                0 => c.to_string(),
                1 => format!("w*{c}"),
                _ => format!("w^{i}*{c}"),
            })
            .collect();
        f.write_str(&parts.join("+"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printing() {
        assert_eq!(OrdinalCNF::zero().to_string(), "0");
        assert_eq!(OrdinalCNF::from_coeffs(vec![2, 1]).to_string(), "w*1+2");
        assert_eq!(
            OrdinalCNF::from_coeffs(vec![2, 1, 1]).to_string(),
            "w^2*1+w*1+2"
        );
        assert_eq!(OrdinalCNF::from_coeffs(vec![0, 3, 0]).to_string(), "w*3");
    }

    #[test]
    fn parse_inverts_display() {
        for c in [vec![], vec![5], vec![2, 1], vec![0, 0, 4], vec![1, 0, 2]] {
            let o = OrdinalCNF::from_coeffs(c);
            assert_eq!(OrdinalCNF::parse(&o.to_string()), Some(o));
        }
    }

    #[test]
    fn ordering_is_lexicographic_from_top() {
        let a = OrdinalCNF::from_coeffs(vec![100, 1]);
        let b = OrdinalCNF::from_coeffs(vec![0, 2]);
        let c = OrdinalCNF::from_coeffs(vec![0, 0, 1]);
        assert!(a < b && b < c);
        assert!(OrdinalCNF::from_coeffs(vec![7]) < a);
    }
}
