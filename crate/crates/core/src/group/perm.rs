//! Permutations of `{1..k}` for the symmetric-group constructions.
//!
//! Products act on the right: `(σ τ)(i) = τ(σ(i))`, so `σ τ` means "first σ,
//! then τ", matching exponent notation for conjugation.

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Perm(Vec<u8>);

impl Perm {
    pub fn identity(k: usize) -> Self {
        Perm((0..k as u8).collect())
    }

    /// Builds a permutation from 1-based cycles.
    pub fn from_cycles(k: usize, cycles: &[&[u8]]) -> Self {
        let mut img: Vec<u8> = (0..k as u8).collect();
        for cycle in cycles {
            for (pos, &p) in cycle.iter().enumerate() {
                let next = cycle[(pos + 1) % cycle.len()];
                img[p as usize - 1] = next - 1;
            }
        }
        Perm(img)
    }

    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }

    /// Cycle notation with 1-based points, e.g. `(123)`; identity is `1`.
    pub fn cycle_string(&self) -> String {
        let k = self.0.len();
        let mut seen = vec![false; k];
        let mut out = String::new();
        for start in 0..k {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            out.push('(');
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                if k > 9 && !out.ends_with('(') {
                    out.push(',');
                }
                out.push_str(&(i + 1).to_string());
                i = self.0[i] as usize;
            }
            out.push(')');
        }
        if out.is_empty() {
            "1".into()
        } else {
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composes_left_to_right() {
        let a = Perm::from_cycles(3, &[&[1, 2]]);
        let b = Perm::from_cycles(3, &[&[1, 2, 3]]);
        // 1 -(12)-> 2 -(123)-> 3, 3 -> 3 -> 1
        assert_eq!(a.then(&b).cycle_string(), "(13)");
        assert_eq!(b.then(&b).cycle_string(), "(132)");
        assert_eq!(Perm::identity(4).cycle_string(), "1");
    }
}
