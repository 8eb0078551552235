use std::fmt;

/// An `n`-ary relation over the domain `{0, …, d−1}`, stored as a bitset
/// indexed by the base-`d` reading of each tuple.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Relation {
    arity: usize,
    domain: usize,
    bits: Vec<u64>,
}

/// Number of `arity`-tuples over a domain of `domain` elements.
pub fn tuple_count(domain: usize, arity: usize) -> usize {
    domain.pow(arity as u32)
}

impl Relation {
    pub fn empty(arity: usize, domain: usize) -> Self {
        let n = tuple_count(domain, arity);
        Relation {
            arity,
            domain,
            bits: vec![0; n.div_ceil(64).max(1)],
        }
    }

    pub fn full(arity: usize, domain: usize) -> Self {
        let mut r = Relation::empty(arity, domain);
        for i in 0..tuple_count(domain, arity) {
            r.bits[i / 64] |= 1 << (i % 64);
        }
        r
    }

    /// The relation whose tuple `i` (in base-`d` order) is present iff bit
    /// `i` of `mask` is set. Needs `dⁿ ≤ 64`.
    pub fn from_mask(arity: usize, domain: usize, mask: u64) -> Self {
        let n = tuple_count(domain, arity);
        assert!(n <= 64, "relation too large for a mask");
        let m = if n == 64 { mask } else { mask & ((1u64 << n) - 1) };
        let mut r = Relation::empty(arity, domain);
        r.bits[0] = m;
        r
    }

    pub fn from_tuples<I, T>(arity: usize, domain: usize, tuples: I) -> Result<Self, String>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[usize]>,
    {
        let mut r = Relation::empty(arity, domain);
        for t in tuples {
            let t = t.as_ref();
            if t.len() != arity {
                return Err(format!("tuple of length {} in a relation of arity {arity}", t.len()));
            }
            if let Some(&e) = t.iter().find(|&&e| e >= domain) {
                return Err(format!("element {e} outside domain of size {domain}"));
            }
            r.insert(t);
        }
        Ok(r)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    fn index(&self, t: &[usize]) -> usize {
        t.iter().fold(0, |acc, &e| acc * self.domain + e)
    }

    pub fn contains(&self, t: &[usize]) -> bool {
        let i = self.index(t);
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn insert(&mut self, t: &[usize]) {
        let i = self.index(t);
        self.bits[i / 64] |= 1 << (i % 64);
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// Members in ascending base-`d` order.
    pub fn tuples(&self) -> Vec<Vec<usize>> {
        let n = tuple_count(self.domain, self.arity);
        (0..n)
            .filter(|i| self.bits[i / 64] >> (i % 64) & 1 == 1)
            .map(|mut i| {
                let mut t = vec![0; self.arity];
                for slot in t.iter_mut().rev() {
                    *slot = i % self.domain;
                    i /= self.domain;
                }
                t
            })
            .collect()
    }

    /// Every relation of the given shape, in mask order. `None` when there
    /// are more than `2^max_bits` of them.
    pub fn all(arity: usize, domain: usize, max_bits: usize) -> Option<Vec<Relation>> {
        let n = tuple_count(domain, arity);
        if n > max_bits || n > 63 {
            return None;
        }
        Some((0..1u64 << n).map(|m| Relation::from_mask(arity, domain, m)).collect())
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, t) in self.tuples().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            let parts: Vec<String> = t.iter().map(|e| e.to_string()).collect();
            write!(f, "({})", parts.join(","))?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuple_encoding() {
        let r = Relation::from_tuples(2, 3, [[0, 1], [2, 2]]).unwrap();
        assert!(r.contains(&[0, 1]));
        assert!(!r.contains(&[1, 0]));
        assert_eq!(r.tuples(), vec![vec![0, 1], vec![2, 2]]);
        assert_eq!(r.to_string(), "{(0,1), (2,2)}");
    }

    #[test]
    fn masks_enumerate_everything() {
        let all = Relation::all(1, 2, 16).unwrap();
        assert_eq!(all.len(), 4);
        assert!(all[0].is_empty());
        assert_eq!(all[3], Relation::full(1, 2));
        assert!(Relation::all(2, 5, 16).is_none());
    }

    #[test]
    fn rejects_bad_tuples() {
        assert!(Relation::from_tuples(1, 2, [[2]]).is_err());
        assert!(Relation::from_tuples(2, 2, [vec![0]]).is_err());
    }
}
