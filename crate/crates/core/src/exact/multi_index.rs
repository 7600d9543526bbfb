use std::fmt;

use crate::error::{Error, Result};

/// A multi-index `n = (n_1, ..., n_m)` of non-negative integers, `m >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    parts: Vec<usize>,
}

/// How a monotone chain `n_0 <= n_1 <= ... <= n` is grown from the zero index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChainStrategy {
    /// Fill component 1 completely, then component 2, and so on.
    LexicographicFirst,
    /// Cycle through the components, incrementing each one that still has room.
    #[default]
    RoundRobin,
}

impl MultiIndex {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::EmptyMultiIndex);
        }
        Ok(Self { parts })
    }

    pub fn zeros(m: usize) -> Result<Self> {
        Self::new(vec![0; m])
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of components `m`.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, k: usize) -> usize {
        self.parts[k]
    }

    /// `|n| = n_1 + ... + n_m`.
    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    /// `n + e_k` (zero-based `k`).
    pub fn increment(&self, k: usize) -> Result<Self> {
        self.check(k)?;
        let mut parts = self.parts.clone();
        parts[k] += 1;
        Ok(Self { parts })
    }

    /// `n - e_k` (zero-based `k`); fails instead of producing a negative part.
    pub fn decrement(&self, k: usize) -> Result<Self> {
        self.check(k)?;
        if self.parts[k] == 0 {
            return Err(Error::NegativeComponent { k });
        }
        let mut parts = self.parts.clone();
        parts[k] -= 1;
        Ok(Self { parts })
    }

    /// Component-wise `self <= other`.
    pub fn le(&self, other: &Self) -> bool {
        self.len() == other.len() && self.parts.iter().zip(&other.parts).all(|(a, b)| a <= b)
    }

    /// The chain `n_0, ..., n_{|n|}` with `|n_j| = j`, unit steps, ending at `self`.
    pub fn chain(&self, strategy: ChainStrategy) -> Vec<MultiIndex> {
        let m = self.len();
        let mut current = vec![0; m];
        let mut out = Vec::with_capacity(self.weight() + 1);
        out.push(Self { parts: current.clone() });
        match strategy {
            ChainStrategy::LexicographicFirst => {
                for k in 0..m {
                    while current[k] < self.parts[k] {
                        current[k] += 1;
                        out.push(Self { parts: current.clone() });
                    }
                }
            }
            ChainStrategy::RoundRobin => {
                let mut k = 0;
                while out.len() <= self.weight() {
                    if current[k] < self.parts[k] {
                        current[k] += 1;
                        out.push(Self { parts: current.clone() });
                    }
                    k = (k + 1) % m;
                }
            }
        }
        out
    }

    /// Checks that `chain` starts at zero, grows by one unit vector per step
    /// and ends at `self`.
    pub fn validate_chain(&self, chain: &[MultiIndex]) -> Result<()> {
        if chain.len() != self.weight() + 1 {
            return Err(Error::InvalidChain(format!(
                "expected {} entries, found {}",
                self.weight() + 1,
                chain.len()
            )));
        }
        for (j, idx) in chain.iter().enumerate() {
            if idx.len() != self.len() {
                return Err(Error::InvalidChain(format!("entry {j} has wrong length")));
            }
            if idx.weight() != j {
                return Err(Error::InvalidChain(format!("entry {j} has weight {}", idx.weight())));
            }
            if j > 0 && !chain[j - 1].le(idx) {
                return Err(Error::InvalidChain(format!("entry {j} is not above entry {}", j - 1)));
            }
        }
        if chain.last() != Some(self) {
            return Err(Error::InvalidChain("chain does not end at the target index".into()));
        }
        Ok(())
    }

    fn check(&self, k: usize) -> Result<()> {
        if k >= self.len() {
            return Err(Error::ComponentOutOfRange { k, m: self.len() });
        }
        Ok(())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mi(p: &[usize]) -> MultiIndex {
        MultiIndex::new(p.to_vec()).unwrap()
    }

    #[test]
    fn weight() {
        assert_eq!(mi(&[0, 0]).weight(), 0);
        assert_eq!(mi(&[1, 1]).weight(), 2);
        assert_eq!(mi(&[2, 1]).weight(), 3);
        assert_eq!(MultiIndex::new(vec![]), Err(Error::EmptyMultiIndex));
    }

    #[test]
    fn chains() {
        assert_eq!(
            mi(&[2, 1]).chain(ChainStrategy::LexicographicFirst),
            vec![mi(&[0, 0]), mi(&[1, 0]), mi(&[2, 0]), mi(&[2, 1])]
        );
        assert_eq!(
            mi(&[1, 1]).chain(ChainStrategy::RoundRobin),
            vec![mi(&[0, 0]), mi(&[1, 0]), mi(&[1, 1])]
        );
        for s in [ChainStrategy::LexicographicFirst, ChainStrategy::RoundRobin] {
            assert_eq!(mi(&[1]).chain(s), vec![mi(&[0]), mi(&[1])]);
        }
        assert_eq!(ChainStrategy::default(), ChainStrategy::RoundRobin);
    }

    #[test]
    fn decrement_never_goes_negative() {
        assert_eq!(mi(&[0, 2]).decrement(0), Err(Error::NegativeComponent { k: 0 }));
        assert_eq!(mi(&[0, 2]).decrement(1).unwrap(), mi(&[0, 1]));
        assert_eq!(mi(&[0, 2]).increment(0).unwrap(), mi(&[1, 2]));
        assert!(mi(&[0, 2]).increment(2).is_err());
    }

    #[test]
    fn rejects_bad_chain() {
        let n = mi(&[1, 1]);
        let mut c = n.chain(ChainStrategy::RoundRobin);
        assert!(n.validate_chain(&c).is_ok());
        c[1] = mi(&[0, 1]);
        c[2] = mi(&[2, 0]);
        assert!(n.validate_chain(&c).is_err());
        assert!(n.validate_chain(&c[..2]).is_err());
    }

    proptest! {
        #[test]
        fn chains_are_monotone_unit_steps(parts in proptest::collection::vec(0usize..=8, 1..=3)) {
            prop_assume!(parts.iter().sum::<usize>() <= 8);
            let n = MultiIndex::new(parts).unwrap();
            for s in [ChainStrategy::LexicographicFirst, ChainStrategy::RoundRobin] {
                let c = n.chain(s);
                prop_assert!(n.validate_chain(&c).is_ok());
                prop_assert_eq!(c[0].weight(), 0);
                for w in c.windows(2) {
                    let diff: usize = w[0].parts().iter().zip(w[1].parts()).map(|(a, b)| b - a).sum();
                    prop_assert_eq!(diff, 1);
                }
            }
        }
    }
}
