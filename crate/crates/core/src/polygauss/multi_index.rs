use std::fmt;

use smallvec::SmallVec;

/// Exponent tuple of a monomial `x₁^γ₁ ⋯ xₙ^γₙ`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MultiIndex(SmallVec<[u32; 4]>);

impl MultiIndex {
    pub fn zeros(nvars: usize) -> Self {
        MultiIndex(SmallVec::from_elem(0, nvars))
    }

    pub fn unit(nvars: usize, j: usize) -> Self {
        let mut m = Self::zeros(nvars);
        m.0[j] = 1;
        m
    }

    pub fn from_slice(exps: &[u32]) -> Self {
        MultiIndex(SmallVec::from_slice(exps))
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    /// Total degree `|γ|`.
    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn get(&self, j: usize) -> u32 {
        self.0[j]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn with(&self, j: usize, value: u32) -> Self {
        let mut m = self.clone();
        m.0[j] = value;
        m
    }

    pub fn add(&self, other: &MultiIndex) -> Self {
        debug_assert_eq!(self.nvars(), other.nvars());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn incremented(&self, j: usize) -> Self {
        let mut m = self.clone();
        m.0[j] += 1;
        m
    }

    /// `None` when the component would go negative.
    pub fn decremented(&self, j: usize) -> Option<Self> {
        if self.0[j] == 0 {
            return None;
        }
        let mut m = self.clone();
        m.0[j] -= 1;
        Some(m)
    }

    /// All multi-indices with `nvars` entries and total degree `<= max_degree`,
    /// ordered by degree and then lexicographically.
    pub fn all_up_to(nvars: usize, max_degree: usize) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        for d in 0..=max_degree {
            let mut cur = vec![0u32; nvars];
            compositions(nvars, d as u32, 0, &mut cur, &mut out);
        }
        out
    }
}

fn compositions(nvars: usize, remaining: u32, pos: usize, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
    if nvars == 0 {
        if remaining == 0 {
            out.push(MultiIndex::from_slice(&[]));
        }
        return;
    }
    if pos == nvars - 1 {
        cur[pos] = remaining;
        out.push(MultiIndex::from_slice(cur));
        return;
    }
    for e in (0..=remaining).rev() {
        cur[pos] = e;
        compositions(nvars, remaining - e, pos + 1, cur, out);
    }
    cur[pos] = 0;
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts() {
        assert_eq!(MultiIndex::all_up_to(2, 8).len(), 45);
        assert_eq!(MultiIndex::all_up_to(3, 2).len(), 10);
        assert_eq!(MultiIndex::all_up_to(1, 4).len(), 5);
    }

    #[test]
    fn decrement_stops_at_zero() {
        let m = MultiIndex::from_slice(&[1, 0]);
        assert_eq!(m.decremented(0), Some(MultiIndex::zeros(2)));
        assert_eq!(m.decremented(1), None);
    }
}
