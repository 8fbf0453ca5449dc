//! Unit sets, disintegrating partitions of a (mechanism, purview) pair, and
//! plain set partitions used for entanglement structure.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sorted, duplicate-free set of unit indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UnitSet(Vec<usize>);

impl UnitSet {
    pub fn new(units: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = units.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        UnitSet(v)
    }

    pub fn empty() -> Self {
        UnitSet(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, unit: usize) -> bool {
        self.0.binary_search(&unit).is_ok()
    }

    pub fn is_subset(&self, other: &UnitSet) -> bool {
        self.iter().all(|u| other.contains(u))
    }

    pub fn difference(&self, other: &UnitSet) -> UnitSet {
        UnitSet(self.iter().filter(|&u| !other.contains(u)).collect())
    }

    /// Position of `unit` inside this set.
    pub fn position(&self, unit: usize) -> Option<usize> {
        self.0.binary_search(&unit).ok()
    }

    /// All nonempty subsets, ordered by size and then lexicographically.
    pub fn nonempty_subsets(&self) -> Vec<UnitSet> {
        let n = self.len();
        let mut out: Vec<UnitSet> = (1u32..(1 << n))
            .map(|mask| UnitSet((0..n).filter(|i| mask >> i & 1 == 1).map(|i| self.0[i]).collect()))
            .collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }
}

impl FromIterator<usize> for UnitSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        UnitSet::new(iter)
    }
}

impl From<&[usize]> for UnitSet {
    fn from(units: &[usize]) -> Self {
        UnitSet::new(units.iter().copied())
    }
}

impl fmt::Display for UnitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, u) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{u}")?;
        }
        write!(f, "}}")
    }
}

/// One (mechanism part, purview part) pair of a disintegrating partition.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Part {
    pub mechanism: UnitSet,
    pub purview: UnitSet,
}

/// Partition of a mechanism and purview into independent parts, in canonical
/// form: no `(∅, ∅)` parts and parts sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DisintegratingPartition {
    pub parts: Vec<Part>,
}

impl DisintegratingPartition {
    /// Canonicalises the given pairs: drops `(∅, ∅)` parts and sorts the rest.
    pub fn new(parts: impl IntoIterator<Item = Part>) -> Self {
        let mut parts: Vec<Part> = parts
            .into_iter()
            .filter(|p| !(p.mechanism.is_empty() && p.purview.is_empty()))
            .collect();
        parts.sort();
        DisintegratingPartition { parts }
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Checks the defining constraints against `(mechanism, purview)`.
    pub fn is_valid_for(&self, mechanism: &UnitSet, purview: &UnitSet) -> bool {
        if self.parts.len() < 2 {
            return false;
        }
        let mut mech: Vec<usize> = self.parts.iter().flat_map(|p| p.mechanism.iter()).collect();
        let mut purv: Vec<usize> = self.parts.iter().flat_map(|p| p.purview.iter()).collect();
        mech.sort_unstable();
        purv.sort_unstable();
        if mech != mechanism.as_slice() || purv != purview.as_slice() {
            return false;
        }
        !self
            .parts
            .iter()
            .any(|p| p.mechanism == *mechanism && !p.purview.is_empty())
    }
}

/// Number of ordered (mechanism unit, purview unit) pairs whose interaction
/// the partition severs: `|M|·|Z| − Σ |M⁽ⁱ⁾|·|Z⁽ⁱ⁾|`.
pub fn normalization(theta: &DisintegratingPartition, mechanism: &UnitSet, purview: &UnitSet) -> usize {
    let kept: usize = theta.parts.iter().map(|p| p.mechanism.len() * p.purview.len()).sum();
    mechanism.len() * purview.len() - kept
}

/// Set partition of a ground set into nonempty blocks.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SetPartition {
    pub blocks: Vec<UnitSet>,
}

impl SetPartition {
    pub fn single(units: UnitSet) -> Self {
        SetPartition { blocks: vec![units] }
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// Visits every restricted growth string of length `n` (block labels, first
/// occurrence in increasing order), i.e. every set partition of `0..n`.
fn for_each_rgs(n: usize, mut visit: impl FnMut(&[usize], usize)) {
    if n == 0 {
        return;
    }
    let mut labels = vec![0usize; n];
    // maxes[i] = max label among labels[..i]
    let mut maxes = vec![0usize; n];
    loop {
        let blocks = labels.iter().max().map_or(0, |m| m + 1);
        visit(&labels, blocks);
        // Increment from the right.
        let mut i = n - 1;
        loop {
            if i == 0 {
                return;
            }
            if labels[i] <= maxes[i] {
                labels[i] += 1;
                for j in i + 1..n {
                    labels[j] = 0;
                    maxes[j] = maxes[j - 1].max(labels[j - 1]);
                }
                break;
            }
            i -= 1;
        }
    }
}

/// All set partitions of `units`, each exactly once, blocks sorted.
pub fn enumerate_set_partitions(units: &UnitSet) -> Result<Vec<SetPartition>> {
    if units.is_empty() {
        return Err(Error::Usage("cannot partition an empty unit set".into()));
    }
    let ground = units.as_slice();
    let mut out = Vec::new();
    for_each_rgs(ground.len(), |labels, blocks| {
        let mut sets = vec![Vec::new(); blocks];
        for (i, &l) in labels.iter().enumerate() {
            sets[l].push(ground[i]);
        }
        let mut blocks: Vec<UnitSet> = sets.into_iter().map(UnitSet::new).collect();
        blocks.sort();
        out.push(SetPartition { blocks });
    });
    Ok(out)
}

/// Every disintegrating partition of `(mechanism, purview)`, canonical and
/// duplicate-free.
///
/// Canonical partitions are in bijection with set partitions of the tagged
/// union `M ⊔ Z` in which no block holds all of `M` together with a purview
/// unit; each block becomes one `(mechanism part, purview part)` pair.
pub fn enumerate_disintegrating(mechanism: &UnitSet, purview: &UnitSet) -> Result<Vec<DisintegratingPartition>> {
    if mechanism.is_empty() || purview.is_empty() {
        return Err(Error::Usage(
            "disintegrating partitions need a nonempty mechanism and purview".into(),
        ));
    }
    let m = mechanism.len();
    let n = m + purview.len();
    let mut out = Vec::new();
    for_each_rgs(n, |labels, blocks| {
        let mut parts = vec![(Vec::new(), Vec::new()); blocks];
        for (i, &l) in labels.iter().enumerate() {
            if i < m {
                parts[l].0.push(mechanism.as_slice()[i]);
            } else {
                parts[l].1.push(purview.as_slice()[i - m]);
            }
        }
        if parts.iter().any(|(mp, zp)| mp.len() == m && !zp.is_empty()) {
            return;
        }
        out.push(DisintegratingPartition::new(parts.into_iter().map(|(mp, zp)| Part {
            mechanism: UnitSet::new(mp),
            purview: UnitSet::new(zp),
        })));
    });
    out.sort();
    Ok(out)
}
