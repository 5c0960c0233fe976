//! Finite groups given by multiplication tables.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    mul: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    /// Named subgroups, each a sorted element list.
    pub subgroups: BTreeMap<String, Vec<usize>>,
    /// Optional element labels (permutations print as one-line notation).
    pub labels: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct GroupJson {
    size: usize,
    mul: Vec<Vec<usize>>,
    #[serde(default)]
    subgroups: BTreeMap<String, Vec<usize>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    labels: Vec<String>,
}

impl GroupTable {
    /// Validates the table: closure, identity, inverses and associativity.
    pub fn new(mul: Vec<Vec<usize>>) -> Result<Self> {
        let n = mul.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty group".into()));
        }
        if mul.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(Error::InvalidGroup("table is not square over 0..n-1".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| mul[e][x] == x && mul[x][e] == x))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let mut inverse = vec![0; n];
        for x in 0..n {
            inverse[x] = (0..n)
                .find(|&y| mul[x][y] == identity && mul[y][x] == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {x} has no inverse")))?;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = mul[a][b];
                for c in 0..n {
                    if mul[ab][c] != mul[a][mul[b][c]] {
                        return Err(Error::InvalidGroup(format!("not associative at ({a},{b},{c})")));
                    }
                }
            }
        }
        let labels = (0..n).map(|i| i.to_string()).collect();
        Ok(GroupTable { mul, identity, inverse, subgroups: BTreeMap::new(), labels })
    }

    /// Builds the table of a group from an explicit element list and product.
    pub fn from_elements<T: Ord + Clone>(elems: &[T], op: impl Fn(&T, &T) -> T) -> Result<Self> {
        let index: BTreeMap<&T, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
        if index.len() != elems.len() {
            return Err(Error::InvalidGroup("repeated element".into()));
        }
        let mul = elems
            .iter()
            .map(|a| {
                elems
                    .iter()
                    .map(|b| {
                        index
                            .get(&op(a, b))
                            .copied()
                            .ok_or_else(|| Error::InvalidGroup("element list is not closed".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(mul)
    }

    /// Symmetric group on `{0..n-1}`, elements in lexicographic order of
    /// one-line notation. The product `s*t` applies `s` first, then `t`.
    pub fn symmetric(n: usize) -> Self {
        let perms = permutations(n);
        let mut g = Self::from_elements(&perms, |s, t| s.iter().map(|&i| t[i]).collect())
            .expect("symmetric group table");
        g.labels = perms.iter().map(|p| format!("{p:?}")).collect();
        g
    }

    pub fn cyclic(n: usize) -> Self {
        let mut g = Self::new((0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect())
            .expect("cyclic group table");
        g.labels = (0..n).map(|i| i.to_string()).collect();
        g
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let raw: GroupJson =
            serde_json::from_value(value.clone()).map_err(|e| Error::Parse(format!("group: {e}")))?;
        if raw.mul.len() != raw.size {
            return Err(Error::InvalidGroup(format!("size {} but {} rows", raw.size, raw.mul.len())));
        }
        let mut g = Self::new(raw.mul)?;
        if raw.labels.len() == raw.size {
            g.labels = raw.labels;
        }
        for (name, elems) in raw.subgroups {
            g.add_subgroup(&name, &elems)?;
        }
        Ok(g)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(GroupJson {
            size: self.size(),
            mul: self.mul.clone(),
            subgroups: self.subgroups.clone(),
            labels: self.labels.clone(),
        })
        .expect("serializable")
    }

    pub fn size(&self) -> usize {
        self.mul.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn product(&self, elems: &[usize]) -> usize {
        elems.iter().fold(self.identity, |acc, &x| self.mul(acc, x))
    }

    /// `g^-1 x g`
    pub fn conj(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), x), g)
    }

    pub fn is_subgroup(&self, elems: &[usize]) -> bool {
        let set: BTreeSet<usize> = elems.iter().copied().collect();
        set.contains(&self.identity)
            && set.iter().all(|&a| a < self.size() && set.iter().all(|&b| set.contains(&self.mul(a, self.inv(b)))))
    }

    pub fn add_subgroup(&mut self, name: &str, elems: &[usize]) -> Result<()> {
        if !self.is_subgroup(elems) {
            return Err(Error::InvalidGroup(format!("{name} is not a subgroup")));
        }
        let mut v = elems.to_vec();
        v.sort_unstable();
        v.dedup();
        self.subgroups.insert(name.to_string(), v);
        Ok(())
    }

    pub fn subgroup(&self, name: &str) -> Result<&[usize]> {
        self.subgroups
            .get(name)
            .map(|v| v.as_slice())
            .ok_or_else(|| Error::InvalidGroup(format!("no subgroup named {name:?}")))
    }

    /// Subgroup generated by `gens`, sorted.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut set = BTreeSet::from([self.identity]);
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set.into_iter().collect()
    }

    pub fn commutes(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    /// Right cosets `K g`, each sorted, listed by minimal element. Returns the
    /// coset list and the map from group element to coset index.
    pub fn right_cosets(&self, k: &[usize]) -> (Vec<Vec<usize>>, Vec<usize>) {
        let n = self.size();
        let mut which = vec![usize::MAX; n];
        let mut cosets = Vec::new();
        for g in 0..n {
            if which[g] != usize::MAX {
                continue;
            }
            let mut c: Vec<usize> = k.iter().map(|&x| self.mul(x, g)).collect();
            c.sort_unstable();
            c.dedup();
            for &x in &c {
                which[x] = cosets.len();
            }
            cosets.push(c);
        }
        (cosets, which)
    }

    /// Index of a permutation given in one-line notation, for groups built by
    /// [`GroupTable::symmetric`].
    pub fn perm(&self, p: &[usize]) -> Option<usize> {
        let label = format!("{p:?}");
        self.labels.iter().position(|l| *l == label)
    }
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_three() {
        let g = GroupTable::symmetric(3);
        assert_eq!(g.size(), 6);
        assert_eq!(g.identity(), 0);
        let t = g.perm(&[1, 0, 2]).unwrap();
        let c = g.perm(&[1, 2, 0]).unwrap();
        // apply t first, then c: 0 -> 1 -> 2
        assert_eq!(g.labels[g.mul(t, c)], "[2, 1, 0]");
        assert_eq!(g.generated(&[c]).len(), 3);
        assert!(g.is_subgroup(&g.generated(&[t])));
        assert!(!g.is_subgroup(&[0, t, c]));
    }

    #[test]
    fn rejects_non_group() {
        assert!(GroupTable::new(vec![vec![0, 0], vec![0, 1]]).is_err());
        assert!(GroupTable::new(vec![]).is_err());
    }

    #[test]
    fn cosets_partition() {
        let g = GroupTable::symmetric(3);
        let k = g.generated(&[g.perm(&[1, 0, 2]).unwrap()]);
        let (cosets, which) = g.right_cosets(&k);
        assert_eq!(cosets.len(), 3);
        for (i, c) in cosets.iter().enumerate() {
            for &x in c {
                assert_eq!(which[x], i);
            }
        }
    }

    #[test]
    fn json_roundtrip() {
        let mut g = GroupTable::cyclic(4);
        g.add_subgroup("K", &[0, 2]).unwrap();
        let h = GroupTable::from_json(&g.to_json()).unwrap();
        assert_eq!(g, h);
        assert!(g.clone().add_subgroup("bad", &[0, 1]).is_err());
    }

    #[test]
    fn permutation_count() {
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(permutations(0).len(), 1);
    }
}
