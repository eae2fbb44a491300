use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::spgroup::SpMatrix;
use crate::symmod::SymplecticModule;

/// Largest group tabulated with a full multiplication table.
pub const MAX_GROUP_TABLE: usize = 4096;

/// A finite matrix group with every element listed and a full
/// multiplication table; `mul(g, h)` is the index of `A_g A_h`.
#[derive(Clone, Debug)]
pub struct FiniteGroupTable {
    elements: Vec<SpMatrix>,
    index: HashMap<SpMatrix, usize>,
    mul: Vec<u32>,
    inv: Vec<u32>,
    generators: Vec<usize>,
}

impl FiniteGroupTable {
    /// Close the generators under multiplication (breadth first, identity first).
    pub fn generate(identity: SpMatrix, gens: &[SpMatrix]) -> Result<Self> {
        let mut elements = vec![identity.clone()];
        let mut index = HashMap::from([(identity, 0usize)]);
        let mut k = 0;
        while k < elements.len() {
            for s in gens {
                let x = elements[k].mul(s);
                if !index.contains_key(&x) {
                    if elements.len() >= MAX_GROUP_TABLE {
                        return Err(Error::Capacity(format!(
                            "group has more than {MAX_GROUP_TABLE} elements"
                        )));
                    }
                    index.insert(x.clone(), elements.len());
                    elements.push(x);
                }
            }
            k += 1;
        }
        Self::from_elements(elements, gens)
    }

    /// Tabulate a listed group (first element must be the identity).
    pub fn from_elements(elements: Vec<SpMatrix>, gens: &[SpMatrix]) -> Result<Self> {
        let size = elements.len();
        if size > MAX_GROUP_TABLE {
            return Err(Error::Capacity(format!("group has more than {MAX_GROUP_TABLE} elements")));
        }
        let index: HashMap<SpMatrix, usize> = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        if index.len() != size {
            return Err(Error::Input("repeated group elements".into()));
        }
        let rows: Vec<Option<Vec<u32>>> = crate::par::map_range(size, |g| {
            (0..size).map(|h| index.get(&elements[g].mul(&elements[h])).map(|&k| k as u32)).collect()
        });
        let mut mul = Vec::with_capacity(size * size);
        for r in rows {
            mul.extend(r.ok_or_else(|| Error::Validation("element list is not closed under products".into()))?);
        }
        if (0..size).any(|h| mul[h] as usize != h || mul[h * size] as usize != h) {
            return Err(Error::Validation("first element is not the identity".into()));
        }
        let mut inv = vec![u32::MAX; size];
        for g in 0..size {
            inv[g] = (0..size)
                .find(|&h| mul[g * size + h] == 0)
                .ok_or_else(|| Error::Validation("element without inverse".into()))? as u32;
        }
        let mut generators = Vec::new();
        for s in gens {
            let i = *index.get(s).ok_or_else(|| Error::Input("generator outside the group".into()))?;
            if !generators.contains(&i) && i != 0 {
                generators.push(i);
            }
        }
        Ok(FiniteGroupTable { elements, index, mul, inv, generators })
    }

    /// The same group with its elements listed in a different order
    /// (`order[k]` is the old index of the new element `k`; `order[0]` must be 0).
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let elements: Vec<SpMatrix> = order.iter().map(|&i| self.elements[i].clone()).collect();
        let gens: Vec<SpMatrix> = self.generators.iter().map(|&i| self.elements[i].clone()).collect();
        Self::from_elements(elements, &gens)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, i: usize) -> &SpMatrix {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[SpMatrix] {
        &self.elements
    }

    pub fn index_of(&self, a: &SpMatrix) -> Option<usize> {
        self.index.get(a).copied()
    }

    #[inline]
    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.mul[g * self.len() + h] as usize
    }

    #[inline]
    pub fn inv(&self, g: usize) -> usize {
        self.inv[g] as usize
    }

    /// Indices of the generators the table was built from.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// A short generating set: greedily add the first element not in the
    /// subgroup generated so far.
    pub fn small_generating_set(&self) -> Vec<usize> {
        let mut gens: Vec<usize> = Vec::new();
        let mut inside = vec![false; self.len()];
        inside[0] = true;
        while let Some(next) = self.pick_outside(&inside) {
            gens.push(next);
            inside = self.closure(&gens);
        }
        gens
    }

    fn pick_outside(&self, inside: &[bool]) -> Option<usize> {
        // Prefer elements of large order so few generators suffice.
        (0..self.len()).filter(|&g| !inside[g]).max_by_key(|&g| (self.element_order(g), std::cmp::Reverse(g)))
    }

    /// Membership vector of the subgroup generated by `gens`.
    pub fn closure(&self, gens: &[usize]) -> Vec<bool> {
        let mut inside = vec![false; self.len()];
        inside[0] = true;
        let mut queue = vec![0usize];
        while let Some(x) = queue.pop() {
            for &s in gens {
                let y = self.mul(x, s);
                if !inside[y] {
                    inside[y] = true;
                    queue.push(y);
                }
            }
        }
        inside
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// Subgroup table generated by the listed elements.
    pub fn subgroup(&self, gens: &[usize]) -> Result<FiniteGroupTable> {
        let identity = self.elements[0].clone();
        let g: Vec<SpMatrix> = gens.iter().map(|&i| self.elements[i].clone()).collect();
        FiniteGroupTable::generate(identity, &g)
    }

    /// All subgroups generated by at most two elements, deduplicated.
    pub fn two_generated_subgroups(&self) -> Vec<Vec<usize>> {
        let mut seen: Vec<Vec<bool>> = Vec::new();
        for a in 0..self.len() {
            for b in a..self.len() {
                let c = self.closure(&[a, b]);
                if !seen.contains(&c) {
                    seen.push(c);
                }
            }
        }
        let mut out: Vec<Vec<usize>> =
            seen.into_iter().map(|c| (0..self.len()).filter(|&i| c[i]).collect()).collect();
        out.sort_by_key(|s| (s.len(), s.clone()));
        out
    }

    /// Action table `act[g][m] = A_g m` on module element indices.
    pub fn action_table(&self, module: &SymplecticModule) -> Vec<Vec<u32>> {
        crate::par::map_slice(&self.elements, |a| {
            (0..module.size()).map(|m| module.encode(&a.apply(&module.decode(m))) as u32).collect()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spgroup::SpGroup;
    use crate::symmod::TypeD;

    #[test]
    fn sl2_f3_table() {
        let d = TypeD::new(&[3]).unwrap();
        let sp = SpGroup::full(&d, 1).unwrap();
        let t = FiniteGroupTable::generate(SpMatrix::identity(&d), sp.generators()).unwrap();
        assert_eq!(t.len(), 24);
        for g in 0..24 {
            assert_eq!(t.mul(g, t.inv(g)), 0);
        }
        let gens = t.small_generating_set();
        assert!(gens.len() <= 2);
        assert!(t.closure(&gens).iter().all(|&b| b));
        // Subgroups of SL2(F3): 1, Z2, four Z3, three Z4, four Z6, Q8, SL2(F3).
        assert_eq!(t.two_generated_subgroups().len(), 15);
    }
}
