use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Perm;

/// One level of a stabilizer chain: the orbit of the base point under the
/// level's generators, with a coset representative for every orbit point.
#[derive(Clone, Debug)]
struct Level {
    orbit: Vec<u32>,
    /// Position in `orbit` per point, `u32::MAX` if absent.
    pos: Vec<u32>,
    /// `reps[k]` maps the base point to `orbit[k]`.
    reps: Vec<Perm>,
}

impl Level {
    fn build(degree: usize, point: u32, gens: &[Perm]) -> Level {
        let mut pos = vec![u32::MAX; degree];
        let mut orbit = vec![point];
        let mut reps = vec![Perm::identity(degree)];
        pos[point as usize] = 0;
        let mut k = 0;
        while k < orbit.len() {
            let x = orbit[k];
            for g in gens {
                let y = g.apply(x);
                if pos[y as usize] == u32::MAX {
                    pos[y as usize] = orbit.len() as u32;
                    orbit.push(y);
                    reps.push(reps[k].then(g));
                }
            }
            k += 1;
        }
        Level { orbit, pos, reps }
    }

    fn rep(&self, point: u32) -> Option<&Perm> {
        match self.pos[point as usize] {
            u32::MAX => None,
            k => Some(&self.reps[k as usize]),
        }
    }
}

/// Base and strong generating set of a permutation group.
///
/// Built by a seeded random Schreier–Sims phase followed by the
/// deterministic incremental completion, so the result is exact and depends
/// only on the generators, the base prefix and the seed.
#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    base: Vec<u32>,
    /// Strong generators fixing `base[..i]`.
    level_gens: Vec<Vec<Perm>>,
    levels: Vec<Level>,
}

/// Seed used when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x7e7a_0b5e;

impl StabChain {
    /// Chain for the group generated by `gens` on `0..degree`.
    pub fn new(degree: usize, gens: &[Perm], seed: u64) -> Self {
        Self::with_base(degree, gens, &[], seed)
    }

    /// Chain whose base starts with `prefix`.
    pub fn with_base(degree: usize, gens: &[Perm], prefix: &[u32], seed: u64) -> Self {
        let gens: Vec<Perm> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        let mut base: Vec<u32> = prefix.to_vec();
        for g in &gens {
            if base.iter().all(|&b| g.apply(b) == b) {
                base.push(g.first_moved().expect("non-identity"));
            }
        }
        let mut chain = StabChain { degree, base, level_gens: Vec::new(), levels: Vec::new() };
        for i in 0..chain.base.len() {
            let fixed = &chain.base[..i];
            let lg: Vec<Perm> = gens.iter().filter(|g| fixed.iter().all(|&b| g.apply(b) == b)).cloned().collect();
            chain.level_gens.push(lg);
        }
        chain.rebuild_levels(0);
        chain.random_phase(&gens, seed);
        chain.complete();
        chain
    }

    fn rebuild_levels(&mut self, from: usize) {
        for l in from..self.base.len() {
            let lvl = Level::build(self.degree, self.base[l], &self.level_gens[l]);
            if l < self.levels.len() {
                self.levels[l] = lvl;
            } else {
                self.levels.push(lvl);
            }
        }
    }

    /// Sift `h` through levels `start..`; returns the residue and the level at
    /// which sifting stopped (`base.len()` if it went through every level).
    fn strip(&self, mut h: Perm, start: usize) -> (Perm, usize) {
        for l in start..self.base.len() {
            let b = self.base[l];
            let beta = h.apply(b);
            if beta == b {
                continue;
            }
            match self.levels[l].rep(beta) {
                None => return (h, l),
                Some(u) => h = h.then(&u.inverse()),
            }
        }
        (h, self.base.len())
    }

    /// Insert a residue that failed to sift at `stop` into levels `from..=stop`.
    fn insert(&mut self, h: Perm, from: usize, stop: usize) {
        let mut stop = stop;
        if stop == self.base.len() {
            self.base.push(h.first_moved().expect("non-identity residue"));
            self.level_gens.push(Vec::new());
            stop = self.base.len() - 1;
        }
        for l in from..=stop {
            self.level_gens[l].push(h.clone());
        }
        for l in from..=stop {
            let lvl = Level::build(self.degree, self.base[l], &self.level_gens[l]);
            if l < self.levels.len() {
                self.levels[l] = lvl;
            } else {
                self.levels.push(lvl);
            }
        }
    }

    fn random_phase(&mut self, gens: &[Perm], seed: u64) {
        if gens.is_empty() {
            return;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut state: Vec<Perm> = gens.iter().cycle().take(gens.len().max(8)).cloned().collect();
        let mut acc = Perm::identity(self.degree);
        let step = |rng: &mut ChaCha8Rng, state: &mut Vec<Perm>, acc: &mut Perm| {
            let s = state.len();
            let i = rng.random_range(0..s);
            let mut j = rng.random_range(0..s - 1);
            if j >= i {
                j += 1;
            }
            state[i] = if rng.random_bool(0.5) { state[i].then(&state[j]) } else { state[j].then(&state[i]) };
            *acc = acc.then(&state[i]);
            acc.clone()
        };
        for _ in 0..40 {
            step(&mut rng, &mut state, &mut acc);
        }
        let mut quiet = 0;
        while quiet < 24 {
            let x = step(&mut rng, &mut state, &mut acc);
            let (h, stop) = self.strip(x, 0);
            if stop == self.base.len() && h.is_identity() {
                quiet += 1;
            } else {
                quiet = 0;
                self.insert(h, 0, stop);
            }
        }
    }

    /// Deterministic completion: every Schreier generator sifts to the identity.
    fn complete(&mut self) {
        let mut i = self.base.len() as isize - 1;
        'outer: while i >= 0 {
            let l = i as usize;
            let orbit = self.levels[l].orbit.clone();
            let gens = self.level_gens[l].clone();
            for (k, &beta) in orbit.iter().enumerate() {
                for g in &gens {
                    let gb = g.apply(beta);
                    let u_beta = &self.levels[l].reps[k];
                    let u_gb = self.levels[l].rep(gb).expect("orbit closed");
                    let moved = u_beta.then(g);
                    if &moved == u_gb {
                        continue;
                    }
                    let schreier = moved.then(&u_gb.inverse());
                    let (h, stop) = self.strip(schreier, l + 1);
                    if stop < self.base.len() || !h.is_identity() {
                        self.insert(h, l + 1, stop);
                        i = self.base.len().min(stop + 1) as isize - 1;
                        continue 'outer;
                    }
                }
            }
            i -= 1;
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> &[u32] {
        &self.base
    }

    /// Orbit lengths along the chain.
    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    /// Group order.
    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    /// Strong generators (the generators of the top level).
    pub fn generators(&self) -> &[Perm] {
        self.level_gens.first().map(Vec::as_slice).unwrap_or(&[])
    }

    /// Exact membership test.
    pub fn contains(&self, g: &Perm) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (h, stop) = self.strip(g.clone(), 0);
        stop == self.base.len() && h.is_identity()
    }

    /// Orbit of a point under the group.
    pub fn orbit(&self, point: u32) -> Vec<u32> {
        Level::build(self.degree, point, self.generators()).orbit
    }

    /// The chain of the stabilizer of `base[..k]`.
    pub fn subchain(&self, k: usize) -> StabChain {
        let k = k.min(self.base.len());
        StabChain {
            degree: self.degree,
            base: self.base[k..].to_vec(),
            level_gens: self.level_gens[k..].to_vec(),
            levels: self.levels[k..].to_vec(),
        }
    }

    /// Point stabilizer, computed from a chain rebased at `point`.
    pub fn stabilizer(&self, point: u32, seed: u64) -> StabChain {
        let rebased = StabChain::with_base(self.degree, self.generators(), &[point], seed);
        debug_assert_eq!(rebased.order(), self.order());
        rebased.subchain(1)
    }

    /// Pointwise stabilizer of several points.
    pub fn pointwise_stabilizer(&self, points: &[u32], seed: u64) -> StabChain {
        let rebased = StabChain::with_base(self.degree, self.generators(), points, seed);
        rebased.subchain(points.len())
    }

    /// Chain for the group generated by this group and `extra`.
    pub fn extend(&self, extra: &[Perm], seed: u64) -> StabChain {
        let mut gens = self.generators().to_vec();
        gens.extend(extra.iter().cloned());
        StabChain::with_base(self.degree, &gens, &self.base, seed)
    }

    /// All elements, in the order of the chain's coset decomposition.
    pub fn elements(&self) -> Vec<Perm> {
        let mut out = vec![Perm::identity(self.degree)];
        for lvl in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * lvl.reps.len());
            for r in &lvl.reps {
                for x in &out {
                    next.push(x.then(r));
                }
            }
            out = next;
        }
        out
    }

    /// Uniformly random element.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Perm {
        let mut acc = Perm::identity(self.degree);
        for lvl in self.levels.iter().rev() {
            let r = &lvl.reps[rng.random_range(0..lvl.reps.len())];
            acc = acc.then(r);
        }
        acc
    }

    /// A short generating list: seeded random elements added until they
    /// generate a group of the same order.
    pub fn small_generating_set(&self, seed: u64) -> Vec<Perm> {
        let target = self.order();
        if target == 1 {
            return Vec::new();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut gens: Vec<Perm> = Vec::new();
        loop {
            gens.push(self.random_element(&mut rng));
            if gens.len() >= 2 && StabChain::new(self.degree, &gens, seed).order() == target {
                return gens;
            }
            if gens.len() > 8 {
                // Random pairs generate almost surely; fall back to all strong generators.
                return self.generators().to_vec();
            }
        }
    }

    /// Whether every element of `other` lies in this group.
    pub fn contains_group(&self, other: &StabChain) -> bool {
        other.generators().iter().all(|g| self.contains(g))
    }

    /// Whether this group is normalized by every element of `gens`.
    pub fn normalized_by(&self, gens: &[Perm]) -> bool {
        gens.iter().all(|g| self.generators().iter().all(|s| self.contains(&s.conjugate_by(g))))
    }

    /// Normal closure of `seeds` under conjugation by `ambient_gens`.
    pub fn normal_closure(degree: usize, seeds: &[Perm], ambient_gens: &[Perm], seed: u64) -> StabChain {
        let mut chain = StabChain::new(degree, seeds, seed);
        loop {
            let mut fresh = None;
            'search: for g in ambient_gens {
                for s in chain.generators() {
                    let c = s.conjugate_by(g);
                    if !chain.contains(&c) {
                        fresh = Some(c);
                        break 'search;
                    }
                }
            }
            match fresh {
                None => return chain,
                Some(c) => chain = chain.extend(&[c], seed),
            }
        }
    }

    /// Derived subgroup: normal closure of the commutators of a generating set.
    pub fn derived_subgroup(&self, seed: u64) -> StabChain {
        let gens = self.small_generating_set(seed);
        let mut comms = Vec::new();
        for (i, a) in gens.iter().enumerate() {
            for b in &gens[i + 1..] {
                let c = Perm::commutator(a, b);
                if !c.is_identity() {
                    comms.push(c);
                }
            }
        }
        StabChain::normal_closure(self.degree, &comms, &gens, seed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn symmetric(n: usize) -> Vec<Perm> {
        let mut t: Vec<u32> = (0..n as u32).collect();
        t.swap(0, 1);
        let c: Vec<u32> = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
        vec![Perm::from_images(t), Perm::from_images(c)]
    }

    #[test]
    fn symmetric_group_orders() {
        for (n, f) in [(3usize, 6u128), (5, 120), (7, 5040)] {
            let c = StabChain::new(n, &symmetric(n), DEFAULT_SEED);
            assert_eq!(c.order(), f);
            assert_eq!(c.elements().len() as u128, f);
        }
    }

    #[test]
    fn derived_of_s3_and_s5() {
        let s3 = StabChain::new(3, &symmetric(3), 1);
        assert_eq!(s3.derived_subgroup(1).order(), 3);
        let s5 = StabChain::new(5, &symmetric(5), 1);
        let a5 = s5.derived_subgroup(1);
        assert_eq!(a5.order(), 60);
        assert!(a5.normalized_by(s5.generators()));
    }

    #[test]
    fn membership_and_stabilizer() {
        let s5 = StabChain::new(5, &symmetric(5), 3);
        let st = s5.stabilizer(2, 3);
        assert_eq!(st.order(), 24);
        assert!(st.generators().iter().all(|g| g.apply(2) == 2));
        let c5 = StabChain::new(5, &symmetric(5)[1..], 3);
        assert!(!c5.contains(&symmetric(5)[0]));
        assert!(c5.contains(&symmetric(5)[1].pow(3)));
    }
}
