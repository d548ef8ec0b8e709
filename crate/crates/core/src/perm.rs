//! Permutations of `0..n` and group orders by the Schreier-Sims algorithm.

use num_bigint::BigUint;

/// `p[i]` is the image of `i`.
pub type Perm = Vec<u32>;

pub fn identity(n: usize) -> Perm {
    (0..n as u32).collect()
}

pub fn is_identity(p: &[u32]) -> bool {
    p.iter().enumerate().all(|(i, &x)| i as u32 == x)
}

/// `p after q`.
pub fn compose(p: &[u32], q: &[u32]) -> Perm {
    q.iter().map(|&x| p[x as usize]).collect()
}

pub fn inverse(p: &[u32]) -> Perm {
    let mut out = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        out[x as usize] = i as u32;
    }
    out
}

/// `g p g^-1`.
pub fn conjugate(g: &[u32], p: &[u32]) -> Perm {
    compose(&compose(g, p), &inverse(g))
}

struct Level {
    base: usize,
    gens: Vec<Perm>,
    /// `trans[b]` maps the base point to `b`.
    trans: Vec<Option<Perm>>,
}

impl Level {
    fn new(base: usize, n: usize) -> Self {
        let mut trans = vec![None; n];
        trans[base] = Some(identity(n));
        Level { base, gens: Vec::new(), trans }
    }

    fn rebuild_orbit(&mut self) {
        let n = self.trans.len();
        let mut trans: Vec<Option<Perm>> = vec![None; n];
        trans[self.base] = Some(identity(n));
        let mut queue = vec![self.base];
        while let Some(b) = queue.pop() {
            let ub = trans[b].clone().unwrap();
            for s in &self.gens {
                let c = s[b] as usize;
                if trans[c].is_none() {
                    trans[c] = Some(compose(s, &ub));
                    queue.push(c);
                }
            }
        }
        self.trans = trans;
    }

    fn orbit(&self) -> Vec<usize> {
        (0..self.trans.len()).filter(|&b| self.trans[b].is_some()).collect()
    }
}

/// A base and strong generating set.
pub struct StabChain {
    n: usize,
    levels: Vec<Level>,
}

impl StabChain {
    pub fn new(n: usize, gens: &[Perm]) -> Self {
        let mut chain = StabChain { n, levels: Vec::new() };
        for g in gens {
            assert_eq!(g.len(), n);
            let (h, j) = chain.strip(g, 0);
            if !is_identity(&h) {
                chain.add_levels(0, j, h);
            }
        }
        chain.complete();
        chain
    }

    /// Sift `g` through levels `from..`; returns the residue and the level
    /// where sifting stopped.
    fn strip(&self, g: &[u32], from: usize) -> (Perm, usize) {
        let mut h = g.to_vec();
        for (i, lvl) in self.levels.iter().enumerate().skip(from) {
            let b = h[lvl.base] as usize;
            match &lvl.trans[b] {
                Some(u) => h = compose(&inverse(u), &h),
                None => return (h, i),
            }
        }
        (h, self.levels.len())
    }

    /// Add a nontrivial `h` fixing the base points before level `j` to
    /// levels `from..=j`.
    fn add_levels(&mut self, from: usize, j: usize, h: Perm) {
        for l in from..j.min(self.levels.len()) {
            self.levels[l].gens.push(h.clone());
            self.levels[l].rebuild_orbit();
        }
        self.add_at(j, h);
    }

    fn add_at(&mut self, j: usize, h: Perm) {
        if j == self.levels.len() {
            let moved = h.iter().enumerate().position(|(i, &x)| i as u32 != x).unwrap();
            self.levels.push(Level::new(moved, self.n));
        }
        let lvl = &mut self.levels[j];
        lvl.gens.push(h);
        lvl.rebuild_orbit();
    }

    fn complete(&mut self) {
        'outer: loop {
            for i in (0..self.levels.len()).rev() {
                let orbit = self.levels[i].orbit();
                let gens = self.levels[i].gens.clone();
                for &b in &orbit {
                    let ub = self.levels[i].trans[b].clone().unwrap();
                    for s in &gens {
                        let c = s[b] as usize;
                        let uc = self.levels[i].trans[c].clone().unwrap();
                        let sg = compose(&inverse(&uc), &compose(s, &ub));
                        let (h, j) = self.strip(&sg, i + 1);
                        if !is_identity(&h) {
                            self.add_levels(i + 1, j, h);
                            continue 'outer;
                        }
                    }
                }
            }
            break;
        }
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().map(|l| BigUint::from(l.orbit().len())).product()
    }

    pub fn contains(&self, g: &[u32]) -> bool {
        is_identity(&self.strip(g, 0).0)
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Perm {
        (0..n as u32).map(|i| (i + 1) % n as u32).collect()
    }

    fn transposition(n: usize, a: usize, b: usize) -> Perm {
        let mut p = identity(n);
        p.swap(a, b);
        p
    }

    #[test]
    fn symmetric_and_alternating() {
        for n in 2..8usize {
            let s = StabChain::new(n, &[cycle(n), transposition(n, 0, 1)]);
            let fact: u64 = (1..=n as u64).product();
            assert_eq!(s.order(), BigUint::from(fact));
        }
        // 3-cycles generate A_n
        let n = 6;
        let gens: Vec<Perm> = (0..n - 2)
            .map(|i| {
                let mut p = identity(n);
                p[i] = i as u32 + 1;
                p[i + 1] = i as u32 + 2;
                p[i + 2] = i as u32;
                p
            })
            .collect();
        assert_eq!(StabChain::new(n, &gens).order(), BigUint::from(360u32));
    }

    #[test]
    fn trivial_and_cyclic() {
        assert_eq!(StabChain::new(1, &[]).order(), BigUint::from(1u32));
        assert_eq!(StabChain::new(5, &[identity(5)]).order(), BigUint::from(1u32));
        let c = StabChain::new(7, &[cycle(7)]);
        assert_eq!(c.order(), BigUint::from(7u32));
        assert!(c.contains(&compose(&cycle(7), &cycle(7))));
        assert!(!c.contains(&transposition(7, 0, 1)));
    }
}
