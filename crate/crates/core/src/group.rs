//! Finite permutation groups given by generators.
//!
//! Small groups are handled by plain element closure; anything larger goes
//! through a Schreier–Sims stabilizer chain, which also backs membership tests
//! and uniform random sampling.

use std::collections::{HashSet, VecDeque};

use rand::Rng;

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Largest order for which [`PermutationGroup::order`] uses full closure.
pub const CLOSURE_LIMIT: usize = 10_000;

#[derive(Debug, Clone)]
pub struct PermutationGroup {
    degree: usize,
    generators: Vec<Permutation>,
}

impl PermutationGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::InvalidPermutation(format!(
                "generator of degree {} in a group of degree {degree}",
                g.degree()
            )));
        }
        let generators = generators
            .into_iter()
            .filter(|g| !g.is_identity())
            .collect();
        Ok(PermutationGroup { degree, generators })
    }

    pub fn trivial(degree: usize) -> Self {
        PermutationGroup {
            degree,
            generators: Vec::new(),
        }
    }

    /// Greedily pick a generating set out of an explicit element list.
    pub fn from_elements(degree: usize, elements: &[Permutation]) -> Result<Self> {
        let mut group = PermutationGroup::trivial(degree);
        let mut chain = group.stabilizer_chain();
        for e in elements {
            if e.degree() != degree {
                return Err(Error::InvalidPermutation(format!(
                    "element of degree {} in a group of degree {degree}",
                    e.degree()
                )));
            }
            if !chain.contains(e) {
                group.generators.push(e.clone());
                chain = group.stabilizer_chain();
            }
        }
        Ok(group)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }

    /// All elements, or `None` once more than `cap` have been found.
    pub fn elements_up_to(&self, cap: usize) -> Option<Vec<Permutation>> {
        let id = self.identity();
        let mut seen: HashSet<Permutation> = HashSet::new();
        let mut queue = VecDeque::new();
        let mut out = Vec::new();
        seen.insert(id.clone());
        queue.push_back(id);
        while let Some(g) = queue.pop_front() {
            for s in &self.generators {
                let h = s.compose(&g);
                if seen.insert(h.clone()) {
                    if seen.len() > cap {
                        return None;
                    }
                    queue.push_back(h);
                }
            }
            out.push(g);
        }
        Some(out)
    }

    pub fn stabilizer_chain(&self) -> StabilizerChain {
        StabilizerChain::new(self.degree, &self.generators)
    }

    /// Group order: closure up to [`CLOSURE_LIMIT`], stabilizer chain beyond.
    pub fn order(&self) -> u128 {
        match self.elements_up_to(CLOSURE_LIMIT) {
            Some(elements) => elements.len() as u128,
            None => self.stabilizer_chain().order(),
        }
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.degree && self.stabilizer_chain().contains(g)
    }

    /// Equality as subgroups of the same symmetric group.
    pub fn same_group(&self, other: &PermutationGroup) -> bool {
        if self.degree != other.degree {
            return false;
        }
        let mine = self.stabilizer_chain();
        let theirs = other.stabilizer_chain();
        other.generators.iter().all(|g| mine.contains(g))
            && self.generators.iter().all(|g| theirs.contains(g))
    }

    pub fn orbit(&self, point: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        let mut out = vec![point];
        seen[point] = true;
        let mut k = 0;
        while k < out.len() {
            let x = out[k];
            for g in &self.generators {
                let y = g.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            k += 1;
        }
        out.sort_unstable();
        out
    }
}

#[derive(Debug, Clone)]
struct Level {
    /// `transversal[x]` maps the base point of this level to `x`.
    transversal: Vec<Option<Permutation>>,
    orbit: Vec<usize>,
}

/// Base and strong generating set computed by the Schreier–Sims algorithm.
#[derive(Debug, Clone)]
pub struct StabilizerChain {
    degree: usize,
    base: Vec<usize>,
    strong: Vec<Permutation>,
    levels: Vec<Level>,
}

impl StabilizerChain {
    pub fn new(degree: usize, generators: &[Permutation]) -> Self {
        let mut chain = StabilizerChain {
            degree,
            base: Vec::new(),
            strong: Vec::new(),
            levels: Vec::new(),
        };
        for g in generators.iter().filter(|g| !g.is_identity()) {
            if chain.base.iter().all(|&b| g.apply(b) == b) {
                chain.base.push(first_moved(g));
            }
            chain.strong.push(g.clone());
        }
        chain.rebuild_levels(0);

        let mut i = chain.base.len() as isize - 1;
        while i >= 0 {
            let level = i as usize;
            match chain.find_missing_schreier_generator(level) {
                Some((residue, stop)) => {
                    if stop == chain.base.len() {
                        chain.base.push(first_moved(&residue));
                    }
                    chain.strong.push(residue);
                    chain.rebuild_levels(level + 1);
                    i = stop as isize;
                }
                None => i -= 1,
            }
        }
        chain
    }

    fn level_generators(&self, level: usize) -> impl Iterator<Item = &Permutation> {
        let fixed = &self.base[..level];
        self.strong
            .iter()
            .filter(move |g| fixed.iter().all(|&b| g.apply(b) == b))
    }

    fn rebuild_levels(&mut self, from: usize) {
        self.levels.truncate(from);
        for k in from..self.base.len() {
            let b = self.base[k];
            let gens: Vec<&Permutation> = self.level_generators(k).collect();
            let mut transversal: Vec<Option<Permutation>> = vec![None; self.degree];
            transversal[b] = Some(Permutation::identity(self.degree));
            let mut orbit = vec![b];
            let mut idx = 0;
            while idx < orbit.len() {
                let x = orbit[idx];
                let ux = transversal[x]
                    .clone()
                    .expect("orbit point has a transversal");
                for s in &gens {
                    let y = s.apply(x);
                    if transversal[y].is_none() {
                        transversal[y] = Some(s.compose(&ux));
                        orbit.push(y);
                    }
                }
                idx += 1;
            }
            self.levels.push(Level { transversal, orbit });
        }
    }

    fn find_missing_schreier_generator(&self, level: usize) -> Option<(Permutation, usize)> {
        let gens: Vec<&Permutation> = self.level_generators(level).collect();
        let lv = &self.levels[level];
        for &x in &lv.orbit {
            let ux = lv.transversal[x].as_ref().expect("orbit point");
            for s in &gens {
                let sx = s.apply(x);
                let usx = lv.transversal[sx].as_ref().expect("orbit is closed");
                let h = usx.inverse().compose(&s.compose(ux));
                let (residue, stop) = self.sift(&h, level + 1);
                if !residue.is_identity() {
                    return Some((residue, stop));
                }
            }
        }
        None
    }

    /// Strip `g` through the levels starting at `from`; returns the residue and
    /// the level where stripping stopped (`base.len()` if it went all the way).
    pub fn sift(&self, g: &Permutation, from: usize) -> (Permutation, usize) {
        let mut h = g.clone();
        for k in from..self.base.len() {
            let x = h.apply(self.base[k]);
            match &self.levels[k].transversal[x] {
                Some(u) => h = u.inverse().compose(&h),
                None => return (h, k),
            }
        }
        (h, self.base.len())
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (residue, stop) = self.sift(g, 0);
        stop == self.base.len() && residue.is_identity()
    }

    pub fn base(&self) -> &[usize] {
        &self.base
    }

    pub fn strong_generators(&self) -> &[Permutation] {
        &self.strong
    }

    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    /// Uniformly random element, as a product of random coset representatives.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for lv in &self.levels {
            let x = lv.orbit[rng.gen_range(0..lv.orbit.len())];
            let u = lv.transversal[x].as_ref().expect("orbit point");
            g = g.compose(u);
        }
        g
    }
}

fn first_moved(g: &Permutation) -> usize {
    (0..g.degree())
        .find(|&i| g.apply(i) != i)
        .expect("non-identity permutation moves a point")
}
