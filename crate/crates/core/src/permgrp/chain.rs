//! Deterministic incremental Schreier-Sims. A chain level holds a base
//! point, the generators known to fix all earlier base points, and the
//! orbit/transversal of the base point under them. Once every Schreier
//! generator sifts to the identity, the product of orbit sizes is the exact
//! group order and sifting decides membership.

use super::Permutation;
use crate::error::{Error, Result};
use crate::gf2n::FieldSpec;
use rand::Rng;
use std::ops::ControlFlow;

const ENUMERATION_LIMIT: u128 = 1_000_000;

#[derive(Debug)]
struct Level {
    base: u16,
    gens: Vec<Permutation>,
    orbit: Vec<u16>,
    transversal: Vec<Option<Permutation>>,
}

impl Level {
    fn new(field: FieldSpec, base: u16) -> Self {
        let mut transversal = vec![None; field.size()];
        transversal[base as usize] = Some(Permutation::identity(field));
        Level {
            base,
            gens: Vec::new(),
            orbit: vec![base],
            transversal,
        }
    }
}

#[derive(Debug)]
struct StabChain {
    field: FieldSpec,
    levels: Vec<Level>,
}

impl StabChain {
    fn build(field: FieldSpec, gens: &[Permutation], prescribed: &[u16]) -> Self {
        let mut chain = StabChain {
            field,
            levels: prescribed.iter().map(|&b| Level::new(field, b)).collect(),
        };
        for g in gens {
            if !g.is_identity() {
                chain.install(g.clone());
            }
        }
        let mut i = chain.levels.len() as isize - 1;
        while i >= 0 {
            match chain.check_level(i as usize) {
                Some(j) => i = j as isize,
                None => i -= 1,
            }
        }
        chain
    }

    fn smallest_moved(p: &Permutation) -> u16 {
        (0..p.size())
            .find(|&x| p.apply(x) != x)
            .expect("non-identity permutation moves a point") as u16
    }

    /// Adds a generator to every level whose base prefix it fixes,
    /// extending the base when it fixes all current base points.
    fn install(&mut self, g: Permutation) {
        let j = match self
            .levels
            .iter()
            .position(|lev| g.apply(lev.base as usize) != lev.base as usize)
        {
            Some(j) => j,
            None => {
                let b = Self::smallest_moved(&g);
                self.levels.push(Level::new(self.field, b));
                self.levels.len() - 1
            }
        };
        for k in 0..=j {
            self.levels[k].gens.push(g.clone());
        }
        for k in 0..=j {
            self.rebuild_orbit(k);
        }
    }

    fn rebuild_orbit(&mut self, l: usize) {
        let level = &mut self.levels[l];
        let mut transversal: Vec<Option<Permutation>> = vec![None; level.transversal.len()];
        transversal[level.base as usize] = Some(Permutation::identity(self.field));
        let mut orbit = vec![level.base];
        let mut head = 0;
        while head < orbit.len() {
            let p = orbit[head] as usize;
            head += 1;
            let u_p = transversal[p].clone().expect("orbit points have reps");
            for s in &level.gens {
                let q = s.apply(p);
                if transversal[q].is_none() {
                    transversal[q] = Some(s.compose(&u_p));
                    orbit.push(q as u16);
                }
            }
        }
        level.orbit = orbit;
        level.transversal = transversal;
    }

    /// Reduces p through the transversals starting at `from`; returns the
    /// residue and the level where it stuck (levels.len() on full descent).
    fn strip(&self, p: &Permutation, from: usize) -> (Permutation, usize) {
        let mut cur = p.clone();
        for l in from..self.levels.len() {
            let img = cur.apply(self.levels[l].base as usize);
            match &self.levels[l].transversal[img] {
                Some(u) => cur = u.inverse().compose(&cur),
                None => return (cur, l),
            }
        }
        (cur, self.levels.len())
    }

    /// Verifies every Schreier generator of the level; on a surviving
    /// residue, installs it below and reports the level to reprocess.
    fn check_level(&mut self, i: usize) -> Option<usize> {
        self.rebuild_orbit(i);
        let orbit = self.levels[i].orbit.clone();
        for &p in &orbit {
            let u_p = self.levels[i].transversal[p as usize]
                .clone()
                .expect("orbit point has a rep");
            for s_idx in 0..self.levels[i].gens.len() {
                let s = self.levels[i].gens[s_idx].clone();
                let sp = s.apply(p as usize);
                let u_sp = self.levels[i].transversal[sp]
                    .clone()
                    .expect("orbit is closed under generators");
                let schreier = u_sp.inverse().compose(&s.compose(&u_p));
                let (residue, j) = self.strip(&schreier, i + 1);
                if residue.is_identity() {
                    continue;
                }
                let j = if j == self.levels.len() {
                    let b = Self::smallest_moved(&residue);
                    self.levels.push(Level::new(self.field, b));
                    self.levels.len() - 1
                } else {
                    j
                };
                for k in (i + 1)..=j {
                    self.levels[k].gens.push(residue.clone());
                }
                for k in (i + 1)..=j {
                    self.rebuild_orbit(k);
                }
                return Some(j);
            }
        }
        None
    }

    fn order(&self) -> u128 {
        self.levels.iter().fold(1u128, |acc, l| {
            acc.checked_mul(l.orbit.len() as u128)
                .expect("group order fits in u128")
        })
    }

    fn contains(&self, p: &Permutation) -> bool {
        p.size() == self.field.size() && self.strip(p, 0).0.is_identity()
    }
}

/// A permutation group with an order certificate.
#[derive(Debug)]
pub struct PermGroup {
    generators: Vec<Permutation>,
    chain: StabChain,
    order: u128,
}

impl PermGroup {
    pub fn trivial(field: FieldSpec) -> Self {
        Self::from_generators_with_base(field, Vec::new(), &[])
            .expect("trivial group always builds")
    }

    /// Builds the chain with the given base points first (in order); extra
    /// base points are appended as needed. An empty generator list yields
    /// the trivial group.
    pub fn from_generators_with_base(
        field: FieldSpec,
        generators: Vec<Permutation>,
        base: &[u16],
    ) -> Result<Self> {
        for g in &generators {
            if g.size() != field.size() {
                return Err(Error::SizeMismatch {
                    perm: g.size(),
                    code: field.size(),
                });
            }
        }
        {
            let mut seen = vec![false; field.size()];
            for &b in base {
                if (b as usize) >= field.size() || seen[b as usize] {
                    return Err(Error::BadParams(format!("bad base point {b}")));
                }
                seen[b as usize] = true;
            }
        }
        let chain = StabChain::build(field, &generators, base);
        let order = chain.order();
        debug_assert!(generators.iter().all(|g| chain.contains(g)));
        Ok(PermGroup {
            generators,
            chain,
            order,
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.chain.field
    }

    pub fn degree(&self) -> usize {
        self.chain.field.size()
    }

    pub fn order(&self) -> u128 {
        self.order
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn base(&self) -> Vec<u16> {
        self.chain.levels.iter().map(|l| l.base).collect()
    }

    /// Generators of the pointwise stabilizer of the first `l` base points.
    pub fn stabilizer_generators(&self, l: usize) -> &[Permutation] {
        if l < self.chain.levels.len() {
            &self.chain.levels[l].gens
        } else {
            &[]
        }
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.chain.contains(p)
    }

    pub fn contains_group(&self, other: &PermGroup) -> bool {
        other.generators.iter().all(|g| self.contains(g))
    }

    /// Uniform random element: one transversal representative per level.
    pub fn random_element(&self, rng: &mut impl Rng) -> Permutation {
        let mut acc = Permutation::identity(self.chain.field);
        for level in &self.chain.levels {
            let point = level.orbit[rng.gen_range(0..level.orbit.len())];
            let u = level.transversal[point as usize]
                .as_ref()
                .expect("orbit point has a rep");
            acc = acc.compose(u);
        }
        acc
    }

    /// Visits every element exactly once (transversal products, outermost
    /// level first). Break stops early without error.
    pub fn try_for_each_element(
        &self,
        mut f: impl FnMut(&Permutation) -> ControlFlow<()>,
    ) -> Result<()> {
        if self.order > ENUMERATION_LIMIT {
            return Err(Error::GroupTooLarge(self.order));
        }
        fn rec(
            levels: &[Level],
            l: usize,
            prefix: &Permutation,
            f: &mut impl FnMut(&Permutation) -> ControlFlow<()>,
        ) -> ControlFlow<()> {
            if l == levels.len() {
                return f(prefix);
            }
            for &point in &levels[l].orbit {
                let u = levels[l].transversal[point as usize]
                    .as_ref()
                    .expect("orbit point has a rep");
                rec(levels, l + 1, &prefix.compose(u), f)?;
            }
            ControlFlow::Continue(())
        }
        let _ = rec(
            &self.chain.levels,
            0,
            &Permutation::identity(self.chain.field),
            &mut f,
        );
        Ok(())
    }

    pub fn elements(&self) -> Result<Vec<Permutation>> {
        let mut out = Vec::with_capacity(self.order as usize);
        self.try_for_each_element(|p| {
            out.push(p.clone());
            ControlFlow::Continue(())
        })?;
        Ok(out)
    }
}

/// Builds a stabilizer chain for the generated group and returns it with
/// its exact order.
pub fn group_order(gens: &[Permutation]) -> Result<PermGroup> {
    let Some(first) = gens.first() else {
        return Err(Error::BadParams("no generators given".into()));
    };
    for g in gens {
        if g.size() != first.size() {
            return Err(Error::LengthMismatch(first.size(), g.size()));
        }
    }
    PermGroup::from_generators_with_base(first.field(), gens.to_vec(), &[])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2n::make_field;
    use crate::permgrp::{frobenius_perm, mult_perm, translation_perm, Permutation};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn semilinear_gens(n: u32) -> Vec<Permutation> {
        let f = make_field(n, None).unwrap();
        let mut gens: Vec<Permutation> = f.elements().skip(1).map(translation_perm).collect();
        gens.push(mult_perm(f.first_primitive()).unwrap());
        gens.push(frobenius_perm(f, 1));
        gens
    }

    #[test]
    fn translation_group_order_is_field_size() {
        let f = make_field(4, None).unwrap();
        let gens: Vec<Permutation> = f.elements().skip(1).map(translation_perm).collect();
        let g = group_order(&gens).unwrap();
        assert_eq!(g.order(), 16);
        assert!(g.contains(&translation_perm(f.elem(0x9))));
        assert!(!g.contains(&mult_perm(f.first_primitive()).unwrap()));
    }

    #[test]
    fn semilinear_group_orders() {
        // 2^n (2^n - 1) n
        assert_eq!(group_order(&semilinear_gens(4)).unwrap().order(), 960);
        assert_eq!(group_order(&semilinear_gens(5)).unwrap().order(), 4960);
        assert_eq!(group_order(&semilinear_gens(6)).unwrap().order(), 24192);
    }

    /// Linear maps of the bit space as coordinate permutations.
    fn linear_perm(n: u32, cols: &[u32]) -> Permutation {
        let f = make_field(n, None).unwrap();
        Permutation::from_fn(f, |x| {
            let mut y = 0u32;
            for (j, &col) in cols.iter().enumerate() {
                if x.bits() >> j & 1 == 1 {
                    y ^= col;
                }
            }
            f.elem(y)
        })
        .unwrap()
    }

    #[test]
    fn full_affine_group_at_n4() {
        let f = make_field(4, None).unwrap();
        // GL_4(2) from a 4-cycle of basis vectors and a transvection
        let cycle = linear_perm(4, &[0b0010, 0b0100, 0b1000, 0b0001]);
        let transvection = linear_perm(4, &[0b0011, 0b0010, 0b0100, 0b1000]);
        let gl = group_order(&[cycle.clone(), transvection.clone()]).unwrap();
        assert_eq!(gl.order(), 20160);
        let mut gens = vec![cycle, transvection];
        gens.extend(f.elements().skip(1).map(translation_perm));
        let affine = group_order(&gens).unwrap();
        assert_eq!(affine.order(), 322_560);
        assert!(affine.contains_group(&gl));
    }

    #[test]
    fn prescribed_base_prefix_is_kept() {
        let gens = semilinear_gens(4);
        let f = make_field(4, None).unwrap();
        let g = PermGroup::from_generators_with_base(f, gens, &[3, 7, 0]).unwrap();
        assert_eq!(g.order(), 960);
        assert_eq!(&g.base()[..3], &[3, 7, 0]);
        // level sets really stabilize the prefix
        for l in 0..3 {
            for s in g.stabilizer_generators(l) {
                for &b in &g.base()[..l] {
                    assert_eq!(s.apply(b as usize), b as usize);
                }
            }
        }
        assert_eq!(PermGroup::trivial(f).order(), 1);
    }

    #[test]
    fn sampling_and_enumeration_agree_with_membership() {
        let g = group_order(&semilinear_gens(4)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..100 {
            assert!(g.contains(&g.random_element(&mut rng)));
        }
        let elems = g.elements().unwrap();
        assert_eq!(elems.len(), 960);
        let distinct: std::collections::HashSet<_> =
            elems.iter().map(|p| p.images().to_vec()).collect();
        assert_eq!(distinct.len(), 960);
    }

    #[test]
    fn two_transitivity_by_orbit_counting() {
        for n in [4u32, 5] {
            let g = PermGroup::from_generators_with_base(
                make_field(n, None).unwrap(),
                semilinear_gens(n),
                &[0],
            )
            .unwrap();
            // transitive: orbit of 0 is everything; the stabilizer of 0 is
            // transitive on the rest
            let stab = group_order(g.stabilizer_generators(1)).unwrap();
            let mut reach = std::collections::HashSet::new();
            for s in stab.generators() {
                for x in 1..g.degree() {
                    reach.insert(s.apply(x));
                }
            }
            let stab0 = PermGroup::from_generators_with_base(
                g.field(),
                g.stabilizer_generators(1).to_vec(),
                &[1],
            )
            .unwrap();
            let orbit_of_1: std::collections::HashSet<usize> = {
                // closure of {1} under the stabilizer generators
                let mut seen = vec![false; g.degree()];
                let mut stack = vec![1usize];
                seen[1] = true;
                while let Some(p) = stack.pop() {
                    for s in stab0.generators() {
                        let q = s.apply(p);
                        if !seen[q] {
                            seen[q] = true;
                            stack.push(q);
                        }
                    }
                }
                (0..g.degree()).filter(|&x| seen[x]).collect()
            };
            assert_eq!(orbit_of_1.len(), g.degree() - 1);
        }
    }

    #[test]
    fn order_21_elements_share_one_cyclic_subgroup_at_n6() {
        let f = make_field(6, None).unwrap();
        let stab0 = group_order(&[
            mult_perm(f.first_primitive()).unwrap(),
            frobenius_perm(f, 1),
        ])
        .unwrap();
        assert_eq!(stab0.order(), 378);
        let mut subgroups: std::collections::HashSet<Vec<Vec<u16>>> =
            std::collections::HashSet::new();
        stab0
            .try_for_each_element(|p| {
                if p.element_order() == 21 {
                    let mut cyc: Vec<Vec<u16>> =
                        (0..21).map(|i| p.pow(i).images().to_vec()).collect();
                    cyc.sort();
                    subgroups.insert(cyc);
                }
                std::ops::ControlFlow::Continue(())
            })
            .unwrap();
        assert_eq!(subgroups.len(), 1);
    }
}
