//! Subgroup-structure checks: regular elementary abelian subgroups and
//! conjugacy inside a group small enough to enumerate.

use super::chain::PermGroup;
use super::Permutation;
use crate::error::{Error, Result};
use std::collections::HashSet;
use std::ops::ControlFlow;

const MAX_REGULAR_DEGREE: usize = 64;

fn fixed_point_free_involution(p: &Permutation) -> bool {
    !p.is_identity()
        && p.images()
            .iter()
            .enumerate()
            .all(|(x, &y)| x != y as usize && p.apply(y as usize) == x)
}

/// All subgroups of G that are elementary abelian of order equal to the
/// degree and act regularly on the points.
///
/// Every non-identity element of such a subgroup is a fixed-point-free
/// involution, and conversely a subgroup of that size whose non-identity
/// elements are all fixed-point-free is semiregular, hence regular. The
/// search therefore backtracks over the involution set, extending a span
/// one generator at a time; generators are forced to be the greedy-minimal
/// choice (each new generator is the smallest element outside the previous
/// span), so every subgroup is produced exactly once.
pub fn regular_elem_abelian_subgroups(g: &PermGroup) -> Result<Vec<PermGroup>> {
    let n = g.degree();
    if n > MAX_REGULAR_DEGREE {
        return Err(Error::DegreeTooLarge(n));
    }
    let mut involutions: Vec<Permutation> = Vec::new();
    g.try_for_each_element(|p| {
        if fixed_point_free_involution(p) {
            involutions.push(p.clone());
        }
        ControlFlow::Continue(())
    })?;
    involutions.sort_unstable_by(|a, b| a.images().cmp(b.images()));

    struct State<'a> {
        pool: &'a [Permutation],
        pool_set: HashSet<&'a [u16]>,
        span: Vec<Permutation>, // non-identity elements of the current span
        gens: Vec<Permutation>,
        target: usize,
        found: Vec<Vec<Permutation>>,
    }

    fn extend(st: &mut State, start: usize) {
        if st.span.len() + 1 == st.target {
            st.found.push(st.gens.clone());
            return;
        }
        for idx in start..st.pool.len() {
            let c = &st.pool[idx];
            if !st.gens.iter().all(|s| s.compose(c) == c.compose(s)) {
                continue;
            }
            let mut extension = Vec::with_capacity(st.span.len());
            let mut ok = true;
            for s in &st.span {
                let prod = s.compose(c);
                // c must be the smallest new element of the doubled span,
                // and the whole coset must consist of involutions in G
                if prod.images() <= c.images() || !st.pool_set.contains(prod.images()) {
                    ok = false;
                    break;
                }
                extension.push(prod);
            }
            if !ok {
                continue;
            }
            let added = extension.len() + 1;
            st.span.push(c.clone());
            st.span.extend(extension);
            st.gens.push(c.clone());
            extend(st, idx + 1);
            st.gens.pop();
            st.span.truncate(st.span.len() - added);
        }
    }

    let mut st = State {
        pool: &involutions,
        pool_set: involutions.iter().map(|p| p.images()).collect(),
        span: Vec::new(),
        gens: Vec::new(),
        target: n,
        found: Vec::new(),
    };
    extend(&mut st, 0);

    st.found
        .into_iter()
        .map(|gens| {
            let sub = PermGroup::from_generators_with_base(g.field(), gens, &[])?;
            debug_assert_eq!(sub.order(), n as u128);
            Ok(sub)
        })
        .collect()
}

/// Some h in G with h A h^{-1} = B, or None when A and B are not conjugate
/// in G. A and B must be subgroups of G, and G must be enumerable.
pub fn conjugating_element(
    g: &PermGroup,
    a: &PermGroup,
    b: &PermGroup,
) -> Result<Option<Permutation>> {
    if !g.contains_group(a) || !g.contains_group(b) {
        return Err(Error::NotSubgroup);
    }
    if a.order() != b.order() {
        return Ok(None);
    }
    let mut found: Option<Permutation> = None;
    g.try_for_each_element(|h| {
        let hinv = h.inverse();
        if a.generators()
            .iter()
            .all(|x| b.contains(&h.compose(x).compose(&hinv)))
        {
            found = Some(h.clone());
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    })?;
    if let Some(h) = &found {
        debug_assert!(b
            .generators()
            .iter()
            .all(|y| a.contains(&h.inverse().compose(y).compose(h))));
    }
    Ok(found)
}
