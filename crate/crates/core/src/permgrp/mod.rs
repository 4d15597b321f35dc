//! Permutations of the 2^n coordinate places and the canonical subgroups:
//! translations x -> x+k, multiplications x -> ax, and Galois maps
//! x -> x^{2^j}. Group-order machinery lives in `chain`, the automorphism
//! search in `aut_search`, subgroup structure in `regular`.

mod aut_search;
mod chain;
mod regular;

pub use aut_search::full_automorphism_group;
pub use chain::{group_order, PermGroup};
pub use regular::{conjugating_element, regular_elem_abelian_subgroups};

use crate::error::{Error, Result};
use crate::gf2n::{FieldElement, FieldSpec};
use crate::lincode::BinaryCode;
use rand::Rng;
use std::fmt;

/// A bijection of the coordinate places {0, ..., 2^n - 1}. The field tags
/// which labeling of the places is in force; it is carried for provenance
/// and display, the permutation acts purely on indices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    field: FieldSpec,
    images: Vec<u16>,
}

fn is_bijection(images: &[u16]) -> bool {
    let mut seen = vec![false; images.len()];
    for &v in images {
        let v = v as usize;
        if v >= images.len() || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

impl Permutation {
    /// From an image array over a default-modulus field of matching size.
    pub fn new(images: Vec<u16>) -> Result<Self> {
        let n = images.len().trailing_zeros();
        if !images.len().is_power_of_two() || !(2..=16).contains(&n) {
            return Err(Error::BadParams(format!(
                "permutation size {} is not 2^n with 2 <= n <= 16",
                images.len()
            )));
        }
        Self::with_field(FieldSpec::new(n, None)?, images)
    }

    pub fn with_field(field: FieldSpec, images: Vec<u16>) -> Result<Self> {
        if images.len() != field.size() {
            return Err(Error::SizeMismatch {
                perm: images.len(),
                code: field.size(),
            });
        }
        if !is_bijection(&images) {
            return Err(Error::BadParams("images are not a bijection".into()));
        }
        Ok(Permutation { field, images })
    }

    /// Built from an element map, validated to be a bijection.
    pub fn from_fn(field: FieldSpec, f: impl Fn(FieldElement) -> FieldElement) -> Result<Self> {
        let images = field.elements().map(|x| f(x).bits() as u16).collect();
        Self::with_field(field, images)
    }

    pub fn identity(field: FieldSpec) -> Self {
        Permutation {
            field,
            images: (0..field.size() as u16).collect(),
        }
    }

    /// Uniform random permutation (Fisher-Yates); size must be a power of
    /// two so the default field labeling applies.
    pub fn random(size: usize, rng: &mut impl Rng) -> Self {
        let mut images: Vec<u16> = (0..size as u16).collect();
        for i in (1..size).rev() {
            images.swap(i, rng.gen_range(0..=i));
        }
        Permutation::new(images).expect("shuffled identity is a bijection")
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn size(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u16] {
        &self.images
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    /// (self . other)(x) = self(other(x)): `other` acts first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.size(), other.size(), "composition size mismatch");
        Permutation {
            field: self.field,
            images: other
                .images
                .iter()
                .map(|&x| self.images[x as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u16; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            images[y as usize] = x as u16;
        }
        Permutation {
            field: self.field,
            images,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(x, &y)| x == y as usize)
    }

    pub fn pow(&self, mut e: u64) -> Permutation {
        let mut acc = Permutation::identity(self.field);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = base.compose(&acc);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }

    /// Least m >= 1 with p^m = identity: lcm of the cycle lengths.
    pub fn element_order(&self) -> u128 {
        let mut seen = vec![false; self.images.len()];
        let mut order: u128 = 1;
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut len: u128 = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x] as usize;
                len += 1;
            }
            order = order / gcd_u128(order, len) * len;
        }
        order
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("perm n={}:", self.size());
        for &v in &self.images {
            s.push(' ');
            s.push_str(&v.to_string());
        }
        s
    }

    pub fn parse(text: &str, field: Option<FieldSpec>) -> Result<Self> {
        let text = text.trim();
        let rest = text
            .strip_prefix("perm n=")
            .ok_or_else(|| Error::Parse("permutation must start with 'perm n='".into()))?;
        let (count, images_part) = rest
            .split_once(':')
            .ok_or_else(|| Error::Parse("missing ':' after the size".into()))?;
        let count: usize = count
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad permutation size {count:?}")))?;
        let images: Vec<u16> = images_part
            .split_whitespace()
            .map(|w| {
                w.parse::<u16>()
                    .map_err(|_| Error::Parse(format!("bad image {w:?}")))
            })
            .collect::<Result<_>>()?;
        if images.len() != count {
            return Err(Error::Parse(format!(
                "declared {count} images, found {}",
                images.len()
            )));
        }
        match field {
            Some(f) => Self::with_field(f, images),
            None => Self::new(images),
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({})", self.to_text())
    }
}

fn gcd_u128(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd_u128(b, a % b)
    }
}

/// x -> x + k.
pub fn translation_perm(k: FieldElement) -> Permutation {
    Permutation::from_fn(k.field(), |x| x + k).expect("translation is a bijection")
}

/// x -> a x, a != 0.
pub fn mult_perm(a: FieldElement) -> Result<Permutation> {
    if a.is_zero() {
        return Err(Error::ZeroScalar);
    }
    Permutation::from_fn(a.field(), |x| a * x)
}

/// x -> x^{2^j}.
pub fn frobenius_perm(field: FieldSpec, j: i64) -> Permutation {
    Permutation::from_fn(field, |x| x.frob(j)).expect("frobenius is a bijection")
}

/// True iff relabeling each generator row by p lands in the row space.
pub fn is_automorphism(c: &BinaryCode, p: &Permutation) -> Result<bool> {
    if p.size() != c.length() {
        return Err(Error::SizeMismatch {
            perm: p.size(),
            code: c.length(),
        });
    }
    let permuted = c.permute_code(p)?;
    for row in permuted.rref_rows() {
        if !c.contains_word(row) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::{builtin_function, random_quadratic, Builtin};
    use crate::gf2n::make_field;
    use crate::lincode::build_code;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn code_of(n: u32, b: Builtin) -> BinaryCode {
        let f = make_field(n, None).unwrap();
        build_code(&builtin_function(f, &b).unwrap().evaluate())
    }

    #[test]
    fn translations_compose_additively() {
        let f = make_field(4, None).unwrap();
        assert!(translation_perm(f.zero()).is_identity());
        let a = f.elem(0x6);
        let b = f.elem(0xb);
        assert_eq!(
            translation_perm(a).compose(&translation_perm(b)),
            translation_perm(a + b)
        );
        assert_eq!(translation_perm(a).element_order(), 2);
    }

    #[test]
    fn mult_and_frobenius_orders() {
        let f = make_field(4, None).unwrap();
        assert!(mult_perm(f.one()).unwrap().is_identity());
        assert!(matches!(mult_perm(f.zero()), Err(Error::ZeroScalar)));
        let a = f.first_primitive();
        assert_eq!(mult_perm(a).unwrap().element_order(), 15);
        let f6 = make_field(6, None).unwrap();
        assert!(frobenius_perm(f6, 0).is_identity());
        assert_eq!(frobenius_perm(f6, 1).element_order(), 6);
        assert!(frobenius_perm(f6, 1).pow(6).is_identity());
    }

    #[test]
    fn compose_applies_right_factor_first() {
        let f = make_field(4, None).unwrap();
        let a = f.first_primitive();
        let m = mult_perm(a).unwrap();
        let t = translation_perm(f.one());
        // (m . t)(x) = a(x + 1)
        let mt = m.compose(&t);
        for x in f.elements() {
            assert_eq!(
                mt.apply(x.bits() as usize),
                (a * (x + f.one())).bits() as usize
            );
        }
        let p = Permutation::random(16, &mut ChaCha8Rng::seed_from_u64(3));
        assert!(p.compose(&p.inverse()).is_identity());
        assert!(p.inverse().compose(&p).is_identity());
    }

    #[test]
    fn canonical_maps_are_automorphisms_of_gold_codes() {
        let c4 = code_of(4, Builtin::Gold { r: 1 });
        let f4 = make_field(4, None).unwrap();
        for k in f4.elements() {
            assert!(is_automorphism(&c4, &translation_perm(k)).unwrap());
        }
        assert!(is_automorphism(&c4, &mult_perm(f4.first_primitive()).unwrap()).unwrap());
        let c5 = code_of(5, Builtin::Gold { r: 1 });
        let f5 = make_field(5, None).unwrap();
        assert!(is_automorphism(&c5, &frobenius_perm(f5, 1)).unwrap());
        // a bare transposition is not
        let mut images: Vec<u16> = (0..16).collect();
        images.swap(0, 1);
        assert!(!is_automorphism(&c4, &Permutation::new(images).unwrap()).unwrap());
        let wrong = Permutation::identity(f5);
        assert!(matches!(
            is_automorphism(&c4, &wrong),
            Err(Error::SizeMismatch { perm: 32, code: 16 })
        ));
    }

    #[test]
    fn translations_fix_random_quadratic_codes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f = make_field(5, None).unwrap();
        for _ in 0..3 {
            let c = build_code(&random_quadratic(f, &mut rng).evaluate());
            for k in f.elements() {
                assert!(is_automorphism(&c, &translation_perm(k)).unwrap());
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let p = Permutation::random(16, &mut ChaCha8Rng::seed_from_u64(5));
        let back = Permutation::parse(&p.to_text(), None).unwrap();
        assert_eq!(p, back);
        assert!(Permutation::parse("perm n=3: 0 1 2", None).is_err()); // not 2^n
        assert!(Permutation::parse("perm n=4: 0 1 2", None).is_err()); // count off
        assert!(Permutation::parse("perm n=4: 0 1 2 2", None).is_err()); // not bijective
        assert!(Permutation::parse("0 1 2 3", None).is_err());
    }

    #[test]
    fn element_orders_by_cycle_lcm() {
        let f = make_field(4, None).unwrap();
        assert_eq!(Permutation::identity(f).element_order(), 1);
        // 2-cycle and 3-cycle and 5-cycle on disjoint points: order 30
        let mut images: Vec<u16> = (0..16).collect();
        images.swap(0, 1);
        let [a, b, c] = [2u16, 3, 4];
        images[a as usize] = b;
        images[b as usize] = c;
        images[c as usize] = a;
        let cyc5 = [5u16, 6, 7, 8, 9];
        for i in 0..5 {
            images[cyc5[i] as usize] = cyc5[(i + 1) % 5];
        }
        assert_eq!(Permutation::new(images).unwrap().element_order(), 30);
    }
}
