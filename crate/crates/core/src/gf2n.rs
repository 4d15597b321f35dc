//! Arithmetic in K = GF(2^n) for 2 <= n <= 16.
//!
//! Elements are polynomial-basis bit vectors packed in a `u32` (bit i is the
//! coefficient of u^i, where u is the class of x modulo the field modulus).
//! Addition is XOR; multiplication is a carry-less product reduced modulo the
//! modulus. The default modulus table contains primitive polynomials, so `u`
//! itself generates the multiplicative group for every default field.

use crate::error::{Error, Result};
use std::fmt;

pub const MIN_DEGREE: u32 = 2;
pub const MAX_DEGREE: u32 = 16;

/// Primitive polynomials used when no modulus is supplied, indexed by n.
/// Entry n encodes the full polynomial including the leading term, e.g.
/// n = 4 maps to 0x13 = x^4 + x + 1.
const DEFAULT_MODULI: [(u32, u32); 15] = [
    (2, 0x7),
    (3, 0xB),
    (4, 0x13),
    (5, 0x25),
    (6, 0x5B),
    (7, 0x83),
    (8, 0x11D),
    (9, 0x211),
    (10, 0x409),
    (11, 0x805),
    (12, 0x1053),
    (13, 0x201B),
    (14, 0x4443),
    (15, 0x8003),
    (16, 0x1100B),
];

pub fn default_modulus(n: u32) -> Option<u32> {
    DEFAULT_MODULI
        .iter()
        .find(|&&(deg, _)| deg == n)
        .map(|&(_, m)| m)
}

fn poly_degree(p: u64) -> i32 {
    63 - p.leading_zeros() as i32
}

/// Remainder of a modulo m as polynomials over GF(2).
fn poly_rem(mut a: u64, m: u64) -> u64 {
    let dm = poly_degree(m);
    while a != 0 {
        let da = poly_degree(a);
        if da < dm {
            break;
        }
        a ^= m << (da - dm);
    }
    a
}

fn clmul(a: u32, b: u32) -> u64 {
    let a = a as u64;
    let mut b = b as u64;
    let mut acc = 0u64;
    while b != 0 {
        acc ^= a << b.trailing_zeros();
        b &= b - 1;
    }
    acc
}

/// Trial division by every polynomial of degree 1..=n/2. Fine for n <= 16.
fn is_irreducible(m: u32, n: u32) -> bool {
    for d in 1..=(n / 2) {
        for q in (1u64 << d)..(1u64 << (d + 1)) {
            if poly_rem(m as u64, q) == 0 {
                return false;
            }
        }
    }
    true
}

/// Prime factorization by trial division, as (prime, multiplicity) pairs.
pub fn factor(mut x: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= x {
        if x.is_multiple_of(p) {
            let mut e = 0;
            while x.is_multiple_of(p) {
                x /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if x > 1 {
        out.push((x, 1));
    }
    out
}

/// A validated description of GF(2^n): degree plus irreducible modulus.
/// Cheap to copy; equality ignores the optional generator hint.
#[derive(Clone, Copy, Debug)]
pub struct FieldSpec {
    n: u32,
    modulus: u32,
    generator_hint: Option<u32>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.modulus == other.modulus
    }
}
impl Eq for FieldSpec {}
impl std::hash::Hash for FieldSpec {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.modulus.hash(state);
    }
}

/// Validates and returns a field description; `modulus = None` selects the
/// built-in primitive default for n.
pub fn make_field(n: u32, modulus: Option<u32>) -> Result<FieldSpec> {
    FieldSpec::new(n, modulus)
}

impl FieldSpec {
    pub fn new(n: u32, modulus: Option<u32>) -> Result<Self> {
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&n) {
            return Err(Error::UnsupportedDegree(n));
        }
        let m = match modulus {
            Some(m) => m,
            None => default_modulus(n).expect("table covers 2..=16"),
        };
        if poly_degree(m as u64) != n as i32 {
            return Err(Error::WrongModulusDegree { modulus: m, n });
        }
        if !is_irreducible(m, n) {
            return Err(Error::ReducibleModulus(m));
        }
        Ok(FieldSpec {
            n,
            modulus: m,
            generator_hint: None,
        })
    }

    pub fn with_generator_hint(mut self, hint: u32) -> Self {
        self.generator_hint = Some(hint);
        self
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Number of field elements, 2^n.
    pub fn size(&self) -> usize {
        1usize << self.n
    }

    /// Multiplicative group order, 2^n - 1.
    pub fn group_order(&self) -> u64 {
        (1u64 << self.n) - 1
    }

    pub fn elem(&self, bits: u32) -> FieldElement {
        assert!(
            (bits as usize) < self.size(),
            "element {bits:#x} out of range for GF(2^{})",
            self.n
        );
        FieldElement { bits, field: *self }
    }

    pub fn zero(&self) -> FieldElement {
        self.elem(0)
    }

    pub fn one(&self) -> FieldElement {
        self.elem(1)
    }

    /// The class of x, written u throughout.
    pub fn u(&self) -> FieldElement {
        self.elem(2)
    }

    /// b_i = u^{i-1} for 1 <= i <= n: the polynomial basis used by the code
    /// generator matrices.
    pub fn basis(&self, i: u32) -> FieldElement {
        assert!(i >= 1 && i <= self.n);
        self.elem(1 << (i - 1))
    }

    /// All elements in the canonical (integer) order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        let f = *self;
        (0..f.size() as u32).map(move |b| f.elem(b))
    }

    /// The index-2 subfield L = GF(2^k) when n = 2k.
    pub fn subfield(&self) -> Result<SubfieldSpec> {
        if !self.n.is_multiple_of(2) {
            return Err(Error::OddDegree);
        }
        Ok(SubfieldSpec {
            parent: *self,
            k: self.n / 2,
        })
    }

    /// Smallest primitive element in integer order (honors the hint if it
    /// checks out).
    pub fn first_primitive(&self) -> FieldElement {
        if let Some(h) = self.generator_hint {
            let e = self.elem(h);
            if e.is_primitive() {
                return e;
            }
        }
        self.elements()
            .find(|e| e.is_primitive())
            .expect("every finite field has a primitive element")
    }

    /// Parses the designation "gf2e<n>[:0x<modulus-hex>]".
    pub fn parse(s: &str) -> Result<Self> {
        let rest = s.strip_prefix("gf2e").ok_or_else(|| {
            Error::Parse(format!("field designation must start with gf2e: {s:?}"))
        })?;
        let (n_str, mod_str) = match rest.split_once(':') {
            Some((a, b)) => (a, Some(b)),
            None => (rest, None),
        };
        let n: u32 = n_str
            .parse()
            .map_err(|_| Error::Parse(format!("bad field degree in {s:?}")))?;
        let modulus = match mod_str {
            None => None,
            Some(h) => {
                let h = h
                    .strip_prefix("0x")
                    .or_else(|| h.strip_prefix("0X"))
                    .ok_or_else(|| Error::Parse(format!("modulus must be 0x-hex in {s:?}")))?;
                Some(
                    u32::from_str_radix(h, 16)
                        .map_err(|_| Error::Parse(format!("bad modulus hex in {s:?}")))?,
                )
            }
        };
        FieldSpec::new(n, modulus)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gf2e{}:0x{:x}", self.n, self.modulus)
    }
}

/// An element of a specific field. Copyable; arithmetic panics on field
/// mixing via the checked methods' `Result` or the operators' assertions.
#[derive(Clone, Copy, Debug)]
pub struct FieldElement {
    bits: u32,
    field: FieldSpec,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.bits == other.bits && self.field == other.field
    }
}
impl Eq for FieldElement {}
impl std::hash::Hash for FieldElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.bits.hash(state);
        self.field.hash(state);
    }
}

impl FieldElement {
    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    fn reduce(&self, prod: u64) -> FieldElement {
        FieldElement {
            bits: poly_rem(prod, self.field.modulus as u64) as u32,
            field: self.field,
        }
    }

    /// Carry-less product reduced by the field modulus. Fallible (the
    /// operands must share a field), so deliberately not `ops::Mul`.
    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, rhs: FieldElement) -> Result<FieldElement> {
        if self.field != rhs.field {
            return Err(Error::FieldMismatch);
        }
        Ok(self.reduce(clmul(self.bits, rhs.bits)))
    }

    pub fn square(self) -> FieldElement {
        self.reduce(clmul(self.bits, self.bits))
    }

    /// x^{2^j}; j is taken modulo n, negatives allowed.
    pub fn frob(self, j: i64) -> FieldElement {
        let n = self.field.n as i64;
        let j = j.rem_euclid(n);
        let mut r = self;
        for _ in 0..j {
            r = r.square();
        }
        r
    }

    /// Square-and-multiply; negative exponents invert first (error on zero).
    pub fn pow(self, e: i64) -> Result<FieldElement> {
        if e < 0 {
            return self.inverse()?.pow(-e);
        }
        let mut base = self;
        let mut e = e as u64;
        let mut acc = self.field.one();
        while e != 0 {
            if e & 1 == 1 {
                acc = acc.mul(base)?;
            }
            base = base.square();
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn inverse(self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::ZeroInverse);
        }
        self.pow(self.field.group_order() as i64 - 1)
    }

    /// Absolute trace Tr: K -> GF(2), returned as 0 or 1.
    pub fn trace(self) -> u8 {
        let mut acc = self;
        let mut p = self;
        for _ in 1..self.field.n {
            p = p.square();
            acc += p;
        }
        debug_assert!(acc.bits <= 1, "trace landed outside GF(2)");
        acc.bits as u8
    }

    /// Relative trace T2(a) = a + a^{2^k} onto the index-2 subfield.
    pub fn rel_trace(self, sub: SubfieldSpec) -> Result<FieldElement> {
        if sub.parent != self.field {
            return Err(Error::FieldMismatch);
        }
        let r = self + self.frob(sub.k as i64);
        debug_assert_eq!(r.frob(sub.k as i64), r, "relative trace must land in L");
        Ok(r)
    }

    /// Exact multiplicative order; None for zero.
    pub fn mult_order(self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let full = self.field.group_order();
        let mut d = full;
        for (p, _) in factor(full) {
            while d.is_multiple_of(p) && self.pow((d / p) as i64).unwrap() == self.field.one() {
                d /= p;
            }
        }
        Some(d)
    }

    /// True iff the multiplicative order is 2^n - 1, decided through the
    /// prime factorization of the group order.
    pub fn is_primitive(self) -> bool {
        if self.is_zero() {
            return false;
        }
        let ord = self.field.group_order();
        factor(ord)
            .iter()
            .all(|&(p, _)| self.pow((ord / p) as i64).unwrap() != self.field.one())
    }

    /// Membership in L: a^{2^k} = a.
    pub fn in_subfield(self, sub: SubfieldSpec) -> Result<bool> {
        if sub.parent != self.field {
            return Err(Error::FieldMismatch);
        }
        Ok(self.frob(sub.k as i64) == self)
    }
}

impl std::ops::Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        assert_eq!(self.field, rhs.field, "field mismatch in addition");
        FieldElement {
            bits: self.bits ^ rhs.bits,
            field: self.field,
        }
    }
}

impl std::ops::AddAssign for FieldElement {
    fn add_assign(&mut self, rhs: FieldElement) {
        *self = *self + rhs;
    }
}

impl std::ops::Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        FieldElement::mul(self, rhs).expect("field mismatch in multiplication")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{:x}", self.bits)
    }
}

/// The subfield L = GF(2^k) of a parent GF(2^{2k}).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubfieldSpec {
    parent: FieldSpec,
    k: u32,
}

impl SubfieldSpec {
    pub fn parent(&self) -> FieldSpec {
        self.parent
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn size(&self) -> usize {
        1usize << self.k
    }

    /// Elements of the parent field lying in L, canonical order.
    pub fn elements(&self) -> Vec<FieldElement> {
        let s = *self;
        self.parent
            .elements()
            .filter(|e| e.in_subfield(s).unwrap())
            .collect()
    }

    /// A generator of L* (an element of order 2^k - 1).
    pub fn generator(&self) -> FieldElement {
        let b = self.parent.first_primitive();
        let e = self.parent.group_order() / ((1u64 << self.k) - 1);
        b.pow(e as i64).unwrap()
    }
}
